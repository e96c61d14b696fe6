// Shared test scaffolding: the recorded service fixture and a scripted
// Api double that replays it while logging every call it receives.

import fixtureRaw from "./fixtures/flow.json";
import { ApiFault, type Api } from "../src/api";
import type {
  AnalysisDoc,
  AnalysisRequest,
  CampaignDoc,
  CampaignSummary,
  DesignRequest,
  NewCampaignRequest,
  PhaseCreated,
  PutResponsesResult,
  ResponseEntry,
  SurfaceDoc,
} from "../src/types";

interface RecordedError {
  status: number;
  body: { code: string; message: string; detail: unknown };
}

export interface Fixture {
  campaign_created: CampaignDoc;
  phase_created: PhaseCreated;
  campaign_issued: CampaignDoc;
  entries: ResponseEntry[];
  put_result: PutResponsesResult;
  campaign_filled: CampaignDoc;
  analysis: AnalysisDoc;
  campaign_analyzed: CampaignDoc;
  surface: SurfaceDoc;
  sealed_put: RecordedError;
  phase1_created: PhaseCreated;
  phase1_entries: ResponseEntry[];
  rank_deficient: RecordedError;
  analysis_fo: AnalysisDoc;
  surface_fo: SurfaceDoc;
  campaign_final: CampaignDoc;
  summaries: CampaignSummary[];
}

export const fixture = fixtureRaw as unknown as Fixture;

/** Deep-copy a fixture document so a test cannot contaminate the next. */
export function copy<T>(doc: T): T {
  return JSON.parse(JSON.stringify(doc)) as T;
}

export function faultFrom(recorded: RecordedError): ApiFault {
  return new ApiFault(
    recorded.status,
    recorded.body.code,
    recorded.body.message,
    recorded.body.detail,
  );
}

interface Call {
  method: string;
  args: unknown[];
}

/**
 * An Api whose answers are the recorded documents. Tests set the current
 * campaign document and can arm one-shot failures; the call log is the
 * assertion surface for "what went over the wire".
 */
export class FakeApi implements Api {
  calls: Call[] = [];
  summaries: CampaignSummary[] = [];
  campaign: CampaignDoc = copy(fixture.campaign_created);
  phaseCreated: PhaseCreated = copy(fixture.phase_created);
  putResult: PutResponsesResult = copy(fixture.put_result);
  analysisDoc: AnalysisDoc = copy(fixture.analysis);
  surfaceDoc: SurfaceDoc = copy(fixture.surface);
  nextPutFault: ApiFault | null = null;
  nextAnalysisFault: ApiFault | null = null;

  private log(method: string, ...args: unknown[]): void {
    this.calls.push({ method, args });
  }

  callsTo(method: string): Call[] {
    return this.calls.filter((c) => c.method === method);
  }

  listCampaigns(): Promise<CampaignSummary[]> {
    this.log("listCampaigns");
    return Promise.resolve(copy(this.summaries));
  }

  createCampaign(input: NewCampaignRequest): Promise<CampaignDoc> {
    this.log("createCampaign", input);
    return Promise.resolve(copy(this.campaign));
  }

  getCampaign(id: string): Promise<CampaignDoc> {
    this.log("getCampaign", id);
    return Promise.resolve(copy(this.campaign));
  }

  addPhase(id: string, design: DesignRequest): Promise<PhaseCreated> {
    this.log("addPhase", id, design);
    return Promise.resolve(copy(this.phaseCreated));
  }

  worksheetUrl(id: string, phase: number): string {
    return `/campaigns/${id}/phases/${phase}/worksheet.csv`;
  }

  putResponses(
    id: string,
    phase: number,
    entries: ResponseEntry[],
  ): Promise<PutResponsesResult> {
    this.log("putResponses", id, phase, entries);
    if (this.nextPutFault) {
      const fault = this.nextPutFault;
      this.nextPutFault = null;
      return Promise.reject(fault);
    }
    return Promise.resolve(copy(this.putResult));
  }

  runAnalysis(
    id: string,
    phase: number,
    options: AnalysisRequest,
  ): Promise<AnalysisDoc> {
    this.log("runAnalysis", id, phase, options);
    if (this.nextAnalysisFault) {
      const fault = this.nextAnalysisFault;
      this.nextAnalysisFault = null;
      return Promise.reject(fault);
    }
    return Promise.resolve(copy(this.analysisDoc));
  }

  getSurface(
    id: string,
    phase: number,
    params: { x?: string; y?: string; grid?: number; levels?: number },
  ): Promise<SurfaceDoc> {
    this.log("getSurface", id, phase, params);
    return Promise.resolve(copy(this.surfaceDoc));
  }
}

/** Let queued promise callbacks (renders after awaits) run. */
export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
