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
} from "./types";

/** A service error, carrying the library's error code and detail payload. */
export class ApiFault extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
  }
}

async function request<T>(method: string, path: string, body?: unknown): Promise<T> {
  let response: Response;
  try {
    response = await fetch(path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  } catch {
    throw new ApiFault(0, "Unreachable", "the service is not responding");
  }
  if (!response.ok) {
    let code = "HttpError";
    let message = `${response.status} ${response.statusText}`;
    let detail: unknown = null;
    try {
      const parsed = await response.json();
      if (parsed && typeof parsed.code === "string") {
        code = parsed.code;
        message = parsed.message ?? message;
        detail = parsed.detail ?? null;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiFault(response.status, code, message, detail);
  }
  return (await response.json()) as T;
}

export const api = {
  listCampaigns(): Promise<CampaignSummary[]> {
    return request("GET", "/campaigns");
  },

  createCampaign(input: NewCampaignRequest): Promise<CampaignDoc> {
    return request("POST", "/campaigns", input);
  },

  getCampaign(id: string): Promise<CampaignDoc> {
    return request("GET", `/campaigns/${encodeURIComponent(id)}`);
  },

  addPhase(id: string, design: DesignRequest): Promise<PhaseCreated> {
    return request("POST", `/campaigns/${encodeURIComponent(id)}/phases`, design);
  },

  worksheetUrl(id: string, phase: number): string {
    return `/campaigns/${encodeURIComponent(id)}/phases/${phase}/worksheet.csv`;
  },

  putResponses(
    id: string,
    phase: number,
    entries: ResponseEntry[],
  ): Promise<PutResponsesResult> {
    return request(
      "PUT",
      `/campaigns/${encodeURIComponent(id)}/phases/${phase}/responses`,
      entries,
    );
  },

  runAnalysis(id: string, phase: number, options: AnalysisRequest): Promise<AnalysisDoc> {
    return request(
      "POST",
      `/campaigns/${encodeURIComponent(id)}/phases/${phase}/analysis`,
      options,
    );
  },

  getSurface(
    id: string,
    phase: number,
    params: { x?: string; y?: string; grid?: number; levels?: number },
  ): Promise<SurfaceDoc> {
    const query = new URLSearchParams();
    if (params.x) query.set("x", params.x);
    if (params.y) query.set("y", params.y);
    if (params.grid) query.set("grid", String(params.grid));
    if (params.levels) query.set("levels", String(params.levels));
    const suffix = query.toString() ? `?${query.toString()}` : "";
    return request(
      "GET",
      `/campaigns/${encodeURIComponent(id)}/phases/${phase}/surface${suffix}`,
    );
  },
};

export type Api = typeof api;
