import type { Api } from "./api";
import type {
  AnalysisDoc,
  CampaignDoc,
  CampaignSummary,
  FactorDoc,
  PhaseCreated,
  SurfaceDoc,
} from "./types";

export type ScreenName =
  | "setup"
  | "design"
  | "entry"
  | "analysis"
  | "surface"
  | "decision";

/** Pre-filled campaign form handed over by the decision screen. */
export interface FollowupPrefill {
  name: string;
  factors: FactorDoc[];
  response_name: string;
  goal: string;
  target_value: number | null;
  note: string;
}

export interface ViewState {
  campaigns: CampaignSummary[];
  campaign: CampaignDoc | null;
  phase: number;
  screen: ScreenName;
  // analysis controls
  terms: { twi: boolean; pq: boolean; block: boolean };
  threshold: number;
  analysis: AnalysisDoc | null;
  inestimable: string[];
  // surface controls
  surface: SurfaceDoc | null;
  surfaceParams: { x: string; y: string; grid: number; levels: number };
  // design screen keeps the creation payload so the preview can show it
  lastPhaseCreated: PhaseCreated | null;
  followup: FollowupPrefill | null;
  error: string | null;
  notice: string | null;
}

export interface AppContext {
  state: ViewState;
  api: Api;
  render(): void;
  navigate(screen: ScreenName): void;
  /** Map a thrown ApiFault (or anything else) to the inline error slot. */
  showError(fault: unknown): void;
  refreshCampaign(): Promise<void>;
}

export function initialState(): ViewState {
  return {
    campaigns: [],
    campaign: null,
    phase: 0,
    screen: "setup",
    terms: { twi: true, pq: true, block: true },
    threshold: 0.05,
    analysis: null,
    inestimable: [],
    surface: null,
    surfaceParams: { x: "", y: "", grid: 41, levels: 10 },
    lastPhaseCreated: null,
    followup: null,
    error: null,
    notice: null,
  };
}
