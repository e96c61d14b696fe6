// Service payload shapes. These mirror the HTTP API documents exactly;
// the workbench never derives numbers of its own, it only displays these.

export interface FactorDoc {
  name: string;
  low: number;
  high: number;
  unit_label: string;
}

export interface CampaignSummary {
  id: string;
  name: string;
  response_name: string;
  goal: string;
  target_value: number | null;
  n_phases: number;
  created: string;
  modified: string;
}

export interface DesignPointDoc {
  coded: number[];
  point_type: string;
  block: number;
  std_order: number;
  run_order: number;
}

export interface DesignDoc {
  factors: FactorDoc[];
  points: DesignPointDoc[];
  alpha: number | null;
  n_center_per_block: number;
  replicates: number;
  seed: number;
}

export interface BasisDoc {
  k: number;
  include_twi: boolean;
  include_pq: boolean;
  include_block: boolean;
}

export interface FittedDoc {
  basis: BasisDoc;
  coefficients: number[];
  std_errors: number[];
  residuals: number[];
  sigma2: number;
  df_residual: number;
  r_squared: number;
  term_names: string[];
  design_ref: string;
}

export interface AnovaRowDoc {
  source: string;
  ss: number;
  df: number;
  ms: number;
  f_stat: number | null;
  p_value: number | null;
}

export interface CoefficientTestDoc {
  term: string;
  estimate: number;
  std_error: number;
  t_stat: number | null;
  p_value: number;
}

export interface StationaryDoc {
  coded: number[] | null;
  predicted: number | null;
  eigenvalues: number[];
  eigenvectors: number[][];
  nature: string;
}

export interface PathStepDoc {
  radius: number;
  coded_point: number[];
  predicted: number;
  extrapolated: boolean;
}

export interface PathDoc {
  goal: string;
  origin: number[];
  steps: PathStepDoc[];
}

export interface AnalysisDoc {
  fitted: FittedDoc;
  anova: { rows: AnovaRowDoc[]; ss_total: number };
  // null when the fit leaves no residual degrees of freedom
  tests: CoefficientTestDoc[] | null;
  stationary: StationaryDoc | null;
  path: PathDoc | null;
  path_note: string;
}

export interface PhaseDoc {
  design: DesignDoc;
  responses: (number | null)[];
  worksheet_status: string;
  decision_note: string;
  analysis: AnalysisDoc | null;
}

export interface CampaignDoc {
  id: string;
  name: string;
  factors: FactorDoc[];
  response_name: string;
  goal: string;
  target_value: number | null;
  created: string;
  modified: string;
  phases: PhaseDoc[];
}

export interface WorksheetRow {
  run_order: number;
  std_order: number;
  block: number;
  settings: Record<string, number>;
  response: number | null;
}

export interface PhaseCreated {
  phase: number;
  n_runs: number;
  alpha: number | null;
  worksheet: WorksheetRow[];
}

export interface ResponseEntry {
  std_order: number;
  block: number;
  value: number;
}

export interface PutResponsesResult {
  phase: number;
  worksheet_status: string;
  filled: number;
  runs: number;
}

export interface SurfaceDoc {
  x: string;
  y: string;
  x_range: [number, number];
  y_range: [number, number];
  xs: number[];
  ys: number[];
  z: number[][];
  contours: {
    levels: number[];
    // per level, a list of polylines, each a list of [x, y] pairs
    polylines: number[][][][];
  };
}

export interface DesignRequest {
  type: string;
  alpha?: string | number;
  centers?: number;
  replicates?: number;
  blocks?: number;
  seed?: number;
}

export interface NewCampaignRequest {
  name: string;
  factors: FactorDoc[];
  response_name: string;
  goal: string;
  target_value?: number;
}

export interface AnalysisRequest {
  terms?: string[];
  radii?: number[];
}
