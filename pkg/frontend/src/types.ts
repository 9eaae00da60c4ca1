/** Wire shapes of the what-if service; field names match the JSON payloads. */

export interface AssetSummary {
  mean: number;
  sd: number;
}

export interface ReportPayload {
  variables: string[];
  mean: number[];
  covariance: number[][];
  assets: Record<string, AssetSummary>;
  riskless_rate: number;
  tangency_weights: Record<string, number> | null;
  current_weights: Record<string, number>;
}

export type EvidenceEntry =
  | { variable: string; kind: 'normal'; mean: number; sd: number; note: string }
  | { variable: string; kind: 'observation'; value: number; note: string };

export type EvidenceInput =
  | { variable: string; kind: 'normal'; mean: number; sd: number; note?: string }
  | { variable: string; kind: 'observation'; value: number; note?: string };

export interface SessionPayload {
  session_id: string;
  model_id: string;
  model_hash: string;
  evidence_count: number;
  state_hash: string;
  created_at: string;
  evidence: EvidenceEntry[];
  report: ReportPayload;
  preview?: boolean;
}

export interface ModelListPayload {
  models: string[];
}

export interface ModelInfo {
  id: string;
  model_hash: string;
  model: {
    format_version: number;
    variables: string[];
    beliefs: unknown[];
    portfolio: {
      variable: string;
      stocks: string[];
      weights: number[];
      factor_models: unknown[];
    };
  };
}
