/** Payload types mirroring the evaluation service's /v1 JSON responses. */

export type NodeKind =
  | "claim"
  | "argument_step"
  | "evidence"
  | "defeater"
  | "subcase_note"
  | "comment";

export type LinkKind = "logical" | "embedded" | "attack";
export type TrafficColor = "red" | "amber" | "green";
export type InOutLabel = "in" | "out" | "undecided";
export type Rule = "product" | "sum-of-doubts";
export type ViewMode = "ignore_defeaters" | "apply_defeaters";

export interface GraphNode {
  id: string;
  kind: NodeKind;
  block?: string;
  narrative?: string;
  role_flags?: string[];
  severity?: string;
  resolution?: string;
  [extra: string]: unknown;
}

export interface GraphLink {
  source: string;
  target: string;
  kind: LinkKind;
}

export interface GraphPayload {
  top_claim: string;
  nodes: GraphNode[];
  links: GraphLink[];
}

export interface NodeValue {
  value: number;
  raw: number;
  origin: string;
  note: string;
  pre_override: number | null;
  color: TrafficColor;
}

export interface StructureSection {
  logical_validity: boolean;
  case_label: string;
  fully_valid: boolean;
  sound: boolean;
  violations: { node: string; rule: string; message: string }[];
  unsupported_claims: string[];
  inductive_steps: string[];
  active_defeaters: string[];
}

export interface ValuationPayload {
  session: string;
  params: { rule: Rule; view: ViewMode; thresholds: [number, TrafficColor][] };
  top_claim: string;
  values: Record<string, NodeValue>;
  labels: Record<string, InOutLabel>;
  structure: StructureSection;
  severity_gate: "pass" | "fail";
  delta?: string[];
}

export interface SentencingItem {
  key: string;
  text: string;
  status: "satisfied" | "unsupported" | "judgment";
  detail: string;
}

export interface SentencingSkeleton {
  title: string;
  verdict_heading: string;
  verdict: string;
  case_label: string;
  severity_gate: string;
  items: SentencingItem[];
}

export interface ReportPayload {
  [section: string]: unknown;
  sentencing: SentencingSkeleton;
}
