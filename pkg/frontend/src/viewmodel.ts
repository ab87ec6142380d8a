/** View model for the what-if canvas.
 *
 * Every displayed number originates from the latest service response; this
 * module stores and selects, it never recomputes engine math.  Overrides and
 * undo round-trip through the service so the restored frame is exactly what
 * the engine says it is.
 */

import { CaseServiceClient, ValuationParams } from "./api.js";
import type {
  GraphLink,
  GraphNode,
  GraphPayload,
  InOutLabel,
  NodeValue,
  ReportPayload,
  Rule,
  SentencingItem,
  TrafficColor,
  ValuationPayload,
  ViewMode,
} from "./types.js";

export interface LayerToggles {
  defeaters: boolean;
  embedded: boolean;
  subcases: boolean;
}

export interface Frame {
  values: Record<string, NodeValue>;
  labels: Record<string, InOutLabel>;
}

interface UndoEntry {
  node: string;
  hadOverride: boolean;
  previousValue: number | null;
  previousFrame: Frame;
}

export class CaseViewModel {
  sessionId = "";
  graph: GraphPayload = { top_claim: "", nodes: [], links: [] };
  valuation: ValuationPayload | null = null;
  report: ReportPayload | null = null;
  rule: Rule = "product";
  view: ViewMode = "ignore_defeaters";
  thresholds = "";
  toggles: LayerToggles = { defeaters: true, embedded: true, subcases: true };
  judgments: Record<string, string> = {};
  verdict = "";
  private undoStack: UndoEntry[] = [];

  constructor(private readonly client: CaseServiceClient) {}

  private params(): ValuationParams {
    const params: ValuationParams = { rule: this.rule, view: this.view };
    if (this.thresholds) params.thresholds = this.thresholds;
    return params;
  }

  async load(documentText: string): Promise<void> {
    this.sessionId = await this.client.createSession(documentText);
    this.graph = await this.client.getGraph(this.sessionId);
    await this.refresh();
  }

  async refresh(): Promise<void> {
    this.valuation = await this.client.getValuation(this.sessionId, this.params());
  }

  async setRule(rule: Rule): Promise<void> {
    this.rule = rule;
    await this.refresh();
  }

  async setView(view: ViewMode): Promise<void> {
    this.view = view;
    await this.refresh();
  }

  async setThresholds(thresholds: string): Promise<void> {
    this.thresholds = thresholds;
    await this.refresh();
  }

  toggleLayer(layer: keyof LayerToggles): void {
    // pure client-side visibility; the document and valuation are untouched
    this.toggles[layer] = !this.toggles[layer];
  }

  /** The only source of displayed numbers: the latest service frame. */
  frame(): Frame {
    if (!this.valuation) return { values: {}, labels: {} };
    return { values: this.valuation.values, labels: this.valuation.labels };
  }

  displayedValue(nodeId: string): NodeValue | undefined {
    return this.valuation?.values[nodeId];
  }

  displayedColor(nodeId: string): TrafficColor | undefined {
    return this.valuation?.values[nodeId]?.color;
  }

  label(nodeId: string): InOutLabel | undefined {
    return this.valuation?.labels[nodeId];
  }

  topValue(): NodeValue | undefined {
    return this.valuation ? this.valuation.values[this.valuation.top_claim] : undefined;
  }

  /** Nodes visible under the current layer toggles. */
  visibleNodes(): GraphNode[] {
    return this.graph.nodes.filter((node) => {
      if (node.kind === "defeater" && !this.toggles.defeaters) return false;
      if (node.kind === "subcase_note" && !this.toggles.subcases) return false;
      return true;
    });
  }

  visibleLinks(): GraphLink[] {
    const visible = new Set(this.visibleNodes().map((n) => n.id));
    return this.graph.links.filter((link) => {
      if (link.kind === "embedded" && !this.toggles.embedded) return false;
      return visible.has(link.source) && visible.has(link.target);
    });
  }

  /** Slider action: install an override and repaint from the response. */
  async slideOverride(nodeId: string, value: number, note = "slider"): Promise<string[]> {
    const current = this.displayedValue(nodeId);
    const entry: UndoEntry = {
      node: nodeId,
      hadOverride: current?.origin === "manual_override",
      previousValue: current?.origin === "manual_override" ? current.value : null,
      previousFrame: this.frame(),
    };
    this.valuation = await this.client.putOverride(
      this.sessionId, nodeId, value, note, this.params(),
    );
    this.undoStack.push(entry);
    return this.valuation.delta ?? [];
  }

  /** Undo restores via the service (delete, or re-put the earlier override). */
  async undo(): Promise<boolean> {
    const entry = this.undoStack.pop();
    if (!entry) return false;
    if (entry.hadOverride && entry.previousValue !== null) {
      this.valuation = await this.client.putOverride(
        this.sessionId, entry.node, entry.previousValue, "undo", this.params(),
      );
    } else {
      this.valuation = await this.client.deleteOverride(
        this.sessionId, entry.node, this.params(),
      );
    }
    return true;
  }

  canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  async loadReport(): Promise<void> {
    this.report = await this.client.getReport(this.sessionId, this.params());
  }

  checklistItems(): SentencingItem[] {
    return this.report?.sentencing.items ?? [];
  }

  setJudgment(key: string, text: string): void {
    this.judgments[key] = text;
  }

  /** Text export of the checklist: the service skeleton plus human judgments. */
  exportSentencing(): string {
    const skeleton = this.report?.sentencing;
    if (!skeleton) return "";
    const marks = { satisfied: "[x]", unsupported: "[!]", judgment: "[ ]" } as const;
    const lines = [skeleton.verdict_heading, ""];
    lines.push(`[case label: ${skeleton.case_label}; severity gate: ${skeleton.severity_gate}]`, "");
    lines.push("I believe my judgment of this case is sound and valid because ...");
    for (const item of skeleton.items) {
      lines.push(`  ${marks[item.status]} ${item.text} ...`);
      if (item.detail) lines.push(`        engine: ${item.detail}`);
      const judgment = this.judgments[item.key];
      if (judgment) lines.push(`        judgment: ${judgment}`);
    }
    lines.push("", `judgment: ${this.verdict || "____________________________________________"}`);
    return lines.join("\n") + "\n";
  }
}
