/** End-to-end view-model behavior against recorded engine payloads. */

import { beforeEach, describe, expect, it } from "vitest";

import { CaseServiceClient } from "../src/api.js";
import { buildScene, formatValue } from "../src/render.js";
import { CaseViewModel, Frame } from "../src/viewmodel.js";
import type { GraphPayload, ReportPayload, ValuationPayload } from "../src/types.js";
import { FakeService, fixture } from "./fake_service.js";

const baseline = fixture<ValuationPayload>("valuation_baseline");
const overridden = fixture<ValuationPayload>("valuation_override");
const undone = fixture<ValuationPayload>("valuation_undone");
const graph = fixture<GraphPayload>("graph");
const report = fixture<ReportPayload>("report");

const Q = "?rule=product&view=ignore_defeaters";

function soundService(): FakeService {
  return FakeService.withRoutes({
    "POST /v1/sessions": { session_id: baseline.session },
    [`GET /v1/sessions/${baseline.session}/graph`]: graph,
    [`GET /v1/sessions/${baseline.session}/valuation${Q}`]: baseline,
    [`PUT /v1/sessions/${baseline.session}/overrides/C.h1${Q}`]: overridden,
    [`DELETE /v1/sessions/${baseline.session}/overrides/C.h1${Q}`]: undone,
    [`GET /v1/sessions/${baseline.session}/report${Q}`]: report,
  });
}

async function loadedViewModel(service: FakeService): Promise<CaseViewModel> {
  const vm = new CaseViewModel(new CaseServiceClient("", service.fetch));
  await vm.load("{}");
  return vm;
}

describe("engine parity", () => {
  let vm: CaseViewModel;

  beforeEach(async () => {
    vm = await loadedViewModel(soundService());
  });

  it("displays exactly the values the service returned", () => {
    for (const [nodeId, entry] of Object.entries(baseline.values)) {
      const shown = vm.displayedValue(nodeId);
      expect(shown).toBeDefined();
      expect(shown!.value).toBe(entry.value);
      expect(shown!.color).toBe(entry.color);
    }
  });

  it("never puts a number on the canvas the service did not return", () => {
    const scene = buildScene(vm);
    for (const node of scene.nodes) {
      if (!node.valueText) continue;
      const fromService = baseline.values[node.id];
      expect(fromService, `node ${node.id} shows a value without a service source`).toBeDefined();
      expect(node.valueText).toBe(formatValue(fromService.value));
    }
  });

  it("labels come from the service labeling", () => {
    for (const [nodeId, label] of Object.entries(baseline.labels)) {
      expect(vm.label(nodeId)).toBe(label);
    }
  });

  it("top value is the service's top claim entry", () => {
    expect(vm.topValue()).toEqual(baseline.values[baseline.top_claim]);
  });
});

describe("slider override and undo", () => {
  it("override repaints from the PUT response and undo restores the exact prior frame", async () => {
    const vm = await loadedViewModel(soundService());
    const before: Frame = structuredClone(vm.frame());

    const delta = await vm.slideOverride("C.h1", 0.2);
    expect(delta).toEqual(overridden.delta);
    expect(vm.displayedValue("C.h1")!.value).toBe(0.2);
    expect(vm.displayedValue("C.h1")!.origin).toBe("manual_override");
    // ancestors repainted from the response, not recomputed locally
    expect(vm.topValue()!.value).toBe(overridden.values[overridden.top_claim].value);

    expect(vm.canUndo()).toBe(true);
    await vm.undo();
    expect(vm.frame()).toEqual(before);
    expect(vm.canUndo()).toBe(false);
  });

  it("the recorded undo frame is byte-equal to the baseline frame", () => {
    expect(undone.values).toEqual(baseline.values);
    expect(undone.labels).toEqual(baseline.labels);
  });
});

describe("rule and view switching", () => {
  it("rule switch recolors per the service on the divergence fixture", async () => {
    const product = fixture<ValuationPayload>("divergence_product");
    const doubts = fixture<ValuationPayload>("divergence_doubts");
    const divergenceGraph: GraphPayload = {
      top_claim: "C",
      nodes: [{ id: "C", kind: "claim" }],
      links: [],
    };
    const service = FakeService.withRoutes({
      "POST /v1/sessions": { session_id: product.session },
      [`GET /v1/sessions/${product.session}/graph`]: divergenceGraph,
      [`GET /v1/sessions/${product.session}/valuation?rule=product&view=ignore_defeaters`]: product,
      [`GET /v1/sessions/${product.session}/valuation?rule=sum-of-doubts&view=ignore_defeaters`]: doubts,
    });
    const vm = await loadedViewModel(service);
    expect(vm.displayedColor("C")).toBe("amber");       // 0.53 under product
    await vm.setRule("sum-of-doubts");
    expect(vm.displayedColor("C")).toBe("red");          // 0.40 under sum of doubts
    expect(vm.displayedValue("C")!.value).toBe(doubts.values["C"].value);
  });

  it("view switch applies the service's defeater overrides", async () => {
    const ignore = fixture<ValuationPayload>("views_ignore");
    const applied = fixture<ValuationPayload>("views_applied");
    const service = FakeService.withRoutes({
      "POST /v1/sessions": { session_id: ignore.session },
      [`GET /v1/sessions/${ignore.session}/graph`]: graph,
      [`GET /v1/sessions/${ignore.session}/valuation?rule=product&view=ignore_defeaters`]: ignore,
      [`GET /v1/sessions/${ignore.session}/valuation?rule=product&view=apply_defeaters`]: applied,
    });
    const vm = await loadedViewModel(service);
    const ignoreTop = vm.topValue()!.value;
    await vm.setView("apply_defeaters");
    const appliedTop = vm.topValue()!.value;
    expect(appliedTop).toBeLessThanOrEqual(ignoreTop);
    expect(vm.displayedValue("S.decomp")!.origin).toBe("manual_override");
  });
});

describe("layer toggles", () => {
  it("hiding defeaters changes visibility only, never values or colors", async () => {
    const vm = await loadedViewModel(soundService());
    const framesBefore = structuredClone(vm.frame());
    const visibleBefore = vm.visibleNodes().map((n) => n.id);
    expect(visibleBefore).toContain("D.open");

    vm.toggleLayer("defeaters");
    const visibleAfter = vm.visibleNodes().map((n) => n.id);
    expect(visibleAfter).not.toContain("D.open");
    expect(vm.frame()).toEqual(framesBefore);

    vm.toggleLayer("defeaters");
    expect(vm.visibleNodes().map((n) => n.id)).toEqual(visibleBefore);
  });

  it("hiding a layer drops its links too", async () => {
    const vm = await loadedViewModel(soundService());
    vm.toggleLayer("defeaters");
    for (const link of vm.visibleLinks()) {
      expect(link.kind).not.toBe("attack");
    }
  });
});

describe("sentencing checklist", () => {
  it("renders the service skeleton and exports it with judgments", async () => {
    const vm = await loadedViewModel(soundService());
    await vm.loadReport();
    const items = vm.checklistItems();
    expect(items.length).toBeGreaterThanOrEqual(7);
    expect(items.map((i) => i.key)).toContain("doubts");

    vm.setJudgment("context", "reviewed the concept of operations");
    const text = vm.exportSentencing();
    for (const item of items) {
      expect(text).toContain(item.text);
    }
    expect(text).toContain("reviewed the concept of operations");
    expect(text).toContain(report.sentencing.verdict_heading);
  });
});
