/** Browser wiring: upload a case file, render the canvas, hook the controls.
 *
 * All engine semantics live server-side; this file only moves payloads
 * between the service client, the view model, and the DOM.
 */

import { CaseServiceClient } from "./api.js";
import { buildScene, formatValue, sceneToSvg } from "./render.js";
import { CaseViewModel } from "./viewmodel.js";
import type { Rule, ViewMode } from "./types.js";

const client = new CaseServiceClient("");
const vm = new CaseViewModel(client);

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function repaint(): void {
  const canvas = el<HTMLDivElement>("canvas");
  canvas.innerHTML = sceneToSvg(buildScene(vm));
  const top = vm.topValue();
  el<HTMLSpanElement>("top-value").textContent = top ? formatValue(top.value) : "–";
  el<HTMLSpanElement>("case-label").textContent =
    vm.valuation ? vm.valuation.structure.case_label : "–";
  el<HTMLSpanElement>("gate").textContent = vm.valuation ? vm.valuation.severity_gate : "–";
  const undoButton = el<HTMLButtonElement>("undo");
  undoButton.disabled = !vm.canUndo();
  attachNodeHandlers(canvas);
}

function attachNodeHandlers(canvas: HTMLDivElement): void {
  canvas.querySelectorAll<SVGElement>("[data-node]").forEach((shape) => {
    shape.addEventListener("click", () => {
      const nodeId = shape.getAttribute("data-node")!;
      selectNode(nodeId);
    });
  });
}

let selected: string | null = null;

function selectNode(nodeId: string): void {
  selected = nodeId;
  const value = vm.displayedValue(nodeId);
  el<HTMLSpanElement>("selected-node").textContent = nodeId;
  const slider = el<HTMLInputElement>("slider");
  slider.disabled = !value;
  if (value) slider.value = String(value.value);
}

async function renderChecklist(): Promise<void> {
  await vm.loadReport();
  const list = el<HTMLUListElement>("checklist");
  list.innerHTML = "";
  for (const item of vm.checklistItems()) {
    const li = document.createElement("li");
    li.className = `bullet-${item.status}`;
    const mark = item.status === "satisfied" ? "✓" : item.status === "unsupported" ? "!" : "·";
    li.textContent = `${mark} ${item.text}`;
    if (item.detail) {
      const detail = document.createElement("div");
      detail.className = "detail";
      detail.textContent = item.detail;
      li.appendChild(detail);
    }
    const note = document.createElement("input");
    note.placeholder = "your judgment";
    note.addEventListener("change", () => vm.setJudgment(item.key, note.value));
    li.appendChild(note);
    list.appendChild(li);
  }
}

function wireControls(): void {
  el<HTMLInputElement>("file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      await vm.load(await file.text());
      repaint();
      await renderChecklist();
    } catch (error) {
      el<HTMLDivElement>("banner").textContent = String(error);
    }
  });

  el<HTMLSelectElement>("rule").addEventListener("change", async (event) => {
    await vm.setRule((event.target as HTMLSelectElement).value as Rule);
    repaint();
  });

  el<HTMLSelectElement>("view").addEventListener("change", async (event) => {
    await vm.setView((event.target as HTMLSelectElement).value as ViewMode);
    repaint();
  });

  for (const layer of ["defeaters", "embedded", "subcases"] as const) {
    el<HTMLInputElement>(`toggle-${layer}`).addEventListener("change", () => {
      vm.toggleLayer(layer);
      repaint();
    });
  }

  el<HTMLInputElement>("slider").addEventListener("change", async (event) => {
    if (!selected) return;
    const value = Number((event.target as HTMLInputElement).value);
    await vm.slideOverride(selected, value);
    repaint();
  });

  el<HTMLButtonElement>("undo").addEventListener("click", async () => {
    await vm.undo();
    repaint();
  });

  el<HTMLButtonElement>("export").addEventListener("click", () => {
    el<HTMLTextAreaElement>("export-target").value = vm.exportSentencing();
  });
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wireControls);
}

export { vm, repaint };
