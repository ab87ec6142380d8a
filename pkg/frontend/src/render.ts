/** Scene construction and SVG serialization.
 *
 * buildScene projects the view model onto plain shape records (pure, easily
 * asserted in tests); sceneToSvg turns a scene into markup.  Value text is
 * formatted straight from service numbers, never recomputed.
 */

import { layeredLayout, Placement } from "./layout.js";
import { CaseViewModel } from "./viewmodel.js";
import type { GraphNode, LinkKind, TrafficColor } from "./types.js";

export interface SceneNode {
  id: string;
  kind: GraphNode["kind"];
  shape: "box" | "ellipse" | "drum" | "octagon" | "note";
  x: number;
  y: number;
  fill: string;
  title: string;
  valueText: string;       // "" when the engine returned no value for the node
  overridden: boolean;
  label?: string;          // in/out/undecided badge
  sideClaim: boolean;
}

export interface SceneEdge {
  from: string;
  to: string;
  kind: LinkKind;
  dashed: boolean;
  reversed: boolean;
  color: string;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  width: number;
  height: number;
}

const FILL: Record<TrafficColor, string> = {
  red: "#f4cccc",
  amber: "#fff2cc",
  green: "#d9ead3",
};
const NEUTRAL_FILL = "#eeeeee";

const SHAPES: Record<GraphNode["kind"], SceneNode["shape"]> = {
  claim: "box",
  argument_step: "ellipse",
  evidence: "drum",
  defeater: "octagon",
  subcase_note: "note",
  comment: "note",
};

export function formatValue(value: number): string {
  // fixed two decimals for display; the underlying number is the service's
  return value.toFixed(2);
}

export function buildScene(vm: CaseViewModel): Scene {
  const nodes = vm.visibleNodes();
  const links = vm.visibleLinks();
  const placements = layeredLayout({ ...vm.graph, nodes: vm.graph.nodes, links: vm.graph.links });

  const sceneNodes: SceneNode[] = nodes.map((node) => {
    const place: Placement = placements.get(node.id) ?? { x: 0, y: 0, layer: 0 };
    const value = vm.displayedValue(node.id);
    return {
      id: node.id,
      kind: node.kind,
      shape: SHAPES[node.kind],
      x: place.x,
      y: place.y,
      fill: value ? FILL[value.color] : NEUTRAL_FILL,
      title: node.narrative ? `${node.id}: ${node.narrative}` : node.id,
      valueText: value ? formatValue(value.value) : "",
      overridden: value?.origin === "manual_override",
      label: vm.label(node.id),
      sideClaim: (node.role_flags ?? []).includes("side_claim"),
    };
  });

  const sceneEdges: SceneEdge[] = links.map((link) => ({
    // embedded links render with their arrow reversed: narrative references
    // point the opposite way from logical support
    from: link.kind === "embedded" ? link.target : link.source,
    to: link.kind === "embedded" ? link.source : link.target,
    kind: link.kind,
    dashed: link.kind === "attack",
    reversed: link.kind === "embedded",
    color: link.kind === "embedded" ? "#9e9e9e" : link.kind === "attack" ? "#b45342" : "#333333",
  }));

  const width = Math.max(320, ...sceneNodes.map((n) => n.x + 140));
  const height = Math.max(240, ...sceneNodes.map((n) => n.y + 90));
  return { nodes: sceneNodes, edges: sceneEdges, width, height };
}

export function sceneToSvg(scene: Scene): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${scene.width} ${scene.height}" ` +
    `width="${scene.width}" height="${scene.height}">`,
  );
  parts.push(
    '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" ' +
    'markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>',
  );
  const byId = new Map(scene.nodes.map((n) => [n.id, n]));
  for (const edge of scene.edges) {
    const from = byId.get(edge.from);
    const to = byId.get(edge.to);
    if (!from || !to) continue;
    const dash = edge.dashed ? ' stroke-dasharray="6 4"' : "";
    parts.push(
      `<line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}" ` +
      `stroke="${edge.color}"${dash} marker-end="url(#arrow)" data-kind="${edge.kind}"/>`,
    );
  }
  for (const node of scene.nodes) {
    parts.push(nodeMarkup(node));
  }
  parts.push("</svg>");
  return parts.join("\n");
}

function nodeMarkup(node: SceneNode): string {
  const stroke = node.sideClaim ? ' stroke-dasharray="3 3"' : "";
  const common = `fill="${node.fill}" stroke="#444"${stroke} data-node="${node.id}"`;
  const w = 120;
  const h = 44;
  let shape: string;
  switch (node.shape) {
    case "ellipse":
      shape = `<ellipse cx="${node.x}" cy="${node.y}" rx="${w / 2}" ry="${h / 2}" ${common}/>`;
      break;
    case "drum":
      shape = `<rect x="${node.x - w / 2}" y="${node.y - h / 2}" width="${w}" height="${h}" rx="14" ${common}/>`;
      break;
    case "octagon": {
      const cut = 10;
      const x0 = node.x - w / 2;
      const y0 = node.y - h / 2;
      const points = [
        [x0 + cut, y0], [x0 + w - cut, y0], [x0 + w, y0 + cut], [x0 + w, y0 + h - cut],
        [x0 + w - cut, y0 + h], [x0 + cut, y0 + h], [x0, y0 + h - cut], [x0, y0 + cut],
      ].map((p) => p.join(",")).join(" ");
      shape = `<polygon points="${points}" ${common}/>`;
      break;
    }
    case "note":
      shape = `<rect x="${node.x - w / 2}" y="${node.y - h / 2}" width="${w}" height="${h}" ${common} fill-opacity="0.5"/>`;
      break;
    default:
      shape = `<rect x="${node.x - w / 2}" y="${node.y - h / 2}" width="${w}" height="${h}" ${common}/>`;
  }
  const badge = node.overridden
    ? `<text x="${node.x + w / 2 - 8}" y="${node.y - h / 2 + 12}" font-size="11">✎</text>`
    : "";
  const labelBadge = node.label
    ? `<text x="${node.x - w / 2 + 4}" y="${node.y - h / 2 + 12}" font-size="9">${node.label}</text>`
    : "";
  const value = node.valueText
    ? `<text x="${node.x}" y="${node.y + 16}" text-anchor="middle" font-size="11" data-value-for="${node.id}">${node.valueText}</text>`
    : "";
  const title = `<title>${escapeXml(node.title)}</title>`;
  const name = `<text x="${node.x}" y="${node.y + 2}" text-anchor="middle" font-size="11">${escapeXml(node.id)}</text>`;
  return `<g>${title}${shape}${name}${value}${badge}${labelBadge}</g>`;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
