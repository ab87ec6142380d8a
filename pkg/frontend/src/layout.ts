/** Layered placement of the argument graph.
 *
 * Top claim on the top row, argument flows upward, evidence settles at the
 * bottom; defeaters sit beside their first attack target.  A barycenter pass
 * reduces crossings; the result is plain coordinates for the renderer.
 */

import type { GraphLink, GraphPayload } from "./types.js";

export interface Placement {
  x: number;
  y: number;
  layer: number;
}

export interface LayoutOptions {
  columnWidth: number;
  rowHeight: number;
  defeaterOffset: number;
}

const DEFAULTS: LayoutOptions = { columnWidth: 150, rowHeight: 110, defeaterOffset: 90 };

export function layeredLayout(
  graph: GraphPayload,
  options: Partial<LayoutOptions> = {},
): Map<string, Placement> {
  const opts = { ...DEFAULTS, ...options };
  const logical = graph.links.filter((l) => l.kind === "logical");
  const byId = new Map(graph.nodes.map((n) => [n.id, n]));

  // depth = longest path below the top claim, walking logical links downward
  const childrenOf = new Map<string, string[]>();
  for (const link of logical) {
    const list = childrenOf.get(link.target) ?? [];
    list.push(link.source);
    childrenOf.set(link.target, list);
  }
  const depth = new Map<string, number>();
  const roots = graph.nodes
    .filter((n) => !logical.some((l) => l.source === n.id) && childrenOf.has(n.id))
    .map((n) => n.id);
  if (!roots.includes(graph.top_claim)) roots.unshift(graph.top_claim);

  const assign = (id: string, level: number) => {
    if ((depth.get(id) ?? -1) >= level) return;
    depth.set(id, level);
    for (const child of childrenOf.get(id) ?? []) assign(child, level + 1);
  };
  for (const root of roots) assign(root, 0);

  // nodes outside the logical flow: defeaters ride beside their targets,
  // notes/comments drop to the bottom band
  const attackTargets = new Map<string, string>();
  for (const link of graph.links) {
    if (link.kind === "attack" && !attackTargets.has(link.source)) {
      attackTargets.set(link.source, link.target);
    }
  }
  let maxDepth = 0;
  for (const d of depth.values()) maxDepth = Math.max(maxDepth, d);
  for (const node of graph.nodes) {
    if (depth.has(node.id)) continue;
    if (node.kind === "defeater") {
      const target = attackTargets.get(node.id);
      depth.set(node.id, target !== undefined ? depth.get(target) ?? 0 : 0);
    } else if (node.kind === "evidence") {
      depth.set(node.id, maxDepth);
    } else {
      depth.set(node.id, maxDepth + 1);
    }
  }

  // evidence settles on one bottom rail regardless of branch depth
  let bottom = 0;
  for (const d of depth.values()) bottom = Math.max(bottom, d);
  for (const node of graph.nodes) {
    if (node.kind === "evidence") depth.set(node.id, bottom);
  }

  // group into layers, stable order by id, then one barycenter sweep
  const layers = new Map<number, string[]>();
  for (const [id, d] of depth) {
    const list = layers.get(d) ?? [];
    list.push(id);
    layers.set(d, list);
  }
  for (const list of layers.values()) list.sort();
  const position = new Map<string, number>();
  const ordered = [...layers.keys()].sort((a, b) => a - b);
  for (const layerIndex of ordered) {
    const list = layers.get(layerIndex)!;
    if (layerIndex > 0) {
      const score = (id: string) => {
        const parents = logical.filter((l) => l.source === id).map((l) => l.target);
        const known = parents.map((p) => position.get(p)).filter((x): x is number => x !== undefined);
        if (!known.length) return Number.MAX_SAFE_INTEGER;
        return known.reduce((a, b) => a + b, 0) / known.length;
      };
      list.sort((a, b) => score(a) - score(b) || a.localeCompare(b));
    }
    list.forEach((id, index) => position.set(id, index));
  }

  const placements = new Map<string, Placement>();
  for (const [layerIndex, list] of [...layers.entries()].sort((a, b) => a[0] - b[0])) {
    list.forEach((id, index) => {
      const node = byId.get(id);
      const sideways = node?.kind === "defeater" ? opts.defeaterOffset : 0;
      placements.set(id, {
        x: (index + 1) * opts.columnWidth + sideways,
        y: (layerIndex + 1) * opts.rowHeight,
        layer: layerIndex,
      });
    });
  }
  return placements;
}

export function layerCount(placements: Map<string, Placement>): number {
  let max = 0;
  for (const p of placements.values()) max = Math.max(max, p.layer);
  return max + 1;
}

export function crossingEstimate(graph: GraphPayload, placements: Map<string, Placement>): number {
  const logical = graph.links.filter((l: GraphLink) => l.kind === "logical");
  let crossings = 0;
  for (let i = 0; i < logical.length; i++) {
    for (let j = i + 1; j < logical.length; j++) {
      const a = logical[i];
      const b = logical[j];
      const pa = placements.get(a.source)!;
      const qa = placements.get(a.target)!;
      const pb = placements.get(b.source)!;
      const qb = placements.get(b.target)!;
      if (pa.layer !== pb.layer || qa.layer !== qb.layer) continue;
      if ((pa.x - pb.x) * (qa.x - qb.x) < 0) crossings += 1;
    }
  }
  return crossings;
}
