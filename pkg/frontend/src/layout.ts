// Layered DAG layout: topological ranks flow left to right, so the same
// concept lands in the same column across students' graphs.

export interface NodePosition {
  index: number;
  layer: number;
  row: number;
  x: number;
  y: number;
}

export const NODE_WIDTH = 96;
export const NODE_HEIGHT = 44;
export const H_GAP = 42;
export const V_GAP = 16;

export function layeredLayout(nodeCount: number, edges: [number, number][]): NodePosition[] {
  const indegree = new Array(nodeCount).fill(0);
  const successors: number[][] = Array.from({ length: nodeCount }, () => []);
  for (const [a, b] of edges) {
    successors[a].push(b);
    indegree[b] += 1;
  }
  // longest-path layering via Kahn order
  const layer = new Array(nodeCount).fill(0);
  const queue: number[] = [];
  const remaining = indegree.slice();
  for (let i = 0; i < nodeCount; i++) if (remaining[i] === 0) queue.push(i);
  let head = 0;
  while (head < queue.length) {
    const node = queue[head++];
    for (const next of successors[node]) {
      layer[next] = Math.max(layer[next], layer[node] + 1);
      remaining[next] -= 1;
      if (remaining[next] === 0) queue.push(next);
    }
  }

  const rows = new Map<number, number>();
  const positions: NodePosition[] = [];
  for (let i = 0; i < nodeCount; i++) {
    const row = rows.get(layer[i]) ?? 0;
    rows.set(layer[i], row + 1);
    positions.push({
      index: i,
      layer: layer[i],
      row,
      x: layer[i] * (NODE_WIDTH + H_GAP),
      y: row * (NODE_HEIGHT + V_GAP),
    });
  }
  return positions;
}

export function layoutExtent(positions: NodePosition[]): { width: number; height: number } {
  let width = NODE_WIDTH;
  let height = NODE_HEIGHT;
  for (const p of positions) {
    width = Math.max(width, p.x + NODE_WIDTH);
    height = Math.max(height, p.y + NODE_HEIGHT);
  }
  return { width, height };
}
