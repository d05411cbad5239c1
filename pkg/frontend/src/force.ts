// Small deterministic force-directed layout: pairwise repulsion, spring
// attraction along edges (stronger for more similar pairs), and a pull
// toward the canvas center. Seeded initial positions keep layouts
// reproducible; the API stays layout-free by design.

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
}

export interface LayoutEdgeInput {
  a: string;
  b: string;
  similarity: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  seed?: number;
  repulsion?: number;
  springLength?: number;
  springStrength?: number;
  centering?: number;
}

// deterministic LCG so layouts do not jump between visits
function makeRng(seed: number): () => number {
  let state = (seed >>> 0) || 1;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return state / 0x100000000;
  };
}

export function layoutNetwork(
  nodeIds: string[],
  edges: LayoutEdgeInput[],
  options: LayoutOptions,
): LayoutNode[] {
  const {
    width,
    height,
    iterations = 300,
    seed = 42,
    repulsion = 8000,
    springLength = 120,
    springStrength = 0.04,
    centering = 0.01,
  } = options;

  const rng = makeRng(seed);
  const nodes: LayoutNode[] = nodeIds.map((id) => ({
    id,
    x: width * (0.2 + 0.6 * rng()),
    y: height * (0.2 + 0.6 * rng()),
  }));
  const indexOf = new Map(nodeIds.map((id, i) => [id, i]));
  const springs = edges
    .filter((e) => indexOf.has(e.a) && indexOf.has(e.b))
    .map((e) => ({
      i: indexOf.get(e.a)!,
      j: indexOf.get(e.b)!,
      strength: springStrength * (0.5 + e.similarity),
    }));

  const cx = width / 2;
  const cy = height / 2;
  for (let step = 0; step < iterations; step++) {
    const cooling = 1 - step / iterations;
    const fx = new Array(nodes.length).fill(0);
    const fy = new Array(nodes.length).fill(0);

    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        let dx = nodes[i].x - nodes[j].x;
        let dy = nodes[i].y - nodes[j].y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-6) {
          // nudge coincident nodes apart deterministically
          dx = 0.1 * (i - j);
          dy = 0.1;
          d2 = dx * dx + dy * dy;
        }
        const force = repulsion / d2;
        const d = Math.sqrt(d2);
        fx[i] += (dx / d) * force;
        fy[i] += (dy / d) * force;
        fx[j] -= (dx / d) * force;
        fy[j] -= (dy / d) * force;
      }
    }

    for (const spring of springs) {
      const dx = nodes[spring.j].x - nodes[spring.i].x;
      const dy = nodes[spring.j].y - nodes[spring.i].y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-3);
      const force = spring.strength * (d - springLength);
      fx[spring.i] += (dx / d) * force;
      fy[spring.i] += (dy / d) * force;
      fx[spring.j] -= (dx / d) * force;
      fy[spring.j] -= (dy / d) * force;
    }

    for (let i = 0; i < nodes.length; i++) {
      fx[i] += (cx - nodes[i].x) * centering;
      fy[i] += (cy - nodes[i].y) * centering;
      const limit = 30 * cooling + 1;
      nodes[i].x += Math.max(-limit, Math.min(limit, fx[i]));
      nodes[i].y += Math.max(-limit, Math.min(limit, fy[i]));
      nodes[i].x = Math.max(20, Math.min(width - 20, nodes[i].x));
      nodes[i].y = Math.max(20, Math.min(height - 20, nodes[i].y));
    }
  }
  return nodes;
}
