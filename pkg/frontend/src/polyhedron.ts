/**
 * Truncated icosahedron: the 12-pentagon/20-hexagon panel layout of the
 * displayed ball, built from scratch so the face structure (which panel
 * is a pentagon) is explicit rather than buried in a mesh library.
 *
 * Construction: take the icosahedron on the cyclic permutations of
 * (0, ±1, ±phi), cut every edge at its 1/3 points, collect the hexagon
 * left of each triangular face and the pentagon around each original
 * vertex, then push everything onto the unit sphere (all cut points
 * share one radius, so faces stay planar). All faces wind outward.
 */

export type Point3 = [number, number, number];

export interface Polyhedron {
  vertices: Point3[];
  /** Index faces: 12 pentagons, 20 hexagons, outward winding. */
  pentagons: number[][];
  hexagons: number[][];
}

const PHI = (1.0 + Math.sqrt(5.0)) / 2.0;

function icosahedronVertices(): Point3[] {
  const out: Point3[] = [];
  for (const a of [-1.0, 1.0]) {
    for (const b of [-PHI, PHI]) {
      out.push([0.0, a, b]);
      out.push([a, b, 0.0]);
      out.push([b, 0.0, a]);
    }
  }
  return out;
}

function sub(a: Point3, b: Point3): Point3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Point3, b: Point3): Point3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function dot(a: Point3, b: Point3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function norm(a: Point3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

function distanceSquared(a: Point3, b: Point3): number {
  const d = sub(a, b);
  return dot(d, d);
}

/** Point one third of the way from a to b. */
function cutPoint(a: Point3, b: Point3): Point3 {
  return [
    (2.0 * a[0] + b[0]) / 3.0,
    (2.0 * a[1] + b[1]) / 3.0,
    (2.0 * a[2] + b[2]) / 3.0,
  ];
}

export function truncatedIcosahedron(): Polyhedron {
  const base = icosahedronVertices();
  const n = base.length;

  // icosahedron edges all have squared length 4
  const adjacent: number[][] = base.map(() => []);
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      if (Math.abs(distanceSquared(base[i]!, base[j]!) - 4.0) < 1e-9) {
        adjacent[i]!.push(j);
        adjacent[j]!.push(i);
      }
    }
  }

  const triangles: [number, number, number][] = [];
  for (let i = 0; i < n; i++) {
    for (const j of adjacent[i]!) {
      if (j <= i) continue;
      for (const k of adjacent[j]!) {
        if (k <= j || !adjacent[i]!.includes(k)) continue;
        triangles.push([i, j, k]);
      }
    }
  }

  const vertices: Point3[] = [];
  const indexOf = new Map<string, number>();
  const cutIndex = (a: number, b: number): number => {
    const key = `${a}/${b}`;
    const existing = indexOf.get(key);
    if (existing !== undefined) return existing;
    const index = vertices.length;
    vertices.push(cutPoint(base[a]!, base[b]!));
    indexOf.set(key, index);
    return index;
  };

  const hexagons: number[][] = [];
  for (let [i, j, k] of triangles) {
    const centroid: Point3 = [
      base[i]![0] + base[j]![0] + base[k]![0],
      base[i]![1] + base[j]![1] + base[k]![1],
      base[i]![2] + base[j]![2] + base[k]![2],
    ];
    const normal = cross(sub(base[j]!, base[i]!), sub(base[k]!, base[i]!));
    if (dot(normal, centroid) < 0.0) {
      [j, k] = [k, j];
    }
    hexagons.push([
      cutIndex(i, j), cutIndex(j, i),
      cutIndex(j, k), cutIndex(k, j),
      cutIndex(k, i), cutIndex(i, k),
    ]);
  }

  const pentagons: number[][] = [];
  for (let v = 0; v < n; v++) {
    const outward = base[v]!;
    const axis: Point3 = [
      outward[0] / norm(outward), outward[1] / norm(outward), outward[2] / norm(outward),
    ];
    const corners = adjacent[v]!.map((u) => cutIndex(v, u));
    const first = sub(vertices[corners[0]!]!, outward);
    const e1Raw = sub(first, [
      axis[0] * dot(first, axis), axis[1] * dot(first, axis), axis[2] * dot(first, axis),
    ] as Point3);
    const e1: Point3 = [e1Raw[0] / norm(e1Raw), e1Raw[1] / norm(e1Raw), e1Raw[2] / norm(e1Raw)];
    const e2 = cross(axis, e1);
    const angleAround = (index: number): number => {
      const p = sub(vertices[index]!, outward);
      return Math.atan2(dot(p, e2), dot(p, e1));
    };
    corners.sort((a, b) => angleAround(a) - angleAround(b));
    pentagons.push(corners);
  }

  // every cut point has the same radius, so one scale factor fits all
  const radius = norm(vertices[0]!);
  const unit = vertices.map(
    (p): Point3 => [p[0] / radius, p[1] / radius, p[2] / radius],
  );

  return { vertices: unit, pentagons, hexagons };
}
