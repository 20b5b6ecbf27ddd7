/**
 * three.js scene pieces for the panel ball.
 *
 * All pentagons share one material and all hexagons another, because the
 * whole ball shows exactly two colors at a time (alpha on pentagons,
 * beta on hexagons). Color management is disabled so the server's RGB
 * bytes land in the material unmodified; the UI never recomputes or
 * reinterprets colors.
 */

import * as THREE from "three";

import type { Polyhedron } from "./polyhedron.js";
import type { TraceFrame } from "./protocol.js";

THREE.ColorManagement.enabled = false;

export interface BallHandles {
  group: THREE.Group;
  pentagonMaterial: THREE.MeshBasicMaterial;
  hexagonMaterial: THREE.MeshBasicMaterial;
  blochArrow: THREE.ArrowHelper;
  faceCount: { pentagons: number; hexagons: number };
}

function faceGeometry(poly: Polyhedron, face: number[]): THREE.BufferGeometry {
  const positions: number[] = [];
  for (const index of face) {
    positions.push(...poly.vertices[index]!);
  }
  const indices: number[] = [];
  for (let i = 1; i + 1 < face.length; i++) {
    indices.push(0, i, i + 1);
  }
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.Float32BufferAttribute(positions, 3));
  geometry.setIndex(indices);
  geometry.computeVertexNormals();
  return geometry;
}

export function buildBall(poly: Polyhedron): BallHandles {
  const group = new THREE.Group();
  const pentagonMaterial = new THREE.MeshBasicMaterial();
  const hexagonMaterial = new THREE.MeshBasicMaterial();
  const seams = new THREE.LineBasicMaterial({ color: 0x303030 });
  const batches: Array<[number[][], THREE.MeshBasicMaterial]> = [
    [poly.pentagons, pentagonMaterial],
    [poly.hexagons, hexagonMaterial],
  ];
  for (const [faces, material] of batches) {
    for (const face of faces) {
      const geometry = faceGeometry(poly, face);
      group.add(new THREE.Mesh(geometry, material));
      group.add(new THREE.LineLoop(geometry, seams));
    }
  }
  const blochArrow = new THREE.ArrowHelper(
    new THREE.Vector3(0, 0, 1),
    new THREE.Vector3(0, 0, 0),
    1.4,
    0xffffff,
  );
  return {
    group,
    pentagonMaterial,
    hexagonMaterial,
    blochArrow,
    faceCount: { pentagons: poly.pentagons.length, hexagons: poly.hexagons.length },
  };
}

export function applyFrame(handles: BallHandles, frame: TraceFrame): void {
  const [pr, pg, pb] = frame.pentagon;
  const [hr, hg, hb] = frame.hexagon;
  handles.pentagonMaterial.color.setRGB(pr / 255.0, pg / 255.0, pb / 255.0);
  handles.hexagonMaterial.color.setRGB(hr / 255.0, hg / 255.0, hb / 255.0);
  const [w, x, y, z] = frame.orientation;
  handles.group.quaternion.set(x, y, z, w);
  const v = frame.bloch.vector;
  handles.blochArrow.setDirection(new THREE.Vector3(v[0], v[1], v[2]).normalize());
}

/** Material color back as 8-bit RGB; lets tests assert byte equality. */
export function colorBytes(material: THREE.MeshBasicMaterial): [number, number, number] {
  return [
    Math.round(material.color.r * 255.0),
    Math.round(material.color.g * 255.0),
    Math.round(material.color.b * 255.0),
  ];
}
