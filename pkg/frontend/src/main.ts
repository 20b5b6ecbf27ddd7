/**
 * Browser entry point: connect, render, forward drags and button presses.
 *
 * Serve this directory statically next to a running `qubitball serve`;
 * pass the endpoint with ?ws=ws://host:port/session if it is not the
 * default ws://127.0.0.1:8000/session.
 */

import * as THREE from "three";

import { SessionClient } from "./client.js";
import { truncatedIcosahedron } from "./polyhedron.js";
import { applyFrame, buildBall } from "./render3d.js";
import { dragToRotations, type CameraBasis } from "./trackball.js";
import type { Vec3 } from "./protocol.js";

const params = new URLSearchParams(window.location.search);
const url = params.get("ws") ?? "ws://127.0.0.1:8000/session";

const canvas = document.getElementById("ball") as HTMLCanvasElement;
const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
renderer.setSize(canvas.clientWidth, canvas.clientHeight, false);
const scene = new THREE.Scene();
scene.background = new THREE.Color(0x101018);
const camera = new THREE.PerspectiveCamera(
  45,
  canvas.clientWidth / canvas.clientHeight,
  0.1,
  50,
);
camera.position.set(0, 0, 3.4);

const handles = buildBall(truncatedIcosahedron());
scene.add(handles.group);
scene.add(handles.blochArrow);

// the camera never moves, so its screen basis is constant
const cameraBasis: CameraBasis = { up: [0, 1, 0], right: [1, 0, 0] };

const client = new SessionClient(url);
const text = (id: string): HTMLElement => document.getElementById(id)!;

client.subscribe((view) => {
  text("status").textContent = view.connection;
  if (view.lastError !== null) {
    text("status").textContent = `${view.connection} (error: ${view.lastError})`;
  }
  if (view.frame === null) return;
  applyFrame(handles, view.frame);
  const [ar, ai] = view.frame.alpha;
  const [br, bi] = view.frame.beta;
  text("alpha").textContent = `${ar.toFixed(4)} ${ai >= 0 ? "+" : "-"} ${Math.abs(ai).toFixed(4)}i`;
  text("beta").textContent = `${br.toFixed(4)} ${bi >= 0 ? "+" : "-"} ${Math.abs(bi).toFixed(4)}i`;
  text("bloch").textContent =
    `theta ${view.frame.bloch.theta.toFixed(4)}  phi ${view.frame.bloch.phi.toFixed(4)}`;
  text("gamma").textContent = view.frame.gamma === null ? "open" : view.frame.gamma.toFixed(4);
  text("history").textContent = view.history.map((m) => (m.outcome > 0 ? "+1" : "-1")).join(" ");
});

void client.hello();

// drags are serialized through one chain so events reach the server in order
let sendChain: Promise<unknown> = Promise.resolve();
let dragging = false;
let lastX = 0;
let lastY = 0;

canvas.addEventListener("pointerdown", (event) => {
  dragging = true;
  lastX = event.clientX;
  lastY = event.clientY;
  canvas.setPointerCapture(event.pointerId);
});

canvas.addEventListener("pointermove", (event) => {
  if (!dragging) return;
  const dx = event.clientX - lastX;
  const dy = lastY - event.clientY; // screen y grows downward
  lastX = event.clientX;
  lastY = event.clientY;
  const events = dragToRotations(dx, dy, cameraBasis, {
    viewportWidth: canvas.clientWidth,
  });
  if (events.length > 0) {
    sendChain = sendChain.then(() => client.sendEvents(events));
  }
});

canvas.addEventListener("pointerup", () => {
  dragging = false;
});

document.getElementById("measure")!.addEventListener("click", () => {
  const component = (id: string): number =>
    Number((document.getElementById(id) as HTMLInputElement).value) || 0;
  const axis: Vec3 = [component("ax"), component("ay"), component("az")];
  sendChain = sendChain.then(() =>
    client.sendEvent({ type: "measure", axis: axis.every((c) => c === 0) ? [0, 0, 1] : axis }),
  );
});

function animate(): void {
  requestAnimationFrame(animate);
  renderer.render(scene, camera);
}
animate();
