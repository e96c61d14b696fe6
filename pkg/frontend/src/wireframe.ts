// Perspective view: the prediction grid as an orthographic wireframe the
// user can drag to rotate. Geometry only; the z values are the service's.

import { svgEl } from "./dom";
import type { SurfaceDoc } from "./types";

export interface Camera {
  yaw: number; // rotation about the vertical axis, radians
  pitch: number; // elevation of the viewpoint, radians
}

export function defaultCamera(): Camera {
  return { yaw: -0.6, pitch: 0.5 };
}

/**
 * Project a point with all coordinates normalized to [-1, 1] onto the
 * screen plane: yaw about z, then tilt by pitch, orthographic.
 */
export function project(
  x: number,
  y: number,
  z: number,
  camera: Camera,
): [number, number] {
  const cosYaw = Math.cos(camera.yaw);
  const sinYaw = Math.sin(camera.yaw);
  const xr = x * cosYaw - y * sinYaw;
  const yr = x * sinYaw + y * cosYaw;
  const sy = yr * Math.sin(camera.pitch) + z * Math.cos(camera.pitch);
  return [xr, -sy];
}

function normalized(surface: SurfaceDoc): number[][] {
  let zMin = Infinity;
  let zMax = -Infinity;
  for (const row of surface.z) {
    for (const v of row) {
      if (v < zMin) zMin = v;
      if (v > zMax) zMax = v;
    }
  }
  const span = zMax - zMin;
  return surface.z.map((row) =>
    row.map((v) => (span > 0 ? ((v - zMin) / span) * 2 - 1 : 0)),
  );
}

function axisFractions(count: number): number[] {
  const out = [];
  for (let i = 0; i < count; i++) out.push((i / (count - 1)) * 2 - 1);
  return out;
}

export function renderWireframe(
  surface: SurfaceDoc,
  camera: Camera,
  width = 420,
  height = 420,
): SVGSVGElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    class: "wireframe-plot",
  });
  drawWireframe(svg, surface, camera, width, height);
  return svg;
}

export function drawWireframe(
  svg: SVGSVGElement,
  surface: SurfaceDoc,
  camera: Camera,
  width = 420,
  height = 420,
): void {
  const z = normalized(surface);
  const ny = z.length;
  const nx = z[0]?.length ?? 0;
  if (nx < 2 || ny < 2) return;

  // Subsample large grids so the wireframe stays legible (and cheap).
  const strideX = Math.ceil(nx / 24);
  const strideY = Math.ceil(ny / 24);
  const xs = axisFractions(nx);
  const ys = axisFractions(ny);

  const scale = (Math.min(width, height) / 2) * 0.62;
  const toScreen = (x: number, y: number, zv: number): string => {
    const [px, py] = project(x, y, zv, camera);
    return `${(width / 2 + px * scale).toFixed(2)},${(height / 2 + py * scale).toFixed(2)}`;
  };

  const group = svgEl("g", { class: "wireframe-lines" });
  for (let i = 0; i < ny; i += strideY) {
    const parts = [];
    for (let j = 0; j < nx; j++) {
      parts.push(toScreen(xs[j]!, ys[i]!, z[i]![j]!));
    }
    group.append(
      svgEl("polyline", { points: parts.join(" "), class: "wire-row", fill: "none" }),
    );
  }
  for (let j = 0; j < nx; j += strideX) {
    const parts = [];
    for (let i = 0; i < ny; i++) {
      parts.push(toScreen(xs[j]!, ys[i]!, z[i]![j]!));
    }
    group.append(
      svgEl("polyline", { points: parts.join(" "), class: "wire-col", fill: "none" }),
    );
  }
  svg.append(group);
}

/**
 * Drag to rotate: horizontal drag spins the yaw, vertical drag tilts.
 * The redraw callback re-renders with the mutated camera.
 */
export function attachRotation(
  svg: SVGSVGElement,
  camera: Camera,
  redraw: () => void,
): void {
  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  svg.addEventListener("mousedown", (event) => {
    dragging = true;
    lastX = event.clientX;
    lastY = event.clientY;
  });
  svg.addEventListener("mousemove", (event) => {
    if (!dragging) return;
    camera.yaw += (event.clientX - lastX) * 0.01;
    camera.pitch += (event.clientY - lastY) * 0.01;
    camera.pitch = Math.min(1.45, Math.max(0.05, camera.pitch));
    lastX = event.clientX;
    lastY = event.clientY;
    redraw();
  });
  const stop = () => {
    dragging = false;
  };
  svg.addEventListener("mouseup", stop);
  svg.addEventListener("mouseleave", stop);
}
