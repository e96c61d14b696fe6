// Contour rendering. Polylines arrive from the service in coded units;
// this module only maps them to pixels. The x and y spans share one
// scale factor so angles on screen are angles in coded space (the path
// overlay must cross first-order contours at right angles).

import { svgEl } from "./dom";
import { fmt } from "./format";
import type { PathDoc, SurfaceDoc } from "./types";

export interface ContourOptions {
  width?: number;
  height?: number;
  pad?: number;
}

interface Mapper {
  x(worldX: number): number;
  y(worldY: number): number;
}

function mapper(surface: SurfaceDoc, width: number, height: number, pad: number): Mapper {
  const [x0, x1] = surface.x_range;
  const [y0, y1] = surface.y_range;
  const scale = Math.min((width - 2 * pad) / (x1 - x0), (height - 2 * pad) / (y1 - y0));
  const cx = (x0 + x1) / 2;
  const cy = (y0 + y1) / 2;
  return {
    x: (wx) => width / 2 + (wx - cx) * scale,
    y: (wy) => height / 2 - (wy - cy) * scale,
  };
}

function levelColor(index: number, count: number): string {
  const t = count <= 1 ? 0 : index / (count - 1);
  return `hsl(${Math.round(230 - 190 * t)} 70% 45%)`;
}

function pathData(points: number[][], map: Mapper): string {
  return points
    .map((pt, i) => `${i === 0 ? "M" : "L"}${fmtPx(map.x(pt[0]!))},${fmtPx(map.y(pt[1]!))}`)
    .join("");
}

function fmtPx(v: number): string {
  return v.toFixed(2);
}

export function renderContours(
  surface: SurfaceDoc,
  path: PathDoc | null,
  options: ContourOptions = {},
): SVGSVGElement {
  const width = options.width ?? 420;
  const height = options.height ?? 420;
  const pad = options.pad ?? 30;
  const map = mapper(surface, width, height, pad);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    class: "contour-plot",
  });

  const defs = svgEl("defs");
  const marker = svgEl("marker", {
    id: "path-arrow",
    markerWidth: "9",
    markerHeight: "9",
    refX: "7",
    refY: "4.5",
    orient: "auto",
  });
  marker.append(svgEl("path", { d: "M0,0 L9,4.5 L0,9 z", fill: "#c0392b" }));
  defs.append(marker);
  svg.append(defs);

  svg.append(
    svgEl("rect", {
      x: String(pad),
      y: String(pad),
      width: String(width - 2 * pad),
      height: String(height - 2 * pad),
      class: "plot-frame",
      fill: "none",
    }),
  );

  const levels = surface.contours.levels;
  levels.forEach((level, i) => {
    const group = svgEl("g", { class: "contour-level", "data-level": String(level) });
    for (const polyline of surface.contours.polylines[i] ?? []) {
      if (polyline.length < 2) continue;
      const line = svgEl("path", {
        d: pathData(polyline, map),
        fill: "none",
        stroke: levelColor(i, levels.length),
        "stroke-width": "1.2",
      });
      line.append(svgEl("title", {}, `${fmt(level)}`));
      group.append(line);
    }
    svg.append(group);
  });

  if (path && path.steps.length > 0) {
    svg.append(renderPathOverlay(path, map));
  }

  svg.append(
    svgEl("text", { x: String(width / 2), y: String(height - 6), class: "axis-label" }, surface.x),
    svgEl(
      "text",
      {
        x: "12",
        y: String(height / 2),
        class: "axis-label",
        transform: `rotate(-90 12 ${height / 2})`,
      },
      surface.y,
    ),
  );
  return svg;
}

/**
 * The steepest path as arrowed segments. Steps past the fitted region
 * come flagged from the service and render dashed; the arrowhead rides
 * the last segment.
 */
function renderPathOverlay(path: PathDoc, map: Mapper): SVGGElement {
  const group = svgEl("g", { class: "descent-path" });
  const points = [path.origin, ...path.steps.map((s) => s.coded_point)];
  for (let i = 0; i < path.steps.length; i++) {
    const from = points[i]!;
    const to = points[i + 1]!;
    const step = path.steps[i]!;
    const attrs: Record<string, string> = {
      x1: fmtPx(map.x(from[0]!)),
      y1: fmtPx(map.y(from[1]!)),
      x2: fmtPx(map.x(to[0]!)),
      y2: fmtPx(map.y(to[1]!)),
      class: step.extrapolated ? "path-segment extrapolated" : "path-segment",
      stroke: "#c0392b",
      "stroke-width": "2",
    };
    if (step.extrapolated) attrs["stroke-dasharray"] = "5 4";
    if (i === path.steps.length - 1) attrs["marker-end"] = "url(#path-arrow)";
    group.append(svgEl("line", attrs));
  }
  group.append(
    svgEl("circle", {
      cx: fmtPx(map.x(path.origin[0]!)),
      cy: fmtPx(map.y(path.origin[1]!)),
      r: "3.5",
      class: "path-origin",
      fill: "#c0392b",
    }),
  );
  return group;
}
