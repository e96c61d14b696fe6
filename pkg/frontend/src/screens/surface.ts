// Surface screen: contour map and rotatable wireframe of the fitted model,
// built entirely from the grid the service evaluated. The descent path from
// the current analysis is overlaid when its factors match the plotted pair.

import { el, mount } from "../dom";
import { fmt } from "../format";
import { renderContours } from "../contour";
import { defaultCamera, renderWireframe, drawWireframe, attachRotation, type Camera } from "../wireframe";
import type { AppContext } from "../context";

// Camera persists across re-renders so the plot does not snap back.
const camera: Camera = defaultCamera();

export function renderSurface(root: HTMLElement, ctx: AppContext): void {
  const campaign = ctx.state.campaign;
  const phaseDoc = campaign?.phases[ctx.state.phase];
  if (!campaign || !phaseDoc) {
    mount(root, el("p", {}, "No phase selected; create one on the design screen."));
    return;
  }
  const params = ctx.state.surfaceParams;
  const names = campaign.factors.map((f) => f.name);
  if (!names.includes(params.x)) params.x = names[0] ?? "";
  if (!names.includes(params.y) || params.y === params.x) {
    params.y = names.find((n) => n !== params.x) ?? "";
  }

  const makeAxisSelect = (axis: "x" | "y"): HTMLSelectElement => {
    const select = el("select", { id: `surface-${axis}` });
    for (const name of names) {
      const option = el("option", { value: name }, name);
      if (params[axis] === name) option.setAttribute("selected", "");
      select.append(option);
    }
    select.addEventListener("change", () => {
      params[axis] = select.value;
    });
    return select;
  };
  const xSelect = makeAxisSelect("x");
  const ySelect = makeAxisSelect("y");
  const gridInput = el("input", { value: String(params.grid), size: "4" });
  const levelsInput = el("input", { value: String(params.levels), size: "4" });

  const fetchSurface = async () => {
    const grid = Number(gridInput.value);
    const levels = Number(levelsInput.value);
    if (Number.isInteger(grid) && grid >= 2) params.grid = grid;
    if (Number.isInteger(levels) && levels >= 1) params.levels = levels;
    try {
      ctx.state.surface = await ctx.api.getSurface(campaign.id, ctx.state.phase, {
        x: params.x,
        y: params.y,
        grid: params.grid,
        levels: params.levels,
      });
      ctx.render();
    } catch (fault) {
      ctx.showError(fault);
    }
  };

  const surface = ctx.state.surface;
  const plotArea = el("div", { class: "plot-row" });
  if (surface) {
    const analysis = ctx.state.analysis ?? phaseDoc.analysis;
    // The path lives in the space of all k factors; it is drawn only when
    // the plot shows the first two, whose coordinates the overlay reads.
    const path = analysis?.path ?? null;
    const showPath = path !== null && surface.x === names[0] && surface.y === names[1];
    const contour = renderContours(surface, showPath ? path : null);
    const wire = renderWireframe(surface, camera);
    attachRotation(wire, camera, () => {
      while (wire.firstChild) wire.removeChild(wire.firstChild);
      drawWireframe(wire, surface, camera);
    });
    plotArea.append(
      el("figure", {},
        contour,
        el("figcaption", {}, `response contours, ${surface.x} vs ${surface.y}`)),
      el("figure", {},
        wire,
        el("figcaption", {}, "drag to rotate")),
    );
    if (analysis && analysis.path === null && analysis.path_note) {
      plotArea.append(el("p", { class: "prefill-note" }, analysis.path_note));
    }
  }

  mount(
    root,
    el("h2", {}, `Response surface, phase ${ctx.state.phase}`),
    el(
      "div",
      { class: "form-grid" },
      el("label", {}, "Horizontal factor ", xSelect),
      el("label", {}, "Vertical factor ", ySelect),
      el("label", {}, "Grid points per axis ", gridInput),
      el("label", {}, "Contour levels ", levelsInput),
    ),
    el(
      "p",
      {},
      el(
        "button",
        { type: "button", class: "primary", id: "draw-surface", onclick: () => void fetchSurface() },
        "Draw surface",
      ),
    ),
    surface
      ? el(
          "p",
          {},
          `coded ranges: ${surface.x} in [${fmt(surface.x_range[0], 3)}, ` +
            `${fmt(surface.x_range[1], 3)}], ${surface.y} in ` +
            `[${fmt(surface.y_range[0], 3)}, ${fmt(surface.y_range[1], 3)}]`,
        )
      : el("p", {}, "No surface drawn yet. The phase needs a stored analysis " +
          "or a complete worksheet."),
    plotArea,
  );
}
