// Decision screen: the analysis read back as actions. It tabulates the
// service's path steps in natural units, summarizes the stationary point,
// and can pre-fill a follow-up campaign centered on a chosen step. The
// pre-fill only populates the setup form; creating it stays a human act.

import { el, mount } from "../dom";
import { fmt, fmtP, factorLabel, naturalOf } from "../format";
import type { AppContext, FollowupPrefill } from "../context";
import type { CampaignDoc, PathStepDoc } from "../types";

function followupFrom(
  campaign: CampaignDoc,
  phase: number,
  step: PathStepDoc,
): FollowupPrefill {
  const factors = campaign.factors.map((factor, j) => {
    const half = (factor.high - factor.low) / 2;
    const center = naturalOf(step.coded_point[j] ?? 0, factor);
    return {
      name: factor.name,
      low: center - half,
      high: center + half,
      unit_label: factor.unit_label,
    };
  });
  return {
    name: `${campaign.name} follow-up`,
    factors,
    response_name: campaign.response_name,
    goal: campaign.goal,
    target_value: campaign.target_value,
    note:
      `Ranges re-centered on the phase ${phase} path step at radius ` +
      `${fmt(step.radius, 3)} (same spans as before). Check them, then ` +
      `create the campaign.`,
  };
}

export function renderDecision(root: HTMLElement, ctx: AppContext): void {
  const campaign = ctx.state.campaign;
  const phaseDoc = campaign?.phases[ctx.state.phase];
  if (!campaign || !phaseDoc) {
    mount(root, el("p", {}, "No phase selected; create one on the design screen."));
    return;
  }
  const analysis = ctx.state.analysis ?? phaseDoc.analysis;
  if (!analysis) {
    mount(
      root,
      el("h2", {}, "Next step"),
      el("p", {}, "Run an analysis first; the recommendations come from it."),
    );
    return;
  }

  const sections: (HTMLElement | null)[] = [];

  // --- stationary point ---------------------------------------------------
  const stationary = analysis.stationary;
  if (stationary) {
    const where =
      stationary.coded === null
        ? "not located (flat curvature direction)"
        : campaign.factors
            .map((factor, j) => {
              const natural = naturalOf(stationary.coded?.[j] ?? 0, factor);
              return `${factor.name} = ${fmt(natural, 4)}` +
                (factor.unit_label ? ` ${factor.unit_label}` : "");
            })
            .join(", ");
    sections.push(
      el(
        "section",
        {},
        el("h3", {}, "Stationary point"),
        el(
          "p",
          { id: "stationary-summary" },
          `${stationary.nature} at ${where}` +
            (stationary.predicted === null
              ? ""
              : `; predicted ${campaign.response_name} = ${fmt(stationary.predicted, 4)}`),
        ),
        el(
          "p",
          {},
          "curvature eigenvalues: " +
            stationary.eigenvalues.map((v) => fmt(v, 4)).join(", "),
        ),
      ),
    );
  }

  // --- path table ---------------------------------------------------------
  const path = analysis.path;
  let chosen: PathStepDoc | null = null;
  if (path && path.steps.length > 0) {
    chosen =
      path.steps.filter((s) => !s.extrapolated).at(-1) ?? path.steps[0] ?? null;

    const header = el("tr", {}, el("th", {}, ""), el("th", {}, "radius"));
    for (const factor of campaign.factors) {
      header.append(el("th", {}, `${factor.name} (coded)`));
    }
    for (const factor of campaign.factors) {
      header.append(el("th", {}, factorLabel(factor)));
    }
    header.append(el("th", {}, `predicted ${campaign.response_name}`));
    header.append(el("th", {}, ""));

    const tbody = el("tbody");
    for (const step of path.steps) {
      const pick = el("input", { type: "radio", name: "path-step" });
      pick.checked = step === chosen;
      pick.addEventListener("change", () => {
        chosen = step;
      });
      const tr = el("tr", {}, el("td", {}, pick), el("td", {}, fmt(step.radius, 3)));
      campaign.factors.forEach((_factor, j) => {
        tr.append(el("td", {}, fmt(step.coded_point[j] ?? 0, 3)));
      });
      campaign.factors.forEach((factor, j) => {
        tr.append(el("td", {}, fmt(naturalOf(step.coded_point[j] ?? 0, factor), 4)));
      });
      tr.append(el("td", {}, fmt(step.predicted, 4)));
      tr.append(
        el(
          "td",
          step.extrapolated ? { class: "extrapolated" } : {},
          step.extrapolated ? "outside fitted region" : "",
        ),
      );
      tbody.append(tr);
    }

    const startFollowup = () => {
      if (!chosen) return;
      ctx.state.followup = followupFrom(campaign, ctx.state.phase, chosen);
      ctx.navigate("setup");
    };

    sections.push(
      el(
        "section",
        {},
        el("h3", {}, path.goal === "maximize" ? "Steepest ascent" : "Steepest descent"),
        el("table", { class: "data-table", id: "path-table" },
          el("thead", {}, header), tbody),
        el(
          "p",
          {},
          el(
            "button",
            { type: "button", class: "primary", id: "start-followup", onclick: startFollowup },
            "Start follow-up campaign from the selected step",
          ),
        ),
      ),
    );
  } else {
    sections.push(
      el(
        "section",
        {},
        el("h3", {}, "Direction"),
        el("p", {}, analysis.path_note || "the fitted model suggests no move"),
      ),
    );
  }

  // --- significance recap -------------------------------------------------
  if (analysis.tests) {
    const significant = analysis.tests
      .filter((t) => t.term !== "Intercept" && t.p_value < ctx.state.threshold)
      .map((t) => `${t.term} (p=${fmtP(t.p_value)})`);
    sections.push(
      el(
        "p",
        {},
        significant.length
          ? `Terms below the ${fmt(ctx.state.threshold, 4)} threshold: ` +
            significant.join(", ")
          : `No term clears the ${fmt(ctx.state.threshold, 4)} threshold; ` +
            "consider replicates or wider ranges before moving.",
      ),
    );
  }

  mount(root, el("h2", {}, "Next step"), ...sections);
}
