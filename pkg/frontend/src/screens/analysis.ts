// Analysis screen: choose term groups, ask the service for a fit, and show
// its coefficient and variance tables. Every figure in the tables is copied
// from the analysis document; the only local computation is the comparison
// against the significance threshold used for row highlighting.

import { el, mount } from "../dom";
import { fmt, fmtP } from "../format";
import { ApiFault } from "../api";
import type { AppContext } from "../context";
import type { AnalysisDoc } from "../types";

function coefficientTable(
  analysis: AnalysisDoc,
  threshold: number,
  inestimable: string[],
): HTMLElement {
  if (analysis.tests === null) {
    return el(
      "p",
      {},
      "The model uses every degree of freedom, so standard errors and ",
      "p-values are unavailable. Coefficients: ",
      analysis.fitted.term_names
        .map((name, i) => `${name}=${fmt(analysis.fitted.coefficients[i], 4)}`)
        .join(", "),
    );
  }
  const tbody = el("tbody");
  for (const test of analysis.tests) {
    const significant = test.p_value < threshold;
    const tr = el(
      "tr",
      significant ? { class: "sig" } : {},
      el("td", {}, test.term),
      el("td", {}, fmt(test.estimate, 4)),
      el("td", {}, fmt(test.std_error, 4)),
      el("td", {}, test.t_stat === null ? "" : fmt(test.t_stat, 3)),
      el("td", {}, fmtP(test.p_value)),
    );
    tbody.append(tr);
  }
  for (const term of inestimable) {
    tbody.append(
      el(
        "tr",
        { class: "invalid" },
        el("td", {}, term),
        el("td", { colspan: "4" }, "not estimable with this design"),
      ),
    );
  }
  return el(
    "table",
    { class: "data-table", id: "coefficient-table" },
    el(
      "thead",
      {},
      el(
        "tr",
        {},
        el("th", {}, "term"),
        el("th", {}, "estimate"),
        el("th", {}, "std error"),
        el("th", {}, "t"),
        el("th", {}, "p"),
      ),
    ),
    tbody,
  );
}

function anovaTable(analysis: AnalysisDoc): HTMLElement {
  const tbody = el("tbody");
  for (const row of analysis.anova.rows) {
    tbody.append(
      el(
        "tr",
        {},
        el("td", {}, row.source),
        el("td", {}, fmt(row.ss, 4)),
        el("td", {}, String(row.df)),
        el("td", {}, row.df > 0 ? fmt(row.ms, 4) : ""),
        el("td", {}, row.f_stat === null ? "" : fmt(row.f_stat, 3)),
        el("td", {}, row.p_value === null ? "" : fmtP(row.p_value)),
      ),
    );
  }
  return el(
    "table",
    { class: "data-table", id: "anova-table" },
    el(
      "thead",
      {},
      el(
        "tr",
        {},
        el("th", {}, "source"),
        el("th", {}, "SS"),
        el("th", {}, "df"),
        el("th", {}, "MS"),
        el("th", {}, "F"),
        el("th", {}, "p"),
      ),
    ),
    tbody,
  );
}

export function renderAnalysis(root: HTMLElement, ctx: AppContext): void {
  const campaign = ctx.state.campaign;
  const phaseDoc = campaign?.phases[ctx.state.phase];
  if (!campaign || !phaseDoc) {
    mount(root, el("p", {}, "No phase selected; create one on the design screen."));
    return;
  }

  const blockCount = new Set(phaseDoc.design.points.map((p) => p.block)).size;
  const terms = ctx.state.terms;

  const fo = el("input", { type: "checkbox", checked: true });
  fo.disabled = true; // the first-order group anchors every model
  const twi = el("input", { type: "checkbox", id: "term-twi" });
  twi.checked = terms.twi;
  twi.addEventListener("change", () => {
    terms.twi = twi.checked;
  });
  const pq = el("input", { type: "checkbox", id: "term-pq" });
  pq.checked = terms.pq;
  pq.addEventListener("change", () => {
    terms.pq = pq.checked;
  });
  const block = el("input", { type: "checkbox", id: "term-block" });
  block.checked = terms.block && blockCount === 2;
  block.disabled = blockCount !== 2;
  block.addEventListener("change", () => {
    terms.block = block.checked;
  });

  const thresholdInput = el("input", {
    value: String(ctx.state.threshold),
    size: "6",
    id: "sig-threshold",
  });
  thresholdInput.addEventListener("change", () => {
    const value = Number(thresholdInput.value);
    if (Number.isFinite(value) && value > 0 && value < 1) {
      ctx.state.threshold = value;
    }
    ctx.render();
  });

  const analyze = async () => {
    const requested = ["fo"];
    if (terms.twi) requested.push("twi");
    if (terms.pq) requested.push("pq");
    if (terms.block && blockCount === 2) requested.push("block");
    try {
      const analysis = await ctx.api.runAnalysis(campaign.id, ctx.state.phase, {
        terms: requested,
      });
      ctx.state.analysis = analysis;
      ctx.state.inestimable = [];
      ctx.state.notice = null;
      await ctx.refreshCampaign();
      ctx.render();
    } catch (fault) {
      if (fault instanceof ApiFault && fault.code === "RankDeficient") {
        const detail = fault.detail as { terms?: string[] } | null;
        ctx.state.inestimable = detail?.terms ?? [];
        ctx.state.error =
          `${fault.message}; drop the flagged term group or add runs`;
        ctx.render();
        return;
      }
      ctx.showError(fault);
    }
  };

  // Prefer the fresh result; fall back to what the project file stored.
  const analysis = ctx.state.analysis ?? phaseDoc.analysis;

  mount(
    root,
    el("h2", {}, `Analyze phase ${ctx.state.phase}`),
    el(
      "div",
      { class: "form-grid" },
      el("label", {}, fo, " first-order terms"),
      el("label", {}, twi, " two-factor interactions"),
      el("label", {}, pq, " pure quadratics"),
      el(
        "label",
        blockCount === 2 ? {} : { title: "needs a two-block design" },
        block,
        " block effect",
      ),
      el("label", {}, "Significance threshold ", thresholdInput),
    ),
    el(
      "p",
      {},
      el(
        "button",
        { type: "button", class: "primary", id: "run-analysis", onclick: () => void analyze() },
        "Analyze",
      ),
    ),
    analysis
      ? el(
          "section",
          {},
          el(
            "p",
            {},
            `R² = ${fmt(analysis.fitted.r_squared, 4)}, ` +
              `residual df = ${analysis.fitted.df_residual}, ` +
              `s² = ${fmt(analysis.fitted.sigma2, 4)}`,
          ),
          el("h3", {}, "Coefficients"),
          coefficientTable(analysis, ctx.state.threshold, ctx.state.inestimable),
          el("h3", {}, "Variance decomposition"),
          anovaTable(analysis),
          ctx.state.analysis === null
            ? el("p", { class: "prefill-note" },
                "showing the stored analysis from the project file")
            : null,
        )
      : el("p", {}, "No analysis yet for this phase."),
  );
}
