// Design screen: request a new phase from the service and show the
// resulting worksheet. Run settings come back from the service in natural
// units already; the table displays them verbatim.

import { el, mount } from "../dom";
import { fmt, factorLabel, naturalOf } from "../format";
import type { AppContext } from "../context";
import type { CampaignDoc, DesignRequest, WorksheetRow } from "../types";

function worksheetTable(campaign: CampaignDoc, rows: WorksheetRow[]): HTMLTableElement {
  const header = el(
    "tr",
    {},
    el("th", {}, "run"),
    el("th", {}, "std"),
    el("th", {}, "block"),
  );
  for (const factor of campaign.factors) {
    header.append(el("th", {}, factorLabel(factor)));
  }
  header.append(el("th", {}, campaign.response_name));

  const tbody = el("tbody");
  for (const row of rows) {
    const tr = el(
      "tr",
      {},
      el("td", {}, String(row.run_order)),
      el("td", {}, String(row.std_order)),
      el("td", {}, String(row.block)),
    );
    for (const factor of campaign.factors) {
      tr.append(el("td", {}, fmt(row.settings[factor.name], 4)));
    }
    tr.append(el("td", {}, row.response === null ? "" : fmt(row.response, 4)));
    tbody.append(tr);
  }
  return el("table", { class: "data-table", id: "worksheet-preview" },
    el("thead", {}, header), tbody);
}

/** Rebuild worksheet rows for an existing phase from the campaign document. */
function rowsFromPhase(campaign: CampaignDoc, phase: number): WorksheetRow[] {
  const doc = campaign.phases[phase];
  if (!doc) return [];
  const indexed = doc.design.points.map((point, i) => ({ point, i }));
  indexed.sort((a, b) => a.point.run_order - b.point.run_order);
  return indexed.map(({ point, i }) => {
    const settings: Record<string, number> = {};
    doc.design.factors.forEach((factor, j) => {
      settings[factor.name] = naturalOf(point.coded[j] ?? 0, factor);
    });
    return {
      run_order: point.run_order,
      std_order: point.std_order,
      block: point.block,
      settings,
      response: doc.responses[i] ?? null,
    };
  });
}

export function renderDesign(root: HTMLElement, ctx: AppContext): void {
  const campaign = ctx.state.campaign;
  if (!campaign) {
    mount(root, el("p", {}, "Create or open a campaign first."));
    return;
  }

  // --- new-phase form -----------------------------------------------------
  const typeSelect = el("select", { id: "design-type" });
  for (const [value, label] of [
    ["ccd", "central composite"],
    ["factorial", "full factorial"],
    ["bbd", "Box-Behnken"],
  ] as const) {
    typeSelect.append(el("option", { value }, label));
  }
  const alphaSelect = el("select", { id: "design-alpha" });
  for (const [value, label] of [
    ["rotatable", "rotatable"],
    ["face", "face-centered"],
    ["none", "no axial points"],
    ["custom", "custom distance"],
  ] as const) {
    alphaSelect.append(el("option", { value }, label));
  }
  const alphaCustom = el("input", { value: "1.5", size: "6", id: "design-alpha-custom" });
  const centers = el("input", { value: "3", size: "4", id: "design-centers" });
  const replicates = el("input", { value: "1", size: "4", id: "design-replicates" });
  const blocks = el("select", { id: "design-blocks" });
  blocks.append(el("option", { value: "1" }, "1"));
  blocks.append(el("option", { value: "2" }, "2"));
  const seed = el("input", { value: "0", size: "6", id: "design-seed" });

  const syncAlphaRow = () => {
    const isCcd = typeSelect.value === "ccd";
    alphaSelect.disabled = !isCcd;
    alphaCustom.disabled = !isCcd || alphaSelect.value !== "custom";
    blocks.disabled = !isCcd;
  };
  typeSelect.addEventListener("change", syncAlphaRow);
  alphaSelect.addEventListener("change", syncAlphaRow);
  syncAlphaRow();

  const addPhase = async () => {
    const body: DesignRequest = {
      type: typeSelect.value,
      centers: Number(centers.value),
      seed: Number(seed.value),
    };
    if (typeSelect.value === "ccd") {
      body.alpha = alphaSelect.value === "custom"
        ? Number(alphaCustom.value)
        : alphaSelect.value;
      body.replicates = Number(replicates.value);
      body.blocks = Number(blocks.value);
    }
    try {
      const created = await ctx.api.addPhase(campaign.id, body);
      ctx.state.lastPhaseCreated = created;
      ctx.state.phase = created.phase;
      ctx.state.analysis = null;
      ctx.state.surface = null;
      ctx.state.notice =
        `phase ${created.phase} created: ${created.n_runs} runs` +
        (created.alpha === null ? "" : `, axial distance ${fmt(created.alpha, 6)}`);
      await ctx.refreshCampaign();
      ctx.render();
    } catch (fault) {
      ctx.showError(fault);
    }
  };

  // --- current phase worksheet -------------------------------------------
  const phaseDoc = campaign.phases[ctx.state.phase];
  const created = ctx.state.lastPhaseCreated;
  const rows = created && created.phase === ctx.state.phase
    ? created.worksheet
    : rowsFromPhase(campaign, ctx.state.phase);

  mount(
    root,
    el("h2", {}, "Experiment design"),
    el(
      "div",
      { class: "form-grid" },
      el("label", {}, "Design", typeSelect),
      el("label", {}, "Axial points", alphaSelect, alphaCustom),
      el("label", {}, "Center runs per block", centers),
      el("label", {}, "Factorial replicates", replicates),
      el("label", {}, "Blocks", blocks),
      el("label", {}, "Shuffle seed", seed),
    ),
    el(
      "p",
      {},
      el(
        "button",
        { type: "button", class: "primary", id: "add-phase", onclick: () => void addPhase() },
        "Add phase",
      ),
    ),
    phaseDoc
      ? el(
          "section",
          {},
          el("h3", {}, `Phase ${ctx.state.phase} worksheet (${phaseDoc.worksheet_status})`),
          el(
            "p",
            {},
            el(
              "a",
              { href: ctx.api.worksheetUrl(campaign.id, ctx.state.phase), download: "" },
              "download worksheet.csv",
            ),
          ),
          worksheetTable(campaign, rows),
        )
      : el("p", {}, "No phases yet; add one above."),
  );
}
