// Campaign setup: factor table plus goal, posted as-is to /campaigns.
// When the decision screen hands over a follow-up prefill, the form
// arrives filled in but nothing is sent until the operator clicks Create.

import { el, mount } from "../dom";
import { fmt } from "../format";
import type { AppContext } from "../context";
import type { FactorDoc } from "../types";

interface FactorRowRefs {
  name: HTMLInputElement;
  low: HTMLInputElement;
  high: HTMLInputElement;
  unit: HTMLInputElement;
  row: HTMLTableRowElement;
}

export function renderSetup(root: HTMLElement, ctx: AppContext): void {
  const prefill = ctx.state.followup;
  const factorRows: FactorRowRefs[] = [];

  const tbody = el("tbody");
  const addFactorRow = (factor?: FactorDoc) => {
    const refs: FactorRowRefs = {
      name: el("input", { value: factor?.name ?? "", placeholder: "speed" }),
      low: el("input", { value: factor ? fmt(factor.low, 6) : "", placeholder: "100" }),
      high: el("input", { value: factor ? fmt(factor.high, 6) : "", placeholder: "200" }),
      unit: el("input", { value: factor?.unit_label ?? "", placeholder: "rpm" }),
      row: el("tr"),
    };
    const remove = el(
      "button",
      {
        type: "button",
        class: "link-button",
        onclick: () => {
          const index = factorRows.indexOf(refs);
          if (index >= 0) factorRows.splice(index, 1);
          refs.row.remove();
        },
      },
      "remove",
    );
    refs.row.append(
      el("td", {}, refs.name),
      el("td", {}, refs.low),
      el("td", {}, refs.high),
      el("td", {}, refs.unit),
      el("td", {}, remove),
    );
    factorRows.push(refs);
    tbody.append(refs.row);
  };

  if (prefill) {
    for (const factor of prefill.factors) addFactorRow(factor);
  } else {
    addFactorRow();
    addFactorRow();
  }

  const nameInput = el("input", {
    id: "campaign-name",
    value: prefill?.name ?? "",
    placeholder: "Adhesive cure study",
  });
  const responseInput = el("input", {
    id: "campaign-response",
    value: prefill?.response_name ?? "",
    placeholder: "hardness",
  });
  const goalSelect = el("select", { id: "campaign-goal" });
  for (const goal of ["minimize", "maximize"]) {
    const option = el("option", { value: goal }, goal);
    if ((prefill?.goal ?? "minimize") === goal) option.setAttribute("selected", "");
    goalSelect.append(option);
  }
  const targetInput = el("input", {
    id: "campaign-target",
    value: prefill?.target_value != null ? fmt(prefill.target_value, 6) : "",
    placeholder: "optional",
  });

  const create = async () => {
    const factors: FactorDoc[] = [];
    for (const refs of factorRows) {
      if (!refs.name.value.trim() && !refs.low.value.trim() && !refs.high.value.trim()) {
        continue; // fully blank row
      }
      factors.push({
        name: refs.name.value.trim(),
        low: Number(refs.low.value),
        high: Number(refs.high.value),
        unit_label: refs.unit.value.trim(),
      });
    }
    try {
      const campaign = await ctx.api.createCampaign({
        name: nameInput.value.trim(),
        factors,
        response_name: responseInput.value.trim(),
        goal: goalSelect.value,
        ...(targetInput.value.trim() === ""
          ? {}
          : { target_value: Number(targetInput.value) }),
      });
      ctx.state.campaign = campaign;
      ctx.state.phase = 0;
      ctx.state.followup = null;
      ctx.state.campaigns = await ctx.api.listCampaigns();
      ctx.navigate("design");
    } catch (fault) {
      ctx.showError(fault);
    }
  };

  mount(
    root,
    el("h2", {}, "New campaign"),
    prefill
      ? el("p", { class: "prefill-note" }, prefill.note)
      : null,
    el(
      "div",
      { class: "form-grid" },
      el("label", {}, "Name", nameInput),
      el("label", {}, "Response", responseInput),
      el("label", {}, "Goal", goalSelect),
      el("label", {}, "Target value", targetInput),
    ),
    el("h3", {}, "Factors"),
    el(
      "table",
      { class: "data-table" },
      el(
        "thead",
        {},
        el(
          "tr",
          {},
          el("th", {}, "name"),
          el("th", {}, "low"),
          el("th", {}, "high"),
          el("th", {}, "unit"),
          el("th", {}, ""),
        ),
      ),
      tbody,
    ),
    el(
      "p",
      {},
      el(
        "button",
        { type: "button", class: "link-button", onclick: () => addFactorRow() },
        "add factor",
      ),
    ),
    el(
      "p",
      {},
      el(
        "button",
        { type: "button", class: "primary", id: "create-campaign", onclick: () => void create() },
        "Create campaign",
      ),
    ),
  );
}
