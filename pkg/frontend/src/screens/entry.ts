// Response entry grid. Cell text lives in a localStorage draft until the
// operator explicitly saves; saving sends only the edited runs, and the
// service response (not the local buffer) decides the resulting status.

import { el, mount } from "../dom";
import { fmt, factorLabel, naturalOf, parseCell } from "../format";
import { loadDraft, saveDraft, clearDraft, dropEntries, runKey } from "../drafts";
import { ApiFault } from "../api";
import type { AppContext } from "../context";
import type { ResponseEntry } from "../types";

interface CellRefs {
  key: string;
  input: HTMLInputElement;
  server: number | null;
  std_order: number;
  block: number;
}

export function renderEntry(root: HTMLElement, ctx: AppContext): void {
  const campaign = ctx.state.campaign;
  const phaseDoc = campaign?.phases[ctx.state.phase];
  if (!campaign || !phaseDoc) {
    mount(root, el("p", {}, "No phase selected; create one on the design screen."));
    return;
  }
  const complete = phaseDoc.worksheet_status === "complete";
  const draft = loadDraft(campaign.id, ctx.state.phase);
  const cells: CellRefs[] = [];

  const serverText = (value: number | null): string =>
    value === null ? "" : fmt(value, 6);

  const markCell = (cell: CellRefs) => {
    const raw = cell.input.value;
    const parsed = parseCell(raw);
    cell.input.classList.toggle("invalid", parsed === undefined);
    const matchesServer =
      parsed !== undefined &&
      (parsed === null ? cell.server === null : parsed === cell.server);
    cell.input.classList.toggle("dirty", !matchesServer);
  };

  const onInput = (cell: CellRefs) => {
    const raw = cell.input.value;
    if (raw === serverText(cell.server)) {
      delete draft.values[cell.key];
    } else {
      draft.values[cell.key] = raw;
    }
    saveDraft(campaign.id, ctx.state.phase, draft);
    markCell(cell);
  };

  // --- grid ---------------------------------------------------------------
  const header = el(
    "tr",
    {},
    el("th", {}, "run"),
    el("th", {}, "std"),
    el("th", {}, "block"),
  );
  for (const factor of phaseDoc.design.factors) {
    header.append(el("th", {}, factorLabel(factor)));
  }
  header.append(el("th", {}, campaign.response_name));

  const tbody = el("tbody");
  const indexed = phaseDoc.design.points.map((point, i) => ({ point, i }));
  indexed.sort((a, b) => a.point.run_order - b.point.run_order);
  for (const { point, i } of indexed) {
    const key = runKey(point.std_order, point.block);
    const server = phaseDoc.responses[i] ?? null;
    const input = el("input", {
      value: draft.values[key] ?? serverText(server),
      "data-run": key,
      inputmode: "decimal",
    });
    if (complete) input.disabled = true;
    const cell: CellRefs = {
      key, input, server,
      std_order: point.std_order, block: point.block,
    };
    input.addEventListener("input", () => onInput(cell));
    cells.push(cell);
    markCell(cell);

    const tr = el(
      "tr",
      {},
      el("td", {}, String(point.run_order)),
      el("td", {}, String(point.std_order)),
      el("td", {}, String(point.block)),
    );
    phaseDoc.design.factors.forEach((factor, j) => {
      tr.append(el("td", {}, fmt(naturalOf(point.coded[j] ?? 0, factor), 4)));
    });
    tr.append(el("td", {}, input));
    tbody.append(tr);
  }

  // --- actions ------------------------------------------------------------
  const save = async () => {
    const entries: ResponseEntry[] = [];
    const savedKeys: string[] = [];
    let invalid = 0;
    for (const cell of cells) {
      const parsed = parseCell(cell.input.value);
      if (parsed === undefined) {
        invalid += 1;
        continue;
      }
      if (parsed === null || parsed === cell.server) continue;
      entries.push({ std_order: cell.std_order, block: cell.block, value: parsed });
      savedKeys.push(cell.key);
    }
    if (entries.length === 0) {
      ctx.state.notice = invalid
        ? "nothing saved: the edited cells are not valid numbers"
        : "nothing to save";
      ctx.render();
      return;
    }
    try {
      const result = await ctx.api.putResponses(campaign.id, ctx.state.phase, entries);
      dropEntries(campaign.id, ctx.state.phase, savedKeys);
      ctx.state.notice =
        `saved ${entries.length} response(s); ` +
        `${result.filled}/${result.runs} filled (${result.worksheet_status})` +
        (invalid ? `; ${invalid} invalid cell(s) left unsaved` : "");
      await ctx.refreshCampaign();
      ctx.render();
    } catch (fault) {
      if (fault instanceof ApiFault && fault.status === 409) {
        ctx.state.error =
          "this phase is already complete; recorded responses are " +
          "append-only and cannot be changed from the workbench";
        ctx.render();
        return;
      }
      ctx.showError(fault);
    }
  };

  const discard = () => {
    clearDraft(campaign.id, ctx.state.phase);
    ctx.state.notice = "draft discarded";
    ctx.render();
  };

  const editedCount = Object.keys(draft.values).length;
  mount(
    root,
    el("h2", {}, `Enter responses, phase ${ctx.state.phase}`),
    el(
      "p",
      {},
      complete
        ? "This phase is complete; its responses are read-only."
        : "Type measured values into the last column. Edits are kept in this " +
          "browser until you save them; nothing reaches the project file " +
          "until you click Save.",
    ),
    el("table", { class: "data-table", id: "entry-grid" },
      el("thead", {}, header), tbody),
    complete
      ? null
      : el(
          "p",
          {},
          el(
            "button",
            { type: "button", class: "primary", id: "save-responses", onclick: () => void save() },
            "Save responses",
          ),
          " ",
          el(
            "button",
            { type: "button", class: "link-button", id: "discard-draft", onclick: discard },
            editedCount ? `discard draft (${editedCount} cell(s))` : "discard draft",
          ),
        ),
  );
}
