// Application shell: navigation, campaign/phase selection, and the banner
// slots every screen reports through. Screens are plain render functions;
// the shell owns the single mutable view state and redraws on demand.

import { el, clear, mount } from "./dom";
import { ApiFault, type Api } from "./api";
import { initialState, type AppContext, type ScreenName, type ViewState } from "./context";
import { renderSetup } from "./screens/setup";
import { renderDesign } from "./screens/design";
import { renderEntry } from "./screens/entry";
import { renderAnalysis } from "./screens/analysis";
import { renderSurface } from "./screens/surface";
import { renderDecision } from "./screens/decision";

const SCREENS: Record<ScreenName, (root: HTMLElement, ctx: AppContext) => void> = {
  setup: renderSetup,
  design: renderDesign,
  entry: renderEntry,
  analysis: renderAnalysis,
  surface: renderSurface,
  decision: renderDecision,
};

const LABELS: Record<ScreenName, string> = {
  setup: "Setup",
  design: "Design",
  entry: "Responses",
  analysis: "Analysis",
  surface: "Surface",
  decision: "Decide",
};

function screenEnabled(name: ScreenName, state: ViewState): boolean {
  if (name === "setup") return true;
  if (!state.campaign) return false;
  if (name === "design") return true;
  return state.campaign.phases.length > 0;
}

export function createWorkbench(root: HTMLElement, api: Api): AppContext {
  const state = initialState();

  const ctx: AppContext = {
    state,
    api,
    render,
    navigate(screen: ScreenName) {
      state.screen = screen;
      state.error = null;
      state.notice = null;
      render();
    },
    showError(fault: unknown) {
      if (fault instanceof ApiFault) {
        state.error =
          fault.status === 409
            ? `${fault.message} (completed results are append-only)`
            : `${fault.code}: ${fault.message}`;
      } else {
        state.error = String(fault);
      }
      render();
    },
    async refreshCampaign() {
      if (!state.campaign) return;
      state.campaign = await api.getCampaign(state.campaign.id);
    },
  };

  const openCampaign = async (id: string) => {
    try {
      state.campaign = await api.getCampaign(id);
      state.phase = Math.max(0, state.campaign.phases.length - 1);
      state.analysis = null;
      state.inestimable = [];
      state.surface = null;
      state.lastPhaseCreated = null;
      ctx.navigate(state.campaign.phases.length ? "entry" : "design");
    } catch (fault) {
      ctx.showError(fault);
    }
  };

  const selectPhase = (index: number) => {
    state.phase = index;
    state.analysis = null;
    state.inestimable = [];
    state.surface = null;
    render();
  };

  function sidebar(): HTMLElement {
    const list = el("ul", { class: "campaign-list" });
    for (const summary of state.campaigns) {
      const active = state.campaign?.id === summary.id;
      list.append(
        el(
          "li",
          active ? { class: "active" } : {},
          el(
            "button",
            {
              type: "button",
              class: "link-button",
              onclick: () => void openCampaign(summary.id),
            },
            `${summary.name} (${summary.n_phases} phase${summary.n_phases === 1 ? "" : "s"})`,
          ),
        ),
      );
    }
    return el(
      "aside",
      { class: "sidebar" },
      el("h2", {}, "Campaigns"),
      state.campaigns.length ? list : el("p", {}, "none yet"),
    );
  }

  function navTabs(): HTMLElement {
    const nav = el("nav", { class: "tabs" });
    for (const name of Object.keys(SCREENS) as ScreenName[]) {
      const button = el(
        "button",
        {
          type: "button",
          class: state.screen === name ? "tab active" : "tab",
          "data-screen": name,
          onclick: () => ctx.navigate(name),
        },
        LABELS[name],
      );
      if (!screenEnabled(name, state)) button.disabled = true;
      nav.append(button);
    }
    return nav;
  }

  function phasePicker(): HTMLElement | null {
    const campaign = state.campaign;
    if (!campaign || campaign.phases.length === 0) return null;
    const select = el("select", { id: "phase-picker" });
    campaign.phases.forEach((phase, i) => {
      const option = el(
        "option",
        { value: String(i) },
        `phase ${i} (${phase.worksheet_status})`,
      );
      if (i === state.phase) option.setAttribute("selected", "");
      select.append(option);
    });
    select.addEventListener("change", () => selectPhase(Number(select.value)));
    return el("label", { class: "phase-picker" }, "Phase ", select);
  }

  function banners(): HTMLElement[] {
    const out: HTMLElement[] = [];
    if (state.error) {
      out.push(
        el(
          "div",
          { class: "error", role: "alert" },
          state.error,
          " ",
          el(
            "button",
            {
              type: "button",
              class: "link-button",
              onclick: () => {
                state.error = null;
                render();
              },
            },
            "dismiss",
          ),
        ),
      );
    }
    if (state.notice) {
      out.push(el("div", { class: "notice" }, state.notice));
    }
    return out;
  }

  function render(): void {
    clear(root);
    const main = el("main", { class: "screen" });
    SCREENS[state.screen](main, ctx);
    const campaignLine = state.campaign
      ? el(
          "p",
          { class: "campaign-line" },
          `${state.campaign.name}: ${state.campaign.goal} ` +
            `${state.campaign.response_name}` +
            (state.campaign.target_value === null
              ? ""
              : ` toward ${state.campaign.target_value}`),
          " ",
          phasePicker(),
        )
      : null;
    mount(
      root,
      el(
        "div",
        { class: "layout" },
        sidebar(),
        el(
          "div",
          { class: "content" },
          el("header", {}, el("h1", {}, "Response surface workbench"), navTabs()),
          campaignLine,
          ...banners(),
          main,
        ),
      ),
    );
  }

  void (async () => {
    try {
      state.campaigns = await api.listCampaigns();
    } catch {
      // service offline; the setup screen still renders
    }
    render();
  })();

  render();
  return ctx;
}
