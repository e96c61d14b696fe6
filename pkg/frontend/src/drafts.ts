// Worksheet drafts in localStorage: raw cell text keyed by run identity,
// so half-entered sheets survive a page reload until saved or discarded.
// Storage failures (private mode, disabled) degrade to no persistence.

export interface Draft {
  // `${std_order}:${block}` -> raw text exactly as typed
  values: Record<string, string>;
}

export function runKey(stdOrder: number, block: number): string {
  return `${stdOrder}:${block}`;
}

function storageKey(campaignId: string, phase: number): string {
  return `rsmkit.draft.${campaignId}.${phase}`;
}

export function loadDraft(campaignId: string, phase: number): Draft {
  try {
    const raw = localStorage.getItem(storageKey(campaignId, phase));
    if (raw) {
      const parsed = JSON.parse(raw);
      if (parsed && typeof parsed.values === "object" && parsed.values !== null) {
        const values: Record<string, string> = {};
        for (const [key, value] of Object.entries(parsed.values)) {
          if (typeof value === "string") values[key] = value;
        }
        return { values };
      }
    }
  } catch {
    // fall through to an empty draft
  }
  return { values: {} };
}

export function saveDraft(campaignId: string, phase: number, draft: Draft): void {
  try {
    if (Object.keys(draft.values).length === 0) {
      localStorage.removeItem(storageKey(campaignId, phase));
    } else {
      localStorage.setItem(storageKey(campaignId, phase), JSON.stringify(draft));
    }
  } catch {
    // storage unavailable; the in-memory buffer still works
  }
}

export function clearDraft(campaignId: string, phase: number): void {
  try {
    localStorage.removeItem(storageKey(campaignId, phase));
  } catch {
    // nothing to clear
  }
}

/** Drop the given runs from the draft (after a successful save). */
export function dropEntries(
  campaignId: string,
  phase: number,
  keys: string[],
): Draft {
  const draft = loadDraft(campaignId, phase);
  for (const key of keys) delete draft.values[key];
  saveDraft(campaignId, phase, draft);
  return draft;
}
