// Display formatting. Values are shown rounded but never altered before
// display-independent use; anything sent back to the service is the
// operator's raw input, parsed, not a reformatted echo.

/** Compact fixed-ish rendering: trims trailing zeros, keeps magnitude. */
export function fmt(value: number | null | undefined, digits = 4): string {
  if (value === null || value === undefined) return "";
  if (!Number.isFinite(value)) return String(value);
  const abs = Math.abs(value);
  if (abs !== 0 && (abs >= 1e5 || abs < 1e-4)) {
    return value.toExponential(Math.max(1, digits - 1));
  }
  const fixed = value.toFixed(digits);
  return fixed.includes(".")
    ? fixed.replace(/0+$/, "").replace(/\.$/, "")
    : fixed;
}

/** p-values: tiny ones collapse to a floor display instead of 0. */
export function fmtP(p: number | null | undefined): string {
  if (p === null || p === undefined) return "";
  if (p !== 0 && p < 1e-4) return "<0.0001";
  return fmt(p, 4);
}

/**
 * Parse one worksheet cell. Returns the number, null for an empty cell,
 * or undefined when the text is not a plain finite decimal (the dialect
 * is `.`-decimal; locale commas are rejected, not guessed at).
 */
export function parseCell(text: string): number | null | undefined {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  if (!/^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/.test(trimmed)) return undefined;
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : undefined;
}

export function naturalOf(
  coded: number,
  factor: { low: number; high: number },
): number {
  const center = (factor.high + factor.low) / 2;
  const half = (factor.high - factor.low) / 2;
  return center + coded * half;
}

export function factorLabel(f: { name: string; unit_label: string }): string {
  return f.unit_label ? `${f.name} [${f.unit_label}]` : f.name;
}
