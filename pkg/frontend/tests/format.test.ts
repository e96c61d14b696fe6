import { describe, expect, it } from "vitest";
import { fmt, fmtP, parseCell, naturalOf, factorLabel } from "../src/format";

describe("fmt", () => {
  it("trims trailing zeros", () => {
    expect(fmt(1.5)).toBe("1.5");
    expect(fmt(2)).toBe("2");
    expect(fmt(-0.25)).toBe("-0.25");
  });

  it("keeps the requested precision", () => {
    expect(fmt(1.23456789, 4)).toBe("1.2346");
    expect(fmt(1.23456789, 2)).toBe("1.23");
  });

  it("switches to exponential for extreme magnitudes", () => {
    expect(fmt(123456.7)).toMatch(/e\+/);
    expect(fmt(0.00001)).toMatch(/e-/);
    expect(fmt(0)).toBe("0");
  });

  it("renders empty for missing values", () => {
    expect(fmt(null)).toBe("");
    expect(fmt(undefined)).toBe("");
  });
});

describe("fmtP", () => {
  it("floors tiny p-values for display", () => {
    expect(fmtP(3.2e-7)).toBe("<0.0001");
    expect(fmtP(0)).toBe("0");
    expect(fmtP(0.0321)).toBe("0.0321");
  });
});

describe("parseCell", () => {
  it("parses plain decimals", () => {
    expect(parseCell("12.5")).toBe(12.5);
    expect(parseCell("  -3 ")).toBe(-3);
    expect(parseCell("+.5")).toBe(0.5);
    expect(parseCell("1e-3")).toBe(0.001);
  });

  it("maps empty text to null", () => {
    expect(parseCell("")).toBeNull();
    expect(parseCell("   ")).toBeNull();
  });

  it("rejects anything that is not a plain number", () => {
    expect(parseCell("12,5")).toBeUndefined();
    expect(parseCell("abc")).toBeUndefined();
    expect(parseCell("1/2")).toBeUndefined();
    expect(parseCell("Infinity")).toBeUndefined();
    expect(parseCell("0x10")).toBeUndefined();
  });
});

describe("naturalOf", () => {
  const speed = { low: 100, high: 200 };

  it("maps the coded anchors to the range ends", () => {
    expect(naturalOf(-1, speed)).toBe(100);
    expect(naturalOf(1, speed)).toBe(200);
    expect(naturalOf(0, speed)).toBe(150);
  });

  it("extends linearly past the anchors", () => {
    expect(naturalOf(1.5, speed)).toBe(225);
    expect(naturalOf(-Math.SQRT2, speed)).toBeCloseTo(100 - 50 * (Math.SQRT2 - 1), 12);
  });
});

describe("factorLabel", () => {
  it("appends the unit when present", () => {
    expect(factorLabel({ name: "speed", unit_label: "rpm" })).toBe("speed [rpm]");
    expect(factorLabel({ name: "ratio", unit_label: "" })).toBe("ratio");
  });
});
