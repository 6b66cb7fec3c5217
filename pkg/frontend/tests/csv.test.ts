import { describe, expect, it } from "vitest";
import {
  EmptyTableError,
  MissingColumnError,
  SchemaMismatchError,
  numericColumn,
  parseTable,
} from "../src/csv.js";

const GOOD = `#schema=gkdvlab.sweep.v1
sigma,deviation,e_sigma0,slope,intercept
0.01,1e-7,4.2,1.2,-8.5
0.1,1e-6,4.3,1.2,-8.5
`;

describe("parseTable", () => {
  it("reads schema, header, and rows", () => {
    const t = parseTable(GOOD, "gkdvlab.sweep.v1");
    expect(t.schema).toBe("gkdvlab.sweep.v1");
    expect(t.columns).toEqual(["sigma", "deviation", "e_sigma0", "slope", "intercept"]);
    expect(t.rows).toHaveLength(2);
    expect(numericColumn(t, "sigma")).toEqual([0.01, 0.1]);
  });

  it("rejects a mismatched schema", () => {
    expect(() => parseTable(GOOD, "gkdvlab.trace.v1")).toThrow(SchemaMismatchError);
  });

  it("rejects a missing schema line", () => {
    expect(() => parseTable("a,b\n1,2\n", "gkdvlab.sweep.v1")).toThrow(SchemaMismatchError);
  });

  it("rejects empty input and header-only tables", () => {
    expect(() => parseTable("", "gkdvlab.sweep.v1")).toThrow(EmptyTableError);
    expect(() =>
      parseTable("#schema=gkdvlab.sweep.v1\nsigma,deviation\n", "gkdvlab.sweep.v1"),
    ).toThrow(EmptyTableError);
  });

  it("rejects ragged rows", () => {
    const ragged = "#schema=gkdvlab.sweep.v1\na,b\n1,2\n3\n";
    expect(() => parseTable(ragged, "gkdvlab.sweep.v1")).toThrow(SchemaMismatchError);
  });

  it("reports missing columns by name", () => {
    const t = parseTable(GOOD, "gkdvlab.sweep.v1");
    expect(() => numericColumn(t, "nope")).toThrow(MissingColumnError);
  });
});
