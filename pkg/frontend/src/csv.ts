/**
 * CSV reading for gkdvlab artifact tables.
 *
 * Every table starts with a `#schema=gkdvlab.<name>.v<n>` line followed by a
 * header row.  Reads refuse mismatched schemas, empty tables, and missing
 * columns with distinct error types so the CLI can map them to exit codes.
 */

export class SchemaMismatchError extends Error {}
export class EmptyTableError extends Error {}
export class MissingColumnError extends Error {}

export interface Table {
  schema: string;
  columns: string[];
  rows: string[][];
}

export function parseTable(text: string, expectedSchema: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new EmptyTableError("input file is empty");
  }
  const first = lines[0];
  if (!first.startsWith("#schema=")) {
    throw new SchemaMismatchError(
      `missing #schema= line; expected schema ${expectedSchema}`,
    );
  }
  const schema = first.slice("#schema=".length).trim();
  if (schema !== expectedSchema) {
    throw new SchemaMismatchError(
      `schema ${schema} is not supported; this tool reads ${expectedSchema}`,
    );
  }
  if (lines.length < 2) {
    throw new EmptyTableError("table has no header row");
  }
  const columns = lines[1].split(",");
  const rows = lines.slice(2).map((l) => l.split(","));
  if (rows.length === 0) {
    throw new EmptyTableError("table has a header but no data rows");
  }
  for (const [i, row] of rows.entries()) {
    if (row.length !== columns.length) {
      throw new SchemaMismatchError(
        `row ${i + 1} has ${row.length} fields, header has ${columns.length}`,
      );
    }
  }
  return { schema, columns, rows };
}

export function numericColumn(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(
      `column '${name}' not found; table has: ${table.columns.join(", ")}`,
    );
  }
  return table.rows.map((row, i) => {
    const v = Number(row[idx]);
    if (Number.isNaN(v) && row[idx] !== "nan") {
      throw new SchemaMismatchError(
        `row ${i + 1}, column '${name}': not a number: '${row[idx]}'`,
      );
    }
    return v;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(
      `column '${name}' not found; table has: ${table.columns.join(", ")}`,
    );
  }
  return table.rows.map((row) => row[idx]);
}
