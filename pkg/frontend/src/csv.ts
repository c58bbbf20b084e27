/**
 * Reader for coalsim CSV artifacts.
 *
 * Files start with `#` comment lines naming the tool version, the
 * experiment, and the config hash, followed by one header row and
 * numeric data rows. The reader keeps the metadata, checks the header
 * against the columns a figure needs, and hands back typed columns.
 */
import { readFileSync } from "node:fs";

export interface Table {
  /** tool version from the comment header, if present */
  toolVersion?: string;
  /** experiment name from the comment header, if present */
  experiment?: string;
  /** config hash from the comment header, if present */
  configHash?: string;
  columns: string[];
  /** row-major numeric cells, rows.length x columns.length */
  rows: number[][];
}

/** Error thrown when a file does not match the expected schema. */
export class SchemaError extends Error {}

export function parseTable(text: string, path = "<string>"): Table {
  const lines = text.split(/\r?\n/);
  const table: Table = { columns: [], rows: [] };
  let i = 0;
  for (; i < lines.length; i++) {
    const line = lines[i]!;
    if (!line.startsWith("#")) break;
    const body = line.slice(1).trim();
    if (body.startsWith("coalsim ")) table.toolVersion = body.slice(8);
    else if (body.startsWith("experiment ")) table.experiment = body.slice(11);
    else if (body.startsWith("config-hash ")) table.configHash = body.slice(12);
  }
  if (i >= lines.length || lines[i]!.trim() === "") {
    throw new SchemaError(`${path}: no header row`);
  }
  table.columns = lines[i]!.split(",").map((c) => c.trim());
  for (i++; i < lines.length; i++) {
    const line = lines[i]!.trim();
    if (line === "") continue;
    const cells = line.split(",");
    if (cells.length !== table.columns.length) {
      throw new SchemaError(
        `${path}: row ${table.rows.length + 1} has ${cells.length} cells, ` +
          `expected ${table.columns.length}`,
      );
    }
    const row = cells.map((c) => Number(c));
    const bad = row.findIndex((v) => Number.isNaN(v));
    if (bad >= 0) {
      throw new SchemaError(
        `${path}: non-numeric value '${cells[bad]}' in column ` +
          `'${table.columns[bad]}'`,
      );
    }
    table.rows.push(row);
  }
  return table;
}

export function readTable(path: string): Table {
  return parseTable(readFileSync(path, "utf8"), path);
}

/**
 * Return the index of each required column, in order.
 * Throws a SchemaError naming the first missing column.
 */
export function requireColumns(table: Table, names: string[], path = ""): number[] {
  return names.map((name) => {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
      throw new SchemaError(
        `${path ? path + ": " : ""}missing column '${name}' ` +
          `(have: ${table.columns.join(", ")})`,
      );
    }
    return idx;
  });
}

/** Extract one column as a flat array. */
export function column(table: Table, idx: number): number[] {
  return table.rows.map((r) => r[idx]!);
}
