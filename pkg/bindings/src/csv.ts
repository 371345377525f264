/** Parsers for the comma-separated tables the core persists.
 *
 * The tables never quote fields, so a plain split is exact. Numbers are
 * serialized by the core with shortest-round-trip formatting, which means
 * Number() recovers the identical IEEE double on this side.
 */

export interface MetricsRow {
  time: number;
  robot: number;
  x: number;
  y: number;
  cellsVisited: number;
  pctUnknown: number;
  /** Per-target view counts in the order of the views_<cell> header columns. */
  views: number[];
}

export interface TeamRow {
  time: number;
  coveredCells: number;
  pctUnknown: number;
}

function splitLines(text: string): string[] {
  return text.split("\n").filter((line) => line.length > 0);
}

export function parseMetricsCsv(text: string): { rows: MetricsRow[]; targetCells: number[] } {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new Error("metrics table is empty");
  }
  const header = lines[0]!.split(",");
  const base = ["time", "robot", "x", "y", "cells_visited", "pct_unknown"];
  for (let i = 0; i < base.length; i++) {
    if (header[i] !== base[i]) {
      throw new Error(`unexpected metrics header column ${i}: ${header[i]}`);
    }
  }
  const targetCells = header.slice(base.length).map((name) => {
    if (!name.startsWith("views_")) {
      throw new Error(`unexpected metrics header column: ${name}`);
    }
    return Number(name.slice("views_".length));
  });
  const rows = lines.slice(1).map((line) => {
    const parts = line.split(",");
    return {
      time: Number(parts[0]),
      robot: Number(parts[1]),
      x: Number(parts[2]),
      y: Number(parts[3]),
      cellsVisited: Number(parts[4]),
      pctUnknown: Number(parts[5]),
      views: parts.slice(base.length).map(Number),
    };
  });
  return { rows, targetCells };
}

export function parseTeamCsv(text: string): TeamRow[] {
  const lines = splitLines(text);
  if (lines[0] !== "time,covered_cells,pct_unknown") {
    throw new Error(`unexpected team table header: ${lines[0]}`);
  }
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    return {
      time: Number(parts[0]),
      coveredCells: Number(parts[1]),
      pctUnknown: Number(parts[2]),
    };
  });
}

export function parseJsonl(text: string): unknown[] {
  return splitLines(text).map((line) => JSON.parse(line));
}
