/** Shared types mirroring the service's JSON contract. */

export type Cell = readonly [number, number];

export type PieceKind = "rook" | "queen";

export interface BoardData {
  readonly dim: number;
  readonly cells: ReadonlyArray<Cell>;
}

export interface SessionData {
  readonly id: string;
  readonly board: BoardData;
  readonly piece: PieceKind;
}

export interface SubmitResult {
  readonly dominates: boolean;
  readonly independent: boolean;
  readonly count: number;
  readonly optimal: number | null;
  readonly delta: number | null;
  readonly status: "optimal" | "bound";
  readonly bound: number | null;
  readonly unguarded: ReadonlyArray<Cell>;
}

export interface HintResult {
  readonly optimal: number | null;
  readonly status: "optimal" | "bound";
  readonly bound: number | null;
}

/** Per-cell coverage classification for the live overlay. */
export type CellCoverage = "occupied" | "attacked" | "unguarded";

export interface CoverageOverlay {
  /** Classification for every board cell, keyed by `keyOf(cell)`. */
  readonly byCell: ReadonlyMap<string, CellCoverage>;
  /** True when no board cell is unguarded. */
  readonly dominates: boolean;
  /** True when no placed piece attacks another. */
  readonly independent: boolean;
  /** Pairs of placed cells attacking each other. */
  readonly conflicts: ReadonlyArray<readonly [Cell, Cell]>;
}

export function keyOf(cell: Cell): string {
  return `${cell[0]},${cell[1]}`;
}
