/** Client-side 2D attack semantics for instant overlay feedback.
 *
 * Rays walk cell-by-cell and stop at the first gap in the board, matching
 * the server's attack model on polyominoes.  The server remains
 * authoritative: submit responses are compared against this overlay in
 * dev builds and any discrepancy is surfaced as a bug.
 */

import {
  Cell,
  CellCoverage,
  CoverageOverlay,
  PieceKind,
  keyOf,
} from "./types.js";

const ROOK_STEPS: ReadonlyArray<Cell> = [
  [1, 0],
  [-1, 0],
  [0, 1],
  [0, -1],
];

const QUEEN_STEPS: ReadonlyArray<Cell> = [
  ...ROOK_STEPS,
  [1, 1],
  [1, -1],
  [-1, 1],
  [-1, -1],
];

export function steps(piece: PieceKind): ReadonlyArray<Cell> {
  return piece === "rook" ? ROOK_STEPS : QUEEN_STEPS;
}

/** All cells a piece on `from` attacks (excluding its own cell). */
export function attackedFrom(
  boardSet: ReadonlySet<string>,
  piece: PieceKind,
  from: Cell,
): Cell[] {
  const out: Cell[] = [];
  for (const [dx, dy] of steps(piece)) {
    let x = from[0] + dx;
    let y = from[1] + dy;
    while (boardSet.has(keyOf([x, y]))) {
      out.push([x, y]);
      x += dx;
      y += dy;
    }
  }
  return out;
}

export function boardSetOf(cells: ReadonlyArray<Cell>): Set<string> {
  return new Set(cells.map(keyOf));
}

/** Classify every board cell and derive domination/independence. */
export function computeCoverage(
  boardCells: ReadonlyArray<Cell>,
  piece: PieceKind,
  placed: ReadonlyArray<Cell>,
): CoverageOverlay {
  const boardSet = boardSetOf(boardCells);
  const placedKeys = new Set(placed.map(keyOf));
  const attacked = new Set<string>();
  const conflicts: Array<readonly [Cell, Cell]> = [];

  for (const cell of placed) {
    for (const hit of attackedFrom(boardSet, piece, cell)) {
      const k = keyOf(hit);
      attacked.add(k);
      // Record each attacking pair once, in placement order.
      if (placedKeys.has(k) && (cell[0] < hit[0] || (cell[0] === hit[0] && cell[1] < hit[1]))) {
        conflicts.push([cell, hit]);
      }
    }
  }

  const byCell = new Map<string, CellCoverage>();
  let dominates = true;
  for (const cell of boardCells) {
    const k = keyOf(cell);
    let state: CellCoverage;
    if (placedKeys.has(k)) {
      state = "occupied";
    } else if (attacked.has(k)) {
      state = "attacked";
    } else {
      state = "unguarded";
      dominates = false;
    }
    byCell.set(k, state);
  }

  return { byCell, dominates, independent: conflicts.length === 0, conflicts };
}
