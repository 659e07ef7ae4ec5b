/** Pure UI state transitions: board cells are never mutated, only the
 * placement changes.  Rendering reads the state; it never writes it.
 */

import { computeCoverage } from "./attack.js";
import {
  Cell,
  CoverageOverlay,
  SessionData,
  SubmitResult,
  keyOf,
} from "./types.js";

export interface UiState {
  readonly session: SessionData;
  readonly placed: ReadonlyArray<Cell>;
  readonly overlay: CoverageOverlay;
  readonly lastResult: SubmitResult | null;
}

function withOverlay(
  session: SessionData,
  placed: ReadonlyArray<Cell>,
  lastResult: SubmitResult | null,
): UiState {
  return {
    session,
    placed,
    overlay: computeCoverage(session.board.cells, session.piece, placed),
    lastResult,
  };
}

export function newGame(session: SessionData): UiState {
  return withOverlay(session, [], null);
}

/** Place or remove a piece; clicking an off-board cell is a no-op. */
export function toggleCell(state: UiState, cell: Cell): UiState {
  const onBoard = state.session.board.cells.some(
    (c) => keyOf(c) === keyOf(cell),
  );
  if (!onBoard) {
    return state;
  }
  const k = keyOf(cell);
  const had = state.placed.some((c) => keyOf(c) === k);
  const placed = had
    ? state.placed.filter((c) => keyOf(c) !== k)
    : [...state.placed, cell];
  return withOverlay(state.session, placed, state.lastResult);
}

export function applySubmit(state: UiState, result: SubmitResult): UiState {
  return { ...state, lastResult: result };
}
