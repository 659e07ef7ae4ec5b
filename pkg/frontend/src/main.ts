/** DOM entry point: render loop and event wiring.
 *
 * Single-threaded; at most one submit is in flight at a time.  All game
 * logic lives in attack.ts / state.ts; this file only draws and forwards
 * events.
 */

import { ApiClient, ApiError, DEFAULT_BASE_URL } from "./api.js";
import { applySubmit, newGame, toggleCell, UiState } from "./state.js";
import { Cell, PieceKind, keyOf } from "./types.js";

const DEV_MODE = new URLSearchParams(location.search).has("dev");
const baseUrl =
  new URLSearchParams(location.search).get("api") ?? DEFAULT_BASE_URL;
const api = new ApiClient(baseUrl);

let state: UiState | null = null;
let submitting = false;

const boardEl = document.getElementById("board") as HTMLDivElement;
const bannerEl = document.getElementById("banner") as HTMLDivElement;
const resultEl = document.getElementById("result") as HTMLDivElement;
const pieceEl = document.getElementById("piece") as HTMLSelectElement;
const tilesEl = document.getElementById("tiles") as HTMLInputElement;
const newGameEl = document.getElementById("new-game") as HTMLButtonElement;
const submitEl = document.getElementById("submit") as HTMLButtonElement;
const hintEl = document.getElementById("hint") as HTMLButtonElement;

function banner(message: string | null): void {
  bannerEl.textContent = message ?? "";
  bannerEl.hidden = message === null;
}

function render(): void {
  boardEl.replaceChildren();
  if (!state) return;
  const cells = state.session.board.cells;
  const xs = cells.map((c) => c[0]);
  const ys = cells.map((c) => c[1]);
  const minX = Math.min(...xs);
  const minY = Math.min(...ys);
  boardEl.style.gridTemplateColumns = `repeat(${Math.max(...xs) - minX + 1}, 1.6rem)`;
  boardEl.style.gridTemplateRows = `repeat(${Math.max(...ys) - minY + 1}, 1.6rem)`;

  const lastUnguarded = new Set(
    (state.lastResult?.unguarded ?? []).map((c) => keyOf(c as Cell)),
  );
  for (const cell of cells) {
    const div = document.createElement("div");
    const coverage = state.overlay.byCell.get(keyOf(cell)) ?? "unguarded";
    div.className = `cell ${coverage}`;
    if (lastUnguarded.has(keyOf(cell))) div.classList.add("flash");
    div.style.gridColumn = String(cell[0] - minX + 1);
    // Row 1 is at the top; board y grows upward.
    div.style.gridRow = String(Math.max(...ys) - cell[1] + 1);
    if (coverage === "occupied") {
      div.textContent = state.session.piece === "rook" ? "♜" : "♛";
    }
    div.addEventListener("click", () => {
      if (!state) return;
      state = toggleCell(state, cell);
      render();
    });
    boardEl.appendChild(div);
  }

  const placed = state.placed.length;
  const parts = [`${placed} placed`];
  if (state.overlay.dominates) parts.push("dominating");
  if (!state.overlay.independent) parts.push("pieces attack each other");
  const last = state.lastResult;
  if (last) {
    if (last.status === "bound") {
      parts.push(`optimum not proven; at least ${last.bound} needed`);
    } else if (last.delta === 0) {
      parts.push("optimal — perfect game!");
    } else if (last.delta !== null) {
      parts.push(`${last.delta} above the optimum of ${last.optimal}`);
    } else if (!last.dominates) {
      parts.push("not dominating yet");
    }
  }
  resultEl.textContent = parts.join(" · ");
}

async function startGame(): Promise<void> {
  banner(null);
  try {
    const session = await api.newSession(
      pieceEl.value as PieceKind,
      Number(tilesEl.value) || 50,
    );
    state = newGame(session);
    render();
  } catch (err) {
    state = null;
    render();
    banner(
      err instanceof ApiError
        ? `service error: ${err.message}`
        : "cannot reach the game service — is it running?",
    );
  }
}

async function submit(): Promise<void> {
  if (!state || submitting) return;
  submitting = true;
  submitEl.disabled = true;
  try {
    const result = await api.submit(state.session.id, state.placed);
    if (DEV_MODE) {
      // The client overlay must agree with the authoritative verdict.
      console.assert(
        result.dominates === state.overlay.dominates &&
          result.independent === state.overlay.independent,
        "overlay disagrees with server verify",
        { client: state.overlay, server: result },
      );
    }
    state = applySubmit(state, result);
    render();
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      banner("session expired — start a new game");
    } else {
      banner("submit failed — check the service connection");
    }
  } finally {
    submitting = false;
    submitEl.disabled = false;
  }
}

async function hint(): Promise<void> {
  if (!state) return;
  try {
    const h = await api.hint(state.session.id);
    banner(
      h.status === "optimal"
        ? `hint: the optimum is ${h.optimal} pieces`
        : `hint: at least ${h.bound} pieces are needed (optimum unproven)`,
    );
  } catch {
    banner("hint failed — check the service connection");
  }
}

newGameEl.addEventListener("click", () => void startGame());
submitEl.addEventListener("click", () => void submit());
hintEl.addEventListener("click", () => void hint());
void startGame();
