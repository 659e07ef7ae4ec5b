"""HTTP service backing the game UI.

Endpoints:

* ``POST /session`` — create a session with a random polyomino.
* ``POST /session/{id}/submit`` — verify a placement and score it against
  the session's optimal value.
* ``GET /session/{id}/hint`` — reveal the optimal value only (never the
  witness).

Sessions are in-memory with TTL eviction (default 1 h).  Scoring uses the
attacking minimum-domination variant; independence is reported
informationally.  Each session solves at most once (the value is cached);
solves are bounded by a 60 s budget — when it is exhausted the session
reports status "bound" with the best proven lower bound and a null optimal.
"""

from __future__ import annotations

import argparse
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .attack import Piece, Placement, verify
from .board import Board, random_polyomino
from .errors import OffBoardPiece
from .solver import Budget, Objective, Problem, Status, compile, solve

SESSION_TTL_SECONDS = 3600
SOLVE_BUDGET_MS = 60_000
DEFAULT_TILES = 50
MAX_TILES = 500


@dataclass
class GameSession:
    id: str
    board: Board
    piece: Piece
    created_at: float
    optimal: Optional[int] = None
    solve_status: Optional[str] = None
    bound: Optional[int] = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def solved(self) -> bool:
        return self.solve_status is not None


class _SessionStore:
    """Thread-safe in-memory session map with TTL eviction."""

    def __init__(self, ttl: float = SESSION_TTL_SECONDS):
        self._ttl = ttl
        self._lock = threading.Lock()
        self._sessions: dict[str, GameSession] = {}

    def add(self, session: GameSession) -> None:
        with self._lock:
            self._evict()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> GameSession:
        with self._lock:
            self._evict()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def _evict(self) -> None:
        deadline = time.time() - self._ttl
        stale = [sid for sid, s in self._sessions.items() if s.created_at < deadline]
        for sid in stale:
            del self._sessions[sid]


class NewSessionRequest(BaseModel):
    piece: str
    tiles: int = Field(default=DEFAULT_TILES)
    seed: Optional[int] = None


class SubmitRequest(BaseModel):
    cells: list[list[int]]


def _ensure_solved(session: GameSession) -> None:
    """Compute and cache the session's optimal value, once per session.

    The lock is per-session: concurrent submits on one session await the
    same solve, other sessions are unaffected.
    """
    with session.lock:
        if session.solved():
            return
        problem = Problem(
            session.board, session.piece, Objective.MINIMIZE, domination=True
        )
        solution = solve(
            compile(problem), Budget(max_millis=SOLVE_BUDGET_MS), backend="auto"
        )
        if solution.status is Status.OPTIMAL:
            session.optimal = solution.value
            session.solve_status = "optimal"
        else:
            session.optimal = None
            session.bound = solution.bound
            session.solve_status = "bound"


def create_app() -> FastAPI:
    app = FastAPI(title="polydom game service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = _SessionStore()

    @app.post("/session")
    def new_session(req: NewSessionRequest):
        try:
            piece = Piece(req.piece)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unsupported piece {req.piece!r}")
        if not 1 <= req.tiles <= MAX_TILES:
            raise HTTPException(status_code=400, detail=f"tiles must be 1..{MAX_TILES}")
        seed = req.seed if req.seed is not None else uuid.uuid4().int & 0x7FFFFFFF
        board = random_polyomino(req.tiles, seed=seed)
        session = GameSession(
            id=uuid.uuid4().hex, board=board, piece=piece, created_at=time.time()
        )
        store.add(session)
        return {"id": session.id, "board": board.to_json_obj(), "piece": piece.value}

    @app.post("/session/{session_id}/submit")
    def submit(session_id: str, req: SubmitRequest):
        session = store.get(session_id)
        placement = Placement(
            piece=session.piece, cells=frozenset(tuple(c) for c in req.cells)
        )
        try:
            report = verify(session.board, session.piece, placement)
        except OffBoardPiece as err:
            raise HTTPException(status_code=422, detail=str(err))
        _ensure_solved(session)
        count = len(placement.cells)
        delta = (
            count - session.optimal
            if report.dominates and session.optimal is not None
            else None
        )
        return {
            "dominates": report.dominates,
            "independent": report.independent,
            "count": count,
            "optimal": session.optimal,
            "delta": delta,
            "status": session.solve_status,
            "bound": session.bound,
            "unguarded": [list(c) for c in report.unguarded],
        }

    @app.get("/session/{session_id}/hint")
    def hint(session_id: str):
        session = store.get(session_id)
        _ensure_solved(session)
        return {
            "optimal": session.optimal,
            "status": session.solve_status,
            "bound": session.bound,
        }

    return app


app = create_app()


def main(argv=None) -> None:
    import uvicorn

    parser = argparse.ArgumentParser(prog="polydom-service")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
