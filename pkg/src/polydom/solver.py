"""Exact solver for domination/independence problems on polycube boards.

Problems compile to binary linear constraints over one 0/1 variable per cell:
packing constraints (at most one piece per maximal attack line) when
independence is required, covering constraints (at least one attacker per
cell) when domination is required.  Solving is an exact depth-first
branch-and-bound — no LP relaxation — with unit propagation on packing
lines, covering-failure pruning, and greedy combinatorial bounds.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Optional

from .attack import AttackIndex, Piece, Placement, build_attack_index
from .board import Board, Cell
from .errors import TooLarge


class Objective(Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


class Status(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    BUDGET_EXCEEDED = "Budget-Exceeded"


@dataclass(frozen=True)
class Problem:
    """A domination/independence optimization problem on a board."""

    board: Board
    piece: Piece
    objective: Objective
    independence: bool = False
    domination: bool = False

    def __post_init__(self):
        if not (self.independence or self.domination):
            raise ValueError("enable at least one of independence/domination")


@dataclass(frozen=True)
class Budget:
    """Search limits; the solve stops at whichever is hit first."""

    max_nodes: int = 10**8
    max_millis: int = 300_000

    @staticmethod
    def default() -> "Budget":
        env = os.environ.get("POLYDOM_BUDGET_MS")
        if env:
            return Budget(max_millis=int(env))
        return Budget()


@dataclass(frozen=True)
class ConstraintSystem:
    """Compiled binary constraints; variables are cells indexed 1..m."""

    cells: tuple[Cell, ...]
    piece: Piece
    sense: Objective
    packing: tuple[tuple[int, ...], ...]
    covering: tuple[tuple[int, ...], ...]

    @property
    def var_count(self) -> int:
        return len(self.cells)


@dataclass
class Solution:
    status: Status
    value: Optional[int]
    witness: Optional[Placement]
    all_optima: Optional[list[Placement]] = None
    nodes: int = 0
    millis: int = 0
    bound: Optional[int] = None

    def to_json_obj(self) -> dict:
        return {
            "status": self.status.value,
            "value": self.value,
            "witness": sorted(list(c) for c in self.witness.cells) if self.witness else None,
            "optima_count": len(self.all_optima) if self.all_optima is not None else None,
            "nodes": self.nodes,
            "millis": self.millis,
        }


def compile(problem: Problem, index: AttackIndex | None = None) -> ConstraintSystem:
    """Compile a problem into packing/covering constraints.

    Packing sets are the maximal attack lines of length >= 2, deduplicated;
    covering sets are the attacker sets A_i, deduplicated.
    """
    if index is None:
        index = build_attack_index(problem.board, problem.piece)
    packing: tuple[tuple[int, ...], ...] = ()
    covering: tuple[tuple[int, ...], ...] = ()
    if problem.independence:
        seen = set()
        rows = []
        for line in index.lines:
            if len(line) < 2:
                continue
            key = tuple(sorted(line))
            if key not in seen:
                seen.add(key)
                rows.append(key)
        packing = tuple(sorted(rows))
    if problem.domination:
        seen = set()
        rows = []
        for i in sorted(index.attackers):
            key = tuple(sorted(index.attackers[i]))
            if key not in seen:
                seen.add(key)
                rows.append(key)
        covering = tuple(sorted(rows))
    return ConstraintSystem(
        cells=index.cells,
        piece=problem.piece,
        sense=problem.objective,
        packing=packing,
        covering=covering,
    )


def dump_lp(system: ConstraintSystem) -> str:
    """Render the system in an LP-text style, one constraint per line."""
    m = system.var_count
    obj = " + ".join(f"x{i}" for i in range(1, m + 1))
    lines = [f"{'max' if system.sense is Objective.MAXIMIZE else 'min'}: {obj};"]
    for row in system.packing:
        lines.append(" + ".join(f"x{i}" for i in row) + " <= 1")
    for row in system.covering:
        lines.append(" + ".join(f"x{i}" for i in row) + " >= 1")
    lines.append("binary: " + " ".join(f"x{i}" for i in range(1, m + 1)) + ";")
    return "\n".join(lines) + "\n"


class _BudgetHit(Exception):
    pass


class _Search:
    """Shared state of one branch-and-bound run over a ConstraintSystem."""

    def __init__(
        self,
        system: ConstraintSystem,
        budget: Budget,
        forced_true: Iterable[int] = (),
        forced_false: Iterable[int] = (),
    ):
        self.system = system
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_millis / 1000.0
        m = system.var_count
        self.m = m
        self.all_mask = (1 << m) - 1

        # Conflict adjacency from packing lines (bit v-1 per variable v).
        adj = [0] * (m + 1)
        for row in system.packing:
            row_mask = 0
            for v in row:
                row_mask |= 1 << (v - 1)
            for v in row:
                adj[v] |= row_mask & ~(1 << (v - 1))
        self.adj = adj
        self.line_masks = [sum(1 << (v - 1) for v in row) for row in system.packing]

        # Covering rows as masks, and per-variable "rows this var satisfies".
        self.cover_rows = [sum(1 << (v - 1) for v in row) for row in system.covering]
        self.cover_all = (1 << len(self.cover_rows)) - 1
        satisfies = [0] * (m + 1)
        for r, row in enumerate(system.covering):
            for v in row:
                satisfies[v] |= 1 << r
        self.satisfies = satisfies

        # Static branching order: highest conflict degree first.  Examining
        # high-degree vars early keeps greedy cover classes few and tight.
        self.static_order = sorted(
            range(1, m + 1), key=lambda v: (-adj[v].bit_count(), v)
        )

        self.forced_true_mask = sum(1 << (v - 1) for v in forced_true)
        self.forced_false_mask = sum(1 << (v - 1) for v in forced_false)
        if self.forced_true_mask & self.forced_false_mask:
            raise ValueError("a variable is forced both true and false")

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetHit()
        if self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise _BudgetHit()

    # ---- maximize (packing) ----

    def _forced_start_max(self):
        chosen = self.forced_true_mask
        for v in range(1, self.m + 1):
            if chosen >> (v - 1) & 1 and self.adj[v] & chosen:
                return None  # forced pieces attack each other
        cand = self.all_mask & ~chosen & ~self.forced_false_mask
        for v in range(1, self.m + 1):
            if chosen >> (v - 1) & 1:
                cand &= ~self.adj[v]
        return chosen, cand

    def _order_by_cover(self, cand: int) -> list[tuple[int, int]]:
        """Greedy clique-cover numbering of candidate vars.

        Returns (var, class_index) pairs in ascending class order; an
        independent set meets each clique class at most once, so
        class_index + 1 upper-bounds the independent vars among the
        first portion of the list.
        """
        classes_common: list[int] = []  # common neighbourhood of each class
        out: list[tuple[int, int]] = []
        adj = self.adj
        for v in self.static_order:
            bit = 1 << (v - 1)
            if not cand & bit:
                continue
            for k, common in enumerate(classes_common):
                if common & bit:
                    classes_common[k] = common & adj[v]
                    out.append((v, k))
                    break
            else:
                out.append((v, len(classes_common)))
                classes_common.append(adj[v] & cand)
        out.sort(key=lambda p: p[1])
        return out

    def solve_max(self) -> tuple[Optional[int], Optional[int]]:
        """Returns (best size, best chosen mask) or (None, None) if infeasible."""
        start = self._forced_start_max()
        if start is None:
            return None, None
        chosen0, cand0 = start
        self.best = chosen0.bit_count() - 1  # allow finding the forced-only set
        self.best_mask: Optional[int] = None

        def expand(cand: int, chosen: int, size: int):
            self.tick()
            if cand == 0:
                if size > self.best and self._dominates(chosen):
                    self.best = size
                    self.best_mask = chosen
                return
            ordered = self._order_by_cover(cand)
            for v, cls in reversed(ordered):
                if size + cls + 1 <= self.best:
                    return
                bit = 1 << (v - 1)
                expand(cand & ~bit & ~self.adj[v], chosen | bit, size + 1)
                cand &= ~bit

        expand(cand0, chosen0, chosen0.bit_count())
        if self.best_mask is None:
            return None, None
        return self.best, self.best_mask

    def enumerate_max(self, target: int, limit: int = 1_000_000) -> list[int]:
        found: list[int] = []
        start = self._forced_start_max()
        if start is None:
            return found
        chosen0, cand0 = start

        def expand(cand: int, chosen: int, size: int):
            self.tick()
            if cand == 0:
                if size == target and self._dominates(chosen):
                    found.append(chosen)
                    if len(found) > limit:
                        raise _BudgetHit()
                return
            ordered = self._order_by_cover(cand)
            for v, cls in reversed(ordered):
                if size + cls + 1 < target:
                    return
                bit = 1 << (v - 1)
                expand(cand & ~bit & ~self.adj[v], chosen | bit, size + 1)
                cand &= ~bit

        expand(cand0, chosen0, chosen0.bit_count())
        return found

    def _dominates(self, chosen: int) -> bool:
        if not self.cover_rows:
            return True
        sat = 0
        rest = chosen
        while rest:
            bit = rest & -rest
            rest ^= bit
            sat |= self.satisfies[bit.bit_length()]
        return sat == self.cover_all

    # ---- minimize (covering, optional packing) ----

    def _forced_start_min(self):
        chosen = self.forced_true_mask
        banned = self.forced_false_mask
        if self.system.packing:
            for v in range(1, self.m + 1):
                if chosen >> (v - 1) & 1:
                    if self.adj[v] & chosen:
                        return None
                    banned |= self.adj[v]
        sat = 0
        rest = chosen
        while rest:
            bit = rest & -rest
            rest ^= bit
            sat |= self.satisfies[bit.bit_length()]
        return chosen, banned, sat

    def _min_lower_bound(self, sat_rows: int, banned: int) -> int:
        """Count pairwise-disjoint unsatisfied covering rows (each needs its
        own new piece)."""
        pending = []
        for r, row in enumerate(self.cover_rows):
            if not sat_rows >> r & 1:
                avail = row & ~banned
                pending.append((avail.bit_count(), avail))
        pending.sort()
        used = 0
        lb = 0
        for _, avail in pending:
            if avail & used == 0:
                lb += 1
                used |= avail
        return lb

    def solve_min(self) -> tuple[Optional[int], Optional[int]]:
        start = self._forced_start_min()
        if start is None:
            return None, None
        chosen0, banned0, sat0 = start
        self.best = self.m + 1
        self.best_mask = None

        def expand(chosen: int, banned: int, sat: int, size: int):
            self.tick()
            if sat == self.cover_all:
                if size < self.best:
                    self.best = size
                    self.best_mask = chosen
                return
            if size + self._min_lower_bound(sat, banned | chosen) >= self.best:
                return
            # Branch on the unsatisfied row with the fewest candidates.
            pick_avail, pick_count = None, None
            for r, row in enumerate(self.cover_rows):
                if not sat >> r & 1:
                    avail = row & ~banned & ~chosen
                    cnt = avail.bit_count()
                    if cnt == 0:
                        return  # covering failure: this row can't be met
                    if pick_count is None or cnt < pick_count:
                        pick_avail, pick_count = avail, cnt
                        if cnt == 1:
                            break
            rest = pick_avail
            while rest:
                bit = rest & -rest
                rest ^= bit
                v = bit.bit_length()
                extra_ban = self.adj[v] if self.system.packing else 0
                expand(chosen | bit, banned | extra_ban, sat | self.satisfies[v], size + 1)
                banned |= bit  # later branches must cover the row differently

        expand(chosen0, banned0, sat0, chosen0.bit_count())
        if self.best_mask is None:
            return None, None
        return self.best, self.best_mask

    def enumerate_min(self, target: int, limit: int = 1_000_000) -> list[int]:
        found: set[int] = set()
        start = self._forced_start_min()
        if start is None:
            return []
        chosen0, banned0, sat0 = start

        def expand(chosen: int, banned: int, sat: int, size: int):
            self.tick()
            if sat == self.cover_all:
                if size == target:
                    found.add(chosen)
                    if len(found) > limit:
                        raise _BudgetHit()
                return
            if size + self._min_lower_bound(sat, banned | chosen) > target:
                return
            pick_avail = None
            pick_count = None
            for r, row in enumerate(self.cover_rows):
                if not sat >> r & 1:
                    avail = row & ~banned & ~chosen
                    cnt = avail.bit_count()
                    if cnt == 0:
                        return
                    if pick_count is None or cnt < pick_count:
                        pick_avail, pick_count = avail, cnt
                        if cnt == 1:
                            break
            rest = pick_avail
            while rest:
                bit = rest & -rest
                rest ^= bit
                v = bit.bit_length()
                extra_ban = self.adj[v] if self.system.packing else 0
                expand(chosen | bit, banned | extra_ban, sat | self.satisfies[v], size + 1)
                banned |= bit

        expand(chosen0, banned0, sat0, chosen0.bit_count())
        return sorted(found)


@dataclass(frozen=True)
class SolverBackend:
    """A named exact backend; all backends must agree on optimal values."""

    name: str
    enumerate_all: bool = True


DFS_BACKEND = SolverBackend(name="dfs")
MILP_BACKEND = SolverBackend(name="milp")

# Boards above these sizes route to the MILP backend under backend="auto";
# below them the built-in branch-and-bound is both exact and fast.  The
# covering search degrades earlier than the packing search, hence the lower
# minimization threshold.
_AUTO_MILP_THRESHOLD = 180
_AUTO_MILP_MIN_THRESHOLD = 100


def _milp_available() -> bool:
    try:
        from scipy.optimize import milp  # noqa: F401

        return True
    except ImportError:
        return False


def _pick_backend(system: ConstraintSystem, backend: str) -> str:
    if backend == "auto":
        m = system.var_count
        big = m > _AUTO_MILP_THRESHOLD or (
            system.sense is Objective.MINIMIZE and m > _AUTO_MILP_MIN_THRESHOLD
        )
        if big and _milp_available():
            return "milp"
        return "dfs"
    if backend not in ("dfs", "milp"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _milp_solve_masks(
    system: ConstraintSystem,
    budget: Budget,
    forced_true: Iterable[int],
    forced_false: Iterable[int],
    blocked: list[int],
    fixed_value: Optional[int] = None,
) -> tuple[Optional[int], Optional[int]]:
    """One MILP solve; returns (value, support mask) or (None, None)."""
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    m = system.var_count
    rows = []
    lo, hi = [], []
    for row in system.packing:
        rows.append(row)
        lo.append(-np.inf)
        hi.append(1.0)
    for row in system.covering:
        rows.append(row)
        lo.append(1.0)
        hi.append(np.inf)
    blocked_rows = []
    for mask in blocked:
        support = tuple(i + 1 for i in range(m) if mask >> i & 1)
        rows.append(support)
        lo.append(-np.inf)
        hi.append(float(len(support) - 1))
        blocked_rows.append(support)
    constraints = []
    if rows:
        A = np.zeros((len(rows), m))
        for r, row in enumerate(rows):
            for v in row:
                A[r, v - 1] = 1.0
        constraints.append(LinearConstraint(A, lo, hi))
    if fixed_value is not None:
        constraints.append(LinearConstraint(np.ones((1, m)), fixed_value, fixed_value))
    lb = np.zeros(m)
    ub = np.ones(m)
    for v in forced_true:
        lb[v - 1] = 1.0
    for v in forced_false:
        ub[v - 1] = 0.0
    sign = -1.0 if system.sense is Objective.MAXIMIZE else 1.0
    res = milp(
        c=sign * np.ones(m),
        constraints=constraints,
        integrality=np.ones(m),
        bounds=Bounds(lb, ub),
        options={"time_limit": budget.max_millis / 1000.0, "presolve": True},
    )
    if not res.success:
        return None, None
    mask = 0
    for i in range(m):
        if res.x[i] > 0.5:
            mask |= 1 << i
    return mask.bit_count(), mask


def _mask_to_placement(system: ConstraintSystem, mask: int) -> Placement:
    cells = frozenset(system.cells[i] for i in range(system.var_count) if mask >> i & 1)
    return Placement(piece=system.piece, cells=cells)


def solve(
    system: ConstraintSystem,
    budget: Budget | None = None,
    forced_true: Iterable[int] = (),
    forced_false: Iterable[int] = (),
    backend: str = "dfs",
) -> Solution:
    """Exact optimum of a compiled system within the budget.

    `forced_true`/`forced_false` pin variables (1-based cell indices) before
    the search; used for gadget state checks.  `backend` is "dfs" (built-in
    branch-and-bound, the default), "milp" (external MILP via scipy/HiGHS),
    or "auto" (MILP for large boards when available).
    """
    budget = budget or Budget.default()
    if _pick_backend(system, backend) == "milp":
        t0 = time.monotonic()
        value, mask = _milp_solve_masks(system, budget, forced_true, forced_false, [])
        millis = int((time.monotonic() - t0) * 1000)
        if mask is None:
            status = Status.BUDGET_EXCEEDED if millis >= budget.max_millis else Status.INFEASIBLE
            return Solution(status=status, value=None, witness=None, millis=millis)
        return Solution(
            status=Status.OPTIMAL,
            value=value,
            witness=_mask_to_placement(system, mask),
            millis=millis,
        )
    search = _Search(system, budget, forced_true, forced_false)
    t0 = time.monotonic()
    try:
        if system.sense is Objective.MAXIMIZE:
            value, mask = search.solve_max()
        else:
            value, mask = search.solve_min()
        status = Status.OPTIMAL if mask is not None else Status.INFEASIBLE
    except _BudgetHit:
        value, mask = (search.best, search.best_mask) if search.best_mask is not None else (None, None)
        status = Status.BUDGET_EXCEEDED
    millis = int((time.monotonic() - t0) * 1000)
    witness = _mask_to_placement(system, mask) if mask is not None else None
    return Solution(
        status=status,
        value=value if mask is not None else None,
        witness=witness,
        nodes=search.nodes,
        millis=millis,
    )


def enumerate_optima(
    system: ConstraintSystem,
    budget: Budget | None = None,
    forced_true: Iterable[int] = (),
    forced_false: Iterable[int] = (),
    backend: str = "dfs",
) -> Solution:
    """Solve, then collect every optimal placement.

    Each found optimum is excluded (its exact support blocked) and the search
    continues until no further solution of optimal size exists; the result
    list is deterministic (sorted by support).
    """
    budget = budget or Budget.default()
    first = solve(system, budget, forced_true, forced_false, backend=backend)
    if first.status is not Status.OPTIMAL:
        return first
    if _pick_backend(system, backend) == "milp":
        t0 = time.monotonic()
        deadline = t0 + budget.max_millis / 1000.0
        blocked: list[int] = []
        while True:
            left = Budget(max_millis=max(1, int((deadline - time.monotonic()) * 1000)))
            value, mask = _milp_solve_masks(
                system, left, forced_true, forced_false, blocked, fixed_value=first.value
            )
            if mask is None:
                break
            blocked.append(mask)
            if time.monotonic() > deadline:
                return Solution(
                    status=Status.BUDGET_EXCEEDED,
                    value=first.value,
                    witness=first.witness,
                    millis=first.millis + int((time.monotonic() - t0) * 1000),
                )
        optima = [_mask_to_placement(system, m) for m in sorted(blocked)]
        return Solution(
            status=Status.OPTIMAL,
            value=first.value,
            witness=optima[0] if optima else first.witness,
            all_optima=optima,
            millis=first.millis + int((time.monotonic() - t0) * 1000),
        )
    search = _Search(system, budget, forced_true, forced_false)
    t0 = time.monotonic()
    try:
        if system.sense is Objective.MAXIMIZE:
            masks = search.enumerate_max(first.value)
        else:
            masks = search.enumerate_min(first.value)
        status = Status.OPTIMAL
    except _BudgetHit:
        masks = []
        status = Status.BUDGET_EXCEEDED
    millis = first.millis + int((time.monotonic() - t0) * 1000)
    masks = sorted(set(masks))
    optima = [_mask_to_placement(system, m) for m in masks]
    witness = optima[0] if optima else first.witness
    return Solution(
        status=status,
        value=first.value,
        witness=witness,
        all_optima=optima if status is Status.OPTIMAL else None,
        nodes=first.nodes + search.nodes,
        millis=millis,
    )


def solve_problem(
    problem: Problem, budget: Budget | None = None, backend: str = "dfs"
) -> Solution:
    """Convenience wrapper: compile then solve."""
    return solve(compile(problem), budget, backend=backend)


_BRUTE_CAP = 25


def brute_force(problem: Problem) -> Solution:
    """Independent exhaustive oracle: enumerate placements by cardinality.

    Checks feasibility directly against packing/covering rows, with no
    branch-and-bound machinery, so it can cross-check the solver.  Capped at
    25 cells.
    """
    board = problem.board
    if len(board) > _BRUTE_CAP:
        raise TooLarge(f"brute force capped at {_BRUTE_CAP} cells, board has {len(board)}")
    system = compile(problem)
    m = system.var_count
    pack = [sum(1 << (v - 1) for v in row) for row in system.packing]
    cover = [sum(1 << (v - 1) for v in row) for row in system.covering]

    def feasible(mask: int) -> bool:
        for row in pack:
            if (mask & row).bit_count() > 1:
                return False
        for row in cover:
            if mask & row == 0:
                return False
        return True

    bits = [1 << i for i in range(m)]
    t0 = time.monotonic()
    if problem.objective is Objective.MINIMIZE:
        sizes = range(0, m + 1)
    else:
        sizes = range(m, -1, -1)
    for k in sizes:
        optima_masks = []
        for combo in combinations(bits, k):
            mask = 0
            for b in combo:
                mask |= b
            if feasible(mask):
                optima_masks.append(mask)
        if optima_masks:
            millis = int((time.monotonic() - t0) * 1000)
            optima = [_mask_to_placement(system, mk) for mk in sorted(optima_masks)]
            return Solution(
                status=Status.OPTIMAL,
                value=k,
                witness=optima[0],
                all_optima=optima,
                nodes=0,
                millis=millis,
            )
    return Solution(status=Status.INFEASIBLE, value=None, witness=None, nodes=0, millis=0)
