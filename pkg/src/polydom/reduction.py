"""Compile restricted planar 3-SAT instances into polycube domination boards.

The input language is P3SAT3: CNF formulas with clauses of width 2 or 3 over
distinct variables, every variable occurring in exactly three clauses
(counting both polarities), and a planar variable-clause incidence graph.

A reduced board is a 3-polycube whose maximum number of non-attacking pieces
equals a computable `target` if and only if the formula is satisfiable:

* Each variable becomes a 12-cell diamond gadget (rooks) or a block of four
  such diamonds (queens) whose optimal fillings come in exactly two states,
  read as true/false.
* Each clause becomes a spine of cells on higher layers, tapping one cell of
  each of its literals' gadgets through a junction column.  The clause spine
  admits one piece per node/junction always, plus one extra piece on a
  junction exactly when the gadget cell below that junction is left empty by
  the corresponding literal state — i.e. when the literal is true.

The built-in rook router places variable gadgets on a line and each clause on
one of two sides (south or north of the line) at one of two heights: level-1
clauses run their spine at z=2, level-2 clauses at z=4 with taller junction
columns whose intermediate cells are pinned by extra seat and guard pieces.
Spans sharing a (side, level) slot must be disjoint, and a level-2 junction
column may not pass through a same-side level-1 spine, so a variable used
with the same polarity three times cannot be tapped and the router raises
RoutingFailed — never emitting a silently wrong board.
One published 3-variable example with a denser wiring grid is recognized
specially and emitted from a transcribed layout data file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from .attack import Piece, Placement, verify
from .board import Board, Cell, make_board
from .errors import (
    Disconnected,
    LemmaViolated,
    NonPlanar,
    NotOptimal,
    NotP3SAT3,
    NotSatisfying,
    ParseError,
    RoutingFailed,
)
from .solver import (
    Budget,
    Objective,
    Problem,
    Status,
    compile,
    enumerate_optima,
    solve,
)

# The 12-cell diamond used by the rook variable gadget and the queen basic
# element: a plus-sign of arm length 2 with the four diagonal cells filled.
DIAMOND: tuple[tuple[int, int], ...] = (
    (-2, 0), (-1, -1), (-1, 0), (-1, 1),
    (0, -2), (0, -1), (0, 1), (0, 2),
    (1, -1), (1, 0), (1, 1), (2, 0),
)

_ROOK_VAR_SPACING = 6
_QUEEN_VAR_SPACING = 10


# --------------------------------------------------------------------------
# SAT instances


@dataclass(frozen=True)
class SatInstance:
    """A validated P3SAT3 formula.

    Literals are nonzero integers: +v for the variable, -v for its negation.
    """

    var_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        occurrences = {v: 0 for v in range(1, self.var_count + 1)}
        for clause in self.clauses:
            if len(clause) not in (2, 3):
                raise NotP3SAT3(f"clause {clause} has width {len(clause)}, need 2 or 3")
            vars_in = [abs(lit) for lit in clause]
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise NotP3SAT3(f"literal {lit} out of range in clause {clause}")
            if len(set(vars_in)) != len(vars_in):
                raise NotP3SAT3(f"clause {clause} repeats a variable")
            for v in vars_in:
                occurrences[v] += 1
        for v, n in occurrences.items():
            if n != 3:
                raise NotP3SAT3(f"variable {v} occurs {n} times, need exactly 3")
        incidence = nx.Graph()
        incidence.add_nodes_from(("v", v) for v in range(1, self.var_count + 1))
        for i, clause in enumerate(self.clauses):
            for lit in clause:
                incidence.add_edge(("c", i), ("v", abs(lit)))
        planar, _ = nx.check_planarity(incidence)
        if not planar:
            raise NonPlanar("variable-clause incidence graph is not planar")

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """True iff the 0-indexed boolean vector satisfies every clause."""
        return all(
            any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause)
            for clause in self.clauses
        )

    def satisfiable(self) -> bool:
        """Brute-force truth-table satisfiability."""
        return any(
            self.satisfied_by(bits) for bits in product((False, True), repeat=self.var_count)
        )


def parse_sat(text: str) -> SatInstance:
    """Parse DIMACS-CNF-like text into a validated SatInstance.

    Lines starting with 'c' are comments; a 'p cnf <vars> <clauses>' header
    is required; clauses are whitespace-separated literals terminated by 0
    and may span lines.
    """
    var_count: Optional[int] = None
    clause_count: Optional[int] = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("malformed problem header, need 'p cnf <vars> <clauses>'", line=lineno)
            try:
                var_count, clause_count = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer counts in problem header", line=lineno)
            continue
        if var_count is None:
            raise ParseError("clause before 'p cnf' header", line=lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", line=lineno)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if var_count is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause is not terminated by 0")
    if clause_count is not None and clause_count != len(clauses):
        raise ParseError(f"header declares {clause_count} clauses, found {len(clauses)}")
    return SatInstance(var_count=var_count, clauses=tuple(clauses))


# --------------------------------------------------------------------------
# Gadget templates


@dataclass(frozen=True)
class GadgetTemplate:
    """A fixed polycube fragment with declared optimal-filling behaviour.

    `fixed_cells` must be occupied in every optimum.  When `two_state` is
    set, the optima must be exactly {fixed + true_cells, fixed + false_cells}.
    """

    name: str
    piece: Piece
    cells: tuple[Cell, ...]
    fixed_cells: tuple[Cell, ...]
    true_cells: tuple[Cell, ...]
    false_cells: tuple[Cell, ...]
    expected_optimum: int
    expected_optima: int
    two_state: bool


@dataclass(frozen=True)
class GadgetReport:
    name: str
    optimum: int
    optima_count: int
    fixed_in_all: bool
    states_match: Optional[bool]
    ok: bool


def load_templates() -> dict[str, GadgetTemplate]:
    """Load the version-controlled gadget coordinate data."""
    raw = json.loads(resources.files("polydom.data").joinpath("gadgets.json").read_text())
    out: dict[str, GadgetTemplate] = {}
    for name, rec in raw.items():
        out[name] = GadgetTemplate(
            name=name,
            piece=Piece(rec["piece"]),
            cells=tuple(sorted({tuple(c) for c in rec["cells"]})),
            fixed_cells=tuple(tuple(c) for c in rec["fixed_cells"]),
            true_cells=tuple(tuple(c) for c in rec["true_cells"]),
            false_cells=tuple(tuple(c) for c in rec["false_cells"]),
            expected_optimum=rec["expected_optimum"],
            expected_optima=rec["expected_optima"],
            two_state=rec["two_state"],
        )
    return out


def _canonical_shift(cells: Iterable[Cell]) -> tuple[int, ...]:
    cells = list(cells)
    dim = len(cells[0])
    return tuple(-min(c[k] for c in cells) for k in range(dim))


def _shifted(cells: Iterable[Cell], shift: Sequence[int]) -> list[Cell]:
    return [tuple(x + s for x, s in zip(c, shift)) for c in cells]


def check_gadget(template: GadgetTemplate, budget: Budget | None = None) -> GadgetReport:
    """Exhaustively solve a template board and compare against its declaration.

    Raises LemmaViolated (carrying the offending data) on any mismatch.
    """
    shift = _canonical_shift(template.cells)
    board = make_board(len(template.cells[0]), _shifted(template.cells, shift))
    system = compile(Problem(board, template.piece, Objective.MAXIMIZE, independence=True))
    sol = enumerate_optima(system, budget)
    if sol.status is not Status.OPTIMAL:
        raise LemmaViolated(f"{template.name}: solver did not finish ({sol.status.value})")
    optima = [frozenset(p.cells) for p in sol.all_optima]
    if sol.value != template.expected_optimum:
        raise LemmaViolated(
            f"{template.name}: optimum {sol.value} != declared {template.expected_optimum}"
        )
    if len(optima) != template.expected_optima:
        raise LemmaViolated(
            f"{template.name}: {len(optima)} optima != declared {template.expected_optima}"
        )
    fixed = set(_shifted(template.fixed_cells, shift))
    fixed_in_all = all(fixed <= opt for opt in optima)
    if not fixed_in_all:
        bad = next(opt for opt in optima if not fixed <= opt)
        raise LemmaViolated(f"{template.name}: fixed cells missing from optimum {sorted(bad)}")
    states_match: Optional[bool] = None
    if template.two_state:
        expected = {
            frozenset(fixed | set(_shifted(template.true_cells, shift))),
            frozenset(fixed | set(_shifted(template.false_cells, shift))),
        }
        states_match = set(optima) == expected
        if not states_match:
            raise LemmaViolated(
                f"{template.name}: optima do not equal the declared true/false states"
            )
    return GadgetReport(
        name=template.name,
        optimum=sol.value,
        optima_count=len(optima),
        fixed_in_all=fixed_in_all,
        states_match=states_match,
        ok=True,
    )


def connection_stack() -> tuple[Board, int]:
    """A rook variable gadget with one connection gadget mounted on top.

    The connection duplicates the variable's state one level up; its mounted
    contribution to the optimum is 6, so the stack's target is 12.
    """
    templates = load_templates()
    cells = templates["rook-variable-connection"].cells
    shift = _canonical_shift(cells)
    return make_board(3, _shifted(cells, shift)), 12


# --------------------------------------------------------------------------
# Layouts


@dataclass(frozen=True)
class ClauseLayout:
    """Placed clause gadget: junctions tap literal gadgets, the spine carries
    one piece per junction/node, and `t_cubes` are the per-literal cells that
    hold the clause's extra piece when that literal is true."""

    literals: tuple[int, ...]
    row: int  # -1 south of the variable line, +1 north, 0 for grid layouts
    level: int  # 1 for spine at z=2, 2 for spine at z=4 (rooks only)
    junction_cells: tuple[Cell, ...]
    t_cubes: tuple[tuple[int, Cell], ...]
    witness_cells: tuple[Cell, ...]
    spine_cells: tuple[Cell, ...]
    length: int


@dataclass(frozen=True)
class VariableLayout:
    """Placed variable gadget with its two optimal states' cells."""

    var: int
    origin: Cell
    fixed_cells: tuple[Cell, ...]
    true_cells: tuple[Cell, ...]
    false_cells: tuple[Cell, ...]


@dataclass(frozen=True)
class ReductionLayout:
    """Bookkeeping for one reduced instance: gadget inventory and counts."""

    piece: Piece
    instance: SatInstance
    style: str  # "two-side" or "grid"
    board: Board
    variables: tuple[VariableLayout, ...]
    clauses: tuple[ClauseLayout, ...]
    elements: tuple[tuple[int, int], ...]  # queen element centres (x, y), z=0
    counts: Mapping[str, int]
    lengths: tuple[int, ...]
    m: int
    target: int


# --------------------------------------------------------------------------
# Two-row router

def _rook_tap(var0: int, positive: bool, row: int) -> int:
    base = _ROOK_VAR_SPACING * var0
    if row < 0:
        return base + 1 if positive else base - 1
    return base - 1 if positive else base + 1


def _queen_tap(var0: int, positive: bool, row: int) -> int:
    base = _QUEEN_VAR_SPACING * var0
    if row < 0:
        return base + 4 if positive else base
    return base if positive else base + 4


def _route_two_row(instance: SatInstance, tap) -> list[int]:
    """Assign each clause to the south (-1) or north (+1) row.

    Constraint: clauses sharing a row must have pairwise disjoint junction
    x-spans (this also forbids two same-row taps of the same literal).
    Backtracking over clause order; raises RoutingFailed when no assignment
    exists.
    """
    spans: list[tuple[dict[int, tuple[int, int]], ...]] = []
    for clause in instance.clauses:
        per_row = {}
        for row in (-1, 1):
            xs = [tap(abs(lit) - 1, lit > 0, row) for lit in clause]
            per_row[row] = (min(xs), max(xs))
        spans.append(per_row)

    n = len(instance.clauses)
    assignment: list[int] = [0] * n
    # Handle wide clauses first: they are the hardest to place.
    order = sorted(range(n), key=lambda i: spans[i][-1][0] - spans[i][-1][1])

    def fits(i: int, row: int, chosen: int) -> bool:
        lo, hi = spans[i][row]
        for j in order[:chosen]:
            if assignment[j] != row:
                continue
            jlo, jhi = spans[j][row]
            if not (hi < jlo or jhi < lo):
                return False
        return True

    def place(chosen: int) -> bool:
        if chosen == n:
            return True
        i = order[chosen]
        for row in (-1, 1):
            if fits(i, row, chosen):
                assignment[i] = row
                if place(chosen + 1):
                    return True
        assignment[i] = 0
        return False

    if not place(0):
        raise RoutingFailed(
            "clauses cannot be split into two rows with disjoint spans; "
            "instance is outside the built-in layout family"
        )
    return assignment


# --------------------------------------------------------------------------
# Rook router: each clause gets a (side, level) slot.


def _route_rooks(instance: SatInstance) -> tuple[list[tuple[int, int]], dict]:
    """Assign every clause a side (-1 south / +1 north) and a level (1 or 2).

    A valid assignment satisfies:
    * every (side, tap-x) is used by at most one clause (each gadget tile
      supports one junction column);
    * clauses sharing a (side, level) slot have pairwise disjoint x-spans;
    * level-2 junctions on one side are pairwise at least 4 apart, keeping
      their guard cells separated;
    * no level-2 junction column lands inside a same-side level-1 span
      (the column would puncture that clause's spine), and each level-2
      junction has a free side for its guard cell, not touching any
      same-side level-1 spine.

    Returns (assignment, guards) where guards maps (side, junction_x) to the
    x-offset (+1/-1) of that junction's guard cell.  Raises RoutingFailed if
    no assignment exists.
    """
    n = len(instance.clauses)
    taps = [
        {side: sorted(_rook_tap(abs(lit) - 1, lit > 0, side) for lit in clause)
         for side in (-1, 1)}
        for clause in instance.clauses
    ]

    def check(assign: Sequence[tuple[int, int]]):
        used: set[tuple[int, int]] = set()
        for i, (side, _level) in enumerate(assign):
            for jx in taps[i][side]:
                if (side, jx) in used:
                    return None
                used.add((side, jx))
        guards: dict[tuple[int, int], int] = {}
        for side in (-1, 1):
            for level in (1, 2):
                spans = sorted(
                    (taps[i][side][0], taps[i][side][-1])
                    for i in range(n) if assign[i] == (side, level)
                )
                if any(b[0] <= a[1] for a, b in zip(spans, spans[1:])):
                    return None
            jxs2 = sorted(
                jx for i in range(n) if assign[i] == (side, 2) for jx in taps[i][side]
            )
            if any(b - a < 4 for a, b in zip(jxs2, jxs2[1:])):
                return None
            l1_spans = [
                (taps[i][side][0], taps[i][side][-1])
                for i in range(n) if assign[i] == (side, 1)
            ]
            for jx in jxs2:
                if any(a <= jx <= b for a, b in l1_spans):
                    return None
                g = next(
                    (d for d in (-1, 1)
                     if not any(a - 1 <= jx + d <= b + 1 for a, b in l1_spans)),
                    None,
                )
                if g is None:
                    return None
                guards[(side, jx)] = g
        return guards

    for assign in product(((-1, 1), (-1, 2), (1, 1), (1, 2)), repeat=n):
        guards = check(assign)
        if guards is not None:
            return list(assign), guards
    raise RoutingFailed(
        "clauses cannot be placed into the two-side, two-level slot family "
        "(e.g. a variable used three times with one polarity has no free tap)"
    )


# --------------------------------------------------------------------------
# Rook reduction


def _rook_clause_cells(clause: tuple[int, ...], side: int, level: int, guards: Mapping):
    """Cells and bookkeeping of one rook clause gadget.

    The junction column rises from the tapped gadget tile to the spine
    (z=2 for level 1, z=4 for level 2); the cell at the top of each column is
    the clause's extra-piece cell for that literal.  Every column cell below
    the spine is pinned empty by a guaranteed piece: a seat one row further
    out at z=1 (both levels), plus — for level 2 — a second seat at z=3 and a
    guard cell adjacent to the column at z=2.  Between junctions the spine
    alternates two-cell nodes: vertical (spine + tip above) and horizontal
    (spine + tip outward).  Level-1 vertical nodes sit at even x and level-2
    ones at odd x, so no two tips ever share an attack line.
    """
    r = side
    zs = 2 * level
    top_parity = 0 if level == 1 else 1
    taps = {lit: _rook_tap(abs(lit) - 1, lit > 0, side) for lit in clause}
    cells: set[Cell] = set()
    junctions, t_cubes, witness, spine = [], [], [], []
    for lit, jx in taps.items():
        cells |= {(jx, r, z) for z in range(1, zs + 1)}
        junctions.append((jx, r, 1))
        t_cubes.append((lit, (jx, r, zs)))
        spine.append((jx, r, zs))
        cells.add((jx, 2 * r, 1))
        witness.append((jx, 2 * r, 1))
        if level == 2:
            cells.add((jx, 2 * r, 3))
            witness.append((jx, 2 * r, 3))
            g = guards[(side, jx)]
            cells.add((jx + g, r, 2))
            witness.append((jx + g, r, 2))
    xs = sorted(taps.values())
    for x in range(xs[0] + 1, xs[-1]):
        if x in xs:
            continue
        spine.append((x, r, zs))
        cells.add((x, r, zs))
        if x % 2 == top_parity:
            cells.add((x, r, zs + 1))
            witness.append((x, r, zs + 1))
        else:
            cells.add((x, 2 * r, zs))
            witness.append((x, 2 * r, zs))
    return cells, junctions, t_cubes, witness, spine


def reduce_rooks(instance: SatInstance) -> tuple[Board, int, ReductionLayout]:
    """Reduce to non-attacking rook maximization on a 3-polycube.

    Returns (board, target, layout) with target = m + clause_count and
    m = 6*n_var + 6*n_connect + sum of clause lengths; the built-in layout
    needs no connection gadgets, so n_connect = 0 here.  A clause's length is
    its count of guaranteed pieces: junctions + nodes for level-1 clauses,
    3*junctions + nodes for level-2 clauses (two seats and a guard per
    junction).
    """
    templates = load_templates()
    var_t = templates["rook-variable"]
    slots, guards = _route_rooks(instance)

    cells: set[Cell] = set()
    raw_vars = []
    for v in range(1, instance.var_count + 1):
        origin = (_ROOK_VAR_SPACING * (v - 1), 0, 0)
        gadget = {(origin[0] + dx, origin[1] + dy, 0) for dx, dy in DIAMOND}
        cells |= gadget
        raw_vars.append(
            (
                v,
                origin,
                [(origin[0] + dx, origin[1] + dy, 0) for dx, dy, _ in var_t.fixed_cells],
                [(origin[0] + dx, origin[1] + dy, 0) for dx, dy, _ in var_t.true_cells],
                [(origin[0] + dx, origin[1] + dy, 0) for dx, dy, _ in var_t.false_cells],
            )
        )
    raw_clauses = []
    for clause, (side, level) in zip(instance.clauses, slots):
        ccells, junctions, t_cubes, witness, spine = _rook_clause_cells(
            clause, side, level, guards
        )
        if ccells & cells:
            raise RoutingFailed(f"clause {clause} overlaps previously placed cells")
        cells |= ccells
        raw_clauses.append((clause, side, level, junctions, t_cubes, witness, spine))

    return _assemble_two_row(instance, Piece.ROOK, cells, raw_vars, raw_clauses)


# --------------------------------------------------------------------------
# Queen reduction


def _queen_block_cells(var0: int) -> set[Cell]:
    base = _QUEEN_VAR_SPACING * var0
    cells = set()
    for bx, by in ((0, 0), (4, 0), (0, 4), (4, 4)):
        cells |= {(base + bx + dx, by + dy, 0) for dx, dy in DIAMOND}
    return cells


def _queen_clause_cells(clause: tuple[int, ...], row: int):
    """Queen clause gadget on row -1 (south of the blocks) or +1 (north).

    Same shape as the rook clause but one cell taller: three-cell nodes,
    two-cell arms behind each junction, spine at z=2.
    """
    taps = {lit: _queen_tap(abs(lit) - 1, lit > 0, row) for lit in clause}
    if row < 0:
        jy, a1, a2, s1, s2 = -2, -3, -4, -1, 0
    else:
        jy, a1, a2, s1, s2 = 6, 7, 8, 5, 4
    cells: set[Cell] = set()
    junctions, t_cubes, witness, spine = [], [], [], []
    for lit, jx in taps.items():
        cells |= {(jx, jy, 1), (jx, jy, 2), (jx, a1, 1), (jx, a2, 1)}
        junctions.append((jx, jy, 1))
        t_cubes.append((lit, (jx, jy, 2)))
        witness.append((jx, a2, 1))
        spine.append((jx, jy, 2))
    xs = sorted(taps.values())
    for x in range(xs[0] + 1, xs[-1]):
        if x in xs:
            continue
        spine.append((x, jy, 2))
        if x % 2 == 1:
            cells |= {(x, jy, 2), (x, jy, 3), (x, jy, 4)}
            witness.append((x, jy, 4))
        else:
            cells |= {(x, jy, 2), (x, s1, 2), (x, s2, 2)}
            witness.append((x, s2, 2))
    return cells, junctions, t_cubes, witness, spine


def _queen_block_states(var0: int, templates) -> tuple[list[Cell], list[Cell]]:
    lit_t = templates["queen-literal"]
    base = _QUEEN_VAR_SPACING * var0
    true_cells = [(base + dx, dy, 0) for dx, dy, _ in lit_t.true_cells]
    false_cells = [(base + dx, dy, 0) for dx, dy, _ in lit_t.false_cells]
    return true_cells, false_cells


def reduce_queens(instance: SatInstance) -> tuple[Board, int, ReductionLayout]:
    """Reduce to non-attacking queen maximization on a 3-polycube.

    target = m + clause_count with m = 4*n_4neigh + 5*n_3neigh + 6*n_2neigh
    plus the clause lengths, where n_ineigh counts pairs of basic 12-cell
    elements by their number of grid neighbours.
    """
    grid = _load_grid_layout()
    if instance.var_count == grid["instance"].var_count and set(
        map(frozenset, instance.clauses)
    ) == set(map(frozenset, grid["instance"].clauses)):
        return _reduce_queens_grid(instance, grid)

    templates = load_templates()
    rows = _route_two_row(instance, _queen_tap)
    cells: set[Cell] = set()
    raw_vars = []
    for v in range(1, instance.var_count + 1):
        block = _queen_block_cells(v - 1)
        cells |= block
        true_cells, false_cells = _queen_block_states(v - 1, templates)
        raw_vars.append((v, (_QUEEN_VAR_SPACING * (v - 1), 0, 0), [], true_cells, false_cells))
    raw_clauses = []
    for clause, row in zip(instance.clauses, rows):
        ccells, junctions, t_cubes, witness, spine = _queen_clause_cells(clause, row)
        if ccells & cells:
            raise RoutingFailed(f"clause {clause} overlaps previously placed cells")
        cells |= ccells
        raw_clauses.append((clause, row, 1, junctions, t_cubes, witness, spine))
    return _assemble_two_row(instance, Piece.QUEEN, cells, raw_vars, raw_clauses)


def _assemble_two_row(instance, piece, cells, raw_vars, raw_clauses):
    shift = _canonical_shift(cells)
    mv = lambda c: tuple(x + s for x, s in zip(c, shift))
    try:
        board = make_board(3, [mv(c) for c in cells])
    except Disconnected:
        raise RoutingFailed(
            "emitted board is disconnected (the instance's incidence graph "
            "has more than one component)"
        )
    variables = tuple(
        VariableLayout(
            var=v,
            origin=mv(origin),
            fixed_cells=tuple(mv(c) for c in fixed),
            true_cells=tuple(mv(c) for c in true_cells),
            false_cells=tuple(mv(c) for c in false_cells),
        )
        for v, origin, fixed, true_cells, false_cells in raw_vars
    )
    clauses = tuple(
        ClauseLayout(
            literals=clause,
            row=row,
            level=level,
            junction_cells=tuple(mv(c) for c in junctions),
            t_cubes=tuple((lit, mv(c)) for lit, c in t_cubes),
            witness_cells=tuple(mv(c) for c in witness),
            spine_cells=tuple(mv(c) for c in spine),
            length=len(witness),
        )
        for clause, row, level, junctions, t_cubes, witness, spine in raw_clauses
    )
    lengths = tuple(c.length for c in clauses)
    if piece is Piece.ROOK:
        counts = {"n_var": instance.var_count, "n_connect": 0}
        m = 6 * instance.var_count + 6 * 0 + sum(lengths)
        elements: tuple[tuple[int, int], ...] = ()
    else:
        # Each variable block is four elements in a 2x2 square: every element
        # has exactly two neighbours, giving two 2-neighbour pairs per block.
        counts = {
            "n_2neigh": 2 * instance.var_count,
            "n_3neigh": 0,
            "n_4neigh": 0,
        }
        m = 6 * counts["n_2neigh"] + sum(lengths)
        elements = tuple(
            (shift[0] + _QUEEN_VAR_SPACING * v0 + bx, shift[1] + by)
            for v0 in range(instance.var_count)
            for bx, by in ((0, 0), (4, 0), (0, 4), (4, 4))
        )
    target = m + instance.clause_count
    layout = ReductionLayout(
        piece=piece,
        instance=instance,
        style="two-side",
        board=board,
        variables=variables,
        clauses=clauses,
        elements=elements,
        counts=counts,
        lengths=lengths,
        m=m,
        target=target,
    )
    return board, target, layout


# --------------------------------------------------------------------------
# Transcribed grid layout (published 3-variable example)


def _load_grid_layout() -> dict:
    raw = json.loads(resources.files("polydom.data").joinpath("grid_layout.json").read_text())
    return {
        "instance": SatInstance(
            var_count=raw["instance"]["var_count"],
            clauses=tuple(tuple(c) for c in raw["instance"]["clauses"]),
        ),
        "element_rows": {int(y): xs for y, xs in raw["element_rows"].items()},
        "clauses": raw["clauses"],
        "variable_blocks": {int(v): tuple(pos) for v, pos in raw["variable_blocks"].items()},
    }


def _reduce_queens_grid(instance: SatInstance, grid: dict):
    """Emit the transcribed dense-grid queen reduction of the published
    3-variable, 4-clause example.  Elements live on a coarse grid (element
    (x, y) -> fine centre (4x, 4y+2), z=0); clause spines run vertically."""
    templates = load_templates()
    element_grid = {
        (x, y) for y, xs in grid["element_rows"].items() for x in xs
    }
    centres = {(gx, gy): (4 * gx, 4 * gy + 2) for gx, gy in element_grid}
    cells: set[Cell] = set()
    for cx, cy in centres.values():
        cells |= {(cx + dx, cy + dy, 0) for dx, dy in DIAMOND}

    # Clause spines: vertical analogue of the two-row clause gadget (the
    # spine runs along y at z=2; arms extend along x behind each junction).
    clause_literals = {frozenset(c): c for c in instance.clauses}
    raw_clauses = []
    for rec in grid["clauses"]:
        sx, adir, sdir = rec["spine_x"], rec["arm_dir"], rec["side_dir"]
        junction_ys = [jy for jy, _ in rec["junctions"]]
        lits = [lit for _, lit in rec["junctions"]]
        path: set[Cell] = set()
        junctions, t_cubes, witness, spine = [], [], [], []
        for (jy, lit) in rec["junctions"]:
            path |= {(sx, jy, 1), (sx + adir, jy, 1), (sx + 2 * adir, jy, 1), (sx, jy, 2)}
            junctions.append((sx, jy, 1))
            t_cubes.append((lit, (sx, jy, 2)))
            witness.append((sx + 2 * adir, jy, 1))
            spine.append((sx, jy, 2))
        for y in range(min(junction_ys) + 1, max(junction_ys)):
            if y in junction_ys:
                continue
            spine.append((sx, y, 2))
            if y % 2 == 1:
                path |= {(sx, y, 2), (sx + sdir, y, 2), (sx + 2 * sdir, y, 2)}
                witness.append((sx + 2 * sdir, y, 2))
            else:
                path |= {(sx, y, 2), (sx, y, 3), (sx, y, 4)}
                witness.append((sx, y, 4))
        if path & cells:
            raise RoutingFailed("transcribed clause path overlaps the element layer")
        cells |= path
        clause = clause_literals[frozenset(lits)]
        raw_clauses.append((clause, 0, junctions, t_cubes, witness, spine))

    shift = _canonical_shift(cells)
    mv = lambda c: tuple(x + s for x, s in zip(c, shift))
    board = make_board(3, [mv(c) for c in cells])

    lit_t = templates["queen-literal"]
    variables = []
    for v, (gx, gy) in grid["variable_blocks"].items():
        ox, oy = centres[(gx, gy)]
        variables.append(
            VariableLayout(
                var=v,
                origin=mv((ox, oy, 0)),
                fixed_cells=(),
                true_cells=tuple(mv((ox + dx, oy + dy, 0)) for dx, dy, _ in lit_t.true_cells),
                false_cells=tuple(mv((ox + dx, oy + dy, 0)) for dx, dy, _ in lit_t.false_cells),
            )
        )
    clauses = tuple(
        ClauseLayout(
            literals=clause,
            row=row,
            level=1,
            junction_cells=tuple(mv(c) for c in junctions),
            t_cubes=tuple((lit, mv(c)) for lit, c in t_cubes),
            witness_cells=tuple(mv(c) for c in witness),
            spine_cells=tuple(mv(c) for c in spine),
            length=len(witness),
        )
        for clause, row, junctions, t_cubes, witness, spine in raw_clauses
    )
    lengths = tuple(c.length for c in clauses)
    neigh = _element_neighbour_counts(element_grid)
    hist: dict[int, int] = {}
    for n in neigh.values():
        hist[n] = hist.get(n, 0) + 1
    counts = {f"n_{k}neigh": v // 2 for k, v in sorted(hist.items())}
    m = (
        4 * counts.get("n_4neigh", 0)
        + 5 * counts.get("n_3neigh", 0)
        + 6 * counts.get("n_2neigh", 0)
        + sum(lengths)
    )
    target = m + instance.clause_count
    layout = ReductionLayout(
        piece=Piece.QUEEN,
        instance=instance,
        style="grid",
        board=board,
        variables=tuple(sorted(variables, key=lambda v: v.var)),
        clauses=clauses,
        elements=tuple(sorted((mv((cx, cy, 0))[0], mv((cx, cy, 0))[1]) for cx, cy in centres.values())),
        counts=counts,
        lengths=lengths,
        m=m,
        target=target,
    )
    return board, target, layout


def _element_neighbour_counts(element_grid: set[tuple[int, int]]) -> dict:
    return {
        e: sum((e[0] + dx, e[1] + dy) in element_grid for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)))
        for e in element_grid
    }


# --------------------------------------------------------------------------
# Assignment <-> placement


def _normalize_assignment(instance: SatInstance, assignment) -> tuple[bool, ...]:
    if isinstance(assignment, Mapping):
        bits = tuple(bool(assignment[v]) for v in range(1, instance.var_count + 1))
    else:
        bits = tuple(bool(b) for b in assignment)
    if len(bits) != instance.var_count:
        raise NotSatisfying(
            f"assignment covers {len(bits)} variables, instance has {instance.var_count}"
        )
    return bits


def assignment_to_placement(layout: ReductionLayout, assignment) -> Placement:
    """Map a satisfying assignment to an independent placement of exactly
    `target` pieces on the reduced board.

    Raises NotSatisfying when the assignment does not satisfy the instance.
    """
    bits = _normalize_assignment(layout.instance, assignment)
    if not layout.instance.satisfied_by(bits):
        raise NotSatisfying(f"assignment {bits} does not satisfy the instance")
    if layout.style == "grid":
        return _grid_witness(layout, bits)
    cells: set[Cell] = set()
    for var in layout.variables:
        cells |= set(var.fixed_cells)
        cells |= set(var.true_cells if bits[var.var - 1] else var.false_cells)
    for clause in layout.clauses:
        cells |= set(clause.witness_cells)
        extra = next(
            c for lit, c in clause.t_cubes if bits[abs(lit) - 1] == (lit > 0)
        )
        cells.add(extra)
    placement = Placement(piece=layout.piece, cells=frozenset(cells))
    report = verify(layout.board, layout.piece, placement)
    if len(cells) != layout.target or not report.independent:
        raise LemmaViolated(
            f"constructed witness is invalid: {len(cells)} pieces, "
            f"conflicts={report.conflicts[:3]}"
        )
    return placement


def _grid_witness(layout: ReductionLayout, bits: tuple[bool, ...]) -> Placement:
    """Solver-assisted witness for the transcribed grid layout: pin the
    variable-block states and each clause's extra piece, then solve."""
    board = layout.board
    system = compile(Problem(board, layout.piece, Objective.MAXIMIZE, independence=True))
    index = {c: i + 1 for i, c in enumerate(board.cells)}
    forced: set[int] = set()
    for var in layout.variables:
        for c in var.true_cells if bits[var.var - 1] else var.false_cells:
            forced.add(index[c])
    for clause in layout.clauses:
        for c in clause.witness_cells:
            forced.add(index[c])
        extra = next(c for lit, c in clause.t_cubes if bits[abs(lit) - 1] == (lit > 0))
        forced.add(index[extra])
    sol = solve(system, Budget.default(), forced_true=frozenset(forced), backend="auto")
    if sol.status is not Status.OPTIMAL or sol.value != layout.target:
        raise LemmaViolated(
            f"grid witness solve returned {sol.value} ({sol.status.value}), "
            f"target {layout.target}"
        )
    return sol.witness


def placement_to_assignment(layout: ReductionLayout, placement: Placement):
    """Map an optimal placement back to a satisfying assignment.

    Raises NotOptimal when the placement is not an independent placement of
    exactly `target` pieces, NotSatisfying when no coherent satisfying
    assignment can be read off it.
    """
    report = verify(layout.board, layout.piece, placement)
    if len(placement.cells) != layout.target:
        raise NotOptimal(
            f"placement has {len(placement.cells)} pieces, target is {layout.target}"
        )
    if not report.independent:
        raise NotOptimal(f"placement is not independent: {report.conflicts[:3]}")
    occupied = set(placement.cells)
    implied: dict[int, bool] = {}

    def imply(var: int, value: bool, why: str):
        if implied.get(var, value) != value:
            raise NotSatisfying(f"placement implies both values for variable {var} ({why})")
        implied[var] = value

    for var in layout.variables:
        if set(var.true_cells) <= occupied:
            imply(var.var, True, "gadget state")
        elif set(var.false_cells) <= occupied:
            imply(var.var, False, "gadget state")
    if layout.style != "grid":
        # In the built-in layout an occupied extra-piece cell shares its
        # column with the tapped gadget tile, so it certifies the literal.
        # The transcribed grid layout couples junctions through arms instead,
        # where spine pieces may drift onto these cells; there the variable
        # block states are the only sound reading.
        for clause in layout.clauses:
            for lit, cell in clause.t_cubes:
                if cell in occupied:
                    imply(abs(lit), lit > 0, "clause extra piece")
    free = [v for v in range(1, layout.instance.var_count + 1) if v not in implied]
    for combo in product((False, True), repeat=len(free)):
        bits = tuple(
            implied[v] if v in implied else combo[free.index(v)]
            for v in range(1, layout.instance.var_count + 1)
        )
        if layout.instance.satisfied_by(bits):
            return bits
    raise NotSatisfying("no satisfying assignment is consistent with the placement")


# --------------------------------------------------------------------------
# Layout audit


def audit_layout(layout: ReductionLayout) -> dict:
    """Recompute the layout's counts from the emitted geometry and compare.

    Returns a report dict with recomputed values and an `ok` flag; the
    recomputation uses only the board's cells and the gadget positions, not
    the counts recorded during assembly.
    """
    board = layout.board
    cell_set = board.cell_set
    report: dict = {"ok": True}

    # Clause lengths: count board cells on each spine line; a level-2
    # junction (a spine cell with its column cell directly below) carries two
    # extra guaranteed pieces (second seat and guard), so it counts as three.
    lengths = []
    for clause in layout.clauses:
        spine = clause.spine_cells
        axis = 0 if len({c[0] for c in spine}) > 1 else 1
        fixed_axis = 1 - axis
        lo = min(c[axis] for c in spine)
        hi = max(c[axis] for c in spine)
        spine_z = spine[0][2]
        recomputed = 0
        for x in range(lo, hi + 1):
            c = [0, 0, spine_z]
            c[axis] = x
            c[fixed_axis] = spine[0][fixed_axis]
            if tuple(c) in cell_set:
                recomputed += 1
                if spine_z > 2 and all(
                    (c[0], c[1], z) in cell_set for z in range(1, spine_z)
                ):
                    recomputed += 2
        lengths.append(recomputed)
    report["lengths"] = tuple(lengths)
    if tuple(lengths) != layout.lengths:
        report["ok"] = False

    if layout.piece is Piece.ROOK:
        base_cells = {c for c in board.cells if c[2] == 0}
        gadget_cells = set()
        for var in layout.variables:
            ox, oy, _ = var.origin
            gadget_cells |= {(ox + dx, oy + dy, 0) for dx, dy in DIAMOND}
        report["n_var"] = len(layout.variables)
        report["variable_cells_exact"] = gadget_cells == base_cells
        if not report["variable_cells_exact"]:
            report["ok"] = False
        n_connect = layout.counts.get("n_connect", 0)
        report["m"] = 6 * report["n_var"] + 6 * n_connect + sum(lengths)
    else:
        elements = _recompute_element_centres(board)
        report["n_elements"] = len(elements)
        if set(elements) != set(layout.elements):
            report["ok"] = False
        centre_set = set(elements)
        neigh = {
            e: sum(
                (e[0] + 4 * dx, e[1] + 4 * dy) in centre_set
                for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
            )
            for e in centre_set
        }
        hist: dict[int, int] = {}
        for n in neigh.values():
            hist[n] = hist.get(n, 0) + 1
        if any(v % 2 for v in hist.values()):
            report["ok"] = False
        report["pair_counts"] = {f"n_{k}neigh": v // 2 for k, v in sorted(hist.items())}
        report["pairing_exists"] = _equal_neighbour_matching(centre_set, neigh)
        if not report["pairing_exists"]:
            report["ok"] = False
        if report["pair_counts"] != dict(layout.counts):
            report["ok"] = False
        report["m"] = (
            4 * report["pair_counts"].get("n_4neigh", 0)
            + 5 * report["pair_counts"].get("n_3neigh", 0)
            + 6 * report["pair_counts"].get("n_2neigh", 0)
            + sum(lengths)
        )
    report["target"] = report["m"] + layout.instance.clause_count
    if report["m"] != layout.m or report["target"] != layout.target:
        report["ok"] = False
    return report


def _recompute_element_centres(board: Board) -> list[tuple[int, int]]:
    """Find all positions whose full 12-cell diamond lies on the base layer."""
    base = {(c[0], c[1]) for c in board.cells if c[2] == 0}
    centres = []
    xs = [p[0] for p in base]
    ys = [p[1] for p in base]
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if all((x + dx, y + dy) in base for dx, dy in DIAMOND):
                centres.append((x, y))
    covered = {(x + dx, y + dy) for x, y in centres for dx, dy in DIAMOND}
    if covered != base:
        raise LemmaViolated("base layer is not an exact union of 12-cell elements")
    return centres


def _equal_neighbour_matching(centres: set, neigh: dict) -> bool:
    """True iff the elements split into adjacent pairs with equal neighbour
    counts (the pairing that the per-pair count formula assumes).  Centres
    are fine coordinates; adjacent elements are exactly 4 apart."""
    graph = nx.Graph()
    graph.add_nodes_from(centres)
    for (x, y) in centres:
        for dx, dy in ((4, 0), (0, 4)):
            other = (x + dx, y + dy)
            if other in centres and neigh[(x, y)] == neigh[other]:
                graph.add_edge((x, y), other)
    matching = nx.max_weight_matching(graph, maxcardinality=True)
    return 2 * len(matching) == len(centres)


# --------------------------------------------------------------------------
# Instance generation (small deterministic corpus)


def enumerate_instances(max_vars: int = 3) -> list[SatInstance]:
    """Deterministically enumerate all valid instances with <= max_vars
    variables, in sorted order.  Sizes are tiny (occurrence counts force
    clause_count in [var_count, 3*var_count/2])."""
    out = []
    for n in range(2, max_vars + 1):
        out.extend(_enumerate_for(n))
    return out


def _enumerate_for(n: int) -> list[SatInstance]:
    from itertools import combinations_with_replacement

    literals = [s * v for v in range(1, n + 1) for s in (1, -1)]
    widths: list[tuple[int, ...]] = []
    total = 3 * n
    # Solve 3a + 2b = total over nonnegative a (width-3 count), b (width-2).
    candidates = []
    for a in range(total // 3 + 1):
        rest = total - 3 * a
        if rest % 2 == 0:
            candidates.append((a, rest // 2))
    all_clauses_3 = sorted(
        {tuple(sorted(c, key=abs)) for c in combinations_with_replacement(literals, 3)
         if len({abs(l) for l in c}) == 3}
    )
    all_clauses_2 = sorted(
        {tuple(sorted(c, key=abs)) for c in combinations_with_replacement(literals, 2)
         if len({abs(l) for l in c}) == 2}
    )
    out = []
    seen = set()
    for a, b in candidates:
        for c3 in combinations_with_replacement(all_clauses_3, a):
            for c2 in combinations_with_replacement(all_clauses_2, b):
                clauses = tuple(sorted(c3 + c2))
                if clauses in seen:
                    continue
                seen.add(clauses)
                try:
                    out.append(SatInstance(var_count=n, clauses=clauses))
                except (NotP3SAT3, NonPlanar):
                    continue
    return out
