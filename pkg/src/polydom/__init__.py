"""Exact rook/queen domination toolkit for polyominoes and d-polycubes."""

from .board import (
    Board,
    ConvexityClass,
    classify_convexity,
    hyperboard,
    make_board,
    random_polyomino,
    read_board,
    write_board,
)
from .attack import (
    AttackIndex,
    Piece,
    Placement,
    VerifyReport,
    attacked_set,
    build_attack_index,
    direction_count,
    verify,
)
from .solver import (
    Budget,
    ConstraintSystem,
    Objective,
    Problem,
    Solution,
    SolverBackend,
    Status,
    brute_force,
    compile,
    enumerate_optima,
    solve,
    solve_problem,
)
from .chessgraph import (
    ChessGraph,
    MinMaxReport,
    build_chess_graph,
    check_min_max_inequality,
    find_claw,
)
from .reduction import (
    GadgetReport,
    GadgetTemplate,
    ReductionLayout,
    SatInstance,
    assignment_to_placement,
    audit_layout,
    check_gadget,
    enumerate_instances,
    load_templates,
    parse_sat,
    placement_to_assignment,
    reduce_queens,
    reduce_rooks,
)
from .sequences import Family, SequencePoint, SequenceSpec, format_table, run_sequence

__all__ = [name for name in dir() if not name.startswith("_")]
