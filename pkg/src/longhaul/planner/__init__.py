"""Tree-expansion planner for fuel-cost / duration trade-offs."""
from .params import PlannerParams
from .paths import COMBINED_LABELS, PlannedPath, StopRecord, assemble_path, front_document, stop_label
from .search import ArcOutcome, Outcome, StopSearch, find_stop_locations, simulate_arc
from .tree import (
    ArcStatus,
    ArcToDestination,
    Diagnostics,
    SearchTree,
    SolveResult,
    Stop,
    TreeNode,
    select_infeasible_arc,
    solve,
)

__all__ = [
    "ArcOutcome",
    "ArcStatus",
    "ArcToDestination",
    "COMBINED_LABELS",
    "Diagnostics",
    "Outcome",
    "PlannedPath",
    "PlannerParams",
    "SearchTree",
    "SolveResult",
    "Stop",
    "StopRecord",
    "StopSearch",
    "TreeNode",
    "assemble_path",
    "find_stop_locations",
    "front_document",
    "select_infeasible_arc",
    "simulate_arc",
    "solve",
    "stop_label",
]
