from .catalog import describe, figure_table, sb_of
from .displacement import build_displacement, displaceable_cover_scenario
from .hamiltonian import run_translation_checks
from .invariants import evaluate
from .lattice_cover import build_cover
from .transport_service import TransportService
from .world import ChartComplex

__all__ = [
    "build_cover",
    "ChartComplex",
    "TransportService",
    "build_displacement",
    "displaceable_cover_scenario",
    "run_translation_checks",
    "evaluate",
    "describe",
    "sb_of",
    "figure_table",
]
