"""Exact cohomology ranks, Euler characteristics and finite-generation
checks for canonical cut-and-project patterns."""

__version__ = "0.1.0"

from .arrangement import Arrangement, HyperplaneClass, OrbitTables, SingularOrbitClass  # noqa: E402
from .exact import FieldElement, Lattice, NumberField  # noqa: E402
from .invariants import ObstructionVerdict, RankReport, obstruction_check, rank_report  # noqa: E402
from .scheme import Codim1Domain, ProjectionScheme, derive_internal  # noqa: E402
from .schemefile import load_scheme  # noqa: E402

__all__ = [
    "Arrangement",
    "Codim1Domain",
    "FieldElement",
    "HyperplaneClass",
    "Lattice",
    "NumberField",
    "ObstructionVerdict",
    "OrbitTables",
    "ProjectionScheme",
    "RankReport",
    "SingularOrbitClass",
    "derive_internal",
    "load_scheme",
    "obstruction_check",
    "rank_report",
]
