"""Abstract entropy on cover spaces, with finite, topological, algebraic and
symbolic backends."""

from __future__ import annotations

from .axioms import check_cover_axioms, check_norm_axioms, classify_map, classify_space_map, verify_declared_class
from .connections import Connection, classify_connection, compare_entropy, per_cover_comparison
from .core import (
    BudgetExceeded,
    CoverSpace,
    MapClass,
    PreconditionError,
    SelfMap,
    SpaceMap,
    SpaceMismatch,
    equivalent,
    identity_map,
    power_map,
)
from .entropy import (
    EntropyEstimate,
    FamilyEntropy,
    derived_entropy_norm,
    entropy,
    entropy_bilateral,
    entropy_relative,
    space_entropy,
    trajectory_meet,
)
from .expansivity import (
    GeneratorCertificate,
    Refusal,
    cofinal_descent,
    generator_system_entropy,
    is_generator,
    is_generator_system,
    is_positive_generator,
)
from .extreal import INF, extreal_arith

__version__ = "0.1.0"
