"""Numerics for zeta sampled along a Cauchy random walk on the critical line."""

from .cauchy_walk import RngStreamKey, WalkPath, generate_walk
from .errors import (
    CapExceededError,
    ConvergenceError,
    DomainError,
    PoleError,
    RangeError,
    SingularCaseError,
    ZetaWalkError,
)
from .second_order import MomentQuery, compute_Kn, constant_C, second_moment
from .zeta_eval import ZetaEvalConfig, truncated_zeta, zeta_critical, zeta_em_oracle

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "ConvergenceError",
    "DomainError",
    "MomentQuery",
    "PoleError",
    "RangeError",
    "RngStreamKey",
    "SingularCaseError",
    "WalkPath",
    "ZetaEvalConfig",
    "ZetaWalkError",
    "compute_Kn",
    "constant_C",
    "generate_walk",
    "second_moment",
    "truncated_zeta",
    "zeta_critical",
    "zeta_em_oracle",
]
