"""Probabilistic bisimilarity toolkit.

Exact-rational checking of probabilistic bisimilarity on explicit systems
and pushdown machines, the probabilistic-to-nondeterministic lift, the
three-stage bisimulation game with an interactive engine, decision and
filtering procedures for the visibly-pushdown and one-counter subclasses,
and generators for the hardness constructions.
"""

from .core import Dist, Partition, Plts, bisim_finite, dist_equiv, make_plts, refine_step, sim_n
from .errors import (
    InconclusiveError,
    InvalidInputError,
    ParseError,
    PbisimError,
    ResourceGuardError,
)
from .machines import Config, Ppda, classify, config_str, reachable_fragment, step

__all__ = [
    "Config",
    "Dist",
    "InconclusiveError",
    "InvalidInputError",
    "ParseError",
    "Partition",
    "PbisimError",
    "Plts",
    "Ppda",
    "ResourceGuardError",
    "bisim_finite",
    "classify",
    "config_str",
    "dist_equiv",
    "make_plts",
    "reachable_fragment",
    "refine_step",
    "sim_n",
    "step",
]
