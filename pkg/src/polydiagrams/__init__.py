"""Exact counts of polygon diagrams, pruned polygon diagrams and arc diagrams
on oriented surfaces, with tools to check their polynomial structure."""

from .counts import (
    CountCache,
    Engine,
    count,
    cuff_count,
    n_count,
    p_closed,
    p_from_q,
    p_recursive,
    q_base,
    q_count,
)
from .exact import Rational, bar, binomial, odd_falling, tilde, tilde_sum
from .polynomial import MultiPoly, QuasiPoly, interpolate, is_odd_each_variable

__version__ = "0.1.0"

__all__ = [
    "CountCache",
    "Engine",
    "MultiPoly",
    "QuasiPoly",
    "Rational",
    "bar",
    "binomial",
    "count",
    "cuff_count",
    "interpolate",
    "is_odd_each_variable",
    "n_count",
    "odd_falling",
    "p_closed",
    "p_from_q",
    "p_recursive",
    "q_base",
    "q_count",
    "tilde",
    "tilde_sum",
]
