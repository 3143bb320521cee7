"""Binomial moment sums, parity power sums and related constants."""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .exact import binomial, odd_falling
from .polynomial import MultiPoly

__all__ = [
    "EVEN",
    "ODD",
    "bernoulli",
    "MomentPolyPair",
    "moment_poly",
    "moment_sum_direct",
    "moment_sum_closed",
    "power_sum_direct",
    "power_sum_parity",
    "c_constant",
    "conv_parity_sum",
]

EVEN, ODD = "even", "odd"
_PARITIES = (EVEN, ODD)


def _check_parity(parity: str) -> int:
    if parity not in _PARITIES:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return 0 if parity == EVEN else 1


_bern: List[Fraction] = [Fraction(1)]
_bern_lock = threading.Lock()


def bernoulli(i: int) -> Fraction:
    """B_i with B_1 = -1/2."""
    if i < 0:
        raise ValueError("bernoulli index must be non-negative")
    with _bern_lock:
        # sum_{k<=m} C(m+1, k) B_k = 0
        while len(_bern) <= i:
            m = len(_bern)
            s = sum((binomial(m + 1, k) * _bern[k] for k in range(m)), Fraction(0))
            _bern.append(-s / (m + 1))
        return _bern[i]


@dataclass(frozen=True)
class MomentPolyPair:
    alpha: int
    p_alpha: MultiPoly
    q_alpha: MultiPoly


_N = MultiPoly.variable(1, 0)


def _shift_down(p: MultiPoly) -> MultiPoly:
    """p(n - 1)."""
    out = MultiPoly(1)
    for (e,), c in p.items():
        out = out + c * (_N - 1) ** e
    return out


def _step(p: MultiPoly, alpha: int) -> MultiPoly:
    return _N * _N * ((2 * _N - (2 * alpha + 3)) * p - (2 * _N - 1) * _shift_down(p))


_moment_cache: Dict[int, MomentPolyPair] = {}
_moment_lock = threading.Lock()


def moment_poly(alpha: int) -> MomentPolyPair:
    """P_alpha, Q_alpha from the seeds (n^2-n)/2, n^2/2 and the shared recursion."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    with _moment_lock:
        if not _moment_cache:
            _moment_cache[0] = MomentPolyPair(
                0, (_N * _N - _N) / 2, (_N * _N) / 2
            )
        top = max(_moment_cache)
        while top < alpha:
            prev = _moment_cache[top]
            _moment_cache[top + 1] = MomentPolyPair(
                top + 1, _step(prev.p_alpha, top), _step(prev.q_alpha, top)
            )
            top += 1
        return _moment_cache[alpha]


def moment_sum_direct(n: int, alpha: int, parity: str) -> Fraction:
    """sum over 0 <= i <= n of the given parity of i^(2 alpha + 1) C(2n, n - i)."""
    r = _check_parity(parity)
    return sum(
        (Fraction(i ** (2 * alpha + 1)) * binomial(2 * n, n - i) for i in range(r, n + 1, 2)),
        Fraction(0),
    )


def moment_sum_closed(n: int, alpha: int, parity: str,
                      pair: Optional[MomentPolyPair] = None) -> Fraction:
    """C(2n, n) / odd_falling(n, alpha) times P_alpha(n) (even) or Q_alpha(n) (odd).

    ``pair`` overrides the polynomials; it exists so that a deliberately wrong
    P_alpha can be shown to break the identity.
    """
    r = _check_parity(parity)
    if n < 1:
        raise ValueError("moment_sum_closed needs n >= 1")
    den = odd_falling(n, alpha)
    if den == 0:
        raise ZeroDivisionError(f"odd_falling({n}, {alpha}) vanishes")
    pair = pair if pair is not None else moment_poly(alpha)
    poly = pair.p_alpha if r == 0 else pair.q_alpha
    return binomial(2 * n, n) / den * poly.eval([n])


def power_sum_direct(k: int, n: int, parity: str) -> Fraction:
    r = _check_parity(parity)
    start = 2 if r == 0 else 1
    return sum((Fraction(i) ** k for i in range(start, n + 1, 2)), Fraction(0))


def power_sum_parity(k: int, n: int, parity: str) -> Fraction:
    """Sum of i^k over 1 <= i <= n with i of the given parity, via the
    Bernoulli closed forms."""
    r = _check_parity(parity)
    if k < 0:
        raise ValueError("k must be non-negative")
    # truncate n to the largest integer of matching parity
    if n % 2 != r:
        n -= 1
    if n < 1:
        return Fraction(0)
    if k == 0:
        # the closed forms below miscount the i = 0 slot when k = 0
        return Fraction((n + 1) // 2 if r else n // 2)
    scale = Fraction(1, 2 * (k + 1))
    total = Fraction(0)
    for i in range(k + 1):
        term = 2**i * binomial(k + 1, i) * bernoulli(i)
        total += term * (n ** (k + 1 - i) - r)
    return Fraction(n) ** k + scale * total


def c_constant(k: int) -> Fraction:
    """Constant term of the odd-n parity power sums (up to sign)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return sum(
        (2**i * binomial(k + 1, i) * bernoulli(i) for i in range(k + 1)), Fraction(0)
    ) / (2 * (k + 1))


def conv_parity_sum(ks: Sequence[int], n: int, parities: Sequence[str]) -> Fraction:
    """Brute force sum of prod i_t^k_t over compositions of n into positive
    parts i_t of prescribed parities."""
    if len(ks) != len(parities) or len(ks) < 1:
        raise ValueError("ks and parities must have the same positive length")
    rs = [_check_parity(p) for p in parities]
    if n < len(ks):
        return Fraction(0)
    total = 0
    m = len(ks)
    for head in itertools.product(range(1, n + 1), repeat=m - 1):
        last = n - sum(head)
        if last < 1:
            continue
        parts = head + (last,)
        if any(p % 2 != r for p, r in zip(parts, rs)):
            continue
        term = 1
        for p, k in zip(parts, ks):
            term *= p**k
        total += term
    return Fraction(total)
