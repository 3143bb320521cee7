"""Verification layer on top of the counting engines.

Fits parity-stratified quasi-polynomials to Q and N, extracts the structure
polynomial F_{g,n}, reads intersection numbers off top-degree coefficients and
checks the n = 1 pullback of generating differentials as truncated Laurent
series.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .counts import Engine, default_engine, is_unstable
from .exact import binomial, format_rational, odd_falling
from .polynomial import EVEN, ODD, ZERO, MultiPoly, QuasiPoly, interpolate, is_odd_each_variable, signatures

__all__ = [
    "FitError",
    "FitReport",
    "fit_degree",
    "fit_nodes",
    "fit_quasipoly",
    "StructureError",
    "structure_polynomial",
    "top_coefficients",
    "IntersectionTable",
    "intersection_numbers",
    "qn_top_check",
    "LaurentSeries",
    "PullbackReport",
    "pullback_check",
]

Sig = Tuple[str, ...]
Profile = Tuple[int, ...]


class FitError(ArithmeticError):
    """A fitted piece failed validation, degree or oddness checks."""

    def __init__(self, message: str, report: "FitReport"):
        super().__init__(message)
        self.report = report


def fit_degree(g: int, n: int) -> int:
    return 6 * g - 6 + 3 * n


def fit_nodes(cls: str, degree: int, extra: int = 0) -> List[int]:
    """First degree+1+extra positive integers of the given parity class."""
    start = {ODD: 1, EVEN: 2}[cls]
    return [start + 2 * j for j in range(degree + 1 + extra)]


@dataclass
class FitReport:
    family: str
    g: int
    n: int
    quasipoly: QuasiPoly
    degree_observed: Dict[Sig, int] = field(default_factory=dict)
    odd: Dict[Sig, bool] = field(default_factory=dict)
    validation_points: List[Tuple[Profile, Fraction, Fraction]] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "g": self.g,
            "n": self.n,
            "pieces": [
                {
                    "parity": list(sig),
                    "poly": self.quasipoly[sig].to_json(),
                    "text": self.quasipoly[sig].to_text(),
                    "degree": self.degree_observed[sig],
                    "odd": self.odd[sig],
                }
                for sig in sorted(self.quasipoly.pieces)
            ],
            "validation": [
                {"mu": list(mu), "expected": format_rational(e), "fitted": format_rational(f)}
                for mu, e, f in self.validation_points
            ],
            "failures": list(self.failures),
            "pass": self.passed,
        }


def _counter(family: str, engine: Engine):
    if family == "Q":
        return engine.Q
    if family == "N":
        return engine.N
    raise ValueError(f"fits are defined for families Q and N, not {family!r}")


def _embed(sig: Sig, free_values: Sequence[int]) -> Profile:
    it = iter(free_values)
    return tuple(0 if s == ZERO else next(it) for s in sig)


def _piece_vanishes(family: str, sig: Sig) -> bool:
    # arc counts vanish identically on profiles with odd total
    return family == "N" and sum(1 for s in sig if s == ODD) % 2 == 1


def fit_quasipoly(family: str, g: int, n: int, engine: Optional[Engine] = None,
                  strict: bool = True) -> FitReport:
    family = family.upper()
    if is_unstable(g, n) or g < 0 or n < 1:
        raise ValueError(f"no fit for unstable or invalid surface type ({g},{n})")
    engine = engine or default_engine()
    f = _counter(family, engine)
    D = fit_degree(g, n)
    qp = QuasiPoly(n)
    report = FitReport(family, g, n, qp)

    for sig in signatures(n):
        classes = [s for s in sig if s != ZERO]
        k = len(classes)
        zeros = n - k
        axes = [fit_nodes(c, D, extra=2) for c in classes]
        grid = [a[: D + 1] for a in axes]
        values = {
            idx: f(g, _embed(sig, [grid[t][i] for t, i in enumerate(idx)]))
            for idx in itertools.product(range(D + 1), repeat=k)
        }
        poly = interpolate(k, grid, values)
        qp[sig] = poly

        # validation: each axis pushed to each of its two extra nodes, the
        # other axes at their first node or at their last extra node
        points = set()
        for t in range(k):
            for e in axes[t][D + 1:]:
                for fill in (0, -1):
                    pt = [axes[s][fill] if s != t else e for s in range(k)]
                    points.add(tuple(pt))
        for pt in sorted(points):
            mu = _embed(sig, pt)
            expected = f(g, mu)
            fitted = poly.eval(pt)
            report.validation_points.append((mu, expected, fitted))
            if expected != fitted:
                report.failures.append(f"{sig}: validation mismatch at {mu}")

        deg = poly.total_degree()
        report.degree_observed[sig] = deg
        odd = is_odd_each_variable(poly)
        report.odd[sig] = odd
        if not odd:
            report.failures.append(f"{sig}: piece is not odd in each variable")
        if deg > D - zeros:
            report.failures.append(f"{sig}: degree {deg} exceeds {D - zeros}")
        if zeros == 0 and not _piece_vanishes(family, sig) and deg != D:
            report.failures.append(f"{sig}: degree {deg} != {D}")

    if strict and report.failures:
        raise FitError(report.failures[0], report)
    return report


# --------------------------------------------------------------------------
# structure polynomial
# --------------------------------------------------------------------------


class StructureError(ArithmeticError):
    pass


def _structure_residue(engine: Engine, g: int, mu: Profile, a: int) -> Fraction:
    value = engine.P(g, mu)
    for m in mu:
        value = value * odd_falling(m, a) / binomial(2 * m - 1, m)
    return value


def structure_polynomial(g: int, n: int, max_validate: int = 8,
                         engine: Optional[Engine] = None) -> MultiPoly:
    """F_{g,n}: P_{g,n} times prod odd_falling(mu_i, a) / prod C(2mu_i-1, mu_i),
    with a = 3g-3+n, as an exact polynomial on positive profiles."""
    if is_unstable(g, n) or g < 0 or n < 1:
        raise ValueError(f"no structure polynomial for ({g},{n})")
    engine = engine or default_engine()
    a = 3 * g - 3 + n
    size = 2 * a + 3  # per-variable degree is at most 2a+2
    # odd_falling has only odd factors, so no positive node is ever skipped
    nodes = [m for m in range(1, 4 * size) if odd_falling(m, a) != 0][:size]
    values = {
        idx: _structure_residue(engine, g, tuple(nodes[i] for i in idx), a)
        for idx in itertools.product(range(size), repeat=n)
    }
    poly = interpolate(n, [nodes] * n, values)
    node_set = set(nodes)
    for mu in itertools.product(range(1, max_validate + 1), repeat=n):
        if all(m in node_set for m in mu) or any(odd_falling(m, a) == 0 for m in mu):
            continue
        if poly.eval(mu) != _structure_residue(engine, g, mu, a):
            raise StructureError(f"structure residue is not polynomial at {mu}")
    return poly


# --------------------------------------------------------------------------
# top coefficients and intersection numbers
# --------------------------------------------------------------------------


def _d_vectors(g: int, n: int) -> List[Tuple[int, ...]]:
    total = 3 * g - 3 + n
    return [d for d in itertools.product(range(total + 1), repeat=n) if sum(d) == total]


def top_coefficients(report: FitReport) -> Dict[Tuple[int, ...], Fraction]:
    """Top coefficients c_d, checked to be equal across every zero-free piece
    that does not vanish identically."""
    g, n = report.g, report.n
    tops: Optional[Dict[Tuple[int, ...], Fraction]] = None
    for sig in signatures(n):
        if ZERO in sig or _piece_vanishes(report.family, sig):
            continue
        poly = report.quasipoly[sig]
        here = {d: poly.coefficient(tuple(2 * x + 1 for x in d)) for d in _d_vectors(g, n)}
        if tops is None:
            tops = here
        elif here != tops:
            raise FitError(f"top coefficients of {sig} differ from other pieces", report)
    assert tops is not None
    return tops


@dataclass
class IntersectionTable:
    g: int
    n: int
    source: str
    values: Dict[Tuple[int, ...], Fraction]

    def __getitem__(self, d) -> Fraction:
        return self.values[tuple(d)]

    def to_json(self) -> list:
        return [
            {"g": self.g, "n": self.n, "d": list(d), "value": format_rational(v)}
            for d, v in sorted(self.values.items())
        ]


def intersection_numbers(g: int, n: int, source: str = "Q",
                         engine: Optional[Engine] = None,
                         report: Optional[FitReport] = None) -> IntersectionTable:
    source = source.upper()
    if report is None:
        report = fit_quasipoly(source, g, n, engine)
    tops = top_coefficients(report)
    if source == "Q":
        scale = Fraction(2) ** (g - 1)
    elif source == "N":
        scale = Fraction(2) ** (5 * g - 6 + 2 * n)
    else:
        raise ValueError(f"unknown source {source!r}")
    values = {}
    for d, c in tops.items():
        v = c * scale
        for x in d:
            v *= factorial(x)
        if v <= 0:
            raise FitError(f"non-positive intersection number at d={d}", report)
        values[d] = v
    return IntersectionTable(g, n, source, values)


def qn_top_check(g: int, n: int, engine: Optional[Engine] = None,
                 q_report: Optional[FitReport] = None,
                 n_report: Optional[FitReport] = None) -> Tuple[bool, List[str]]:
    """Q-top == 2^(4g+2n-5) N-top for every top monomial; returns (ok, diffs)."""
    q_tops = top_coefficients(q_report or fit_quasipoly("Q", g, n, engine))
    n_tops = top_coefficients(n_report or fit_quasipoly("N", g, n, engine))
    ratio = Fraction(2) ** (4 * g + 2 * n - 5)
    diffs = [
        f"d={d}: Q {format_rational(q_tops[d])} vs 2^{4 * g + 2 * n - 5}*N {format_rational(ratio * n_tops[d])}"
        for d in sorted(q_tops)
        if q_tops[d] != ratio * n_tops[d]
    ]
    return not diffs, diffs


# --------------------------------------------------------------------------
# Laurent series and the pullback check
# --------------------------------------------------------------------------


class LaurentSeries:
    """Truncated series sum_{k=min_order}^{K} c_k z^k."""

    def __init__(self, min_order: int, coefficients: Sequence, K: int):
        if K < min_order - 1:
            raise ValueError("truncation order below the first coefficient")
        coeffs = [Fraction(c) for c in coefficients][: K - min_order + 1]
        coeffs += [Fraction(0)] * (K - min_order + 1 - len(coeffs))
        self.min_order = min_order
        self.coefficients = coeffs
        self.K = K

    @classmethod
    def monomial(cls, order: int, K: int, c=1) -> "LaurentSeries":
        return cls(order, [c], K)

    @classmethod
    def binomial_power(cls, m: int, K: int) -> "LaurentSeries":
        """(1+z)^m for any integer m."""
        if m >= 0:
            return cls(0, [comb(m, j) for j in range(K + 1)], K)
        r = -m
        return cls(0, [(-1) ** j * comb(r + j - 1, j) for j in range(K + 1)], K)

    def coefficient(self, order: int) -> Fraction:
        if order > self.K:
            raise IndexError(f"order {order} is beyond truncation {self.K}")
        i = order - self.min_order
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        K = min(self.K, other.K)
        lo = min(self.min_order, other.min_order)
        return LaurentSeries(lo, [self.coefficient(k) + other.coefficient(k) for k in range(lo, K + 1)], K)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            c = Fraction(other)
            return LaurentSeries(self.min_order, [x * c for x in self.coefficients], self.K)
        lo = self.min_order + other.min_order
        # a product is only known up to the smaller reach of either factor
        K = min(self.K + other.min_order, other.K + self.min_order)
        out = [Fraction(0)] * max(0, K - lo + 1)
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                k = i + j
                if k >= len(out):
                    break
                out[k] += a * b
        return LaurentSeries(lo, out, K)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        terms = [f"{format_rational(c)}*z^{self.min_order + i}" for i, c in enumerate(self.coefficients) if c]
        return "LaurentSeries(" + " + ".join(terms or ["0"]) + f" + O(z^{self.K + 1}))"


@dataclass
class PullbackReport:
    K: int
    epsilon: Optional[int]
    orders: List[Tuple[int, Fraction, Fraction, bool]]  # (nu, pullback coeff, Q'(nu), match)

    @property
    def passed(self) -> bool:
        return self.epsilon is not None and all(m for *_, m in self.orders)

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "epsilon": self.epsilon,
            "orders": [
                {"nu": nu, "pullback": format_rational(p), "q_primed": format_rational(q), "match": m}
                for nu, p, q, m in self.orders
            ],
            "pass": self.passed,
        }


def _primed(value: Fraction, mu: int) -> Fraction:
    return value / 2 if mu == 0 else value


def pullback_series(K: int, engine: Optional[Engine] = None) -> LaurentSeries:
    """sum_{mu<=K} P'_{1,1}(mu) x^(-mu-1) dx/dz under x = (1+z)^2/z, through z^(K-1)."""
    engine = engine or default_engine()
    top = K - 1
    reach = top + 2  # generous truncation for exact factors
    z2m1 = LaurentSeries(0, [-1, 0, 1], reach)
    total = LaurentSeries(-1, [], top)
    for mu in range(K + 1):
        term = LaurentSeries.monomial(mu - 1, reach + mu) * z2m1
        term = term * LaurentSeries.binomial_power(-2 * mu - 2, reach)
        total = total + term * _primed(engine.P(1, (mu,)), mu)
    return total


def pullback_check(K: int = 12, engine: Optional[Engine] = None) -> PullbackReport:
    if K < 4:
        raise ValueError("pullback_check needs K >= 4")
    engine = engine or default_engine()
    series = pullback_series(K, engine)
    q = [_primed(engine.Q(1, (nu,)), nu) for nu in range(K + 1)]
    c0 = series.coefficient(-1)
    eps: Optional[int] = None
    for cand in (1, -1):
        if c0 == cand * q[0]:
            eps = cand
    orders = []
    for nu in range(K + 1):
        p = series.coefficient(nu - 1)
        orders.append((nu, p, q[nu], eps is not None and p == eps * q[nu]))
    return PullbackReport(K, eps, orders)
