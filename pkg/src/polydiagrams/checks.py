"""The verification suite: one function per named check.

Each check returns a :class:`CheckResult`; the CLI ``verify`` command and the
acceptance tests both run these.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import analysis, identities
from .counts import Engine, cuff_count, n_count, p_closed, p_from_q, p_recursive, q_count
from .exact import binomial, format_rational
from .polynomial import EVEN, ODD, ZERO, MultiPoly, interpolate, is_odd_each_variable, signatures

STABLE_FIVE = [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)]
PULLBACK_ORDER = 12


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.seconds:.2f}s)"
        return "\n".join([head] + ["    " + d for d in self.details])


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def run(*args, **kwargs) -> CheckResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _profiles(n: int, top: int):
    return itertools.product(range(top + 1), repeat=n)


def _diff(label, a, b) -> str:
    return f"{label}: {format_rational(a)} != {format_rational(b)}"


# -- routes ------------------------------------------------------------------


@_timed
def closed_form_agreement(engine: Optional[Engine] = None) -> CheckResult:
    """Recursive P against the closed forms."""
    engine = engine or Engine()
    bad = []
    for (g, n), top in {(0, 1): 16, (0, 2): 10, (0, 3): 8, (1, 1): 16}.items():
        for mu in _profiles(n, top):
            a, b = p_recursive(g, n, mu, engine), p_closed(g, n, mu)
            if a != b:
                bad.append(_diff(f"P_{g},{n}{mu}", a, b))
    return CheckResult("P recursive == closed on (0,1)<=16, (0,2)<=10, (0,3)<=8, (1,1)<=16",
                       not bad, bad[:10])


@_timed
def route_agreement(engine: Optional[Engine] = None, top: int = 6) -> CheckResult:
    """Recursive P against the cuff transform of Q."""
    engine = engine or Engine()
    bad = []
    for g, n in STABLE_FIVE:
        for mu in _profiles(n, top):
            a, b = p_recursive(g, n, mu, engine), p_from_q(g, n, mu, engine)
            if a != b:
                bad.append(_diff(f"P_{g},{n}{mu}", a, b))
    return CheckResult(f"P recursive == transform on the five stable types, mu_i <= {top}",
                       not bad, bad[:10])


@_timed
def torus_three_routes(engine: Optional[Engine] = None) -> CheckResult:
    engine = engine or Engine()
    bad = []
    for m in range(17):
        vals = {p_recursive(1, 1, (m,), engine), p_from_q(1, 1, (m,), engine), p_closed(1, 1, (m,))}
        if len(vals) != 1:
            bad.append(f"mu={m}: {sorted(map(format_rational, vals))}")
    return CheckResult("P(1,1;mu<=16): recursive == transform == closed", not bad, bad)


SPOT_VALUES = [
    ("P_0,1(3)", lambda e: p_recursive(0, 1, (3,), e), 5),
    ("P_0,2(1,1)", lambda e: p_recursive(0, 2, (1, 1), e), 2),
    ("P_1,1(2)", lambda e: p_recursive(1, 1, (2,), e), 4),
    ("P_1,1(3)", lambda e: p_recursive(1, 1, (3,), e), 17),
    ("P_0,3(1,1,1)", lambda e: p_recursive(0, 3, (1, 1, 1), e), 6),
    ("P_0,3(2,1,1)", lambda e: p_recursive(0, 3, (2, 1, 1), e), 32),
    ("P_0,3(2,1,1) transform", lambda e: p_from_q(0, 3, (2, 1, 1), e), 32),
    ("Q_1,1(4)", lambda e: q_count(1, 1, (4,), e), 4),
    ("Q_1,2(1,1)", lambda e: q_count(1, 2, (1, 1), e), 1),
    ("N_1,2(1,1)", lambda e: n_count(1, 2, (1, 1), e), 1),
    ("L(2,0)", lambda e: cuff_count(2, 0), 3),
    ("L(3,1)", lambda e: cuff_count(3, 1), 15),
]


@_timed
def spot_values(engine: Optional[Engine] = None) -> CheckResult:
    engine = engine or Engine()
    bad = []
    for label, fn, want in SPOT_VALUES:
        got = fn(engine)
        if got != want:
            bad.append(_diff(label, got, want))
    return CheckResult("spot values", not bad, bad)


def _symmetry_types(family: str):
    for g in range(2):
        for n in range(1, 5):
            if 2 * g - 2 + n > 2:
                continue
            if family == "N" and (g, n) in ((0, 1), (0, 2)):
                continue
            yield g, n


@_timed
def symmetry(max_sum: int = 8) -> CheckResult:
    """Permutation invariance computed by an engine that never sorts profiles."""
    engine = Engine(canonical=False)
    bad = []
    checked = 0
    for family in ("P", "Q", "N"):
        fn = getattr(engine, family)
        for g, n in _symmetry_types(family):
            for mu in _profiles(n, max_sum):
                if sum(mu) > max_sum or list(mu) != sorted(mu, reverse=True):
                    continue
                vals = {fn(g, perm) for perm in set(itertools.permutations(mu))}
                checked += 1
                if len(vals) != 1:
                    bad.append(f"{family}_{g},{n}{mu}: {sorted(map(format_rational, vals))}")
    return CheckResult(f"permutation symmetry of P, Q, N for 2g-2+n <= 2, sum <= {max_sum}",
                       not bad and checked > 0, bad[:10])


# -- identities ----------------------------------------------------------------


def _moment_mismatches(pair_for: Callable[[int], identities.MomentPolyPair]) -> List[str]:
    bad = []
    for alpha in range(4):
        pair = pair_for(alpha)
        for n in range(1, 26):
            for parity in (EVEN, ODD):
                try:
                    closed = identities.moment_sum_closed(n, alpha, parity, pair)
                except ZeroDivisionError:
                    continue
                direct = identities.moment_sum_direct(n, alpha, parity)
                if closed != direct:
                    bad.append(_diff(f"alpha={alpha} n={n} {parity}", closed, direct))
    return bad


_X = MultiPoly.variable(1, 0)
PRINTED_P1 = (_X * _X - 1) ** 2 * _X * _X


def _with_printed_p1(alpha: int) -> identities.MomentPolyPair:
    pair = identities.moment_poly(alpha)
    if alpha != 1:
        return pair
    return identities.MomentPolyPair(1, PRINTED_P1, pair.q_alpha)


@_timed
def moment_sums() -> CheckResult:
    bad = _moment_mismatches(identities.moment_poly)
    return CheckResult("binomial moment sums: closed == direct, alpha <= 3, n <= 25", not bad, bad[:10])


@_timed
def printed_p1_rejected() -> CheckResult:
    bad = _moment_mismatches(_with_printed_p1)
    detail = [f"{len(bad)} mismatches with P_1 = (n^2-1)^2 n^2, e.g. {bad[0]}"] if bad else []
    return CheckResult("moment sums fail with P_1 = (n^2-1)^2 n^2 substituted", bool(bad), detail)


@_timed
def parity_power_sums() -> CheckResult:
    bad = []
    for k in range(7):
        for n in range(41):
            for parity in (EVEN, ODD):
                a = identities.power_sum_parity(k, n, parity)
                b = identities.power_sum_direct(k, n, parity)
                if a != b:
                    bad.append(_diff(f"k={k} n={n} {parity}", a, b))
    return CheckResult("parity power sums: closed == direct, k <= 6, n <= 40", not bad, bad[:10])


@_timed
def c_constants() -> CheckResult:
    bad = [f"C_{k} = {format_rational(identities.c_constant(k))}"
           for k in range(2, 11, 2) if identities.c_constant(k) != 0]
    return CheckResult("C_k == 0 for even k in 2..10", not bad, bad)


def conv_sum_fit(ks, parities) -> MultiPoly:
    """Fit n -> conv_parity_sum on the forced parity class of n; raises on a
    validation miss."""
    m = len(ks)
    deg = sum(ks) + m - 1
    r = sum(1 for p in parities if p == ODD) % 2
    first = 1 if r else 2
    nodes = [first + 2 * j for j in range(deg + 3)]
    vals = [identities.conv_parity_sum(ks, x, parities) for x in nodes]
    poly = interpolate(1, [nodes[: deg + 1]], vals[: deg + 1])
    for x, v in zip(nodes[deg + 1:], vals[deg + 1:]):
        if poly.eval([x]) != v:
            raise ArithmeticError(f"conv sum {ks} {parities} not polynomial at n={x}")
    return poly


@_timed
def conv_sums_odd_polynomial() -> CheckResult:
    bad = []
    for m in (2, 3):
        for ks in itertools.product((1, 3, 5), repeat=m):
            deg = sum(ks) + m - 1
            leads = set()
            for parities in itertools.product((EVEN, ODD), repeat=m):
                try:
                    poly = conv_sum_fit(ks, parities)
                except ArithmeticError as exc:
                    bad.append(str(exc))
                    continue
                if not is_odd_each_variable(poly) or poly.total_degree() != deg:
                    bad.append(f"{ks} {parities}: degree {poly.total_degree()}, odd={is_odd_each_variable(poly)}")
                leads.add(poly.coefficient((deg,)))
            if len(leads) != 1:
                bad.append(f"{ks}: leading coefficients {sorted(map(format_rational, leads))}")
    return CheckResult("parity-constrained convolutions are odd of degree sum(k)+m-1 with parity-free lead",
                       not bad, bad[:10])


# -- fits ----------------------------------------------------------------------

_fit_memo: Dict[tuple, analysis.FitReport] = {}


def fit(family: str, g: int, n: int, engine: Optional[Engine] = None) -> analysis.FitReport:
    key = (family, g, n)
    if key not in _fit_memo:
        _fit_memo[key] = analysis.fit_quasipoly(family, g, n, engine, strict=False)
    return _fit_memo[key]


Q11_ODD = MultiPoly.univariate([0, Fraction(-1, 24), 0, Fraction(1, 24)])
Q11_EVEN = MultiPoly.univariate([0, Fraction(8, 24), 0, Fraction(1, 24)])
Q03_POS = 2 * MultiPoly(3, {(1, 1, 1): 1})


@_timed
def q_fits(engine: Optional[Engine] = None) -> CheckResult:
    bad = []
    for g, n in STABLE_FIVE:
        rep = fit("Q", g, n, engine)
        bad += [f"Q_{g},{n}: {f}" for f in rep.failures]
    q11 = fit("Q", 1, 1, engine).quasipoly
    if q11[(ODD,)] != Q11_ODD or q11[(EVEN,)] != Q11_EVEN:
        bad.append("Q_1,1 pieces differ from (mu^3-mu)/24 and (mu^3+8mu)/24")
    q03 = fit("Q", 0, 3, engine).quasipoly
    for sig in signatures(3):
        if ZERO not in sig and q03[sig] != Q03_POS:
            bad.append(f"Q_0,3 piece {sig} is {q03[sig].to_text()}")
    return CheckResult("Q quasi-polynomial fits on the five stable types", not bad, bad[:10])


@_timed
def n_fits(engine: Optional[Engine] = None) -> CheckResult:
    bad = []
    for g, n in STABLE_FIVE:
        rep = fit("N", g, n, engine)
        bad += [f"N_{g},{n}: {f}" for f in rep.failures]
    n11 = fit("N", 1, 1, engine).quasipoly
    want = MultiPoly.univariate([0, Fraction(20, 48), 0, Fraction(1, 48)])
    if n11[(EVEN,)] != want or not n11[(ODD,)].is_zero():
        bad.append("N_1,1 pieces differ from (mu^3+20mu)/48 and 0")
    return CheckResult("N quasi-polynomial fits on the five stable types", not bad, bad[:10])


F11_QUOTIENT = MultiPoly.univariate([Fraction(-12, 12), Fraction(20, 12), Fraction(3, 12), Fraction(1, 12)])


@_timed
def structure(engine: Optional[Engine] = None) -> CheckResult:
    bad = []
    try:
        f11 = analysis.structure_polynomial(1, 1, 16, engine)
        quot, rem = f11.divmod_linear(Fraction(3, 2))
        if rem != 0:
            bad.append(f"F_1,1 = {f11.to_text()} is not divisible by 2mu-3")
        elif quot / 2 != F11_QUOTIENT:
            bad.append(f"F_1,1/(2mu-3) = {(quot / 2).to_text()}")
        f03 = analysis.structure_polynomial(0, 3, 8, engine)
        # cross-route: the closed form for P_0,3 through the same normalisation
        for mu in itertools.product(range(1, 9), repeat=3):
            want = p_closed(0, 3, mu)
            for m in mu:
                want = want * (2 * m - 1) / binomial(2 * m - 1, m)
            if f03.eval(mu) != want:
                bad.append(f"F_0,3{mu} disagrees with the closed form")
                break
    except analysis.StructureError as exc:
        bad.append(str(exc))
    return CheckResult("structure polynomials F_1,1 and F_0,3 are exact", not bad, bad)


@_timed
def top_ratio(engine: Optional[Engine] = None) -> CheckResult:
    bad = []
    for g, n in STABLE_FIVE:
        ok, diffs = analysis.qn_top_check(g, n, engine, fit("Q", g, n, engine), fit("N", g, n, engine))
        bad += [f"({g},{n}) {d}" for d in diffs]
    q11 = analysis.top_coefficients(fit("Q", 1, 1, engine))[(1,)]
    n11 = analysis.top_coefficients(fit("N", 1, 1, engine))[(1,)]
    if (q11, n11) != (Fraction(1, 24), Fraction(1, 48)):
        bad.append(f"(1,1) tops {format_rational(q11)}, {format_rational(n11)}")
    return CheckResult("Q top == 2^(4g+2n-5) N top on the five stable types", not bad, bad)


# -- intersections -------------------------------------------------------------


@_timed
def intersections(engine: Optional[Engine] = None) -> CheckResult:
    bad, lines = [], []
    for g, n in STABLE_FIVE:
        try:
            tq = analysis.intersection_numbers(g, n, "Q", engine, fit("Q", g, n, engine))
            tn = analysis.intersection_numbers(g, n, "N", engine, fit("N", g, n, engine))
        except analysis.FitError as exc:
            bad.append(f"({g},{n}): {exc}")
            continue
        if tq.values != tn.values:
            bad.append(f"({g},{n}): Q and N tables differ")
        if len(tq.values) == 1:
            shown = format_rational(next(iter(tq.values.values())))
        else:
            shown = ", ".join(f"{list(d)}={format_rational(v)}" for d, v in sorted(tq.values.items()))
        lines.append(f"({g},{n}): {shown}")
    t03 = analysis.intersection_numbers(0, 3, "Q", engine, fit("Q", 0, 3, engine))
    t11 = analysis.intersection_numbers(1, 1, "Q", engine, fit("Q", 1, 1, engine))
    if t03[(0, 0, 0)] != 1:
        bad.append(f"(0,3) value {format_rational(t03[(0, 0, 0)])}")
    if t11[(1,)] != Fraction(1, 24):
        bad.append(f"(1,1) value {format_rational(t11[(1,)])}")
    return CheckResult("intersection numbers from Q and N agree", not bad, lines + bad)


# -- pullback ------------------------------------------------------------------


@_timed
def pullback(order: int = PULLBACK_ORDER, engine: Optional[Engine] = None) -> CheckResult:
    rep = analysis.pullback_check(order, engine)
    if rep.passed:
        msg = [f"ε={rep.epsilon}, orders 0..{order} match"]
    else:
        msg = [f"ε={rep.epsilon}"] + [
            f"nu={nu}: {format_rational(p)} vs Q'={format_rational(q)}" for nu, p, q, m in rep.orders if not m
        ]
    return CheckResult(f"pullback of the (1,1) differential, K={order}", rep.passed, msg)


SUITES: Dict[str, List[Callable[..., CheckResult]]] = {
    "routes": [closed_form_agreement, route_agreement, torus_three_routes, spot_values, symmetry],
    "identities": [moment_sums, printed_p1_rejected, parity_power_sums, c_constants, conv_sums_odd_polynomial],
    "fits": [q_fits, n_fits, structure, top_ratio],
    "intersections": [intersections],
    "pullback": [pullback],
}
SUITE_NAMES = list(SUITES) + ["all"]


def run_suite(name: str, order: int = PULLBACK_ORDER) -> List[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for suite in names:
        for check in SUITES[suite]:
            out.append(check(order) if check is pullback else check())
    return out
