"""Counting engines for polygon diagrams (P), pruned polygon diagrams (Q),
pruned arc diagrams (N) and cuff diagrams (L).

All recursions pivot on the first entry of the profile. The default engine
sorts every profile in descending order first, so the pivot is the largest
entry and cache keys are canonical. A non-canonical engine (used by the
symmetry tests) keeps the caller's order and pivots on the first positive
entry instead.
"""
from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .exact import bar, binomial, format_rational, parse_rational, tilde, tilde_sum

__all__ = [
    "FAMILIES",
    "CountKey",
    "CountCache",
    "Engine",
    "cuff_count",
    "q_base",
    "p_closed",
    "p_recursive",
    "p_from_q",
    "q_count",
    "n_count",
    "count",
    "default_engine",
    "is_unstable",
]

FAMILIES = ("P", "Q", "N")

Profile = Tuple[int, ...]
CountKey = Tuple[str, int, Profile]

_HALF = Fraction(1, 2)


def is_unstable(g: int, n: int) -> bool:
    """Disc or annulus."""
    return g == 0 and n in (1, 2)


def _check(g: int, n: int, mu: Sequence[int]) -> Profile:
    mu = tuple(int(m) for m in mu)
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    if len(mu) != n:
        raise ValueError(f"profile {mu} has length {len(mu)}, expected n={n}")
    if any(m < 0 for m in mu):
        raise ValueError(f"profile entries must be non-negative: {mu}")
    if g < 0:
        raise ValueError(f"genus must be non-negative, got {g}")
    return mu


class CountCache:
    """Write-once memo table ``(family, g, profile) -> Fraction``.

    Lookups are lock-free; a write takes a lock and refuses to change an
    existing value. Racing computations of the same key may both compute, but
    must agree.
    """

    def __init__(self) -> None:
        self._data: Dict[CountKey, Fraction] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: CountKey) -> bool:
        return key in self._data

    def get(self, key: CountKey) -> Optional[Fraction]:
        return self._data.get(key)

    def put(self, key: CountKey, value: Fraction) -> Fraction:
        value = Fraction(value)
        if value.denominator != 1 or value < 0:
            raise ArithmeticError(f"count {key} = {value} is not a non-negative integer")
        with self._lock:
            old = self._data.get(key)
            if old is None:
                self._data[key] = value
                return value
        if old != value:
            raise RuntimeError(f"cache conflict for {key}: {old} != {value}")
        return old

    def items(self):
        return sorted(self._data.items())

    # persistence -------------------------------------------------------

    def dump_lines(self) -> list:
        lines = []
        for (family, g, mu), value in self._data.items():
            lines.append(
                f"{family} {g} {len(mu)} {','.join(map(str, mu))} {format_rational(value)}"
            )
        return sorted(lines)

    def save(self, path) -> None:
        text = "".join(line + "\n" for line in self.dump_lines())
        Path(path).write_text(text, newline="\n")

    def load(self, path) -> int:
        """Merge records from ``path``; returns the number of records read."""
        count = 0
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            if not raw.strip():
                continue
            key, value = _parse_record(raw, lineno)
            self.put(key, value)
            count += 1
        return count


def _parse_record(raw: str, lineno: int) -> Tuple[CountKey, Fraction]:
    parts = raw.split(" ")
    bad = ValueError(f"cache line {lineno}: unrecognised record {raw!r}")
    if len(parts) != 5 or parts[0] not in FAMILIES:
        raise bad
    try:
        g, n = int(parts[1]), int(parts[2])
        mu = tuple(int(x) for x in parts[3].split(","))
        value = parse_rational(parts[4])
    except ValueError:
        raise bad from None
    if g < 0 or n != len(mu) or any(m < 0 for m in mu) or list(mu) != sorted(mu, reverse=True):
        raise bad
    return (parts[0], g, mu), value


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def cuff_count(b: int, a: int) -> Fraction:
    """Cuff diagrams with b outer and a inner vertices."""
    if a < 0 or b < 0:
        raise ValueError("cuff_count needs non-negative arguments")
    if a > b:
        return Fraction(0)
    if a == 0:
        return Fraction(1) if b == 0 else _HALF * binomial(2 * b, b)
    return a * binomial(2 * b, b - a)


def _q01(mu: Profile) -> Fraction:
    return Fraction(1 if mu[0] == 0 else 0)


def _q02(mu: Profile) -> Fraction:
    return Fraction(bar(mu[0]) if mu[0] == mu[1] else 0)


def _q03(mu: Profile) -> Fraction:
    m1, m2, m3 = sorted(mu, reverse=True)
    if m3 > 0:
        return Fraction(2 * m1 * m2 * m3)
    if m2 > 0:
        return Fraction(m1 * m2)
    return Fraction(bar(m1) if m1 % 2 == 0 else 0)


def _q11(mu: Profile) -> Fraction:
    m = mu[0]
    if m == 0:
        return Fraction(1)
    if m % 2:
        return Fraction(m**3 - m, 24)
    return Fraction(m**3 + 8 * m, 24)


def _n03(mu: Profile) -> Fraction:
    if sum(mu) % 2:
        return Fraction(0)
    return Fraction(bar(mu[0]) * bar(mu[1]) * bar(mu[2]))


def _n11(mu: Profile) -> Fraction:
    m = mu[0]
    if m == 0:
        return Fraction(1)
    if m % 2:
        return Fraction(0)
    return Fraction(m**3 + 20 * m, 48)


def q_base(g: int, n: int, profile: Sequence[int], include_torus: bool = False) -> Optional[Fraction]:
    """Closed-form pruned count, or ``None`` when no closed form is known.

    Covers the disc, annulus and pants, all-zero profiles, and (only when
    ``include_torus``) the once-punctured torus. The engine never uses the
    torus formula; it is kept as an oracle.
    """
    mu = _check(g, n, profile)
    if not any(mu):
        return Fraction(1)
    if g == 0 and n == 1:
        return _q01(mu)
    if g == 0 and n == 2:
        return _q02(mu)
    if g == 0 and n == 3:
        return _q03(mu)
    if include_torus and (g, n) == (1, 1):
        return _q11(mu)
    return None


def _c(mu: int) -> Fraction:
    return binomial(2 * mu - 1, mu)


def p_closed(g: int, n: int, profile: Sequence[int]) -> Optional[Fraction]:
    """Closed-form polygon-diagram count for the disc, annulus, pants and
    once-punctured torus; ``None`` otherwise."""
    mu = _check(g, n, profile)
    if (g, n) == (0, 1):
        (m,) = mu
        if m == 0:
            return Fraction(1)
        return _c(m) * Fraction(2, m + 1)
    if (g, n) == (0, 2):
        m1, m2 = sorted(mu, reverse=True)
        if m2 == 0:
            return _c(m1)
        return _c(m1) * _c(m2) * (Fraction(2 * m1 * m2, m1 + m2) + 1)
    if (g, n) == (0, 3):
        pairs = sum(mu[i] * mu[j] for i, j in itertools.combinations(range(3), 2))
        diag = sum(Fraction(m * m - m, 2 * m - 1) for m in mu)
        return _c(mu[0]) * _c(mu[1]) * _c(mu[2]) * (2 * mu[0] * mu[1] * mu[2] + pairs + diag + 1)
    if (g, n) == (1, 1):
        (m,) = mu
        return _c(m) / (2 * m - 1) * Fraction(m**3 + 3 * m**2 + 20 * m - 12, 12)
    return None


# --------------------------------------------------------------------------
# recursive engines
# --------------------------------------------------------------------------

def _splits(rest: Profile):
    """All labelled splittings rest = I + J (as sub-tuples, order kept)."""
    idx = range(len(rest))
    for mask in range(1 << len(rest)):
        I = tuple(rest[t] for t in idx if mask >> t & 1)
        J = tuple(rest[t] for t in idx if not mask >> t & 1)
        yield I, J


class Engine:
    """Memoised P, Q and N recursions sharing one :class:`CountCache`."""

    def __init__(self, cache: Optional[CountCache] = None, canonical: bool = True) -> None:
        self.cache = cache if cache is not None else CountCache()
        self.canonical = canonical

    # entry points take an ordered profile; n is len(mu)

    def P(self, g: int, mu: Sequence[int]) -> Fraction:
        return self._get("P", g, tuple(mu))

    def Q(self, g: int, mu: Sequence[int]) -> Fraction:
        return self._get("Q", g, tuple(mu))

    def N(self, g: int, mu: Sequence[int]) -> Fraction:
        return self._get("N", g, tuple(mu))

    def _get(self, family: str, g: int, mu: Profile) -> Fraction:
        if g < 0 or not mu:
            return Fraction(0)
        if not any(mu):
            return Fraction(1)
        if self.canonical:
            mu = tuple(sorted(mu, reverse=True))
        else:
            p = next(t for t, m in enumerate(mu) if m > 0)
            mu = (mu[p],) + mu[:p] + mu[p + 1:]
        key = (family, g, mu)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        value = getattr(self, "_rec_" + family)(g, mu)
        return self.cache.put(key, value)

    # polygon diagrams ---------------------------------------------------

    def _rec_P(self, g: int, mu: Profile) -> Fraction:
        m1, rest = mu[0], mu[1:]
        P = self.P
        total = P(g, (m1 - 1,) + rest)
        for k, mk in enumerate(rest):
            if mk:
                others = rest[:k] + rest[k + 1:]
                total += mk * P(g, (m1 + mk - 1,) + others)
        for j in range(1, m1):
            i = m1 - 1 - j
            total += P(g - 1, (i, j) + rest)
            for g1 in range(g + 1):
                for I, J in _splits(rest):
                    total += P(g1, (i,) + I) * P(g - g1, (j,) + J)
        return total

    # pruned polygon diagrams ---------------------------------------------

    def _rec_Q(self, g: int, mu: Profile) -> Fraction:
        n = len(mu)
        if g == 0 and n <= 3:
            return q_base(g, n, mu)
        m1, rest = mu[0], mu[1:]
        Q = self.Q
        total = Fraction(0)
        # cutting along a non-separating arc
        if g >= 1:
            total += self._triple_sum(m1, lambda i, j: Q(g - 1, (i, j) + rest))
            total += Fraction(tilde(m1), 2) * Q(g - 1, (0, 0) + rest)
        # arc to another boundary, or cutting off an annulus around it
        for k, mk in enumerate(rest):
            others = rest[:k] + rest[k + 1:]
            if mk > 0:
                s = sum(
                    ((m1 + mk - i) * mk * Q(g, (i,) + others) for i in range(1, m1 + mk + 1)),
                    Fraction(0),
                )
                s += tilde_sum(m1 - mk, lambda i, x: mk * Q(g, (i,) + others))
                s += m1 * mk * Q(g, (0,) + others)
            else:
                s = sum(((m1 - i) * Q(g, (i,) + others) for i in range(1, m1 + 1)), Fraction(0))
                s += tilde(m1) * Q(g, (0,) + others)
            total += s
        # separating arc
        for g1 in range(g + 1):
            g2 = g - g1
            for I, J in _splits(rest):
                if is_unstable(g1, len(I) + 1) or is_unstable(g2, len(J) + 1):
                    continue
                total += self._triple_sum(
                    m1, lambda i, j: Q(g1, (i,) + I) * Q(g2, (j,) + J)
                )
                total += Fraction(tilde(m1), 2) * Q(g1, (0,) + I) * Q(g2, (0,) + J)
        return total

    @staticmethod
    def _triple_sum(m1: int, f) -> Fraction:
        """sum over i >= 1, j, m >= 0, i+j+m = m1 of m*f(i, j)."""
        total = Fraction(0)
        for i in range(1, m1 + 1):
            for j in range(0, m1 - i):
                total += (m1 - i - j) * f(i, j)
        return total

    # pruned arc diagrams -------------------------------------------------

    def _rec_N(self, g: int, mu: Profile) -> Fraction:
        n = len(mu)
        if is_unstable(g, n):
            raise ValueError(f"N_{{{g},{n}}} is not defined by this engine")
        if (g, n) == (0, 3):
            return _n03(mu)
        if (g, n) == (1, 1):
            return _n11(mu)
        m1, rest = mu[0], mu[1:]
        N = self.N
        total = Fraction(0)
        if g >= 1:
            total += self._even_triple_sum(m1, lambda i, j: N(g - 1, (i, j) + rest))
        for k, mk in enumerate(rest):
            others = rest[:k] + rest[k + 1:]
            if mk > 0:
                s = sum(
                    (Fraction(m, 2) * mk * N(g, (m1 + mk - m,) + others)
                     for m in range(2, m1 + mk + 1, 2)),
                    Fraction(0),
                )
                s += tilde_sum(
                    m1 - mk,
                    lambda i, x: Fraction(1, 2) * mk * N(g, (i,) + others) if x % 2 == 0 else 0,
                    i_min=0,
                )
            else:
                # arcs encircling an empty boundary: the pivot may sit on any
                # of the m removed vertices, so the weight is m (not m/2)
                s = sum((m * N(g, (m1 - m,) + others) for m in range(2, m1 + 1, 2)), Fraction(0))
            total += s
        for g1 in range(g + 1):
            g2 = g - g1
            for I, J in _splits(rest):
                if is_unstable(g1, len(I) + 1) or is_unstable(g2, len(J) + 1):
                    continue
                total += self._even_triple_sum(
                    m1, lambda i, j: N(g1, (i,) + I) * N(g2, (j,) + J)
                )
        return total

    @staticmethod
    def _even_triple_sum(m1: int, f) -> Fraction:
        """sum over i, j >= 0, even m >= 2, i+j+m = m1 of (m/2)*f(i, j)."""
        total = Fraction(0)
        for m in range(2, m1 + 1, 2):
            for i in range(0, m1 - m + 1):
                total += Fraction(m, 2) * f(i, m1 - m - i)
        return total


_default = Engine()


def default_engine() -> Engine:
    return _default


def _engine(engine: Optional[Engine]) -> Engine:
    return _default if engine is None else engine


def p_recursive(g: int, n: int, profile: Sequence[int], engine: Optional[Engine] = None) -> Fraction:
    """Polygon-diagram count from the P recursion."""
    mu = _check(g, n, profile)
    return _engine(engine).P(g, mu)


def q_count(g: int, n: int, profile: Sequence[int], engine: Optional[Engine] = None) -> Fraction:
    """Pruned polygon-diagram count (closed forms for g = 0, n <= 3, recursion otherwise)."""
    mu = _check(g, n, profile)
    return _engine(engine).Q(g, mu)


def n_count(g: int, n: int, profile: Sequence[int], engine: Optional[Engine] = None) -> Fraction:
    """Pruned arc-diagram count. Defined for every (g, n) except the disc and annulus."""
    mu = _check(g, n, profile)
    if is_unstable(g, n):
        raise ValueError(f"N is not defined for (g, n) = ({g}, {n})")
    return _engine(engine).N(g, mu)


def _zeros(mu: Iterable[int]) -> int:
    return sum(1 for m in mu if m == 0)


def p_from_q(g: int, n: int, profile: Sequence[int], engine: Optional[Engine] = None) -> Fraction:
    """P via the cuff decomposition: P' = sum_nu Q'(nu) prod binom(2mu_i, mu_i - nu_i)."""
    mu = _check(g, n, profile)
    if is_unstable(g, n):
        raise ValueError(f"the cuff transform does not apply to (g, n) = ({g}, {n})")
    eng = _engine(engine)
    weights = [[binomial(2 * m, m - v) for v in range(m + 1)] for m in mu]
    total = Fraction(0)
    for nu in itertools.product(*(range(m + 1) for m in mu)):
        q = eng.Q(g, nu)
        if not q:
            continue
        term = q / 2 ** _zeros(nu)
        for w, v in zip(weights, nu):
            term *= w[v]
        total += term
    return total * 2 ** _zeros(mu)


def count(family: str, g: int, n: int, profile: Sequence[int], route: str = "recursive",
          engine: Optional[Engine] = None) -> Fraction:
    """Dispatch on family and route (``recursive``, ``closed`` or ``transform``)."""
    family = family.upper()
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if route == "recursive":
        if family == "P":
            return p_recursive(g, n, profile, engine)
        if family == "Q":
            return q_count(g, n, profile, engine)
        return n_count(g, n, profile, engine)
    if route == "closed":
        if family == "P":
            value = p_closed(g, n, profile)
        elif family == "Q":
            value = q_base(g, n, profile, include_torus=True)
        else:
            mu = _check(g, n, profile)
            value = {(0, 3): _n03, (1, 1): _n11}.get((g, n), lambda _: None)(mu)
            if value is None and not any(mu) and not is_unstable(g, n):
                value = Fraction(1)
        if value is None:
            raise ValueError(f"no closed form for {family}_{{{g},{n}}}")
        return value
    if route == "transform":
        if family != "P":
            raise ValueError("the transform route only computes P")
        return p_from_q(g, n, profile, engine)
    raise ValueError(f"unknown route {route!r}")
