"""Exact multivariate polynomials over the rationals, tensor-grid Lagrange
interpolation, and parity-stratified quasi-polynomials.

A quasi-polynomial here has one polynomial piece per assignment of each
argument to one of three classes: zero, odd, or even and positive.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import format_rational, parse_rational

__all__ = [
    "MultiPoly",
    "interpolate",
    "interpolate_1d",
    "is_odd_each_variable",
    "coefficient",
    "ZERO",
    "ODD",
    "EVEN",
    "classify",
    "signatures",
    "QuasiPoly",
]

Exps = Tuple[int, ...]


class MultiPoly:
    """Immutable polynomial in ``nvars`` variables with Fraction coefficients."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[Sequence[int], object]] = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: Dict[Exps, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self._terms = clean

    # construction helpers ------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultiPoly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def univariate(cls, coeffs: Sequence) -> "MultiPoly":
        """From low-to-high coefficient list."""
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    # access -----------------------------------------------------------------

    @property
    def terms(self) -> Dict[Exps, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Exps, Fraction]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError(f"expected {self.nvars} exponents, got {len(exps)}")
        return self._terms.get(exps, Fraction(0))

    def total_degree(self) -> int:
        """-1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self._terms), default=-1)

    def top_component(self) -> "MultiPoly":
        d = self.total_degree()
        return MultiPoly(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == d})

    def __call__(self, *point) -> Fraction:
        return self.eval(point)

    def eval(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        point = [Fraction(x) for x in point]
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= x**e
            total += term
        return total

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = Fraction(scalar)
        return MultiPoly(self.nvars, {e: c / scalar for e, c in self._terms.items()})

    def __pow__(self, k: int):
        out = MultiPoly.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def divmod_linear(self, root: Fraction) -> Tuple["MultiPoly", Fraction]:
        """Univariate synthetic division by (x - root)."""
        if self.nvars != 1:
            raise ValueError("divmod_linear is univariate only")
        d = self.degree_in(0)
        if d < 0:
            return self, Fraction(0)
        coeffs = [self.coefficient((k,)) for k in range(d + 1)]
        quot = [Fraction(0)] * d
        carry = Fraction(0)
        for k in range(d, 0, -1):
            carry = coeffs[k] + carry * root if k < d else coeffs[k]
            quot[k - 1] = carry
        rem = coeffs[0] + carry * root if d > 0 else coeffs[0]
        return MultiPoly.univariate(quot), rem

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if self.nvars == 0 or not isinstance(other, MultiPoly):
            try:
                return self == MultiPoly.constant(self.nvars, other)
            except (TypeError, ValueError):
                return NotImplemented
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self.to_text()!r})"

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = ["mu"] if self.nvars == 1 else [f"mu{i + 1}" for i in range(self.nvars)]
        parts = []
        for exps, c in sorted(self._terms.items(), key=lambda t: (-sum(t[0]), [-e for e in t[0]])):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
            )
            coef = format_rational(abs(c))
            if mono:
                body = mono if coef == "1" else f"{coef}*{mono}"
            else:
                body = coef
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    # serialisation ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "terms": [
                {"exps": list(e), "coeff": format_rational(c)} for e, c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        return cls(
            int(data["vars"]),
            {tuple(t["exps"]): parse_rational(t["coeff"]) for t in data["terms"]},
        )


def coefficient(p: MultiPoly, exps: Sequence[int]) -> Fraction:
    return p.coefficient(exps)


def is_odd_each_variable(p: MultiPoly) -> bool:
    """True iff every stored exponent is odd in every variable."""
    return all(e % 2 == 1 for exps in p.terms for e in exps)


def interpolate_1d(nodes: Sequence, values: Sequence) -> List[Fraction]:
    """Monomial coefficients (low to high) of the Lagrange interpolant."""
    nodes = [Fraction(x) for x in nodes]
    if len(set(nodes)) != len(nodes):
        raise ValueError(f"duplicate interpolation nodes: {nodes}")
    if len(values) != len(nodes):
        raise ValueError("node/value length mismatch")
    # Newton divided differences, then expand the Newton form
    dd = [Fraction(v) for v in values]
    k = len(nodes)
    for level in range(1, k):
        for i in range(k - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level])
    coeffs = [Fraction(0)] * k
    basis = [Fraction(1)]  # prod_{t<i} (x - x_t)
    for i in range(k):
        for d, b in enumerate(basis):
            coeffs[d] += dd[i] * b
        basis = [Fraction(0)] + basis
        for d in range(len(basis) - 1):
            basis[d] -= nodes[i] * basis[d + 1]
    return coeffs


def _shape(values) -> Tuple[int, ...]:
    shape = []
    v = values
    while isinstance(v, (list, tuple)):
        shape.append(len(v))
        if not v:
            break
        v = v[0]
    return tuple(shape)


def interpolate(nvars: int, grid: Sequence[Sequence], values) -> MultiPoly:
    """Unique polynomial of per-variable degree < len(grid[a]) matching
    ``values`` on the tensor grid.

    ``values`` is either a nested list indexed like the grid, or a mapping
    from index tuples to values.
    """
    if len(grid) != nvars:
        raise ValueError(f"need {nvars} node lists, got {len(grid)}")
    for nodes in grid:
        if len(set(Fraction(x) for x in nodes)) != len(nodes):
            raise ValueError(f"duplicate interpolation nodes: {list(nodes)}")
    sizes = tuple(len(nodes) for nodes in grid)
    if isinstance(values, Mapping):
        table = {tuple(k): Fraction(v) for k, v in values.items()}
        if set(table) != set(itertools.product(*(range(s) for s in sizes))):
            raise ValueError("value mapping does not cover the grid")
    else:
        if nvars == 0:
            return MultiPoly.constant(0, values)
        if _shape(values)[:nvars] != sizes:
            raise ValueError(f"value tensor shape {_shape(values)} != grid shape {sizes}")
        table = {}
        for idx in itertools.product(*(range(s) for s in sizes)):
            v = values
            for i in idx:
                v = v[i]
            table[idx] = Fraction(v)
    if nvars == 0:
        return MultiPoly.constant(0, table[()])
    # transform one axis at a time: grid index -> monomial degree
    for axis in range(nvars):
        fibres: Dict[Tuple, List[Fraction]] = {}
        for idx, v in table.items():
            rest = idx[:axis] + idx[axis + 1:]
            fibres.setdefault(rest, [Fraction(0)] * sizes[axis])[idx[axis]] = v
        new = {}
        for rest, vals in fibres.items():
            for d, c in enumerate(interpolate_1d(grid[axis], vals)):
                new[rest[:axis] + (d,) + rest[axis:]] = c
        table = new
    return MultiPoly(nvars, table)


# --------------------------------------------------------------------------
# quasi-polynomials
# --------------------------------------------------------------------------

ZERO, ODD, EVEN = "zero", "odd", "even"
_CLASSES = (ZERO, ODD, EVEN)


def classify(mu: Sequence[int]) -> Tuple[str, ...]:
    """Parity signature of a profile: zero, odd, or even and positive."""
    out = []
    for m in mu:
        if m < 0:
            raise ValueError("parity classes are defined for non-negative integers")
        out.append(ZERO if m == 0 else ODD if m % 2 else EVEN)
    return tuple(out)


def signatures(n: int) -> List[Tuple[str, ...]]:
    """All 3^n signatures in a fixed (sorted) order."""
    return sorted(itertools.product(_CLASSES, repeat=n))


class QuasiPoly:
    """One :class:`MultiPoly` per parity signature, in the non-zero variables."""

    def __init__(self, n: int, pieces: Optional[Mapping[Tuple[str, ...], MultiPoly]] = None):
        self.n = n
        self.pieces: Dict[Tuple[str, ...], MultiPoly] = {}
        for sig, poly in (pieces or {}).items():
            self[sig] = poly

    def __setitem__(self, sig, poly: MultiPoly) -> None:
        sig = tuple(sig)
        if len(sig) != self.n or any(s not in _CLASSES for s in sig):
            raise ValueError(f"bad signature {sig}")
        free = sum(1 for s in sig if s != ZERO)
        if poly.nvars != free:
            raise ValueError(f"piece for {sig} needs {free} variables, got {poly.nvars}")
        self.pieces[sig] = poly

    def __getitem__(self, sig) -> MultiPoly:
        return self.pieces[tuple(sig)]

    def __contains__(self, sig) -> bool:
        return tuple(sig) in self.pieces

    def eval(self, mu: Sequence[int]) -> Fraction:
        sig = classify(mu)
        return self.pieces[sig].eval([m for m in mu if m != 0])

    def to_json(self) -> list:
        return [
            {"parity": list(sig), "poly": self.pieces[sig].to_json()}
            for sig in sorted(self.pieces)
        ]

    @classmethod
    def from_json(cls, n: int, data: Iterable[Mapping]) -> "QuasiPoly":
        return cls(n, {tuple(p["parity"]): MultiPoly.from_json(p["poly"]) for p in data})
