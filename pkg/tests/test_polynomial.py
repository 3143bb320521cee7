import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydiagrams.polynomial import (
    EVEN, ODD, ZERO, MultiPoly, QuasiPoly, classify, coefficient, interpolate, interpolate_1d,
    is_odd_each_variable, signatures,
)

x = MultiPoly.variable(1, 0)
Q11_ODD = (x ** 3 - x) / 24
Q11_EVEN = (x ** 3 + 8 * x) / 24
TRIPLE = 2 * MultiPoly(3, {(1, 1, 1): 1})


def test_eval_examples():
    assert TRIPLE.eval([1, 1, 1]) == 2
    assert Q11_ODD.eval([3]) == 1
    p = MultiPoly(2, {(0, 0): 7, (1, 2): 3})
    assert p.eval([0, 0]) == 7


def test_eval_arity():
    with pytest.raises(ValueError):
        TRIPLE.eval([1, 2])


def test_zero_coefficients_dropped():
    p = MultiPoly(1, {(1,): 0, (2,): 1})
    assert p.terms == {(2,): Fraction(1)}
    assert (x - x).is_zero() and (x - x).total_degree() == -1


def test_interpolate_recovers_cube():
    nodes = [1, 3, 5, 7]
    assert interpolate(1, [nodes], [[Fraction(m) ** 3 for m in nodes]][0]) == x ** 3


def test_interpolate_too_few_nodes_fails_validation():
    # two odd samples of Q_{1,1} give a line that misses Q_{1,1}(5) = 5
    line = interpolate(1, [[1, 3]], [0, 1])
    assert line.total_degree() == 1
    assert line.eval([5]) != 5


def test_interpolate_bilinear():
    grid = [[1, 2], [3, 5]]
    vals = [[a * b for b in grid[1]] for a in grid[0]]
    assert interpolate(2, grid, vals) == MultiPoly(2, {(1, 1): 1})


def test_interpolate_errors():
    with pytest.raises(ValueError):
        interpolate(1, [[1, 1]], [0, 0])
    with pytest.raises(ValueError):
        interpolate(2, [[1, 2], [1, 2]], [[0, 0]])
    with pytest.raises(ValueError):
        interpolate(2, [[1, 2]], [0, 0])


polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000),
    max_size=8,
).map(lambda d: MultiPoly(2, d))


@settings(max_examples=40)
@given(polys)
def test_interpolate_exact_recovery(p):
    grid = [[-1, 0, 2, 5], [1, 3, 4, 9]]
    vals = {(i, j): p.eval([a, b]) for i, a in enumerate(grid[0]) for j, b in enumerate(grid[1])}
    q = interpolate(2, grid, vals)
    assert q == p
    for (i, j), v in vals.items():
        assert q.eval([grid[0][i], grid[1][j]]) == v


@settings(max_examples=40)
@given(polys, polys)
def test_degree_of_product(p, q):
    if not p.is_zero() and not q.is_zero():
        assert (p * q).total_degree() == p.total_degree() + q.total_degree()


def test_interpolate_1d_matches():
    nodes = [0, 1, 2, 4]
    assert interpolate_1d(nodes, [n * n - 1 for n in nodes]) == [-1, 0, 1, 0]


def test_oddness():
    assert is_odd_each_variable(Q11_ODD)
    assert not is_odd_each_variable(x ** 2)
    assert is_odd_each_variable(MultiPoly(3))
    assert not is_odd_each_variable(MultiPoly(2, {(1, 0): 1}))


def test_coefficient():
    assert coefficient(Q11_EVEN, (3,)) == Fraction(1, 24)
    assert coefficient(TRIPLE, (1, 1, 1)) == 2
    assert coefficient(TRIPLE, (2, 0, 0)) == 0
    with pytest.raises(ValueError):
        coefficient(TRIPLE, (1,))


def test_json_roundtrip_sorted():
    p = MultiPoly(2, {(2, 0): Fraction(1, 3), (0, 1): -2, (1, 1): 5})
    data = p.to_json()
    assert [t["exps"] for t in data["terms"]] == [[0, 1], [1, 1], [2, 0]]
    assert data["terms"][2]["coeff"] == "1/3"
    assert MultiPoly.from_json(json.loads(json.dumps(data))) == p


def test_to_text():
    assert Q11_ODD.to_text() == "1/24*mu^3 - 1/24*mu"
    assert MultiPoly(0).to_text() == "0"


def test_divmod_linear():
    p = (2 * x - 3) * (x ** 2 + 1)
    q, r = p.divmod_linear(Fraction(3, 2))
    assert r == 0 and q == 2 * (x ** 2 + 1)
    _, r = (x ** 2).divmod_linear(Fraction(1))
    assert r == 1


def test_classify_and_signatures():
    assert classify([0, 3, 4]) == (ZERO, ODD, EVEN)
    assert len(signatures(3)) == 27
    with pytest.raises(ValueError):
        classify([-1])


def test_quasipoly_eval_and_json():
    qp = QuasiPoly(1, {(ODD,): Q11_ODD, (EVEN,): Q11_EVEN, (ZERO,): MultiPoly.constant(0, 1)})
    assert [qp.eval([m]) for m in range(6)] == [1, 0, 1, 1, 4, 5]
    data = qp.to_json()
    assert {tuple(d["parity"]) for d in data} == {(ODD,), (EVEN,), (ZERO,)}
    back = QuasiPoly.from_json(1, data)
    assert back.pieces == qp.pieces


def test_quasipoly_piece_arity():
    qp = QuasiPoly(2)
    with pytest.raises(ValueError):
        qp[(ZERO, ODD)] = MultiPoly(2)
