import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydiagrams.counts import (
    CountCache, Engine, count, cuff_count, n_count, p_closed, p_from_q, p_recursive, q_base, q_count,
)
from polydiagrams.exact import binomial


# closed-form oracles first

@pytest.mark.parametrize("b,a,want", [(2, 0, 3), (3, 1, 15), (0, 0, 1), (2, 3, 0), (4, 4, 4)])
def test_cuff_count(b, a, want):
    assert cuff_count(b, a) == want


@pytest.mark.parametrize("g,n,mu,want", [
    (0, 2, (3, 3), 3), (0, 2, (0, 0), 1), (0, 2, (3, 2), 0),
    (0, 3, (1, 1, 1), 2), (0, 3, (4, 0, 0), 4), (0, 3, (3, 0, 0), 0),
    (0, 3, (2, 1, 1), 4), (5, 4, (0, 0, 0, 0), 1),
])
def test_q_base(g, n, mu, want):
    assert q_base(g, n, mu) == want


def test_q_base_absent_for_torus_unless_requested():
    assert q_base(1, 1, (4,)) is None
    assert q_base(1, 1, (4,), include_torus=True) == 4


@pytest.mark.parametrize("g,n,mu,want", [
    (0, 1, (3,), 5), (0, 2, (1, 1), 2), (1, 1, (2,), 4), (0, 3, (1, 1, 1), 6), (1, 1, (3,), 17),
])
def test_p_closed(g, n, mu, want):
    assert p_closed(g, n, mu) == want


def test_catalan():
    # disc: P_{0,1}(m) is the m-th Catalan number
    cat = [binomial(2 * m, m) / (m + 1) for m in range(15)]
    assert [p_recursive(0, 1, (m,)) for m in range(15)] == cat


@pytest.mark.parametrize("g,n,mu,want", [
    (1, 1, (4,), 4), (1, 1, (3,), 1), (1, 2, (1, 1), 1), (0, 3, (2, 1, 1), 4),
])
def test_q_count(g, n, mu, want):
    assert q_count(g, n, mu) == want


@pytest.mark.parametrize("g,n,mu,want", [
    (1, 1, (2,), 1), (0, 3, (1, 1, 2), 2), (1, 2, (1, 1), 1), (1, 1, (3,), 0),
])
def test_n_count(g, n, mu, want):
    assert n_count(g, n, mu) == want


def test_q_torus_recursion_matches_closed_form():
    for m in range(25):
        assert q_count(1, 1, (m,)) == q_base(1, 1, (m,), include_torus=True)


@pytest.mark.parametrize("g,n,mu,want", [(1, 1, (2,), 4), (1, 1, (3,), 17), (0, 3, (2, 1, 1), 32)])
def test_p_from_q(g, n, mu, want):
    assert p_from_q(g, n, mu) == want


@pytest.mark.parametrize("g,n,mu,want", [(1, 1, (2,), 4), (0, 3, (1, 1, 1), 6), (0, 2, (0, 0), 1)])
def test_p_recursive(g, n, mu, want):
    assert p_recursive(g, n, mu) == want


def test_all_zero_profiles_count_one():
    for fam in "PQN":
        assert count(fam, 2, 3, (0, 0, 0)) == 1


def test_n_vanishes_on_odd_total():
    for g, n in [(0, 3), (0, 4), (1, 2), (2, 1)]:
        for mu in itertools.product(range(4), repeat=n):
            if sum(mu) % 2:
                assert n_count(g, n, mu) == 0


def test_pants_n_uses_third_entry():
    # the third entry matters: (2,2,4) and (2,2,2) differ
    assert n_count(0, 3, (2, 2, 4)) == 16
    assert n_count(0, 3, (2, 2, 2)) == 8


def test_domain_errors():
    with pytest.raises(ValueError):
        n_count(0, 2, (1, 1))
    with pytest.raises(ValueError):
        p_recursive(0, 2, (1,))
    with pytest.raises(ValueError):
        q_count(-1, 1, (1,))
    with pytest.raises(ValueError):
        count("X", 0, 1, (1,))
    with pytest.raises(ValueError):
        count("Q", 0, 3, (1, 1, 1), route="transform")
    with pytest.raises(ValueError):
        count("P", 2, 1, (1,), route="closed")


def test_routes_agree_through_dispatch():
    for m in range(8):
        vals = {count("P", 1, 1, (m,), r) for r in ("recursive", "closed", "transform")}
        assert len(vals) == 1


# symmetry with an engine that keeps the caller's order

_noncanon = Engine(canonical=False)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([("P", 0, 3), ("Q", 0, 4), ("N", 1, 2), ("P", 1, 2), ("Q", 0, 3), ("N", 0, 4)]),
       st.lists(st.integers(0, 3), min_size=4, max_size=4), st.randoms())
def test_symmetric_under_permutation(case, raw, rnd):
    fam, g, n = case
    mu = raw[:n]
    perm = list(mu)
    rnd.shuffle(perm)
    f = getattr(_noncanon, fam)
    assert f(g, mu) == f(g, perm)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1), st.lists(st.integers(0, 5), min_size=1, max_size=3))
def test_counts_are_nonnegative_integers(g, mu):
    n = len(mu)
    for fam in "PQ":
        v = count(fam, g, n, mu)
        assert v >= 0 and v.denominator == 1


# cache

def test_cache_write_once():
    c = CountCache()
    c.put(("P", 0, (1,)), 1)
    c.put(("P", 0, (1,)), 1)
    with pytest.raises(RuntimeError):
        c.put(("P", 0, (1,)), 2)
    with pytest.raises(ArithmeticError):
        c.put(("P", 0, (2,)), Fraction(1, 2))


def test_cache_roundtrip(tmp_path):
    e = Engine()
    for m in range(6):
        e.P(1, (m, 1))
    path = tmp_path / "cache.txt"
    e.cache.save(path)
    fresh = CountCache()
    assert fresh.load(path) == len(e.cache)
    assert fresh.items() == e.cache.items()
    path2 = tmp_path / "again.txt"
    fresh.save(path2)
    assert path.read_bytes() == path2.read_bytes()
    assert b"\r" not in path.read_bytes()


@pytest.mark.parametrize("line", [
    "X 0 1 1 1", "P 0 2 1 1", "P 0 2 1,2 5", "P 0 1 1", "P -1 1 1 1", "P 0 1 1 x",
])
def test_cache_rejects_bad_records(tmp_path, line):
    path = tmp_path / "bad.txt"
    path.write_text(line + "\n")
    with pytest.raises(ValueError):
        CountCache().load(path)


def test_engine_uses_supplied_cache():
    c = CountCache()
    e = Engine(c)
    e.Q(1, (3, 1))
    assert ("Q", 1, (3, 1)) in c
    assert all(list(k[2]) == sorted(k[2], reverse=True) for k, _ in c.items())
