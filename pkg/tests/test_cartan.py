import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from qshuffle import cartan as ct
from qshuffle.cartan import CartanError


def brute_kostant(roots, alpha):
    # independent oracle: enumerate multiplicity vectors directly
    bounds = [min((a // b) if b else a for a, b in zip(alpha, r) if b) for r in roots]
    count = 0
    for mult in product(*(range(b + 1) for b in bounds)):
        s = [sum(m * r[i] for m, r in zip(mult, roots)) for i in range(len(alpha))]
        if s == list(alpha):
            count += 1
    return count


def test_presets_and_symmetrizers():
    assert ct.preset("A2").d == (1, 1)
    assert ct.preset("B2").d == (2, 1)
    assert ct.preset("G2").d == (3, 1)
    assert ct.preset("A1^(1)").d == (1, 1)
    for name in ("A1", "A2", "B2", "G2"):
        assert ct.preset(name).finite_type
    for name in ("A1^(1)", "A2^(1)"):
        assert not ct.preset(name).finite_type


def test_form_is_symmetric():
    for name in ct.PRESETS:
        c = ct.preset(name)
        for i in range(c.n):
            for j in range(c.n):
                assert c.form(i, j) == c.form(j, i)


def test_validate_rejects():
    with pytest.raises(CartanError):
        ct.validate([[2, -1], [0, 2]])
    with pytest.raises(CartanError):
        ct.validate([[1]])
    with pytest.raises(CartanError):
        ct.validate([[2, 1], [1, 2]])
    with pytest.raises(CartanError):
        ct.validate([[2, -1, 0], [-1, 2]])
    # cyclic non-symmetrizable matrix
    with pytest.raises(CartanError):
        ct.validate([[2, -1, -1], [-2, 2, -1], [-1, -1, 2]])
    with pytest.raises(CartanError):
        ct.preset("E9")


def test_load_json_and_components():
    c = ct.load("[[2,0],[0,2]]")
    assert c.d == (1, 1) and c.finite_type
    # two components, each with its own minimal symmetrizer
    c = ct.validate([[2, -1, 0, 0], [-2, 2, 0, 0], [0, 0, 2, -3], [0, 0, -1, 2]])
    assert c.d == (2, 1, 1, 3)
    assert ct.load(json.dumps(ct.PRESETS["G2"])) == ct.preset("G2")


@pytest.mark.parametrize("name,roots", [
    ("A1", [(1,)]),
    ("A2", [(0, 1), (1, 0), (1, 1)]),
    ("B2", [(0, 1), (1, 0), (1, 1), (1, 2)]),
    ("G2", [(0, 1), (1, 0), (1, 1), (1, 2), (1, 3), (2, 3)]),
])
def test_positive_roots(name, roots):
    assert list(ct.positive_roots(ct.preset(name))) == roots


def test_positive_roots_a3_count():
    c = ct.validate([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    assert len(ct.positive_roots(c)) == 6
    assert max(ct.positive_roots(c), key=sum) == (1, 1, 1)


def test_affine_roots_rejected():
    with pytest.raises(CartanError):
        ct.positive_roots(ct.preset("A1^(1)"))


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
def test_kostant_against_brute_force(name):
    c = ct.preset(name)
    roots = ct.positive_roots(c)
    for h in range(0, 7):
        for a in ct.weights_of_height(c.n, h):
            assert ct.kostant_dim(c, a) == brute_kostant(roots, a)


def test_kostant_frozen():
    A2, B2, G2 = ct.preset("A2"), ct.preset("B2"), ct.preset("G2")
    assert ct.kostant_dim(A2, (1, 1)) == 2
    assert ct.kostant_dim(A2, (2, 2)) == 3
    assert ct.kostant_dim(B2, (1, 2)) == 3
    assert ct.kostant_dim(G2, (2, 3)) == 7  # brute-force oracle
    assert ct.kostant_dim(A2, (0, 0)) == 1


def test_min_parts():
    A2, G2 = ct.preset("A2"), ct.preset("G2")
    assert ct.min_parts(A2, (1, 1)) == 1
    assert ct.min_parts(A2, (2, 1)) == 2
    assert ct.min_parts(A2, (2, 2)) == 2
    assert ct.min_parts(G2, (2, 3)) == 1
    assert ct.min_parts(G2, (3, 3)) == 2
    assert ct.min_parts(ct.preset("A1"), (4,)) == 4
    with pytest.raises(CartanError):
        ct.min_parts(A2, (-1, 1))


def test_loop_kostant():
    A1, A2 = ct.preset("A1"), ct.preset("A2")
    assert ct.loop_kostant_dim(A1, (2,), 1) == 1
    assert ct.loop_kostant_dim(A1, (2,), 2) == 2
    assert ct.loop_kostant_dim(A2, (1, 1), 1) == 3
    assert ct.loop_kostant_dim(A2, (1, 1), -1) == 0
    # alpha = k eps: partitions of d into at most k parts
    for k in range(1, 5):
        for d in range(0, 6):
            expect = sum(1 for p in _partitions(d) if len(p) <= k)
            assert ct.loop_kostant_dim(A1, (k,), d) == expect


def _partitions(n, m=None):
    m = n if m is None else m
    if n == 0:
        yield ()
        return
    for k in range(min(n, m), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


@given(st.integers(1, 3), st.integers(0, 5))
def test_weights_of_height(n, h):
    ws = ct.weights_of_height(n, h)
    assert all(sum(w) == h and len(w) == n for w in ws)
    assert len(set(ws)) == len(ws)
    from math import comb
    assert len(ws) == comb(h + n - 1, n - 1)
