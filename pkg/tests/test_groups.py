import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ggsp.groups import (
    Permutation,
    TorusPoint,
    circular_distance,
    compose,
    from_cycles,
    inverse,
    parse_cycles,
    symmetric_group,
)


def perms(n):
    return st.permutations(list(range(n))).map(lambda p: Permutation(tuple(p)))


def test_compose_identity_left():
    p = Permutation((2, 0, 1, 3))
    assert compose(Permutation.identity(4), p) == p


def test_compose_applies_right_factor_first():
    # (12)(23) on 3 points: 1 -> 2, 2 -> 3, 3 -> 1
    result = compose(from_cycles(3, [(1, 2)]), from_cycles(3, [(2, 3)]))
    assert result.images == (1, 2, 0)
    assert result == from_cycles(3, [(1, 2, 3)])


@given(perms(5))
def test_compose_with_inverse_is_identity(p):
    assert compose(p, inverse(p)).is_identity()
    assert compose(inverse(p), p).is_identity()


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_inverse_examples():
    assert inverse(Permutation.identity(4)).is_identity()
    t = from_cycles(4, [(2, 4)])
    assert inverse(t) == t
    assert inverse(from_cycles(3, [(1, 2, 3)])) == from_cycles(3, [(1, 3, 2)])


def test_from_cycles_examples():
    assert from_cycles(4, [(1, 2), (3, 4)]).images == (1, 0, 3, 2)
    assert from_cycles(4, []).is_identity()
    assert from_cycles(3, [(1, 2, 3)]).images == (1, 2, 0)


def test_from_cycles_right_to_left():
    # (1 2)(2 3): apply (2 3) first
    assert from_cycles(3, [(1, 2), (2, 3)]) == compose(from_cycles(3, [(1, 2)]), from_cycles(3, [(2, 3)]))


@pytest.mark.parametrize("cycles", [[(0, 1)], [(1, 5)], [(1, 2, 1)]])
def test_from_cycles_rejects(cycles):
    with pytest.raises(ValueError):
        from_cycles(4, cycles)


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation(())


def test_parse_cycles_and_back():
    p = parse_cycles(4, "(1 2)(3 4)")
    assert p.images == (1, 0, 3, 2)
    assert p.cycle_string() == "(1 2)(3 4)"
    assert parse_cycles(3, "(1)").is_identity()
    assert parse_cycles(3, "(1,3)") == from_cycles(3, [(1, 3)])
    with pytest.raises(ValueError):
        parse_cycles(3, "1 2")
    with pytest.raises(ValueError):
        parse_cycles(3, "(1 x)")


def test_permutation_json_roundtrip():
    p = from_cycles(4, [(1, 3, 2)])
    obj = json.loads(json.dumps(p.to_json()))
    assert obj == {"n": 4, "images": list(p.images)}
    assert Permutation.from_json(obj) == p


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_symmetric_group_order_and_tables(n):
    G = symmetric_group(n)
    assert G.order == math.factorial(n)
    assert G.elements[0].is_identity() and G.identity_index == 0
    ids = np.arange(G.order)
    assert np.array_equal(G.mul_table[G.identity_index], ids)
    assert np.array_equal(G.mul_table[:, G.identity_index], ids)
    assert np.array_equal(G.inv_table[G.inv_table], ids)
    for i, g in enumerate(G.elements):
        assert compose(G.elements[G.inv(i)], g).is_identity()


def test_symmetric_group_lexicographic_and_deterministic():
    G = symmetric_group(4)
    images = [g.images for g in G.elements]
    assert images == sorted(images)
    assert images == [g.images for g in symmetric_group(4).elements]


def test_mul_table_matches_compose():
    G = symmetric_group(4)
    for i, a in enumerate(G.elements):
        for j, b in enumerate(G.elements):
            assert G.elements[G.mul(i, j)] == compose(a, b)


def test_associativity_spot_check():
    G = symmetric_group(5)
    rng = np.random.default_rng(7)
    triples = rng.integers(0, G.order, size=(2000, 3))
    M = G.mul_table.astype(np.int64)
    a, b, c = triples.T
    assert np.array_equal(M[M[a, b], c], M[a, M[b, c]])


@pytest.mark.parametrize("n", [0, 9])
def test_symmetric_group_range(n):
    with pytest.raises(ValueError):
        symmetric_group(n)


def test_torus_point_group_law():
    x, y = TorusPoint(0.75), TorusPoint(0.5)
    assert (x + y).value == pytest.approx(0.25)
    assert x.inverse().value == pytest.approx(0.25)
    assert TorusPoint(0.0).inverse().value == 0.0
    assert (x - x).value == 0.0
    assert TorusPoint(-1e-20).value == 0.0
    assert 0.0 <= TorusPoint(-0.3).value < 1.0


def test_circular_distance():
    assert circular_distance(0.05, 0.95) == pytest.approx(0.1)
    assert circular_distance(0.0, 0.5) == pytest.approx(0.5)
