import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleycert.perm import (
    MAX_DEGREE,
    Permutation,
    compose,
    cycle_decomposition,
    cycle_lengths,
    fixed_points,
    format_cycles,
    from_cycles,
    identity,
    inverse,
    is_even,
    order,
    parity,
    power,
    transposition,
)


@st.composite
def perms(draw, n=None):
    n = n if n is not None else draw(st.integers(1, 12))
    return Permutation(draw(st.permutations(range(n))))


@st.composite
def perm_pairs(draw):
    n = draw(st.integers(1, 12))
    return draw(perms(n)), draw(perms(n)), draw(perms(n))


def test_composition_is_left_to_right():
    p = from_cycles(3, [(0, 1)])
    q = from_cycles(3, [(1, 2)])
    # 0 -p-> 1 -q-> 2
    assert compose(p, q)(0) == 2
    assert compose(q, p)(0) == 1
    assert (p * q) == compose(p, q)


def test_construction_rejects_bad_tables():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(ValueError):
        Permutation([0, 3, 1])
    with pytest.raises(ValueError):
        Permutation([])
    with pytest.raises(ValueError):
        Permutation(np.arange(MAX_DEGREE + 1))


def test_images_are_read_only():
    p = identity(4)
    with pytest.raises(ValueError):
        p.images[0] = 1


def test_degree_mismatch():
    with pytest.raises(ValueError):
        compose(identity(3), identity(4))


def test_cycles_and_canonical_form():
    p = from_cycles(7, [(5, 2, 4), (6, 1)])
    dec = cycle_decomposition(p)
    assert dec.cycles == ((1, 6), (2, 4, 5))
    assert dec.fixed == (0, 3)
    assert dec.cycle_type() == {2: 1, 3: 1}
    assert dec.to_permutation() == p
    assert format_cycles(p) == "(1 6)(2 4 5)"
    assert format_cycles(identity(3)) == "()"
    with pytest.raises(ValueError):
        from_cycles(4, [(0, 1), (1, 2)])


def test_parity_examples():
    assert parity(identity(5)) == "even"
    assert parity(transposition(5, 0, 3)) == "odd"
    assert is_even(from_cycles(5, [(0, 1, 2)]))
    # four 4-cycles: each odd, product even
    four = from_cycles(16, [tuple(range(i, i + 4)) for i in range(0, 16, 4)])
    assert parity(four) == "even"


def test_power_and_order():
    c = from_cycles(10, [(0, 1, 2), (3, 4, 5, 6, 7)])
    assert order(c) == 15
    assert power(c, 15).is_identity()
    assert power(c, 0).is_identity()
    assert power(c, 5) == compose(*([c] * 5))
    with pytest.raises(ValueError):
        power(c, -1)
    assert fixed_points(c) == [8, 9]
    assert sorted(cycle_lengths(c)) == [1, 1, 3, 5]


def test_hash_and_key_agree_with_equality():
    a = from_cycles(5, [(0, 1)])
    b = Permutation([1, 0, 2, 3, 4])
    assert a == b and hash(a) == hash(b) and a.key() == b.key()
    assert len({a, b, identity(5)}) == 2


@settings(max_examples=200, deadline=None)
@given(perm_pairs())
def test_group_laws(triple):
    p, q, r = triple
    assert compose(compose(p, q), r) == compose(p, compose(q, r))
    assert compose(p, inverse(p)).is_identity()
    assert compose(inverse(p), p).is_identity()
    assert compose(p, identity(p.degree)) == p


@settings(max_examples=200, deadline=None)
@given(perm_pairs())
def test_parity_is_a_homomorphism(triple):
    p, q, _ = triple
    same = parity(p) == parity(q)
    assert is_even(compose(p, q)) == same


@settings(max_examples=100, deadline=None)
@given(perms())
def test_order_is_least_period(p):
    k = order(p)
    assert power(p, k).is_identity()
    for d in range(1, k):
        if k % d == 0 and d < k:
            assert not power(p, d).is_identity() or d == k
    assert k == math.lcm(*cycle_lengths(p))


@settings(max_examples=100, deadline=None)
@given(perms())
def test_decomposition_roundtrip(p):
    assert cycle_decomposition(p).to_permutation() == p
