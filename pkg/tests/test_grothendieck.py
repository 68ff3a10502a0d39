from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trideg import generators as gen
from trideg import homotopy
from trideg.complexes import ChainMap, Complex, cone_parts, direct_sum, shift
from trideg.grothendieck import (NonZeroClassError, Pair, ShiftSum, Tower, TowerError, empty_tower, expand_pairs,
                                 extend, k0_class, m_value, pair_decompose, tower_delta_witness, tower_nil_chain)
from trideg.suite import random_shiftsum, random_tower

ALGEBRAS = [gen.a2(2), gen.a2(3), gen.a3(2), gen.a3_free(3), gen.loop(2), gen.loop(3)]
alg_index = st.integers(0, len(ALGEBRAS) - 1)
seeds = st.integers(0, 2**32 - 1)


def counted(x):
    """Oracle: alternating count of indecomposable summands, term by term."""
    out = Counter()
    for n in x.degrees:
        for v in x.term(n):
            out[v] += (-1) ** (n % 2)
    return tuple(out[v] for v in x.algebra.vertices)


# -- K0 classes -------------------------------------------------------------------


def test_k0_examples():
    alg = gen.a2(2)
    assert k0_class(Complex.zero(alg)).is_zero()
    assert k0_class(Complex.stalk(alg, "1")).coefficients == (1, 0)
    assert k0_class(shift(Complex.stalk(alg, "2"), 1)).coefficients == (0, -1)
    s = Complex.stalk(alg, "1")
    assert k0_class(direct_sum(s, shift(s, 1)).obj).is_zero()


@given(alg_index, seeds, st.integers(-4, 4))
def test_k0_of_shift_changes_sign(i, seed, k):
    x = gen.random_complex(ALGEBRAS[i], np.random.default_rng(seed), 4, 3)
    assert k0_class(shift(x, k)) == k0_class(x).scale((-1) ** (k % 2))
    assert k0_class(x).coefficients == counted(x)


@given(alg_index, seeds)
def test_k0_additive_on_triangles(i, seed):
    rng = np.random.default_rng(seed)
    alg = ALGEBRAS[i]
    x, y = gen.random_complex(alg, rng, 3, 3), gen.random_complex(alg, rng, 3, 3)
    c = cone_parts(gen.random_chain_map(x, y, rng)).cone
    assert k0_class(c) == k0_class(y) - k0_class(x)
    assert k0_class(direct_sum(x, y).obj) == k0_class(x) + k0_class(y)


def test_k0_rejects_mixed_algebras():
    a, b = k0_class(Complex.stalk(gen.a2(2), "1")), k0_class(Complex.stalk(gen.loop(2), "1"))
    with pytest.raises(ValueError):
        a + b


# -- pair decomposition -------------------------------------------------------------


def test_pair_decompose_single_pair():
    assert pair_decompose(ShiftSum.of([("S", 0, 1), ("S", 1, 1)])) == [Pair("S", 0, 1, 1)]


def test_pair_decompose_nested_pairs():
    x = ShiftSum.of([("S", 0, 1), ("S", 2, 1), ("S", 3, 1), ("S", 5, 1)])
    pairs = pair_decompose(x)
    assert set(pairs) == {Pair("S", 0, 5, 1), Pair("S", 2, 3, 1)}
    assert expand_pairs(pairs) == x.multiset()


def test_pair_decompose_with_multiplicity():
    x = ShiftSum.of([("S", 0, 2), ("S", 1, 1), ("S", 3, 1)])
    assert set(pair_decompose(x)) == {Pair("S", 0, 1, 1), Pair("S", 0, 3, 1)}
    assert m_value(x) == 2


def test_pair_decompose_several_generators():
    x = ShiftSum.of([("S", 0, 1), ("S", -1, 1), ("T", 4, 3), ("T", 7, 3)])
    pairs = pair_decompose(x)
    assert set(pairs) == {Pair("S", 0, -1, 1), Pair("T", 4, 7, 3)}


def test_pair_decompose_rejects_nonzero_class():
    with pytest.raises(NonZeroClassError) as exc:
        pair_decompose(ShiftSum.of([("S", 0, 2), ("S", 1, 1)]))
    assert exc.value.generator == "S" and exc.value.alternating_sum == 1


def test_shift_sum_validation():
    with pytest.raises(ValueError):
        ShiftSum.of([("S", 0, 0)])
    with pytest.raises(ValueError):
        ShiftSum.of([("S", 0, 1), ("S", 0, 2)])


@given(seeds)
def test_pair_decompose_properties(seed):
    x = random_shiftsum(np.random.default_rng(seed))
    pairs = pair_decompose(x)
    assert expand_pairs(pairs) == x.multiset()
    assert all(p.even % 2 == 0 and p.odd % 2 == 1 and p.mult >= 1 for p in pairs)
    assert sum(p.mult for p in pairs) == m_value(x)


def test_realized_shift_sum_has_zero_class():
    alg = gen.a2(3)
    gens = {"S": Complex.stalk(alg, "1"), "T": gen.random_complex(alg, np.random.default_rng(5), 3, 2)}
    x = ShiftSum.of([("S", 0, 1), ("S", 3, 1), ("T", -2, 2), ("T", 1, 2)])
    assert k0_class(x.realize(gens)).is_zero()


# -- towers -------------------------------------------------------------------------


def test_length_one_tower():
    alg = gen.a2(2)
    s = Complex.stalk(alg, "1")
    t = empty_tower(alg, {"S": s})
    t = extend(t, "S", 0, ChainMap.zero(shift(s, -1), t.top))
    assert t.verify() and t.length == 1
    assert homotopy.find_iso(t.top, s) is not None
    w, target, iso = tower_delta_witness(t)
    assert w.verify() and iso.verify()


def test_length_two_tower_over_a2():
    alg = gen.a2(2)
    p1, p2 = Complex.stalk(alg, "1"), Complex.stalk(alg, "2")
    t = empty_tower(alg, {"P1": p1, "P2": p2})
    t = extend(t, "P2", 0, ChainMap.zero(shift(p2, -1), t.top))
    rng = np.random.default_rng(1)
    t = extend(t, "P1", 1, gen.random_chain_map(shift(p1, 0), t.top, rng))
    assert t.verify() and t.length == 2
    steps = tower_nil_chain(t)
    assert len(steps) == 2 and all(s.witness.verify() and s.iso.verify() for s in steps)
    w, target, iso = tower_delta_witness(t)
    assert w.verify() and w.nil is not None and w.nil.exponent <= 2
    assert k0_class(target) == k0_class(t.top)


def test_extend_rejects_wrong_source():
    alg = gen.a2(2)
    s = Complex.stalk(alg, "1")
    t = empty_tower(alg, {"S": s})
    with pytest.raises(TowerError):
        extend(t, "S", 0, ChainMap.zero(s, t.top))


def test_uncertified_tower_is_certified_by_search():
    t = random_tower(gen.a2(3), np.random.default_rng(7), 3)
    bare = Tower(t.algebra, t.generators, t.objects, t.maps, t.tags, ())
    assert not bare.verify()
    assert bare.certify().verify()


@settings(max_examples=20)
@given(alg_index, seeds)
def test_tower_constructions(i, seed):
    t = random_tower(ALGEBRAS[i], np.random.default_rng(seed), 3)
    assert t.verify()
    cs = [t.cone_term(k) for k in range(1, t.length + 1)]
    assert k0_class(t.top) == sum((k0_class(c) for c in cs[1:]), k0_class(cs[0]))
    steps = tower_nil_chain(t)
    assert all(s.witness.verify() and s.iso.verify() and s.witness.v.is_zero() for s in steps)
    w, target, iso = tower_delta_witness(t)
    assert w.verify() and iso.verify() and w.M == t.top
    assert w.nil is None or w.nil.exponent <= max(t.length, 1)
