import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import GF5, E, I, M, diag, rand_matrix, seeded
from semitri.closure import (
    GeneratorSet,
    algebra_span,
    algebra_span_words,
    commutant,
    format_word,
    ideal_span,
    is_commutative_family,
    semigroup_closure,
)
from semitri.linalg import Matrix
from semitri.scalars import HH, QQ, Quaternion


def span_dim(mats, ring=QQ):
    from semitri.closure import SpanBuilder

    s = SpanBuilder(mats[0].nrows if mats else 1, ring)
    for m in mats:
        s.add(m)
    return s.dim


def same_span(a, b):
    return span_dim(a) == span_dim(b) == span_dim(list(a) + list(b))


def test_generator_set_validation():
    with pytest.raises(ValueError):
        GeneratorSet([])
    with pytest.raises(ValueError):
        GeneratorSet([I(2), I(3)])
    with pytest.raises(ValueError):
        GeneratorSet([I(2), I(2, GF5)])
    assert GeneratorSet([I(2)]).labels == ["g1"]


def test_closure_of_matrix_units():
    res = semigroup_closure(GeneratorSet([E(2, 1, 2), E(2, 2, 1)]), 100)
    assert res.complete
    # E12 E12 = 0 is itself a product, so the zero matrix belongs to the closure
    assert set(res.elements) == {E(2, 1, 2), E(2, 2, 1), E(2, 1, 1), E(2, 2, 2), Matrix.zeros(2, QQ)}
    words = dict(zip(res.elements, res.words))
    assert format_word(words[E(2, 1, 1)]) == "g1*g2"


def test_closure_of_identity():
    res = semigroup_closure(GeneratorSet([I(2)]), 10)
    assert res.complete and res.elements == [I(2)]


def test_closure_bound_on_infinite_semigroup():
    g = I(2) + E(2, 1, 2)
    res = semigroup_closure(GeneratorSet([g]), 10)
    assert not res.complete and len(res.elements) == 10
    assert res.elements == [I(2) + E(2, 1, 2) * m for m in range(1, 11)]


def test_quaternion_closure_is_finite():
    i, j, k = Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
    gens = GeneratorSet([E(3, 1, 2, HH, i), E(3, 2, 3, HH, j)])
    res = semigroup_closure(gens, 100)
    assert res.complete
    assert E(3, 1, 3, HH, k) in res.elements
    assert len(res.elements) == 4  # two generators, their product, and 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_closure_is_idempotent(seed):
    rng = seeded(seed)
    from semitri.scalars import PrimeField

    F = PrimeField(2)
    gens = [rand_matrix(rng, 2, F) for _ in range(2)]
    res = semigroup_closure(GeneratorSet(gens), 1000)
    assert res.complete
    again = semigroup_closure(GeneratorSet(res.elements), 1000)
    assert set(again.elements) == set(res.elements)
    for a in res.elements:
        for b in res.elements:
            assert a * b in set(res.elements)


def test_closure_words_reproduce_elements():
    gens = GeneratorSet([M([[1, 1], [0, 2]]), M([[0, 1], [1, 0]])])
    res = semigroup_closure(gens, 50)
    for m, w in zip(res.elements, res.words):
        acc = gens.matrices[w[0]]
        for t in w[1:]:
            acc = acc * gens.matrices[t]
        assert acc == m


def test_algebra_span_examples():
    full = algebra_span(GeneratorSet([E(2, 1, 2), E(2, 2, 1)]))
    assert len(full) == 4
    assert algebra_span(GeneratorSet([I(2)]), unital=True) == [I(2)]
    assert len(algebra_span(GeneratorSet([diag(1, 2)]), unital=True)) == 2


def test_algebra_span_words_name_products():
    gens = GeneratorSet([E(2, 1, 2), E(2, 2, 1)])
    elems, words = algebra_span_words(gens)
    for m, w in zip(elems, words):
        acc = gens.matrices[w[0]]
        for t in w[1:]:
            acc = acc * gens.matrices[t]
        assert acc == m


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(["QQ", "HH"]))
def test_algebra_span_is_closed_and_bounded(seed, tag):
    ring = {"QQ": QQ, "HH": HH}[tag]
    rng = seeded(seed)
    n = rng.randint(1, 3 if ring is QQ else 2)
    basis = algebra_span(GeneratorSet([rand_matrix(rng, n, ring, zero_prob=0.6) for _ in range(2)]))
    assert len(basis) <= n * n * ring.center_dim
    from semitri.closure import SpanBuilder

    s = SpanBuilder(n, ring)
    for b in basis:
        s.add(b)
    for a in basis:
        for b in basis:
            assert s.contains(a * b)


def test_commutant_examples():
    C = commutant(GeneratorSet([E(2, 1, 2)]))
    assert same_span(C, [I(2), E(2, 1, 2)])
    assert len(commutant(GeneratorSet([I(2)]))) == 4
    D = commutant(GeneratorSet([diag(1, 2)]))
    assert same_span(D, [E(2, 1, 1), E(2, 2, 2)])


def test_quaternion_commutant_of_scalar_i():
    i = Quaternion(0, 1)
    C = commutant(GeneratorSet([Matrix.scalar(1, i, HH)]))
    # elements of HH commuting with i are a + b i
    assert len(C) == 2
    for X in C:
        assert X * Matrix.scalar(1, i, HH) == Matrix.scalar(1, i, HH) * X


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(["QQ", "GF5", "HH"]))
def test_commutant_elements_commute_and_match_algebra(seed, tag):
    ring = {"QQ": QQ, "GF5": GF5, "HH": HH}[tag]
    rng = seeded(seed)
    n = rng.randint(1, 3 if ring is not HH else 2)
    gens = GeneratorSet([rand_matrix(rng, n, ring, zero_prob=0.6) for _ in range(rng.randint(1, 2))])
    C = commutant(gens)
    for X in C:
        for g in gens:
            assert X * g == g * X
    alg = algebra_span(gens)
    C2 = commutant(GeneratorSet(alg or [Matrix.zeros(n, ring)]))
    from semitri.closure import SpanBuilder

    a, b = SpanBuilder(n, ring), SpanBuilder(n, ring)
    for X in C:
        a.add(X)
    for X in C2:
        b.add(X)
    assert a.dim == b.dim and all(a.contains(X) for X in C2)


def test_ideal_span_examples():
    assert same_span(ideal_span([I(2), E(2, 1, 2)], E(2, 1, 2)), [E(2, 1, 2)])
    assert ideal_span([I(2)], Matrix.zeros(2, QQ)) == []
    all_units = [E(2, a, b) for a in (1, 2) for b in (1, 2)]
    assert len(ideal_span(all_units, E(2, 1, 1))) == 4


def test_is_commutative_family():
    assert is_commutative_family([diag(1, 2), diag(3, 4), I(2)])
    assert not is_commutative_family([E(2, 1, 2), E(2, 2, 1)])


def test_closure_stop_ends_at_first_match():
    gens = GeneratorSet([E(2, 1, 2), E(2, 2, 1)])
    full = semigroup_closure(gens)
    target = full.elements[3]
    res = semigroup_closure(gens, stop=lambda m: m == target)
    assert res.found == 3 and not res.complete
    assert res.elements == full.elements[:4] and res.words == full.words[:4]
    assert semigroup_closure(gens, stop=lambda m: False).found is None
