import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import E, I, M, diag, rand_matrix, seeded
from semitri.closure import GeneratorSet
from semitri.linalg import Matrix, char_poly, is_nilpotent, is_unipotent, singleton_spectrum
from semitri.scalars import HH, QQ, PrimeField
from semitri.testkit import (
    KINDS,
    InstanceRecipe,
    RetriesExhausted,
    flag_enumeration_oracle,
    gen_conjugated_flag_family,
    gen_tn_family,
    spectrum_oracle,
)
from semitri.triangularize import central_spectrum_quaternion, irreducibility_test, verify_chain

GF2, GF3 = PrimeField(2), PrimeField(3)


def test_recipe_kinds_and_aliases():
    assert InstanceRecipe("KaplanskyField", 2).kind == "kaplansky_field"
    assert InstanceRecipe("TnFamilyRecipe", 2).kind == "tn"
    assert InstanceRecipe("kaplansky_quaternion", 2).ring == "quaternion"
    with pytest.raises(ValueError):
        InstanceRecipe("banana", 2)
    with pytest.raises(ValueError):
        InstanceRecipe("nilpotent", 0)


@pytest.mark.parametrize("kind", [k for k in KINDS if k != "irreducible_pair"])
def test_same_recipe_same_instance(kind):
    ring = "quaternion" if kind == "kaplansky_quaternion" else "rational"
    r = InstanceRecipe(kind, 3, ring, seed=42)
    a, ca = gen_conjugated_flag_family(r)
    b, cb = gen_conjugated_flag_family(r)
    assert a.matrices == b.matrices and ca == cb
    c, _ = gen_conjugated_flag_family(InstanceRecipe(kind, 3, ring, seed=43))
    assert c.matrices != a.matrices


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["nilpotent", "unipotent", "kaplansky_field", "general", "tn"]),
       st.integers(1, 5), st.sampled_from(["rational", "gfp:5", "gfp:2"]), st.integers(0, 10 ** 6))
def test_hidden_certificate_verifies(kind, n, ring, seed):
    try:
        gens, chain = gen_conjugated_flag_family(InstanceRecipe(kind, n, ring, seed))
    except RetriesExhausted:
        assert kind == "tn" and n == 1
        return
    assert verify_chain(gens, chain)


def test_quaternion_certificates_and_central_scalars():
    for seed in range(10):
        gens, chain = gen_conjugated_flag_family(InstanceRecipe("kaplansky_quaternion", 3, seed=seed))
        assert gens.ring == HH
        assert verify_chain(gens, chain)
        for g in gens:
            assert central_spectrum_quaternion(g) is not None


def test_kind_specific_shapes():
    gens, _ = gen_conjugated_flag_family(InstanceRecipe("nilpotent", 3, seed=1))
    assert all(is_nilpotent(g) and (g ** 3).is_zero() for g in gens)
    gens, _ = gen_conjugated_flag_family(InstanceRecipe("unipotent", 2, num_generators=1))
    assert len(gens) == 1 and is_unipotent(gens.matrices[0])
    gens, _ = gen_conjugated_flag_family(InstanceRecipe("kaplansky_field", 4, seed=5))
    for g in gens:
        assert singleton_spectrum(g) is not None


def test_irreducible_pair():
    for n in (2, 3, 4):
        gens, chain = gen_conjugated_flag_family(InstanceRecipe("irreducible_pair", n))
        assert chain is None
        assert irreducibility_test(gens)
    with pytest.raises(ValueError):
        gen_conjugated_flag_family(InstanceRecipe("irreducible_pair", 3, "gfp:2"))


def test_tn_family_invariants_hold():
    for seed in range(10):
        fam, chain = gen_tn_family(InstanceRecipe("tn", 4, seed=seed))
        for T in fam.t_set:
            for N in fam.n_set:
                assert T * N == N * T and is_nilpotent(N)
        assert verify_chain(fam.generators(), chain)


def test_tn_family_has_noncommutative_t_sets():
    seen = False
    for seed in range(30):
        fam, _ = gen_tn_family(InstanceRecipe("tn", 3, seed=seed))
        ts = fam.t_set
        if any(a * b != b * a for a in ts for b in ts):
            seen = True
            break
    assert seen


def test_tn_retries_exhausted():
    with pytest.raises(RetriesExhausted):
        gen_tn_family(InstanceRecipe("tn", 1), max_retries=5)


# -- oracles --------------------------------------------------------------


def test_flag_oracle_examples():
    assert flag_enumeration_oracle([M([[1, 1], [0, 1]], GF2), M([[0, 1], [0, 0]], GF2)])
    assert not flag_enumeration_oracle([E(2, 1, 2, GF2), E(2, 2, 1, GF2)])
    assert flag_enumeration_oracle([I(3, GF3)])
    with pytest.raises(ValueError):
        flag_enumeration_oracle([I(4, GF2)])
    with pytest.raises(ValueError):
        flag_enumeration_oracle([I(2)])


def test_flag_oracle_counts_subspaces():
    # GF(2)^3 has 7 lines, so a generic cyclic permutation with no fixed line is refuted
    cyc = M([[0, 0, 1], [1, 0, 0], [0, 1, 0]], GF2)
    assert not flag_enumeration_oracle([cyc])
    # but over GF(3) the permutation fixes (1,1,1) and x^2 + x + 1 = (x - 1)^2 splits
    assert flag_enumeration_oracle([M([[0, 0, 1], [1, 0, 0], [0, 1, 0]], GF3)])


def test_spectrum_oracle_examples():
    assert spectrum_oracle(I(2) * 3 + E(2, 1, 2)) == 3
    assert spectrum_oracle(diag(1, 2)) is None
    rng = seeded(0)
    for _ in range(10):
        U = rand_matrix(rng, 4, QQ)
        N = Matrix([[a if j > i else QQ.zero for j, a in enumerate(r)] for i, r in enumerate(U.rows)], QQ)
        assert spectrum_oracle(N) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([2, 3, 0]))
def test_oracle_char_poly_agrees_with_engine(seed, p):
    from semitri.testkit import _cofactor_char_poly

    ring = PrimeField(p) if p else QQ
    rng = seeded(seed)
    A = rand_matrix(rng, rng.randint(1, 4), ring)
    one, zero = ring.one, ring.zero
    assert _cofactor_char_poly([list(r) for r in A.rows], one, zero) == \
        char_poly(A) + [zero] * (A.n + 1 - len(char_poly(A)))


def test_random_conjugator_inverse():
    from semitri.testkit import random_conjugator

    rng = seeded(5)
    for ring in (QQ, GF3, HH):
        P, Pinv = random_conjugator(rng, 3, ring)
        assert P * Pinv == I(3, ring)
        assert GeneratorSet([P]).n == 3
