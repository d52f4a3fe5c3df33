"""Decision engine: triangularizing chains or finite refutation witnesses.

Every engine works the same way.  It looks for a nonzero proper subspace that
is invariant under all generators (a common kernel, a fixed space, the kernel of
a nilpotent ideal, an eigenspace), changes basis so the generators become block
upper triangular, recurses into the two diagonal blocks and splices the two
sub-chains back together.  A chain is always re-checked against the generators
before it is returned, so a positive verdict never depends on a hypothesis that
was only sampled.

When an engine gets stuck, the semigroup closure (up to ``closure_bound``
elements) is searched for an element that violates the hypothesis the engine
relies on; that element becomes the witness.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import poly as P
from .closure import (
    DEFAULT_CLOSURE_BOUND,
    GeneratorSet,
    SpanBuilder,
    algebra_span,
    algebra_span_words,
    commutant,
    format_word,
    ideal_span_words,
    is_commutative_family,
    semigroup_closure,
)
from .linalg import (
    Chain,
    Matrix,
    Subspace,
    UnsupportedRing,
    central_spectrum_quaternion,
    char_poly,
    eigenvalues_in_field,
    extend_to_basis,
    inverse,
    is_nilpotent,
    is_unipotent,
    kernel,
    real_representation,
    singleton_spectrum,
)
from .scalars import QQ, Rational

__all__ = [
    "NON_SINGLETON_SPECTRUM",
    "NON_NILPOTENT_IDEAL_ELEMENT",
    "NO_EIGENVALUE_IN_FIELD",
    "EMPTY_FIXED_SPACE",
    "NOT_INVARIANT",
    "DECOMPOSITION_VIOLATION",
    "NON_CENTRAL_SCALAR",
    "NON_UNIPOTENT_ELEMENT",
    "Witness",
    "Step",
    "Verdict",
    "ChainReport",
    "Refuted",
    "FamilyIsScalar",
    "ClosureBoundExceeded",
    "IrreducibilityUndecided",
    "InvalidTnFamily",
    "TnFamily",
    "levitzki_chain",
    "kolchin_chain",
    "kaplansky_chain",
    "hyperinvariant_subspace",
    "tn_triangularize",
    "triangularize_general",
    "verify_chain",
    "irreducibility_test",
    "spin",
    "kaplansky_scalar",
]

NON_SINGLETON_SPECTRUM = "NonSingletonSpectrum"
NON_NILPOTENT_IDEAL_ELEMENT = "NonNilpotentIdealElement"
NO_EIGENVALUE_IN_FIELD = "NoEigenvalueInField"
EMPTY_FIXED_SPACE = "EmptyFixedSpace"
NOT_INVARIANT = "NotInvariant"
DECOMPOSITION_VIOLATION = "DecompositionViolation"
NON_CENTRAL_SCALAR = "NonCentralScalar"
NON_UNIPOTENT_ELEMENT = "NonUnipotentElement"


@dataclass
class Witness:
    """Finite certificate that a hypothesis (and hence a chain) fails.

    ``element`` is the offending matrix; for ``EmptyFixedSpace`` it is the
    stacked system whose kernel is zero, for ``NotInvariant`` the vector that
    leaves ``subspace``.  ``operands`` holds the inputs of a failed commutation
    (``(T, N)``) or the block matrix of a failed decomposition (with ``split``).
    """

    kind: str
    element: object
    word: str = None
    detail: str = ""
    operands: tuple = ()
    subspace: Subspace = None
    split: int = None

    def recheck(self):
        """True iff the violated predicate still fails on the stored data."""
        el = self.element
        k = self.kind
        if k == NON_SINGLETON_SPECTRUM:
            return kaplansky_scalar(el) is None
        if k == NON_CENTRAL_SCALAR:
            return central_spectrum_quaternion(el) is None
        if k == NON_NILPOTENT_IDEAL_ELEMENT:
            return not is_nilpotent(el)
        if k == NON_UNIPOTENT_ELEMENT:
            return not is_unipotent(el)
        if k == NO_EIGENVALUE_IN_FIELD:
            return not _splits(el)
        if k == EMPTY_FIXED_SPACE:
            return kernel(el).dim == 0
        if k == NOT_INVARIANT:
            A = self.operands[0]
            return self.subspace.contains(el) and not self.subspace.contains(A.apply(el))
        if k == DECOMPOSITION_VIOLATION:
            if len(self.operands) == 2:
                T, N = self.operands
                comm = T * N - N * T
                return comm == el and not comm.is_zero()
            s = self.split
            return not el.block(s, el.nrows, 0, s).is_zero()
        raise ValueError(f"unknown witness kind {k!r}")

    def describe(self):
        where = f" (word {self.word})" if self.word else ""
        return f"{self.kind}{where}" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class Step:
    """One branch taken by an engine: where, in which ambient dimension, what it found."""

    depth: int
    dim: int
    branch: str
    found: int = 0
    note: str = ""

    def __str__(self):
        s = f"depth {self.depth}, dim {self.dim}: {self.branch}"
        if self.found:
            s += f" -> invariant subspace of dim {self.found}"
        if self.note:
            s += f" [{self.note}]"
        return s


@dataclass
class Verdict:
    triangularizable: bool
    chain: Chain = None
    witness: Witness = None
    log: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    engine: str = ""

    @property
    def kind(self):
        return "Triangularizable" if self.triangularizable else "NotTriangularizable"

    def __bool__(self):
        return self.triangularizable


@dataclass
class ChainReport:
    ok: bool
    generator: int = None
    level: int = None
    vector: tuple = None

    def __bool__(self):
        return self.ok

    def describe(self, labels=None):
        if self.ok:
            return "chain is invariant under every generator"
        g = labels[self.generator] if labels else f"g{self.generator + 1}"
        return f"{g} moves V_{self.level} (basis vector {self.vector})"


class Refuted(Exception):
    def __init__(self, witness):
        super().__init__(witness.describe())
        self.witness = witness


class FamilyIsScalar(ValueError):
    pass


class ClosureBoundExceeded(RuntimeError):
    def __init__(self, bound):
        super().__init__(f"semigroup closure did not close within {bound} elements")
        self.bound = bound


class IrreducibilityUndecided(RuntimeError):
    pass


class InvalidTnFamily(ValueError):
    def __init__(self, witness):
        super().__init__(witness.describe())
        self.witness = witness


class _Stuck(Exception):
    def __init__(self, witness):
        super().__init__(witness.describe())
        self.witness = witness


# ---------------------------------------------------------------------------
# helpers


def _as_gens(gens):
    return gens if isinstance(gens, GeneratorSet) else GeneratorSet(gens)


def _trivial_chain(n, ring):
    return Chain.standard(n, ring)


def _common_kernel(mats, n, ring):
    mats = [m for m in mats if m.nrows]
    if not mats:
        return Subspace.full(n, ring)
    stacked = Matrix([r for m in mats for r in m.rows], ring)
    return kernel(stacked)


def _stacked(mats, ring):
    return Matrix([r for m in mats for r in m.rows], ring)


def _split(mats, K):
    """Block-triangularize every matrix along K; return the basis and diagonal blocks."""
    n = K.n
    k = K.dim
    Pm = extend_to_basis(K)
    Pinv = inverse(Pm)
    tops, bots = [], []
    for i, g in enumerate(mats):
        B = Pinv * g * Pm
        if not B.block(k, n, 0, k).is_zero():
            raise _Stuck(Witness(
                DECOMPOSITION_VIOLATION, B, detail=f"generator {i + 1} is not block upper triangular",
                operands=(B,), split=k,
            ))
        tops.append(B.block(0, k, 0, k))
        bots.append(B.block(k, n, k, n))
    return Pm, tops, bots


def _splice(Pm, k, top, bottom):
    n = Pm.nrows
    ring = Pm.ring
    zero = ring.zero
    subs = [Subspace.span([Pm.apply(tuple(x) + (zero,) * (n - k)) for x in V.basis], n, ring)
            for V in top.subspaces]
    K = subs[-1]
    for V in bottom.subspaces[1:]:
        vecs = list(K.basis) + [Pm.apply((zero,) * k + tuple(y)) for y in V.basis]
        subs.append(Subspace.span(vecs, n, ring))
    return Chain(subs)


def _divide(mats, K, rec, depth):
    Pm, tops, bots = _split(mats, K)
    return _splice(Pm, K.dim, rec(tops, depth + 1), rec(bots, depth + 1))


def _evaluate_word(gens, word):
    if not isinstance(word, tuple):
        return None
    m = Matrix.identity(gens.n, gens.ring)
    for i in word:
        m = m * gens.matrices[i]
    return m


def _search_closure(gens, bad, bound):
    res = semigroup_closure(gens, bound, stop=bad)
    if res.found is not None:
        return res.elements[res.found], gens.word(res.words[res.found]), res
    return None, None, res


def _finish(gens, chain, log, engine, notes=()):
    report = verify_chain(gens, chain)
    if not report:
        raise AssertionError(f"engine {engine} produced a chain that fails verification: {report.describe()}")
    notes = list(notes) + ["hypothesis implied by the verified chain (generator invariance covers every product)"]
    return Verdict(True, chain=chain, log=log, notes=notes, engine=engine)


def _refuted(witness, log, engine, notes=()):
    return Verdict(False, witness=witness, log=log, notes=list(notes), engine=engine)


def _closure_note(res):
    if res.found is not None:
        return f"closure searched: violation at element {res.found + 1} in breadth-first order"
    if res.complete:
        return f"closure searched: {len(res.elements)} elements (complete)"
    return f"closure searched: {len(res.elements)} elements (incomplete, bound reached)"


def kaplansky_scalar(A):
    """Singleton spectrum over a field, central spectrum over the quaternions."""
    if A.ring.is_commutative:
        return singleton_spectrum(A)
    return central_spectrum_quaternion(A)


def _quaternion_rational_eigen(A):
    """(pairs, split) for rational eigenvalues of a quaternion matrix via its QQ-representation."""
    cp = char_poly(real_representation(A))
    roots = P.rational_roots(cp)
    inv = lambda c: 1 / c  # noqa: E731
    pairs = [(r, P.root_multiplicity(cp, r, inv, QQ.one) // 4) for r in roots]
    return pairs, sum(m for _, m in pairs) == A.n


def _eigen(A):
    if A.ring.is_commutative:
        return eigenvalues_in_field(A)
    return _quaternion_rational_eigen(A)


def _splits(A):
    return _eigen(A)[1]


# ---------------------------------------------------------------------------
# Levitzki: semigroups of nilpotents


def _levitzki_rec(mats, depth, log):
    n = mats[0].nrows
    ring = mats[0].ring
    if n <= 1 or all(m.is_zero() for m in mats):
        return _trivial_chain(n, ring)
    K = _common_kernel(mats, n, ring)
    log.append(Step(depth, n, "levitzki-common-kernel", K.dim))
    if K.dim == 0:
        raise _Stuck(Witness(EMPTY_FIXED_SPACE, _stacked(mats, ring),
                             detail=f"generators have no common kernel in a {n}-dim subquotient"))
    return _divide(mats, K, lambda ms, d: _levitzki_rec(ms, d, log), depth)


def levitzki_chain(gens, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Chain for a semigroup of nilpotent matrices, built from common kernels."""
    gens = _as_gens(gens)
    log = []
    for i, g in enumerate(gens.matrices):
        if not is_nilpotent(g):
            return _refuted(Witness(NON_NILPOTENT_IDEAL_ELEMENT, g, gens.labels[i],
                                    "generator is not nilpotent"), log, "levitzki")
    try:
        chain = _levitzki_rec(gens.matrices, 0, log)
    except _Stuck as e:
        m, w, res = _search_closure(gens, lambda x: not is_nilpotent(x), closure_bound)
        if m is not None:
            wit = Witness(NON_NILPOTENT_IDEAL_ELEMENT, m, w, "product of nilpotent generators is not nilpotent")
        else:
            wit = e.witness
        return _refuted(wit, log, "levitzki", [_closure_note(res)])
    return _finish(gens, chain, log, "levitzki")


# ---------------------------------------------------------------------------
# Kolchin: semigroups of unipotents


def _kolchin_rec(mats, depth, log):
    n = mats[0].nrows
    ring = mats[0].ring
    if n <= 1:
        return _trivial_chain(n, ring)
    identity = Matrix.identity(n, ring)
    shifted = [m - identity for m in mats]
    if all(s.is_zero() for s in shifted):
        return _trivial_chain(n, ring)
    fix = _common_kernel(shifted, n, ring)
    log.append(Step(depth, n, "kolchin-fixed-space", fix.dim))
    if fix.dim == 0:
        raise _Stuck(Witness(EMPTY_FIXED_SPACE, _stacked(shifted, ring),
                             detail=f"no common fixed vector in a {n}-dim subquotient"))
    return _divide(mats, fix, lambda ms, d: _kolchin_rec(ms, d, log), depth)


def kolchin_chain(gens, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Chain for a semigroup of unipotent matrices, built from common fixed spaces."""
    gens = _as_gens(gens)
    log = []
    for i, g in enumerate(gens.matrices):
        if not is_unipotent(g):
            return _refuted(Witness(NON_UNIPOTENT_ELEMENT, g, gens.labels[i], "generator is not unipotent"),
                            log, "kolchin")
    try:
        chain = _kolchin_rec(gens.matrices, 0, log)
    except _Stuck as e:
        m, w, res = _search_closure(gens, lambda x: not is_unipotent(x), closure_bound)
        if m is not None:
            wit = Witness(NON_UNIPOTENT_ELEMENT, m, w, "product of unipotent generators is not unipotent")
        else:
            wit = e.witness
        return _refuted(wit, log, "kolchin", [_closure_note(res)])
    return _finish(gens, chain, log, "kolchin")


# ---------------------------------------------------------------------------
# Kaplansky: every element of the form cI + N with c central


def _spectrum_witness(A, word, detail):
    if A.ring.is_commutative:
        return Witness(NON_SINGLETON_SPECTRUM, A, word, detail)
    pairs, _ = _quaternion_rational_eigen(A)
    kind = NON_SINGLETON_SPECTRUM if len(pairs) > 1 else NON_CENTRAL_SCALAR
    return Witness(kind, A, word, detail)


def _kaplansky_rec(mats, lams, depth, log):
    n = mats[0].nrows
    ring = mats[0].ring
    if n <= 1 or all(m.is_scalar() for m in mats):
        return _trivial_chain(n, ring)
    seeds = [i for i, (m, c) in enumerate(zip(mats, lams)) if c == 0 and not m.is_zero()]
    if seeds:
        z = seeds[0]
        basis, words = algebra_span_words(mats, unital=True)
        elems, ewords = ideal_span_words(basis, mats[z], words, (z,))
        for m, w in zip(elems, ewords):
            if not is_nilpotent(m):
                raise _Stuck(Witness(NON_NILPOTENT_IDEAL_ELEMENT, m, w,
                                     "element of the ideal generated by a nilpotent generator"))
        K = _common_kernel(elems, n, ring)
        log.append(Step(depth, n, "kaplansky-nilpotent-ideal", K.dim, f"seed g{z + 1}"))
        if K.dim == 0:
            raise _Stuck(Witness(EMPTY_FIXED_SPACE, _stacked(elems, ring),
                                 detail="nilpotent ideal has no common kernel"))
        return _divide(mats, K, lambda ms, d: _kaplansky_rec(ms, lams, d, log), depth)
    normalized = []
    for m, c in zip(mats, lams):
        if m.is_zero():
            continue
        g = m * ring.inv(ring.embed_central(c))
        if not is_unipotent(g):
            raise _Stuck(Witness(NON_SINGLETON_SPECTRUM, m, None, "normalized element is not unipotent"))
        normalized.append(g)
    log.append(Step(depth, n, "kaplansky-normalize", 0, f"{len(normalized)} unipotent generators"))
    if not normalized:
        return _trivial_chain(n, ring)
    return _kolchin_rec(normalized, depth, log)


def kaplansky_chain(gens, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Chain for a semigroup whose elements are cI + N (c central, N nilpotent).

    Nilpotent generators seed a nilpotent ideal whose common kernel is invariant;
    otherwise every generator is divided by its scalar and the unipotent engine
    takes over.
    """
    gens = _as_gens(gens)
    log = []
    lams = []
    for i, g in enumerate(gens.matrices):
        c = kaplansky_scalar(g)
        if c is None:
            return _refuted(_spectrum_witness(g, gens.labels[i], "generator is not a central scalar plus nilpotent"),
                            log, "kaplansky")
        lams.append(c)
    try:
        chain = _kaplansky_rec(gens.matrices, lams, 0, log)
    except _Stuck as e:
        m, w, res = _search_closure(gens, lambda x: kaplansky_scalar(x) is None, closure_bound)
        notes = [_closure_note(res)]
        if m is not None:
            wit = _spectrum_witness(m, w, "closure element is not a central scalar plus nilpotent")
        else:
            wit = e.witness
            top = _evaluate_word(gens, wit.word) if isinstance(wit.word, tuple) else None
            if top is not None:
                wit = Witness(wit.kind, top, format_word(wit.word, gens.labels), wit.detail)
            elif isinstance(wit.word, tuple):
                wit.word = format_word(wit.word, gens.labels)
        return _refuted(wit, log, "kaplansky", notes)
    return _finish(gens, chain, log, "kaplansky")


# ---------------------------------------------------------------------------
# hyperinvariant subspaces


def _first_nonscalar(elems, words):
    for m, w in zip(elems, words):
        if not m.is_scalar():
            return m, w
    return None, None


def _eigenspace(a, word, labels=None):
    pairs, split = _eigen(a)
    if not split:
        raise Refuted(Witness(NO_EIGENVALUE_IN_FIELD, a, format_word(word, labels) if word else None,
                              "characteristic polynomial does not split over the center"))
    lam = pairs[0][0]
    ring = a.ring
    return kernel(a - Matrix.identity(a.n, ring) * ring.embed_central(lam)), lam


def _first_commutator(elems):
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            c = a * b - b * a
            if not c.is_zero():
                return c
    return None


def _ideal_kernel(algebra, K0, what):
    elems, _ = ideal_span_words(algebra, K0)
    for m in elems:
        if not is_nilpotent(m):
            raise Refuted(Witness(NON_NILPOTENT_IDEAL_ELEMENT, m, None, f"element of {what}"))
    n, ring = K0.nrows, K0.ring
    K = _common_kernel(elems, n, ring)
    if K.dim == 0:
        raise Refuted(Witness(EMPTY_FIXED_SPACE, _stacked(elems, ring), None, f"{what} has no common kernel"))
    return K


def hyperinvariant_subspace(family, log=None, depth=0):
    """Nontrivial subspace invariant under the family and under its commutant.

    Commutative algebra: an eigenspace of the first nonscalar element.  Otherwise
    the common kernel of the ideal generated by a nonzero commutator inside the
    algebra spanned by the commutant and its products with the family.  Raises
    :class:`Refuted` when the family cannot be triangularizable over the center
    (and, for quaternions, with central inner eigenvalues).
    """
    gens = _as_gens(family)
    n, ring = gens.n, gens.ring
    if n < 2:
        raise ValueError("hyperinvariant subspaces need dimension at least 2")
    if all(m.is_scalar() for m in gens.matrices):
        raise FamilyIsScalar("every member of the family is scalar")
    elems, words = algebra_span_words(gens, unital=False)
    if is_commutative_family(elems):
        a, w = _first_nonscalar(elems, words)
        M, lam = _eigenspace(a, w, gens.labels)
        if log is not None:
            log.append(Step(depth, n, "commutative-eigenspace", M.dim, f"eigenvalue {ring.center.format(lam)}"))
        return M
    K0 = _first_commutator(elems)
    comm = commutant(gens)
    a1 = SpanBuilder(n, ring)
    for c in comm:
        a1.add(c)
    for a in elems:
        for c in comm:
            a1.add(a * c)
    K = _ideal_kernel(a1.elements, K0, "the ideal generated by a commutator in A1")
    if log is not None:
        log.append(Step(depth, n, "commutator-ideal-kernel", K.dim, f"A1 of dim {a1.dim}"))
    return K


# ---------------------------------------------------------------------------
# T + N families


@dataclass
class TnFamily:
    """Pairs (T_i, N_i) with every N_i nilpotent and commuting with every T_j."""

    pairs: list

    def __post_init__(self):
        self.pairs = [(T, N) for T, N in self.pairs]
        if not self.pairs:
            raise ValueError("a T+N family needs at least one pair")
        for i, (_, N) in enumerate(self.pairs):
            if not is_nilpotent(N):
                raise InvalidTnFamily(Witness(NON_NILPOTENT_IDEAL_ELEMENT, N, f"N{i + 1}",
                                              "N part is not nilpotent"))
        for i, (_, N) in enumerate(self.pairs):
            for j, T in enumerate(self.t_set):
                c = T * N - N * T
                if not c.is_zero():
                    raise InvalidTnFamily(Witness(DECOMPOSITION_VIOLATION, c, f"[T{j + 1}, N{i + 1}]",
                                                  f"N{i + 1} does not commute with T{j + 1}", operands=(T, N)))

    @property
    def t_set(self):
        return [T for T, _ in self.pairs]

    @property
    def n_set(self):
        return [N for _, N in self.pairs]

    @property
    def ring(self):
        return self.pairs[0][0].ring

    @property
    def n(self):
        return self.pairs[0][0].nrows

    def generators(self):
        return GeneratorSet([T + N for T, N in self.pairs])


def _tn_rec(ts, ns, depth, log):
    n = ts[0].nrows
    ring = ts[0].ring
    if n <= 1:
        return _trivial_chain(n, ring)
    if all(T.is_scalar() for T in ts):
        log.append(Step(depth, n, "tn-scalar-part-kaplansky"))
        mats = [T + N for T, N in zip(ts, ns)]
        lams = [ring.coords(T.rows[0][0])[0] for T in ts]
        return _kaplansky_rec(mats, lams, depth, log)
    M = hyperinvariant_subspace(ts, log, depth)
    k = M.dim
    Pm, t_tops, t_bots = _split(ts, M)
    try:
        _, n_tops, n_bots = _split(ns, M)
    except _Stuck as e:
        raise Refuted(e.witness) from None
    top = _tn_rec(t_tops, n_tops, depth + 1, log)
    bottom = _tn_rec(t_bots, n_bots, depth + 1, log)
    return _splice(Pm, k, top, bottom)


def tn_triangularize(fam, closure_bound=DEFAULT_CLOSURE_BOUND, finite=False):
    """Chain for the semigroup generated by {T_i + N_i}, by induction on dimension.

    A scalar T part reduces to the Kaplansky engine; otherwise a hyperinvariant
    subspace of the T set is invariant under every T and N alike and splits the
    problem into two smaller T+N problems.  ``finite`` requires the generated
    semigroup to close within ``closure_bound`` elements.
    """
    gens = fam.generators()
    log = []
    notes = []
    if finite:
        res = semigroup_closure(gens, closure_bound)
        if not res.complete:
            raise ClosureBoundExceeded(closure_bound)
        notes.append(f"finite semigroup of {len(res.elements)} elements")
    try:
        chain = _tn_rec(fam.t_set, fam.n_set, 0, log)
    except (Refuted, _Stuck) as e:
        return _refuted(e.witness, log, "tn", notes)
    if not fam.ring.is_commutative:
        Q = chain.adapted_basis()
        Qinv = inverse(Q)
        for j, T in enumerate(fam.t_set):
            D = Qinv * T * Q
            bad = [x for x in D.diagonal() if not fam.ring.is_central(x)]
            if bad:
                return _refuted(Witness(NON_CENTRAL_SCALAR, T, f"T{j + 1}",
                                        "inner eigenvalue off the center in the constructed basis"), log, "tn", notes)
        notes.append("inner eigenvalues of every T are central in the chain's basis")
    return _finish(gens, chain, log, "tn", notes)


# ---------------------------------------------------------------------------
# general families over a field


def _general_rec(mats, depth, log):
    n = mats[0].nrows
    ring = mats[0].ring
    if n <= 1 or all(m.is_scalar() for m in mats):
        return _trivial_chain(n, ring)
    elems, words = algebra_span_words(mats, unital=False)
    if is_commutative_family(elems):
        a, w = _first_nonscalar(elems, words)
        M, lam = _eigenspace(a, w)
        log.append(Step(depth, n, "commutative-eigenspace", M.dim, f"eigenvalue {ring.format(lam)}"))
    else:
        K0 = _first_commutator(elems)
        unital = [Matrix.identity(n, ring)] + elems
        M = _ideal_kernel(unital, K0, "the ideal generated by a commutator")
        log.append(Step(depth, n, "commutator-ideal-kernel", M.dim))
    return _divide(mats, M, lambda ms, d: _general_rec(ms, d, log), depth)


def triangularize_general(gens, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Decide triangularizability over the field of an arbitrary finite family.

    Exact in both directions: a commutative algebra needs a split nonscalar
    element, a non-commutative one needs the ideal generated by a commutator to
    be nilpotent with nonzero common kernel, and both facts pass to the blocks.
    """
    gens = _as_gens(gens)
    if not gens.ring.is_commutative:
        raise UnsupportedRing("the general engine needs a commutative field")
    log = []
    try:
        chain = _general_rec(gens.matrices, 0, log)
    except (Refuted, _Stuck) as e:
        wit = e.witness
        if isinstance(wit.word, tuple):
            wit.word = format_word(wit.word, gens.labels)
        if wit.element.ncols != gens.n:
            wit.detail = f"{wit.detail} (in a {wit.element.ncols}-dim subquotient)"
        return _refuted(wit, log, "general")
    return _finish(gens, chain, log, "general")


# ---------------------------------------------------------------------------
# checks


def verify_chain(gens, chain):
    """Check g V_j inside V_j for every generator and level; report the first failure."""
    gens = _as_gens(gens)
    if chain.n != gens.n:
        raise ValueError("chain and generators live in different dimensions")
    for j, V in enumerate(chain.subspaces):
        for i, g in enumerate(gens.matrices):
            b = V.first_escape(g)
            if b is not None:
                return ChainReport(False, i, j, b)
    return ChainReport(True)


def spin(vectors, mats, n, ring):
    """Smallest subspace containing ``vectors`` and invariant under every matrix."""
    U = Subspace.span(vectors, n, ring)
    queue = list(U.basis)
    while queue:
        v = queue.pop()
        for m in mats:
            w = m.apply(v)
            if not U.contains(w):
                U = U + Subspace.span([w], n, ring)
                queue.append(w)
    return U


def _right_mult(n, u, ring):
    """QQ-matrix of x -> x*u on H^n in the real representation coordinates."""
    cols = []
    for j in range(n):
        for e in ring.center_basis():
            v = [ring.zero] * n
            v[j] = e * u
            cols.append([c for x in v for c in ring.coords(x)])
    return Matrix.from_columns(cols, QQ)


def _factor(cp, ring):
    import sympy

    x = sympy.Symbol("x")
    if ring.characteristic:
        coeffs = [int(c) for c in reversed(cp)]
        fl = sympy.Poly(coeffs, x, modulus=ring.characteristic).factor_list()[1]
        return [[ring.from_int(int(c)) for c in reversed(f.all_coeffs())] for f, _ in fl]
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(cp)]
    fl = sympy.Poly(coeffs, x, domain="QQ").factor_list()[1]
    return [[Rational(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(f.all_coeffs())]
            for f, _ in fl]


def _matrix_poly(f, a):
    ring = a.ring
    identity = Matrix.identity(a.n, ring)
    acc = Matrix.zeros(a.n, ring)
    for c in reversed(f):
        acc = acc * a + identity * c
    return acc


def _irreducible_over_field(mats, n, ring, budget, seed):
    for i in range(n):
        e = [ring.zero] * n
        e[i] = ring.one
        if spin([e], mats, n, ring).dim < n:
            return False
    tmats = [m.transpose() for m in mats]
    for i in range(n):
        e = [ring.zero] * n
        e[i] = ring.one
        if spin([e], tmats, n, ring).dim < n:
            return False
    basis = algebra_span(mats, unital=True)
    rng = random.Random(seed)
    candidates = list(basis)
    for a, b in zip(basis, basis[1:]):
        candidates.append(a + b)
    while len(candidates) < budget:
        acc = Matrix.zeros(n, ring)
        for b in basis:
            acc = acc + b * ring.from_int(rng.randint(-3, 3))
        candidates.append(acc)
    for a in candidates[:budget]:
        if a.is_scalar():
            continue
        for f in _factor(char_poly(a), ring):
            fa = _matrix_poly(f, a)
            N = kernel(fa)
            for v in N.basis:
                if spin([v], mats, n, ring).dim < n:
                    return False
            if N.dim == len(f) - 1:
                w = kernel(fa.transpose()).basis[0]
                return spin([w], tmats, n, ring).dim == n
    if ring.characteristic == 0 and _trace_radical_nonzero(basis):
        return False
    raise IrreducibilityUndecided("no algebra element certified (ir)reducibility within the search budget")


def _trace_radical_nonzero(basis):
    # char 0: the radical of a matrix algebra is its trace-form null space
    gram = Matrix([[(a * b).trace() for b in basis] for a in basis], basis[0].ring)
    return kernel(gram).dim > 0


def irreducibility_test(gens, budget=40, seed=0):
    """True iff the generators have no common invariant subspace besides 0 and the whole space.

    Reducibility is certified by a proper invariant subspace found by spinning;
    irreducibility by an algebra element a and an irreducible factor f of its
    characteristic polynomial with nullity(f(a)) = deg f whose kernel vectors spin
    to the whole space on both sides.  Quaternion families are handled as QQ
    families on QQ^(4n) together with right multiplication by i and j.
    """
    gens = _as_gens(gens)
    n, ring = gens.n, gens.ring
    if n <= 1:
        return True
    if ring.is_commutative:
        return _irreducible_over_field(gens.matrices, n, ring, budget, seed)
    mats = [real_representation(g) for g in gens.matrices]
    mats += [_right_mult(n, u, ring) for u in ring.center_basis()[1:3]]
    return _irreducible_over_field(mats, 4 * n, QQ, budget, seed)
