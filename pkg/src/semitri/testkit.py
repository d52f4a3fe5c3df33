"""Seeded random instances with hidden certificates, and brute-force oracles.

Instances are built upper triangular in a hidden basis and then conjugated by a
product of random elementary matrices, so the hidden chain is known exactly.
The oracles (:func:`flag_enumeration_oracle`, :func:`spectrum_oracle`) use plain
integer and rational arithmetic and none of the engine's code paths.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb

from .closure import GeneratorSet
from .linalg import Chain, Matrix, kernel
from .scalars import Rational, ring_from_tag
from .triangularize import TnFamily

__all__ = [
    "KINDS",
    "InstanceRecipe",
    "RetriesExhausted",
    "gen_conjugated_flag_family",
    "gen_tn_family",
    "random_conjugator",
    "random_scalar",
    "flag_enumeration_oracle",
    "spectrum_oracle",
]

KINDS = ("nilpotent", "unipotent", "kaplansky_field", "kaplansky_quaternion", "tn", "irreducible_pair", "general")

_KIND_ALIASES = {
    "nilpotent": "nilpotent",
    "unipotent": "unipotent",
    "kaplanskyfield": "kaplansky_field",
    "kaplansky": "kaplansky_field",
    "kaplanskyquaternion": "kaplansky_quaternion",
    "tnfamilyrecipe": "tn",
    "tnfamily": "tn",
    "tn": "tn",
    "irreduciblepair": "irreducible_pair",
    "general": "general",
}

HEIGHT = 10


class RetriesExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceRecipe:
    kind: str
    n: int
    ring: str = "rational"
    seed: int = 0
    num_generators: int = 2

    def __post_init__(self):
        key = self.kind.lower().replace("_", "").replace("-", "")
        if key not in _KIND_ALIASES:
            raise ValueError(f"unknown instance kind {self.kind!r}")
        object.__setattr__(self, "kind", _KIND_ALIASES[key])
        if self.kind == "kaplansky_quaternion" and self.ring != "quaternion":
            object.__setattr__(self, "ring", "quaternion")
        if self.n < 1 or self.num_generators < 1:
            raise ValueError("n and num_generators must be positive")

    @property
    def scalar_ring(self):
        return ring_from_tag(self.ring)

    def rng(self):
        # str seeds hash deterministically across runs (unlike tuples of str)
        return random.Random(f"{self.kind}|{self.n}|{self.ring}|{self.seed}|{self.num_generators}")


def random_scalar(rng, ring, height=HEIGHT, nonzero=False):
    """Small random ring element; rationals have numerator and denominator height <= ``height``."""
    while True:
        if ring.characteristic:
            x = ring.from_int(rng.randrange(ring.characteristic))
        elif ring.is_commutative:
            x = Rational(rng.randint(-height, height), rng.randint(1, height))
        else:
            h = min(height, 3)
            x = ring.from_coords([Rational(rng.randint(-h, h), rng.randint(1, 2)) for _ in range(4)])
        if x or not nonzero:
            return x


def _random_central(rng, ring, nonzero=False):
    if ring.is_commutative:
        return random_scalar(rng, ring, nonzero=nonzero)
    return ring.embed_central(random_scalar(rng, ring.center, nonzero=nonzero))


def random_conjugator(rng, n, ring, steps=None):
    """(P, P^-1) for P a product of random transvections and row swaps."""
    steps = 2 * n if steps is None else steps
    P = Matrix.identity(n, ring)
    Pinv = Matrix.identity(n, ring)
    if n == 1:
        c = _random_central(rng, ring, nonzero=True)
        return Matrix.scalar(1, c, ring), Matrix.scalar(1, ring.inv(c), ring)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        if rng.random() < 0.2:
            E = Matrix.identity(n, ring)
            rows = [list(r) for r in E.rows]
            rows[i], rows[j] = rows[j], rows[i]
            E = Matrix(rows, ring)
            P, Pinv = P * E, E * Pinv
            continue
        if ring.characteristic:
            c = ring.from_int(rng.randrange(1, ring.characteristic))
        elif ring.is_commutative:
            c = Rational(rng.choice([-2, -1, 1, 2]))
        else:
            c = ring.from_coords([Rational(rng.randint(-1, 1)) for _ in range(4)]) or ring.one
        E = Matrix.identity(n, ring) + Matrix.unit(n, i, j, ring, c)
        Einv = Matrix.identity(n, ring) - Matrix.unit(n, i, j, ring, c)
        P, Pinv = P * E, Einv * Pinv
    return P, Pinv


def _upper(rng, n, ring, diag, density=0.7):
    rows = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = diag[i]
        for j in range(i + 1, n):
            if rng.random() < density:
                rows[i][j] = random_scalar(rng, ring)
    return Matrix(rows, ring)


def _hidden_generator(rng, kind, n, ring):
    if kind == "nilpotent":
        return _upper(rng, n, ring, [ring.zero] * n)
    if kind == "unipotent":
        return _upper(rng, n, ring, [ring.one] * n)
    if kind in ("kaplansky_field", "kaplansky_quaternion"):
        c = _random_central(rng, ring, nonzero=rng.random() < 0.85)
        return _upper(rng, n, ring, [c] * n)
    if kind == "general":
        return _upper(rng, n, ring, [_random_central(rng, ring) for _ in range(n)])
    raise ValueError(kind)


def _irreducible_pair(n, ring):
    shift = Matrix([[ring.one if (i - j) % n == 1 else ring.zero for j in range(n)] for i in range(n)], ring)
    diag = Matrix([[ring.from_int(i) if i == j else ring.zero for j in range(n)] for i in range(n)], ring)
    return [shift, diag]


def gen_conjugated_flag_family(recipe):
    """Generators satisfying the recipe's hypothesis, plus the hidden certificate chain.

    The certificate is ``None`` for ``irreducible_pair``.
    """
    ring = recipe.scalar_ring
    rng = recipe.rng()
    n = recipe.n
    if recipe.kind == "tn":
        fam, chain = gen_tn_family(recipe)
        return fam.generators(), chain
    if recipe.kind == "irreducible_pair":
        if ring.characteristic and ring.characteristic < n:
            raise ValueError("irreducible_pair needs p >= n")
        hidden = _irreducible_pair(n, ring)
    else:
        hidden = [_hidden_generator(rng, recipe.kind, n, ring) for _ in range(recipe.num_generators)]
    P, Pinv = random_conjugator(rng, n, ring)
    gens = GeneratorSet([P * g * Pinv for g in hidden])
    chain = None if recipe.kind == "irreducible_pair" else Chain.from_basis(P)
    return gens, chain


def _commuting_strict_upper(ts, n, ring):
    """Basis (over the center) of strictly upper N with [T, N] = 0 for every T."""
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    units = ring.center_basis()
    unknowns = [Matrix.unit(n, i, j, ring, u) for i, j in positions for u in units]
    if not unknowns:
        return []
    cols = []
    for E in unknowns:
        col = []
        for T in ts:
            col.extend((T * E - E * T).center_coords())
        cols.append(col)
    K = kernel(Matrix.from_columns(cols, ring.center))
    out = []
    for v in K.basis:
        acc = Matrix.zeros(n, ring)
        for c, E in zip(v, unknowns):
            if c:
                acc = acc + E * ring.embed_central(c)
        out.append(acc)
    return out


def gen_tn_family(recipe, max_retries=100):
    """A T+N family (N in the commutant of the T set, nilpotent) and its hidden chain.

    T parts are upper triangular in the hidden basis with central diagonals over the
    quaternions.  Most draws tie T[0,0] = T[n-1,n-1], which keeps the commuting
    strictly-upper solution space nonzero while the T set stays non-commutative.
    """
    ring = recipe.scalar_ring
    rng = recipe.rng()
    n = recipe.n
    k = recipe.num_generators
    for _ in range(max_retries):
        ts = []
        for _ in range(k):
            diag = [_random_central(rng, ring) for _ in range(n)]
            if rng.random() < 0.8:
                diag[-1] = diag[0]
            ts.append(_upper(rng, n, ring, diag))
        sol = _commuting_strict_upper(ts, n, ring)
        if not sol:
            continue
        ns = []
        for _ in range(k):
            while True:
                acc = Matrix.zeros(n, ring)
                for B in sol:
                    acc = acc + B * ring.embed_central(random_scalar(rng, ring.center, height=3))
                if not acc.is_zero() or rng.random() < 0.1:
                    break
            ns.append(acc)
        P, Pinv = random_conjugator(rng, n, ring)
        fam = TnFamily([(P * T * Pinv, P * N * Pinv) for T, N in zip(ts, ns)])
        return fam, Chain.from_basis(P)
    raise RetriesExhausted(f"no nonzero commuting nilpotent found after {max_retries} draws")


# ---------------------------------------------------------------------------
# oracles


def _int_matrix(m):
    p = m.ring.characteristic
    return [[int(a) % p for a in row] for row in m.rows], p


def flag_enumeration_oracle(gens):
    """Brute force: does some complete flag of GF(p)^n stay invariant under every generator?"""
    gens = gens if isinstance(gens, GeneratorSet) else GeneratorSet(gens)
    p = gens.ring.characteristic
    n = gens.n
    if not p or n > 3 or p > 3:
        raise ValueError("flag enumeration is limited to GF(2), GF(3) and n <= 3")
    mats = [_int_matrix(m)[0] for m in gens.matrices]
    vectors = list(itertools.product(range(p), repeat=n))
    zero = (0,) * n

    def span_with(S, v):
        out = set(S)
        frontier = list(S)
        for c in range(1, p):
            w = tuple(c * x % p for x in v)
            for s in frontier:
                out.add(tuple((a + b) % p for a, b in zip(s, w)))
        return frozenset(out)

    subspaces = {frozenset([zero])}
    layer = {frozenset([zero])}
    by_dim = {0: layer}
    for d in range(1, n + 1):
        nxt = set()
        for S in layer:
            for v in vectors:
                if v not in S:
                    nxt.add(span_with(S, v))
        by_dim[d] = nxt
        subspaces |= nxt
        layer = nxt

    def apply(m, v):
        return tuple(sum(m[i][j] * v[j] for j in range(n)) % p for i in range(n))

    def invariant(S):
        return all(apply(m, v) in S for m in mats for v in S)

    inv = {d: [S for S in by_dim[d] if invariant(S)] for d in range(1, n)}

    def extend(prev, d):
        if d == n:
            return True
        return any(prev <= S and extend(S, d + 1) for S in inv[d])

    return extend(frozenset([zero]), 1)


def _cofactor_char_poly(rows, one, zero):
    """det(xI - A) by Laplace expansion over polynomial entries (constant term first)."""
    n = len(rows)
    entries = [[([-a, one] if i == j else [-a]) for j, a in enumerate(r)] for i, r in enumerate(rows)]

    def pmul(p, q):
        out = [zero] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
        return out

    def padd(p, q, sign):
        out = [zero] * max(len(p), len(q))
        for i, a in enumerate(p):
            out[i] = out[i] + a
        for i, b in enumerate(q):
            out[i] = out[i] + sign * b
        return out

    def det(mat):
        if len(mat) == 1:
            return mat[0][0]
        total = [zero]
        for j in range(len(mat)):
            minor = [row[:j] + row[j + 1:] for row in mat[1:]]
            total = padd(total, pmul(mat[0][j], det(minor)), 1 if j % 2 == 0 else -1)
        return total

    out = det(entries) if n else [one]
    return (out + [zero] * (n + 1))[: n + 1]


def spectrum_oracle(A):
    """Singleton-spectrum decision from a cofactor characteristic polynomial, n <= 4."""
    n = A.n
    if n > 4:
        raise ValueError("spectrum_oracle is limited to n <= 4")
    ring = A.ring
    p = ring.characteristic
    if not ring.is_commutative:
        raise ValueError("spectrum_oracle needs a field")
    if p:
        rows, _ = _int_matrix(A)
        cp = [c % p for c in _cofactor_char_poly(rows, 1, 0)]
        for lam in range(p):
            target = [comb(n, k) * (-lam) ** (n - k) % p for k in range(n + 1)]
            if cp == target:
                return ring.from_int(lam)
        return None
    rows = [[Rational(a) for a in r] for r in A.rows]
    cp = _cofactor_char_poly(rows, Rational(1), Rational(0))
    lam = -cp[n - 1] / n
    target = [comb(n, k) * (-lam) ** (n - k) for k in range(n + 1)]
    return lam if cp == target else None
