"""Semigroup closures, algebra spans, commutants and ideal spans of generator sets.

Spans are linear over the ring's center: the field itself for QQ and GF(p), the
rationals for the quaternions (so a quaternion n x n matrix has 4n^2 coordinates).
Span bases keep the actual products that were found, together with the word in
the generators producing each one, so witnesses can name their origin.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .linalg import Matrix, kernel

__all__ = [
    "GeneratorSet",
    "ClosureResult",
    "SpanBuilder",
    "semigroup_closure",
    "algebra_span",
    "algebra_span_words",
    "commutant",
    "ideal_span",
    "ideal_span_words",
    "format_word",
    "is_commutative_family",
]

DEFAULT_CLOSURE_BOUND = 10_000


def format_word(word, labels=None):
    """Render a word (tuple of generator indices) as ``g1*g2``; the empty word is ``I``."""
    if not word:
        return "I"
    if isinstance(word, str):
        return word
    if labels is None:
        return "*".join(f"g{i + 1}" for i in word)
    return "*".join(labels[i] for i in word)


@dataclass
class GeneratorSet:
    matrices: list
    labels: list = None

    def __post_init__(self):
        self.matrices = list(self.matrices)
        if not self.matrices:
            raise ValueError("a generator set needs at least one matrix")
        first = self.matrices[0]
        for m in self.matrices:
            if m.nrows != m.ncols:
                raise ValueError("generators must be square")
            if m.nrows != first.nrows:
                raise ValueError("generators must share one dimension")
            if m.ring != first.ring:
                raise ValueError("generators must share one scalar ring")
        if self.labels is None:
            self.labels = [f"g{i + 1}" for i in range(len(self.matrices))]
        elif len(self.labels) != len(self.matrices):
            raise ValueError("one label per generator")

    @property
    def n(self):
        return self.matrices[0].nrows

    @property
    def ring(self):
        return self.matrices[0].ring

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def word(self, word):
        return format_word(word, self.labels)


@dataclass
class ClosureResult:
    elements: list
    complete: bool
    bound: int
    words: list = field(default_factory=list)
    found: int = None  # index of the first element matching ``stop``, if any


def semigroup_closure(gens, bound=DEFAULT_CLOSURE_BOUND, stop=None):
    """Breadth-first product closure with exact deduplication.

    Elements are discovered by word length, then by generator index, so the
    enumeration (and any witness drawn from it) is deterministic.  If ``stop`` is
    given, enumeration ends at the first element for which it returns true; that
    element's index is ``found`` and the result is marked incomplete.
    """
    if not isinstance(gens, GeneratorSet):
        gens = GeneratorSet(gens)
    if bound < 1:
        raise ValueError("closure bound must be positive")
    seen = {}
    order = []

    def result(complete, found=None):
        return ClosureResult(order, complete, bound, [seen[m] for m in order], found)

    def admit(m, word):
        seen[m] = word
        order.append(m)
        return stop is not None and stop(m)

    frontier = []
    for i, g in enumerate(gens.matrices):
        if g not in seen:
            if len(order) >= bound:
                return result(False)
            if admit(g, (i,)):
                return result(False, len(order) - 1)
            frontier.append(g)
    while frontier:
        nxt = []
        for a in frontier:
            wa = seen[a]
            for i, g in enumerate(gens.matrices):
                p = a * g
                if p in seen:
                    continue
                if len(order) >= bound:
                    return result(False)
                if admit(p, wa + (i,)):
                    return result(False, len(order) - 1)
                nxt.append(p)
        frontier = nxt
    return result(True)


class _Echelon:
    """Incremental row echelon basis for membership tests in coordinate space."""

    def __init__(self, ring):
        self.ring = ring
        self.rows = []  # (pivot, row) with row[pivot] == 1

    def reduce(self, v):
        v = list(v)
        for p, r in self.rows:
            f = v[p]
            if f:
                v = [a - f * b for a, b in zip(v, r)]
        return v

    def add(self, v):
        v = self.reduce(v)
        p = next((i for i, a in enumerate(v) if a), None)
        if p is None:
            return False
        s = self.ring.inv(v[p])
        self.rows.append((p, [a * s for a in v]))
        return True

    def contains(self, v):
        return not any(self.reduce(v))

    def __len__(self):
        return len(self.rows)


class SpanBuilder:
    """Linear span (over the center) of matrices, keeping the spanning elements found."""

    def __init__(self, n, ring):
        self.n = n
        self.ring = ring
        self.elements = []
        self.words = []
        self._ech = _Echelon(ring.center)

    def add(self, m, word=None):
        if self._ech.add(m.center_coords()):
            self.elements.append(m)
            self.words.append(word)
            return True
        return False

    def contains(self, m):
        return self._ech.contains(m.center_coords())

    @property
    def dim(self):
        return len(self.elements)


def algebra_span_words(gens, unital=False, start=()):
    """Like :func:`algebra_span` but returns ``(elements, words)``.

    ``start`` seeds the span with extra ``(matrix, word)`` pairs.
    """
    if not isinstance(gens, GeneratorSet):
        gens = GeneratorSet(gens)
    n, ring = gens.n, gens.ring
    span = SpanBuilder(n, ring)
    if unital:
        span.add(Matrix.identity(n, ring), ())
    for m, w in start:
        span.add(m, w)
    for i, g in enumerate(gens.matrices):
        span.add(g, (i,))
    queue = deque(range(span.dim))
    while queue:
        k = queue.popleft()
        a, wa = span.elements[k], span.words[k]
        for j in range(span.dim):
            b, wb = span.elements[j], span.words[j]
            for prod, w in ((a * b, _cat(wa, wb)), (b * a, _cat(wb, wa))):
                if span.add(prod, w):
                    queue.append(span.dim - 1)
    return span.elements, span.words


def _cat(u, v):
    if isinstance(u, tuple) and isinstance(v, tuple):
        return u + v
    return None


def algebra_span(gens, unital=False):
    """Linear basis of the (unital) algebra generated by ``gens`` over the center."""
    return algebra_span_words(gens, unital)[0]


def _center_unit_matrices(n, ring):
    units = ring.center_basis()
    out = []
    for i in range(n):
        for j in range(n):
            for u in units:
                out.append(Matrix.unit(n, i, j, ring, u))
    return out


def commutant(gens):
    """Basis of {X : X G = G X for every generator G}, over the center."""
    if not isinstance(gens, GeneratorSet):
        gens = GeneratorSet(gens)
    n, ring = gens.n, gens.ring
    center = ring.center
    units = _center_unit_matrices(n, ring)
    columns = []
    for E in units:
        col = []
        for G in gens.matrices:
            col.extend((E * G - G * E).center_coords())
        columns.append(col)
    system = Matrix.from_columns(columns, center)
    K = kernel(system)
    return [Matrix.from_center_coords(v, n, ring) for v in K.basis]


def ideal_span_words(basis, seed, words=None, seed_word=None):
    """Span of {seed, a*seed, seed*b, a*seed*b} for a, b in ``basis``; returns (elements, words)."""
    n, ring = seed.nrows, seed.ring
    words = words if words is not None else [None] * len(basis)
    span = SpanBuilder(n, ring)
    if seed.is_zero():
        return [], []
    span.add(seed, seed_word)
    left = [(a * seed, _cat(wa, seed_word)) for a, wa in zip(basis, words)]
    for m, w in left:
        span.add(m, w)
    for b, wb in zip(basis, words):
        span.add(seed * b, _cat(seed_word, wb))
    for m, w in left:
        for b, wb in zip(basis, words):
            span.add(m * b, _cat(w, wb))
    return span.elements, span.words


def ideal_span(algebra_basis, seed):
    """Linear basis of the two-sided ideal generated by ``seed`` in the span of ``algebra_basis``."""
    return ideal_span_words(algebra_basis, seed)[0]


def is_commutative_family(mats):
    for i, a in enumerate(mats):
        for b in mats[i + 1:]:
            if a * b != b * a:
                return False
    return True
