"""Dense exact linear algebra over a :class:`~semitri.scalars.ScalarRing`.

Vectors are columns (tuples of ring elements) forming a *right* vector space;
matrices act on the left.  Over the quaternions this fixes the side of every
operation: scalars multiply vectors on the right, elimination multiplies rows of
a matrix on the left.  Over commutative fields the distinction is invisible.
"""
from __future__ import annotations

from . import poly as P
from .scalars import QuaternionRing

__all__ = [
    "Matrix",
    "Subspace",
    "Chain",
    "NotInvariant",
    "UnsupportedRing",
    "rref",
    "kernel",
    "solve",
    "inverse",
    "extend_to_basis",
    "restrict",
    "quotient",
    "is_nilpotent",
    "is_unipotent",
    "char_poly",
    "eigenvalues_in_field",
    "singleton_spectrum",
    "central_spectrum_quaternion",
    "real_representation",
    "rational_eigenvalues_quaternion",
]


class NotInvariant(ValueError):
    """A subspace is not mapped into itself; ``vector`` is a basis vector that leaves it."""

    def __init__(self, message, vector=None, subspace=None):
        super().__init__(message)
        self.vector = vector
        self.subspace = subspace


class UnsupportedRing(TypeError):
    pass


class Matrix:
    """Immutable dense matrix over one ring.  Rectangular shapes are allowed."""

    __slots__ = ("rows", "ring", "nrows", "ncols", "_hash")

    def __init__(self, rows, ring):
        self.rows = tuple(tuple(r) for r in rows)
        self.ring = ring
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        self._hash = None

    @classmethod
    def from_entries(cls, rows, ring):
        """Build from ints, rationals or scalar strings."""
        return cls([[ring.coerce(x) for x in r] for r in rows], ring)

    @classmethod
    def identity(cls, n, ring):
        z, o = ring.zero, ring.one
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], ring)

    @classmethod
    def zeros(cls, nrows, ring, ncols=None):
        ncols = nrows if ncols is None else ncols
        return cls([[ring.zero] * ncols for _ in range(nrows)], ring)

    @classmethod
    def unit(cls, n, i, j, ring, value=None):
        """E_ij (zero-based indices) scaled by ``value``."""
        rows = [[ring.zero] * n for _ in range(n)]
        rows[i][j] = ring.one if value is None else value
        return cls(rows, ring)

    @classmethod
    def scalar(cls, n, c, ring):
        z = ring.zero
        return cls([[c if i == j else z for j in range(n)] for i in range(n)], ring)

    @classmethod
    def from_columns(cls, cols, ring, nrows=None):
        cols = list(cols)
        if not cols:
            return cls([[] for _ in range(nrows or 0)], ring)
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))], ring)

    @property
    def n(self):
        if self.nrows != self.ncols:
            raise ValueError("matrix is not square")
        return self.nrows

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __add__(self, other):
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring)

    def __sub__(self, other):
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ring)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale_right(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
        cols = other.columns()
        zero = self.ring.zero
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out, self.ring)

    def __pow__(self, k):
        result = Matrix.identity(self.n, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale_right(self, c):
        return Matrix([[a * c for a in r] for r in self.rows], self.ring)

    def scale_left(self, c):
        return Matrix([[c * a for a in r] for r in self.rows], self.ring)

    def apply(self, v):
        zero = self.ring.zero
        out = []
        for r in self.rows:
            acc = zero
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def is_zero(self):
        return all(not a for r in self.rows for a in r)

    def is_scalar(self):
        """True if the matrix equals c*I for a central c."""
        if self.nrows != self.ncols:
            return False
        c = self.rows[0][0] if self.rows else self.ring.zero
        if not self.ring.is_central(c):
            return False
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if (a != c) if i == j else bool(a):
                    return False
        return True

    def trace(self):
        acc = self.ring.zero
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def diagonal(self):
        return [self.rows[i][i] for i in range(min(self.nrows, self.ncols))]

    def block(self, r0, r1, c0, c1):
        return Matrix([r[c0:c1] for r in self.rows[r0:r1]], self.ring)

    def transpose(self):
        if not self.ring.is_commutative:
            raise UnsupportedRing("transpose is only meaningful over commutative rings")
        return Matrix([list(c) for c in self.columns()], self.ring)

    def stack(self, other):
        return Matrix(self.rows + other.rows, self.ring)

    def center_coords(self):
        """Flattened coordinates over the ring's center (n^2, or 4n^2 for quaternions)."""
        coords = self.ring.coords
        return tuple(c for r in self.rows for a in r for c in coords(a))

    @classmethod
    def from_center_coords(cls, coords, n, ring):
        d = ring.center_dim
        it = [ring.from_coords(coords[k:k + d]) for k in range(0, len(coords), d)]
        return cls([it[i * n:(i + 1) * n] for i in range(n)], ring)

    def to_strings(self):
        fmt = self.ring.format
        return [[fmt(a) for a in r] for r in self.rows]

    def __repr__(self):
        return "Matrix(%s)" % self.to_strings()

    def pretty(self):
        cells = self.to_strings()
        if not cells:
            return "[]"
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)


# ---------------------------------------------------------------------------
# elimination


def _as_rows(A):
    if isinstance(A, Matrix):
        return [list(r) for r in A.rows], A.ring
    raise TypeError("expected a Matrix")


def rref(A):
    """Row-reduced echelon form using left row operations.

    Returns ``(R, pivots, rank)``; the right null space of R equals that of A.
    """
    rows, ring = _as_rows(A)
    inv = ring.inv
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = inv(rows[r][c])
        rows[r] = [s * a for a in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return Matrix(rows, ring), pivots, len(pivots)


def kernel(A):
    """Right null space {x : A x = 0} as a canonical Subspace."""
    R, pivots, rank = rref(A)
    ring = A.ring
    nc = A.ncols
    free = [c for c in range(nc) if c not in set(pivots)]
    vecs = []
    for f in free:
        x = [ring.zero] * nc
        x[f] = ring.one
        for i, pc in enumerate(pivots):
            x[pc] = -R.rows[i][f]
        vecs.append(tuple(x))
    return Subspace.span(vecs, nc, ring)


def solve(A, b):
    """One solution x of A x = b, or None if the system is inconsistent."""
    ring = A.ring
    aug = Matrix([list(r) + [bi] for r, bi in zip(A.rows, b)], ring)
    R, pivots, _ = rref(aug)
    nc = A.ncols
    if nc in pivots:
        return None
    x = [ring.zero] * nc
    for i, pc in enumerate(pivots):
        x[pc] = R.rows[i][nc]
    return tuple(x)


def inverse(A):
    n = A.n
    ring = A.ring
    aug = Matrix([list(r) + list(e) for r, e in zip(A.rows, Matrix.identity(n, ring).rows)], ring)
    R, pivots, _ = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R.block(0, n, n, 2 * n)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Subspace of the column space in reduced column-echelon form.

    Each basis vector has a 1 at its pivot row, zeros above it, and every other
    basis vector vanishes at that row.  The form is unique per subspace, so ``==``
    is subspace equality.
    """

    __slots__ = ("n", "ring", "basis", "pivots")

    def __init__(self, n, ring, basis, pivots):
        self.n = n
        self.ring = ring
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors, n, ring):
        inv = ring.inv
        work = [list(v) for v in vectors if any(v)]
        done = []
        pivots = []
        for pos in range(n):
            k = next((i for i, w in enumerate(work) if w[pos]), None)
            if k is None:
                continue
            v = work.pop(k)
            s = inv(v[pos])
            v = [a * s for a in v]
            for w in work:
                if w[pos]:
                    f = w[pos]
                    w[:] = [a - b * f for a, b in zip(w, v)]
            for idx, u in enumerate(done):
                if u[pos]:
                    f = u[pos]
                    done[idx] = [a - b * f for a, b in zip(u, v)]
            done.append(v)
            pivots.append(pos)
            work = [w for w in work if any(w)]
            if not work:
                break
        return cls(n, ring, tuple(tuple(v) for v in done), tuple(pivots))

    @classmethod
    def zero(cls, n, ring):
        return cls(n, ring, (), ())

    @classmethod
    def full(cls, n, ring):
        return cls(n, ring, Matrix.identity(n, ring).rows, tuple(range(n)))

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        fmt = self.ring.format
        vecs = ", ".join("(" + ", ".join(fmt(a) for a in v) + ")" for v in self.basis)
        return f"Subspace(dim={self.dim}, span{{{vecs}}})"

    def residual(self, v):
        r = list(v)
        for b, p in zip(self.basis, self.pivots):
            f = r[p]
            if f:
                r = [a - bb * f for a, bb in zip(r, b)]
        return tuple(r)

    def contains(self, v):
        return not any(self.residual(v))

    def coords(self, v):
        """Right coordinates of v (assumed in the subspace) in the canonical basis."""
        return tuple(v[p] for p in self.pivots)

    def is_subspace_of(self, other):
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other):
        return Subspace.span(list(self.basis) + list(other.basis), self.n, self.ring)

    def intersect(self, other):
        if not self.basis or not other.basis:
            return Subspace.zero(self.n, self.ring)
        k = self.dim
        rows = [list(self.basis_row(i)) + [-a for a in other.basis_row(i)] for i in range(self.n)]
        K = kernel(Matrix(rows, self.ring))
        zero = self.ring.zero
        vecs = []
        for x in K.basis:
            v = [zero] * self.n
            for j in range(k):
                if x[j]:
                    v = [a + b * x[j] for a, b in zip(v, self.basis[j])]
            vecs.append(v)
        return Subspace.span(vecs, self.n, self.ring)

    def basis_row(self, i):
        return tuple(b[i] for b in self.basis)

    def basis_matrix(self):
        return Matrix([list(self.basis_row(i)) for i in range(self.n)], self.ring)

    def image(self, A):
        return Subspace.span([A.apply(b) for b in self.basis], self.n, self.ring)

    def is_invariant(self, A):
        return all(self.contains(A.apply(b)) for b in self.basis)

    def first_escape(self, A):
        """A basis vector b with A b outside the subspace, or None."""
        for b in self.basis:
            if not self.contains(A.apply(b)):
                return b
        return None

    def complement_in(self, other):
        """Deterministic basis vectors of ``other`` extending this subspace's basis."""
        cur = self
        extra = []
        for b in other.basis:
            if not cur.contains(b):
                extra.append(b)
                cur = cur + Subspace.span([b], self.n, self.ring)
        return extra

    def to_strings(self):
        fmt = self.ring.format
        return [[fmt(a) for a in v] for v in self.basis]


def extend_to_basis(U):
    """Invertible P whose first dim(U) columns are U's canonical basis.

    The complement columns are the coordinate vectors at non-pivot rows.
    """
    ring = U.ring
    cols = list(U.basis)
    piv = set(U.pivots)
    for i in range(U.n):
        if i not in piv:
            e = [ring.zero] * U.n
            e[i] = ring.one
            cols.append(tuple(e))
    return Matrix.from_columns(cols, ring)


def restrict(A, U):
    """Matrix of A restricted to the invariant subspace U, in U's canonical basis."""
    b = U.first_escape(A)
    if b is not None:
        raise NotInvariant("subspace is not invariant", vector=b, subspace=U)
    cols = [U.coords(A.apply(v)) for v in U.basis]
    return Matrix.from_columns(cols, A.ring, nrows=U.dim) if cols else Matrix([], A.ring)


def quotient(A, M, N=None):
    """Matrix of the map induced by A on N/M (N defaults to the whole space).

    The basis of N/M is the image of ``M.complement_in(N)``.
    """
    ring = A.ring
    if N is None:
        N = Subspace.full(A.n, ring)
    if not M.is_subspace_of(N):
        raise ValueError("quotient needs M contained in N")
    for S in (M, N):
        b = S.first_escape(A)
        if b is not None:
            raise NotInvariant("subspace is not invariant", vector=b, subspace=S)
    comp = M.complement_in(N)
    if not comp:
        return Matrix([], ring)
    basis = Matrix.from_columns(list(M.basis) + comp, ring)
    k = M.dim
    cols = []
    for c in comp:
        x = solve(basis, A.apply(c))
        cols.append(x[k:])
    return Matrix.from_columns(cols, ring)


class Chain:
    """Triangularizing chain {0} = V_0 < V_1 < ... < V_n with dim V_j = j."""

    __slots__ = ("subspaces",)

    def __init__(self, subspaces):
        subspaces = list(subspaces)
        if not subspaces:
            raise ValueError("empty chain")
        n = subspaces[-1].n
        if len(subspaces) != n + 1:
            raise ValueError(f"chain needs {n + 1} subspaces, got {len(subspaces)}")
        for j, V in enumerate(subspaces):
            if V.dim != j:
                raise ValueError(f"V_{j} has dimension {V.dim}")
            if j and not subspaces[j - 1].is_subspace_of(V):
                raise ValueError(f"V_{j - 1} is not contained in V_{j}")
        self.subspaces = subspaces

    @property
    def n(self):
        return self.subspaces[-1].n

    @property
    def ring(self):
        return self.subspaces[-1].ring

    @classmethod
    def from_basis(cls, P):
        """V_j spanned by the first j columns of the invertible matrix P."""
        cols = P.columns()
        return cls([Subspace.span(cols[:j], P.nrows, P.ring) for j in range(len(cols) + 1)])

    @classmethod
    def standard(cls, n, ring):
        return cls.from_basis(Matrix.identity(n, ring))

    def adapted_basis(self):
        """Invertible matrix whose first j columns span V_j for each j."""
        cols = []
        for prev, cur in zip(self.subspaces, self.subspaces[1:]):
            cols.extend(prev.complement_in(cur))
        return Matrix.from_columns(cols, self.ring)

    def transport(self, Pm):
        """Image chain under the invertible matrix Pm."""
        return Chain([V.image(Pm) for V in self.subspaces])

    def __eq__(self, other):
        return isinstance(other, Chain) and self.subspaces == other.subspaces

    def __len__(self):
        return len(self.subspaces)

    def __iter__(self):
        return iter(self.subspaces)

    def __repr__(self):
        return "Chain(" + " < ".join(repr(V) for V in self.subspaces[1:]) + ")"


# ---------------------------------------------------------------------------
# spectra


def is_nilpotent(A):
    if A.n == 0:
        return True
    return (A ** A.n).is_zero()


def is_unipotent(A):
    return is_nilpotent(A - Matrix.identity(A.n, A.ring))


def _require_field(A):
    if not A.ring.is_commutative:
        raise UnsupportedRing(f"{A.ring.name} is not a field")


def char_poly(A):
    """det(xI - A), constant term first, by Berkowitz's division-free recursion."""
    _require_field(A)
    ring = A.ring
    one, zero = ring.one, ring.zero
    n = A.n
    if n == 0:
        return [one]
    sub = [list(r) for r in A.rows]
    transforms = []
    for m in range(n, 1, -1):
        k = m - 1
        R = [-sub[k][j] for j in range(k)]
        C = [sub[i][k] for i in range(k)]
        inner = [row[:k] for row in sub[:k]]
        a = -sub[k][k]
        items = [C]
        for _ in range(m - 2):
            prev = items[-1]
            items.append([sum((x * y for x, y in zip(row, prev)), zero) for row in inner])
        vals = [sum((x * y for x, y in zip(R, B)), zero) for B in items]
        col = [one, a] + vals
        T = [[zero] * m for _ in range(m + 1)]
        for i in range(m):
            for r in range(i, m + 1):
                T[r][i] = col[r - i]
        transforms.append(T)
        sub = inner
    coeffs = [one, -sub[0][0]]
    for T in reversed(transforms):
        coeffs = [sum((t * c for t, c in zip(row, coeffs)), zero) for row in T]
    return P.trim(list(reversed(coeffs)))


def eigenvalues_in_field(A):
    """Roots of the characteristic polynomial in the base field.

    Returns ``(pairs, split)`` with ``pairs`` a list of (eigenvalue, algebraic
    multiplicity) in increasing order and ``split`` true iff the multiplicities
    sum to n.
    """
    cp = char_poly(A)
    ring = A.ring
    roots = P.field_roots(cp, ring)
    pairs = [(r, P.root_multiplicity(cp, r, ring.inv, ring.one)) for r in roots]
    return pairs, sum(m for _, m in pairs) == A.n


def singleton_spectrum(A):
    """The unique eigenvalue of A if its spectrum over the algebraic closure is {lam}, lam in F."""
    _require_field(A)
    ring = A.ring
    n = A.n
    if n == 0:
        return None
    p = ring.characteristic
    identity = Matrix.identity(n, ring)
    if p == 0 or n % p:
        lam = A.trace() * ring.inv(ring.from_int(n))
        return lam if is_nilpotent(A - identity * lam) else None
    for lam in ring.elements():
        if is_nilpotent(A - identity * lam):
            return lam
    return None


def _matrix_poly_power(A, n):
    """Entries of (A - xI)^n as polynomials in a central variable x (quaternion coefficients)."""
    ring = A.ring
    size = A.n
    base = [[[A.rows[i][j]] + ([-ring.one] if i == j else []) for j in range(size)] for i in range(size)]
    base = [[P.trim(e) for e in r] for r in base]
    acc = [[[ring.one] if i == j else [] for j in range(size)] for i in range(size)]
    for _ in range(n):
        new = []
        for i in range(size):
            row = []
            for j in range(size):
                e = []
                for k in range(size):
                    e = P.padd(e, _qpmul(acc[i][k], base[k][j]))
                row.append(e)
            new.append(row)
        acc = new
    return acc


def _qpmul(p, q):
    # the variable is central, so coefficient order follows operand order
    if not p or not q:
        return []
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return P.trim(out)


def central_spectrum_quaternion(A):
    """The rational c with A - cI nilpotent, for a quaternion matrix A, or None."""
    if not isinstance(A.ring, QuaternionRing):
        raise UnsupportedRing("central_spectrum_quaternion needs the quaternion ring")
    n = A.n
    if n == 0:
        return None
    entries = _matrix_poly_power(A, n)
    inv = lambda c: 1 / c  # noqa: E731
    g = []
    for r in entries:
        for e in r:
            for comp in range(4):
                cp = P.trim([A.ring.coords(c)[comp] for c in e])
                if cp:
                    g = P.pgcd(g, cp, inv) if g else P.pmonic(cp, inv)
    identity = Matrix.identity(n, A.ring)
    for c in P.rational_roots(g):
        if is_nilpotent(A - identity * A.ring.embed_central(c)):
            return c
    return None


def real_representation(A):
    """The matrix of x -> A x on H^n viewed as QQ^(4n), coordinates (a, b, c, d) per entry."""
    from .scalars import QQ

    ring = A.ring
    n = A.n
    units = ring.center_basis()
    cols = []
    for j in range(n):
        for u in units:
            v = [ring.zero] * n
            v[j] = u
            w = A.apply(v)
            cols.append([c for x in w for c in ring.coords(x)])
    return Matrix.from_columns(cols, QQ)


def rational_eigenvalues_quaternion(A):
    """Rational lam with A - lam I singular over the quaternions, increasing."""
    cp = char_poly(real_representation(A))
    return P.rational_roots(cp)
