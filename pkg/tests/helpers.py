"""Small constructors shared by the test modules."""
import random

from hypothesis import strategies as st

from semitri.linalg import Matrix
from semitri.scalars import HH, QQ, PrimeField, Quaternion, Rational


def M(rows, ring=QQ):
    return Matrix.from_entries(rows, ring)


def E(n, i, j, ring=QQ, value=None):
    """Matrix unit with 1-based indices."""
    return Matrix.unit(n, i - 1, j - 1, ring, value)


def I(n, ring=QQ):  # noqa: E741, E743
    return Matrix.identity(n, ring)


def diag(*vals, ring=QQ):
    n = len(vals)
    return M([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)], ring)


def rand_matrix(rng, n, ring, height=3, zero_prob=0.3, m=None):
    m = n if m is None else m
    rows = []
    for _ in range(n):
        row = []
        for _ in range(m):
            if rng.random() < zero_prob:
                row.append(ring.zero)
            elif ring.characteristic:
                row.append(ring.from_int(rng.randrange(ring.characteristic)))
            elif ring.is_commutative:
                row.append(Rational(rng.randint(-height, height), rng.randint(1, 2)))
            else:
                row.append(Quaternion(*(rng.randint(-2, 2) for _ in range(4))))
        rows.append(row)
    return Matrix(rows, ring)


def rand_invertible(rng, n, ring):
    while True:
        P = rand_matrix(rng, n, ring, zero_prob=0.1)
        try:
            from semitri.linalg import inverse

            return P, inverse(P)
        except ZeroDivisionError:
            continue


rationals = st.builds(Rational, st.integers(-20, 20), st.integers(1, 12))
quaternions = st.builds(Quaternion, rationals, rationals, rationals, rationals)
GF5 = PrimeField(5)
RINGS = {"QQ": QQ, "GF5": GF5, "HH": HH}


def seeded(seed):
    return random.Random(seed)
