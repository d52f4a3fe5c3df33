"""Dense univariate polynomials over a commutative field, constant term first.

Coefficients are ring elements (rationals or GF(p) residues).  Only the few
operations the spectrum predicates need are provided: arithmetic, division with
remainder, gcd, and root search in the base field.
"""
from __future__ import annotations

from .scalars import Rational
from math import lcm

__all__ = [
    "trim",
    "degree",
    "padd",
    "psub",
    "pmul",
    "pscale",
    "pdivmod",
    "pgcd",
    "pderiv",
    "peval",
    "pmonic",
    "linear_power",
    "rational_roots",
    "field_roots",
    "root_multiplicity",
    "format_poly",
]

def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p

def degree(p):
    return len(trim(p)) - 1

def padd(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else None
        b = q[i] if i < len(q) else None
        out.append(a + b if a is not None and b is not None else (a if b is None else b))
    return trim(out)

def pscale(p, c):
    return trim([c * a for a in p])

def psub(p, q):
    return padd(p, [-b for b in q])

def pmul(p, q):
    if not p or not q:
        return []
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)

def pdivmod(p, q, inv):
    """Divide p by nonzero q; ``inv`` inverts a field element."""
    p = trim(p)
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = inv(q[-1])
    quot = [q[0] * 0] * max(len(p) - len(q) + 1, 0)
    rem = list(p)
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        c = rem[-1] * lead_inv
        quot[shift] = c
        for i, b in enumerate(q):
            rem[shift + i] = rem[shift + i] - c * b
        rem = trim(rem[:-1]) if rem[-1] == 0 else trim(rem)
    return trim(quot), trim(rem)

def pmonic(p, inv):
    p = trim(p)
    if not p:
        return p
    c = inv(p[-1])
    return [c * a for a in p]

def pgcd(p, q, inv):
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    a, b = trim(p), trim(q)
    while b:
        _, r = pdivmod(a, b, inv)
        a, b = b, r
    return pmonic(a, inv)

def pderiv(p):
    return trim([p[i] * i for i in range(1, len(p))])

def peval(p, x):
    acc = x * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc

def linear_power(lam, n, one):
    """Coefficients of (x - lam)^n."""
    out = [one]
    for _ in range(n):
        out = pmul(out, [-lam, one])
    return out

def root_multiplicity(p, r, inv, one):
    m = 0
    p = trim(p)
    while p and peval(p, r) == 0:
        p, _ = pdivmod(p, [-r, one], inv)
        m += 1
    return m

def _divisors(k):
    from sympy import divisors

    return divisors(abs(k))

def rational_roots(p):
    """Distinct rational roots of a polynomial with rational coefficients, sorted."""
    p = [Rational(c) for c in trim(p)]
    if len(p) <= 1:
        return []
    roots = set()
    while p and p[0] == 0:
        roots.add(Rational(0))
        p = p[1:]
    if len(p) <= 1:
        return sorted(roots)
    # square-free part keeps the candidate search small
    inv = lambda c: 1 / c  # noqa: E731
    g = pgcd(p, pderiv(p), inv)
    if len(g) > 1:
        p, _ = pdivmod(p, g, inv)
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    a0, an = ints[0], ints[-1]
    for num in _divisors(a0):
        for dd in _divisors(an):
            for cand in (Rational(num, dd), Rational(-num, dd)):
                if cand not in roots and peval(p, cand) == 0:
                    roots.add(cand)
    return sorted(roots)

def field_roots(p, ring):
    """Distinct roots of p lying in the coefficient field ``ring`` (QQ or GF(p))."""
    if ring.characteristic == 0:
        return [ring.from_int(r) for r in rational_roots(p)]
    return [x for x in ring.elements() if peval(p, x) == 0]

def format_poly(p, fmt=str, var="x"):
    p = trim(p)
    if not p:
        return "0"
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = fmt(c)
        if mono and cs == "1":
            terms.append(mono)
        elif mono and cs == "-1":
            terms.append("-" + mono)
        else:
            terms.append(cs + mono)
    s = " + ".join(terms)
    return s.replace("+ -", "- ")
