"""Exact scalar rings: the rationals, prime fields GF(p) and the rational quaternions.

Every computation runs over one :class:`ScalarRing`.  Ring elements support the
usual ``+ - *`` operators and equality/hashing; inversion goes through
:meth:`ScalarRing.inv` so that the three rings share a single interface.

Rationals are ``gmpy2.mpq`` values (canonical, hash-compatible with
:class:`fractions.Fraction`).  Prime-field elements are
instances of a class created per modulus, so mixing two moduli fails loudly
instead of silently producing garbage.
"""
from __future__ import annotations

import numbers
import re
from functools import lru_cache

from gmpy2 import mpq as Rational

__all__ = [
    "Rational",
    "ScalarParseError",
    "ScalarRing",
    "RationalRing",
    "PrimeField",
    "QuaternionRing",
    "Quaternion",
    "QQ",
    "HH",
    "is_prime",
    "ring_from_tag",
]


class ScalarParseError(ValueError):
    """Raised when a scalar string does not match the ring's textual syntax."""

    def __init__(self, token, ring_name, reason=""):
        self.token = token
        self.ring_name = ring_name
        msg = f"cannot parse {token!r} as a {ring_name} scalar"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def _parse_rational(token, ring_name="rational"):
    s = token.strip()
    m = _RATIONAL_RE.match(s)
    if not m:
        raise ScalarParseError(token, ring_name)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ScalarParseError(token, ring_name, "zero denominator")
    return Rational(num, den)


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class ScalarRing:
    """Common interface of the three supported division rings.

    Subclasses provide ``zero``, ``one``, ``characteristic`` and the hooks below.
    ``center`` is the commutative field over which algebra spans and commutants
    are computed; ``center_dim`` is the dimension of the ring over it.
    """

    name = "abstract"
    characteristic = 0
    is_commutative = True
    center_dim = 1

    @property
    def center(self):
        return self

    def from_int(self, k):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def is_central(self, x):
        return True

    def parse(self, token):
        raise NotImplementedError

    def format(self, x):
        raise NotImplementedError

    def coerce(self, x):
        """Turn ints, rationals or strings into ring elements."""
        if isinstance(x, str):
            return self.parse(x)
        return self.from_int(x)

    # Coordinates over the center; fields are one-dimensional over themselves.
    def coords(self, x):
        return (x,)

    def from_coords(self, cs):
        return cs[0]

    def center_basis(self):
        """Basis of the ring over its center, as ring elements."""
        return [self.one]

    def embed_central(self, c):
        """Map an element of the center into the ring."""
        return c

    def tag(self):
        return self.name

    def __repr__(self):
        return f"<{type(self).__name__} {self.tag()}>"


class RationalRing(ScalarRing):
    name = "rational"
    characteristic = 0

    def __init__(self):
        self.zero = Rational(0)
        self.one = Rational(1)

    def from_int(self, k):
        return Rational(k)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Rational(x)

    def parse(self, token):
        return _parse_rational(token)

    def format(self, x):
        return str(Rational(x))

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("rational")


class _GFElement:
    """Residue modulo the class-level prime ``p``."""

    __slots__ = ("v",)
    p = 0

    def __init__(self, v):
        self.v = v % self.p

    def _lift(self, other):
        if type(other) is type(self):
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, numbers.Rational):
            return int(other.numerator) * pow(int(other.denominator), -1, self.p)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return type(self)(self.v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return type(self)(self.v - o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return type(self)(o - self.v)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return type(self)(self.v * o)

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(-self.v)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.p)
        return type(self)(pow(self.v, -1, self.p))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * type(self)(o).inverse()

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


@lru_cache(maxsize=None)
def _gf_class(p):
    return type(f"GF{p}", (_GFElement,), {"__slots__": (), "p": p})


class PrimeField(ScalarRing):
    """GF(p) for a prime p; elements are instances of a per-modulus class."""

    is_commutative = True

    def __init__(self, p):
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"GF(p) needs a prime modulus, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"gfp:{p}"
        self.element = _gf_class(p)
        self.zero = self.element(0)
        self.one = self.element(1)

    def from_int(self, k):
        if isinstance(k, _GFElement):
            if k.p != self.p:
                raise TypeError(f"element of GF({k.p}) used in GF({self.p})")
            return k
        if isinstance(k, numbers.Rational) and not isinstance(k, int):
            return self.element(int(k.numerator)) * self.element(int(k.denominator)).inverse()
        return self.element(int(k))

    def inv(self, x):
        return x.inverse()

    def parse(self, token):
        s = token.strip()
        if not re.fullmatch(r"[+-]?\d+", s):
            raise ScalarParseError(token, self.name)
        return self.element(int(s))

    def format(self, x):
        return str(x.v)

    def elements(self):
        return [self.element(v) for v in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gfp", self.p))


class Quaternion:
    """a + bi + cj + dk with rational components."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = Rational(a)
        self.b = Rational(b)
        self.c = Rational(c)
        self.d = Rational(d)

    @staticmethod
    def _as_quat(x):
        if isinstance(x, Quaternion):
            return x
        if isinstance(x, numbers.Rational):
            return Quaternion(x)
        return None

    def __add__(self, other):
        o = self._as_quat(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._as_quat(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        o = self._as_quat(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        o = self._as_quat(other)
        if o is None:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        o = self._as_quat(other)
        if o is None:
            return NotImplemented
        return o * self

    def conj(self):
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def inverse(self):
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of the zero quaternion")
        return Quaternion(self.a / nrm, -self.b / nrm, -self.c / nrm, -self.d / nrm)

    def is_real(self):
        return self.b == 0 and self.c == 0 and self.d == 0

    def __eq__(self, other):
        o = self._as_quat(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c and self.d == o.d

    def __hash__(self):
        if self.is_real():
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __repr__(self):
        return f"Quaternion({format_quaternion(self)})"


def format_quaternion(q):
    parts = []
    for coef, unit in ((q.a, ""), (q.b, "i"), (q.c, "j"), (q.d, "k")):
        if coef == 0:
            continue
        if unit and abs(coef) == 1:
            body = unit
        else:
            body = f"{abs(coef)}{unit}"
        sign = "-" if coef < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(sign + body)
    return "".join(parts) if parts else "0"


_QTERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?([ijk]?)")


def parse_quaternion(token):
    s = re.sub(r"\s+", "", token)
    if not s:
        raise ScalarParseError(token, "quaternion", "empty")
    comps = {"": Rational(0), "i": Rational(0), "j": Rational(0), "k": Rational(0)}
    pos = 0
    first = True
    while pos < len(s):
        m = _QTERM_RE.match(s, pos)
        sign, num, unit = m.group(1), m.group(2), m.group(3)
        if m.end() == pos or (num is None and not unit) or (not first and not sign):
            raise ScalarParseError(token, "quaternion", f"unexpected text at {s[pos:]!r}")
        if num is None:
            coef = Rational(1)
        else:
            n, _, d = num.partition("/")
            if d and int(d) == 0:
                raise ScalarParseError(token, "quaternion", "zero denominator")
            coef = Rational(int(n), int(d) if d else 1)
        comps[unit] += -coef if sign == "-" else coef
        pos = m.end()
        first = False
    return Quaternion(comps[""], comps["i"], comps["j"], comps["k"])


class QuaternionRing(ScalarRing):
    """The rational quaternions; the center is QQ and the ring is 4-dimensional over it."""

    name = "quaternion"
    characteristic = 0
    is_commutative = False
    center_dim = 4

    def __init__(self):
        self.zero = Quaternion(0)
        self.one = Quaternion(1)
        self._center = RationalRing()

    @property
    def center(self):
        return self._center

    def from_int(self, k):
        if isinstance(k, Quaternion):
            return k
        return Quaternion(k)

    def inv(self, x):
        return x.inverse()

    def is_central(self, x):
        return x.is_real()

    def parse(self, token):
        return parse_quaternion(token)

    def format(self, x):
        return format_quaternion(x)

    def coords(self, x):
        return (x.a, x.b, x.c, x.d)

    def from_coords(self, cs):
        return Quaternion(*cs)

    def center_basis(self):
        return [Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)]

    def embed_central(self, c):
        return Quaternion(c)

    def __eq__(self, other):
        return isinstance(other, QuaternionRing)

    def __hash__(self):
        return hash("quaternion")


QQ = RationalRing()
HH = QuaternionRing()


def ring_from_tag(tag):
    """Build a ring from its file tag: ``rational``, ``gfp:<p>`` or ``quaternion``."""
    if tag == "rational":
        return QQ
    if tag == "quaternion":
        return HH
    if tag.startswith("gfp:"):
        try:
            p = int(tag[4:])
        except ValueError:
            raise ValueError(f"bad prime in scalar tag {tag!r}") from None
        return PrimeField(p)
    raise ValueError(f"unknown scalar ring {tag!r}")
