"""JSON family files and chain files with string-encoded exact scalars.

A family file looks like::

    {
      "scalar": "rational",
      "n": 2,
      "mode": "auto",
      "generators": [
        [["0", "1"], ["0", "0"]]
      ]
    }

with optional ``tn_pairs`` (a list of ``[T, N]`` matrix pairs), ``closure_bound``
and ``finite``.  Every scalar is a string in the ring's syntax, so rationals and
quaternions survive the trip exactly.  Errors carry the line and column of the
offending token.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .linalg import Chain, Matrix, Subspace
from .scalars import ScalarParseError, ring_from_tag

__all__ = [
    "MODES",
    "FileFormatError",
    "FamilyFile",
    "parse_family",
    "format_family",
    "parse_chain",
    "format_chain",
]

MODES = ("auto", "levitzki", "kolchin", "kaplansky", "tn", "irreducible")

_KEYS = ("scalar", "n", "mode", "generators", "tn_pairs", "closure_bound", "finite")

DEFAULT_MAX_PRIME = 1_000_000


class FileFormatError(ValueError):
    """Malformed input; ``line`` and ``col`` are 1-based, ``token`` is the offending text."""

    def __init__(self, message, line=None, col=None, token=None):
        self.message = message
        self.line = line
        self.col = col
        self.token = token
        where = f"line {line}, column {col}: " if line is not None else ""
        tok = f" (at {token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{tok}")


@dataclass
class FamilyFile:
    scalar: str
    n: int
    generators: list
    mode: str = "auto"
    tn_pairs: list = None
    closure_bound: int = None
    finite: bool = False

    @property
    def ring(self):
        return ring_from_tag(self.scalar)


# ---------------------------------------------------------------------------
# locating tokens


def _line_col(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


_TOKEN_RE = re.compile(r'"(?:[^"\\]|\\.)*"|-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|true|false|null')


class _Locator:
    """Source offsets of scalar tokens (strings, numbers, literals) in document order.

    ``json`` keeps dicts in document order, so walking the parsed value while
    counting tokens recovers each value's position.
    """

    def __init__(self, text, value):
        self.text = text
        self.offsets = {}
        self.key_offsets = {}
        self._walk(value, iter([m.start() for m in _TOKEN_RE.finditer(text)]))

    def _walk(self, value, counter, path=()):
        if isinstance(value, dict):
            for k, v in value.items():
                self.key_offsets[path + (k,)] = next(counter, None)
                self._walk(v, counter, path + (k,))
        elif isinstance(value, list):
            for i, v in enumerate(value):
                self._walk(v, counter, path + (i,))
        else:
            self.offsets[path] = next(counter, None)

    def error(self, message, path, token=None, key=False):
        pos = (self.key_offsets if key else self.offsets).get(tuple(path))
        if pos is None:
            # containers: point at the first scalar inside
            prefix = tuple(path)
            cands = [p for k, p in self.offsets.items() if k[:len(prefix)] == prefix and p is not None]
            pos = min(cands) if cands else None
        if pos is None:
            return FileFormatError(message, token=token)
        if token is None:
            m = _TOKEN_RE.match(self.text, pos)
            token = m.group(0) if m else None
        line, col = _line_col(self.text, pos)
        return FileFormatError(message, line, col, token)


def _load(text):
    try:
        value = json.loads(text)
    except json.JSONDecodeError as e:
        end = e.pos
        while end < len(text) and not text[end].isspace() and text[end] not in ",]}":
            end += 1
        token = text[e.pos:end] or (text[e.pos] if e.pos < len(text) else "<end of input>")
        raise FileFormatError(e.msg, e.lineno, e.colno, token) from None
    return value, _Locator(text, value)


# ---------------------------------------------------------------------------
# family files


def _matrix(value, ring, n, loc, path):
    if not isinstance(value, list) or len(value) != n:
        raise loc.error(f"expected a list of {n} rows", path)
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise loc.error(f"row {i + 1} must have {n} entries", path + [i])
        out = []
        for j, s in enumerate(row):
            if not isinstance(s, str):
                raise loc.error("scalars must be strings", path + [i, j])
            try:
                out.append(ring.parse(s))
            except ScalarParseError as e:
                raise loc.error(str(e), path + [i, j]) from None
        rows.append(out)
    return Matrix(rows, ring)


def _ring(tag, loc, max_prime):
    if not isinstance(tag, str):
        raise loc.error("scalar must be a string", ["scalar"])
    m = re.fullmatch(r"gfp:(\d+)", tag)
    if m and int(m.group(1)) > max_prime:
        raise loc.error(f"prime exceeds --max-prime {max_prime}", ["scalar"])
    try:
        return ring_from_tag(tag)
    except ValueError as e:
        raise loc.error(str(e), ["scalar"]) from None


def parse_family(text, max_prime=DEFAULT_MAX_PRIME):
    """Parse a family file; raises :class:`FileFormatError` with a position on any problem."""
    value, loc = _load(text)
    if not isinstance(value, dict):
        raise FileFormatError("top level must be an object", 1, 1)
    for k in value:
        if k not in _KEYS:
            raise loc.error(f"unknown key {k!r}", [k], key=True)
    for k in ("scalar", "n"):
        if k not in value:
            raise FileFormatError(f"missing key {k!r}", 1, 1)
    ring = _ring(value["scalar"], loc, max_prime)
    n = value["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise loc.error("n must be a positive integer", ["n"])
    mode = value.get("mode", "auto")
    if mode not in MODES:
        raise loc.error(f"mode must be one of {', '.join(MODES)}", ["mode"])
    gens = []
    raw = value.get("generators", [])
    if not isinstance(raw, list):
        raise loc.error("generators must be a list of matrices", ["generators"])
    for i, g in enumerate(raw):
        gens.append(_matrix(g, ring, n, loc, ["generators", i]))
    pairs = None
    if "tn_pairs" in value:
        raw = value["tn_pairs"]
        if not isinstance(raw, list):
            raise loc.error("tn_pairs must be a list of [T, N] pairs", ["tn_pairs"])
        pairs = []
        for i, pr in enumerate(raw):
            if not isinstance(pr, list) or len(pr) != 2:
                raise loc.error("each tn pair must be [T, N]", ["tn_pairs", i])
            pairs.append(tuple(_matrix(m, ring, n, loc, ["tn_pairs", i, k]) for k, m in enumerate(pr)))
    if mode == "tn" and not pairs:
        raise FileFormatError("mode 'tn' requires a nonempty tn_pairs list", 1, 1)
    if mode != "tn" and not gens:
        raise FileFormatError("at least one generator is required", 1, 1)
    bound = value.get("closure_bound")
    if bound is not None and (not isinstance(bound, int) or isinstance(bound, bool) or bound < 1):
        raise loc.error("closure_bound must be a positive integer", ["closure_bound"])
    finite = value.get("finite", False)
    if not isinstance(finite, bool):
        raise loc.error("finite must be true or false", ["finite"])
    return FamilyFile(ring.tag(), n, gens, mode, pairs, bound, finite)


def _dump_matrix(m, indent):
    pad = " " * indent
    rows = [json.dumps(r) for r in m.to_strings()]
    return "[\n" + ",\n".join(pad + "  " + r for r in rows) + "\n" + pad + "]"


def format_family(ff):
    """Canonical text of a family file; ``parse_family(format_family(f)) == f``."""
    lines = ["{", f'  "scalar": {json.dumps(ff.scalar)},', f'  "n": {ff.n},', f'  "mode": {json.dumps(ff.mode)},']
    body = ",\n".join("    " + _dump_matrix(g, 4) for g in ff.generators)
    lines.append('  "generators": [' + ("\n" + body + "\n  ]" if body else "]") + ",")
    if ff.tn_pairs is not None:
        items = []
        for T, N in ff.tn_pairs:
            items.append("    [\n      " + _dump_matrix(T, 6) + ",\n      " + _dump_matrix(N, 6) + "\n    ]")
        lines.append('  "tn_pairs": [\n' + ",\n".join(items) + "\n  ],")
    if ff.closure_bound is not None:
        lines.append(f'  "closure_bound": {ff.closure_bound},')
    lines.append(f'  "finite": {json.dumps(ff.finite)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# chain files


def format_chain(chain):
    """Chain file: the canonical basis of each V_1 .. V_n as lists of entry-string vectors."""
    levels = [V.to_strings() for V in chain.subspaces[1:]]
    body = ",\n".join("    [" + ", ".join(json.dumps(v) for v in lvl) + "]" for lvl in levels)
    tag = chain.ring.tag()
    return "{\n" + f'  "scalar": {json.dumps(tag)},\n  "n": {chain.n},\n  "chain": [\n' + body + "\n  ]\n}\n"


def parse_chain(text, max_prime=DEFAULT_MAX_PRIME):
    value, loc = _load(text)
    if not isinstance(value, dict) or "chain" not in value or "scalar" not in value or "n" not in value:
        raise FileFormatError("chain file needs keys scalar, n and chain", 1, 1)
    ring = _ring(value["scalar"], loc, max_prime)
    n = value["n"]
    levels = value["chain"]
    if not isinstance(n, int) or not isinstance(levels, list) or len(levels) != n:
        raise loc.error(f"chain must list {n} subspaces", ["chain"])
    subspaces = [Subspace.zero(n, ring)]
    for j, lvl in enumerate(levels):
        vecs = []
        if not isinstance(lvl, list):
            raise loc.error("each level is a list of vectors", ["chain", j])
        for k, v in enumerate(lvl):
            if not isinstance(v, list) or len(v) != n:
                raise loc.error(f"vectors must have {n} entries", ["chain", j, k])
            vec = []
            for i, s in enumerate(v):
                if not isinstance(s, str):
                    raise loc.error("scalars must be strings", ["chain", j, k, i])
                try:
                    vec.append(ring.parse(s))
                except ScalarParseError as e:
                    raise loc.error(str(e), ["chain", j, k, i]) from None
            vecs.append(vec)
        subspaces.append(Subspace.span(vecs, n, ring))
    try:
        return Chain(subspaces)
    except ValueError as e:
        raise loc.error(str(e), ["chain"]) from None
