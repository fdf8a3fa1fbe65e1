"""Colored permutations: elements of Z_r wr S_n in window notation.

An element is stored as two tuples, ``values`` (a permutation of 1..n) and
``colors`` (each in 0..r-1), so ``w(i) = values[i-1]`` carries color
``colors[i-1]``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .errors import DimensionError, ParameterError, ParseError

SUBSETS = ("all", "derangements", "involutions", "absolute_involutions")


class ColoredPermutation:
    """An r-colored permutation of [n].

    >>> w = ColoredPermutation([2, 1], [0, 1], 2)
    >>> format_window(w.inverse())
    '2^1 1^0'
    """

    __slots__ = ("values", "colors", "r", "_hash")

    def __init__(self, values: Sequence[int], colors: Sequence[int] | None = None, r: int = 1):
        values = tuple(int(v) for v in values)
        n = len(values)
        if colors is None:
            colors = (0,) * n
        colors = tuple(int(c) for c in colors)
        if r < 1:
            raise ParameterError("r must be positive")
        if len(colors) != n:
            raise DimensionError("values and colors have different lengths")
        if sorted(values) != list(range(1, n + 1)):
            raise ParameterError(f"{values} is not a permutation of 1..{n}")
        if any(not 0 <= c < r for c in colors):
            raise ParameterError(f"colors {colors} out of range for r={r}")
        self.values = values
        self.colors = colors
        self.r = r
        self._hash = None

    @classmethod
    def _make(cls, values: tuple, colors: tuple, r: int) -> "ColoredPermutation":
        w = object.__new__(cls)
        w.values = values
        w.colors = colors
        w.r = r
        w._hash = None
        return w

    @classmethod
    def identity(cls, n: int, r: int = 1) -> "ColoredPermutation":
        return cls._make(tuple(range(1, n + 1)), (0,) * n, r)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, ColoredPermutation):
            return NotImplemented
        return self.r == other.r and self.values == other.values and self.colors == other.colors

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.values, self.colors, self.r))
        return self._hash

    def __lt__(self, other):
        return (self.values, self.colors) < (other.values, other.colors)

    def __repr__(self):
        return f"ColoredPermutation({format_window(self)!r}, r={self.r})"

    def __str__(self):
        return format_window(self)

    def __call__(self, i: int) -> tuple[int, int]:
        """``(w(i), c_i)`` for 1-based ``i``."""
        return self.values[i - 1], self.colors[i - 1]

    def __mul__(self, other):
        return compose(self, other)

    def inverse(self) -> "ColoredPermutation":
        return inverse(self)

    def bar(self) -> "ColoredPermutation":
        return bar(self)

    def csum(self) -> int:
        return sum(self.colors)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "r": self.r, "values": list(self.values), "colors": list(self.colors)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj) -> "ColoredPermutation":
        w = cls(obj["values"], obj["colors"], obj["r"])
        if w.n != obj["n"]:
            raise DimensionError("declared n does not match the window length")
        return w


def _check_same_group(u: ColoredPermutation, v: ColoredPermutation) -> None:
    if u.n != v.n or u.r != v.r:
        raise DimensionError(f"cannot combine elements of S_({u.n},{u.r}) and S_({v.n},{v.r})")


def compose(u: ColoredPermutation, v: ColoredPermutation) -> ColoredPermutation:
    """``u o v``: apply ``v`` first, colors add mod r."""
    _check_same_group(u, v)
    r = u.r
    uv, uc = u.values, u.colors
    vals = []
    cols = []
    for b, j in zip(v.values, v.colors):
        vals.append(uv[b - 1])
        cols.append((j + uc[b - 1]) % r)
    return ColoredPermutation._make(tuple(vals), tuple(cols), r)


def inverse(w: ColoredPermutation) -> ColoredPermutation:
    n, r = w.n, w.r
    vals = [0] * n
    cols = [0] * n
    for a, (b, j) in enumerate(zip(w.values, w.colors), start=1):
        vals[b - 1] = a
        cols[b - 1] = (-j) % r
    return ColoredPermutation._make(tuple(vals), tuple(cols), r)


def bar(w: ColoredPermutation) -> ColoredPermutation:
    """Negate every color mod r."""
    return ColoredPermutation._make(w.values, tuple((-c) % w.r for c in w.colors), w.r)


class CycleTypeResult(NamedTuple):
    rtype: "object"  # tableaux.RPartitePartition
    cycle_color_counts: tuple


def cycles(w: ColoredPermutation) -> list[tuple[tuple[int, ...], int]]:
    """Cycles of the underlying permutation with their colors (sum of entry colors mod r)."""
    seen = [False] * (w.n + 1)
    out = []
    for start in range(1, w.n + 1):
        if seen[start]:
            continue
        cyc = []
        color = 0
        a = start
        while not seen[a]:
            seen[a] = True
            cyc.append(a)
            color += w.colors[a - 1]
            a = w.values[a - 1]
        out.append((tuple(cyc), color % w.r))
    return out


def cycle_type(w: ColoredPermutation) -> CycleTypeResult:
    from .tableaux import Partition, RPartitePartition

    lengths = [[] for _ in range(w.r)]
    for cyc, color in cycles(w):
        lengths[color].append(len(cyc))
    comps = tuple(Partition(sorted(ls, reverse=True)) for ls in lengths)
    return CycleTypeResult(RPartitePartition(comps), tuple(len(ls) for ls in lengths))


def is_derangement(w: ColoredPermutation) -> bool:
    return not any(v == i and c == 0 for i, (v, c) in enumerate(zip(w.values, w.colors), start=1))


def is_involution(w: ColoredPermutation) -> bool:
    r = w.r
    vals, cols = w.values, w.colors
    for a, (b, j) in enumerate(zip(vals, cols), start=1):
        if vals[b - 1] != a or (cols[b - 1] + j) % r:
            return False
    return True


def is_absolute_involution(w: ColoredPermutation) -> bool:
    """``inverse(bar(w)) == w``: the inverse of the bar carries the same colors."""
    vals, cols = w.values, w.colors
    for a, (b, j) in enumerate(zip(vals, cols), start=1):
        if vals[b - 1] != a or cols[b - 1] != j:
            return False
    return True


def fix_by_color(w: ColoredPermutation) -> tuple:
    counts = [0] * w.r
    for i, (v, c) in enumerate(zip(w.values, w.colors), start=1):
        if v == i:
            counts[c] += 1
    return tuple(counts)


@dataclass(frozen=True)
class Classification:
    is_derangement: bool
    is_involution: bool
    is_absolute_involution: bool
    fix_by_color: tuple


def classify(w: ColoredPermutation) -> Classification:
    return Classification(is_derangement(w), is_involution(w), is_absolute_involution(w),
                          fix_by_color(w))


_PREDICATES = {
    "all": None,
    "derangements": is_derangement,
    "involutions": is_involution,
    "absolute_involutions": is_absolute_involution,
}


def enumerate_group(n: int, r: int, subset: str = "all") -> Iterator[ColoredPermutation]:
    """Stream the elements of ``subset`` in lexicographic order of (values, colors).

    >>> sum(1 for _ in enumerate_group(2, 2, "derangements"))
    5
    """
    if n < 0 or r < 1:
        raise ParameterError(f"need n >= 0 and r >= 1, got n={n}, r={r}")
    try:
        pred = _PREDICATES[subset]
    except KeyError:
        raise ParameterError(f"unknown subset {subset!r}; expected one of {SUBSETS}") from None
    color_vectors = list(itertools.product(range(r), repeat=n))
    make = ColoredPermutation._make
    for vals in itertools.permutations(range(1, n + 1)):
        for cols in color_vectors:
            w = make(vals, cols, r)
            if pred is None or pred(w):
                yield w


# window text

def parse_window(text: str, r: int = 1) -> ColoredPermutation:
    """Parse ``"3^1 2^0 1^3"``; an omitted color means 0.

    >>> parse_window("2 1").colors
    (0, 0)
    """
    if r < 1:
        raise ParameterError("r must be positive")
    text = text.strip()
    if not text:
        return ColoredPermutation._make((), (), r)
    entries = text.split(" ")
    vals, cols = [], []
    seen = set()
    for pos, ent in enumerate(entries):
        head, sep, tail = ent.partition("^")
        if not head.isdigit() or (sep and not tail.isdigit()):
            raise ParseError(f"malformed entry {ent!r}", pos)
        v = int(head)
        c = int(tail) if sep else 0
        if v in seen:
            raise ParseError(f"repeated value {v}", pos)
        if c >= r:
            raise ParseError(f"color {c} is not below r={r}", pos)
        seen.add(v)
        vals.append(v)
        cols.append(c)
    n = len(vals)
    for pos, v in enumerate(vals):
        if not 1 <= v <= n:
            raise ParseError(f"value {v} outside 1..{n}", pos)
    return ColoredPermutation._make(tuple(vals), tuple(cols), r)


def format_window(w: ColoredPermutation) -> str:
    """Window text; colors are written out unless r = 1."""
    if w.r == 1:
        return " ".join(map(str, w.values))
    return " ".join(f"{v}^{c}" for v, c in zip(w.values, w.colors))
