"""Partitions, r-partite tableaux, colored RSK, and the hook-content product."""

from __future__ import annotations

import itertools
import json
from bisect import bisect_right
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DimensionError, ParameterError
from .qpoly import Poly
from .wreath import ColoredPermutation


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    >>> Partition([3, 1]).conjugate()
    Partition([2, 1, 1])
    >>> Partition([3, 1]).hooks()
    [4, 2, 1, 1]
    """

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ParameterError(f"{parts} is not a partition")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition([sum(1 for p in self if p > j) for j in range(self[0])])

    def cells(self) -> list[tuple[int, int]]:
        """Cells as 0-based ``(row, column)`` pairs, row by row."""
        return [(i, j) for i, p in enumerate(self) for j in range(p)]

    def hooks(self) -> list[int]:
        conj = self.conjugate()
        return [self[i] - j + conj[j] - i - 1 for i, j in self.cells()]

    def contents(self) -> list[int]:
        return [j - i for i, j in self.cells()]

    def __repr__(self):
        return f"Partition({list(self)})"


def b_stat(lam: Sequence[int]) -> int:
    """``b(lam) = sum_i (i-1) lam_i``."""
    return sum(i * p for i, p in enumerate(lam))


def odd_columns(lam: Sequence[int]) -> int:
    """Number of columns of odd length."""
    return sum(1 for c in Partition(lam).conjugate() if c % 2)


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + tuple(rest))


class RPartitePartition(tuple):
    """An r-tuple of partitions."""

    def __new__(cls, components: Sequence[Sequence[int]]):
        comps = tuple(c if isinstance(c, Partition) else Partition(c) for c in components)
        if not comps:
            raise ParameterError("an r-partite partition needs r >= 1 components")
        return super().__new__(cls, comps)

    @property
    def r(self) -> int:
        return len(self)

    @property
    def size(self) -> int:
        return sum(c.size for c in self)

    def __repr__(self):
        return "RPartitePartition(" + " | ".join(
            ",".join(map(str, c)) if c else "-" for c in self) + ")"


def _compositions(n: int, r: int) -> Iterator[tuple]:
    """Weak compositions of n into r parts, first part largest first."""
    if r == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, r - 1):
            yield (first,) + rest


def enumerate_rpartite_partitions(n: int, r: int) -> Iterator[RPartitePartition]:
    """Each r-partite partition of n once.

    >>> [tuple(map(list, p)) for p in enumerate_rpartite_partitions(2, 2)]
    [([2], []), ([1, 1], []), ([1], [1]), ([], [2]), ([], [1, 1])]
    """
    if n < 0 or r < 1:
        raise ParameterError("need n >= 0 and r >= 1")
    for sizes in _compositions(n, r):
        for combo in itertools.product(*(list(partitions(s)) for s in sizes)):
            yield RPartitePartition(combo)


# tableaux

Tableau = tuple  # tuple of rows, each a tuple of increasing ints


def _shape(t: Tableau) -> Partition:
    return Partition([len(row) for row in t])


class RPartiteTableau(tuple):
    """An r-tuple of tableaux (row-major, English notation)."""

    def __new__(cls, components: Sequence[Sequence[Sequence[int]]]):
        comps = tuple(tuple(tuple(int(x) for x in row) for row in t if len(row)) for t in components)
        if not comps:
            raise ParameterError("an r-partite tableau needs r >= 1 components")
        return super().__new__(cls, comps)

    @property
    def r(self) -> int:
        return len(self)

    @property
    def shape(self) -> RPartitePartition:
        return RPartitePartition([_shape(t) for t in self])

    @property
    def n(self) -> int:
        return sum(len(row) for t in self for row in t)

    def is_standard(self) -> bool:
        entries = sorted(x for t in self for row in t for x in row)
        if entries != list(range(1, len(entries) + 1)):
            return False
        for t in self:
            if any(len(a) < len(b) for a, b in zip(t, t[1:])):
                return False
            for row in t:
                if any(a >= b for a, b in zip(row, row[1:])):
                    return False
            for upper, lower in zip(t, t[1:]):
                if any(upper[j] >= lower[j] for j in range(len(lower))):
                    return False
        return True

    def locate(self) -> dict:
        """``entry -> (component, row, column)``, all 0-based."""
        return {x: (k, i, j) for k, t in enumerate(self)
                for i, row in enumerate(t) for j, x in enumerate(row)}

    def colors(self) -> tuple:
        """Component index of 1, 2, ..., n."""
        loc = self.locate()
        return tuple(loc[i][0] for i in range(1, self.n + 1))

    def to_json_obj(self) -> dict:
        return {"shape": [list(p) for p in self.shape], "rows": [[list(row) for row in t] for t in self]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj) -> "RPartiteTableau":
        t = cls(obj["rows"])
        if [list(p) for p in t.shape] != [list(p) for p in obj["shape"]]:
            raise DimensionError("declared shape does not match the rows")
        return t


def _syt_single(shape: Partition, labels: Sequence[int]) -> Iterator[Tableau]:
    """Standard fillings of ``shape`` by the sorted ``labels``; the largest label goes in a corner."""
    if not shape:
        yield ()
        return
    big = labels[-1]
    for i, p in enumerate(shape):
        if i + 1 == len(shape) or shape[i + 1] < p:
            smaller = list(shape)
            smaller[i] -= 1
            smaller = Partition([s for s in smaller if s])
            for t in _syt_single(smaller, labels[:-1]):
                rows = [list(row) for row in t]
                if i == len(rows):
                    rows.append([])
                rows[i].append(big)
                yield tuple(tuple(row) for row in rows)


def enumerate_syt(shape: RPartitePartition | Sequence[Sequence[int]]) -> Iterator[RPartiteTableau]:
    """All standard Young r-partite tableaux of ``shape``."""
    shape = shape if isinstance(shape, RPartitePartition) else RPartitePartition(shape)
    n = shape.size
    sizes = [c.size for c in shape]

    def assign(remaining: tuple, k: int):
        if k == len(sizes) - 1:
            yield (remaining,)
            return
        for chosen in itertools.combinations(remaining, sizes[k]):
            rest = tuple(x for x in remaining if x not in chosen)
            for tail in assign(rest, k + 1):
                yield (chosen,) + tail

    for labels in assign(tuple(range(1, n + 1)), 0):
        for comps in itertools.product(*(list(_syt_single(c, lab)) for c, lab in zip(shape, labels))):
            yield RPartiteTableau(comps)


def enumerate_all_syt(n: int, r: int) -> Iterator[RPartiteTableau]:
    for shape in enumerate_rpartite_partitions(n, r):
        yield from enumerate_syt(shape)


def tableau_descent_set(Q: RPartiteTableau) -> frozenset:
    """Descents of an r-partite tableau, including 0 when 1 is not in component 0.

    >>> sorted(tableau_descent_set(RPartiteTableau([[[2]], [[1]]])))
    [0]
    """
    loc = Q.locate()
    n = Q.n
    des = set()
    if n and loc[1][0] != 0:
        des.add(0)
    for i in range(1, n):
        (j, ri, _), (k, rk, _) = loc[i], loc[i + 1]
        if (j == k and rk > ri) or j < k:
            des.add(i)
    return frozenset(des)


def tableau_des(Q: RPartiteTableau) -> int:
    return len(tableau_descent_set(Q))


def tableau_maj(Q: RPartiteTableau) -> int:
    return sum(tableau_descent_set(Q))


def tableau_star_descents(Q: RPartiteTableau) -> frozenset:
    return tableau_descent_set(Q) - {0}


# colored RSK

def _row_insert(t: list, x: int) -> int:
    """Insert ``x`` into tableau ``t`` (list of lists) in place; return the row of the new cell."""
    for i, row in enumerate(t):
        pos = bisect_right(row, x)
        if pos == len(row):
            row.append(x)
            return i
        row[pos], x = x, row[pos]
    t.append([x])
    return len(t) - 1


def colored_rsk(w: ColoredPermutation) -> tuple[RPartiteTableau, RPartiteTableau]:
    """Row-insert ``w(i)`` into ``P^(c_i)`` and record ``i`` in ``Q^(c_i)``.

    >>> P, Q = colored_rsk(ColoredPermutation([2, 1], [0, 1], 2))
    >>> P, Q
    ((((2,),), ((1,),)), (((1,),), ((2,),)))
    """
    P = [[] for _ in range(w.r)]
    Q = [[] for _ in range(w.r)]
    for i, (v, c) in enumerate(zip(w.values, w.colors), start=1):
        row = _row_insert(P[c], v)
        if row == len(Q[c]):
            Q[c].append([])
        Q[c][row].append(i)
    return RPartiteTableau(P), RPartiteTableau(Q)


def inverse_colored_rsk(P: RPartiteTableau, Q: RPartiteTableau) -> ColoredPermutation:
    """Reverse bumping, removing the largest recording label first."""
    if P.shape != Q.shape:
        raise DimensionError("P and Q have different shapes")
    n, r = Q.n, Q.r
    Pl = [[list(row) for row in t] for t in P]
    loc = Q.locate()
    values = [0] * n
    colors = [0] * n
    for i in range(n, 0, -1):
        c, row, col = loc[i]
        t = Pl[c]
        x = t[row].pop()
        if not t[row]:
            t.pop()
        for k in range(row - 1, -1, -1):
            above = t[k]
            pos = bisect_right(above, x) - 1
            above[pos], x = x, above[pos]
        values[i - 1] = x
        colors[i - 1] = c
    return ColoredPermutation(values, colors, r)


# hook-content product

def hook_content_binomial(m: int, lam: Sequence[int], v: Poly) -> Poly:
    """``prod_{u in lam} (1 - v^(m - c(u))) / (1 - v^h(u))``, computed by exact division.

    Returns 0 as soon as some cell has ``m - c(u) = 0``; with a cell of
    negative ``m - c(u)`` the product is not a polynomial and a
    :class:`ParameterError` is raised.
    """
    lam = Partition(lam)
    one = Poly.const(1, v.vars)
    num = one
    den = one
    if any(m == c for c in lam.contents()):
        return Poly.const(0, v.vars)
    for c, h in zip(lam.contents(), lam.hooks()):
        e = m - c
        if e < 0:
            raise ParameterError(f"m={m} is too small for a cell of content {c}")
        num = num * (1 - v ** e)
        den = den * (1 - v ** h)
    return num.exact_div(den)


def principal_schur(m: int, lam: Sequence[int], v: Poly) -> Poly:
    """Schur function at ``1, v, ..., v^(m-1)``: ``v^b(lam)`` times the binomial at the conjugate."""
    lam = Partition(lam)
    if len(lam) > m:
        return Poly.const(0, v.vars)
    return v ** b_stat(lam) * hook_content_binomial(m, lam.conjugate(), v)


@lru_cache(maxsize=None)
def syt_count(lam: tuple) -> int:
    """Hook length formula."""
    lam = Partition(lam)
    out = 1
    for k in range(2, lam.size + 1):
        out *= k
    for h in lam.hooks():
        out //= h
    return out
