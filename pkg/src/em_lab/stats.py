"""Total orders on colored integers, descent sets, and permutation statistics.

Every order is realized as an integer rank on pairs ``(value, color)`` so
that comparisons are plain integer comparisons:

* ``natural``: 1^0 < ... < n^0 < 1^1 < ... < n^1 < ... < n^(r-1)
* ``color``:   1^(r-1) < ... < n^(r-1) < ... < 1^0 < ... < n^0
* ``length``:  n^(r-1) < ... < n^1 < ... < 1^(r-1) < ... < 1^1 < 1^0 < ... < n^0
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import ConventionError, ParameterError, ParseError
from .qpoly import Poly, canonical_universe
from .wreath import ColoredPermutation, bar, enumerate_group, inverse


class TotalOrder(str, Enum):
    NATURAL = "natural"
    COLOR = "color"
    LENGTH = "length"

    def rank(self, v: int, c: int, n: int, r: int) -> int:
        if self is TotalOrder.NATURAL:
            return c * n + v
        if self is TotalOrder.COLOR:
            return (r - 1 - c) * n + v
        if c:
            return (n - v) * (r - 1) + (r - 1 - c)
        return n * (r - 1) + v


class DescentConvention(str, Enum):
    ZERO_AUGMENTED = "zero_augmented"
    N_AUGMENTED = "n_augmented"
    STARRED = "starred"


def compare(a: tuple[int, int], b: tuple[int, int], order: TotalOrder | str, n: int, r: int) -> str:
    """``"less"`` or ``"greater"`` for distinct colored integers ``a``, ``b``."""
    order = TotalOrder(order)
    if a == b:
        raise ValueError("compare needs two distinct colored integers")
    for v, c in (a, b):
        if not (1 <= v <= n and 0 <= c < r):
            raise ParameterError(f"{v}^{c} is not a colored integer for n={n}, r={r}")
    return "less" if order.rank(*a, n, r) < order.rank(*b, n, r) else "greater"


@lru_cache(maxsize=None)
def rank_table(order: TotalOrder, n: int, r: int) -> tuple:
    """``table[c][v]`` is the rank of ``v^c``; index 0 of each row is unused."""
    return tuple(tuple([0] + [order.rank(v, c, n, r) for v in range(1, n + 1)]) for c in range(r))


def interior_descents(w: ColoredPermutation, order: TotalOrder | str = TotalOrder.COLOR) -> list[int]:
    """``Des*``: positions i in [n-1] with w(i) > w(i+1) in the given order."""
    order = TotalOrder(order)
    tab = rank_table(order, w.n, w.r)
    ranks = [tab[c][v] for v, c in zip(w.values, w.colors)]
    return [i for i in range(1, w.n) if ranks[i - 1] > ranks[i]]


def descent_set(w: ColoredPermutation, order: TotalOrder | str = TotalOrder.COLOR,
                conv: DescentConvention | str = DescentConvention.ZERO_AUGMENTED) -> frozenset:
    """Descent set under ``order`` and boundary convention ``conv``.

    >>> from .wreath import parse_window
    >>> sorted(descent_set(parse_window("1^1 2^0", 2)))
    [0]
    """
    order, conv = TotalOrder(order), DescentConvention(conv)
    des = interior_descents(w, order)
    if conv is DescentConvention.ZERO_AUGMENTED:
        if w.n and w.colors[0]:
            des.insert(0, 0)
    elif conv is DescentConvention.N_AUGMENTED:
        if order is not TotalOrder.NATURAL:
            raise ConventionError("the n-augmented descent set is only defined for the natural order")
        if w.n and w.colors[-1]:
            des.append(w.n)
    return frozenset(des)


# statistic identifiers

_TAGS = ("des", "des_star", "maj", "csum", "fmaj", "fdes", "lmaj", "ldes",
         "exc", "neg", "fix", "fmaj_kl")
_ORDER_FREE = {"csum", "exc", "neg", "fix"}
_LENGTH_ONLY = {"lmaj", "ldes"}
_AUGMENTABLE = {"des", "maj", "fmaj"}
_MODIFIERS = ("plain", "inverse", "bar_inverse")


@dataclass(frozen=True)
class StatisticId:
    """A statistic together with its modifier, total order and descent convention.

    ``params`` holds ``(j,)`` for ``fix`` and ``(k, l)`` for ``fmaj_kl``.
    With the n-augmented convention, ``fmaj`` means ``r*maj - csum`` (the
    natural-order reading of the flag major index).
    """

    tag: str
    modifier: str = "plain"
    order: Optional[TotalOrder] = None
    convention: DescentConvention = DescentConvention.ZERO_AUGMENTED
    params: tuple = field(default=())

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ParameterError(f"unknown statistic {self.tag!r}")
        if self.modifier not in _MODIFIERS:
            raise ParameterError(f"unknown modifier {self.modifier!r}")
        object.__setattr__(self, "convention", DescentConvention(self.convention))
        order = self.order
        if self.tag in _ORDER_FREE:
            order = None
        elif order is None:
            order = TotalOrder.LENGTH if self.tag in _LENGTH_ONLY else TotalOrder.COLOR
        else:
            order = TotalOrder(order)
        object.__setattr__(self, "order", order)
        if self.tag in _LENGTH_ONLY and order is not TotalOrder.LENGTH:
            raise ConventionError(f"{self.tag} is defined through the length order only")
        if self.convention is DescentConvention.N_AUGMENTED:
            if self.tag not in _AUGMENTABLE:
                raise ConventionError(f"{self.tag} has no n-augmented variant")
            if order is not TotalOrder.NATURAL:
                raise ConventionError("the n-augmented descent set is only defined for the natural order")
        elif self.convention is DescentConvention.STARRED:
            raise ConventionError("use the des_star tag for starred descents")
        if self.tag == "fix":
            if len(self.params) != 1 or self.params[0] < 0:
                raise ParameterError("fix needs one color parameter j >= 0")
        elif self.tag == "fmaj_kl":
            if len(self.params) != 2 or self.params[0] < 1 or self.params[1] < 0:
                raise ParameterError("fmaj_kl needs k >= 1 and l >= 0")
        elif self.params:
            raise ParameterError(f"{self.tag} takes no parameters")

    def plain(self) -> "StatisticId":
        return StatisticId(self.tag, "plain", self.order, self.convention, self.params)

    def __str__(self):
        return format_statistic(self)


_STAT_RE = re.compile(
    r"^(?P<mod>bar-i|i)?(?P<tag>des\*|des|maj|csum|fmaj|fdes|lmaj|ldes|exc|neg|fix)"
    r"(?:\[(?P<params>[0-9,\s]*)\])?(?:@(?P<order>natural|color|length))?(?P<aug>\+n)?$")


def parse_statistic(text: str) -> StatisticId:
    """Parse the CLI text form, e.g. ``"des*@length"``, ``"fmaj[3,2]"``, ``"bar-imaj@color"``.

    >>> parse_statistic("fmaj[3,2]").tag
    'fmaj_kl'
    """
    m = _STAT_RE.match(text.strip())
    if not m:
        raise ParseError(f"cannot parse statistic {text!r}")
    tag = m.group("tag")
    mod = {"i": "inverse", "bar-i": "bar_inverse", None: "plain"}[m.group("mod")]
    params: tuple = ()
    if m.group("params") is not None:
        try:
            params = tuple(int(t) for t in m.group("params").split(","))
        except ValueError:
            raise ParseError(f"bad parameters in {text!r}") from None
    if tag == "des*":
        tag = "des_star"
    elif tag == "fmaj" and params:
        tag = "fmaj_kl"
    conv = DescentConvention.N_AUGMENTED if m.group("aug") else DescentConvention.ZERO_AUGMENTED
    order = TotalOrder(m.group("order")) if m.group("order") else None
    try:
        return StatisticId(tag, mod, order, conv, params)
    except (ParameterError, ConventionError) as exc:
        raise ParseError(f"{text!r}: {exc}") from None


def format_statistic(s: StatisticId) -> str:
    prefix = {"plain": "", "inverse": "i", "bar_inverse": "bar-i"}[s.modifier]
    name = {"des_star": "des*", "fmaj_kl": "fmaj"}.get(s.tag, s.tag)
    if s.params:
        name += "[" + ",".join(map(str, s.params)) + "]"
    if s.order is not None:
        name += "@" + s.order.value
    if s.convention is DescentConvention.N_AUGMENTED:
        name += "+n"
    return prefix + name


def stat(text: str) -> StatisticId:
    """Shorthand for :func:`parse_statistic`."""
    return parse_statistic(text)


# evaluation

def _plain_value(w: ColoredPermutation, s: StatisticId) -> int:
    tag = s.tag
    n, r = w.n, w.r
    if tag == "csum":
        return sum(w.colors)
    if tag == "neg":
        if r != 2:
            raise ConventionError("neg is only defined for r = 2")
        return sum(w.colors)
    if tag == "fix":
        j = s.params[0]
        return sum(1 for i, (v, c) in enumerate(zip(w.values, w.colors), start=1) if v == i and c == j)
    if tag == "exc":
        return sum(1 for i, (v, c) in enumerate(zip(w.values, w.colors), start=1)
                   if v > i or (v == i and c > 0))
    star = interior_descents(w, s.order)
    first = w.colors[0] if n else 0
    if tag == "des_star":
        return len(star)
    if tag == "fdes":
        return r * len(star) + first
    if tag == "ldes":
        return len(star) + sum(w.colors)
    if tag == "lmaj":
        return (sum(star) + sum(v - 1 for v, c in zip(w.values, w.colors) if c)
                + sum(w.colors))
    if s.convention is DescentConvention.N_AUGMENTED:
        boundary = n if n and w.colors[-1] else None
        maj = sum(star) + (boundary or 0)
        des = len(star) + (boundary is not None)
        if tag == "des":
            return des
        if tag == "maj":
            return maj
        return r * maj - sum(w.colors)  # fmaj
    zero = 1 if first else 0
    maj = sum(star)
    if tag == "des":
        return len(star) + zero
    if tag == "maj":
        return maj
    if tag == "fmaj":
        return r * maj + sum(w.colors)
    if tag == "fmaj_kl":
        if r != 2:
            raise ConventionError("fmaj[k,l] is only defined for r = 2")
        k, l = s.params
        return k * maj + l * sum(w.colors)
    raise AssertionError(tag)


def statistic(w: ColoredPermutation, s: StatisticId | str) -> int:
    """Value of ``s`` at ``w``; modified statistics are evaluated on w^-1 or (w bar)^-1.

    >>> from .wreath import parse_window
    >>> statistic(parse_window("1^1", 2), "fmaj")
    1
    """
    if isinstance(s, str):
        s = parse_statistic(s)
    if s.modifier == "inverse":
        w = inverse(w)
    elif s.modifier == "bar_inverse":
        w = inverse(bar(w))
    return _plain_value(w, s)


def statistic_vector(w: ColoredPermutation, specs: Sequence[StatisticId]) -> tuple:
    """Values of several statistics, computing each modified permutation once."""
    cache = {}
    out = []
    for s in specs:
        u = cache.get(s.modifier)
        if u is None:
            if s.modifier == "inverse":
                u = inverse(w)
            elif s.modifier == "bar_inverse":
                u = inverse(bar(w))
            else:
                u = w
            cache[s.modifier] = u
        out.append(_plain_value(u, s))
    return tuple(out)


def _as_specs(specs: Iterable) -> list[tuple[StatisticId, str]]:
    out = []
    for s, var in specs:
        out.append((parse_statistic(s) if isinstance(s, str) else s, var))
    names = [v for _, v in out]
    if len(set(names)) != len(names):
        raise ParameterError("distribution variables must be distinct")
    return out


def joint_counts(elements: Iterable[ColoredPermutation], stats: Sequence[StatisticId]) -> Counter:
    """Multiset of statistic vectors over ``elements``."""
    counts: Counter = Counter()
    for w in elements:
        counts[statistic_vector(w, stats)] += 1
    return counts


def distribution_of(elements: Iterable[ColoredPermutation], specs: Iterable) -> Poly:
    """``sum_w prod var^stat(w)`` over an explicit collection of elements."""
    specs = _as_specs(specs)
    universe = canonical_universe(v for _, v in specs) if specs else ("q",)
    pos = [universe.index(v) for _, v in specs]
    stats = [s for s, _ in specs]
    terms: dict = {}
    k = len(universe)
    for vec, mult in joint_counts(elements, stats).items():
        e = [0] * k
        for p, val in zip(pos, vec):
            e[p] += val
        e = tuple(e)
        terms[e] = terms.get(e, 0) + mult
    return Poly(universe, terms)


def distribution(n: int, r: int, subset: str, specs: Iterable) -> Poly:
    """Generating polynomial of the joint distribution of ``specs`` over a subset of S_{n,r}.

    ``specs`` is a list of ``(statistic, variable)`` pairs.
    """
    return distribution_of(enumerate_group(n, r, subset), specs)
