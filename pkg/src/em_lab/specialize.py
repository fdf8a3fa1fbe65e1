"""Specializations of fundamental colored quasisymmetric functions.

A :class:`SubstitutionTable` replaces each variable ``x_i^(j)`` by a power of
``q`` (or by zero).  :func:`evaluate_F` sums the fundamental function of a
colored permutation or r-partite tableau over all admissible index
sequences, which is the brute-force oracle.  :func:`closed_form` returns the
matching rational generating function.

The ``phi_m`` table is the single rule

    x_i^(j) = q^(i-1+j)  iff  i = 1 (mod r)  and  i + j <= m,

which is equivalent to the two-case description: ``x_m^(j)`` vanishes for
``j >= 1`` because ``m + j > m``, and writing ``m = c (mod r)`` with
``1 <= c <= r``, the largest nonzero exponent is ``q^(m-1)``, attained only by
``x_(m-c+1)^(c-1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from . import kernels
from .errors import DimensionError, ParameterError, ParseError
from .qpoly import Poly, PolyRing, expand_rational
from .stats import TotalOrder, interior_descents, statistic, StatisticId
from .tableaux import RPartiteTableau, tableau_star_descents
from .wreath import ColoredPermutation

STABLE_TAGS = ("ps", "psi", "theta")
M_TAGS = ("ps_m", "ps_m_tilde", "psi_m", "psi_m_tilde", "phi_m", "theta_m", "theta_m_tilde")
TAGS = STABLE_TAGS + M_TAGS
THETA_TAGS = ("theta", "theta_m", "theta_m_tilde")


@dataclass(frozen=True)
class SpecializationId:
    """One of the ten specializations with its parameters.

    ``I`` is the truncation index for the stable tags (``ps``, ``psi``, ``theta``).
    """

    tag: str
    r: int = 1
    m: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    I: Optional[int] = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ParameterError(f"unknown specialization {self.tag!r}")
        if self.r < 1:
            raise ParameterError("r must be positive")
        if self.tag in THETA_TAGS:
            if self.r != 2:
                raise ParameterError("the theta family requires r = 2")
            if self.k is None or self.l is None or self.k < 1 or self.l < 0:
                raise ParameterError("the theta family requires k >= 1 and l >= 0")
        elif self.k is not None or self.l is not None:
            raise ParameterError(f"{self.tag} takes no k, l parameters")
        if self.tag in M_TAGS:
            if self.m is None or self.m < 0:
                raise ParameterError(f"{self.tag} requires m >= 0")
        elif self.m is not None:
            raise ParameterError(f"{self.tag} is stable and takes no m")
        if self.I is not None and self.I < 0:
            raise ParameterError("truncation index must be nonnegative")

    @property
    def stable(self) -> bool:
        return self.tag in STABLE_TAGS

    def with_m(self, m: int) -> "SpecializationId":
        return SpecializationId(self.tag, self.r, m, self.k, self.l, self.I)

    def __str__(self):
        return format_specialization(self)


_SPEC_RE = re.compile(r"^(?P<tag>ps_m~|ps_m|ps|psi_m~|psi_m|psi|phi_m|theta_m~|theta_m|theta)"
                      r"(?:\[(?P<params>[^\]]*)\])?$")


def parse_specialization(text: str, r: int = 1) -> SpecializationId:
    """Parse e.g. ``"psi_m~[m=3]"`` or ``"theta_m[k=3,l=2,m=4]"``.

    The theta family fixes ``r = 2`` regardless of the ``r`` argument.
    """
    mt = _SPEC_RE.match(text.strip())
    if not mt:
        raise ParseError(f"cannot parse specialization {text!r}")
    tag = mt.group("tag").replace("~", "_tilde")
    params: dict = {}
    if mt.group("params"):
        for pos, item in enumerate(mt.group("params").split(",")):
            key, sep, val = item.strip().partition("=")
            if not sep or key not in ("m", "k", "l", "I", "r") or not val.strip().isdigit():
                raise ParseError(f"bad parameter {item!r} in {text!r}", pos)
            params[key] = int(val)
    r = params.pop("r", 2 if tag in THETA_TAGS else r)
    try:
        return SpecializationId(tag, r, **params)
    except ParameterError as exc:
        raise ParseError(f"{text!r}: {exc}") from None


def format_specialization(s: SpecializationId) -> str:
    name = s.tag.replace("_tilde", "~")
    parts = [f"{key}={getattr(s, key)}" for key in ("k", "l", "m", "I") if getattr(s, key) is not None]
    return name + (f"[{','.join(parts)}]" if parts else "")


@dataclass(frozen=True)
class SubstitutionTable:
    """Finite map ``(color j, index i) -> exponent of q``; absent entries are zero."""

    r: int
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (j, i), e in dict(self.entries).items():
            if not 0 <= j < self.r:
                raise ParameterError(f"color {j} outside 0..{self.r - 1}")
            if i < 1:
                raise ParameterError("indices start at 1")
            if e is None:
                continue
            if e < 0:
                raise ParameterError("exponents must be nonnegative")
            clean[(j, i)] = e
        object.__setattr__(self, "entries", clean)

    @property
    def support(self) -> int:
        return max((i for _, i in self.entries), default=0)

    def entry(self, j: int, i: int) -> Optional[int]:
        return self.entries.get((j, i))

    def dense(self) -> list[list[int]]:
        """``rows[j][i-1]`` is the exponent or -1 for a zero entry."""
        width = self.support
        return [[self.entries.get((j, i), -1) for i in range(1, width + 1)] for j in range(self.r)]

    def color_row(self, j: int) -> list[Optional[int]]:
        return [self.entries.get((j, i)) for i in range(1, self.support + 1)]

    def total(self, var: str = "q") -> Poly:
        """Sum of all entries as a polynomial."""
        R = PolyRing(var)
        out = R.zero
        for e in self.entries.values():
            out = out + R.monomial(**{var: e})
        return out

    def shifted(self, j: int, s: int) -> "SubstitutionTable":
        """Multiply every color-``j`` entry by ``q^s``."""
        return SubstitutionTable(self.r, {(c, i): e + s if c == j else e
                                          for (c, i), e in self.entries.items()})

    def swapped(self, j: int, a: int, b: int) -> "SubstitutionTable":
        """Exchange the entries at indices ``a`` and ``b`` of color ``j``."""
        ent = dict(self.entries)
        ea, eb = ent.pop((j, a), None), ent.pop((j, b), None)
        if ea is not None:
            ent[(j, b)] = ea
        if eb is not None:
            ent[(j, a)] = eb
        return SubstitutionTable(self.r, ent)


def build_table(s: SpecializationId, I: Optional[int] = None) -> SubstitutionTable:
    """The exact finite substitution table of ``s``.

    Stable tags need a truncation index, either ``s.I`` or the ``I`` argument.

    >>> sorted(build_table(SpecializationId("ps_m", r=2, m=2)).entries.items())
    [((0, 1), 0), ((0, 2), 1), ((1, 1), 0)]
    """
    r, tag = s.r, s.tag
    ent: dict = {}
    if s.stable:
        I = s.I if I is None else I
        if I is None:
            raise ParameterError(f"{tag} is stable and needs a truncation index I")
        for j in range(r):
            for i in range(1, I + 1):
                if tag == "ps":
                    ent[(j, i)] = i - 1
                elif tag == "psi":
                    ent[(j, i)] = r * (i - 1) + j
                else:
                    ent[(j, i)] = s.k * (i - 1) + (s.l if j else 0)
        return SubstitutionTable(r, ent)
    m = s.m
    if tag == "phi_m":
        for j in range(r):
            for i in range(1, m + 1):
                if i % r == 1 % r and i + j <= m:
                    ent[(j, i)] = i - 1 + j
        return SubstitutionTable(r, ent)
    tilde = tag.endswith("_tilde")
    for j in range(r):
        top = m if (j == 0 or tilde) else m - 1
        for i in range(1, top + 1):
            if tag.startswith("ps_m"):
                ent[(j, i)] = i - 1
            elif tag.startswith("psi_m"):
                ent[(j, i)] = r * (i - 1) + j
            else:
                ent[(j, i)] = s.k * (i - 1) + (s.l if j else 0)
    return SubstitutionTable(r, ent)


Subject = Union[ColoredPermutation, RPartiteTableau]


def _colors_and_strict(subject: Subject, order: TotalOrder | str) -> tuple[tuple, list[int]]:
    if isinstance(subject, ColoredPermutation):
        colors = subject.colors
        star = set(interior_descents(subject, order))
        r = subject.r
    elif isinstance(subject, RPartiteTableau):
        colors = subject.colors()
        star = tableau_star_descents(subject)
        r = subject.r
    else:
        raise TypeError("evaluate_F needs a ColoredPermutation or an RPartiteTableau")
    n = len(colors)
    return r, colors, [1 if t in star else 0 for t in range(1, n)]


def evaluate_F(subject: Subject, t: SubstitutionTable, var: str = "q",
               order: TotalOrder | str = TotalOrder.COLOR) -> Poly:
    """Fundamental colored quasisymmetric function of ``subject`` under ``t``.

    Sums ``prod_s t(c_s, i_s)`` over ``i_1 >= ... >= i_n >= 1`` with a strict
    drop at every interior descent (color order for permutations).

    >>> from .wreath import parse_window
    >>> str(evaluate_F(parse_window("1", 1), build_table(SpecializationId("ps_m", m=2))))
    '1 + q'
    """
    r, colors, strict = _colors_and_strict(subject, order)
    if r != t.r:
        raise DimensionError(f"subject has r={r} but the table has r={t.r}")
    counts = kernels.fundamental_counts(list(colors), strict, t.dense())
    return Poly((var,), {(e,): c for e, c in enumerate(counts) if c})


def evaluate_F_sum(subjects, t: SubstitutionTable, var: str = "q",
                   order: TotalOrder | str = TotalOrder.COLOR) -> Poly:
    out = Poly((var,), {})
    for s in subjects:
        out = out + evaluate_F(s, t, var, order)
    return out


# closed forms

@dataclass(frozen=True)
class ClosedForm:
    """``x^x_exponent * numerator / prod(denominator_factors)``.

    For m-indexed families this is the generating function in ``x`` whose
    ``x^(m-1)`` coefficient is the specialization at order ``m``; for stable
    families it is a series in ``q`` alone.
    """

    numerator: Poly
    denominator_factors: tuple
    x_exponent: int

    @property
    def denominator(self) -> Poly:
        out = Poly.const(1, self.numerator.vars)
        for f in self.denominator_factors:
            out = out * f
        return out

    def x_coefficient(self, m: int) -> Poly:
        """Coefficient of ``x^(m-1)``, as a polynomial in ``q`` (universe ``q, x``)."""
        if m < 1:
            return Poly.const(0, self.numerator.vars)
        numer = self.numerator * Poly.monomial(self.numerator.vars, x=self.x_exponent)
        series = expand_rational(numer, self.denominator_factors, "x", m - 1)
        return series.coefficient("x", m - 1)

    def q_series(self, max_deg: int) -> Poly:
        return expand_rational(self.numerator, self.denominator_factors, "q", max_deg)


def _stats_for(s: SpecializationId) -> tuple[Optional[str], str]:
    """(Eulerian statistic or None, Mahonian statistic) matching the tag."""
    tag = s.tag
    if tag.startswith("theta"):
        maj = "fmaj_kl"
    elif tag.startswith("psi") or tag == "phi_m":
        maj = "fmaj"
    else:
        maj = "maj"
    if s.stable:
        return None, maj
    if tag == "phi_m":
        return "fdes", maj
    return ("des_star" if tag.endswith("_tilde") else "des"), maj


def closed_form(subject: ColoredPermutation, s: SpecializationId,
                order: TotalOrder | str = TotalOrder.COLOR) -> ClosedForm:
    """Closed rational form matching :func:`evaluate_F` under ``build_table(s)``."""
    if subject.r != s.r:
        raise DimensionError(f"subject has r={subject.r} but the specialization has r={s.r}")
    order = TotalOrder(order)
    n, r = subject.n, s.r
    eul, mah = _stats_for(s)
    params = (s.k, s.l) if mah == "fmaj_kl" else ()
    mval = statistic(subject, StatisticId(mah, order=order, params=params))
    if s.tag.startswith("theta"):
        base = s.k
    elif mah == "fmaj":
        base = r
    else:
        base = 1
    if s.stable:
        R = PolyRing("q")
        q, = R.gens()
        factors = tuple(1 - q ** (base * i) for i in range(1, n + 1))
        return ClosedForm(q ** mval, factors, 0)
    R = PolyRing("q", "x")
    q, x = R.gens()
    e = statistic(subject, StatisticId(eul, order=order))
    if s.tag == "phi_m":
        factors = (1 - x,) + tuple(1 - x ** r * q ** (r * i) for i in range(1, n + 1))
    else:
        factors = tuple(1 - x * q ** (base * i) for i in range(n + 1))
    return ClosedForm(q ** mval, factors, e)


def closed_form_value(subject: ColoredPermutation, s: SpecializationId,
                      order: TotalOrder | str = TotalOrder.COLOR) -> Poly:
    """Closed-form prediction of ``evaluate_F(subject, build_table(s))`` (m-indexed tags), in ``q``."""
    if s.stable:
        raise ParameterError("stable specializations are infinite series; use closed_form(...).q_series")
    coeff = closed_form(subject, s, order).x_coefficient(s.m)
    return Poly(("q",), {(e[0],): c for e, c in coeff.terms.items()})
