"""Registry of generating-function identities and the engine that checks them.

Every record knows how to build both sides of its identity at a given
parameter point and truncation, as exact polynomials over a common variable
universe.  The engine subtracts them and reports the first nonzero
coefficient in graded order.  A pass certifies agreement modulo the stated
truncation and nothing more:

* ``poly_equal``: both sides are polynomials, compared in full (``cap``, when
  declared, bounds the q-degree of a stable specialization).
* ``x_series``: ``sum_m f(m) x^m = N(x, q) / D(x, q)`` compared for x-degree
  at most ``M``.
* ``zx_series``: coefficients of ``z^n x^m`` for ``n <= N`` and ``m <= M``.
* ``zxy_qp_series``: coefficients of ``z^n x^a y^b`` for ``n <= N`` and
  ``a, b <= M``; the stable variants instead bound the q- and p-degrees by
  ``cap``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import EmLabError, ParameterError
from .qpoly import (DegreeCap, Poly, canonical_universe, complete_homogeneous, expand_rational,
                    q_analogue, q_binomial, q_factorial)
from .specialize import SpecializationId, SubstitutionTable, build_table, evaluate_F
from .stats import distribution, statistic
from .tableaux import (b_stat, enumerate_rpartite_partitions,
                       enumerate_syt, hook_content_binomial, odd_columns, partitions)
from .wreath import bar, compose, cycles, enumerate_group, fix_by_color, inverse

STRATEGIES = ("poly_equal", "x_series", "zx_series", "zxy_qp_series")


class UnknownIdentity(ParameterError, KeyError):
    """No registry record carries the requested id."""

    def __str__(self):
        return self.args[0] if self.args else "unknown identity"


# reports

@dataclass(frozen=True)
class Mismatch:
    exponents: Mapping[str, int]
    lhs: str
    rhs: str

    def to_json_obj(self) -> dict:
        return {"exponents": dict(self.exponents), "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class VerifyReport:
    """Outcome of one comparison.  ``lhs``/``rhs`` keep the compared sides in-process only."""

    id: str
    params: dict
    truncations: dict
    passed: bool
    mismatch: Optional[Mismatch] = None
    error: Optional[str] = None
    lhs: Optional[Poly] = field(default=None, repr=False, compare=False)
    rhs: Optional[Poly] = field(default=None, repr=False, compare=False)

    def to_json_obj(self) -> dict:
        out = {"id": self.id, "params": dict(self.params),
               "truncations": dict(self.truncations), "pass": self.passed}
        if self.mismatch is not None:
            out["mismatch"] = self.mismatch.to_json_obj()
        if self.error is not None:
            out["error"] = self.error
        return out

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "VerifyReport":
        mm = obj.get("mismatch")
        return cls(obj["id"], dict(obj.get("params", {})), dict(obj.get("truncations", {})),
                   bool(obj["pass"]),
                   Mismatch(dict(mm["exponents"]), mm["lhs"], mm["rhs"]) if mm else None,
                   obj.get("error"))

    def sort_key(self) -> tuple:
        return _sort_key(self.id, self.params, self.truncations)

    def stripped(self) -> "VerifyReport":
        return VerifyReport(self.id, self.params, self.truncations, self.passed,
                            self.mismatch, self.error)


def _sort_key(id_: str, params: Mapping, truncations: Mapping) -> tuple:
    return (id_, tuple(sorted(params.items())), tuple(sorted(truncations.items())))


def _first_mismatch(lhs: Poly, rhs: Poly) -> Optional[Mismatch]:
    vars = canonical_universe(lhs.vars + rhs.vars)
    lhs, rhs = lhs.embed(vars), rhs.embed(vars)
    diff = lhs - rhs
    if diff.is_zero():
        return None
    e = min(diff.terms, key=lambda t: (sum(t), t))
    return Mismatch({v: k for v, k in zip(vars, e) if k}, str(lhs[e]), str(rhs[e]))


# records

@dataclass(frozen=True)
class IdentityRecord:
    """One identity: how to build both sides, what it depends on, and where to check it.

    ``validity`` maps each parameter to an inclusive range; ``check`` adds
    constraints a range cannot express.  ``note`` flags records whose
    literal form is known to disagree with enumeration.
    """

    id: str
    summary: str
    strategy: str
    sides: Callable[[dict, dict], tuple[Poly, Poly]] = field(repr=False)
    validity: Mapping[str, tuple[int, int]]
    truncations: Mapping[str, int]
    default_grid: tuple
    check: Optional[Callable[[dict], Optional[str]]] = field(default=None, repr=False)
    note: str = ""

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(self.validity)

    def validate(self, params: Mapping, truncations: Optional[Mapping] = None) -> tuple[dict, dict]:
        """Normalize and check a parameter point; missing truncations take their defaults."""
        params = dict(params)
        extra = set(params) - set(self.validity)
        if extra:
            raise ParameterError(f"{self.id} takes no parameter(s) {sorted(extra)}; "
                                 f"declared: {list(self.validity) or 'none'}")
        for name, (lo, hi) in self.validity.items():
            if name not in params:
                raise ParameterError(f"{self.id} needs parameter {name}")
            val = params[name]
            if not isinstance(val, int) or isinstance(val, bool):
                raise ParameterError(f"{name} must be an integer")
            if not lo <= val <= hi:
                raise ParameterError(f"{self.id}: {name}={val} outside [{lo}, {hi}]")
        if self.check is not None:
            msg = self.check(params)
            if msg:
                raise ParameterError(f"{self.id}: {msg}")
        truncations = dict(truncations or {})
        extra = set(truncations) - set(self.truncations)
        if extra:
            raise ParameterError(f"{self.id} does not use truncation(s) {sorted(extra)}; "
                                 f"declared: {list(self.truncations) or 'none'}")
        full = dict(self.truncations)
        for name, val in truncations.items():
            if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                raise ParameterError(f"truncation {name} must be a nonnegative integer")
            full[name] = val
        return params, full

    def compute(self, params: Mapping, truncations: Optional[Mapping] = None) -> tuple[Poly, Poly]:
        params, truncations = self.validate(params, truncations)
        return self.sides(params, truncations)


# polynomial helpers

def _gen(vars: Sequence[str], name: str, power: int = 1) -> Poly:
    return Poly.monomial(vars, **{name: power})


def _const(vars: Sequence[str], c: int) -> Poly:
    return Poly.const(c, vars)


def _lift(p: Poly, vars: Sequence[str]) -> Poly:
    return p.embed(canonical_universe(tuple(vars) + p.vars))


def _frac_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"{x} is not an integer")
    return x.numerator


@lru_cache(maxsize=512)
def _dist(n: int, r: int, subset: str, specs: tuple) -> Poly:
    return distribution(n, r, subset, list(specs))


@lru_cache(maxsize=64)
def _count(n: int, r: int, subset: str) -> int:
    return sum(1 for _ in enumerate_group(n, r, subset))


def _pvars(r: int) -> tuple[str, ...]:
    return tuple(f"p{j}" for j in range(r))


def _x_series(coeff: Callable[[int], Poly], numer: Poly, factors: Iterable[Poly], M: int,
              vars: Sequence[str]) -> tuple[Poly, Poly]:
    vars = canonical_universe(tuple(vars) + ("x",))
    x = _gen(vars, "x")
    lhs = _const(vars, 0)
    xm = _const(vars, 1)
    for m in range(M + 1):
        lhs = lhs + _lift(coeff(m), vars) * xm
        xm = xm * x
    rhs = expand_rational(_lift(numer, vars), [_lift(f, vars) for f in factors], "x", M)
    return lhs, rhs


def _x_pochhammer(vars: Sequence[str], base: Poly, length: int, xpow: int = 1) -> list[Poly]:
    """Factors of ``(x^xpow; base)_length``."""
    x = _gen(vars, "x", xpow)
    base = _lift(base, vars)
    out = []
    cur = x
    for _ in range(length):
        out.append(1 - cur)
        cur = cur * base
    return out


QX = ("q", "x")


def _q(vars: Sequence[str] = QX) -> Poly:
    return _gen(vars, "q")


# r = 1 base cases

def _carlitz(p, t):
    n = p["n"]
    q = _q()
    numer = _dist(n, 1, "all", (("des", "x"), ("maj", "q")))
    return _x_series(lambda m: q_analogue(m + 1, q) ** n, numer, _x_pochhammer(QX, q, n + 1),
                     t["M"], QX)


def _euler(p, t):
    n = p["n"]
    vars = ("x",)
    numer = _dist(n, 1, "all", (("des", "x"),))
    x = _gen(vars, "x")
    return _x_series(lambda m: _const(vars, (m + 1) ** n), numer, [1 - x] * (n + 1), t["M"], vars)


def _macmahon(p, t):
    n = p["n"]
    return _dist(n, 1, "all", (("maj", "q"),)), q_factorial(n, _q(("q",)))


def _falling_q(n: int, k: int, v: Poly) -> Poly:
    """``[n]_v! / [k]_v!`` as a product."""
    out = _const(v.vars, 1)
    for i in range(k + 1, n + 1):
        out = out * q_analogue(i, v)
    return out


def _wachs(p, t):
    n = p["n"]
    q = _q(("q",))
    rhs = _const(("q",), 0)
    for k in range(n + 1):
        rhs = rhs + (-1) ** k * q ** comb(k, 2) * _falling_q(n, k, q)
    return _dist(n, 1, "derangements", (("maj", "q"),)), rhs


def _principal_specialization(p, t):
    n, r = p["n"], p["r"]
    elements = list(enumerate_group(n, r, "absolute_involutions"))

    def coeff(m):
        table = build_table(SpecializationId("ps_m", r=r, m=m + 1))
        out = _const(("q",), 0)
        for w in elements:
            out = out + evaluate_F(w, table)
        return out

    numer = _dist(n, r, "absolute_involutions", (("des", "x"), ("maj", "q")))
    return _x_series(coeff, numer, _x_pochhammer(QX, _q(), n + 1), t["M"], QX)


def _stable_specialization(p, t):
    n, r, cap = p["n"], p["r"], t["cap"]
    table = build_table(SpecializationId("ps", r=r), I=n + cap + 1)
    lhs = _const(("q",), 0)
    for w in enumerate_group(n, r, "derangements"):
        lhs = lhs + evaluate_F(w, table)
    lhs = lhs.truncate(DegreeCap(q=cap))
    numer = _dist(n, r, "derangements", (("maj", "q"),))
    q = _q(("q",))
    rhs = expand_rational(numer, [1 - q ** i for i in range(1, n + 1)], "q", cap)
    return lhs, rhs


def _power_sum(p, t):
    n, r, m = p["n"], p["r"], p["m"]
    table = build_table(SpecializationId("psi_m_tilde", r=r, m=m))
    lhs = _const(("q",), 0)
    for w in enumerate_group(n, r):
        lhs = lhs + evaluate_F(w, table)
    return lhs, table.total() ** n


# Eulerian and Mahonian identities on the whole group

def _steingrimsson(des_text):
    def sides(p, t):
        n, r = p["n"], p["r"]
        vars = ("x",)
        x = _gen(vars, "x")
        numer = _dist(n, r, "all", ((des_text, "x"),))
        return _x_series(lambda m: _const(vars, (r * m + 1) ** n), numer, [1 - x] * (n + 1),
                         t["M"], vars)
    return sides


def _des_equidistributed(des_text):
    def sides(p, t):
        n, r = p["n"], p["r"]
        return _dist(n, r, "all", ((des_text, "x"),)), _dist(n, r, "all", (("des@color", "x"),))
    return sides


def _poincare_lmaj(p, t):
    n, r = p["n"], p["r"]
    q = _q(("q",))
    rhs = q_factorial(n, q)
    for i in range(1, n + 1):
        rhs = rhs * (1 + q ** i * q_analogue(r - 1, q))
    return _dist(n, r, "all", (("lmaj", "q"),)), rhs


def _flag_product(n: int, r: int, q: Poly) -> Poly:
    out = _const(q.vars, 1)
    for i in range(1, n + 1):
        out = out * q_analogue(r * i, q)
    return out


def _fmaj_dist(fmaj_text):
    def sides(p, t):
        n, r = p["n"], p["r"]
        return _dist(n, r, "all", ((fmaj_text, "q"),)), _flag_product(n, r, _q(("q",)))
    return sides


def _chow_mansour_count(twist: bool):
    # number of w with fmaj_c(w) = r*maj_St(u) - csum(u), u = bar(w) or w
    def sides(p, t):
        n, r = p["n"], p["r"]
        holds = 0
        for w in enumerate_group(n, r):
            u = bar(w) if twist else w
            if statistic(w, "fmaj@color") == r * statistic(u, "maj@natural+n") - u.csum():
                holds += 1
        return _const(("q",), holds), _const(("q",), r ** n * factorial(n))
    return sides


def _des_fmaj(des_text, fmaj_text):
    def sides(p, t):
        n, r = p["n"], p["r"]
        q = _q()
        numer = _dist(n, r, "all", ((des_text, "x"), (fmaj_text, "q")))
        return _x_series(lambda m: q_analogue(r * m + 1, q) ** n, numer,
                         _x_pochhammer(QX, q ** r, n + 1), t["M"], QX)
    return sides


def _mixed_base(m: int, r: int, q: Poly) -> Poly:
    """``[m+1]_q + (r-1)[m]_q``."""
    return q_analogue(m + 1, q) + (r - 1) * q_analogue(m, q)


def _des_maj(order):
    def sides(p, t):
        n, r = p["n"], p["r"]
        q = _q()
        numer = _dist(n, r, "all", ((f"des@{order}", "x"), (f"maj@{order}", "q")))
        return _x_series(lambda m: _mixed_base(m, r, q) ** n, numer, _x_pochhammer(QX, q, n + 1),
                         t["M"], QX)
    return sides


def _fdes_fmaj(p, t):
    n, r = p["n"], p["r"]
    q = _q()
    numer = _dist(n, r, "all", (("fdes", "x"), ("fmaj", "q")))
    x = _gen(QX, "x")
    factors = [1 - x] + [1 - x ** r * q ** (r * i) for i in range(1, n + 1)]
    return _x_series(lambda m: q_analogue(m + 1, q) ** n, numer, factors, t["M"], QX)


def _ldes_lmaj_literal(p, t):
    # (-x[r-1]_{qx}; q)_{n+1}, read literally: prod_{i<=n} (1 + x q^i [r-1]_{qx})
    n, r = p["n"], p["r"]
    q, x = _q(), _gen(QX, "x")
    numer = _dist(n, r, "all", (("ldes", "x"), ("lmaj", "q")))
    factors = _x_pochhammer(QX, q, n + 1)
    inner = q_analogue(r - 1, q * x)
    if not inner.is_zero():
        factors += [1 + x * q ** i * inner for i in range(n + 1)]
    return _x_series(lambda m: q_analogue(m + 1, q) ** n, numer, factors, t["M"], QX)


def _ldes_lmaj(p, t):
    # (x; q)_{n+1} (-xq[r-1]_{qx}; q)_n: the second product starts at q^1
    n, r = p["n"], p["r"]
    q, x = _q(), _gen(QX, "x")
    numer = _dist(n, r, "all", (("ldes", "x"), ("lmaj", "q")))
    factors = _x_pochhammer(QX, q, n + 1)
    inner = q_analogue(r - 1, q * x)
    if not inner.is_zero():
        factors += [1 + x * q ** i * inner for i in range(1, n + 1)]
    return _x_series(lambda m: q_analogue(m + 1, q) ** n, numer, factors, t["M"], QX)


def _maj_dist_colored(p, t):
    n, r = p["n"], p["r"]
    return _dist(n, r, "all", (("maj", "q"),)), r ** n * q_factorial(n, _q(("q",)))


def _desstar_maj(p, t):
    n, r = p["n"], p["r"]
    q = _q()
    numer = _dist(n, r, "all", (("des*", "x"), ("maj", "q")))
    return _x_series(lambda m: r ** n * q_analogue(m + 1, q) ** n, numer,
                     _x_pochhammer(QX, q, n + 1), t["M"], QX)


def _desstar_fmaj(p, t):
    n, r = p["n"], p["r"]
    q = _q()
    numer = _dist(n, r, "all", (("des*", "x"), ("fmaj", "q")))
    return _x_series(lambda m: q_analogue(r * (m + 1), q) ** n, numer,
                     _x_pochhammer(QX, q ** r, n + 1), t["M"], QX)


def _kl_base(m: int, k: int, l: int, q: Poly) -> Poly:
    """``[m+1]_{q^k} + q^l [m]_{q^k}``."""
    return q_analogue(m + 1, q ** k) + q ** l * q_analogue(m, q ** k)


def _fmajkl_dist(p, t):
    n, k, l = p["n"], p["k"], p["l"]
    q = _q(("q",))
    return (_dist(n, 2, "all", ((f"fmaj[{k},{l}]", "q"),)),
            (1 + q ** l) ** n * q_factorial(n, q ** k))


def _des_fmajkl(p, t):
    n, k, l = p["n"], p["k"], p["l"]
    q = _q()
    numer = _dist(n, 2, "all", (("des", "x"), (f"fmaj[{k},{l}]", "q")))
    return _x_series(lambda m: _kl_base(m, k, l, q) ** n, numer,
                     _x_pochhammer(QX, q ** k, n + 1), t["M"], QX)


def _desstar_fmajkl(p, t):
    n, k, l = p["n"], p["k"], p["l"]
    q = _q()
    numer = _dist(n, 2, "all", (("des*", "x"), (f"fmaj[{k},{l}]", "q")))
    return _x_series(lambda m: (1 + q ** l) ** n * q_analogue(m + 1, q ** k) ** n, numer,
                     _x_pochhammer(QX, q ** k, n + 1), t["M"], QX)


# derangements

def _derangement_count(p, t):
    n, r = p["n"], p["r"]
    formula = r ** n * factorial(n) * sum(Fraction((-1) ** k, r ** k * factorial(k))
                                          for k in range(n + 1))
    return _const(("q",), _count(n, r, "derangements")), _const(("q",), _frac_int(formula))


def _des_maj_derangements(p, t):
    n = p["n"]
    q = _q()

    def coeff(m):
        return sum((((-1) ** k * q ** comb(k, 2) * q_binomial(m + 1, k, q)
                     * q_analogue(m + 1, q) ** (n - k)) for k in range(n + 1)), _const(QX, 0))

    numer = _dist(n, 1, "derangements", (("des", "x"), ("maj", "q")))
    return _x_series(coeff, numer, _x_pochhammer(QX, q, n + 1), t["M"], QX)


def _fz_fmaj_derangements(p, t):
    n, r = p["n"], p["r"]
    q = _q(("q",))
    rhs = _const(("q",), 0)
    for k in range(n + 1):
        tail = _const(("q",), 1)
        for i in range(k + 1, n + 1):
            tail = tail * q_analogue(r * i, q)
        rhs = rhs + (-1) ** k * q ** (r * comb(k, 2)) * tail
    return _dist(n, r, "derangements", (("fmaj", "q"),)), rhs


def _des_fmaj_colored_derangements(p, t):
    n, r = p["n"], p["r"]
    q = _q()

    def coeff(m):
        return sum(((-1) ** k * q ** (r * comb(k, 2)) * q_binomial(m + 1, k, q ** r)
                    * q_analogue(r * m + 1, q) ** (n - k) for k in range(n + 1)), _const(QX, 0))

    numer = _dist(n, r, "derangements", (("des", "x"), ("fmaj", "q")))
    return _x_series(coeff, numer, _x_pochhammer(QX, q ** r, n + 1), t["M"], QX)


def _assaf_maj_derangements(p, t):
    n, r = p["n"], p["r"]
    q = _q(("q",))
    rhs = sum(((-1) ** k * r ** (n - k) * q ** comb(k, 2) * _falling_q(n, k, q)
               for k in range(n + 1)), _const(("q",), 0))
    return _dist(n, r, "derangements", (("maj", "q"),)), rhs


def _colored_gessel_reutenauer(p, t):
    # psi_m of sum_k (-1)^k e_k(x^(0)) h_1^(n-k), against the enumerated derangements
    n, r, m = p["n"], p["r"], p["m"]
    q = _q(("q",))
    table = build_table(SpecializationId("psi_m", r=r, m=m))
    lhs = _const(("q",), 0)
    for w in enumerate_group(n, r, "derangements"):
        lhs = lhs + evaluate_F(w, table)
    rhs = sum(((-1) ** k * q ** (r * comb(k, 2)) * q_binomial(m, k, q ** r)
               * q_analogue(r * (m - 1) + 1, q) ** (n - k) for k in range(n + 1)),
              _const(("q",), 0))
    return lhs, rhs


def _des_fmajkl_signed_derangements(p, t):
    n, k, l = p["n"], p["k"], p["l"]
    q = _q()

    def coeff(m):
        return sum(((-1) ** i * q ** (k * comb(i, 2)) * q_binomial(m + 1, i, q ** k)
                    * _kl_base(m, k, l, q) ** (n - i) for i in range(n + 1)), _const(QX, 0))

    numer = _dist(n, 2, "derangements", (("des", "x"), (f"fmaj[{k},{l}]", "q")))
    return _x_series(coeff, numer, _x_pochhammer(QX, q ** k, n + 1), t["M"], QX)


def _fmajkl_signed_derangements(p, t):
    n, k, l = p["n"], p["k"], p["l"]
    q = _q(("q",))
    rhs = sum(((-1) ** i * q ** (k * comb(i, 2)) * (1 + q ** l) ** (n - i)
               * _falling_q(n, i, q ** k) for i in range(n + 1)), _const(("q",), 0))
    return _dist(n, 2, "derangements", ((f"fmaj[{k},{l}]", "q"),)), rhs


# involutions

def _zx_compare(lhs_terms: Callable[[int], tuple[Poly, list[Poly]]],
                rhs_factors: Callable[[int], list[Poly]], N: int, M: int,
                vars: Sequence[str]) -> tuple[Poly, Poly]:
    """``sum_n z^n numer_n/den_n`` (expanded in x) against ``sum_m x^m / prod(factors_m)`` (in z)."""
    vars = canonical_universe(tuple(vars) + ("x", "z"))
    x, z = _gen(vars, "x"), _gen(vars, "z")
    lhs = _const(vars, 0)
    for n in range(N + 1):
        numer, factors = lhs_terms(n)
        series = expand_rational(_lift(numer, vars), [_lift(f, vars) for f in factors], "x", M)
        lhs = lhs + series * z ** n
    rhs = _const(vars, 0)
    for m in range(M + 1):
        series = expand_rational(_const(vars, 1), [_lift(f, vars) for f in rhs_factors(m)], "z", N)
        rhs = rhs + series * x ** m
    return lhs, rhs


def _involution_specs(r: int, pnames: Sequence[str], des: str) -> tuple:
    return ((des, "x"), ("fmaj", "q")) + tuple((f"fix[{j}]", pj) for j, pj in enumerate(pnames))


def _df_factors(r: int, m: int, pnames: Sequence[str], vars: Sequence[str],
                lengths: Sequence[int]) -> list[Poly]:
    """Factors of ``prod_c (p_c q^c z; q^r)_{L_c} prod_{0<=i<j<L_c} (1 - z^2 q^{r(i+j)+2c})``."""
    q, z = _gen(vars, "q"), _gen(vars, "z")
    out = []
    for c in range(r):
        pc = _gen(vars, pnames[c])
        L = max(lengths[c], 0)
        for i in range(L):
            out.append(1 - pc * z * q ** (r * i + c))
        for i in range(L):
            for j in range(i + 1, L):
                out.append(1 - z ** 2 * q ** (r * (i + j) + 2 * c))
    return out


def _colored_df_sides(r: int, pnames: Sequence[str], N: int, M: int):
    vars = canonical_universe(("q", "x", "z") + tuple(pnames))
    q = _gen(vars, "q")

    def lhs_terms(n):
        numer = _dist(n, r, "absolute_involutions", _involution_specs(r, pnames, "des"))
        return numer, _x_pochhammer(vars, q ** r, n + 1)

    def rhs_factors(m):
        return _df_factors(r, m, pnames, vars, [m + 1] + [m] * (r - 1))

    return _zx_compare(lhs_terms, rhs_factors, N, M, vars)


def _df_involutions(p, t):
    return _colored_df_sides(1, ("p",), t["N"], t["M"])


def _colored_df(p, t):
    return _colored_df_sides(p["r"], _pvars(p["r"]), t["N"], t["M"])


def _flag_df_sides(r: int, N: int, M: int, lengths: Callable[[int], list[int]]):
    pnames = _pvars(r)
    vars = canonical_universe(("q", "x", "z") + pnames)
    q, x = _gen(vars, "q"), _gen(vars, "x")

    def lhs_terms(n):
        numer = _dist(n, r, "absolute_involutions", _involution_specs(r, pnames, "fdes"))
        return q_analogue(r, x) * _lift(numer, vars), _x_pochhammer(vars, q ** r, n + 1, xpow=r)

    def rhs_factors(m):
        return _df_factors(r, m, pnames, vars, lengths(m))

    return _zx_compare(lhs_terms, rhs_factors, N, M, vars)


def _flag_colored_df_literal(p, t):
    # lengths floor(m/r) for color 0 and floor((m-1)/r) for the others, read literally
    r = p["r"]
    return _flag_df_sides(r, t["N"], t["M"], lambda m: [m // r] + [(m - 1) // r] * (r - 1))


def _flag_colored_df(p, t):
    # color c keeps the variables q^{rt+c} with rt + c <= m
    r = p["r"]
    return _flag_df_sides(r, t["N"], t["M"], lambda m: [(m - c) // r + 1 for c in range(r)])


def _hook_content(p, t):
    # one y-exponent per partition so that every shape is compared separately
    n, m = p["n"], p["m"]
    vars = ("q", "y")
    q = _q(("q",))
    table = build_table(SpecializationId("ps_m", r=1, m=m))
    lhs = _const(vars, 0)
    rhs = _const(vars, 0)
    for idx, lam in enumerate(partitions(n)):
        tag = _gen(vars, "y", idx)
        total = _const(("q",), 0)
        for Q in enumerate_syt([lam]):
            total = total + evaluate_F(Q, table)
        lhs = lhs + _lift(total, vars) * tag
        closed = q ** b_stat(lam) * hook_content_binomial(m, lam.conjugate(), q)
        rhs = rhs + _lift(closed, vars) * tag
    return lhs, rhs


def _em_involutions(p, t):
    n = p["n"]
    q = _q()

    def coeff(m):
        out = _const(QX, 0)
        for lam in partitions(n):
            out = out + q ** b_stat(lam) * hook_content_binomial(m + 1, lam.conjugate(), q)
        return out

    numer = _dist(n, 1, "involutions", (("des", "x"), ("maj", "q")))
    return _x_series(coeff, numer, _x_pochhammer(QX, q, n + 1), t["M"], QX)


def _abs_involution_count(p, t):
    n, r = p["n"], p["r"]
    formula = r ** n * factorial(n) * sum(Fraction(1, (2 * r) ** k * factorial(k) * factorial(n - 2 * k))
                                          for k in range(n // 2 + 1))
    return (_const(("q",), _count(n, r, "absolute_involutions")),
            _const(("q",), _frac_int(formula)))


def _abs_involution_recurrence(p, t):
    n, r = p["n"], p["r"]
    c = [_count(k, r, "absolute_involutions") for k in (n - 1, n, n + 1)]
    return _const(("q",), c[2]), _const(("q",), r * (c[1] + n * c[0]))


@lru_cache(maxsize=None)
def _two_cycle_counts(n: int) -> tuple:
    """``gamma[i]`` = number of involutions of S_n with ``i`` two-cycles."""
    out = [0] * (n // 2 + 1)
    for w in enumerate_group(n, 1, "involutions"):
        out[sum(1 for cyc, _ in cycles(w) if len(cyc) == 2)] += 1
    return tuple(out)


def _gamma(subset: str, shift: Callable[[int], int]):
    def sides(p, t):
        n, r = p["n"], p["r"]
        vars = ("x",)
        x = _gen(vars, "x")
        rhs = _const(vars, 0)
        for i, g in enumerate(_two_cycle_counts(n)):
            rhs = rhs + r ** i * g * x ** i * (1 + shift(r) * x) ** (n - 2 * i)
        return _dist(n, r, subset, (("exc", "x"),)), rhs
    return sides


def _single_color_table(t: SubstitutionTable, j: int) -> SubstitutionTable:
    return SubstitutionTable(1, {(0, i): e for (c, i), e in t.entries.items() if c == j})


def _abs_involution_schur(p, t):
    # enumerated absolute involutions (weighted by colored fixed points) against
    # the product over colors of specialized Schur functions weighted by odd columns
    n, r, m = p["n"], p["r"], p["m"]
    pnames = _pvars(r)
    vars = canonical_universe(("q",) + pnames)
    table = build_table(SpecializationId("psi_m_tilde", r=r, m=m))
    lhs = _const(vars, 0)
    for w in enumerate_group(n, r, "absolute_involutions"):
        weight = _const(vars, 1)
        for j, f in enumerate(fix_by_color(w)):
            weight = weight * _gen(vars, pnames[j], f)
        lhs = lhs + _lift(evaluate_F(w, table), vars) * weight
    rows = [_single_color_table(table, j) for j in range(r)]
    schur: dict = {}

    def schur_value(j, lam):
        key = (j, tuple(lam))
        if key not in schur:
            total = _const(("q",), 0)
            for Q in enumerate_syt([lam]):
                total = total + evaluate_F(Q, rows[j])
            schur[key] = total
        return schur[key]

    rhs = _const(vars, 0)
    for lams in enumerate_rpartite_partitions(n, r):
        term = _const(vars, 1)
        for j, lam in enumerate(lams):
            term = term * _lift(schur_value(j, lam), vars) * _gen(vars, pnames[j], odd_columns(lam))
        rhs = rhs + term
    return lhs, rhs


def _abs_inv_coeff(n: int, r: int, m: int, base_power: int, shifted: bool) -> Poly:
    """``sum_lam q^{base*b + shift} binom(m+1, lam0')_{q^base} prod_j binom(m, lamj')_{q^base}``.

    ``b`` is taken componentwise, ``sum_j b(lam^(j))``.
    """
    q = _q()
    v = q ** base_power
    out = _const(QX, 0)
    for lams in enumerate_rpartite_partitions(n, r):
        expo = base_power * sum(b_stat(lam) for lam in lams)
        if shifted:
            expo += sum(j * lam.size for j, lam in enumerate(lams))
        term = q ** expo
        for j, lam in enumerate(lams):
            term = term * hook_content_binomial(m + 1 if j == 0 else m, lam.conjugate(), v)
            if term.is_zero():
                break
        out = out + term
    return out


def _des_fmaj_abs_inv(p, t):
    n, r = p["n"], p["r"]
    numer = _dist(n, r, "absolute_involutions", (("des", "x"), ("fmaj", "q")))
    return _x_series(lambda m: _abs_inv_coeff(n, r, m, r, True), numer,
                     _x_pochhammer(QX, _q() ** r, n + 1), t["M"], QX)


def _des_maj_abs_inv(p, t):
    n, r = p["n"], p["r"]
    numer = _dist(n, r, "absolute_involutions", (("des", "x"), ("maj", "q")))
    return _x_series(lambda m: _abs_inv_coeff(n, r, m, 1, False), numer,
                     _x_pochhammer(QX, _q(), n + 1), t["M"], QX)


def _colored_athanasiadis(p, t):
    n, r = p["n"], p["r"]
    vars = ("x",)
    x = _gen(vars, "x")
    lhs = r ** n * factorial(n) * _dist(n, r, "absolute_involutions", (("des", "x"),))
    by_c0: dict[int, int] = {}
    for w in enumerate_group(n, r):
        c0 = sum(1 for _, color in cycles(compose(w, bar(w))) if color == 0)
        by_c0[c0] = by_c0.get(c0, 0) + 1
    rhs = _const(vars, 0)
    for c0, mult in sorted(by_c0.items()):
        eulerian = _dist(c0, r, "all", (("des", "x"),))
        rhs = rhs + mult * (1 - x) ** (n - c0) * _lift(eulerian, vars)
    return lhs, rhs


# bimahonian

def _cauchy_kernel(p, t):
    n, r, m = p["n"], p["r"], p["m"]
    vars = ("q", "p")
    left = build_table(SpecializationId("ps_m_tilde", r=r, m=m))
    right = build_table(SpecializationId("psi_m", r=r, m=m))
    lhs = _const(vars, 0)
    for w in enumerate_group(n, r):
        a = evaluate_F(w, left, "q").embed(vars)
        b = evaluate_F(inverse(bar(w)), right, "p").embed(vars)
        lhs = lhs + a * b
    alphabet = [Poly.monomial(vars, q=ei, p=ej)
                for (c, _), ei in left.entries.items()
                for (d, _), ej in right.entries.items() if c == d]
    return lhs, complete_homogeneous(alphabet, n, vars)


QPXYZ = ("q", "p", "x", "y", "z")
QPZ = ("q", "p", "z")


def _grid(vars, qstep: int, pstep: int, qshift: int, pshift: int, I: int, J: int) -> list[Poly]:
    """Letters ``q^{qstep*i + qshift} p^{pstep*j + pshift}`` for ``i < I``, ``j < J``."""
    return [Poly.monomial(vars, q=qstep * i + qshift, p=pstep * j + pshift)
            for i in range(max(I, 0)) for j in range(max(J, 0))]


def _bimahonian_finite(specs: tuple, subset_r: int, xden: Callable[[int], list[Poly]],
                       yden: Callable[[int], list[Poly]], alphabet: Callable[[int, int], list[Poly]],
                       N: int, M: int, prefactor: Optional[Poly] = None) -> tuple[Poly, Poly]:
    vars = QPXYZ
    x, y, z = _gen(vars, "x"), _gen(vars, "y"), _gen(vars, "z")
    lhs = _const(vars, 0)
    for n in range(N + 1):
        numer = _lift(_dist(n, subset_r, "all", specs), vars)
        if prefactor is not None:
            numer = numer * prefactor
        s = expand_rational(numer, xden(n), "x", M)
        s = expand_rational(s, yden(n), "y", M)
        lhs = lhs + s * z ** n
    rhs = _const(vars, 0)
    for m1 in range(M + 1):
        for m2 in range(M + 1):
            letters = alphabet(m1, m2)
            zpart = _const(vars, 0)
            for n in range(N + 1):
                zpart = zpart + complete_homogeneous(letters, n, vars) * z ** n
            rhs = rhs + zpart * x ** m1 * y ** m2
    return lhs, rhs


def _bimahonian_stable(specs: tuple, subset_r: int, qbase: int, pbase: int,
                       alphabet: Callable[[int], list[Poly]], N: int, cap: int) -> tuple[Poly, Poly]:
    vars = QPZ
    q, pv, z = _gen(vars, "q"), _gen(vars, "p"), _gen(vars, "z")
    dc = DegreeCap(q=cap, p=cap)
    lhs = _const(vars, 0)
    for n in range(N + 1):
        numer = _lift(_dist(n, subset_r, "all", specs), vars)
        s = expand_rational(numer, [1 - q ** (qbase * i) for i in range(1, n + 1)], "q", cap)
        s = expand_rational(s, [1 - pv ** (pbase * i) for i in range(1, n + 1)], "p", cap, dc)
        lhs = lhs + s * z ** n
    letters = alphabet(cap)
    rhs = _const(vars, 0)
    for n in range(N + 1):
        rhs = rhs + complete_homogeneous(letters, n, vars, dc) * z ** n
    return lhs, rhs


def _den(vars, var: str, base_var: str, step: int, n: int, xpow: int = 1) -> list[Poly]:
    v, b = _gen(vars, var, xpow), _gen(vars, base_var)
    return [1 - v * b ** (step * i) for i in range(n + 1)]


def _maj_imaj(p, t):
    r = p["r"]
    specs = (("maj", "q"), ("bar-imaj", "p"))
    return _bimahonian_stable(specs, r, 1, 1,
                              lambda cap: _grid(QPZ, 1, 1, 0, 0, cap + 1, cap + 1) * r,
                              t["N"], t["cap"])


def _fmaj_ifmaj(p, t):
    r = p["r"]
    specs = (("fmaj", "q"), ("bar-ifmaj", "p"))

    def alphabet(cap):
        out = []
        for c in range(r):
            out += _grid(QPZ, r, r, c, c, cap // r + 1, cap // r + 1)
        return out

    return _bimahonian_stable(specs, r, r, r, alphabet, t["N"], t["cap"])


def _fmajkl_ifmajkl(p, t):
    k, l, k2, l2 = p["k"], p["l"], p["k2"], p["l2"]
    specs = ((f"fmaj[{k},{l}]", "q"), (f"bar-ifmaj[{k2},{l2}]", "p"))

    def alphabet(cap):
        return (_grid(QPZ, k, k2, 0, 0, cap // k + 1, cap // k2 + 1)
                + _grid(QPZ, k, k2, l, l2, cap // k + 1, cap // k2 + 1))

    return _bimahonian_stable(specs, 2, k, k2, alphabet, t["N"], t["cap"])


def _des_ides(des: str, ides: str, mahonian: str, imahonian: str):
    return ((des, "x"), (ides, "y"), (mahonian, "q"), (imahonian, "p"))


def _des_ides_maj_imaj(p, t):
    r = p["r"]
    specs = _des_ides("des", "bar-ides", "maj", "bar-imaj")
    return _bimahonian_finite(
        specs, r, lambda n: _den(QPXYZ, "x", "q", 1, n), lambda n: _den(QPXYZ, "y", "p", 1, n),
        lambda a, b: _grid(QPXYZ, 1, 1, 0, 0, a + 1, b + 1) + _grid(QPXYZ, 1, 1, 0, 0, a, b) * (r - 1),
        t["N"], t["M"])


def _desstar_ides_maj_imaj(p, t):
    r = p["r"]
    specs = _des_ides("des*", "bar-ides*", "maj", "bar-imaj")
    return _bimahonian_finite(
        specs, r, lambda n: _den(QPXYZ, "x", "q", 1, n), lambda n: _den(QPXYZ, "y", "p", 1, n),
        lambda a, b: _grid(QPXYZ, 1, 1, 0, 0, a + 1, b + 1) * r, t["N"], t["M"])


def _des_ides_fmaj_ifmaj(p, t):
    r = p["r"]
    specs = _des_ides("des", "bar-ides", "fmaj", "bar-ifmaj")

    def alphabet(a, b):
        out = _grid(QPXYZ, r, r, 0, 0, a + 1, b + 1)
        for c in range(1, r):
            out += _grid(QPXYZ, r, r, c, c, a, b)
        return out

    return _bimahonian_finite(
        specs, r, lambda n: _den(QPXYZ, "x", "q", r, n), lambda n: _den(QPXYZ, "y", "p", r, n),
        alphabet, t["N"], t["M"])


def _desstar_ides_fmaj_ifmaj(p, t):
    r = p["r"]
    specs = _des_ides("des*", "bar-ides*", "fmaj", "bar-ifmaj")

    def alphabet(a, b):
        out = []
        for c in range(r):
            out += _grid(QPXYZ, r, r, c, c, a + 1, b + 1)
        return out

    return _bimahonian_finite(
        specs, r, lambda n: _den(QPXYZ, "x", "q", r, n), lambda n: _den(QPXYZ, "y", "p", r, n),
        alphabet, t["N"], t["M"])


def _fdes_ifdes_sides(r: int, N: int, M: int, length: Callable[[int, int], int]):
    specs = _des_ides("fdes", "bar-ifdes", "fmaj", "bar-ifmaj")
    x, y = _gen(QPXYZ, "x"), _gen(QPXYZ, "y")

    def alphabet(a, b):
        out = []
        for c in range(r):
            out += _grid(QPXYZ, r, r, c, c, length(a, c), length(b, c))
        return out

    return _bimahonian_finite(
        specs, r, lambda n: _den(QPXYZ, "x", "q", r, n, xpow=r),
        lambda n: _den(QPXYZ, "y", "p", r, n, xpow=r), alphabet, N, M,
        prefactor=q_analogue(r, x) * q_analogue(r, y))


def _fdes_ifdes_fmaj_ifmaj_literal(p, t):
    # floor(m/r)+1 for color 0 and floor((m-1)/r)+1 for every other color, read literally
    r = p["r"]
    return _fdes_ifdes_sides(r, t["N"], t["M"],
                             lambda m, c: m // r + 1 if c == 0 else (m - 1) // r + 1)


def _fdes_ifdes_fmaj_ifmaj(p, t):
    r = p["r"]
    return _fdes_ifdes_sides(r, t["N"], t["M"], lambda m, c: (m - c) // r + 1)


def _des_ides_fmajkl(p, t):
    k, l, k2, l2 = p["k"], p["l"], p["k2"], p["l2"]
    specs = _des_ides("des", "bar-ides", f"fmaj[{k},{l}]", f"bar-ifmaj[{k2},{l2}]")
    return _bimahonian_finite(
        specs, 2, lambda n: _den(QPXYZ, "x", "q", k, n), lambda n: _den(QPXYZ, "y", "p", k2, n),
        lambda a, b: _grid(QPXYZ, k, k2, 0, 0, a + 1, b + 1) + _grid(QPXYZ, k, k2, l, l2, a, b),
        t["N"], t["M"])


# registry

def _grid_points(**ranges) -> tuple:
    names = list(ranges)
    return tuple(dict(zip(names, combo)) for combo in product(*(ranges[k] for k in names)))


def _even_r(params):
    return None if params["r"] % 2 == 0 else "r must be even"


KL_PAIRS = ((1, 0), (2, 1), (3, 2))


def _kl_grid(ns) -> tuple:
    return tuple({"n": n, "k": k, "l": l} for n in ns for k, l in KL_PAIRS)


def _klkl_grid() -> tuple:
    pairs = ((1, 0), (2, 1))
    return tuple({"k": k, "l": l, "k2": k2, "l2": l2} for k, l in pairs for k2, l2 in pairs)


M_DEFAULT = 5
N_DEFAULT = 3
CAP_DEFAULT = 12


def _build_registry() -> tuple[IdentityRecord, ...]:
    nr = {"n": (0, 7), "r": (1, 4)}
    nr_grid = _grid_points(n=range(1, 6), r=range(1, 4))
    nr_small = _grid_points(n=range(1, 5), r=range(1, 4))
    n_only = {"n": (0, 8)}
    kl = {"n": (0, 6), "k": (1, 5), "l": (0, 5)}
    klkl = {"k": (1, 4), "l": (0, 4), "k2": (1, 4), "l2": (0, 4)}
    xs = {"M": M_DEFAULT}
    zx = {"N": N_DEFAULT, "M": M_DEFAULT}
    zxy = {"N": N_DEFAULT, "M": 4}
    stable = {"N": N_DEFAULT, "cap": CAP_DEFAULT}
    r_grid = _grid_points(r=range(1, 4))

    def rec(id_, summary, strategy, sides, validity, truncations, grid, check=None, note=""):
        return IdentityRecord(id_, summary, strategy, sides, MappingProxyType(dict(validity)),
                              MappingProxyType(dict(truncations)), tuple(grid), check, note)

    literal_note = "literal form; disagrees with enumeration, see {} for the form that matches"

    records = [
        # classical base cases
        rec("carlitz", "Carlitz: sum_m [m+1]_q^n x^m = A_n(x,q)/(x;q)_{n+1} on S_n",
            "x_series", _carlitz, n_only, xs, _grid_points(n=range(0, 6))),
        rec("euler", "Eulerian polynomials: sum_m (m+1)^n x^m = A_n(x)/(1-x)^{n+1}",
            "x_series", _euler, n_only, xs, _grid_points(n=range(0, 6))),
        rec("macmahon", "MacMahon: maj on S_n is [n]_q!",
            "poly_equal", _macmahon, n_only, {}, _grid_points(n=range(0, 7))),
        rec("wachs", "Wachs: maj on derangements is [n]_q! sum_k (-1)^k q^C(k,2)/[k]_q!",
            "poly_equal", _wachs, n_only, {}, _grid_points(n=range(0, 7))),
        rec("principal_specialization",
            "order-m principal specialization of F over absolute involutions vs (des, maj)/(x;q)_{n+1}",
            "x_series", _principal_specialization, {"n": (0, 5), "r": (1, 3)}, xs,
            _grid_points(n=range(1, 5), r=range(1, 4))),
        rec("stable_specialization",
            "stable principal specialization of F over colored derangements vs maj/(q)_n mod q^{cap+1}",
            "poly_equal", _stable_specialization, {"n": (0, 5), "r": (1, 3)}, {"cap": 8},
            _grid_points(n=range(1, 4), r=range(1, 4))),
        rec("power_sum", "sum over S_{n,r} of F_w at any table is (sum of the table entries)^n",
            "poly_equal", _power_sum, {"n": (0, 4), "r": (1, 3), "m": (1, 5)}, {},
            _grid_points(n=range(1, 4), r=range(1, 4), m=(2, 3))),
        # the whole group
        rec("steingrimsson_des", "sum_m (rm+1)^n x^m = des/(1-x)^{n+1}, color order",
            "x_series", _steingrimsson("des@color"), nr, xs, nr_grid),
        rec("steingrimsson_des_natural",
            "sum_m (rm+1)^n x^m = des/(1-x)^{n+1}, natural order with the n-descent",
            "x_series", _steingrimsson("des@natural+n"), nr, xs, nr_grid),
        rec("steingrimsson_des_length", "sum_m (rm+1)^n x^m = des/(1-x)^{n+1}, length order",
            "x_series", _steingrimsson("des@length"), nr, xs, nr_grid),
        rec("des_equidistributed_natural",
            "des: natural order with the zero-descent vs color order", "poly_equal",
            _des_equidistributed("des@natural"), nr, {}, nr_small,
            note="literal form; the natural order is Eulerian only with the n-descent, "
                 "see des_equidistributed_natural_n"),
        rec("des_equidistributed_natural_n",
            "des: natural order with the n-descent vs color order", "poly_equal",
            _des_equidistributed("des@natural+n"), nr, {}, nr_small),
        rec("des_equidistributed_length", "des: length order vs color order", "poly_equal",
            _des_equidistributed("des@length"), nr, {}, nr_small),
        rec("poincare_lmaj", "lmaj on S_{n,r} is [n]_q! prod_i (1 + q^i [r-1]_q)",
            "poly_equal", _poincare_lmaj, nr, {}, nr_grid),
        rec("fmaj_dist", "fmaj on S_{n,r} is [r]_q [2r]_q ... [nr]_q, color order",
            "poly_equal", _fmaj_dist("fmaj@color"), nr, {}, nr_grid),
        rec("fmaj_dist_natural", "r*maj - csum (natural order, n-descent) is [r]_q ... [nr]_q",
            "poly_equal", _fmaj_dist("fmaj@natural+n"), nr, {}, nr_grid),
        rec("fmaj_dist_length", "fmaj on S_{n,r} is [r]_q ... [nr]_q, length order",
            "poly_equal", _fmaj_dist("fmaj@length"), nr, {}, nr_grid),
        rec("chow_mansour_relation",
            "pointwise: fmaj (color) = r*maj (natural, n-descent) - csum, same w on both sides",
            "poly_equal", _chow_mansour_count(False), nr, {},
            _grid_points(n=range(1, 5), r=range(1, 5)),
            note=literal_note.format("chow_mansour_relation_corrected")),
        rec("chow_mansour_relation_corrected",
            "pointwise: fmaj (color) of w = r*maj - csum (natural, n-descent) of the conjugate wbar",
            "poly_equal", _chow_mansour_count(True), nr, {},
            _grid_points(n=range(1, 5), r=range(1, 5))),
        rec("des_fmaj", "sum_m [rm+1]_q^n x^m = (des, fmaj)/(x;q^r)_{n+1}, color order",
            "x_series", _des_fmaj("des@color", "fmaj@color"), nr, xs, nr_grid),
        rec("des_fmaj_natural",
            "sum_m [rm+1]_q^n x^m = (des, r*maj - csum)/(x;q^r)_{n+1}, natural order with n-descent",
            "x_series", _des_fmaj("des@natural+n", "fmaj@natural+n"), nr, xs, nr_grid),
        rec("des_fmaj_length", "sum_m [rm+1]_q^n x^m = (des, fmaj)/(x;q^r)_{n+1}, length order",
            "x_series", _des_fmaj("des@length", "fmaj@length"), nr, xs, nr_grid),
        rec("desL_majL", "sum_m ([m+1]_q + (r-1)[m]_q)^n x^m = (des, maj)/(x;q)_{n+1}, length order",
            "x_series", _des_maj("length"), nr, xs, nr_grid),
        rec("fdes_fmaj", "sum_m [m+1]_q^n x^m = (fdes, fmaj)/((1-x) prod_i (1 - x^r q^{ri}))",
            "x_series", _fdes_fmaj, nr, xs, nr_grid),
        rec("ldes_lmaj",
            "sum_m [m+1]_q^n x^m = (ldes, lmaj)/((x;q)_{n+1} (-x[r-1]_{qx}; q)_{n+1}), literal reading",
            "x_series", _ldes_lmaj_literal, nr, xs, nr_grid,
            note=literal_note.format("ldes_lmaj_corrected")),
        rec("ldes_lmaj_corrected",
            "sum_m [m+1]_q^n x^m = (ldes, lmaj)/((x;q)_{n+1} (-xq[r-1]_{qx}; q)_n)",
            "x_series", _ldes_lmaj, nr, xs, nr_grid),
        rec("maj_dist_colored", "maj on S_{n,r} is r^n [n]_q!",
            "poly_equal", _maj_dist_colored, nr, {}, nr_grid),
        rec("des_maj_colored", "sum_m ([m+1]_q + (r-1)[m]_q)^n x^m = (des, maj)/(x;q)_{n+1}, color order",
            "x_series", _des_maj("color"), nr, xs, nr_grid),
        rec("desstar_maj", "sum_m r^n [m+1]_q^n x^m = (des*, maj)/(x;q)_{n+1}",
            "x_series", _desstar_maj, nr, xs, nr_grid),
        rec("fmaj_family", "sum_m [r(m+1)]_q^n x^m = (des*, fmaj)/(x;q^r)_{n+1}",
            "x_series", _desstar_fmaj, nr, xs, nr_grid),
        rec("fdes_fmaj_colored", "sum_m [m+1]_q^n x^m = (fdes, fmaj)/((1-x) prod_i (1 - x^r q^{ri}))",
            "x_series", _fdes_fmaj, nr, xs, nr_grid),
        rec("fmajkl_dist", "fmaj_{k,l} on B_n is (1+q^l)^n [n]_{q^k}!",
            "poly_equal", _fmajkl_dist, kl, {}, _kl_grid(range(1, 6))),
        rec("des_fmajkl",
            "sum_m ([m+1]_{q^k} + q^l [m]_{q^k})^n x^m = (des, fmaj_{k,l})/(x;q^k)_{n+1} on B_n",
            "x_series", _des_fmajkl, kl, xs, _kl_grid(range(1, 6))),
        rec("desstar_fmajkl", "sum_m (1+q^l)^n [m+1]_{q^k}^n x^m = (des*, fmaj_{k,l})/(x;q^k)_{n+1} on B_n",
            "x_series", _desstar_fmajkl, kl, xs, _kl_grid(range(1, 6))),
        # derangements
        rec("derangement_count", "colored derangements: r^n n! sum_k (-1)^k/(r^k k!)",
            "poly_equal", _derangement_count, nr, {}, _grid_points(n=range(0, 7), r=range(1, 4))),
        rec("des_maj_derangements",
            "sum_m sum_k (-1)^k q^C(k,2) [m+1 choose k]_q [m+1]_q^{n-k} x^m = D_n(x,q)/(x;q)_{n+1}",
            "x_series", _des_maj_derangements, n_only, xs, _grid_points(n=range(1, 7))),
        rec("fz_fmaj_derangements",
            "fmaj on colored derangements: [r]..[nr] sum_k (-1)^k q^{rC(k,2)}/([r]..[kr])",
            "poly_equal", _fz_fmaj_derangements, nr, {}, nr_grid),
        rec("des_fmaj_colored_derangements",
            "sum_m sum_k (-1)^k q^{rC(k,2)} [m+1 choose k]_{q^r} [rm+1]_q^{n-k} x^m = (des, fmaj)/(x;q^r)_{n+1}",
            "x_series", _des_fmaj_colored_derangements, nr, xs, nr_grid),
        rec("assaf_maj_derangements",
            "maj on colored derangements: r^n [n]_q! sum_k (-1)^k q^C(k,2)/(r^k [k]_q!)",
            "poly_equal", _assaf_maj_derangements, nr, {}, nr_grid),
        rec("colored_gessel_reutenauer",
            "psi_m of the colored derangement expansion vs F summed over colored derangements",
            "poly_equal", _colored_gessel_reutenauer, {"n": (0, 4), "r": (1, 3), "m": (1, 5)}, {},
            _grid_points(n=range(1, 4), r=range(1, 4), m=range(1, 5))),
        rec("des_fmajkl_signed_derangements",
            "sum_m sum_i (-1)^i q^{kC(i,2)} [m+1 choose i]_{q^k} (...)^{n-i} x^m = (des, fmaj_{k,l})/(x;q^k)_{n+1}",
            "x_series", _des_fmajkl_signed_derangements, kl, xs, _kl_grid(range(1, 6))),
        rec("fmajkl_signed_derangements",
            "fmaj_{k,l} on signed derangements: (1+q^l)^n [n]_{q^k}! sum_i (-1)^i q^{kC(i,2)}/((1+q^l)^i [i]_{q^k}!)",
            "poly_equal", _fmajkl_signed_derangements, kl, {}, _kl_grid(range(1, 6))),
        # involutions
        rec("df_involutions",
            "sum_n I_n(x,q,p)/(x;q)_{n+1} z^n = sum_m x^m/((pz;q)_{m+1} prod_{i<j<=m}(1 - z^2 q^{i+j}))",
            "zx_series", _df_involutions, {}, zx, ({},)),
        rec("hook_content", "sum over SYT(lam) of F_Q at order m = q^b(lam) [m choose lam']_q",
            "poly_equal", _hook_content, {"n": (0, 6), "m": (0, 6)}, {},
            _grid_points(n=range(1, 6), m=range(0, 6))),
        rec("em_involutions",
            "sum_m sum_lam q^b(lam) [m+1 choose lam']_q x^m = I_n(x,q)/(x;q)_{n+1}",
            "x_series", _em_involutions, n_only, xs, _grid_points(n=range(1, 7))),
        rec("abs_involution_count",
            "absolute involutions: r^n n! sum_k (1/2r)^k/(k! (n-2k)!)",
            "poly_equal", _abs_involution_count, nr, {}, _grid_points(n=range(0, 7), r=range(1, 4))),
        rec("abs_involution_recurrence", "absolute involutions: a_{n+1} = r (a_n + n a_{n-1})",
            "poly_equal", _abs_involution_recurrence, {"n": (1, 6), "r": (1, 4)}, {},
            _grid_points(n=range(1, 6), r=range(1, 4))),
        rec("gamma_colored_involutions",
            "exc on colored involutions = sum_i r^i gamma_{n,i} x^i (1+x)^{n-2i}, r even",
            "poly_equal", _gamma("involutions", lambda r: 1), {"n": (0, 6), "r": (2, 4)}, {},
            _grid_points(n=range(1, 6), r=(2, 4)), check=_even_r),
        rec("gamma_abs_involutions",
            "exc on absolute involutions = sum_i r^i gamma_{n,i} x^i (1+(r-1)x)^{n-2i}",
            "poly_equal", _gamma("absolute_involutions", lambda r: r - 1), nr, {}, nr_grid),
        rec("abs_involution_schur",
            "F over absolute involutions by colored fixed points = sum prod_j s_lam(j) p_j^{odd columns}",
            "poly_equal", _abs_involution_schur, {"n": (0, 4), "r": (1, 3), "m": (1, 4)}, {},
            _grid_points(n=range(1, 5), r=range(1, 4), m=(2, 3))),
        rec("colored_df",
            "sum_n I_n(x,q,p_0..)/(x;q^r)_{n+1} z^n = sum_m x^m / (colored Desarmenien-Foata products)",
            "zx_series", _colored_df, {"r": (1, 3)}, zx, r_grid),
        rec("flag_colored_df",
            "flag version with [x]_r and (x^r;q^r)_{n+1}; product lengths floor(m/r), floor((m-1)/r)",
            "zx_series", _flag_colored_df_literal, {"r": (1, 3)}, zx, r_grid,
            note=literal_note.format("flag_colored_df_corrected")),
        rec("flag_colored_df_corrected",
            "flag version with [x]_r and (x^r;q^r)_{n+1}; color c uses q^{rt+c} for rt+c <= m",
            "zx_series", _flag_colored_df, {"r": (1, 3)}, zx, r_grid),
        rec("des_fmaj_abs_inv",
            "sum_m sum_lam q^{r b + sum j|lam_j|} [m+1 choose lam0']_{q^r} prod [m choose lamj']_{q^r} x^m "
            "= (des, fmaj)/(x;q^r)_{n+1} on absolute involutions",
            "x_series", _des_fmaj_abs_inv, {"n": (0, 5), "r": (1, 3)}, xs, nr_small),
        rec("des_maj_abs_inv",
            "sum_m sum_lam q^b [m+1 choose lam0']_q prod [m choose lamj']_q x^m = (des, maj)/(x;q)_{n+1}",
            "x_series", _des_maj_abs_inv, {"n": (0, 5), "r": (1, 3)}, xs, nr_small),
        rec("colored_athanasiadis",
            "r^n n! I_n(x) = sum_w (1-x)^{n - c0(w wbar)} A_{c0(w wbar), r}(x) on absolute involutions",
            "poly_equal", _colored_athanasiadis, {"n": (0, 5), "r": (1, 3)}, {}, nr_small),
        # bimahonian
        rec("cauchy_kernel",
            "sum_w F_w(t) F_{wbar^-1}(t') = h_n over the products t(c,i) t'(c,j)",
            "poly_equal", _cauchy_kernel, {"n": (0, 4), "r": (1, 3), "m": (1, 4)}, {},
            _grid_points(n=range(1, 4), r=range(1, 4), m=(2, 3))),
        rec("maj_imaj", "sum_n (maj, bar-imaj)/((q)_n (p)_n) z^n = 1/(z;q,p)_{inf,inf}^r",
            "zxy_qp_series", _maj_imaj, {"r": (1, 3)}, stable, r_grid),
        rec("des_ides_maj_imaj",
            "(des, bar-ides, maj, bar-imaj)/((x;q)_{n+1}(y;p)_{n+1}) vs (z;q,p)_{a+1,b+1} (z;q,p)_{a,b}^{r-1}",
            "zxy_qp_series", _des_ides_maj_imaj, {"r": (1, 3)}, zxy, r_grid),
        rec("desstar_ides_maj_imaj",
            "(des*, bar-ides*, maj, bar-imaj)/((x;q)_{n+1}(y;p)_{n+1}) vs (z;q,p)_{a+1,b+1}^r",
            "zxy_qp_series", _desstar_ides_maj_imaj, {"r": (1, 3)}, zxy, r_grid),
        rec("fmaj_ifmaj",
            "sum_n (fmaj, bar-ifmaj)/((q^r)_n (p^r)_n) z^n = prod_c 1/(z(qp)^c; q^r, p^r)_{inf,inf}",
            "zxy_qp_series", _fmaj_ifmaj, {"r": (1, 3)}, stable, r_grid),
        rec("des_ides_fmaj_ifmaj",
            "(des, bar-ides, fmaj, bar-ifmaj)/((x;q^r)_{n+1}(y;p^r)_{n+1}) vs double Pochhammer products",
            "zxy_qp_series", _des_ides_fmaj_ifmaj, {"r": (1, 3)}, zxy, r_grid),
        rec("desstar_ides_fmaj_ifmaj",
            "(des*, bar-ides*, fmaj, bar-ifmaj)/((x;q^r)_{n+1}(y;p^r)_{n+1}) vs prod_c (z(qp)^c;..)_{a+1,b+1}",
            "zxy_qp_series", _desstar_ides_fmaj_ifmaj, {"r": (1, 3)}, zxy, r_grid),
        rec("fdes_ifdes_fmaj_ifmaj",
            "[r]_x [r]_y (fdes, bar-ifdes, fmaj, bar-ifmaj)/((x^r;q^r)(y^r;p^r)); lengths floor(m/r), floor((m-1)/r)",
            "zxy_qp_series", _fdes_ifdes_fmaj_ifmaj_literal, {"r": (1, 3)}, zxy, r_grid,
            note=literal_note.format("fdes_ifdes_fmaj_ifmaj_corrected")),
        rec("fdes_ifdes_fmaj_ifmaj_corrected",
            "[r]_x [r]_y (fdes, bar-ifdes, fmaj, bar-ifmaj)/((x^r;q^r)(y^r;p^r)); color c length floor((m-c)/r)+1",
            "zxy_qp_series", _fdes_ifdes_fmaj_ifmaj, {"r": (1, 3)}, zxy, r_grid),
        rec("fmajkl_ifmajkl",
            "sum_n (fmaj_{k,l}, bar-ifmaj_{k',l'})/((q^k)_n (p^k')_n) z^n on B_n vs two double products",
            "zxy_qp_series", _fmajkl_ifmajkl, klkl, {"N": 4, "cap": CAP_DEFAULT}, _klkl_grid()),
        rec("des_ides_fmajkl",
            "(des, bar-ides, fmaj_{k,l}, bar-ifmaj_{k',l'})/((x;q^k)_{n+1}(y;p^k')_{n+1}) on B_n",
            "zxy_qp_series", _des_ides_fmajkl, klkl, {"N": 4, "M": 4}, _klkl_grid()),
    ]
    ids = [r.id for r in records]
    assert len(ids) == len(set(ids)), "duplicate identity ids"
    for r in records:
        assert r.strategy in STRATEGIES, r.id
    return tuple(records)


_REGISTRY: tuple[IdentityRecord, ...] = _build_registry()
_BY_ID = MappingProxyType({r.id: r for r in _REGISTRY})

# records whose literal form is expected to fail somewhere on its default grid
LITERAL_FORMS = tuple(r.id for r in _REGISTRY if r.note)


def registry() -> list[IdentityRecord]:
    """Every record, in a fixed order."""
    return list(_REGISTRY)


def get_record(id_: str) -> IdentityRecord:
    try:
        return _BY_ID[id_]
    except KeyError:
        raise UnknownIdentity(f"unknown identity id {id_!r}") from None


def _split_kwargs(rec: IdentityRecord, kw: Mapping) -> tuple[dict, dict]:
    params, truncs = {}, {}
    for name, val in kw.items():
        if name in rec.truncations:
            truncs[name] = val
        else:
            params[name] = val
    return params, truncs


def verify(id: str, params: Optional[Mapping] = None, truncations: Optional[Mapping] = None,
           **kw: int) -> VerifyReport:
    """Check one record at one parameter point.

    Keyword arguments are sorted into parameters and truncations by the
    record's declarations, so ``verify("carlitz", n=2, M=3)`` works.

    >>> verify("fmaj_dist", n=1, r=3).passed
    True
    """
    rec = get_record(id)
    p_kw, t_kw = _split_kwargs(rec, kw)
    params = {**(params or {}), **p_kw}
    truncations = {**(truncations or {}), **t_kw}
    params, truncations = rec.validate(params, truncations)
    lhs, rhs = rec.sides(params, truncations)
    mm = _first_mismatch(lhs, rhs)
    return VerifyReport(rec.id, params, truncations, mm is None, mm, None, lhs, rhs)


def _run_one(entry: tuple) -> VerifyReport:
    id_, params, truncations = entry
    try:
        return verify(id_, params, truncations).stripped()
    except EmLabError as exc:
        return VerifyReport(id_, dict(params), dict(truncations), False,
                            error=f"{type(exc).__name__}: {exc}")


def default_entries() -> list[tuple]:
    return [(r.id, dict(point), {}) for r in _REGISTRY for point in r.default_grid]


def _normalize_entries(grid: Iterable) -> list[tuple]:
    out = []
    for item in grid:
        if isinstance(item, Mapping):
            out.append((item["id"], dict(item.get("params", {})), dict(item.get("truncations", {}))))
        else:
            id_, params, truncations = item
            out.append((id_, dict(params), dict(truncations)))
    return out


def default_workers() -> int:
    env = os.environ.get("EM_LAB_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def verify_all(grid_override: Optional[Iterable] = None, workers: Optional[int] = None) -> list[VerifyReport]:
    """Run every record over its default grid, or over ``grid_override``.

    ``grid_override`` is a list of ``{"id", "params", "truncations"}``
    entries.  Failures, including invalid parameters, come back as reports
    rather than exceptions.  The result is sorted by (id, params,
    truncations) whatever the number of workers.
    """
    entries = default_entries() if grid_override is None else _normalize_entries(grid_override)
    # truncation defaults are filled in so that the sort key is the reported one
    filled = []
    for id_, params, truncations in entries:
        rec = _BY_ID.get(id_)
        if rec is not None and not (set(truncations) - set(rec.truncations)):
            truncations = {**rec.truncations, **truncations}
        filled.append((id_, params, truncations))
    filled.sort(key=lambda e: _sort_key(*e))
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or len(filled) <= 1:
        reports = [_run_one(e) for e in filled]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_one, filled, chunksize=4))
    reports.sort(key=VerifyReport.sort_key)
    return reports
