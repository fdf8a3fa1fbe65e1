"""Exact sparse multivariate polynomials over the integers.

A :class:`Poly` lives in a fixed *variable universe*: an ordered tuple of
names drawn from ``q, p, p0, p1, ..., x, y, z``.  Universes are always kept
in canonical priority order ``q < p < p0 < p1 < ... < x < y < z`` so that
exponent vectors line up; combining polynomials over different universes is
an error (use :meth:`Poly.embed` to move between them explicitly).

Truncated power series are ordinary polynomials plus an explicit
:class:`DegreeCap`.  Nothing in here chooses a truncation on its own.
"""

from __future__ import annotations

import json
import operator
import re
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    DivisibilityError,
    NotInvertibleAsSeries,
    TruncationRequired,
    UniverseError,
)

__all__ = [
    "Poly", "PolyRing", "DegreeCap", "canonical_universe",
    "poly_arith", "q_analogue", "q_factorial", "q_binomial", "pochhammer",
    "double_pochhammer", "expand_rational", "series_inverse",
    "complete_homogeneous", "mul_trunc",
]

_PJ = re.compile(r"^p(\d+)$")


def _rank(name: str) -> tuple[int, int]:
    if name == "q":
        return (0, 0)
    if name == "p":
        return (1, 0)
    m = _PJ.match(name)
    if m:
        return (2, int(m.group(1)))
    if name in ("x", "y", "z"):
        return (3 + "xyz".index(name), 0)
    raise UniverseError(f"unknown variable name {name!r}")


def canonical_universe(names: Iterable[str]) -> tuple[str, ...]:
    """Sort and deduplicate variable names into canonical priority order."""
    return tuple(sorted(set(names), key=_rank))


class DegreeCap:
    """Per-variable maximum exponents; variables not mentioned are unbounded.

    >>> DegreeCap(q=2).bound("q"), DegreeCap(q=2).bound("x")
    (2, None)
    """

    __slots__ = ("_bounds",)

    def __init__(self, bounds: Optional[Mapping[str, int]] = None, **kw: int):
        merged = dict(bounds or {})
        merged.update(kw)
        for name, b in merged.items():
            _rank(name)
            if b is not None and b < 0:
                raise ValueError(f"negative cap for {name}")
        self._bounds = tuple(sorted((k, v) for k, v in merged.items() if v is not None))

    def bound(self, name: str) -> Optional[int]:
        for k, v in self._bounds:
            if k == name:
                return v
        return None

    def vector(self, universe: Sequence[str]) -> tuple:
        return tuple(self.bound(v) for v in universe)

    def merged(self, other: "DegreeCap") -> "DegreeCap":
        d = dict(self._bounds)
        for k, v in other._bounds:
            d[k] = v if k not in d else min(d[k], v)
        return DegreeCap(d)

    def as_dict(self) -> dict:
        return dict(self._bounds)

    def __eq__(self, other):
        return isinstance(other, DegreeCap) and self._bounds == other._bounds

    def __hash__(self):
        return hash(self._bounds)

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self._bounds)
        return f"DegreeCap({inner})"


def _cap_ok(e: tuple, capv: tuple) -> bool:
    for a, b in zip(e, capv):
        if b is not None and a > b:
            return False
    return True


def _mul_dicts(a: dict, b: dict, capv: Optional[tuple] = None) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    add = operator.add
    if capv is None or all(c is None for c in capv):
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
    else:
        for eb, cb in b.items():
            if not _cap_ok(eb, capv):
                continue
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                if _cap_ok(e, capv):
                    out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


class Poly:
    """Immutable sparse polynomial with arbitrary-precision integer coefficients.

    Build polynomials from a :class:`PolyRing` rather than directly:

    >>> R = PolyRing("q", "x")
    >>> q, x = R.gens()
    >>> str((1 + q) * (1 - q))
    '1 - q^2'
    >>> str(1 + 2*q + q**2*x)
    '1 + 2*q + q^2*x'
    """

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Optional[Mapping] = None):
        vars = tuple(vars)
        if canonical_universe(vars) != vars:
            raise UniverseError(f"universe {vars} is not in canonical order")
        k = len(vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != k:
                raise UniverseError(f"exponent vector {e} does not match universe {vars}")
            if any(v < 0 for v in e):
                raise ValueError(f"negative exponent in {e}")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.vars = vars
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.vars = vars
        p._terms = terms
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def const(cls, c: int, vars: Sequence[str]) -> "Poly":
        vars = canonical_universe(vars)
        return cls._raw(vars, {(0,) * len(vars): int(c)} if c else {})

    @classmethod
    def monomial(cls, vars: Sequence[str], coeff: int = 1, **exps: int) -> "Poly":
        vars = canonical_universe(vars)
        for name in exps:
            if name not in vars:
                raise UniverseError(f"{name} is not in universe {vars}")
        e = tuple(exps.get(v, 0) for v in vars)
        return cls._raw(vars, {e: int(coeff)} if coeff else {})

    # basic access

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __getitem__(self, e) -> int:
        return self._terms.get(tuple(e), 0)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UniverseError(f"{name} is not in universe {self.vars}") from None

    def constant_term(self) -> int:
        return self._terms.get((0,) * len(self.vars), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree(self, name: Optional[str] = None) -> int:
        """Largest exponent of ``name`` (total degree if omitted); -1 for zero."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = self.index(name)
        return max(e[i] for e in self._terms)

    def min_degree(self, name: str) -> int:
        if not self._terms:
            return -1
        i = self.index(name)
        return min(e[i] for e in self._terms)

    # coercion

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise UniverseError(f"universe mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, int):
            return Poly.const(other, self.vars)
        return NotImplemented

    def embed(self, vars: Sequence[str]) -> "Poly":
        """Re-express in a larger (or equal) universe."""
        vars = canonical_universe(vars)
        missing = [v for v in self.vars if v not in vars]
        if missing:
            if any(self.degree(v) > 0 for v in missing):
                raise UniverseError(f"cannot drop variables {missing} that occur in the polynomial")
        pos = [self.vars.index(v) if v in self.vars else None for v in vars]
        out = {}
        for e, c in self._terms.items():
            ne = tuple(0 if i is None else e[i] for i in pos)
            out[ne] = out.get(ne, 0) + c
        return Poly._raw(vars, {e: c for e, c in out.items() if c})

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Poly._raw(self.vars, {})
            return Poly._raw(self.vars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.vars, _mul_dicts(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = Poly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul(self, other: "Poly", cap: Optional[DegreeCap] = None) -> "Poly":
        """Product, discarding every term that exceeds ``cap``."""
        other = self._coerce(other)
        capv = cap.vector(self.vars) if cap is not None else None
        return Poly._raw(self.vars, _mul_dicts(self._terms, other._terms, capv))

    def truncate(self, cap: DegreeCap) -> "Poly":
        capv = cap.vector(self.vars)
        return Poly._raw(self.vars, {e: c for e, c in self._terms.items() if _cap_ok(e, capv)})

    def exact_div(self, other) -> "Poly":
        """Exact quotient in Z[vars]; raises :class:`DivisibilityError` otherwise."""
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError("cannot divide by that")
        if not other._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        key = _grlex_key
        lead_e = max(other._terms, key=key)
        lead_c = other._terms[lead_e]
        rem = dict(self._terms)
        quot = {}
        while rem:
            e = max(rem, key=key)
            d = tuple(a - b for a, b in zip(e, lead_e))
            if any(v < 0 for v in d):
                raise DivisibilityError(f"{self} is not divisible by {other}")
            c, r = divmod(rem[e], lead_c)
            if r:
                raise DivisibilityError(f"{self} is not divisible by {other} over the integers")
            quot[d] = c
            for be, bc in other._terms.items():
                ne = tuple(map(operator.add, be, d))
                v = rem.get(ne, 0) - c * bc
                if v:
                    rem[ne] = v
                else:
                    rem.pop(ne, None)
        return Poly._raw(self.vars, quot)

    def __floordiv__(self, other):
        return self.exact_div(other)

    # comparison

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.vars)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    # variable manipulation

    def coefficient(self, name: str, k: int) -> "Poly":
        """Terms with ``name``-exponent exactly ``k``, with that exponent zeroed."""
        i = self.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return Poly._raw(self.vars, out)

    def coefficients(self, **exps: int) -> "Poly":
        """Iterated :meth:`coefficient` over several variables."""
        p = self
        for name, k in exps.items():
            p = p.coefficient(name, k)
        return p

    def evaluate(self, **values: int) -> "Poly":
        """Substitute integers for some variables (their exponents become 0)."""
        idx = [(self.index(n), v) for n, v in values.items()]
        out = {}
        for e, c in self._terms.items():
            e2 = list(e)
            for i, v in idx:
                c *= v ** e[i]
                e2[i] = 0
            if c:
                e2 = tuple(e2)
                out[e2] = out.get(e2, 0) + c
        return Poly._raw(self.vars, {e: c for e, c in out.items() if c})

    def subs(self, name: str, value: "Poly") -> "Poly":
        """Substitute a polynomial (same universe) for one variable."""
        value = self._coerce(value)
        i = self.index(name)
        powers = {}
        out = Poly._raw(self.vars, {})
        groups: dict = {}
        for e, c in self._terms.items():
            groups.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        for k, rest in groups.items():
            if k not in powers:
                powers[k] = value ** k
            out = out + Poly._raw(self.vars, rest) * powers[k]
        return out

    def scale_exponent(self, name: str, factor: int) -> "Poly":
        """Replace ``name`` by ``name**factor``."""
        i = self.index(name)
        return Poly._raw(self.vars, {e[:i] + (e[i] * factor,) + e[i + 1:]: c
                                     for e, c in self._terms.items()})

    def rename(self, old: str, new: str) -> "Poly":
        """Move the ``old`` exponent onto ``new`` (which must be in the universe)."""
        i, j = self.index(old), self.index(new)
        out = {}
        for e, c in self._terms.items():
            e2 = list(e)
            e2[j] += e2[i]
            e2[i] = 0
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + c
        return Poly._raw(self.vars, {e: c for e, c in out.items() if c})

    def univariate(self, name: str) -> list:
        """Dense coefficient list in ``name``; the polynomial must not involve others."""
        i = self.index(name)
        if not self._terms:
            return []
        out = [0] * (self.degree(name) + 1)
        for e, c in self._terms.items():
            if any(v for j, v in enumerate(e) if j != i):
                raise UniverseError(f"{self} is not univariate in {name}")
            out[e[i]] = c
        return out

    # text and JSON forms

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=_canonical_key)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({list(self.vars)}, {self})"

    def to_json_obj(self) -> dict:
        return {"vars": list(self.vars),
                "terms": [{"c": str(c), "e": list(e)} for e, c in self.sorted_terms()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Poly":
        return cls(obj["vars"], {tuple(t["e"]): int(t["c"]) for t in obj["terms"]})

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_json_obj(json.loads(text))


def _canonical_key(item):
    e = item[0]
    return (sum(e), tuple(-v for v in e))


def _grlex_key(e):
    return (sum(e), e)


class PolyRing:
    """Factory for polynomials over one fixed universe.

    >>> R = PolyRing("x", "q")
    >>> R.vars
    ('q', 'x')
    >>> R(3) + R.gen("x")
    Poly(['q', 'x'], 3 + x)
    """

    __slots__ = ("vars",)

    def __init__(self, *names: str):
        if len(names) == 1 and not isinstance(names[0], str):
            names = tuple(names[0])
        self.vars = canonical_universe(names)

    def __call__(self, c: int = 0) -> Poly:
        return Poly.const(c, self.vars)

    @property
    def zero(self) -> Poly:
        return Poly._raw(self.vars, {})

    @property
    def one(self) -> Poly:
        return Poly.const(1, self.vars)

    def gen(self, name: str) -> Poly:
        return Poly.monomial(self.vars, 1, **{name: 1})

    def gens(self) -> tuple:
        return tuple(self.gen(v) for v in self.vars)

    def monomial(self, coeff: int = 1, **exps: int) -> Poly:
        return Poly.monomial(self.vars, coeff, **exps)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.vars == self.vars

    def __hash__(self):
        return hash(self.vars)

    def __repr__(self):
        return f"PolyRing{self.vars}"


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``exact_div``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "exact_div":
        return a.exact_div(b)
    raise ValueError(f"unknown operation {op!r}")


def mul_trunc(a: Poly, b: Poly, cap: DegreeCap) -> Poly:
    return a.mul(b, cap)


# q-combinatorics. The "variable" argument may be any Poly, so bases such as
# q**r are passed directly: q_analogue(n, q**r) is [n]_{q^r}.

def q_analogue(n: int, v: Poly) -> Poly:
    """``1 + v + ... + v^(n-1)``; zero for ``n = 0``."""
    out = Poly._raw(v.vars, {})
    term = Poly.const(1, v.vars)
    for i in range(n):
        out = out + term
        if i + 1 < n:
            term = term * v
    return out


def q_factorial(n: int, v: Poly) -> Poly:
    out = Poly.const(1, v.vars)
    for i in range(2, n + 1):
        out = out * q_analogue(i, v)
    return out


def q_binomial(n: int, k: int, v: Poly) -> Poly:
    """Gaussian binomial via the q-Pascal rule ``[n,k] = [n-1,k-1] + v^k [n-1,k]``."""
    if k < 0 or k > n:
        return Poly._raw(v.vars, {})
    k = min(k, n - k)
    one = Poly.const(1, v.vars)
    vpow = [one]
    for _ in range(k):
        vpow.append(vpow[-1] * v)
    row = [one] + [Poly._raw(v.vars, {})] * k
    for m in range(1, n + 1):
        for j in range(min(m, k), 0, -1):
            row[j] = row[j - 1] + vpow[j] * row[j]
    return row[k]


def pochhammer(a: Poly, qv: Poly, n: int) -> Poly:
    """``(a; qv)_n = prod_{i<n} (1 - a qv^i)``."""
    a = qv._coerce(a)
    out = Poly.const(1, qv.vars)
    cur = a
    for i in range(n):
        out = out * (1 - cur)
        if i + 1 < n:
            cur = cur * qv
    return out


def _monomial_exp(m: Poly) -> tuple:
    if not m.is_monomial():
        raise ValueError(f"{m} is not a monomial")
    (e, c), = m._terms.items()
    return e, c


def double_pochhammer(zv: Poly, qv: Poly, pv: Poly, k: Optional[int], l: Optional[int],
                      cap: Optional[DegreeCap] = None) -> Poly:
    """``prod_{i<k} prod_{j<l} (1 - zv qv^i pv^j)`` truncated to ``cap``.

    ``k`` or ``l`` may be ``None`` (unbounded); the cap must then bound a
    variable of ``qv`` (resp. ``pv``) so that all but finitely many factors
    are 1 modulo the truncation.
    """
    vars = zv.vars
    capv = cap.vector(vars) if cap is not None else (None,) * len(vars)
    ze, zc = _monomial_exp(zv)
    qe, _ = _monomial_exp(qv)
    pe, _ = _monomial_exp(pv)
    if zc != 1:
        raise ValueError("zv must be a monic monomial")

    def grows_past_cap(step):
        return any(s > 0 and b is not None for s, b in zip(step, capv))

    if k is None and not grows_past_cap(qe):
        raise TruncationRequired("unbounded first index needs a cap on the qv variables")
    if l is None and not grows_past_cap(pe):
        raise TruncationRequired("unbounded second index needs a cap on the pv variables")

    out = {(0,) * len(vars): 1}
    i = 0
    while k is None or i < k:
        ei = tuple(a + i * b for a, b in zip(ze, qe))
        if not _cap_ok(ei, capv):
            break
        j = 0
        while l is None or j < l:
            eij = tuple(a + j * b for a, b in zip(ei, pe))
            if not _cap_ok(eij, capv):
                break
            factor = {(0,) * len(vars): 1, eij: -1}
            out = _mul_dicts(out, factor, capv)
            j += 1
        i += 1
    return Poly._raw(vars, out)


def _geometric_mul(d: dict, m_e: tuple, m_c: int, vi: int, max_deg: int,
                   capv: Optional[tuple] = None) -> dict:
    """Multiply ``d`` by ``1/(1 - m)`` where ``m = m_c * x^m_e`` has positive degree in slot ``vi``."""
    acc = dict(d)
    cur = d
    add = operator.add
    while cur:
        nxt = {}
        for e, c in cur.items():
            ne = tuple(map(add, e, m_e))
            if ne[vi] > max_deg or (capv is not None and not _cap_ok(ne, capv)):
                continue
            nxt[ne] = c * m_c
        for e, c in nxt.items():
            acc[e] = acc.get(e, 0) + c
        cur = nxt
    return {e: c for e, c in acc.items() if c}


def series_inverse(f: Poly, v: str, max_deg: int) -> Poly:
    """Power-series inverse of ``f`` in ``v`` modulo ``v^(max_deg+1)``."""
    vi = f.index(v)
    const = {e: c for e, c in f._terms.items() if e[vi] == 0}
    if const != {(0,) * len(f.vars): 1}:
        raise NotInvertibleAsSeries(f"{f} does not have constant term 1 in {v}")
    cap = DegreeCap({v: max_deg})
    g = Poly._raw(f.vars, {e: -c for e, c in f._terms.items() if e[vi] > 0})
    if g.is_monomial():
        (e, c), = g._terms.items()
        return Poly._raw(f.vars, _geometric_mul({(0,) * len(f.vars): 1}, e, c, vi, max_deg))
    inv = Poly.const(1, f.vars)
    for _ in range(max_deg):
        inv = 1 + g.mul(inv, cap)
    return inv


def expand_rational(numer: Poly, denom_factors: Sequence[Poly], v: str, max_deg: int,
                    cap: Optional[DegreeCap] = None) -> Poly:
    """Expand ``numer / prod(denom_factors)`` as a power series in ``v`` up to ``v^max_deg``.

    Every factor needs constant term exactly 1 in ``v``.  Factors of the form
    ``1 - monomial`` take a fast geometric path; other factors are inverted
    by iteration.  Other variables stay exact unless ``cap`` bounds them.
    """
    vi = numer.index(v)
    capv = cap.vector(numer.vars) if cap is not None else None
    d = {e: c for e, c in numer._terms.items()
         if e[vi] <= max_deg and (capv is None or _cap_ok(e, capv))}
    for f in denom_factors:
        f = numer._coerce(f)
        const = {e: c for e, c in f._terms.items() if e[vi] == 0}
        if const != {(0,) * len(f.vars): 1}:
            raise NotInvertibleAsSeries(f"{f} does not have constant term 1 in {v}")
        rest = [(e, -c) for e, c in f._terms.items() if e[vi] > 0]
        if not d:
            break
        if len(rest) == 1:
            e, c = rest[0]
            d = _geometric_mul(d, e, c, vi, max_deg, capv)
        else:
            inv = series_inverse(f, v, max_deg)
            full = DegreeCap({v: max_deg}) if cap is None else cap.merged(DegreeCap({v: max_deg}))
            d = _mul_dicts(d, inv._terms, full.vector(numer.vars))
    return Poly._raw(numer.vars, d)


def complete_homogeneous(alphabet: Sequence[Poly], n: int, vars: Optional[Sequence[str]] = None,
                         cap: Optional[DegreeCap] = None) -> Poly:
    """``h_n`` evaluated at a finite list of monomials (a multiset).

    >>> R = PolyRing("q")
    >>> str(complete_homogeneous([R.one, R.gen("q")], 2))
    '1 + q + q^2'
    """
    if vars is None:
        if not alphabet:
            raise ValueError("empty alphabet needs an explicit universe")
        vars = alphabet[0].vars
    vars = canonical_universe(vars)
    capv = cap.vector(vars) if cap is not None else None
    H = [{(0,) * len(vars): 1}] + [{} for _ in range(n)]
    for a in alphabet:
        if a.vars != vars:
            raise UniverseError("alphabet letters must share the universe")
        for k in range(1, n + 1):
            if H[k - 1]:
                prod = _mul_dicts(H[k - 1], a._terms, capv)
                hk = H[k]
                for e, c in prod.items():
                    v = hk.get(e, 0) + c
                    if v:
                        hk[e] = v
                    else:
                        hk.pop(e, None)
    return Poly._raw(vars, H[n])

