"""Exact sparse Laurent polynomials over the rationals.

Coefficients are Python integers or :class:`fractions.Fraction` values
(integral fractions are normalised to ``int``). A polynomial stores the
sorted tuple of variables it actually uses together with a dictionary from
dense exponent tuples to coefficients. Working densely over the local
variable set keeps monomial arithmetic inside C-level tuple operations.

Variables are :class:`VarId` values. Their global order puts Plücker
variables first (by size, then lexicographically) and anonymous variables
after them (by ordinal). Monomials are compared in graded-lex order with
respect to that variable order.
"""

from __future__ import annotations

import hashlib
import heapq
import re
from fractions import Fraction
from operator import add, sub

from .errors import MissingVariable, NotDivisible, ZeroToNegativePower
from .ksubset import KSubset

Rat = Fraction


def as_rat(value):
    """Normalise an int/Fraction/str to the canonical coefficient type."""
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    raise TypeError(f"not a rational: {value!r}")


def rat_text(value):
    """Render a rational as ``num/den``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


class VarId:
    """Name of a variable: either a Plücker coordinate or an anonymous ordinal."""

    __slots__ = ("kind", "payload", "_key", "_hash")

    PLUECKER = "P"
    ANON = "A"

    def __init__(self, kind, payload):
        if kind == self.PLUECKER:
            if not isinstance(payload, KSubset):
                raise TypeError("Pluecker payload must be a KSubset")
            key = (0,) + payload.key()
        elif kind == self.ANON:
            payload = int(payload)
            if payload < 0:
                raise ValueError("anonymous ordinal must be nonnegative")
            key = (1, payload)
        else:
            raise ValueError(f"unknown variable kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("VarId is immutable")

    @classmethod
    def pluecker(cls, members, n=None):
        if isinstance(members, KSubset):
            return cls(cls.PLUECKER, members)
        return cls(cls.PLUECKER, KSubset(members, n))

    @classmethod
    def anon(cls, ordinal):
        return cls(cls.ANON, ordinal)

    @property
    def is_pluecker(self):
        return self.kind == self.PLUECKER

    @property
    def sort_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, VarId) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __hash__(self):
        return self._hash

    def text(self):
        if self.kind == self.PLUECKER:
            return "p" + self.payload.text()
        return f"a{self.payload}"

    @classmethod
    def parse(cls, text, n):
        text = text.strip()
        if text.startswith("p["):
            return cls.pluecker(KSubset.parse(text[1:], n))
        if text.startswith("a"):
            return cls.anon(int(text[1:]))
        raise ValueError(f"bad variable token {text!r}")

    def __repr__(self):
        return self.text()


def _mono_key(exps):
    return (sum(exps), exps)


class LaurentPoly:
    """An immutable Laurent polynomial with rational coefficients.

    ``terms`` may be given as a mapping from monomials to coefficients, where
    a monomial is a mapping (or iterable of pairs) ``VarId -> exponent``.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms=None):
        sparse = {}
        for mono, coef in (terms or {}).items():
            items = mono.items() if hasattr(mono, "items") else mono
            sparse[tuple(items)] = coef
        variables = sorted({v for mono in sparse for v, _ in mono})
        index = {v: i for i, v in enumerate(variables)}
        dense = {}
        for mono, coef in sparse.items():
            exps = [0] * len(variables)
            for v, e in mono:
                exps[index[v]] += e
            key = tuple(exps)
            dense[key] = dense.get(key, 0) + as_rat(coef)
        self._set(tuple(variables), dense)

    def _set(self, variables, dense):
        dense = {e: as_rat(c) for e, c in dense.items() if c != 0}
        if dense and variables:
            used = [any(e[i] for e in dense) for i in range(len(variables))]
            if not all(used):
                keep = [i for i, u in enumerate(used) if u]
                variables = tuple(variables[i] for i in keep)
                dense = {tuple(e[i] for i in keep): c for e, c in dense.items()}
        elif not dense:
            variables = ()
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", dense)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def _raw(cls, variables, dense):
        obj = cls.__new__(cls)
        obj._set(tuple(variables), dense)
        return obj

    # constructors
    @classmethod
    def zero(cls):
        return cls._raw((), {})

    @classmethod
    def const(cls, c):
        return cls._raw((), {(): c})

    @classmethod
    def var(cls, v, exponent=1):
        return cls._raw((v,), {(exponent,): 1})

    @classmethod
    def monomial(cls, exponents, coef=1):
        """Monomial ``coef * prod v**e`` from a mapping ``VarId -> e``."""
        items = sorted((v, e) for v, e in dict(exponents).items() if e)
        return cls._raw(tuple(v for v, _ in items), {tuple(e for _, e in items): coef})

    # structure
    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def variables(self):
        return self.vars

    def __len__(self):
        return len(self.terms)

    def monomials(self):
        """Yield ``(exponent dict, coefficient)`` pairs in canonical order."""
        for exps in self._ordered_keys():
            yield {v: e for v, e in zip(self.vars, exps) if e}, self.terms[exps]

    def _ordered_keys(self):
        return sorted(self.terms, key=_mono_key, reverse=True)

    def leading_term(self):
        exps = max(self.terms, key=_mono_key)
        return {v: e for v, e in zip(self.vars, exps) if e}, self.terms[exps]

    def exponents_of(self, v):
        """Exponent of ``v`` in every term (0 where absent), canonical order."""
        if v not in self.vars:
            return [0] * len(self.terms)
        i = self.vars.index(v)
        return [exps[i] for exps in self._ordered_keys()]

    # alignment helpers
    def _over(self, variables):
        """Dense terms re-indexed over a superset of our variables."""
        if variables == self.vars:
            return self.terms
        pos = [variables.index(v) for v in self.vars]
        width = len(variables)
        out = {}
        for exps, c in self.terms.items():
            e = [0] * width
            for p, x in zip(pos, exps):
                e[p] = x
            out[tuple(e)] = c
        return out

    @staticmethod
    def _union(a, b):
        if a.vars == b.vars:
            return a.vars
        return tuple(sorted(set(a.vars) | set(b.vars)))

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        variables = self._union(self, other)
        out = dict(self._over(variables))
        for e, c in other._over(variables).items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly._raw(variables, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.terms or not other.terms:
            return LaurentPoly.zero()
        variables = self._union(self, other)
        ta = self._over(variables)
        tb = other._over(variables)
        if len(ta) < len(tb):
            ta, tb = tb, ta
        out = {}
        get = out.get
        for eb, cb in tb.items():
            for ea, ca in ta.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly._raw(variables, out)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            if not self.is_monomial():
                raise ValueError("negative powers only for monomials")
            (exps, c), = self.terms.items()
            coef = as_rat(1 / Fraction(c) ** -exponent)
            return LaurentPoly._raw(self.vars, {tuple(x * exponent for x in exps): coef})
        result = LaurentPoly.const(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, c):
        c = as_rat(c)
        return LaurentPoly._raw(self.vars, {e: x * c for e, x in self.terms.items()})

    def div_exact(self, den):
        return lp_div_exact(self, den)

    __truediv__ = div_exact

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def text(self):
        """Canonical text form, e.g. ``1/1*p[1,3,4]*p[2,5,6] + -1/1*p[1,5,6]^2``."""
        if not self.terms:
            return "0"
        parts = []
        names = [v.text() for v in self.vars]
        for exps in self._ordered_keys():
            tokens = [rat_text(self.terms[exps])]
            for name, e in zip(names, exps):
                if e == 1:
                    tokens.append(name)
                elif e:
                    tokens.append(f"{name}^{e}")
            parts.append("*".join(tokens))
        return " + ".join(parts)

    def stable_hash(self):
        """SHA-256 of the canonical text; identical across runs and processes."""
        return hashlib.sha256(self.text().encode("utf-8")).hexdigest()

    def __repr__(self):
        return f"LaurentPoly({self.text()})"

    def __bool__(self):
        return bool(self.terms)


_TOKEN = re.compile(r"^(p\[[0-9,]*\]|a[0-9]+)(?:\^(-?[0-9]+))?$")


def parse_poly(text, n=None):
    """Inverse of :meth:`LaurentPoly.text`; ``n`` is needed for Plücker ids."""
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero()
    terms = {}
    for part in text.split(" + "):
        tokens = part.strip().split("*")
        coef = Fraction(tokens[0])
        mono = {}
        for tok in tokens[1:]:
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad term token {tok!r}")
            v = VarId.parse(m.group(1), n)
            mono[v] = mono.get(v, 0) + int(m.group(2) or 1)
        key = tuple(sorted(mono.items()))
        terms[key] = terms.get(key, 0) + coef
    return LaurentPoly(terms)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    if isinstance(x, VarId):
        return LaurentPoly.var(x)
    raise TypeError(f"cannot coerce {x!r} to LaurentPoly")


def lp_add(a, b):
    return _coerce(a) + _coerce(b)


def lp_mul(a, b):
    return _coerce(a) * _coerce(b)


def lp_div_exact(num, den):
    """Exact quotient in the Laurent polynomial ring.

    Both operands are shifted by monomials so that they become ordinary
    polynomials without monomial factors, then divided by graded-lex
    multivariate division. A leading term that the divisor's leading term
    does not divide can never cancel later, so it raises immediately.
    """
    num, den = _coerce(num), _coerce(den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return LaurentPoly.zero()
    variables = LaurentPoly._union(num, den)
    tn = num._over(variables)
    td = den._over(variables)
    width = len(variables)
    shift_n = tuple(min(e[i] for e in tn) for i in range(width))
    shift_d = tuple(min(e[i] for e in td) for i in range(width))
    pn = {tuple(map(sub, e, shift_n)): c for e, c in tn.items()}
    pd = {tuple(map(sub, e, shift_d)): c for e, c in td.items()}

    lead_d = max(pd, key=_mono_key)
    lead_c = Fraction(pd[lead_d])
    rest_d = [(e, c) for e, c in pd.items() if e != lead_d]

    remainder = dict(pn)
    heap = [(-sum(e), tuple(-x for x in e)) for e in remainder]
    heapq.heapify(heap)
    quotient = {}
    while remainder:
        neg_deg, neg_e = heapq.heappop(heap)
        e = tuple(-x for x in neg_e)
        c = remainder.pop(e, None)
        if c is None:
            continue
        q_e = tuple(map(sub, e, lead_d))
        if min(q_e, default=0) < 0:
            raise NotDivisible(f"{num.text()} is not divisible by {den.text()}")
        q_c = as_rat(c / lead_c)
        quotient[q_e] = q_c
        for de, dc in rest_d:
            t = tuple(map(add, q_e, de))
            old = remainder.get(t)
            if old is None:
                remainder[t] = -q_c * dc
                heapq.heappush(heap, (-sum(t), tuple(-x for x in t)))
            else:
                val = old - q_c * dc
                if val:
                    remainder[t] = val
                else:
                    del remainder[t]
    offset = tuple(map(sub, shift_n, shift_d))
    return LaurentPoly._raw(
        variables, {tuple(map(add, e, offset)): c for e, c in quotient.items()}
    )


def lp_eval(p, assignment):
    """Evaluate ``p`` at ``assignment`` (mapping VarId -> rational), exactly."""
    p = _coerce(p)
    values = []
    for i, v in enumerate(p.vars):
        if v not in assignment:
            raise MissingVariable(v)
        x = assignment[v]
        if x == 0 and any(e[i] < 0 for e in p.terms):
            raise ZeroToNegativePower(v)
        values.append(x)
    return _eval_dense(p, values)


def _eval_dense(p, values):
    """Evaluate with integer arithmetic where possible (one final division)."""
    if not p.terms:
        return 0
    width = len(values)
    lows = [min(0, min(e[i] for e in p.terms)) for i in range(width)]
    nums, dens = [], []
    for x in values:
        x = Fraction(x)
        nums.append(x.numerator)
        dens.append(x.denominator)
    # value = sum c * prod (n_i/d_i)^e_i; clear all denominators at once
    highs = [max(0, max(e[i] for e in p.terms)) for i in range(width)]
    common = 1
    for i in range(width):
        common *= nums[i] ** (-lows[i]) * dens[i] ** highs[i]
    total = 0
    pow_cache = {}
    for exps, c in p.terms.items():
        term = 1
        for i, e in enumerate(exps):
            # (n/d)^e * n^{-low} * d^{high} = n^{e-low} * d^{high-e}
            a = e - lows[i]
            b = highs[i] - e
            key = (i, a, b)
            f = pow_cache.get(key)
            if f is None:
                f = nums[i] ** a * dens[i] ** b
                pow_cache[key] = f
            term *= f
        total += c * term
    return as_rat(Fraction(total) / common)


def lp_denominator_vector(p, cluster):
    """Entry i is minus the minimal exponent of ``cluster[i]`` over all terms."""
    p = _coerce(p)
    return tuple(-min(p.exponents_of(v)) if p.terms else 0 for v in cluster)
