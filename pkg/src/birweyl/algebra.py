"""Sparse exact polynomials and rational functions over the rationals.

Monomials are exponent tuples indexed by a :class:`VariableTable` (lambda
variables first, then generators by ``(height, index)``).  Terms are ordered
by total degree, ties broken lexicographically on the generator exponents
and then on the lambda exponents, so ``u*v - b*w`` prints generator-heavy
terms first.  Rational functions are kept
as normalized ``num/den`` pairs without a multivariate GCD; equality is
decided by cross-multiplication and polynomiality by exact division.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

Exponents = Tuple[int, ...]
Number = Union[int, Fraction]

LAMBDA = "LAMBDA"
GENERATOR = "GENERATOR"


class AlgebraError(ValueError):
    pass


class TableMismatch(AlgebraError):
    pass


class NotDivisible(AlgebraError):
    pass


def _norm_coeff(c) -> Number:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, str):
        return _norm_coeff(Fraction(c))
    raise TypeError(f"unsupported coefficient {c!r}")


def format_coeff(c: Number) -> str:
    c = _norm_coeff(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    key: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class VariableTable:
    """Fixed, totally ordered list of variables shared by a session."""

    variables: Tuple[Variable, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate variable names in {names}")
        kinds = [v.kind for v in self.variables]
        n_lam = kinds.count(LAMBDA)
        if kinds[:n_lam] != [LAMBDA] * n_lam:
            raise AlgebraError("lambda variables must precede generators")
        lam_keys = [v.key for v in self.variables[:n_lam]]
        gen_keys = [v.key for v in self.variables[n_lam:]]
        if lam_keys != sorted(lam_keys) or gen_keys != sorted(gen_keys):
            raise AlgebraError("variables are not in canonical order")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})
        object.__setattr__(self, "_nlam", n_lam)

    @classmethod
    def build(cls, lambdas: Sequence[str], generators: Sequence[Tuple[str, int]] = ()):
        """``lambdas`` in index order; ``generators`` as ``(name, height)``.

        Generators are sorted stably by height, keeping the given order as
        the secondary index.
        """
        lam = [Variable(n, LAMBDA, (i,)) for i, n in enumerate(lambdas)]
        order = sorted(range(len(generators)), key=lambda k: (generators[k][1], k))
        gen = [Variable(generators[k][0], GENERATOR, (generators[k][1], k)) for k in order]
        return cls(tuple(lam + gen))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def lambda_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.variables) if v.kind == LAMBDA)

    @property
    def generator_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.variables) if v.kind == GENERATOR)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, VariableTable) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): 1})

    def zero_exps(self) -> Exponents:
        return (0,) * self.nvars

    @property
    def n_lambda(self) -> int:
        return self._nlam

    def order_key(self, e: Exponents):
        """Graded lex; within a degree generators are compared before lambdas."""
        k = self._nlam
        return (sum(e), e[k:] + e[:k])


# --- raw dict arithmetic (internal, no checks) ---------------------------

def _add_into(acc: dict, terms: Mapping, scale: Number = 1) -> None:
    for m, c in terms.items():
        v = acc.get(m, 0) + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _mul(p: Mapping, q: Mapping) -> dict:
    if len(p) > len(q):
        p, q = q, p
    out: dict = {}
    get = out.get
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _shift(p: Mapping, mono: Exponents, scale: Number = 1) -> dict:
    return {tuple(a + b for a, b in zip(m, mono)): c * scale for m, c in p.items()}


def _pow(p: Mapping, k: int, n: int) -> dict:
    result = {(0,) * n: 1}
    base = dict(p)
    while k:
        if k & 1:
            result = _mul(result, base)
        k >>= 1
        if k:
            base = _mul(base, base)
    return result


class Polynomial:
    """Immutable sparse polynomial ``{exponent tuple: nonzero coefficient}``."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: VariableTable, terms: Optional[Mapping] = None):
        self.table = table
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _norm_coeff(c)
                if c:
                    clean[m] = c
        self.terms: Dict[Exponents, Number] = clean
        self._hash = None

    @classmethod
    def _raw(cls, table, terms) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.table = table
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, table: VariableTable, c: Number) -> "Polynomial":
        return cls(table, {table.zero_exps(): c})

    @classmethod
    def monomial(cls, table: VariableTable, exps: Mapping[str, int], c: Number = 1):
        e = [0] * table.nvars
        for name, k in exps.items():
            e[table.index(name)] += k
        return cls(table, {tuple(e): c})

    # -- predicates and accessors
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.table.zero_exps() in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Number:
        return self.terms.get(self.table.zero_exps(), 0)

    def sorted_terms(self):
        key = self.table.order_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Exponents, Number]:
        m = max(self.terms, key=self.table.order_key)
        return m, self.terms[m]

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, idx: int) -> int:
        return max((m[idx] for m in self.terms), default=0)

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    # -- arithmetic
    def _check(self, other: "Polynomial") -> None:
        if self.table is not other.table and self.table != other.table:
            raise TableMismatch("polynomials live over different variable tables")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        _add_into(out, other.terms)
        return Polynomial._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        _add_into(out, other.terms, -1)
        return Polynomial._raw(self.table, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm_coeff(other)
            if not other:
                return Polynomial._raw(self.table, {})
            return Polynomial._raw(self.table, {m: _norm_coeff(c * other) for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.table, _mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial; use RationalFunction")
        return Polynomial._raw(self.table, _pow(self.terms, k, self.table.nvars))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.table, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def shift(self, mono: Exponents) -> "Polynomial":
        return Polynomial._raw(self.table, _shift(self.terms, mono))

    def diff(self, idx: int) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            e = m[idx]
            if e:
                mm = list(m)
                mm[idx] = e - 1
                out[tuple(mm)] = c * e
        return Polynomial._raw(self.table, out)

    def exact_divide(self, q: "Polynomial") -> "Polynomial":
        """Return ``r`` with ``self == q * r``; raise :class:`NotDivisible`.

        Single-divisor division under graded-lex order.  The leading term of
        every intermediate remainder must be divisible by ``LT(q)``, so the
        first failure decides non-divisibility.
        """
        self._check(q)
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        qm, qc = q.leading_term()
        if len(q.terms) == 1:
            out = {}
            for m, c in self.terms.items():
                d = tuple(a - b for a, b in zip(m, qm))
                if min(d) < 0:
                    raise NotDivisible("monomial divisor does not divide")
                out[d] = _div_coeff(c, qc)
            return Polynomial._raw(self.table, out)
        qrest = [(m, c) for m, c in q.terms.items() if m != qm]
        rem = dict(self.terms)
        k = self.table.n_lambda

        def hkey(m):
            return (-sum(m), tuple(-e for e in m[k:] + m[:k]), m)

        heap = [hkey(m) for m in rem]
        heapq.heapify(heap)
        quot = {}
        while rem:
            while True:
                m = heapq.heappop(heap)[2]
                if m in rem:
                    break
            c = rem.pop(m)
            d = tuple(a - b for a, b in zip(m, qm))
            if min(d) < 0:
                raise NotDivisible("leading term not divisible")
            t = _div_coeff(c, qc)
            quot[d] = t
            for qm2, qc2 in qrest:
                mm = tuple(a + b for a, b in zip(d, qm2))
                v = rem.get(mm)
                if v is None:
                    rem[mm] = -t * qc2
                    heapq.heappush(heap, hkey(mm))
                else:
                    v = v - t * qc2
                    if v:
                        rem[mm] = v
                    else:
                        del rem[mm]
        return Polynomial._raw(self.table, quot)

    def divides(self, p: "Polynomial") -> bool:
        try:
            p.exact_divide(self)
        except NotDivisible:
            return False
        return True

    # -- normal forms
    def min_exponents(self) -> Exponents:
        it = iter(self.terms)
        lo = list(next(it))
        for m in it:
            for i, e in enumerate(m):
                if e < lo[i]:
                    lo[i] = e
        return tuple(lo)

    def to_text(self) -> str:
        return format_terms(self.table, self.sorted_terms())

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    def to_json(self) -> list:
        names = self.table.names
        return [
            {"coeff": format_coeff(c), "monomial": {names[i]: e for i, e in enumerate(m) if e}}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, table: VariableTable, data: Iterable[Mapping]) -> "Polynomial":
        out: dict = {}
        for item in data:
            e = [0] * table.nvars
            for name, k in item["monomial"].items():
                e[table.index(name)] += int(k)
            _add_into(out, {tuple(e): _norm_coeff(Fraction(str(item["coeff"])))})
        return cls(table, out)

    def to_rf(self) -> "RationalFunction":
        return RationalFunction(self, Polynomial.constant(self.table, 1))


def _div_coeff(a: Number, b: Number) -> Number:
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if not r:
            return q
    return _norm_coeff(Fraction(a) / b)


def format_monomial(table: VariableTable, m: Exponents) -> str:
    parts = []
    for name, e in zip(table.names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(table: VariableTable, terms) -> str:
    if not terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(terms):
        mono = format_monomial(table, m)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{format_coeff(a)}*{mono}"
        else:
            body = format_coeff(a)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _content_scale(num: Polynomial, den: Polynomial) -> Fraction:
    """Factor ``f`` so that ``f*num`` and ``f*den`` are coprime integer polys."""
    dens = 1
    g = 0
    coeffs = list(num.terms.values()) + list(den.terms.values())
    for c in coeffs:
        if isinstance(c, Fraction):
            dens = dens * c.denominator // gcd(dens, c.denominator)
    for c in coeffs:
        v = c * dens
        g = gcd(g, int(v))
    return Fraction(dens, g)


class RationalFunction:
    """Normalized fraction ``num/den`` of polynomials over one table.

    Normalization strips the common monomial factor and the common rational
    content of ``num`` and ``den`` (leaving coprime integer coefficients) and
    makes the graded-lex leading coefficient of ``den`` positive.  No
    polynomial GCD is taken, so two equal values may have different
    representations; compare with ``==`` (cross-multiplication).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Optional[Polynomial] = None, normalize: bool = True):
        if den is None:
            den = Polynomial.constant(num.table, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def table(self) -> VariableTable:
        return self.num.table

    @classmethod
    def constant(cls, table: VariableTable, c: Number) -> "RationalFunction":
        c = Fraction(c)
        return cls(Polynomial.constant(table, c.numerator), Polynomial.constant(table, c.denominator))

    @classmethod
    def var(cls, table: VariableTable, name: str) -> "RationalFunction":
        return cls(table.var(name))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial_form(self) -> bool:
        return self.den.is_constant()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            self.num._check(other.num)
            return other
        if isinstance(other, Polynomial):
            self.num._check(other)
            return other.to_rf()
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.num ** k, self.den ** k)
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.den).terms == (other.num * self.den).terms

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def to_polynomial(self) -> Optional[Polynomial]:
        """The polynomial equal to this value, or ``None``."""
        try:
            return self.num.exact_divide(self.den)
        except NotDivisible:
            return None

    def to_text(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return self.num.to_text()
        num = self.num.to_text()
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = self.den.to_text()
        simple = len(self.den.terms) == 1 and (
            self.den.is_constant() or (
                self.den.terms[next(iter(self.den.terms))] == 1
                and len(self.den.variables_used()) == 1
            )
        )
        if not simple:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"


def _normalize(num: Polynomial, den: Polynomial):
    table = num.table
    if num.is_zero():
        one = Polynomial._raw(table, {table.zero_exps(): 1})
        return num, one
    lo_n = num.min_exponents()
    lo_d = den.min_exponents()
    common = tuple(min(a, b) for a, b in zip(lo_n, lo_d))
    if any(common):
        neg = tuple(-e for e in common)
        num = num.shift(neg)
        den = den.shift(neg)
    scale = _content_scale(num, den)
    _, lc = den.leading_term()
    if lc < 0:
        scale = -scale
    if scale != 1:
        num = Polynomial._raw(table, {m: _norm_coeff(c * scale) for m, c in num.terms.items()})
        den = Polynomial._raw(table, {m: _norm_coeff(c * scale) for m, c in den.terms.items()})
    return num, den


def rf_eq(f: RationalFunction, g: RationalFunction) -> bool:
    return f == g


def rf_to_polynomial(f: RationalFunction) -> Optional[Polynomial]:
    return f.to_polynomial()


def poly_from_json_text(table: VariableTable, text: str) -> Polynomial:
    return Polynomial.from_json(table, json.loads(text))


def substitute(p: Polynomial, images: Sequence[RationalFunction], target: Optional[VariableTable] = None) -> RationalFunction:
    """Evaluate ``p`` at ``images[i]`` for variable ``i`` simultaneously.

    Works fraction-free: with ``image_i = n_i/d_i`` and ``D_i = deg_i p`` the
    numerator is ``sum c * prod n_i^e_i * d_i^(D_i - e_i)`` over the common
    denominator ``prod d_i^D_i``.  Terms are grouped variable by variable so
    shared prefixes are multiplied once.
    """
    table = target if target is not None else (images[0].table if images else p.table)
    n = table.nvars
    zero = (0,) * n
    if p.is_zero():
        return RationalFunction(Polynomial._raw(table, {}))
    nv = p.table.nvars
    degs = [p.degree_in(i) for i in range(nv)]
    powers = []
    den: dict = {zero: 1}
    for i in range(nv):
        D = degs[i]
        if not D:
            powers.append(None)
            continue
        img = images[i]
        nterms, dterms = img.num.terms, img.den.terms
        npow = [{zero: 1}]
        for _ in range(D):
            npow.append(_mul(npow[-1], nterms))
        if len(dterms) == 1 and next(iter(dterms.values())) == 1 and next(iter(dterms)) == zero:
            powers.append(npow)
            continue
        dpow = [{zero: 1}]
        for _ in range(D):
            dpow.append(_mul(dpow[-1], dterms))
        powers.append([_mul(npow[e], dpow[D - e]) for e in range(D + 1)])
        den = _mul(den, dpow[D])

    def walk(items, i):
        while i < nv and powers[i] is None:
            i += 1
        if i == nv:
            s = 0
            for _, c in items:
                s += c
            return {zero: s} if s else {}
        groups: Dict[int, list] = {}
        for m, c in items:
            groups.setdefault(m[i], []).append((m, c))
        acc: dict = {}
        for e, grp in groups.items():
            sub = walk(grp, i + 1)
            if sub:
                _add_into(acc, _mul(sub, powers[i][e]))
        return acc

    num = walk(list(p.terms.items()), 0)
    return RationalFunction(Polynomial._raw(table, num), Polynomial._raw(table, den))


def substitute_rf(f: RationalFunction, images: Sequence[RationalFunction], target: Optional[VariableTable] = None) -> RationalFunction:
    top = substitute(f.num, images, target)
    if f.den.is_constant():
        c = f.den.constant_value()
        return top if c == 1 else top / RationalFunction.constant(top.table, c)
    bottom = substitute(f.den, images, target)
    if bottom.is_zero():
        raise ZeroDivisionError("substituted denominator vanishes")
    return top / bottom


def _primitive(p: Polynomial):
    """Split ``p = c * x^m * q`` with ``q`` a primitive integer polynomial,
    free of monomial content and with positive leading coefficient."""
    lo = p.min_exponents()
    if any(lo):
        p = p.shift(tuple(-e for e in lo))
    dens, g = 1, 0
    for c in p.terms.values():
        if isinstance(c, Fraction):
            dens = dens * c.denominator // gcd(dens, c.denominator)
    for c in p.terms.values():
        g = gcd(g, int(c * dens))
    scale = Fraction(dens, g)
    if p.leading_term()[1] < 0:
        scale = -scale
    if scale != 1:
        p = Polynomial._raw(p.table, {m: _norm_coeff(c * scale) for m, c in p.terms.items()})
    return 1 / scale, lo, p


class Factored:
    """``const * x^mono * prod f^e`` with primitive polynomial factors ``f``.

    Exponents may be negative, so this represents a rational function whose
    numerator and denominator are kept as lists of factors.  Substituting
    factor by factor keeps the pieces small where a single expanded
    ``num/den`` pair would swell; :meth:`cancel` removes common factors by
    trial exact division.
    """

    __slots__ = ("table", "const", "mono", "factors")

    def __init__(self, table: VariableTable, const: Number = 1, mono: Optional[Exponents] = None,
                 factors: Optional[Mapping[Polynomial, int]] = None):
        self.table = table
        self.const = Fraction(const)
        self.mono = tuple(mono) if mono is not None else table.zero_exps()
        self.factors = {f: e for f, e in (factors or {}).items() if e}

    @classmethod
    def from_poly(cls, p: Polynomial) -> "Factored":
        if p.is_zero():
            return cls(p.table, 0)
        c, lo, q = _primitive(p)
        facs = {} if q.is_constant() else {q: 1}
        return cls(p.table, c, lo, facs)

    @classmethod
    def from_rf(cls, f: "RationalFunction") -> "Factored":
        return cls.from_poly(f.num) / cls.from_poly(f.den)

    def is_zero(self) -> bool:
        return self.const == 0

    def __mul__(self, other: "Factored") -> "Factored":
        facs = dict(self.factors)
        for f, e in other.factors.items():
            facs[f] = facs.get(f, 0) + e
        mono = tuple(a + b for a, b in zip(self.mono, other.mono))
        return Factored(self.table, self.const * other.const, mono, facs)

    def __pow__(self, k: int) -> "Factored":
        if k < 0 and self.is_zero():
            raise ZeroDivisionError("zero to a negative power")
        return Factored(self.table, self.const ** k, tuple(e * k for e in self.mono),
                        {f: e * k for f, e in self.factors.items()})

    def __truediv__(self, other: "Factored") -> "Factored":
        return self * other ** -1

    def substitute(self, images: Sequence["RationalFunction"]) -> "Factored":
        """Apply the substitution ``var_i -> images[i]`` factor by factor."""
        out = Factored(self.table, self.const)
        for i, e in enumerate(self.mono):
            if e:
                out = out * Factored.from_rf(images[i]) ** e
        for f, e in self.factors.items():
            img = substitute(f, images, self.table)
            if img.is_zero() and e < 0:
                raise ZeroDivisionError("substituted denominator vanishes")
            out = out * Factored.from_rf(img) ** e
        return out.cancel()

    def cancel(self) -> "Factored":
        """Cancel numerator factors against denominator factors that divide them
        (or that they divide), until no such pair remains."""
        if self.is_zero():
            return Factored(self.table, 0)
        out = self
        while True:
            step = _cancel_once(out)
            if step is None:
                return out
            out = step

    def expand(self) -> "RationalFunction":
        table = self.table
        num = Polynomial.constant(table, self.const)
        den = Polynomial.constant(table, 1)
        num = num.shift(tuple(max(e, 0) for e in self.mono))
        den = den.shift(tuple(max(-e, 0) for e in self.mono))
        for f, e in sorted(self.factors.items(), key=lambda fe: len(fe[0].terms)):
            if e > 0:
                num = num * f ** e
            else:
                den = den * f ** (-e)
        return RationalFunction(num, den)

    def is_polynomial(self) -> bool:
        return min(self.mono, default=0) >= 0 and all(e > 0 for e in self.factors.values())


def _try_split(p: Polynomial, q: Polynomial) -> Optional[Polynomial]:
    """``p / q`` when ``q`` divides ``p`` and is a proper factor, else None."""
    # p and q are distinct primitive polynomials, so a proper factor has lower degree
    if q.degree() >= p.degree():
        return None
    for i in q.variables_used():
        if q.degree_in(i) > p.degree_in(i):
            return None
    try:
        return p.exact_divide(q)
    except NotDivisible:
        return None


def _cancel_once(f: Factored) -> Optional[Factored]:
    pos = [p for p, e in f.factors.items() if e > 0]
    neg = [q for q, e in f.factors.items() if e < 0]
    for p in pos:
        for q in neg:
            for big, small in ((p, q), (q, p)):
                rest = _try_split(big, small)
                if rest is None:
                    continue
                e = f.factors[big]
                facs = dict(f.factors)
                del facs[big]
                base = Factored(f.table, f.const, f.mono, facs)
                return base * Factored(f.table, 1, None, {small: e}) * Factored.from_poly(rest) ** e
    return None
