"""The reflections ``s_i``, R-operators and their action along Weyl words.

``s_i`` sends ``lambda_j -> lambda_j - a_ji lambda_i`` and a generator ``g``
to the finite sum ``sum_k lambda_i^k / k! * ad(phi_i)^k(g) / phi_i^k``.
Both parts are substituted simultaneously, which realizes ``exp o r_i``
because the exponential fixes the lambdas and ``r_i`` fixes the generators.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Optional, Sequence, Tuple

from .algebra import Factored, Polynomial, RationalFunction, VariableTable, substitute_rf
from .cartan import alternating_word, coxeter_m, reflect_lambda, INFINITY
from .poisson import PoissonStructure
from .report import CheckError, Report, timed


@dataclass(frozen=True, eq=False)
class Substitution:
    """Field homomorphism given by the image of every variable."""

    table: VariableTable
    images: Tuple[RationalFunction, ...]

    def __call__(self, f) -> RationalFunction:
        return apply(self, f)

    def image(self, name: str) -> RationalFunction:
        return self.images[self.table.index(name)]

    def compose(self, inner: "Substitution") -> "Substitution":
        """``self o inner``: first ``inner``, then ``self``."""
        return Substitution(self.table, tuple(apply(self, g) for g in inner.images))

    def equals(self, other: "Substitution") -> bool:
        return all(a == b for a, b in zip(self.images, other.images))

    @classmethod
    def identity(cls, table: VariableTable) -> "Substitution":
        return cls(table, tuple(RationalFunction.var(table, n) for n in table.names))


def apply(sub: Substitution, f) -> RationalFunction:
    if isinstance(f, Polynomial):
        f = RationalFunction(f)
    if f.table != sub.table:
        raise ValueError("substitution and argument use different variable tables")
    try:
        return substitute_rf(f, sub.images, sub.table)
    except ZeroDivisionError:
        raise CheckError("SUBSTITUTED_DENOMINATOR_ZERO", f.to_text()) from None


def _exp_images(ps: PoissonStructure, i: int, t: Polynomial) -> list:
    """Images of the generators under ``exp(t/phi_i ad(phi_i))``."""
    table = ps.table
    phi = ps.phi_poly(i)
    out = []
    for g in ps.generator_names:
        chain = [table.var(g)]
        while True:
            nxt = ps.ad_power_poly(i, chain[-1], 1)
            if nxt.is_zero():
                break
            chain.append(nxt)
        K = len(chain) - 1
        num = Polynomial(table)
        for k, term in enumerate(chain):
            num = num + term * (t ** k) * (phi ** (K - k)) * Fraction(1, factorial(k))
        out.append(RationalFunction(num, phi ** K))
    return out


def simple_reflection(ps: PoissonStructure, i: int) -> Substitution:
    key = ("s", i)
    hit = ps._cache.get(key)
    if hit is not None:
        return hit
    table = ps.table
    lam = reflect_lambda(ps.cartan, i)
    images = []
    for j in range(ps.n):
        p = Polynomial(table)
        for k, c in lam[j].items():
            p = p + ps.lambda_poly(k) * c
        images.append(RationalFunction(p))
    images.extend(_exp_images(ps, i, ps.lambda_poly(i)))
    sub = Substitution(table, tuple(images))
    ps._cache[key] = sub
    return sub


def r_operator(ps: PoissonStructure, i: int, t: Polynomial) -> Substitution:
    """``R_i(t) = exp(t/phi_i ad(phi_i))``; fixes every lambda."""
    table = ps.table
    lam_images = [RationalFunction.var(table, n) for n in ps.lambdas]
    return Substitution(table, tuple(lam_images + _exp_images(ps, i, t)))


def lambda_reflection(ps: PoissonStructure, i: int) -> Substitution:
    """``r_i`` alone: the linear map on lambdas, generators fixed."""
    s = simple_reflection(ps, i)
    table = ps.table
    n = ps.n
    return Substitution(table, s.images[:n] + tuple(RationalFunction.var(table, g) for g in ps.generator_names))


def word_image_factored(ps: PoissonStructure, word: Sequence[int], name: str) -> Factored:
    """``s_j1(s_j2(... s_jp(v)))`` for a single variable, in factored form.

    Each step substitutes ``s_j1`` into the factors separately, so the
    pieces stay as large as single cocycle polynomials.  Memoized.
    """
    word = tuple(word)
    key = ("fimg", word, name)
    hit = ps._cache.get(key)
    if hit is not None:
        return hit
    if not word:
        out = Factored.from_poly(ps.table.var(name))
    else:
        inner = word_image_factored(ps, word[1:], name)
        try:
            out = inner.substitute(simple_reflection(ps, word[0]).images)
        except ZeroDivisionError:
            raise CheckError("SUBSTITUTED_DENOMINATOR_ZERO", name) from None
    ps._cache[key] = out
    return out


def word_image(ps: PoissonStructure, word: Sequence[int], name: str) -> RationalFunction:
    """``s_j1(s_j2(... s_jp(v)))`` for a single variable, memoized."""
    word = tuple(word)
    key = ("img", word, name)
    hit = ps._cache.get(key)
    if hit is None:
        hit = ps._cache[key] = word_image_factored(ps, word, name).expand()
    return hit


def apply_word(ps: PoissonStructure, word: Sequence[int], f) -> RationalFunction:
    """Operator composition, outermost letter first: rightmost acts first."""
    if isinstance(f, Polynomial):
        f = RationalFunction(f)
    for i in reversed(tuple(word)):
        f = apply(simple_reflection(ps, i), f)
    return f


def check_braid(ps: PoissonStructure, i: int, j: int) -> Report:
    rep = Report(f"braid(s{i + 1},s{j + 1})")
    with timed(rep):
        m = coxeter_m(ps.cartan, i, j)
        if m == INFINITY:
            rep.skipped_reason = "SKIPPED_INFINITE"
            return rep
        left = alternating_word(i, j, m)
        right = alternating_word(j, i, m)
        for name in ps.table.names:
            lhs = word_image(ps, left, name)
            rhs = word_image(ps, right, name)
            rep.add(name, lhs == rhs, rhs.to_text(), lhs.to_text())
    return rep


def check_involution(ps: PoissonStructure, i: int) -> Report:
    rep = Report(f"involution(s{i + 1})")
    with timed(rep):
        for name in ps.table.names:
            v = RationalFunction.var(ps.table, name)
            img = word_image(ps, (i, i), name)
            rep.add(name, img == v, name, img.to_text())
    return rep


def check_canonical(ps: PoissonStructure, i: int, pairs: Optional[Iterable] = None) -> Report:
    """``s_i({f,g}) == {s_i f, s_i g}`` on generator pairs (or given pairs)."""
    rep = Report(f"canonical(s{i + 1})")
    s = simple_reflection(ps, i)
    with timed(rep):
        if pairs is None:
            names = ps.generator_names
            pairs = [
                (RationalFunction.var(ps.table, g), RationalFunction.var(ps.table, h))
                for k, g in enumerate(names) for h in names[k + 1:]
            ]
        for f, g in pairs:
            lhs = apply(s, ps.bracket(f, g))
            rhs = ps.bracket(apply(s, f), apply(s, g))
            rep.add(f"{{{_short(f)},{_short(g)}}}", lhs == rhs, rhs.to_text(), lhs.to_text())
    return rep


def _short(f) -> str:
    text = f.to_text()
    return text if len(text) <= 40 else text[:37] + "..."


def nested_product(ps: PoissonStructure, ops: Sequence[Tuple[int, int]]) -> RationalFunction:
    """``phi_j1^e1 s_j1(phi_j2^e2 s_j2( ... phi_jp^ep))`` for ops ``[(j, e), ...]``."""
    j, e = ops[-1]
    val = ps.phi_rf(j) ** e
    for j, e in reversed(ops[:-1]):
        val = (ps.phi_rf(j) ** e) * apply(simple_reflection(ps, j), val)
    return val


def lemma_cases(ps: PoissonStructure, i: int, j: int):
    """The two invariance identities for the rank-2 pair ``(i, j)``.

    Returns ``[(label, ops, letter), ...]``: ``nested_product(ops)`` must be
    fixed by ``s_letter``.
    """
    a, b = ps.cartan.a(i, j), ps.cartan.a(j, i)
    if (a, b) not in ((-1, -1), (-2, -1), (-3, -1)):
        if (b, a) in ((-2, -1), (-3, -1)):
            i, j = j, i
            a, b = b, a
        else:
            raise CheckError("CASE_MISMATCH", f"(a_ij, a_ji) = ({a}, {b})")
    I, J = i + 1, j + 1
    if a == -1:
        return [
            (f"phi{J} s{J}(phi{I}) fixed by s{I}", [(j, 1), (i, 1)], i),
            (f"phi{I} s{I}(phi{J}) fixed by s{J}", [(i, 1), (j, 1)], j),
        ]
    if a == -2:
        return [
            (f"phi{I} s{I} phi{J} s{J}(phi{I}) fixed by s{J}", [(i, 1), (j, 1), (i, 1)], j),
            (f"phi{J} s{J} phi{I}^2 s{I}(phi{J}) fixed by s{I}", [(j, 1), (i, 2), (j, 1)], i),
        ]
    return [
        (f"phi{I} s{I} phi{J} s{J} phi{I}^2 s{I} phi{J} s{J}(phi{I}) fixed by s{J}",
         [(i, 1), (j, 1), (i, 2), (j, 1), (i, 1)], j),
        (f"phi{J} s{J} phi{I}^3 s{I} phi{J}^2 s{J} phi{I}^3 s{I}(phi{J}) fixed by s{I}",
         [(j, 1), (i, 3), (j, 2), (i, 3), (j, 1)], i),
    ]


def check_lemma_identities(ps: PoissonStructure, i: int, j: int) -> Report:
    rep = Report(f"lemma(s{i + 1},s{j + 1})")
    with timed(rep):
        for label, ops, letter in lemma_cases(ps, i, j):
            e = nested_product(ps, ops)
            moved = apply(simple_reflection(ps, letter), e)
            rep.add(label, moved == e, e.to_text(), moved.to_text())
    return rep
