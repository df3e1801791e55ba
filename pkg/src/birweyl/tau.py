"""tau-functions, the tau-cocycle and the normalization cocycle.

A tau term ``c * tau^Lambda`` is stored as ``(c, Lambda)`` with ``Lambda``
given by its pairings ``<h_i, Lambda>``.  The cocycle ``phi_w(Lambda)`` is
computed two ways: letter by letter on tau terms (:func:`tau_action`) and by
the product over the prefixes of the word (:func:`cocycle`).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Optional, Sequence

from .algebra import Factored, Polynomial, RationalFunction, VariableTable
from .birational import apply, apply_word, simple_reflection, word_image, word_image_factored
from .cartan import (
    CartanData,
    CartanError,
    Weight,
    act_root,
    act_weight,
    element_key,
    symmetrize,
)
from .poisson import CONST, PoissonStructure
from .report import CheckError, Report, timed


@dataclass(frozen=True)
class TauTerm:
    coeff: RationalFunction
    weight: Weight

    def __mul__(self, other: "TauTerm") -> "TauTerm":
        return TauTerm(self.coeff * other.coeff, tuple(a + b for a, b in zip(self.weight, other.weight)))


@dataclass
class CocycleValue:
    word: tuple
    weight: Weight
    value: RationalFunction
    polynomial_form: Optional[Polynomial]

    def to_json(self) -> dict:
        poly = self.polynomial_form
        out = {
            "word": [j + 1 for j in self.word],
            "weight": list(self.weight),
            "value": self.value.to_text(),
            "polynomial": poly is not None,
        }
        if poly is not None:
            out["text"] = poly.to_text()
            out["terms"] = poly.to_json()
            out["integral"] = poly.is_integral()
        return out


class OracleMismatch(AssertionError):
    pass


def tau_term(ps: PoissonStructure, weight: Sequence[int], coeff=None) -> TauTerm:
    if coeff is None:
        coeff = RationalFunction.constant(ps.table, 1)
    return TauTerm(coeff, tuple(weight))


def tau_action(
    ps: PoissonStructure,
    word: Sequence[int],
    t: TauTerm,
    factor: Optional[Callable[[int], RationalFunction]] = None,
) -> TauTerm:
    """Apply ``s_j1 ... s_jp`` to a tau term, rightmost letter first.

    ``s_i(c tau^L) = s_i(c) * f_i^<h_i,L> * tau^(r_i L)`` with ``f_i = phi_i``,
    or ``f_i = factor(i)`` when given.
    """
    coeff, weight = t.coeff, tuple(t.weight)
    cartan = ps.cartan
    for i in reversed(tuple(word)):
        k = weight[i]
        coeff = apply(simple_reflection(ps, i), coeff)
        if k:
            f = factor(i) if factor is not None else ps.phi_rf(i)
            coeff = coeff * (f ** k)
        weight = cartan.reflect_weight(i, weight)
    return TauTerm(coeff, weight)


def cocycle_by_tau(ps: PoissonStructure, word: Sequence[int], weight: Sequence[int]) -> RationalFunction:
    return tau_action(ps, word, tau_term(ps, weight)).coeff


def cocycle_exponents(cartan: CartanData, word: Sequence[int], weight: Sequence[int]):
    """``<h_jk, r_j(k+1) ... r_jp Lambda>`` for k = 1..p."""
    word = tuple(word)
    return [act_weight(cartan, word[k + 1:], weight)[word[k]] for k in range(len(word))]


def cocycle_by_product_factored(ps: PoissonStructure, word: Sequence[int], weight: Sequence[int]) -> Factored:
    word = tuple(word)
    value = Factored(ps.table)
    for k, n in enumerate(cocycle_exponents(ps.cartan, word, weight)):
        if n:
            value = value * word_image_factored(ps, word[:k], ps.phi[word[k]]) ** n
    return value.cancel()


def cocycle_by_product(ps: PoissonStructure, word: Sequence[int], weight: Sequence[int]) -> RationalFunction:
    return cocycle_by_product_factored(ps, word, weight).expand()


def cocycle(
    ps: PoissonStructure,
    word: Sequence[int],
    weight: Sequence[int],
    cross_check: bool = False,
) -> CocycleValue:
    word = tuple(word)
    weight = tuple(weight)
    value = cocycle_by_product(ps, word, weight)
    if cross_check:
        other = cocycle_by_tau(ps, word, weight)
        if other != value:
            raise OracleMismatch(f"product {value} != tau action {other} for word {word}, weight {weight}")
    return CocycleValue(word, weight, value, value.to_polynomial())


def _label(word) -> str:
    return "s" + ".".join(str(j + 1) for j in word) if word else "1"


def _wlabel(weight) -> str:
    return format_weight(weight)


def format_weight(weight: Sequence[int]) -> str:
    parts = []
    for i, c in enumerate(weight):
        if not c:
            continue
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{mag}L{i + 1}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def oracle_cocycle(ps: PoissonStructure, word, weight, rep: Report) -> RationalFunction:
    """Product-formula value, recording its agreement with the tau action in ``rep``."""
    word, weight = tuple(word), tuple(weight)
    value = cocycle_by_product(ps, word, weight)
    other = cocycle_by_tau(ps, word, weight)
    ok = value == other
    rep.add(f"oracle({_label(word)},{_wlabel(weight)})", ok,
            other.to_text() if not ok else None, value.to_text() if not ok else None)
    return value


def check_cocycle_relations(ps, w, w2, lam, lam2) -> Report:
    """Multiplicativity in the weight and the composition law."""
    w, w2 = tuple(w), tuple(w2)
    lam, lam2 = tuple(lam), tuple(lam2)
    rep = Report(f"cocycle({_label(w)},{_label(w2)},{_wlabel(lam)},{_wlabel(lam2)})")
    with timed(rep):
        total = tuple(a + b for a, b in zip(lam, lam2))
        lhs = oracle_cocycle(ps, w, total, rep)
        rhs = oracle_cocycle(ps, w, lam, rep) * oracle_cocycle(ps, w, lam2, rep)
        rep.add("multiplicative", lhs == rhs, rhs.to_text(), lhs.to_text())
        lhs = oracle_cocycle(ps, w + w2, lam, rep)
        moved = act_weight(ps.cartan, w2, lam)
        rhs = apply_word(ps, w, oracle_cocycle(ps, w2, lam, rep)) * oracle_cocycle(ps, w, moved, rep)
        rep.add("composition", lhs == rhs, rhs.to_text(), lhs.to_text())
    return rep


def same_element(cartan: CartanData, w1, w2) -> bool:
    if element_key(cartan, w1) != element_key(cartan, w2):
        return False
    return all(
        act_root(cartan, w1, cartan.simple_root(i)) == act_root(cartan, w2, cartan.simple_root(i))
        for i in range(cartan.n)
    )


def check_word_independence(ps, words: Iterable[Sequence[int]], weight) -> Report:
    words = [tuple(w) for w in words]
    rep = Report(f"word_independence({_wlabel(weight)})")
    with timed(rep):
        for w in words[1:]:
            if not same_element(ps.cartan, words[0], w):
                raise CheckError("WORDS_DIFFER_AS_GROUP_ELEMENTS", f"{_label(words[0])} vs {_label(w)}")
        base = oracle_cocycle(ps, words[0], weight, rep)
        for w in words[1:]:
            val = oracle_cocycle(ps, w, weight, rep)
            rep.add(f"{_label(words[0])}={_label(w)}", val == base, base.to_text(), val.to_text())
    return rep


def check_regularity(ps, word, weight=None) -> Report:
    """Polynomiality of ``phi_w(L_j)`` for every fundamental weight, or for
    the given weight (only dominant weights are covered)."""
    word = tuple(word)
    rep = Report(f"regularity({_label(word)})")
    weights = [ps.cartan.fundamental_weight(j) for j in range(ps.n)] if weight is None else [tuple(weight)]
    with timed(rep):
        for lam in weights:
            val = oracle_cocycle(ps, word, lam, rep)
            poly = val.to_polynomial()
            dominant = all(c >= 0 for c in lam)
            if poly is None and not dominant:
                rep.skip(_wlabel(lam), f"NOT_POLYNOMIAL for a non-dominant weight: {val.to_text()}")
                continue
            rep.add(_wlabel(lam), poly is not None, "polynomial",
                    poly.to_text() if poly is not None else val.to_text(),
                    None if poly is not None else "REGULARITY_FAIL")
    return rep


def integrality_precondition(ps: PoissonStructure) -> list:
    """Problems with the integral form spanned by the generators: bracket
    constants must be integers and ``ad(phi_j)^k / k!`` must keep the basis
    integral."""
    issues = []
    for (l, r), val in ps.brackets.items():
        for k, c in val.items():
            if Fraction(c).denominator != 1:
                issues.append(f"{{{l},{r}}} has coefficient {c} on {k}")
    for j in range(ps.n):
        for g in ps.generator_names:
            p = ps.table.var(g)
            k = 0
            while not p.is_zero():
                scaled = p * Fraction(1, factorial(k))
                if not scaled.is_integral():
                    issues.append(f"ad(phi{j + 1})^{k}({g})/{k}! is not integral")
                    break
                k += 1
                p = ps.ad_power_poly(j, p, 1)
    return issues


def check_integrality(ps, word, weight) -> Report:
    word = tuple(word)
    rep = Report(f"integrality({_label(word)},{_wlabel(weight)})")
    with timed(rep):
        issues = integrality_precondition(ps)
        if issues:
            raise CheckError("PRECONDITION_FAIL", "; ".join(issues))
        val = cocycle_by_product(ps, word, weight)
        poly = val.to_polynomial()
        ok = poly is not None and poly.is_integral()
        rep.add(_wlabel(weight), ok, "integer coefficients", val.to_text(),
                None if ok else "INTEGRALITY_FAIL")
    return rep


# -- normalization cocycle ------------------------------------------------

def root_as_lambda(cartan: CartanData, table: VariableTable, lambdas: Sequence[str], root) -> Polynomial:
    """``sum c_i alpha_i`` with ``alpha_i = lambda_i / eps_i``."""
    eps = cartan.epsilon if cartan.epsilon is not None else symmetrize(cartan)
    p = Polynomial(table)
    for i, c in enumerate(root):
        if c:
            p = p + table.var(lambdas[i]) * (Fraction(c) / eps[i])
    return p


def normalization_cocycle(
    cartan: CartanData,
    word: Sequence[int],
    weight: Sequence[int],
    table: Optional[VariableTable] = None,
    lambdas: Optional[Sequence[str]] = None,
) -> RationalFunction:
    """``prod_k (-s_j1...s_j(k-1)(alpha_jk))^<h_jk, s_j(k+1)...s_jp Lambda>``.

    Roots are moved by the linear action on the root lattice and only then
    written in the lambdas.
    """
    try:
        eps = cartan.epsilon if cartan.epsilon is not None else symmetrize(cartan)
    except CartanError as e:
        raise CheckError("NOT_SYMMETRIZABLE", e.detail) from None
    cartan = CartanData(cartan.matrix, eps)
    if lambdas is None:
        from .poisson import default_lambdas
        lambdas = default_lambdas(cartan.n)
    if table is None:
        table = VariableTable.build(lambdas)
    word = tuple(word)
    value = RationalFunction.constant(table, 1)
    for k, n in enumerate(cocycle_exponents(cartan, word, weight)):
        if n:
            beta = act_root(cartan, word[:k], cartan.simple_root(word[k]))
            value = value * RationalFunction(-root_as_lambda(cartan, table, lambdas, beta)) ** n
    return value


def r_dot_factor(ps: PoissonStructure) -> Callable[[int], RationalFunction]:
    """``i -> -phi_i / alpha_i`` with ``alpha_i = lambda_i / eps_i``."""
    eps = ps.cartan.epsilon if ps.cartan.epsilon is not None else symmetrize(ps.cartan)

    def f(i: int) -> RationalFunction:
        return RationalFunction(ps.phi_poly(i) * (-eps[i]), ps.lambda_poly(i))

    return f


def r_dot_coefficient(ps: PoissonStructure, word, weight) -> RationalFunction:
    return tau_action(ps, word, tau_term(ps, weight), factor=r_dot_factor(ps)).coeff


def check_ratio_identity(ps, word, weight) -> Report:
    word = tuple(word)
    rep = Report(f"ratio({_label(word)},{_wlabel(weight)})")
    with timed(rep):
        lhs = r_dot_coefficient(ps, word, weight)
        n = normalization_cocycle(ps.cartan, word, weight, ps.table, ps.lambdas)
        rhs = cocycle_by_product(ps, word, weight) / n
        rep.add("R-dot = phi/N", lhs == rhs, rhs.to_text(), lhs.to_text())
    return rep


def check_reconstruction(ps, word, j: int) -> Report:
    """``w(phi_j) = phi_w(L_j) phi_(w s_j)(L_j) / prod_(i!=j) phi_w(L_i)^(-a_ij)``."""
    word = tuple(word)
    rep = Report(f"reconstruction({_label(word)},phi{j + 1})")
    with timed(rep):
        c = ps.cartan
        L = c.fundamental_weight
        rhs = cocycle_by_product(ps, word, L(j)) * cocycle_by_product(ps, word + (j,), L(j))
        for i in range(ps.n):
            if i != j and c.a(i, j):
                rhs = rhs / cocycle_by_product(ps, word, L(i)) ** (-c.a(i, j))
        lhs = word_image(ps, word, ps.phi[j])
        rep.add(f"phi{j + 1}", lhs == rhs, rhs.to_text(), lhs.to_text())
    return rep
