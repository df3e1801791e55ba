"""Finite graded nilpotent Lie-Poisson structures.

A structure is the symmetric algebra on a graded basis of generators with a
linear bracket given by structure constants, extended to polynomials by the
Leibniz rule and to quotients by the quotient rule.  Lambda variables are
central.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import (
    Polynomial,
    RationalFunction,
    VariableTable,
    _add_into,
    _mul,
    format_coeff,
)
from .cartan import CartanData, CartanError, preset_cartan, symmetrize, validate_gcm

CONST = "1"  # key of a constant term in a bracket value


class StructureError(ValueError):
    """Parse or validation failure; ``issues`` lists ``(code, detail)``."""

    def __init__(self, issues: Sequence[Tuple[str, str]]):
        self.issues = list(issues)
        super().__init__("; ".join(f"{c}({d})" for c, d in self.issues))

    @property
    def code(self) -> str:
        return self.issues[0][0] if self.issues else ""


@dataclass(frozen=True)
class Generator:
    name: str
    root: Tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.root)


@dataclass(eq=False)
class PoissonStructure:
    """Generators, bracket table and the distinguished ``phi_i``.

    ``brackets`` maps an ordered pair of generator names to a linear
    combination ``{name or CONST: coeff}``; it is stored antisymmetrically.
    """

    cartan: CartanData
    generators: Tuple[Generator, ...]
    phi: Tuple[str, ...]
    brackets: Dict[Tuple[str, str], Dict[str, Fraction]]
    lambdas: Tuple[str, ...]
    name: str = "custom"
    table: VariableTable = field(init=False)

    def __post_init__(self):
        self.table = VariableTable.build(self.lambdas, [(g.name, g.height) for g in self.generators])
        self._gen = {g.name: g for g in self.generators}
        t = self.table
        self._bpoly: Dict[Tuple[int, int], Polynomial] = {}
        for (l, r), val in self.brackets.items():
            terms = {}
            for k, c in val.items():
                mono = t.zero_exps() if k == CONST else next(iter(t.var(k).terms))
                terms[mono] = terms.get(mono, 0) + Fraction(c)
            p = Polynomial(t, terms)
            if not p.is_zero():
                self._bpoly[(t.index(l), t.index(r))] = p
        self._cache: dict = {}

    @property
    def n(self) -> int:
        return self.cartan.n

    @property
    def generator_names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def generator(self, name: str) -> Generator:
        return self._gen[name]

    def phi_poly(self, i: int) -> Polynomial:
        return self.table.var(self.phi[i])

    def phi_rf(self, i: int) -> RationalFunction:
        return RationalFunction(self.phi_poly(i))

    def lambda_poly(self, i: int) -> Polynomial:
        return self.table.var(self.lambdas[i])

    def basis_bracket(self, g: str, h: str) -> Polynomial:
        t = self.table
        return self._bpoly.get((t.index(g), t.index(h)), Polynomial(t))

    def max_height(self) -> int:
        return max(g.height for g in self.generators)

    # -- bracket on polynomials and rational functions ---------------------
    def _gradient(self, p: Polynomial) -> Dict[int, dict]:
        out = {}
        for a in self.table.generator_indices:
            d = p.diff(a)
            if d.terms:
                out[a] = d.terms
        return out

    def bracket_poly(self, p: Polynomial, q: Polynomial) -> Polynomial:
        gp = self._gradient(p)
        if not gp:
            return Polynomial(self.table)
        gq = self._gradient(q)
        acc: dict = {}
        for a, da in gp.items():
            inner: dict = {}
            for b, db in gq.items():
                c = self._bpoly.get((a, b))
                if c is not None:
                    _add_into(inner, _mul(c.terms, db))
            if inner:
                _add_into(acc, _mul(da, inner))
        return Polynomial._raw(self.table, acc)

    def bracket(self, f, g) -> RationalFunction:
        """Poisson bracket of two rational functions (or polynomials)."""
        f = _as_rf(f)
        g = _as_rf(g)
        if f.den.is_constant() and g.den.is_constant():
            c = f.den.constant_value() * g.den.constant_value()
            return RationalFunction(self.bracket_poly(f.num, g.num), Polynomial.constant(self.table, c))
        # {N1/D1, N2/D2} = ({N1,N2} D1 D2 - N1 {D1,N2} D2 - N2 D1 {N1,D2}
        #                   + N1 N2 {D1,D2}) / (D1^2 D2^2)
        n1, d1, n2, d2 = f.num, f.den, g.num, g.den
        b = self.bracket_poly
        top = b(n1, n2) * d1 * d2 - n1 * b(d1, n2) * d2 - n2 * d1 * b(n1, d2) + n1 * n2 * b(d1, d2)
        return RationalFunction(top, (d1 * d2) ** 2)

    def ad_power(self, i: int, f, k: int) -> RationalFunction:
        f = _as_rf(f)
        phi = self.phi_rf(i)
        for _ in range(k):
            if f.is_zero():
                break
            f = self.bracket(phi, f)
        return f

    def ad_power_poly(self, i: int, p: Polynomial, k: int) -> Polynomial:
        phi = self.phi_poly(i)
        for _ in range(k):
            if p.is_zero():
                break
            p = self.bracket_poly(phi, p)
        return p

    # -- serialization ------------------------------------------------------
    def to_document(self) -> dict:
        seen = set()
        entries = []
        order = {g.name: k for k, g in enumerate(self.generators)}
        for (l, r), val in sorted(self.brackets.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])):
            if (r, l) in seen or not val:
                continue
            seen.add((l, r))
            entries.append({
                "left": l,
                "right": r,
                "value": [{"gen": k, "coeff": format_coeff(Fraction(c))} for k, c in val.items()],
            })
        doc = {
            "gcm": [list(r) for r in self.cartan.matrix],
            "lambdas": list(self.lambdas),
            "generators": [{"name": g.name, "root": list(g.root)} for g in self.generators],
            "phi": list(self.phi),
            "brackets": entries,
        }
        if self.cartan.epsilon is not None:
            doc["epsilon"] = [format_coeff(e) for e in self.cartan.epsilon]
        return doc

    def __eq__(self, other):
        if not isinstance(other, PoissonStructure):
            return NotImplemented
        return (
            self.cartan.matrix == other.cartan.matrix
            and self.generators == other.generators
            and self.phi == other.phi
            and self.lambdas == other.lambdas
            and _clean(self.brackets) == _clean(other.brackets)
        )

    __hash__ = object.__hash__


def _clean(br):
    return {k: {g: Fraction(c) for g, c in v.items() if c} for k, v in br.items() if any(v.values())}


def _as_rf(f) -> RationalFunction:
    if isinstance(f, RationalFunction):
        return f
    if isinstance(f, Polynomial):
        return RationalFunction(f)
    raise TypeError(f"expected a polynomial or rational function, got {type(f).__name__}")


def make_structure(
    cartan: CartanData,
    generators: Sequence[Tuple[str, Sequence[int]]],
    phi: Sequence[str],
    brackets: Mapping[Tuple[str, str], Mapping[str, Union[int, str, Fraction]]],
    lambdas: Optional[Sequence[str]] = None,
    name: str = "custom",
) -> PoissonStructure:
    """Build a structure from one entry per unordered pair (antisymmetry is
    filled in).  Raises :class:`StructureError` on inconsistent input; does
    not run :func:`validate`."""
    gens = tuple(Generator(n, tuple(int(x) for x in r)) for n, r in generators)
    names = {g.name for g in gens}
    issues = []
    if lambdas is None:
        lambdas = default_lambdas(cartan.n)
    lambdas = tuple(lambdas)
    if len(lambdas) != cartan.n:
        issues.append(("LAMBDA_COUNT", f"need {cartan.n} lambda names"))
    clash = names.intersection(lambdas)
    if clash:
        issues.append(("NAME_CLASH", ",".join(sorted(clash))))
    if len(phi) != cartan.n:
        issues.append(("PHI_COUNT", f"need {cartan.n} phi generators"))
    for i, p in enumerate(phi):
        if p not in names:
            issues.append(("UNKNOWN_GENERATOR", p))
    table: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    for (l, r), val in brackets.items():
        for x in (l, r):
            if x not in names:
                issues.append(("UNKNOWN_GENERATOR", x))
        clean = {}
        for k, c in val.items():
            if k != CONST and k not in names:
                issues.append(("UNKNOWN_GENERATOR", k))
            c = Fraction(c)
            if c:
                clean[k] = clean.get(k, 0) + c
        if l == r:
            if clean:
                issues.append(("ANTISYMMETRY_FAIL", f"{{{l},{l}}} must vanish"))
            continue
        neg = {k: -c for k, c in clean.items()}
        if (l, r) in table and table[(l, r)] != clean:
            issues.append(("ANTISYMMETRY_FAIL", f"conflicting entries for {{{l},{r}}}"))
        table[(l, r)] = clean
        table[(r, l)] = neg
    if issues:
        raise StructureError(issues)
    ps = PoissonStructure(cartan, gens, tuple(phi), table, lambdas, name)
    for i, p in enumerate(phi):
        if ps.generator(p).root != cartan.simple_root(i):
            issues.append(("PHI_ROOT", f"{p} must have root alpha_{i + 1}"))
    if any(g.height <= 0 or min(g.root) < 0 for g in gens):
        issues.append(("GRADING_FAIL", "generator roots must be positive"))
    if issues:
        raise StructureError(issues)
    return ps


def default_lambdas(n: int) -> Tuple[str, ...]:
    if n == 2:
        return ("a", "b")
    return tuple(f"l{i + 1}" for i in range(n))


# -- validation --------------------------------------------------------------

def validate(ps: PoissonStructure) -> List[Tuple[str, str]]:
    """Check grading, Jacobi on basis triples and the Serre relations.

    Returns the list of ``(code, detail)`` issues; empty means ok.  Positive
    heights make every ``ad`` nilpotent, so nilpotency needs no extra test.
    Constant terms (numerically specialized central elements) are exempt
    from the grading test.
    """
    issues = []
    gens = ps.generators
    t = ps.table
    by_name = {g.name: g for g in gens}
    for (l, r), val in ps.brackets.items():
        want = tuple(a + b for a, b in zip(by_name[l].root, by_name[r].root))
        for k in val:
            if k == CONST:
                continue
            if by_name[k].root != want:
                issues.append(("GRADING_FAIL", f"{{{l},{r}}} contains {k}"))
    for i, a in enumerate(gens):
        for j in range(i + 1, len(gens)):
            for k in range(j + 1, len(gens)):
                b, c = gens[j], gens[k]
                A, B, C = (t.var(g.name) for g in (a, b, c))
                br = ps.bracket_poly
                s = br(A, br(B, C)) + br(B, br(C, A)) + br(C, br(A, B))
                if not s.is_zero():
                    issues.append(("JACOBI_FAIL", f"({a.name},{b.name},{c.name})"))
    cartan = ps.cartan
    for i in range(ps.n):
        for j in range(ps.n):
            if i == j:
                continue
            k = 1 - cartan.a(i, j)
            if not ps.ad_power_poly(i, ps.phi_poly(j), k).is_zero():
                issues.append(("SERRE_FAIL", f"({i + 1},{j + 1})"))
    return issues


def check(ps: PoissonStructure) -> PoissonStructure:
    issues = validate(ps)
    if issues:
        raise StructureError(issues)
    return ps


# -- presets -------------------------------------------------------------------

_PRESETS = {
    "2A1": (
        [("x", (1, 0)), ("y", (0, 1))],
        ["x", "y"],
        {},
    ),
    "A2": (
        [("x", (1, 0)), ("y", (0, 1)), ("z", (1, 1))],
        ["x", "y"],
        {("x", "y"): {"z": 1}},
    ),
    "B2": (
        [("x", (1, 0)), ("y", (0, 1)), ("z", (1, 1)), ("w", (2, 1))],
        ["x", "y"],
        {("x", "y"): {"z": 1}, ("x", "z"): {"w": 2}},
    ),
    "G2": (
        [("u", (1, 0)), ("v", (0, 1)), ("w", (1, 1)), ("x", (2, 1)), ("y", (3, 1)), ("z", (3, 2))],
        ["u", "v"],
        {
            ("u", "v"): {"w": 1},
            ("u", "w"): {"x": 2},
            ("u", "x"): {"y": 3},
            ("v", "y"): {"z": 1},
            ("w", "x"): {"z": -3},
        },
    ),
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name: str) -> PoissonStructure:
    if name in ("A2(1)", "A2_1"):
        return preset_height2(preset_cartan("A2(1)"), name="A2(1)")
    try:
        gens, phi, br = _PRESETS[name]
    except KeyError:
        raise StructureError([("UNKNOWN_PRESET", name)]) from None
    ps = make_structure(preset_cartan(name).with_symmetrizer(), gens, phi, br, ("a", "b"), name=name)
    return check(ps)


def preset_height2(
    cartan: CartanData,
    constants: Optional[Mapping[Tuple[int, int], Union[int, str, Fraction]]] = None,
    lambdas: Optional[Sequence[str]] = None,
    name: Optional[str] = None,
) -> PoissonStructure:
    """Poisson algebra truncated at height 2.

    Generators ``f1..fn`` (height 1) and, for ``i < j`` with ``a_ij != 0``,
    the central ``z<i><j> = {f_i, f_j}`` (height 2).  With ``constants``
    given as ``{(i, j): u_ij}`` (0-based, ``i < j``), ``{f_i, f_j}`` is
    instead specialized to the number ``u_ij / eps_i`` and no ``z`` is made.
    """
    eps = symmetrize(cartan)
    cartan = CartanData(cartan.matrix, eps)
    n = cartan.n
    gens = [(f"f{i + 1}", cartan.simple_root(i)) for i in range(n)]
    br: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            if cartan.a(i, j) == 0:
                continue
            if constants is None:
                zname = f"z{i + 1}{j + 1}" if n < 10 else f"z{i + 1}_{j + 1}"
                root = tuple(1 if k in (i, j) else 0 for k in range(n))
                gens.append((zname, root))
                br[(f"f{i + 1}", f"f{j + 1}")] = {zname: Fraction(1)}
            else:
                u = Fraction(constants.get((i, j), 0))
                if u:
                    br[(f"f{i + 1}", f"f{j + 1}")] = {CONST: u / eps[i]}
    ps = make_structure(
        cartan, gens, [f"f{i + 1}" for i in range(n)], br, lambdas,
        name=name or "height2",
    )
    return check(ps)


# -- structure documents -----------------------------------------------------

def load_structure(document: Union[str, Mapping]) -> PoissonStructure:
    """Parse a JSON structure document (text or already-decoded mapping).

    Unlisted bracket pairs are zero.  Raises :class:`StructureError` with
    field diagnostics on malformed input and with validation issues
    otherwise.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise StructureError([("PARSE_ERROR", f"line {e.lineno} column {e.colno}: {e.msg}")]) from None
    if not isinstance(document, Mapping):
        raise StructureError([("PARSE_ERROR", "top level must be an object")])
    try:
        gcm = document["gcm"]
        cartan = validate_gcm(gcm, document.get("epsilon"))
    except KeyError as e:
        raise StructureError([("PARSE_ERROR", f"missing field {e.args[0]!r}")]) from None
    except CartanError as e:
        raise StructureError([(e.code, e.detail)]) from None
    except (TypeError, ValueError) as e:
        raise StructureError([("PARSE_ERROR", f"gcm/epsilon: {e}")]) from None
    try:
        gens = [(g["name"], g["root"]) for g in document["generators"]]
        phi = list(document["phi"])
        brackets: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
        for k, entry in enumerate(document.get("brackets", [])):
            val: Dict[str, Fraction] = {}
            for item in entry["value"]:
                try:
                    c = Fraction(str(item["coeff"]).replace("−", "-"))
                except (ValueError, ZeroDivisionError):
                    raise StructureError([("PARSE_ERROR", f"brackets[{k}].coeff = {item['coeff']!r}")]) from None
                val[item["gen"]] = val.get(item["gen"], 0) + c
            key = (entry["left"], entry["right"])
            if key in brackets:
                raise StructureError([("PARSE_ERROR", f"brackets[{k}] repeats {{{key[0]},{key[1]}}}")])
            brackets[key] = val
    except KeyError as e:
        raise StructureError([("PARSE_ERROR", f"missing field {e.args[0]!r}")]) from None
    except TypeError as e:
        raise StructureError([("PARSE_ERROR", str(e))]) from None
    if cartan.epsilon is None:
        try:
            cartan = cartan.with_symmetrizer()
        except CartanError:
            pass
    ps = make_structure(cartan, gens, phi, brackets, document.get("lambdas"), name=document.get("name", "custom"))
    return check(ps)
