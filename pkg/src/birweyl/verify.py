"""Fixture tables and one-shot verification suites.

Fixtures are JSON files shipped with the package, one per rank-2 preset.
Each holds the s-action table, the cocycle table (every listed word of a
column, per fundamental weight) and the invariance remarks.  Values are
expression strings in the grammar of :mod:`birweyl.expression`.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Polynomial, RationalFunction, VariableTable
from .birational import (
    apply,
    check_braid,
    check_canonical,
    check_involution,
    check_lemma_identities,
    lemma_cases,
    nested_product,
    simple_reflection,
)
from .cartan import (
    CartanError,
    all_words,
    coxeter_m,
    is_symmetrizable,
    reduced_words_by_element,
)
from .expression import parse_expression
from .poisson import PoissonStructure, preset
from .report import CheckError, Report, timed
from .tau import (
    check_cocycle_relations,
    check_ratio_identity,
    check_reconstruction,
    check_regularity,
    check_word_independence,
    format_weight,
    normalization_cocycle,
    oracle_cocycle,
)

FIXTURE_PRESETS = ("2A1", "A2", "B2", "G2")


@dataclass(frozen=True)
class CocycleEntry:
    weight: str
    words: Tuple[Tuple[int, ...], ...]  # 1-based letters
    value: str
    errata: Tuple[dict, ...] = ()


@dataclass(frozen=True)
class InvarianceEntry:
    ops: Tuple[Tuple[int, int], ...]  # (1-based letter, exponent)
    invariant_under: int
    value: Optional[str] = None
    value_from: Optional[dict] = None


@dataclass(frozen=True)
class FixtureSet:
    preset: str
    variables: Tuple[str, ...]
    s_action: Dict[int, Dict[str, str]]
    cocycles: Tuple[CocycleEntry, ...]
    invariance: Tuple[InvarianceEntry, ...] = ()

    @classmethod
    def from_json(cls, data: dict) -> "FixtureSet":
        return cls(
            preset=data["preset"],
            variables=tuple(data["variables"]),
            s_action={int(k): dict(v) for k, v in data["s_action"].items()},
            cocycles=tuple(
                CocycleEntry(e["weight"], tuple(tuple(w) for w in e["words"]), e["value"],
                             tuple(e.get("errata", ())))
                for e in data["cocycles"]
            ),
            invariance=tuple(
                InvarianceEntry(tuple(tuple(o) for o in e["ops"]), e["invariant_under"],
                                e.get("value"), e.get("value_from"))
                for e in data.get("invariance", ())
            ),
        )

    def to_json(self) -> dict:
        cocycles = []
        for e in self.cocycles:
            d = {"weight": e.weight, "words": [list(w) for w in e.words], "value": e.value}
            if e.errata:
                d["errata"] = list(e.errata)
            cocycles.append(d)
        inv = []
        for e in self.invariance:
            d = {"ops": [list(o) for o in e.ops], "invariant_under": e.invariant_under}
            if e.value is not None:
                d["value"] = e.value
            if e.value_from is not None:
                d["value_from"] = e.value_from
            inv.append(d)
        return {
            "preset": self.preset,
            "variables": list(self.variables),
            "s_action": {str(k): v for k, v in sorted(self.s_action.items())},
            "cocycles": cocycles,
            "invariance": inv,
        }

    def entry_count(self) -> Tuple[int, int]:
        """(s-action entries, cocycle entries) as laid out in the tables."""
        return sum(len(v) for v in self.s_action.values()), len(self.cocycles)

    def lookup(self, weight: str, word: Sequence[int]) -> str:
        word = tuple(word)
        for e in self.cocycles:
            if e.weight == weight and word in e.words:
                return e.value
        raise KeyError(f"no cocycle entry for {weight} at word {word}")


def load_fixture(name: str) -> FixtureSet:
    if name not in FIXTURE_PRESETS:
        raise CheckError("UNKNOWN_PRESET", name)
    text = resources.files("birweyl").joinpath("fixtures", f"{name}.json").read_text(encoding="utf-8")
    return FixtureSet.from_json(json.loads(text))


def parse_weight_label(label: str, n: int) -> Tuple[int, ...]:
    """``"L2"`` -> ``(0, 1)`` (fixtures use single fundamental weights)."""
    j = int(label[1:]) - 1
    return tuple(1 if k == j else 0 for k in range(n))


def _word_label(word) -> str:
    return "s" + "s".join(str(j) for j in word) if word else "1"


def run_fixture_suite(name: str, fixture: Optional[FixtureSet] = None) -> Report:
    """Recompute every table entry of a preset and compare exactly."""
    fs = fixture if fixture is not None else load_fixture(name)
    ps = preset(fs.preset)
    rep = Report(f"fixtures({fs.preset})")
    with timed(rep):
        if tuple(ps.table.names) != fs.variables:
            raise CheckError("FIXTURE_MISMATCH", f"variables {fs.variables} vs {ps.table.names}")
        for letter, row in sorted(fs.s_action.items()):
            sub = simple_reflection(ps, letter - 1)
            for var, text in row.items():
                expected = parse_expression(text, ps.table)
                actual = sub.image(var)
                rep.add(f"s{letter}({var})", actual == expected, expected.to_text(), actual.to_text())
        for e in fs.cocycles:
            expected = parse_expression(e.value, ps.table)
            lam = parse_weight_label(e.weight, ps.n)
            for word in e.words:
                w0 = tuple(j - 1 for j in word)
                actual = oracle_cocycle(ps, w0, lam, rep)
                name_ = f"phi_{_word_label(word)}({e.weight})"
                ok = actual == expected
                detail = None if ok else "difference: " + (actual - expected).to_text()
                rep.add(name_, ok, expected.to_text(), actual.to_text(), detail)
        for k, e in enumerate(fs.invariance):
            ops = [(j - 1, p) for j, p in e.ops]
            val = nested_product(ps, ops)
            moved = apply(simple_reflection(ps, e.invariant_under - 1), val)
            label = "".join(f"phi{j}^{p} s{j} " if p != 1 else f"phi{j} s{j} " for j, p in e.ops[:-1])
            j, p = e.ops[-1]
            label += f"(phi{j}" + (f"^{p})" if p != 1 else ")")
            rep.add(f"invariant under s{e.invariant_under}: {label}", moved == val, val.to_text(), moved.to_text())
            text = e.value
            if text is None and e.value_from is not None:
                text = fs.lookup(e.value_from["weight"], e.value_from["word"])
            if text is not None:
                expected = parse_expression(text, ps.table)
                rep.add(f"value: {label}", val == expected, expected.to_text(), val.to_text())
    return rep


def mutate_fixture(fs: FixtureSet, rng: random.Random) -> Tuple[FixtureSet, str]:
    """Flip the sign of one coefficient of one fixture value.

    Picks an s-action or cocycle value, expands it to canonical form and
    negates one term of its numerator.  Returns the mutated set and a label.
    """
    ps = preset(fs.preset)
    slots = []
    for letter, row in sorted(fs.s_action.items()):
        for var in row:
            slots.append(("s", letter, var))
    for k in range(len(fs.cocycles)):
        slots.append(("c", k, None))
    kind, a, b = rng.choice(slots)
    text = fs.s_action[a][b] if kind == "s" else fs.cocycles[a].value
    f = parse_expression(text, ps.table)
    terms = f.num.sorted_terms()
    m, c = terms[rng.randrange(len(terms))]
    flipped = dict(f.num.terms)
    flipped[m] = -c
    g = RationalFunction(Polynomial(ps.table, flipped), f.den)
    new_text = g.to_text()
    if kind == "s":
        rows = {k: dict(v) for k, v in fs.s_action.items()}
        rows[a][b] = new_text
        return replace(fs, s_action=rows), f"s{a}({b})"
    entries = list(fs.cocycles)
    entries[a] = replace(entries[a], value=new_text)
    return replace(fs, cocycles=tuple(entries)), f"cocycle #{a} ({entries[a].weight})"


# -- property suite ---------------------------------------------------------

def random_polynomial(table: VariableTable, rng: random.Random, max_terms: int = 4,
                      max_degree: int = 3, names: Optional[Sequence[str]] = None) -> Polynomial:
    idx = [table.index(n) for n in names] if names else list(range(table.nvars))
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * table.nvars
        for _ in range(rng.randint(0, max_degree)):
            e[rng.choice(idx)] += 1
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        if c:
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return Polynomial(table, terms)


def random_word(n: int, rng: random.Random, max_len: int) -> Tuple[int, ...]:
    return tuple(rng.randrange(n) for _ in range(rng.randint(0, max_len)))


def random_weight(n: int, rng: random.Random, lo: int = -1, hi: int = 2) -> Tuple[int, ...]:
    return tuple(rng.randint(lo, hi) for _ in range(n))


@dataclass
class PropertyConfig:
    random_pairs: int = 10
    relation_samples: int = 20
    reconstruction_samples: int = 10
    relation_word_len: Optional[int] = None  # per word; defaults to max_word_len // 2


def run_property_suite(ps: PoissonStructure, max_word_len: int, seed: int,
                       config: Optional[PropertyConfig] = None) -> Report:
    """Every structural identity on one structure, with seeded sampling."""
    cfg = config or PropertyConfig()
    rng = random.Random(seed)
    rep = Report(f"properties({ps.name or 'structure'},len<={max_word_len},seed={seed})")
    c = ps.cartan
    n = ps.n
    with timed(rep):
        for i in range(n):
            rep.extend(check_involution(ps, i), f"involution s{i + 1}: ")
        for i in range(n):
            for j in range(i + 1, n):
                sub = check_braid(ps, i, j)
                if sub.skipped_reason:
                    rep.skip(f"braid s{i + 1},s{j + 1}", sub.skipped_reason)
                else:
                    rep.extend(sub, f"braid s{i + 1},s{j + 1}: ")
        for i in range(n):
            rep.extend(check_canonical(ps, i), f"canonical s{i + 1}: ")
            pairs = [
                (RationalFunction(random_polynomial(ps.table, rng)), RationalFunction(random_polynomial(ps.table, rng)))
                for _ in range(cfg.random_pairs)
            ]
            rep.extend(check_canonical(ps, i, pairs), f"canonical s{i + 1} random: ")
        for i in range(n):
            for j in range(i + 1, n):
                if c.a(i, j) == 0:
                    continue
                try:
                    lemma_cases(ps, i, j)
                except CheckError as e:
                    rep.skip(f"lemma s{i + 1},s{j + 1}", e.code)
                    continue
                rep.extend(check_lemma_identities(ps, i, j), f"lemma s{i + 1},s{j + 1}: ")
        half = cfg.relation_word_len if cfg.relation_word_len is not None else max(1, max_word_len // 2)
        for _ in range(cfg.relation_samples):
            w, w2 = random_word(n, rng, half), random_word(n, rng, half)
            lam, lam2 = random_weight(n, rng), random_weight(n, rng)
            rep.extend(check_cocycle_relations(ps, w, w2, lam, lam2), "relations: ")
        groups = reduced_words_by_element(c, max_word_len)
        fundamentals = [c.fundamental_weight(j) for j in range(n)]
        for key in sorted(groups):
            words = groups[key]
            if len(words) > 1:
                for lam in fundamentals:
                    rep.extend(check_word_independence(ps, words, lam), "word independence: ")
        reduced = sorted((w for ws in groups.values() for w in ws), key=lambda w: (len(w), w))
        for w in reduced:
            rep.extend(check_regularity(ps, w), "regularity: ")
        for _ in range(cfg.reconstruction_samples):
            w = random_word(n, rng, max_word_len)
            rep.extend(check_reconstruction(ps, w, rng.randrange(n)), "reconstruction: ")
        if is_symmetrizable(c):
            for w in reduced:
                for lam in fundamentals:
                    rep.extend(check_ratio_identity(ps, w, lam), "ratio: ")
                    nval = normalization_cocycle(c, w, lam, ps.table, ps.lambdas)
                    rep.add(f"normalization polynomial: {_word_label([j + 1 for j in w])},{format_weight(lam)}",
                            nval.to_polynomial() is not None, "polynomial", nval.to_text())
        else:
            rep.skip("ratio", "NOT_SYMMETRIZABLE")
    return rep
