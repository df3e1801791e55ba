"""Acceptance criteria, one test each.

Every test prints a single ``criterion N PASS|FAIL`` line (visible in
``pytest -v`` output) with its wall time against the stated budget.
"""
import random
import time

import pytest

from birweyl.birational import check_braid, check_canonical, check_lemma_identities
from birweyl.algebra import RationalFunction
from birweyl.cartan import all_words, reduced_words_by_element
from birweyl.expression import parse_expression
from birweyl.poisson import preset
from birweyl.report import Report
from birweyl.tau import (
    check_cocycle_relations,
    check_ratio_identity,
    check_regularity,
    check_word_independence,
    cocycle,
    normalization_cocycle,
)
from birweyl.verify import (
    FIXTURE_PRESETS,
    load_fixture,
    mutate_fixture,
    parse_weight_label,
    random_polynomial,
    random_weight,
    random_word,
    run_fixture_suite,
)

RANK2 = ("2A1", "A2", "B2", "G2")
LONGEST = {"A2": 3, "B2": 4, "G2": 6}
AFFINE = "A2(1)"
SEED = 20240


def _line(capsys, n: int, title: str, ok: bool, elapsed: float, limit=None, extra: str = "") -> bool:
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    budget = f", limit {limit}s" if limit is not None else ""
    with capsys.disabled():
        print(f"\ncriterion {n:2d} {status}: {title} [{elapsed:.2f}s{budget}]{extra}")
    return ok and within


def _failures(rep: Report):
    return [(e.name, e.expected, e.actual) for e in rep.failures()][:3]


class _Timed:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


@pytest.fixture(scope="module")
def fixture_reports():
    t0 = time.perf_counter()
    reps = {name: run_fixture_suite(name) for name in FIXTURE_PRESETS}
    return reps, time.perf_counter() - t0


@pytest.fixture(scope="module")
def relation_reports():
    t0 = time.perf_counter()
    reps = []
    for name in RANK2:
        ps = preset(name)
        rng = random.Random(f"{SEED}-{name}")
        rep = Report(f"relations({name})")
        for _ in range(200):
            w, w2 = random_word(ps.n, rng, 3), random_word(ps.n, rng, 3)
            lam, lam2 = random_weight(ps.n, rng), random_weight(ps.n, rng)
            rep.extend(check_cocycle_relations(ps, w, w2, lam, lam2))
        reps.append(rep)
    for name, length in LONGEST.items():
        ps = preset(name)
        rep = Report(f"word_independence({name})")
        groups = reduced_words_by_element(ps.cartan, length)
        assert len(groups) == 2 * length
        for words in groups.values():
            for j in range(ps.n):
                rep.extend(check_word_independence(ps, words, ps.cartan.fundamental_weight(j)))
        reps.append(rep)
    return reps, time.perf_counter() - t0


@pytest.fixture(scope="module")
def regularity_reports():
    t0 = time.perf_counter()
    reps = []
    for name in ("B2", "G2"):
        ps = preset(name)
        rep = Report(f"regularity({name})")
        for words in reduced_words_by_element(ps.cartan, LONGEST[name]).values():
            for w in words:
                rep.extend(check_regularity(ps, w))
        reps.append(rep)
    ps = preset(AFFINE)
    rep = Report(f"regularity({AFFINE})")
    for w in all_words(ps.n, 5):
        rep.extend(check_regularity(ps, w))
    reps.append(rep)
    return reps, time.perf_counter() - t0


def test_criterion_01_table_reproduction(capsys, fixture_reports):
    reps, elapsed = fixture_reports
    counts = {name: sum(1 for e in r.entries if not e.name.startswith("oracle")) for name, r in reps.items()}
    ok = all(r.status == "PASS" for r in reps.values())
    assert _line(capsys, 1, "table reproduction (s-actions, cocycles, invariants)", ok, elapsed, 60,
                 f" checks {counts}"), {k: _failures(r) for k, r in reps.items()}


def test_criterion_02_braid(capsys):
    with _Timed() as t:
        rep = Report("braid")
        for name in RANK2:
            ps = preset(name)
            sub = check_braid(ps, 0, 1)
            assert sub.skipped_reason is None
            rep.extend(sub, f"{name}: ")
    assert _line(capsys, 2, "braid relations on generators and lambdas", rep.ok and rep.entries, t.elapsed, 30,
                 f" {len(rep.entries)} images"), _failures(rep)


def test_criterion_03_canonical(capsys):
    with _Timed() as t:
        rep = Report("canonical")
        for name in RANK2:
            ps = preset(name)
            rng = random.Random(f"{SEED}-canonical-{name}")
            for i in range(ps.n):
                rep.extend(check_canonical(ps, i), f"{name}: ")
                pairs = [(RationalFunction(random_polynomial(ps.table, rng)),
                          RationalFunction(random_polynomial(ps.table, rng))) for _ in range(100)]
                rep.extend(check_canonical(ps, i, pairs), f"{name} random: ")
    assert _line(capsys, 3, "canonical transformation (generator pairs + 100 random pairs)", rep.ok,
                 t.elapsed, 30, f" {len(rep.entries)} pairs"), _failures(rep)


def test_criterion_04_lemma_identities(capsys):
    with _Timed() as t:
        rep = Report("lemma")
        for name in ("A2", "B2", "G2"):
            rep.extend(check_lemma_identities(preset(name), 0, 1), f"{name}: ")
    ok = rep.ok and len(rep.entries) == 6
    assert _line(capsys, 4, "six invariance identities, cases (-1,-1), (-2,-1), (-3,-1)", ok, t.elapsed), \
        _failures(rep)


def test_criterion_05_cocycle_laws(capsys, relation_reports):
    reps, elapsed = relation_reports
    ok = all(r.ok for r in reps)
    n = sum(len(r.entries) for r in reps)
    assert _line(capsys, 5, "cocycle laws (200 tuples per preset) and word independence", ok, elapsed, 120,
                 f" {n} checks"), [_failures(r) for r in reps]


def test_criterion_06_regularity(capsys, regularity_reports):
    reps, elapsed = regularity_reports
    ok = all(r.ok for r in reps)
    skipped = sum(e.status == "SKIPPED" for r in reps for e in r.entries)
    n = sum(len(r.entries) for r in reps)
    assert _line(capsys, 6, "regularity over W(B2), W(G2) and affine words of length <= 5", ok and not skipped,
                 elapsed, 120, f" {n} checks"), [_failures(r) for r in reps]


def test_criterion_07_oracle(capsys, fixture_reports, relation_reports, regularity_reports):
    t0 = time.perf_counter()
    entries = [e for r in fixture_reports[0].values() for e in r.entries]
    entries += [e for r in relation_reports[0] + regularity_reports[0] for e in r.entries]
    oracle = [e for e in entries if e.name.startswith("oracle(")]
    bad = [e.name for e in oracle if e.status != "PASS"]
    ok = not bad and len(oracle) > 1000
    assert _line(capsys, 7, "product formula vs tau action on criteria 1, 5, 6", ok,
                 time.perf_counter() - t0, extra=f" {len(oracle)} comparisons"), bad[:5]


def test_criterion_08_normalization(capsys):
    with _Timed() as t:
        rep = Report("normalization")
        for name in ("B2", "G2"):
            ps = preset(name)
            weights = [ps.cartan.fundamental_weight(j) for j in range(ps.n)] + [(1, 1), (2, 1)]
            for words in reduced_words_by_element(ps.cartan, LONGEST[name]).values():
                for w in words:
                    for lam in weights:
                        nval = normalization_cocycle(ps.cartan, w, lam, ps.table, ps.lambdas)
                        rep.add(f"{name} N({w},{lam}) polynomial", nval.to_polynomial() is not None,
                                "polynomial", nval.to_text())
                        rep.extend(check_ratio_identity(ps, w, lam), f"{name}: ")
    assert _line(capsys, 8, "normalization cocycle polynomial and ratio identity", rep.ok, t.elapsed,
                 extra=f" {len(rep.entries)} checks"), _failures(rep)


def test_criterion_09_integrality(capsys):
    with _Timed() as t:
        rep = Report("integrality")
        for name in FIXTURE_PRESETS:
            ps = preset(name)
            for e in load_fixture(name).cocycles:
                lam = parse_weight_label(e.weight, ps.n)
                for word in e.words:
                    val = cocycle(ps, [j - 1 for j in word], lam)
                    poly = val.polynomial_form
                    rep.add(f"{name} {word} {e.weight}", poly is not None and poly.is_integral(),
                            "integer polynomial", val.value.to_text())
    assert _line(capsys, 9, "integral polynomial forms of the table cocycles", rep.ok and rep.entries,
                 t.elapsed, extra=f" {len(rep.entries)} values"), _failures(rep)


def test_criterion_10_mutation_sensitivity(capsys):
    with _Timed() as t:
        rng = random.Random(SEED)
        caught = []
        for _ in range(10):
            name = rng.choice(FIXTURE_PRESETS)
            mutated, label = mutate_fixture(load_fixture(name), rng)
            caught.append((name, label, run_fixture_suite(name, mutated).status == "FAIL"))
    missed = [c for c in caught if not c[2]]
    assert _line(capsys, 10, "10 random single-sign mutations all detected", not missed, t.elapsed), missed


def test_g2_large_value_counts():
    """Pin the computed sizes of the two large G2 values."""
    ps = preset("G2")
    sizes = []
    for word in ((0, 1, 0, 1), (1, 0, 1, 0, 1)):
        p = cocycle(ps, word, (0, 1)).polynomial_form
        gen_monomials = {m[ps.n:] for m in p.terms}
        sizes.append((len(gen_monomials), len(p.terms)))
    assert sizes == [(20, 70), (27, 124)]
