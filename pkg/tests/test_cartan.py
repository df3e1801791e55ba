import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from birweyl.cartan import (
    INFINITY,
    CartanError,
    act_coroot,
    act_root,
    act_weight,
    all_words,
    coxeter_m,
    element_key,
    inversion_roots,
    is_reduced,
    is_symmetrizable,
    pairing,
    preset_cartan,
    reduced_words_by_element,
    reflect_lambda,
    symmetrize,
    validate_gcm,
)

RANK2 = ("2A1", "A2", "B2", "G2")
ORDERS = {"2A1": 4, "A2": 6, "B2": 8, "G2": 12}


def test_validate_accepts_rank2_matrices():
    assert validate_gcm([[2, -1], [-1, 2]]).n == 2
    assert validate_gcm([[2, -2], [-1, 2]]).a(0, 1) == -2


@pytest.mark.parametrize(
    "matrix, code",
    [
        ([[2, 0], [-1, 2]], "ZERO_PATTERN_ASYMMETRIC"),
        ([[2, 1], [1, 2]], "POSITIVE_OFFDIAGONAL"),
        ([[1, -1], [-1, 2]], "DIAGONAL_NOT_TWO"),
        ([[2, -1]], "NOT_SQUARE"),
        ([[2, -0.5], [-1, 2]], "NOT_INTEGER"),
    ],
)
def test_validate_rejects(matrix, code):
    with pytest.raises(CartanError) as e:
        validate_gcm(matrix)
    assert e.value.code == code


def test_symmetrizer_satisfies_invariant():
    # a_ij eps_j = a_ji eps_i fixes eps_2 = eps_1/2 for B2 and eps_1/3 for G2
    assert symmetrize(preset_cartan("A2")) == (1, 1)
    assert symmetrize(preset_cartan("B2")) == (1, Fraction(1, 2))
    assert symmetrize(preset_cartan("G2")) == (1, Fraction(1, 3))
    for name in RANK2:
        c = preset_cartan(name)
        eps = symmetrize(c)
        assert all(c.a(i, j) * eps[j] == c.a(j, i) * eps[i] for i in range(2) for j in range(2))


def test_bad_symmetrizer_rejected():
    with pytest.raises(CartanError) as e:
        validate_gcm([[2, -2], [-1, 2]], epsilon=(1, 2))
    assert e.value.code == "BAD_SYMMETRIZER"


def test_not_symmetrizable():
    c = validate_gcm([[2, -2, -1], [-1, 2, -1], [-2, -2, 2]])
    assert not is_symmetrizable(c)
    with pytest.raises(CartanError) as e:
        symmetrize(c)
    assert e.value.code == "NOT_SYMMETRIZABLE"


def test_coxeter_numbers():
    assert coxeter_m(preset_cartan("A2"), 0, 1) == 3
    assert coxeter_m(preset_cartan("2A1"), 0, 1) == 2
    assert coxeter_m(preset_cartan("B2"), 0, 1) == 4
    assert coxeter_m(preset_cartan("G2"), 0, 1) == 6
    assert coxeter_m(validate_gcm([[2, -2], [-2, 2]]), 0, 1) == INFINITY
    with pytest.raises(CartanError):
        coxeter_m(preset_cartan("A2"), 1, 1)


def test_weight_action_examples():
    c = preset_cartan("A2")
    assert act_weight(c, (0,), (0, 1)) == (0, 1)
    assert act_weight(c, (0,), (1, 0)) == (-1, 1)
    assert act_weight(c, (), (3, -2)) == (3, -2)


def test_root_action_examples():
    a2, b2 = preset_cartan("A2"), preset_cartan("B2")
    assert act_root(a2, (0,), (1, 0)) == (-1, 0)
    assert act_root(a2, (0,), (0, 1)) == (1, 1)
    # r_2 alpha_1 = alpha_1 - a_21 alpha_2 = alpha_1 + alpha_2 in root coordinates;
    # written in lambdas (alpha_2 = b/eps_2 = 2b) this is a + 2b, the s_2 image of a
    assert act_root(b2, (1,), (1, 0)) == (1, 1)
    from birweyl.algebra import VariableTable
    from birweyl.tau import root_as_lambda

    t = VariableTable.build(("a", "b"))
    assert root_as_lambda(b2, t, ("a", "b"), (1, 1)) == t.var("a") + t.var("b") * 2


def test_is_reduced_examples():
    assert is_reduced(preset_cartan("A2"), (0, 1, 0))
    assert not is_reduced(preset_cartan("A2"), (0, 0))
    assert is_reduced(preset_cartan("G2"), (0, 1, 0, 1, 0, 1))
    assert not is_reduced(preset_cartan("G2"), (0, 1, 0, 1, 0, 1, 0))


def test_reflect_lambda_examples():
    assert reflect_lambda(preset_cartan("A2"), 0) == {0: {0: -1}, 1: {1: 1, 0: 1}}
    assert reflect_lambda(preset_cartan("B2"), 1) == {0: {0: 1, 1: 2}, 1: {1: -1}}
    assert reflect_lambda(preset_cartan("G2"), 1) == {0: {0: 1, 1: 3}, 1: {1: -1}}


@pytest.mark.parametrize("name", RANK2)
def test_group_orders(name):
    groups = reduced_words_by_element(preset_cartan(name), 8)
    assert len(groups) == ORDERS[name]
    longest = max(groups.values(), key=lambda ws: len(ws[0]))
    assert len(longest) == 2  # two reduced words for the longest element


@pytest.mark.parametrize("name", RANK2)
def test_is_reduced_matches_exhaustive_search(name):
    c = preset_cartan(name)
    shortest = {}
    for w in all_words(2, 6):
        shortest.setdefault(element_key(c, w), len(w))
    for w in all_words(2, 6):
        assert is_reduced(c, w) == (len(w) == shortest[element_key(c, w)])


names = st.sampled_from(RANK2)
words = st.lists(st.integers(0, 1), max_size=8).map(tuple)
vectors = st.tuples(st.integers(-5, 5), st.integers(-5, 5))


@given(names, words, vectors)
def test_inverse_word_undoes_action(name, w, lam):
    c = preset_cartan(name)
    assert act_weight(c, tuple(reversed(w)), act_weight(c, w, lam)) == lam


@given(names, words, vectors, vectors)
def test_pairing_invariance(name, w, h, lam):
    c = preset_cartan(name)
    assert pairing(act_coroot(c, w, h), act_weight(c, w, lam)) == pairing(h, lam)


@given(names, words, vectors)
def test_root_to_weight_intertwines(name, w, alpha):
    c = preset_cartan(name)
    assert c.root_to_weight(act_root(c, w, alpha)) == act_weight(c, w, c.root_to_weight(alpha))


@given(names, words)
def test_inversion_roots_count_length(name, w):
    c = preset_cartan(name)
    if is_reduced(c, w):
        assert len(set(inversion_roots(c, w))) == len(w)
