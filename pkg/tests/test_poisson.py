import json

import pytest
from hypothesis import given, strategies as st

from birweyl.cartan import preset_cartan, validate_gcm
from birweyl.expression import parse_expression
from birweyl.poisson import (
    CONST,
    StructureError,
    check,
    load_structure,
    make_structure,
    preset,
    preset_height2,
    validate,
)
from strategies import polynomials

A2_DOC = {
    "gcm": [[2, -1], [-1, 2]],
    "generators": [{"name": "x", "root": [1, 0]}, {"name": "y", "root": [0, 1]}, {"name": "z", "root": [1, 1]}],
    "phi": ["x", "y"],
    "lambdas": ["a", "b"],
    "brackets": [{"left": "x", "right": "y", "value": [{"gen": "z", "coeff": "1"}]}],
}


def E(ps, text):
    return parse_expression(text, ps.table)


@pytest.mark.parametrize("name", ["2A1", "A2", "B2", "G2", "A2(1)"])
def test_presets_validate(name):
    assert validate(preset(name)) == []


def test_unknown_preset():
    with pytest.raises(StructureError) as e:
        preset("E8")
    assert e.value.code == "UNKNOWN_PRESET"


def test_bracket_examples(a2, g2, presets):
    assert a2.bracket(E(a2, "x"), E(a2, "y")) == E(a2, "z")
    assert g2.bracket(E(g2, "w"), E(g2, "x")) == E(g2, "-3*z")
    f = E(g2, "u*v/w + a")
    assert g2.bracket(f, f).is_zero()
    assert presets["2A1"].bracket(E(presets["2A1"], "x"), E(presets["2A1"], "y")).is_zero()
    b2 = presets["B2"]
    assert b2.bracket(E(b2, "y"), E(b2, "w")).is_zero()


def test_lambdas_are_central(g2):
    for name in g2.generator_names:
        assert g2.bracket(E(g2, "a"), E(g2, name)).is_zero()


def test_ad_power_examples(b2):
    y = E(b2, "y")
    assert b2.ad_power(0, y, 2) == E(b2, "2*w")
    assert b2.ad_power(0, y, 3).is_zero()
    assert b2.ad_power(0, y, 0) == y


def test_g2_heights(g2):
    heights = [g2.generator(n).height for n in ("u", "v", "w", "x", "y", "z")]
    assert heights == [1, 1, 2, 3, 4, 5]


def test_broken_grading_detected():
    with pytest.raises(StructureError) as e:
        check(make_structure(preset_cartan("A2"), [("x", (1, 0)), ("y", (0, 1)), ("z", (1, 1))],
                             ["x", "y"], {("x", "y"): {"z": 1}, ("x", "z"): {"z": 1}}, ("a", "b")))
    assert {code for code, _ in e.value.issues} & {"GRADING_FAIL", "JACOBI_FAIL"}


def test_jacobi_failure_detected():
    gens = [("u", (1, 0)), ("v", (0, 1)), ("w", (1, 1)), ("x", (2, 1)), ("y", (3, 1)), ("z", (3, 2))]
    br = {("u", "v"): {"w": 1}, ("u", "w"): {"x": 2}, ("u", "x"): {"y": 3}, ("v", "y"): {"z": 1}, ("w", "x"): {"z": 3}}
    ps = make_structure(preset_cartan("G2"), gens, ["u", "v"], br, ("a", "b"))
    assert any(code == "JACOBI_FAIL" for code, _ in validate(ps))


def test_serre_failure_detected():
    # A2 matrix but a height-3 element reachable by ad(x)^2
    gens = [("x", (1, 0)), ("y", (0, 1)), ("z", (1, 1)), ("w", (2, 1))]
    br = {("x", "y"): {"z": 1}, ("x", "z"): {"w": 1}}
    ps = make_structure(preset_cartan("A2"), gens, ["x", "y"], br, ("a", "b"))
    assert ("SERRE_FAIL", "(1,2)") in validate(ps)


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_serre_is_sharp(presets, name):
    ps = presets[name]
    for i in range(2):
        j = 1 - i
        k = -ps.cartan.a(i, j)
        assert ps.ad_power_poly(i, ps.phi_poly(j), k + 1).is_zero()
        assert not ps.ad_power_poly(i, ps.phi_poly(j), k).is_zero()


def test_height2_symbolic_a2():
    ps = preset_height2(preset_cartan("A2"))
    assert ps.generator_names == ("f1", "f2", "z12")
    for g in ps.generator_names:
        assert ps.bracket(E(ps, "z12"), E(ps, g)).is_zero()


def test_height2_2a1_has_no_central_element():
    ps = preset_height2(preset_cartan("2A1"))
    assert ps.generator_names == ("f1", "f2")


def test_height2_affine_rank3():
    ps = preset("A2(1)")
    assert ps.generator_names == ("f1", "f2", "f3", "z12", "z13", "z23")


def test_height2_numeric_constants():
    ps = preset_height2(preset_cartan("B2"), constants={(0, 1): 3})
    assert ps.brackets[("f1", "f2")] == {CONST: 3}
    assert ps.bracket(E(ps, "f1"), E(ps, "f2")) == E(ps, "3")


def test_height2_not_symmetrizable():
    with pytest.raises(Exception) as e:
        preset_height2(validate_gcm([[2, -2, -1], [-1, 2, -1], [-2, -2, 2]]))
    assert getattr(e.value, "code", None) == "NOT_SYMMETRIZABLE"


def test_load_structure_round_trip(a2):
    ps = load_structure(json.dumps(A2_DOC))
    assert ps == a2
    assert load_structure(json.dumps(ps.to_document())) == ps


def test_load_structure_sparse_default():
    doc = json.loads(json.dumps(A2_DOC))
    doc["gcm"] = [[2, 0], [0, 2]]
    doc["generators"] = doc["generators"][:2]
    doc["brackets"] = []
    ps = load_structure(doc)
    assert ps.bracket(E(ps, "x"), E(ps, "y")).is_zero()


def test_load_structure_grading_fail():
    doc = json.loads(json.dumps(A2_DOC))
    doc["generators"][2]["root"] = [2, 1]
    with pytest.raises(StructureError) as e:
        load_structure(doc)
    assert e.value.code == "GRADING_FAIL"


def test_load_structure_parse_error_position():
    with pytest.raises(StructureError) as e:
        load_structure('{"gcm": [[2, -1], [-1, 2]],\n "phi": }')
    code, detail = e.value.issues[0]
    assert code == "PARSE_ERROR" and "line 2" in detail


def test_load_structure_missing_field():
    doc = dict(A2_DOC)
    del doc["phi"]
    with pytest.raises(StructureError) as e:
        load_structure(doc)
    assert e.value.code == "PARSE_ERROR" and "phi" in e.value.issues[0][1]


@given(st.data())
def test_bracket_biderivation_and_jacobi(g2, data):
    t = g2.table
    f, g, h = (data.draw(polynomials(t, max_terms=3, max_exp=1)) for _ in range(3))
    br = g2.bracket_poly
    assert br(f * g, h) == br(f, h) * g + f * br(g, h)
    assert (br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).is_zero()
    assert br(f, g) == -br(g, f)


@given(st.data())
def test_local_nilpotency(g2, data):
    p = data.draw(polynomials(g2.table, max_terms=3, max_exp=1))
    deg = max((sum(m[2:]) for m in p.terms), default=0)
    # each bracket with phi_i raises the height of every factor; heights are at most 5
    for i in range(2):
        assert g2.ad_power_poly(i, p, deg * g2.max_height() + 1).is_zero()
