import copy
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shintani_padic.lattice import (
    CNIdeal,
    LatticeElement,
    LatticeError,
    QuadNumber,
    cn_residue,
    in_box,
    load_config,
    norm_form,
    parallelotope_points,
    parse_config,
    parse_lattice,
    reduce_to_box,
    tau_p_apply,
)

HALF = LatticeElement.of(Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize(
    "text, coords",
    [
        ("1/2+1/2*e", (Fraction(1, 2), Fraction(1, 2))),
        ("1", (1, 0)),
        ("-e", (0, -1)),
        ("1/2e", (0, Fraction(1, 2))),
        ("3-2*e", (3, -2)),
        ("1/6+5/6*e", (Fraction(1, 6), Fraction(5, 6))),
    ],
)
def test_parse_lattice(text, coords):
    assert parse_lattice(text) == LatticeElement.of(*coords)


@pytest.mark.parametrize("text", ["", "1+", "e*e", "x", "1/0"])
def test_parse_lattice_rejects_garbage(text):
    with pytest.raises((LatticeError, ValueError, ZeroDivisionError)):
        parse_lattice(text)


def test_norm_form_matches_field_norm(cone):
    for a in range(-4, 5):
        for b in range(-4, 5):
            z = cone.to_field(LatticeElement.of(a, b))
            assert z.norm() == norm_form(cone, a, b)
    assert norm_form(cone, 1, 1) == 6


def test_class_points(cone):
    assert parallelotope_points(cone, 0) == [LatticeElement.of(1, 0)]
    assert set(parallelotope_points(cone, 1)) == {LatticeElement.of(1, 0), HALF}


def test_lower_closure_moves_the_boundary_point(cone):
    pts = set(parallelotope_points(cone, 1, face_flags=(False, True)))
    assert HALF in pts and LatticeElement.of(0, 1) in pts


def test_cassou_nogues_images(config):
    assert config.ideal(3).phi_images == (1, 2)
    assert config.ideal(11).phi_images == (1, 7)
    assert config.ideal(13).phi_images == (1, 6)


def test_phi_is_a_ring_map(config, cone):
    ideal = config.ideal(11)
    for a in range(-3, 4):
        for b in range(-3, 4):
            for c in range(-3, 4):
                z = QuadNumber(Fraction(a), Fraction(b), 3)
                w = QuadNumber(Fraction(c), Fraction(1), 3)
                assert ideal.phi_field(z * w) == ideal.phi_field(z) * ideal.phi_field(w) % 11


def test_cn_residue_agrees_with_field_residue(config, cone):
    ideal = config.ideal(13)
    for x in [HALF, LatticeElement.of(Fraction(1, 3), 2), LatticeElement.of(5, -7)]:
        assert cn_residue(ideal, x) == ideal.phi_field(cone.to_field(x))


def test_bad_root_and_non_unit_images(cone):
    with pytest.raises(LatticeError):
        CNIdeal.from_root(cone, 11, 4)
    with pytest.raises(LatticeError):
        CNIdeal(9, (3, 1))


@given(st.fractions(), st.fractions())
def test_reduce_to_box_lands_in_the_box(a, b):
    x = LatticeElement.of(a, b)
    y = reduce_to_box(x)
    assert in_box(y)
    assert all((c - d).denominator == 1 for c, d in zip(x.coords, y.coords))


@pytest.mark.parametrize("p", [5, 7, 17, 19])
def test_tau_p_is_a_bijection(cone, p):
    for i in range(len(cone.classes)):
        pts = parallelotope_points(cone, i)
        fwd = tau_p_apply(pts, p)
        back = tau_p_apply(pts, p, "inverse")
        assert set(fwd.values()) == set(pts)
        assert all(back[fwd[x]] == x for x in pts)


def _doc():
    from importlib import resources

    return json.loads(resources.files("shintani_padic").joinpath("data/qsqrt3.json").read_text())


def test_config_round_trip(tmp_path, config):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(_doc()))
    assert load_config(path).cone.key == config.cone.key


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("field"),
        lambda d: d["cone"].__setitem__("norm_form", [1, 3, 1]),
        lambda d: d["classes"][1].__setitem__("points", [["1", "0"]]),
        lambda d: d["ideals"][0].__setitem__("root", 1),
        lambda d: d["cone"].__setitem__("basis", [["1", "0"], ["2", "0"]]),
    ],
)
def test_malformed_configs_are_rejected(mutate):
    doc = copy.deepcopy(_doc())
    mutate(doc)
    with pytest.raises(LatticeError):
        parse_config(doc)


def test_invalid_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with pytest.raises(LatticeError):
        load_config(path)


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_str_round_trips(a, b):
    x = LatticeElement.of(a, b)
    assert parse_lattice(str(x)) == x
