import copy
import json
from importlib import resources
from pathlib import Path

import pytest

from hnchambers.chambers import ChamberId, chamber_id
from hnchambers.errors import (
    InvalidGenus,
    NoDestabilizer,
    NotAmple,
    ParseError,
    UnknownAutomorphism,
    ValidationError,
)
from hnchambers.lattice import DivClass, pair
from hnchambers.stability import wall_class
from hnchambers.zoo import (
    aut_chamber_consistent,
    aut_image,
    builtin,
    check_aut_invariance,
    dumps,
    from_config,
    hirzebruch,
    load_surface,
    product_with_line,
    to_config,
)

from conftest import BUILTINS, ample_point

FIXTURES = Path(__file__).parent / "fixtures"


def shipped(name):
    return resources.files("hnchambers").joinpath("data", name).read_text(encoding="utf-8")


@pytest.mark.parametrize("n", range(0, 11))
def test_hirzebruch_data(n):
    m = hirzebruch(n)
    assert m.lattice.gram == ((-n, 1), (1, 0))
    assert m.tangent_c1 == DivClass.of(2, 2 + n)
    assert m.cone.generators == (DivClass.of(0, 1), DivClass.of(1, n))
    assert m.is_ample((1, n + 1)) and not m.is_ample((1, n)) and not m.is_ample((0, 1))
    assert m.uniruled and m.rc_hint
    assert len(m.candidates) == (2 if n == 0 else 1)


def test_hirzebruch0_walls():
    m = hirzebruch(0)
    T1, T2 = m.candidates
    # -2x + 2y and 2x - 2y
    assert pair(m.lattice, wall_class(T1, m), (5, 7)) == 4
    assert pair(m.lattice, wall_class(T2, m), (5, 7)) == -4


def test_hirzebruch1_wall_ray():
    m = hirzebruch(1)
    assert pair(m.lattice, wall_class(m.candidates[0], m), (2, 3)) == 0
    assert "2y > 3x" in m.candidates[0].note


def test_product_with_line():
    m = product_with_line(2)
    assert m.canonical == DivClass.of(-2, 2)
    assert m.rc_hint is False
    with pytest.raises(InvalidGenus):
        product_with_line(0)


def test_product_genus_one_quotient_slope_zero(rng):
    m = product_with_line(1)
    from hnchambers.stability import hn_filtration

    for _ in range(50):
        hnf = hn_filtration(m, ample_point(rng, m))
        assert hnf.mu2 == 0 and hnf.positive_length == 1


def test_builtin_selector():
    assert builtin("hirzebruch:3") == hirzebruch(3)
    assert builtin("product:2") == product_with_line(2)
    for bad in ["hirzebruch", "hirzebruch:-1", "torus:1", "product:x"]:
        with pytest.raises(ParseError):
            builtin(bad)


@pytest.mark.parametrize("model", BUILTINS, ids=lambda m: m.name)
def test_round_trip(model):
    doc = to_config(model)
    assert from_config(doc) == model
    assert from_config(dumps(doc)) == model
    assert dumps(to_config(from_config(dumps(doc)))) == dumps(doc)


def test_shipped_fixtures():
    assert from_config(shipped("sigma0.json")) == hirzebruch(0)
    assert from_config(shipped("sigma1.json")) == hirzebruch(1)
    assert load_surface(FIXTURES / "product2.json") == product_with_line(2)


def _doc():
    return copy.deepcopy(to_config(hirzebruch(0)))


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.__setitem__("gram", [[0, 1], [2, 0]]), "gram"),
        (lambda d: d["ample_cone"].__setitem__("inequalities", [["1", "0"], ["-1", "0"]]), "ample_cone.inequalities"),
        (lambda d: d["candidates"][0].__setitem__("c1", ["2", "0", "1"]), "candidates[0].c1"),
        (lambda d: d["candidates"][0].__setitem__("rank", 2), "candidates[0].rank"),
        (lambda d: d["candidates"][0].__setitem__("c1", ["4/2", "0"]), "candidates[0].c1"),
        (lambda d: d["candidates"][0].__setitem__("c1", [2, 0]), "candidates[0].c1[0]"),
        (lambda d: d.__setitem__("canonical", ["-2"]), "canonical"),
        (lambda d: d.__setitem__("rank", 3), "basis"),
        (lambda d: d["ample_cone"].pop("generators"), "ample_cone.generators"),
        (lambda d: d["ample_cone"].__setitem__("generators", [[1, 1], [1, 0]]), "ample_cone.generators[0]"),
        (lambda d: d["automorphisms"][1].__setitem__("identity_component", True), "automorphisms[1].identity_component"),
        (lambda d: d["automorphisms"][1].__setitem__("matrix", [[1, 1], [0, 1]]), "automorphisms[1].matrix"),
        (lambda d: d["automorphisms"][1].__setitem__("matrix", [[-1, 0], [0, -1]]), "automorphisms[1].matrix"),
        (lambda d: d.__setitem__("extra", 1), "<root>"),
        (lambda d: d["flags"].pop("uniruled"), "flags"),
    ],
)
def test_from_config_rejects(mutate, path):
    doc = _doc()
    mutate(doc)
    with pytest.raises(ValidationError) as info:
        from_config(doc)
    assert info.value.path == path


def test_from_config_parse_error(tmp_path):
    with pytest.raises(ParseError):
        from_config("{not json")
    with pytest.raises(ParseError):
        load_surface(tmp_path / "missing.json")


def test_from_config_rank3_without_generators():
    doc = {
        "name": "bl2",
        "rank": 3,
        "basis": ["h", "e1", "e2"],
        "gram": [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
        "canonical": ["-3", "1", "1"],
        "ample_cone": {"inequalities": [["1", "-1", "-1"], ["0", "1", "0"], ["0", "0", "1"]]},
        "candidates": [],
        "flags": {"uniruled": True, "rc_hint": True},
    }
    m = from_config(doc)
    assert m.is_ample((3, -1, -1))
    doc["ample_cone"]["inequalities"].append(["-1", "1", "1"])
    with pytest.raises(ValidationError):
        from_config(doc)


def test_check_aut_invariance():
    s0 = hirzebruch(0)
    assert check_aut_invariance(s0, "id", (1, 2))
    assert not check_aut_invariance(s0, "swap", (1, 2))
    assert aut_image(s0, "swap", (2, 0)) == DivClass.of(0, 2)
    assert chamber_id(s0, aut_image(s0, "swap", (1, 2))) == ChamberId.destab("T2_X/P1")
    with pytest.raises(NoDestabilizer):
        check_aut_invariance(s0, "id", (1, 1))
    with pytest.raises(UnknownAutomorphism):
        check_aut_invariance(s0, "rot", (1, 2))
    with pytest.raises(NotAmple):
        check_aut_invariance(s0, "id", (0, 1))


@pytest.mark.parametrize("model", BUILTINS, ids=lambda m: m.name)
def test_identity_component_fixes_destabilizer(model, rng):
    for _ in range(30):
        H = ample_point(rng, model)
        if chamber_id(model, H).kind == "Destab":
            for a in model.automorphisms:
                if a.identity_component:
                    assert check_aut_invariance(model, a.label, H)


@pytest.mark.parametrize("model", BUILTINS, ids=lambda m: m.name)
def test_wall_set_invariance(model, rng):
    for a in model.automorphisms:
        for _ in range(50):
            assert aut_chamber_consistent(model, a.label, ample_point(rng, model))


def test_fixture_file_is_canonical_json():
    text = (FIXTURES / "product2.json").read_text(encoding="utf-8")
    assert text == dumps(json.loads(text))
