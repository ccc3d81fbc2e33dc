import io
import json
import re
import subprocess
import sys

import pytest

from hnchambers.chambers import decompose
from hnchambers.cli import run
from hnchambers.errors import RankUnsupported
from hnchambers.lattice import AmpleCone, DivClass
from hnchambers.model import SurfaceModel
from hnchambers.svg import fmt, render_chambers_svg
from hnchambers.zoo import hirzebruch


def call(*argv):
    out = io.StringIO()
    status = run(list(argv), stdout=out)
    return status, out.getvalue()


def doc(*argv):
    status, text = call(*argv)
    return status, json.loads(text)


def test_hnf_sigma2():
    status, d = doc("hnf", "--builtin", "hirzebruch:2", "--H", "1,3")
    assert status == 0
    hnf = d["result"]["hnf"]
    assert (hnf["type"], hnf["mu1"], hnf["mu2"], hnf["m"]) == ("TwoStep", "4", "2", 2)
    assert d["provenance"]["inputs"]["H"] == ["1", "3"]


def test_slope_not_ample_exit_1():
    status, d = doc("slope", "--builtin", "hirzebruch:2", "--sheaf", "TX", "--H", "1,2")
    assert status == 1
    assert d["error"]["code"] == "NotAmple"
    assert "result" not in d


def test_slope_rational_input():
    status, d = doc("slope", "--builtin", "hirzebruch:0", "--sheaf", "T1_X/P1", "--H", "3/2,2")
    assert status == 0 and d["result"]["slope"] == "4"


def test_chamber_and_segment():
    status, d = doc("chamber", "--builtin", "hirzebruch:0", "--H", "3,3")
    assert d["result"]["chamber"] == {"kind": "Semistable", "labels": []}
    status, d = doc("segment", "--builtin", "hirzebruch:0", "--from", "1,2", "--to", "2,1")
    assert status == 0
    assert d["result"]["crossings"] == ["1/2"]
    assert [iv["id"]["kind"] for iv in d["result"]["intervals"]] == ["Destab", "Semistable", "Destab"]


def test_chambers_with_svg(tmp_path):
    svg = tmp_path / "out.svg"
    status, d = doc("chambers", "--builtin", "hirzebruch:0", "--svg", str(svg))
    assert status == 0
    res = d["result"]
    assert res["count"] == 3
    text = svg.read_text(encoding="utf-8")
    regions = re.findall(r'<g class="chamber (\w+)" data-index="(\d+)" data-id="([^"]*)" data-rays="([^"]*)"', text)
    assert len(regions) == res["count"]
    for (kind, idx, cid, rays), ch in zip(regions, res["chambers"]):
        assert rays == ";".join(",".join(r) for r in ch["boundary"])
        assert cid.startswith(ch["id"]["kind"])
        for label in ch["id"]["labels"]:
            assert label in cid
    assert [r[0] for r in regions] == ["sector", "ray", "sector"]


def test_mrc_commands():
    status, d = doc("mrc", "--builtin", "product:2")
    assert status == 0 and d["result"]["m"] == 1 and d["result"]["foliation"] == "T_X/C"
    status, d = doc("mrc", "--builtin", "hirzebruch:0", "--nef", "1,1", "--aux", "1,2")
    assert d["result"]["epsilon"] == "1/2" and d["result"]["interval"] == ["0", "1"]
    assert d["result"]["polarization"] == ["3/2", "2"]
    status, d = doc("mrc", "--builtin", "hirzebruch:0")
    assert status == 1 and d["error"]["code"] == "MissingInput"
    status, d = doc("mrc", "--builtin", "hirzebruch:1", "--nef", "1,1", "--aux", "1,2", "--eps-cap", "3")
    assert d["result"]["interval"] == ["0", "1"]


def test_builtin_emit_validate(tmp_path):
    path = tmp_path / "s1.json"
    status, d = doc("builtin", "hirzebruch:1", "--emit", str(path))
    assert status == 0 and d["result"]["emitted"] == str(path)
    status, d = doc("validate", "--surface", str(path))
    assert status == 0 and d["result"]["valid"] and d["result"]["name"] == "hirzebruch:1"
    status, d = doc("builtin", "product:3")
    assert d["result"]["canonical"] == ["-2", "4"]


def test_validate_rejects(tmp_path):
    path = tmp_path / "bad.json"
    d = json.loads(call("builtin", "hirzebruch:0")[1])["result"]
    d["gram"] = [[0, 1], [2, 0]]
    path.write_text(json.dumps(d), encoding="utf-8")
    status, out = doc("validate", "--surface", str(path))
    assert status == 1
    assert out["error"]["code"] == "ValidationError" and "gram" in out["error"]["message"]


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["hnf", "--builtin", "hirzebruch:2", "--H", "1,0.5"], "--H"),
        (["hnf", "--builtin", "hirzebruch:2"], "--H"),
        (["hnf", "--builtin", "hirzebruch:2", "--surface", "x.json", "--H", "1,3"], "--surface"),
        (["slope", "--builtin", "hirzebruch:2", "--sheaf", "nope", "--H", "1,3"], "--sheaf"),
        (["hnf", "--builtin", "torus:1", "--H", "1,3"], "--builtin"),
        (["mrc", "--builtin", "hirzebruch:0", "--nef", "1,1"], "--nef"),
        (["mrc", "--builtin", "hirzebruch:0", "--eps-cap", "x"], "--eps-cap"),
    ],
)
def test_usage_errors_exit_2(argv, flag, capsys):
    with pytest.raises(SystemExit) as info:
        status = run(argv, stdout=io.StringIO())
        raise SystemExit(status)
    assert info.value.code == 2
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert flag in err


def test_dimension_mismatch_is_domain_error():
    status, d = doc("hnf", "--builtin", "hirzebruch:2", "--H", "1,3,4")
    assert status == 1 and d["error"]["code"] == "DimensionMismatch"


def test_console_script_determinism(tmp_path):
    outs = []
    for k in range(2):
        svg = tmp_path / f"{k}.svg"
        r = subprocess.run(
            [sys.executable, "-m", "hnchambers.cli", "chambers", "--builtin", "hirzebruch:1", "--svg", str(svg)],
            capture_output=True, check=True,
        )
        outs.append((r.stdout.replace(str(svg).encode(), b"X"), svg.read_bytes()))
    assert outs[0] == outs[1]


def test_fmt_round_half_even():
    from fractions import Fraction

    assert fmt(Fraction(1, 3)) == "0.333333"
    assert fmt(Fraction(5, 10**7)) == "0.000000"
    assert fmt(Fraction(15, 10**7)) == "0.000002"
    assert fmt(Fraction(-3, 2)) == "-1.500000"


def test_svg_single_and_empty():
    s4 = hirzebruch(4)
    text = render_chambers_svg(decompose(s4), s4.cone)
    assert text.count('class="chamber') == 1 and "T_X/P1" in text
    bare = SurfaceModel("bare", s4.lattice, s4.canonical, s4.tangent_c1, s4.cone)
    text = render_chambers_svg(decompose(bare), bare.cone)
    assert text.count('class="chamber') == 1 and "semistable" in text
    with pytest.raises(RankUnsupported):
        render_chambers_svg([], AmpleCone((DivClass.of(1, 0, 0),)))
