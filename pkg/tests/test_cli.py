import json
from pathlib import Path

import pytest

from principal_config.cli import UsageError, main, parse_surface
from principal_config.errors import NoContent
from principal_config.render import render_report
from principal_config.report import loads, strip_timestamp
from principal_config.surface import ImplicitQuadric, MongePatch, ParametricPatch

GOLDEN = Path(__file__).parent / "golden"

FIGURES = {
    "ellipsoid_321_y": (["--surface", "ellipsoid:3,2,1", "--leaves", "2", "--view", "y"]),
    "lemon_local": (["--surface", "monge:k=1,a=3,b=1,c=0", "--local"]),
    "monstar_local": (["--surface", "monge:k=1,a=1.5,b=1,c=0", "--local"]),
    "star_local": (["--surface", "monge:k=1,a=-1,b=1,c=1", "--local"]),
}


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("spec,kind", [
    ("ellipsoid:3,2,1", ImplicitQuadric), ("sphere:2", ImplicitQuadric),
    ("quadric:1,1,1,0,0,0,0,0,0,-1", ImplicitQuadric), ("monge:k=1,a=3,b=1,c=0", MongePatch),
    ("torus:2,1", ParametricPatch), ("torus:2,1,0.1", ParametricPatch),
    ("cylinder:1.5", ParametricPatch), ("plane", MongePatch)])
def test_surface_grammar(spec, kind):
    assert isinstance(parse_surface(spec), kind)


@pytest.mark.parametrize("spec", ["ellipsoid:3,2", "sphere:-1", "blob:1", "monge:k=1,a=2",
                                  "quadric:1,2,3", "ellipsoid:a,b,c", "torus:1,2"])
def test_bad_surface_specs(spec):
    with pytest.raises(UsageError):
        parse_surface(spec)


def test_exit_codes(capsys):
    assert _run(["umbilics", "--surface", "ellipsoid:3,2,1"], capsys)[0] == 0
    assert _run(["umbilics", "--surface", "sphere:1"], capsys)[0] == 2
    assert _run(["umbilics", "--surface", "blob:1"], capsys)[0] == 64
    assert _run(["umbilics", "--surface", "ellipsoid:3,2,1", "--tol-ode", "-1"], capsys)[0] == 64
    assert _run(["probe-stability", "--surface", "torus:2,1", "--trials", "1"], capsys)[0] == 64
    with pytest.raises(SystemExit) as exc:
        main(["umbilics"])
    assert exc.value.code == 64
    capsys.readouterr()


def test_umbilics_report(capsys):
    code, out, _ = _run(["umbilics", "--surface", "ellipsoid:3,2,1", "--no-timestamp"], capsys)
    rep = loads(out)
    assert code == 0 and "generated" not in rep
    items = rep["umbilics"]["items"]
    assert len(items) == 4 and {it["verdict"] for it in items} == {"D1"}
    assert rep["tolerances"]["tol_class"] > 0


def test_sphere_analyze_reports_degenerate(capsys):
    code, out, _ = _run(["analyze", "--surface", "sphere:1"], capsys)
    rep = loads(out)
    assert code == 2 and rep["degenerate"]
    assert rep["sigma"]["a"]["reason"] == "EverywhereUmbilic"


def test_analyze_is_deterministic(tmp_path, capsys):
    argv = ["analyze", "--surface", "ellipsoid:3,2,1", "--leaves", "2", "--seed", "3"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    ra = json.loads(a.read_text())
    assert "generated" in ra
    assert strip_timestamp(a.read_text()) == strip_timestamp(b.read_text())
    assert len(ra["connections"]["items"]) == 4
    assert ra["sigma"]["d"]["status"] == "fails"


def test_render_roundtrip(tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(["analyze", "--surface", "monge:k=1,a=3,b=1,c=0", "--local", "--out", str(rep)]) == 0
    assert main(["render", str(rep)]) == 0
    svg = rep.with_suffix(".svg").read_text()
    assert svg.startswith("<?xml") and "<svg" in svg


def test_render_of_empty_report_fails(tmp_path, capsys):
    rep = {"schema": "principal-config/1", "surface": {}, "umbilics": {"items": []},
           "separatrices": {"items": []}, "leaves": {"items": []}, "cycles": {"items": []}}
    with pytest.raises(NoContent):
        render_report(rep, tmp_path / "x.svg")
    p = tmp_path / "empty.json"
    p.write_text(json.dumps(rep))
    assert main(["render", str(p)]) == 1
    assert main(["render", str(tmp_path / "missing.json")]) == 1
    capsys.readouterr()


def test_figure_needs_out(capsys):
    assert _run(["analyze", "--surface", "plane", "--format", "figure"], capsys)[0] == 64


@pytest.mark.parametrize("name", sorted(FIGURES))
def test_golden_figures(name, tmp_path, regen_golden):
    out = tmp_path / f"{name}.svg"
    argv = ["analyze", "--format", "figure", "--out", str(out)] + FIGURES[name]
    assert main(argv) == 0
    ref = GOLDEN / f"{name}.svg"
    if regen_golden or not ref.exists():
        GOLDEN.mkdir(exist_ok=True)
        ref.write_bytes(out.read_bytes())
        pytest.skip("golden figure written")
    assert out.read_bytes() == ref.read_bytes()
