import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from perdist.cli import run
from perdist.cones import standard_pair
from perdist.io import read_field, read_generator, write_cone, write_field, write_generator
from perdist.shiftinv import hat


@pytest.fixture
def cones(tmp_path):
    g1, g2 = standard_pair()
    write_cone(g1, tmp_path / "g1.json")
    write_cone(g2, tmp_path / "g2.json")
    write_cone(g1.negated(), tmp_path / "ng1.json")
    return tmp_path


def test_corpus_writes_field(tmp_path):
    assert run(["corpus", "--kind", "square_wave", "--radius", "8", "-o", str(tmp_path / "sq.json")]) == 0
    f = read_field(tmp_path / "sq.json")
    assert f.radius == 8 and f[1] == pytest.approx(1 / (1j * np.pi))
    assert run(["corpus", "--kind", "tensor", "--factors", "square_wave,constant", "--radius", "4",
                "-o", str(tmp_path / "t.json")]) == 0
    assert read_field(tmp_path / "t.json").dim == 2
    assert run(["corpus", "--kind", "harmonic", "--index", "2,-1", "--radius", "3", "-o", str(tmp_path / "h.json")]) == 0
    assert read_field(tmp_path / "h.json")[(2, -1)] == 1


def test_corpus_usage_errors(tmp_path):
    assert run(["corpus", "--kind", "tensor", "--radius", "4", "-o", str(tmp_path / "x.json")]) == 2
    assert run(["corpus", "--kind", "harmonic", "--index", "9", "--radius", "3", "-o", str(tmp_path / "x.json")]) == 2
    assert run(["corpus", "--kind", "nope", "--radius", "3", "-o", str(tmp_path / "x.json")]) == 2


def test_product_methods_agree(tmp_path):
    for kind in ("sawtooth", "square_wave"):
        run(["corpus", "--kind", kind, "--radius", "32", "-o", str(tmp_path / f"{kind}.json")])
    a, b = str(tmp_path / "sawtooth.json"), str(tmp_path / "square_wave.json")
    assert run(["product", a, b, "-o", str(tmp_path / "p1.json")]) == 0
    assert run(["product", a, b, "--method", "direct", "-o", str(tmp_path / "p2.json")]) == 0
    p1, p2 = read_field(tmp_path / "p1.json"), read_field(tmp_path / "p2.json")
    assert p1.radius == 64 and np.max(np.abs(p1.data - p2.data)) <= 1e-12


def test_compat_check_verdicts(cones, capsys):
    d = cones
    for name, cone in (("f1", "g1"), ("f2", "g2"), ("f3", "ng1")):
        run(["corpus", "--kind", "cone_supported", "--dim", "2", "--cone", str(d / f"{cone}.json"),
             "--inside-exp", "0", "--outside-exp", "-10", "--radius", "128", "-o", str(d / f"{name}.json")])
    args = ["compat-check", str(d / "f1.json"), str(d / "f2.json"), "--cones1", str(d / "g1.json"),
            "--cones2", str(d / "g2.json"), "-o", str(d / "ok")]
    assert run(["--strict"] + args) == 0
    rep = json.loads((d / "ok" / "report.json").read_text())
    assert rep["verdict"] is True and rep["tau"] == 13.5
    assert (d / "ok" / "f1_cone0_inside.csv").read_text().startswith("radius,sum,slope\n")
    assert "verdict true, tau 13.5" in capsys.readouterr().out
    bad = ["compat-check", str(d / "f1.json"), str(d / "f3.json"), "--cones1", str(d / "g1.json"),
           "--cones2", str(d / "ng1.json"), "-o", str(d / "bad")]
    assert run(bad) == 0
    assert run(["--strict"] + bad) == 1
    assert json.loads((d / "bad" / "report.json").read_text())["verdict"] is False


def test_cone_count_points_and_fit(cones):
    d = cones
    out = d / "counts.csv"
    assert run(["cone-count", str(d / "g1.json"), str(d / "g2.json"), "--points", "0,0;2,-2;6,2", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n1,n2,norm,count"
    assert [l.split(",")[-1] for l in lines[1:]] == ["0", "0", "17"]
    assert run(["cone-count", str(d / "g1.json"), str(d / "g2.json"), "--radii", "8", "16", "32",
                "--directions", "8", "-o", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 24
    assert run(["--strict", "cone-count", str(d / "g1.json"), str(d / "ng1.json"), "-o", str(out)]) == 1


def test_wavefront_outputs_and_determinism(tmp_path):
    run(["corpus", "--kind", "tensor", "--factors", "square_wave,constant", "--radius", "256",
         "-o", str(tmp_path / "f.json")])
    base = ["wavefront", str(tmp_path / "f.json"), "--x0", "0,0.3", "--s", "1"]
    assert run(base + ["-o", str(tmp_path / "a")]) == 0
    assert run(["--seed", "7"] + base + ["-o", str(tmp_path / "b")]) == 0
    rep = json.loads((tmp_path / "a" / "report.json").read_text())
    assert sorted(round(np.degrees(np.arctan2(u[1], u[0]))) % 360 for u in rep["non_regular"]) == [0, 180]
    csv_a = (tmp_path / "a" / "directions.csv").read_bytes()
    assert csv_a == (tmp_path / "b" / "directions.csv").read_bytes()
    assert csv_a.decode().splitlines()[0] == "direction,angle_deg,verdict,slope,ratio,sum"
    assert len(list((tmp_path / "a").glob("trace_*.csv"))) == 16


def test_wavefront_usage_errors(tmp_path):
    run(["corpus", "--kind", "square_wave", "--radius", "64", "-o", str(tmp_path / "f.json")])
    f = str(tmp_path / "f.json")
    assert run(["wavefront", f, "--x0", "0,0", "--s", "1", "-o", str(tmp_path / "o")]) == 2
    assert run(["wavefront", f, "--x0", "0", "--s", "1", "--radius", "100", "-o", str(tmp_path / "o")]) == 2


def test_si_product(tmp_path):
    write_generator(hat(M=32), tmp_path / "hat.csv")
    c = np.zeros(5)
    c[2:4] = 1.0
    from perdist.distributions import CoefficientField
    write_field(CoefficientField(c), tmp_path / "c1.json")
    write_field(CoefficientField(np.array([0.0, 1.0, 0.0])), tmp_path / "c2.json")
    out = tmp_path / "prod"
    assert run(["si-product", "--gen1", str(tmp_path / "hat.csv"), "--coef1", str(tmp_path / "c1.json"),
                "--s1", "1", "--gen2", str(tmp_path / "hat.csv"), "--coef2", str(tmp_path / "c2.json"),
                "--s2", "0.5", "-o", str(out)]) == 0
    manifest = json.loads((out / "element.json").read_text())
    assert manifest["s"] == 0.5 and len(manifest["generators"]) == 1
    g = read_generator(out / "generator_0.csv")
    assert g.M == 32 and g.values.max() == pytest.approx(2 / 3, abs=1e-3)
    coef = read_field(out / "coeffs_0.json")
    assert coef[0] == 1 and coef[1] == 1


def test_malformed_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 1, "radius": 1, "coeffs": [1, 2]}')
    assert run(["product", str(bad), str(bad), "-o", str(tmp_path / "p.json")]) == 2
    err = capsys.readouterr().err
    assert "bad.json" in err and "offset 24" in err


def test_unknown_subcommand_and_ambiguous_flags():
    assert run(["frobnicate"]) == 2
    assert run([]) == 2


def test_acceptance_subset(capsys):
    assert run(["acceptance", "--only", "5", "6"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] 5." in out and "[PASS] 6." in out and "2/2 criteria passed" in out


@pytest.mark.skipif(shutil.which("perdist") is None, reason="console script not installed")
def test_console_script_help():
    res = subprocess.run(["perdist", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "compat-check" in res.stdout


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "perdist.cli", "corpus", "--kind", "constant"],
                         capture_output=True, text=True)
    assert res.returncode == 2
