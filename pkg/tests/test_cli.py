import json
import subprocess
import sys
from pathlib import Path

import pytest

from stratcx.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", DATA / "triangle.json")
    assert code == 0
    assert "valid" in out


def test_validate_violation(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "vertices": [{"id": "D0", "order": 1}, {"id": "D1", "order": 0}],
        "strata": [{"id": "x", "vertices": ["D0", "D1"], "faces": ["D1", "D0"]}],
    }))
    code, out, _ = run(capsys, "validate", bad)
    assert code == 1
    assert "vertices not increasing" in out


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    code, _, err = run(capsys, "validate", broken)
    assert code == 2 and "broken.json:1:2" in err
    assert run(capsys, "verify", "--suite", "bogus")[0] == 2
    assert run(capsys, "subdivide", DATA / "edge.json", "--star", "nope")[0] == 2
    assert run(capsys, "subdivide", DATA / "edge.json", "--star", "D0", "--profile", DATA / "edge-profile.json")[0] == 2
    assert run(capsys, "cech", DATA / "square-cone.json")[0] == 2


def test_volume_output(capsys):
    assert run(capsys, "volume", "catalog:triangle")[1].strip() == "+[a] +[b] +[c] -[ab] -[bc] -[ca]"
    code, out, _ = run(capsys, "volume", DATA / "quartic.json", "--point", "pt")
    assert code == 0 and "+2[Z] -[Q]" in out and "not trivial" in out
    code, out, _ = run(capsys, "volume", DATA / "quartic.json", "--quotient", DATA / "quartic-quotient.json", "--point", "pt")
    assert out.splitlines()[0] == "+[pt]"


def test_homology_output(capsys):
    code, out, _ = run(capsys, "homology", "catalog:tetrahedron-boundary")
    assert code == 0
    assert out.splitlines()[:3] == ["H_0 = Z", "H_1 = 0", "H_2 = Z"]
    code, out, _ = run(capsys, "homology", DATA / "edge.json", "--realization", DATA / "edge-realization.json")
    assert out.splitlines()[0] == "H_0 = Z^2"


def test_build_and_compare(capsys):
    code, out, _ = run(capsys, "cech", DATA / "edge.json", "--extended", "3")
    assert code == 0 and "[2, 3, 4, 5]" in out
    code, out, _ = run(capsys, "sd", DATA / "edge.json", "--json")
    assert json.loads(out)["ranks"] == [3, 2]
    code, out, _ = run(capsys, "compare", DATA / "triangle.json", "--json")
    assert code == 0 and json.loads(out)["ok"] is True


@pytest.mark.parametrize("flag", [["--barycentric"], ["--star", "D0D1"], ["--blowup", "D0D1", "--profile", str(DATA / "edge-profile.json")]])
def test_subdivide_writes_a_loadable_document(capsys, tmp_path, flag):
    out_path = tmp_path / "out.json"
    code, _, _ = run(capsys, "subdivide", DATA / "edge.json", *flag, "-o", out_path)
    assert code == 0
    assert run(capsys, "validate", out_path)[0] == 0


def test_resolve(capsys, tmp_path):
    out_path = tmp_path / "smooth.json"
    code, out, _ = run(capsys, "resolve", DATA / "cone-1-5.json", "-o", out_path)
    assert code == 0 and out.startswith("4 steps") and "smooth" in out
    code, out, _ = run(capsys, "resolve", DATA / "edge.json")
    assert code == 2


def test_verify_random(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "3", "--cases", "3", "--suite", "k0")
    assert code == 0


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "stratcx", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("stratcx ")


def test_verify_full_suite_on_triangle(capsys):
    code, out, _ = run(capsys, "verify", DATA / "triangle.json", "--suite", "full")
    assert code == 0
    for check in ("d^2 = 0", "f d = d f", "d h + h d = f - g"):
        assert check in out
