import json
import subprocess
import sys

import pytest

from strata_chow.cli import main
from strata_chow.ordered import StrataCombinationOrdered
from strata_chow.rings import OrderedClass, ProjClass


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_relation_holds(capsys):
    code, out, _ = run(capsys, "check-relation", "--n", "6", "1*[4,1,1]+3*[2,2,2]-1*[3,2,1]")
    assert code == 0
    assert out.startswith("HOLDS")
    assert "certificate replay: True" in out


def test_check_relation_json(capsys):
    code, out, _ = run(capsys, "check-relation", "--json", "1*[4,1,1]+3*[2,2,2]-1*[3,2,1] @ n=6")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "strata-chow/1" and data["holds"]
    assert data["certificate"]


def test_check_relation_negative(capsys):
    code, out, _ = run(capsys, "check-relation", "--n", "4", "4*[3,1]-6*[2,2]")
    assert code == 0 and out.startswith("DOES NOT HOLD")
    assert "zero after u=v=0: True" in out


def test_ranks_table(capsys):
    code, out, _ = run(capsys, "ranks", "--n", "4", "--matrix")
    assert code == 0
    row = [line.split() for line in out.splitlines() if line.startswith("2 ")][0]
    assert row == ["2", "7", "7", "7", "7"]
    code, out, _ = run(capsys, "ranks", "--n", "12")
    assert code == 0 and "skipped" in out


def test_delta_round_trip(capsys):
    code, out, _ = run(capsys, "delta", "--n", "4", "--partition", "1,2|3,4")
    assert code == 0 and out.startswith("Delta[1,2|3,4] = H1*H3")
    code, out, _ = run(capsys, "delta", "--json", "--n", "4", "--partition", "1,2|3,4")
    data = json.loads(out)
    cls = OrderedClass.from_json(data["class"])
    assert cls == OrderedClass.from_json(json.loads(json.dumps(cls.to_json())))
    assert data["class"]["schema"] == "strata-chow/1"


def test_decompose_expression(capsys):
    expr = ("H1*H2+H1*H3+H1*H4+H1*H5+H2*H3+H2*H4+H2*H5+H3*H4+H3*H5+H4*H5"
            " + 2*(u+v)*(H1+H2+H3+H4+H5) + 3*u^2+4*u*v+3*v^2")
    code, out, _ = run(capsys, "decompose", "--json", "--n", "5", expr)
    assert code == 0
    combo = StrataCombinationOrdered.from_json(json.loads(out)["decomposition"])
    assert str(combo) == "D[1|2|3,4,5] + D[1,2|3|4,5] + D[1,2,3|4|5]"


def test_decompose_input_file(capsys, tmp_path):
    from strata_chow.ordered import delta_ij
    path = tmp_path / "a.json"
    path.write_text(json.dumps(delta_ij(1, 2, 3).to_json()))
    code, out, _ = run(capsys, "decompose", "--input", str(path))
    assert code == 0 and out.strip().endswith("= D[1,2|3]")
    # H1 + H2 alone is not an integer combination of strata classes
    path.write_text(json.dumps((OrderedClass.H(1, 3) + OrderedClass.H(2, 3)).to_json()))
    code, _, err = run(capsys, "decompose", "--input", str(path))
    assert code == 2 and json.loads(err.splitlines()[0])["error"]["kind"] == "verification"
    path.write_text("{not json")
    assert run(capsys, "decompose", "--input", str(path))[0] == 1


def test_not_in_span_exit_code(capsys):
    code, _, err = run(capsys, "decompose", "--n", "3", "H1")
    assert code == 2
    assert json.loads(err.splitlines()[0])["error"]["exit_code"] == 2


@pytest.mark.parametrize("argv", [
    ["bogus"], ["delta", "--n", "4"], ["delta", "--partition", "1,1|2"],
    ["check-relation", "1*[4,1]+x"], ["unordered", "--lambda", "3+a"],
    ["decompose", "--n", "3", "H7"], ["mod2", "--lambda", "2+1"]])
def test_parse_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert json.loads(err.splitlines()[0])["error"]["kind"] == "parse"


def test_cap(capsys, monkeypatch):
    code, _, err = run(capsys, "ranks", "--n", "13")
    assert code == 1 and "cap" in err
    assert run(capsys, "unordered", "--lambda", "[13]", "--cap", "13")[0] == 0
    monkeypatch.setenv("STRATA_CHOW_CAP", "3")
    assert run(capsys, "ranks", "--n", "4")[0] == 1


def test_unordered_and_affine(capsys):
    code, out, _ = run(capsys, "unordered", "--json", "--lambda", "3+2+1")
    data = json.loads(out)
    assert code == 0 and ProjClass.from_json(data["class"]).n == 6
    code, out, _ = run(capsys, "affine", "--lambda", "2^1 1^1")
    assert code == 0 and out.strip() == "Z[2,1] at H=0: 6*u + 6*v"


def test_mod2(capsys):
    code, out, _ = run(capsys, "mod2", "--lambda", "3+3")
    assert code == 0
    assert "H^4 + c2*H^2 + c3*H" in out and "c3-part = c3*H" in out


def test_goodify(capsys):
    code, out, _ = run(capsys, "goodify", "--json", "--partition", "1,4|2,5|3")
    data = json.loads(out)
    assert code == 0 and data["certificate"]


def test_ideal_dims(capsys):
    code, out, _ = run(capsys, "ideal-dims", "--lambda", "2+1+1", "--max-degree", "4", "--affine")
    assert code == 0 and "False" not in out
    code, out, _ = run(capsys, "ideal-dims", "--lambda", "2+1+1", "--generators", "[2,1,1]")
    assert code == 0 and "False" in out


def test_appendix_and_verify(capsys):
    code, out, _ = run(capsys, "appendix-check", "--n", "7")
    assert code == 0 and "identities hold for n <= 7" in out
    code, out, _ = run(capsys, "verify-paper", "--only", "1,4")
    assert code == 0 and out.count("[PASS]") == 2
    assert run(capsys, "verify-paper", "--only", "99")[0] == 1


def test_deterministic_output(capsys):
    outs = {run(capsys, "goodify", "--partition", "1,5|2|3,6|4")[1] for _ in range(3)}
    assert len(outs) == 1


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "strata_chow.cli", "ranks", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("k  rank")
