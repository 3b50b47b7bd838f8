import io
import json

import pytest

from cjf import gf2
from cjf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_zech_query(capsys):
    code, out, _ = run(capsys, "zech", "--poly", "x^31+x^3+1", "--query", "3", "--query", "6")
    assert code == 0 and out.split() == ["31", "62"]


def test_zech_exponent_list_poly(capsys):
    code, out, _ = run(capsys, "zech", "--poly", "31,3,0", "--query", "3")
    assert code == 0 and out.strip() == "31"


def test_zech_underivable(capsys):
    code, out, err = run(capsys, "zech", "--poly", "x^127+x+1", "--query", "3")
    assert code == 3 and out == ""
    assert len(err.strip().splitlines()) == 1 and "Underivable" in err


def test_zech_cache_roundtrip(capsys, tmp_path):
    path = tmp_path / "z4.zech"
    code, _, _ = run(capsys, "zech", "--poly", "x^4+x+1", "--table-out", str(path))
    assert code == 0
    assert len(gf2.load_table(path)) == 14
    code, out, _ = run(capsys, "zech", "--table-in", str(path), "--query", "1", "--format", "json")
    assert code == 0
    assert json.loads(out) == [{"j": "1", "z": "4"}]


def test_zech_bad_cache(capsys, tmp_path):
    path = tmp_path / "bad.zech"
    path.write_bytes(b"NOPE")
    assert run(capsys, "zech", "--table-in", str(path), "--query", "1")[0] == 2


@pytest.mark.parametrize("n, rows", [(4, 7), (5, 35), (6, 155)])
def test_pairs_rows(capsys, n, rows):
    code, out, _ = run(capsys, "pairs", "--poly", str(gf2.registry_poly(n)))
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "i\tj\tzi\tzj" and len(lines) == rows + 1


def test_pairs_json_and_threads(capsys):
    _, one, _ = run(capsys, "pairs", "--poly", "x^8+x^4+x^3+x^2+1", "--format", "json")
    _, many, _ = run(capsys, "pairs", "--poly", "x^8+x^4+x^3+x^2+1", "--format", "json", "--threads", "3")
    assert one == many and len(json.loads(one)) == 127 * 126 // 6


def test_synth_n31(capsys):
    code, out, _ = run(capsys, "synth", "--poly", "x^31+x^3+1", "--pairs", "3,6")
    obj = json.loads(out)
    assert code == 0 and obj["degree"] == 29 and obj["status"] == "unverified"
    assert obj["quadruples"] == [{"i": "3", "j": "6", "zi": "31", "zj": "62"}]


def test_synth_empty_is_linear(capsys):
    code, out, _ = run(capsys, "synth", "--poly", "x^4+x+1")
    obj = json.loads(out)
    assert code == 0 and obj["jump_suffixes"] == [] and obj["degree"] == 1 and obj["status"] == "verified"


def test_synth_family(capsys):
    code, out, _ = run(capsys, "synth", "--poly", "x^127+x+1", "--family", "8,15", "--select", "3")
    assert code == 0 and json.loads(out)["degree"] == 125
    code, _, err = run(capsys, "synth", "--poly", "x^127+x+1", "--family", "8,16")
    assert code == 4 and "member 15" in err


def test_synth_then_verify(capsys, tmp_path, monkeypatch):
    path = tmp_path / "f.json"
    code, _, _ = run(capsys, "synth", "--poly", "x^4+x+1", "--pairs", "1,2", "-o", str(path))
    assert code == 0
    code, out, _ = run(capsys, "verify", "--function", str(path), "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["period"] == "15" and rep["ok"]
    monkeypatch.setattr("sys.stdin", io.StringIO(path.read_text()))
    code, out, _ = run(capsys, "verify", "--function", "-", "--mode", "debruijn", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["kind"] == "modified_debruijn" and rep["extended_kind"] == "debruijn"


def test_verify_zero_seed(capsys, tmp_path):
    path = tmp_path / "lin.json"
    run(capsys, "synth", "--poly", "x^5+x^2+1", "-o", str(path))
    code, out, _ = run(capsys, "verify", "--function", str(path), "--seed", "00000")
    assert code == 0 and "period\t1" in out


def test_verify_failure_exit(capsys, tmp_path):
    path = tmp_path / "lin.json"
    run(capsys, "synth", "--poly", "x^5+x^2+1", "-o", str(path))
    assert run(capsys, "verify", "--function", str(path), "--expect", "7")[0] == 4


def test_fryers(capsys):
    code, out, _ = run(capsys, "fryers", "--n", "6", "--sum")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "k\tN(l;k)" and lines[-1] == "sum\t67108864"
    assert "15\t17678835" in lines
    code, out, _ = run(capsys, "fryers", "--n", "4", "--format", "json")
    assert json.loads(out)["counts"] == {"1": "1", "3": "7", "5": "7", "7": "1"}


def test_enumerate(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "5")
    assert code == 0 and len(out.split()) == 2048 and "2048" in err
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["seq"] for r in recs] == ["00010111", "00011101"]
    code, out, _ = run(capsys, "enumerate", "--n", "4", "--spectrum")
    assert out.strip().splitlines()[-1] == "total\t16"
    assert run(capsys, "enumerate", "--n", "6")[0] == 3


def test_closure(capsys):
    code, out, _ = run(capsys, "closure", "--n", "4")
    lines = out.strip().splitlines()
    assert code == 0 and lines[-1] == "total\t16"
    assert lines[2] == "1\t7\t7\t3:7"


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("CJF_FORMAT", "json")
    monkeypatch.setenv("CJF_LEVELS", "2")
    code, out, _ = run(capsys, "closure", "--n", "5")
    assert code == 0 and json.loads(out)["total"] == 36
    monkeypatch.setenv("CJF_TABLE_CAP", "3")
    assert run(capsys, "pairs", "--poly", "x^4+x+1")[0] == 3
    monkeypatch.setenv("CJF_STEP_BUDGET", "nope")
    assert run(capsys, "fryers", "--n", "4")[0] == 2


def test_bad_input(capsys):
    assert run(capsys, "zech", "--poly", "x^4+x^2+1", "--query", "1")[0] == 2
    assert run(capsys, "synth", "--poly", "x^4+x+1", "--pairs", "1,x")[0] == 2
    assert run(capsys, "fryers")[0] == 2
    assert run(capsys, "verify", "--function", "/nonexistent.json")[0] == 2


def test_deterministic(capsys):
    a = run(capsys, "pairs", "--poly", "x^6+x+1", "--format", "json")
    b = run(capsys, "pairs", "--poly", "x^6+x+1", "--format", "json")
    assert a == b
