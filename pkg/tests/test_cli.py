import json

import pytest

from wnlab.cli import main

PARABOLA = ["--source", "ZZ[X,Y]/(Y^2-4*X)", "--target", "ZZ[T]", "--images", "T^2, 2*T"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_member(capsys):
    code, out, _ = run(capsys, "member", "--ring", "ZZ[X,Y]/(Y^2-4*X)", "--ideal", "2, Y", "--elem", "Y^3")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "member", "--ring", "ZZ[X,Y]/(Y^2-4*X)", "--ideal", "2, Y", "--elem", "X", "--expect", "true")
    assert code == 1 and out.strip() == "false"


def test_gb(capsys):
    code, out, _ = run(capsys, "gb", "--ring", "ZZ[x]", "--ideal", "x^3, 2*x, 4, x^2")
    assert code == 0 and out.strip() == "{4, 2*x, x^2}"


def test_satpow(capsys):
    argv = ["satpow", "--ring", "QQ[x,y,z]/(x*y-z^2)", "--prime", "x, z", "--sat", "y", "--elem", "x"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert "member: true" in out and "ordinary power member: false" in out


def test_swan_and_yanagihara(capsys):
    code, out, _ = run(capsys, "swan", "--ring", "ZZ[s,c]/(c^2-s^3)", "--b", "s", "--c", "c")
    assert code == 0 and out.strip() == "SwanViolation"
    argv = ["yanagihara", "--ring", "ZZ[X,Y]/(Y^2-4*X)", "--p", "2", "--b", "X", "--c", "Y", "--d", "2", "--e", "Y"]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == "YanagiharaViolation"


def test_map_verbs(capsys):
    assert run(capsys, "manaresi", *PARABOLA, "--s", "T")[1].strip() == "ManaresiWitness"
    assert run(capsys, "kernel", *PARABOLA)[1].strip() == "(0)"
    code, out, _ = run(capsys, "unramified", *PARABOLA, "--at", "2, Y")
    assert code == 0 and out.strip() == "false"
    code, out, _ = run(capsys, "conductor", *PARABOLA, "--gens", "1, T", "--expect", "(2, Y)")
    assert code == 0


def test_pullback_verbs(capsys):
    base = ["--ring", "ZZ[T]", "--ideal", "2", "--b", "T^2", "--p", "2"]
    assert run(capsys, "gpi", *base)[1].strip() == "true"
    assert run(capsys, "certify", *base)[1].strip() == "YanagiharaViolation"


def test_scan_table(capsys):
    argv = ["scan", "--ring", "ZZ[x]", "--xs", "2, x", "--q", "2", "--wn", "(2, x) sat (x + 1)", "--expect", "3/3 good"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert "good 3/3" in out
    code, out, _ = run(capsys, "scan", "--ring", "ZZ[x]", "--xs", "2, x", "--q", "2", "--bad", "2, x")
    assert code == 0 and "good 0/3  failed 3" in out


def test_run_and_verify(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "run", "pullback_p2.wn", "--json", str(report))
    assert code == 0 and "exit code 0" in out
    data = json.loads(report.read_text())
    assert data["schema"] == 1
    code, out, _ = run(capsys, "verify", str(report))
    assert code == 0 and "all certificates verified" in out
    for e in data["entries"]:
        for c in e.get("certificates", []):
            c["payload"]["c"] = "X"
    report.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(report))
    assert code == 3 and "FAILED" in out


def test_session_filter(capsys):
    code, out, _ = run(capsys, "scan", "--session", "bertini_p2.wn")
    assert code == 0
    assert "good 13/13  failed 0" in out and "good 4/4" in out


def test_parse_error_exits_two(capsys, tmp_path):
    f = tmp_path / "bad.wn"
    f.write_text("ring R = ZZ[x]\ngb R")
    code, _, err = run(capsys, "run", str(f))
    assert code == 2 and "parse error" in err


def test_timing_flag(capsys, tmp_path):
    plain, timed = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "run", "pullback_p2.wn", "--json", str(plain))
    run(capsys, "run", "pullback_p2.wn", "--json", str(timed), "--timing")
    assert "seconds" not in plain.read_text()
    assert "seconds" in timed.read_text()


def test_help_lists_every_verb(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    for verb in ("run", "verify", "gb", "satpow", "scan", "certify", "conductor"):
        assert verb in out
