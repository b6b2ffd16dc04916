import json
import subprocess
import sys

import pytest

from fqhyper.cli import EXIT_ARGS, EXIT_CAP, EXIT_FAIL, EXIT_OK, main, parse_config


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sweep_p7(capsys):
    code, out, _ = run(capsys, "sweep", "--p", "7", "--r", "1", "--family", "f21")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "lambda_dlog,lambda_repr,scaled,residual"
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 7
    assert [r[0] for r in rows] == ["-1", "0", "1", "2", "3", "4", "5"]
    assert [int(r[2]) for r in rows] == [0, 1, 4, 0, 0, 0, -4]
    by_lambda = sorted((int(r[1]), int(r[2])) for r in rows)
    assert [v for _, v in by_lambda] == [0, 1, 0, 4, 0, -4, 0]


def test_sweep_extension_field_repr(capsys):
    code, out, _ = run(capsys, "sweep", "--p", "5", "--r", "2", "--family", "f32")
    assert code == EXIT_OK
    assert out.splitlines()[1].startswith("-1,0 0,0,")
    assert len(out.splitlines()) == 26


@pytest.mark.parametrize("argv,code", [
    (["sweep", "--p", "4", "--r", "1"], EXIT_ARGS),
    (["sweep", "--p", "3"], EXIT_ARGS),
    (["sweep", "--p", "7", "--r", "0"], EXIT_ARGS),
    (["sweep", "--p", "7", "--family", "f43"], EXIT_ARGS),
    (["sweep", "--p", "7", "--unknown"], EXIT_ARGS),
    (["sweep", "--p", "5", "--r", "9"], EXIT_CAP),
    (["sweep", "--p", "101", "--field-cap", "100"], EXIT_CAP),
    (["hist", "--p", "7", "--bins", "1"], EXIT_ARGS),
    (["moments", "--p", "7", "--tol", "nonsense=1"], EXIT_ARGS),
    (["moments", "--p", "7", "--tol", "residual=-1"], EXIT_ARGS),
    (["verify", "schoof", "--brute-force-cap", "10"], EXIT_CAP),
    (["verify", "nothing"], EXIT_ARGS),
    ([], EXIT_ARGS),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments", "--p", "7", "--family", "f21", "--m-max", "2")
    assert code == EXIT_OK
    entries = json.loads(out)
    assert [e["m"] for e in entries] == [1, 2]
    assert entries[0]["sum_scaled"] == "1"
    assert entries[1]["sum_scaled"] == "33" and entries[1]["formula_rhs"] == "33/1"
    assert entries[1]["defect"] == "0/1"
    assert all("note" not in e for e in entries)


def test_moments_note_for_q_1_mod_4(capsys):
    _, out, _ = run(capsys, "moments", "--p", "5", "--m-max", "3")
    entries = json.loads(out)
    assert ["note" in e for e in entries] == [True, False, True]


def test_moments_floats_have_17_digits(capsys):
    _, out, _ = run(capsys, "moments", "--p", "7", "--m-max", "2")
    assert '"normalized": 0.67346938775510201' in out


def test_moments_f32(capsys):
    _, out, _ = run(capsys, "moments", "--p", "11", "--family", "f32", "--m-max", "2")
    e = json.loads(out)[1]
    assert e["reference"] == "1/1" and e["formula_rhs"] is None


def test_hist(capsys, tmp_path):
    target = tmp_path / "h.csv"
    code, out, _ = run(capsys, "hist", "--p", "7", "--bins", "4", "--out", str(target))
    assert code == EXIT_OK and out == ""
    data = target.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "bin_left,bin_right,count,density,reference_density"
    assert len(lines) == 6 and lines[-1].startswith("# ks,")
    assert run(capsys, "hist", "--p", "7", "--bins", "4", "--check")[0] == EXIT_FAIL
    assert run(capsys, "hist", "--p", "7", "--bins", "4", "--check", "--tol", "ks_f21=0.5")[0] == EXIT_OK


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "eichler")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "PASS eichler.relation: all odd N <= 2000"
    code, out, _ = run(capsys, "verify", "moments")
    assert code == EXIT_OK
    assert any(ln.startswith("WARN moments.case4") for ln in out.splitlines())
    assert not any(ln.startswith("FAIL") for ln in out.splitlines())


def test_verify_schoof_and_rc(capsys):
    code, out, _ = run(capsys, "verify", "schoof")
    assert code == EXIT_OK and "PASS schoof.two_torsion_counts" in out
    code, out, _ = run(capsys, "verify", "rc")
    assert code == EXIT_OK
    assert "PASS rc.comb_lemma: 1 <= nu <= 6, 0 <= j <= 2nu+1" in out


def test_verify_failure_exit_code(capsys):
    # an absurdly tight class-sum tolerance must fail the suite
    code, out, _ = run(capsys, "verify", "classsums", "--tol", "class_sum_rtol=1e-9")
    assert code == EXIT_FAIL and out.startswith("FAIL classsums.asymptotics")


@pytest.mark.parametrize("argv", [
    ["sweep", "--p", "13", "--r", "2", "--family", "f32"],
    ["moments", "--p", "101", "--m-max", "5"],
    ["verify", "schoof"],
    ["verify", "clausen"],
])
def test_output_independent_of_threads(capsys, argv):
    _, one, _ = run(capsys, *argv, "--threads", "1")
    _, four, _ = run(capsys, *argv, "--threads", "4")
    assert one == four


def test_run_config_defaults():
    cfg = parse_config(["sweep", "--p", "7"])
    assert cfg.brute_force_cap == 2500 and cfg.field_cap == 2**20
    assert cfg.tol("residual") == 1e-4
    assert parse_config(["moments", "--p", "7", "--tol", "residual=1e-6"]).tol("residual") == 1e-6


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "fqhyper", "sweep", "--p", "5"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.splitlines()[1:] == ["-1,0,0,0", "0,1,-1,0", "1,2,2,0", "2,4,2,0", "3,3,-2,0"]
