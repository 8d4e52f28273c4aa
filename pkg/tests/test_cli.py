import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from cssc import cli
from cssc import complexity as cx


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_static_single_row(capsys):
    code, out, _ = run(capsys, "complexity", "--model", "static", "--theta", "0.1", "--phi", "0.2")
    assert code == 0
    assert out.splitlines()[0] == "t,f1,f2,f3,norm,complexity"
    (r,) = rows(out)
    assert float(r["complexity"]) == pytest.approx(0.4399759548, abs=1e-10)


def test_csv_format(capsys):
    _, out, _ = run(capsys, "complexity", "--model", "oat", "--theta", "0.1", "--phi", "0.2",
                    "--delta", "0.01", "--J", "10", "--t-max", "3", "--steps", "7")
    assert "\r" not in out
    data = rows(out)
    assert len(data) == 7
    # 17 significant digits round-trip exactly
    for r in data:
        for v in r.values():
            assert format(float(v), ".17g") == v


def test_oat_without_twisting_constant(capsys):
    w0 = 1.3
    _, out, _ = run(capsys, "complexity", "--model", "oat", "--theta", "0.1", "--phi", "0.2",
                    "--Omega", str(w0), "--delta", "0", "--t-max", str(2 * math.pi / w0), "--steps", "100")
    col = np.array([float(r["complexity"]) for r in rows(out)])
    assert np.ptp(col) < 1e-12


def test_lmg_frozen_isotropic_matches_spin_magnet(capsys):
    common = ["--theta", "0.1", "--phi", "0.05", "--t-max", "4", "--steps", "50"]
    _, lmg, _ = run(capsys, "complexity", "--model", "lmg-frozen", "--B", "2", "--lambda", "0.5", "--kappa", "1", *common)
    _, iso, _ = run(capsys, "complexity", "--model", "lmg-iso", "--B", "2", "--lambda", "0.5", *common)
    _, mag, _ = run(capsys, "complexity", "--model", "spin-magnet", "--B", "2.5", *common)
    assert lmg == mag == iso


def test_lmg_iso_requires_kappa_one(capsys):
    code, out, err = run(capsys, "complexity", "--model", "lmg-iso", "--kappa", "0.5")
    assert code == 2 and out == ""
    assert len(err.strip().splitlines()) == 1 and "kappa" in err


@pytest.mark.parametrize(
    "argv, field",
    [
        (["complexity", "--model", "nope"], "--model"),
        (["complexity", "--model", "oat", "--steps", "0"], "steps"),
        (["complexity", "--model", "oat", "--Omega", "-1"], "Omega"),
        (["complexity", "--model", "static", "--theta", "nan"], "theta"),
        (["complexity", "--model", "oat", "--J", "abc"], "--J"),
        (["squeeze", "--J", "2.3", "--exact"], "J"),
    ],
)
def test_usage_errors(capsys, argv, field):
    try:
        code = cli.main(argv)
    except SystemExit as exc:  # argparse-level errors
        code = exc.code
    err = capsys.readouterr().err
    assert code == 2
    assert field in err and len(err.strip().splitlines()) == 1


def test_json_output(capsys, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "complexity", "--model", "spin-magnet", "--theta", "0.1", "--phi", "0.1",
                       "--t-max", "1", "--steps", "3", "--format", "json", "--out", str(dest))
    assert code == 0 and out == ""
    data = json.loads(dest.read_text())
    assert [set(r) for r in data] == [set(cli.COMPLEXITY_COLUMNS)] * 3


def test_json_nulls_non_finite():
    text = cli.render([{"t": 0.0, "x": math.nan}], ("t", "x"), "json")
    assert json.loads(text) == [{"t": 0.0, "x": None}]


def test_threads_keep_order(capsys, monkeypatch):
    argv = ["complexity", "--model", "lmg-frozen", "--kappa", "0.3", "--B", "4", "--theta", "0.1",
            "--phi", "0.2", "--t-max", "5", "--steps", "64"]
    _, serial, _ = run(capsys, *argv)
    monkeypatch.setenv("CSSC_THREADS", "4")
    _, threaded, _ = run(capsys, *argv)
    assert serial == threaded


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("CSSC_THREADS", "many")
    code, _, err = run(capsys, "complexity", "--model", "oat", "--steps", "3", "--t-max", "1")
    assert code == 2 and "CSSC_THREADS" in err


def test_squeeze_columns(capsys):
    _, out, _ = run(capsys, "squeeze", "--phi", "0.1", "--delta", "0.01", "--J", "10",
                    "--t-max", "2", "--steps", "5")
    data = rows(out)
    assert tuple(data[0]) == cli.SQUEEZE_COLUMNS
    first = data[0]
    assert float(first["xi2_y"]) == 1 and float(first["xi2_z"]) == 1 and float(first["G_pair"]) == 0
    for r in data:
        assert abs(float(r["complexity_direct"]) - float(r["complexity_squeezing"])) < 1e-12


def test_squeeze_quarter_period(capsys):
    w0 = math.sqrt(1.4)
    _, out, _ = run(capsys, "squeeze", "--phi", "0.1", "--delta", "0.01", "--J", "10",
                    "--t-min", repr(math.pi / (2 * w0)), "--t-max", repr(math.pi / (2 * w0)))
    assert float(rows(out)[0]["xi2_z"]) == pytest.approx(1 / 1.4, abs=1e-12)


def test_squeeze_no_twisting(capsys):
    _, out, _ = run(capsys, "squeeze", "--phi", "0.1", "--delta", "0", "--J", "10", "--t-max", "5", "--steps", "20")
    assert all(float(r["corrYZ"]) == 0 for r in rows(out))


def test_squeeze_exact(capsys):
    _, out, _ = run(capsys, "squeeze", "--phi", "0.1", "--delta", "0.005", "--J", "20",
                    "--t-max", "1", "--steps", "3", "--exact")
    data = rows(out)
    assert tuple(data[0]) == cli.SQUEEZE_COLUMNS + cli.EXACT_COLUMNS
    assert float(data[0]["exact_xi2_z"]) == pytest.approx(1.0, abs=1e-10)


def test_identity_violation_exit(capsys, monkeypatch):
    def broken(*a, **k):
        raise cx.IdentityViolation("forced")

    monkeypatch.setattr(cx, "oat_complexity_via_squeezing", broken)
    code, _, err = run(capsys, "squeeze", "--phi", "0.1", "--delta", "0.01", "--J", "10")
    assert code == 3 and "identity" in err


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "metric")
    assert code == 0
    reports = [json.loads(line) for line in out.splitlines()]
    assert reports and all(r["passed"] for r in reports)
    code, _, err = run(capsys, "verify", "metric", "--tol", "1e-30")
    assert code == 1 and "FAIL" in err


def test_determinism(capsys):
    argv = ["squeeze", "--theta", "0.05", "--phi", "0.1", "--delta", "0.01", "--J", "10", "--t-max", "3", "--steps", "30"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    a = [{k: v for k, v in json.loads(l).items() if k != "wall_time"} for l in run(capsys, "verify", "identities", "--seed", "3")[1].splitlines()]
    b = [{k: v for k, v in json.loads(l).items() if k != "wall_time"} for l in run(capsys, "verify", "identities", "--seed", "3")[1].splitlines()]
    assert a == b


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cssc", "complexity", "--model", "dicke", "--alpha-r", "1", "--alpha-i", "1", "--omega", "2"],
        capture_output=True, text=True, check=True,
    )
    (r,) = rows(proc.stdout)
    assert float(r["complexity"]) == pytest.approx(math.sqrt(5), abs=1e-12)
