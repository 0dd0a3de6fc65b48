import csv
import os
import subprocess
import sys

import pytest

from cavity_duality.cli import main, read_config, ParameterError

QUICK = {
    "swap": ["--photons", "1,3,5", "--points", "101"],
    "chain": ["--N", "3,4", "--points", "101"],
    "kerr-switch": ["--points", "101"],
    "scan-delta": ["--delta-min=-0.5", "--delta-max=-0.3", "--targets", "1,4", "--points", "201"],
    "noon": ["--points", "51"],
    "qubit-transfer": ["--points", "51"],
    "avg-energy": ["--delta=0,-2"],
    "duality-check": [],
    "ss-solve": ["--J", "0.035"],
}


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("command", sorted(QUICK))
def test_every_command_runs(command, tmp_path, capsys):
    out = tmp_path / f"{command}.csv"
    assert main([command, "--out", str(out), *QUICK[command]]) == 0
    rows = read_csv(out)
    assert len(rows) >= 2
    assert rows[0][0] in ("t", "m", "Delta", "N")
    assert out.with_suffix(".cfg").exists()
    assert str(out) in capsys.readouterr().out


def test_csv_headers_use_state_labels(tmp_path):
    out = tmp_path / "k.csv"
    main(["kerr-switch", "--out", str(out), "--points", "11"])
    header = read_csv(out)[0]
    assert header[:7] == ["t", "m5n0", "m4n1", "m3n2", "m2n3", "m1n4", "m0n5"]
    out = tmp_path / "q.csv"
    main(["qubit-transfer", "--out", str(out), "--points", "11"])
    assert read_csv(out)[0] == ["t", "site1", "site2", "site3", "site4"]


def test_twelve_significant_digits(tmp_path):
    out = tmp_path / "s.csv"
    main(["ss-solve", "--out", str(out), "--J", "0.035"])
    value = read_csv(out)[1][3]  # lambda_s
    assert len(value.replace(".", "").replace("-", "").lstrip("0")) <= 12


def test_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["kerr-switch", "--points", "301"]
    main([*args, "--out", str(a)])
    main([*args, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_sidecar_reproduces_run(tmp_path):
    first = tmp_path / "first.csv"
    main(["noon", "--out", str(first), "--points", "41", "--eta", "0.7", "--chi", "0.2"])
    second = tmp_path / "second.csv"
    assert main(["noon", "--config", str(first.with_suffix(".cfg")), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nphotons = 3\nchi = 0.05\ndelta = 0,-1\n")
    out = tmp_path / "e.csv"
    assert main(["avg-energy", "--config", str(cfg), "--photons", "4", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["m", "E_Delta0", "E_Delta-1"]
    assert len(rows) == 6


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("photons=3\nfoo=1\n")
    assert main(["avg-energy", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2
    assert "foo" in capsys.readouterr().err


def test_read_config_rejects_garbage(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just words\n")
    with pytest.raises(ParameterError):
        read_config(str(cfg))


def test_missing_config_is_io_error(tmp_path):
    assert main(["swap", "--config", str(tmp_path / "nope.cfg")]) == 3


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["kerr-switch", "--initial", "5,0", "--target", "5,1"], "photon number"),
        (["kerr-switch", "--initial", "2,3", "--target", "2,3"], "m=2"),
        (["qubit-transfer", "--alpha", "1", "--beta", "1"], "must be 1"),
        (["chain", "--J", "-1"], "J"),
        (["scan-delta", "--chi1", "0.1", "--chi2", "0.2"], "chi1 == chi2"),
    ],
)
def test_invalid_parameters_exit_2(argv, needle, tmp_path, capsys):
    assert main([*argv, "--out", str(tmp_path / "x.csv")]) == 2
    assert needle in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


def test_unwritable_path_exit_3(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["ss-solve", "--out", str(blocker / "sub" / "x.csv")]) == 3


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CAVITY_OUT_DIR", str(tmp_path / "results"))
    assert main(["ss-solve"]) == 0
    assert (tmp_path / "results" / "ss-solve.csv").exists()


def test_svg_written(tmp_path):
    out = tmp_path / "swap.csv"
    main(["swap", "--out", str(out), "--points", "51", "--svg"])
    svg = out.with_suffix(".svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_duality_check_bound(tmp_path):
    out = tmp_path / "d.csv"
    main(["duality-check", "--N", "12", "--out", str(out)])
    for row in read_csv(out)[1:]:
        assert float(row[1]) <= 1e-14 and float(row[2]) <= 1e-14


def test_module_entry_point(tmp_path):
    out = tmp_path / "ss.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "cavity_duality", "ss-solve", "--out", str(out)],
        capture_output=True, text=True, env={**os.environ},
    )
    assert proc.returncode == 0, proc.stderr
    assert "Delta=-0.2" in proc.stdout
