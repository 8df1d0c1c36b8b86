import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest

from pressurelab import GeometricSeries, LocallyConstant, SftSystem
from pressurelab.cli import main
from pressurelab.errors import ConfigError
from pressurelab.io import (format_potential, format_system, load_potential, load_system,
                            parse_config, parse_potential, parse_system)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_system_round_trip(tmp_path):
    sys_ = SftSystem([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 0.25)
    back = parse_system(format_system(sys_))
    assert back.theta == 0.25 and (back.transitions == sys_.transitions).all()
    p = tmp_path / "s.txt"
    p.write_text("# golden\nA=2\ntheta=0.5\n1 1\n1 0\n")
    assert (load_system(p).transitions == SftSystem.golden_mean().transitions).all()
    assert load_system("builtin:full:3:0.25").alphabet_size == 3
    for bad in ("A=2\ntheta=0.5\n1 1\n", "A=2\ntheta=x\n1 1\n1 0\n", "A=2\ntheta=0.5\n1 2\n1 0\n"):
        with pytest.raises(ConfigError):
            parse_system(bad)
    with pytest.raises(ConfigError):
        load_system("builtin:torus")
    with pytest.raises(ConfigError):
        load_system(tmp_path / "missing.txt")


def test_potential_round_trip():
    phi = LocallyConstant(2, 2, [0.1, -0.2, 1 / 3, 2.0])
    back = parse_potential(format_potential(phi), 2)
    assert np.array_equal(back.table, phi.table)
    geo = GeometricSeries(0.5, [0.0, 1.0])
    back = parse_potential(format_potential(geo), 2)
    assert back.rho == 0.5 and list(back.symbol_values) == [0.0, 1.0]
    assert np.array_equal(load_potential("first:1", 2).table, [0.0, 1.0])
    with pytest.raises(ConfigError):
        parse_potential("kind=geometric\nrho=0.5\n1.0\n", 2)
    with pytest.raises(ConfigError):
        parse_potential("kind=spline\nw=1\n0\n0\n", 2)


def test_config_parsing():
    cfg = parse_config("# c\nsystem = builtin:golden\nspan-x=3  # trailing\n\n")
    assert cfg == {"system": "builtin:golden", "span_x": "3"}
    with pytest.raises(ConfigError):
        parse_config("oops\n")


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("system=builtin:golden\ndeltas=2\nNs=10\n")
    code, out, _ = run(["pressure", "--config", str(cfg)], capsys)
    assert code == 0 and float(rows(out)[0]["critical_s"]) != pytest.approx(math.log(2), abs=0.05)
    code, out, _ = run(["pressure", "--config", str(cfg), "--system", "builtin:full:2"], capsys)
    assert float(rows(out)[0]["critical_s"]) == pytest.approx(math.log(2), abs=1e-9)


def test_pressure_defaults(capsys):
    code, out, _ = run(["pressure"], capsys)
    got = rows(out)
    assert code == 0 and len(got) == 4
    assert all(abs(float(r["critical_s"]) - math.log(2)) <= 1e-9 for r in got)


def test_compare_exit_codes(capsys):
    code, out, err = run(["compare"], capsys)
    assert code == 0 and "ok" in err and len(rows(out)) == 4
    code, out, err = run(["compare", "--g", "zero", "--tol", "1e-9"], capsys)
    assert code == 0
    for r in rows(out):
        assert float(r["bowen-mistake"]) <= 1e-9 and float(r["cover-cover_mistake"]) <= 1e-9
    code, _, err = run(["compare", "--system", "builtin:golden", "--deltas", "1,2", "--Ns", "6,8",
                        "--strategy", "greedy", "--span", "1", "--tol", "1e-9"], capsys)
    assert code == 3 and "FAIL |" in err


def test_config_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("A=2\ntheta=0.5\n1 1\n")
    assert run(["pressure", "--system", str(bad)], capsys)[0] == 2
    assert run(["pressure", "--strategy", "bogus"], capsys)[0] == 2
    assert run(["stirling", "--m", "3", "--budget", "5", "--coversize", "2"], capsys)[0] == 2
    assert run(["oracle", "--system", "builtin:full:2", "--potential", "first:1", "--Z",
                "cylinders:0"], capsys)[0] == 2


def test_guard_exit(capsys):
    code, _, err = run(["oracle", "--which", "wordcount", "--N", "40"], capsys)
    assert code == 4 and "too large" in err
    code, _, _ = run(["pressure", "--kind", "bowen", "--strategy", "exhaustive",
                      "--deltas", "6", "--Ns", "16"], capsys)
    assert code == 4


def test_stirling_and_oracle(capsys):
    code, out, _ = run(["stirling", "--m", "100", "--budget", "1", "--coversize", "2"], capsys)
    r = rows(out)[0]
    assert code == 0 and int(r["count"]) == 101 and int(r["bound"]) == 201
    assert float(r["gamma"]) == pytest.approx(math.log(201) / 100, abs=1e-15)
    code, out, _ = run(["oracle", "--potential", "first:1"], capsys)
    assert float(rows(out)[0]["pressure"]) == pytest.approx(math.log(1 + math.e), abs=1e-10)
    code, out, _ = run(["oracle", "--which", "naive-m", "--N", "3", "--s", repr(math.log(2)),
                        "--deltas", "0", "--span", "0"], capsys)
    assert code == 0 and float(rows(out)[0]["m"]) == pytest.approx(1.0)


def test_lemma_check_cli(capsys):
    code, out, err = run(["lemma-check", "--samples", "2000"], capsys)
    assert code == 0 and "violations=0" in err


def test_sweep_empty_and_deterministic(tmp_path, capsys, monkeypatch):
    code, out, _ = run(["sweep", "--deltas", "", "--Ns", ""], capsys)
    assert code == 0 and out.strip().count("\n") == 0 and out.startswith("L,delta,N")
    outs = []
    for threads in ("1", "4", "4"):
        monkeypatch.setenv("PRESSURELAB_THREADS", threads)
        path = tmp_path / f"sweep{len(outs)}.csv"
        assert main(["sweep", "--system", "builtin:golden", "--deltas", "1,2", "--Ns", "6,8",
                     "--g", "const", "--gparams", "0,1", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert len(outs[0].splitlines()) == 1 + 2 * 2 * 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pressurelab", "stirling", "--m", "10",
                          "--budget", "1", "--coversize", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "21" in res.stdout
