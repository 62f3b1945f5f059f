import csv
import io
import subprocess
import sys

import pytest

from hvdw import cli
from hvdw.config import ConfigError, RunConfig, parse_config_text, parse_pair


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(line for line in io.StringIO(text) if not line.startswith("#")))


def test_coeff_d6(capsys):
    code, out, _ = run(["coeff", "--pair", "12D:1S", "--kind", "d6"], capsys)
    assert code == 0
    values = {r[0]: r[1] for r in rows(out)[1:]}
    assert float(values["d6_total"]) == pytest.approx(227756.061, rel=1e-6)
    assert "# config_fingerprint = " in out
    assert len(values["d6_total"].split("e")[0].replace(".", "").lstrip("-")) == 17


def test_coeff_dbar6_and_m6_note(capsys):
    code, out, _ = run(["coeff", "--pair", "8D:1S", "--kind", "dbar6"], capsys)
    assert code == 0 and float(dict(r[:2] for r in rows(out)[1:])["dbar6"]) == pytest.approx(36936, rel=1e-9)
    code, out, _ = run(["coeff", "--pair", "3P:1S", "--kind", "m6"], capsys)
    assert code == 0 and "no mixing term" in out
    assert float(dict(r[:2] for r in rows(out)[1:])["m6"]) == 0.0


def test_coeff_tails_and_si(capsys):
    code, out, _ = run(["coeff", "--pair", "12D:1S", "--kind", "tails"], capsys)
    assert code == 0 and "pole_0" in out
    au = float(dict(r[:2] for r in rows(out)[1:])["cp_amplitude_dir"])
    code, out, _ = run(["coeff", "--pair", "12D:1S", "--kind", "tails", "--si"], capsys)
    si = float(dict(r[:2] for r in rows(out)[1:])["cp_amplitude_dir"])
    cfg = RunConfig()
    assert si == pytest.approx(au * cfg.si_energy * cfg.si_length**7, rel=1e-14)


@pytest.mark.parametrize(
    "argv",
    [
        ["coeff", "--pair", "12X:1S"],
        ["coeff", "--pair", "12D"],
        ["coeff", "--pair", "12D:2S"],
        ["coeff", "--pair", "12D:1S:m=5"],
        ["coeff", "--pair", "12D:1S", "--kind", "dbar6", "--basis-size", "2"],
        ["coeff", "--pair", "3P:1S", "--kind", "dbar6"],
        ["curve", "--pair", "1S:1S", "--rmin", "10", "--rmax", "1"],
        ["curve", "--pair", "1S:1S", "--rmin", "1", "--rmax", "10", "--points", "1"],
        ["crossover", "--pair", "12D:1S", "--bracket", "10", "1"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and "error" in err


def test_argparse_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["coeff"])
    assert exc.value.code == 2


def test_curve_ground_pair_and_determinism(tmp_path, capsys):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["curve", "--pair", "1S:1S", "--rmin", "1", "--rmax", "1e5", "--points", "12"]
    assert cli.main(args + ["-o", str(out1)]) == 0
    assert cli.main(args + ["-o", str(out2), "--workers", "1"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    table = rows(out1.read_text())
    assert table[0] == list(cli.InteractionBreakdown.FIELDS)
    assert all(float(r[3]) == 0.0 and float(r[4]) == 0.0 for r in table[1:])


def test_curve_12d_wick_dominates(capsys):
    code, out, _ = run(["curve", "--pair", "12D:1S", "--rmin", "137", "--rmax", "1370", "--points", "8", "--spacing", "linear"], capsys)
    assert code == 0
    for r in rows(out)[1:]:
        R, wd, wm, pd, pm = map(float, r[:5])
        assert abs(wd + wm) > abs(pd + pm)


def test_table1_default_and_tolerance(capsys):
    code, out, _ = run(["table1"], capsys)
    assert code == 0 and len(rows(out)) == 4
    code, _, err = run(["table1", "--basis-size", "10"], capsys)
    assert code == 4 and "tolerance breach" in err and "convergence warning" in err
    code, _, _ = run(["table1", "--basis-size", "10", "--tolerance", "1"], capsys)
    assert code == 0


def test_crossover_statuses(capsys):
    code, out, _ = run(["crossover", "--pair", "12D:1S", "--points", "30"], capsys)
    assert code == 0 and rows(out)[1][0] == "found"
    code, out, _ = run(["crossover", "--pair", "1S:1S"], capsys)
    assert code == 0 and rows(out)[1][0] == "none"
    code, out, _ = run(["crossover", "--pair", "12D:1S", "--bracket", "10", "1000", "--points", "10"], capsys)
    assert code == 3 and rows(out)[1][0] == "not-found"


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test\nbasis_size = 10\ntolerance = 1\nbasis_size_l3 = 12\nsymmetry = -\n")
    code, out, _ = run(["table1", "--config", str(cfg)], capsys)
    assert code == 0 and "# basis_size = 10" in out and "l3:12" in out
    code, _, _ = run(["table1", "--config", str(cfg), "--tolerance", "1e-6"], capsys)
    assert code == 4
    cfg.write_text("bogus = 1\n")
    code, _, err = run(["table1", "--config", str(cfg)], capsys)
    assert code == 2 and "unknown key" in err


def test_fingerprint_tracks_numerics_only():
    a = RunConfig()
    assert a.fingerprint() == RunConfig(output="x.csv", workers=1).fingerprint()
    assert a.fingerprint() != RunConfig(basis_size=60).fingerprint()


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(lamb_shift_ghz=0)
    with pytest.raises(ConfigError):
        RunConfig(tolerance=-1)
    with pytest.raises(ConfigError):
        parse_config_text("basis_size = many")
    with pytest.raises(ConfigError):
        parse_config_text("no equals sign")


def test_pair_syntax():
    p = parse_pair("12D:1S:m=1:sym=-")
    assert (p.state_a.n, p.state_a.l, p.m, p.symmetry, p.averaging.value) == (12, 2, 1, -1, "single-projection")
    assert parse_pair("8d:1s").averaging.value == "projection-average"
    with pytest.raises(ConfigError):
        parse_pair("12D:1S:q=1")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hvdw", "coeff", "--pair", "8D:1S", "--kind", "dbar6"], capture_output=True, text=True)
    assert res.returncode == 0 and "dbar6" in res.stdout
