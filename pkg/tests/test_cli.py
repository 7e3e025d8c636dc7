import json
import math

import pytest

from lchs import cli


def _run(tmp_path, *args):
    return cli.main(list(args) + ["--out", str(tmp_path)])


def test_verify_small_dims(tmp_path, capsys):
    assert _run(tmp_path, "verify", "--dims", "4", "--format", "json") == 0
    rep = json.loads((tmp_path / "verify.json").read_text())
    assert rep["all_passed"] and rep["config"]["dims"] == 4
    assert "FAIL" not in capsys.readouterr().out


def test_verify_csv_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(a, "verify", "--dims", "3", "--seed", "5") == 0
    assert _run(b, "verify", "--dims", "3", "--seed", "5") == 0
    assert (a / "verify.csv").read_bytes() == (b / "verify.csv").read_bytes()


def test_quad_sweep_points_below_bound(tmp_path, capsys):
    assert _run(tmp_path, "quad-sweep", "--format", "svg") == 0
    out = capsys.readouterr().out
    assert "fitted slope" in out
    assert (tmp_path / "quad_sweep.svg").read_text().startswith("<svg")


def test_quad_sweep_rate_is_twice_pi():
    rows = cli.quad_sweep()
    slope = cli.fit_rate(rows)
    assert slope == pytest.approx(-2 * math.pi, rel=0.01)


def test_polyfit(tmp_path):
    assert _run(tmp_path, "polyfit") == 0
    lines = (tmp_path / "polyfit.csv").read_text().splitlines()
    assert lines[0] == "tau,alpha,n,eps,alpha_plus,alpha_minus,rounds"
    assert len(lines) > 50


def test_tune_single_cell(tmp_path):
    assert _run(tmp_path, "tune", "--eps", "0.1", "--mode", "FIX_21") == 0
    text = (tmp_path / "tune.csv").read_text()
    assert text.splitlines()[1].startswith("0.1,FIX_21,")


def test_config_file_with_cli_override(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"dims": 2, "seed": 3, "format": "json", "eps": 1e-3}))
    args = cli.build_parser().parse_args(["verify", "--config", str(conf), "--seed", "7"])
    cfg = cli.config_from(args)
    assert (cfg.dims, cfg.seed, cfg.format, cfg.eps_list) == (2, 7, "json", [1e-3])


@pytest.mark.parametrize("args", [["verify", "--eps", "5"], ["verify", "--dims", "0"], ["verify", "--eps", "1e-12"]])
def test_invalid_config_exits_2(tmp_path, args):
    assert _run(tmp_path, *args) == 2


def test_missing_config_file_exits_2(tmp_path):
    assert _run(tmp_path, "verify", "--config", str(tmp_path / "nope.json")) == 2


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])


def test_csv_formatting():
    txt = cli.csv_text(["a", "b", "c"], [(0.1, math.inf, True), (1 / 3, math.nan, 2)])
    assert txt == "a,b,c\n0.1,inf,1\n0.3333333333,nan,2\n"


def test_run_config_defaults():
    cfg = cli.RunConfig("cost-curve")
    assert cfg.eps_list == cli.DEFAULT_EPS["cost-curve"]
    with pytest.raises(ValueError):
        cli.RunConfig("verify", format="png")
