import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner
from hypothesis import given, strategies as st

from szego_lab.cli import (
    ConfigError,
    ExperimentConfig,
    ExprSyntaxError,
    format_symbol_expr,
    parse_config_text,
    parse_symbol_expr,
    run_szego_experiment,
    run_verify_suite,
)
from szego_lab.cli.experiment import VERIFY_KINDS, materialize_symbols, walk_law_grid
from szego_lab.cli.main import cli
from szego_lab.cli.report import CSV_COLUMNS, report_csv, report_json, residual_svg
from szego_lab.fourier import TrigPoly

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SMALL = (16, 24, 32, 48, 64)


# ---------------------------------------------------------------- expression parser


def test_parse_examples():
    assert parse_symbol_expr("0.2*cos(x)").to_dict() == {1: 0.1, -1: 0.1}
    assert parse_symbol_expr("0.1*sin(2*x)").to_dict() == {2: -0.05j, -2: 0.05j}
    assert parse_symbol_expr("0").to_dict() == {}
    p = parse_symbol_expr("1.5 - cos(3*x) + sin(x)*2 + 0.25")
    assert p.coeff(0) == 1.75 and p.coeff(3) == -0.5 and p.coeff(-3) == -0.5
    assert p.coeff(1) == -1j and p.coeff(-1) == 1j


@pytest.mark.parametrize(
    "text, where",
    [("exp(x)", 0), ("0.2*cos(y)", 8), ("cos(0*x)", 4), ("cos(1.5*x)", 4), ("0.2 +", 5), ("2 $ 3", 2)],
)
def test_parse_errors_carry_position(text, where):
    with pytest.raises(ExprSyntaxError) as info:
        parse_symbol_expr(text)
    assert info.value.pos == where
    assert isinstance(info.value, ValueError)


def test_unsupported_function_named():
    with pytest.raises(ExprSyntaxError, match="exp"):
        parse_symbol_expr("0.3*exp(x)")


real_coeff = st.floats(-10, 10, allow_nan=False, allow_subnormal=False).filter(lambda c: c != 0)


@given(st.dictionaries(st.integers(0, 6), real_coeff, max_size=5), st.dictionaries(st.integers(1, 6), real_coeff, max_size=5))
def test_round_trip(cos_part, sin_part):
    terms = []
    for k, c in cos_part.items():
        terms.append(f"{c!r}" if k == 0 else f"{c!r}*cos({k}*x)")
    for k, c in sin_part.items():
        terms.append(f"{c!r}*sin({k}*x)")
    text = " + ".join(terms).replace("+ -", "- ") if terms else "0"
    p = parse_symbol_expr(text)
    q = parse_symbol_expr(format_symbol_expr(p))
    assert q.to_dict() == p.to_dict()


def test_format_rejects_nonreal():
    with pytest.raises(ValueError):
        format_symbol_expr(TrigPoly.from_dict({1: 1.0}))


# ---------------------------------------------------------------- configuration


def test_config_defaults_and_sections():
    cfg = parse_config_text(
        '[symbol]\nlog_b0 = "0.2*cos(x)"\nbsub = "0.1"\nbsub_form = ratio\n'
        "[grid]\nn = 8, 16, 32\nbuffer = auto\n[flags]\ndrift_check = no\n"
        "[walk]\nsupport = -1 0 1\nprobs = 1/4, 1/4, 1/2\n"
    )
    assert cfg.log_b0 == "0.2*cos(x)" and cfg.bsub_form == "ratio"
    assert cfg.n_grid == (8, 16, 32) and cfg.buffer is None and cfg.drift_check is False
    assert cfg.probe.n_grid == (8, 16, 32)
    assert cfg.walk.distribution().support[0] == -1
    assert cfg.series_tol == 1e-14 and cfg.residue_L == 5


@pytest.mark.parametrize(
    "text, match",
    [
        ("[grid]\nn = 32, 16\n", "grid.n"),
        ("[grid]\nn = 0, 16\n", "grid.n"),
        ("[tolerances]\nseries = -1\n", "positive"),
        ("[symbol]\nlog_b0 = \"exp(x)\"\n", "exp"),
        ("[nope]\nx = 1\n", "unknown section"),
        ("[grid]\nsize = 4\n", "unknown key"),
        ("[flags]\nphi_reading = u4\n", "phi_reading"),
        ("[walk]\nprobs = 1/2, 1/3\n", "walk"),
        ("[grid]\nbuffer = lots\n", "grid.buffer"),
        ("not a section", "section"),
    ],
)
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config_text(text)


def test_shipped_configs_parse():
    for path in CONFIGS.glob("*.ini"):
        parse_config_text(path.read_text())


def test_ratio_form_materializes_product():
    cfg = ExperimentConfig(log_b0="0.2*cos(x)", bsub="0.1", bsub_form="ratio")
    _, b0, bsub = materialize_symbols(cfg)
    assert np.allclose(bsub.coeffs, 0.1 * b0.coeffs, atol=1e-16)


# ---------------------------------------------------------------- experiment and reports


@pytest.fixture(scope="module")
def small_report():
    cfg = ExperimentConfig(log_b0="0.2*cos(x)", bsub="0.1", bsub_form="ratio", n_grid=SMALL, buffer=32, residue_L=3)
    return run_szego_experiment(cfg)


def test_trivial_symbol_gives_zero():
    rep = run_szego_experiment(ExperimentConfig(n_grid=SMALL, buffer=16))
    for row in rep.coefficients.values():
        assert row["predicted"] == 0
        assert abs(row["measured"]) < 1e-12
    assert all(abs(p["logdet_measured"]) < 1e-13 for p in rep.points)


def test_sslt_constant_delta():
    rep = run_szego_experiment(parse_config_text((CONFIGS / "sslt.ini").read_text()))
    assert rep.predicted("1") == pytest.approx(0.01, abs=1e-12)
    assert abs(rep.delta("1")) < 1e-6


def test_report_pairs_every_prediction(small_report):
    rep = small_report
    assert set(rep.coefficients) >= {"n", "log n", "1", "1/n"}
    for row in rep.coefficients.values():
        assert row["measured"] is None or row["delta"] == row["measured"] - row["predicted"]
    assert [p["n"] for p in rep.points] == list(SMALL)
    d = rep.diagnostics
    for key in ("fit_condition", "C_tail_bound", "log_block_drift", "logdet_max_condition"):
        assert math.isfinite(d[key])


def test_json_deterministic(small_report):
    cfg = ExperimentConfig(log_b0="0.2*cos(x)", bsub="0.1", bsub_form="ratio", n_grid=SMALL, buffer=32, residue_L=3)
    again = run_szego_experiment(cfg)
    a, b = report_json(small_report), report_json(again)
    assert a == b
    payload = json.loads(a)
    assert set(payload) == {"config", "coefficients", "diagnostics", "points"}
    assert payload["config"]["log_b0"] == "0.2*cos(x)"


def test_csv_schema(small_report):
    lines = report_csv(small_report).splitlines()
    assert tuple(lines[0].split(",")) == CSV_COLUMNS
    assert len(lines) == len(SMALL) + 1
    assert [int(r.split(",")[0]) for r in lines[1:]] == list(SMALL)


def test_svg_wellformed(small_report):
    svg = residual_svg(small_report)
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert "href" not in svg  # no external assets
    poly = [el for el in root.iter() if el.tag.endswith("polyline")]
    assert len(poly) == 1 and len(poly[0].get("points").split()) == len(SMALL)


# ---------------------------------------------------------------- verification suites


SMALL_CAPS = {
    "hd": {"m_max": 6, "trials": 5},
    "ghd": {"m_max": 5, "trials": 10, "exhaustive_m": 3},
    "bst": {"m_max": 6, "trials": 10},
    "rw": {"laws": 5},
    "trace-identity": {"fixtures": 2},
    "commutation": {"fixtures": 2},
}


@pytest.mark.parametrize("kind", VERIFY_KINDS)
def test_verify_kinds_pass(kind):
    rep = run_verify_suite(kind, seed=7, caps=SMALL_CAPS[kind])
    assert rep.passed and rep.checked > 0, rep.counterexamples[:3]


def test_verify_unknown_kind():
    with pytest.raises(ValueError):
        run_verify_suite("riemann")


def test_walk_grid_starts_with_simple_walk():
    laws = walk_law_grid(20, seed=0)
    assert len(laws) == 20
    assert dict(zip(laws[0].support, laws[0].probs)).get(0, 0) == 0


# ---------------------------------------------------------------- command line


@pytest.fixture
def runner():
    return CliRunner()


def test_cli_verify_ok(runner, tmp_path):
    out = tmp_path / "v.json"
    res = runner.invoke(cli, ["verify", "rw", "--seed", "3", "--cap", "laws=3", "--json", str(out)])
    assert res.exit_code == 0, res.output
    assert json.loads(out.read_text())["passed"] is True


def test_cli_bad_cap_is_config_error(runner):
    res = runner.invoke(cli, ["verify", "hd", "--cap", "m_max"])
    assert res.exit_code == 2


def test_cli_szego_run_outputs(runner, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text('[symbol]\nlog_b0 = "0.2*cos(x)"\n[grid]\nn = 16, 24, 32, 48, 64\nbuffer = 32\n[residues]\nL = 3\n')
    csv_p, js_p, svg_p = tmp_path / "r.csv", tmp_path / "r.json", tmp_path / "r.svg"
    args = ["szego", "run", str(cfg), "--out", str(csv_p), "--json", str(js_p), "--plot", str(svg_p)]
    res = runner.invoke(cli, args)
    assert res.exit_code == 0, res.output
    assert "log n" in res.output
    first = js_p.read_text()
    assert runner.invoke(cli, args).exit_code == 0
    assert js_p.read_text() == first
    ET.fromstring(svg_p.read_text())
    assert csv_p.read_text().startswith(",".join(CSV_COLUMNS))


def test_cli_gate_failure_exit_3(runner):
    res = runner.invoke(cli, ["szego", "run", str(CONFIGS / "gate_failure.ini")])
    assert res.exit_code == 3, res.output


def test_cli_config_error_exit_2(runner, tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text('[symbol]\nlog_b0 = "exp(x)"\n')
    assert runner.invoke(cli, ["szego", "run", str(cfg)]).exit_code == 2


def test_cli_phi_eval(runner):
    res = runner.invoke(cli, ["phi", "eval", "0.3", "-0.2", "0.1"])
    assert res.exit_code == 0
    assert float(res.output) < 0 or float(res.output) > 0
    assert runner.invoke(cli, ["phi", "eval", "1.2", "0.1", "0.1"]).exit_code == 2
    bad = runner.invoke(cli, ["phi", "eval", "0.9999999", "0.9999999", "0.9999999", "--tol", "1e-16"])
    assert bad.exit_code == 3


def test_cli_rw_moments(runner, tmp_path):
    out = tmp_path / "m.json"
    res = runner.invoke(cli, ["rw", "moments", str(CONFIGS / "walk.ini"), "--json", str(out)])
    assert res.exit_code == 0, res.output
    rows = json.loads(out.read_text())["moments"]
    assert len(rows) == 18 and all(r["agree"] for r in rows)


def test_cli_rw_simple_walk_values(runner, tmp_path):
    cfg = tmp_path / "w.ini"
    cfg.write_text("[walk]\nm = 2\nn = 2\n")
    res = runner.invoke(cli, ["rw", "moments", str(cfg)])
    assert res.exit_code == 0
    assert "m=2 n=1  3/4" in res.output and "m=2 n=2  5/4" in res.output


def test_cli_probe_constant(runner, tmp_path):
    cfg = tmp_path / "p.ini"
    cfg.write_text('[probe]\nc1 = "0.2"\nn = 32, 48, 64, 96, 128\nbuffer = 32\n')
    res = runner.invoke(cli, ["probe", "constant", str(cfg)])
    assert res.exit_code == 0, res.output
    assert abs(float(res.output) - (-0.3042)) < 2e-3
