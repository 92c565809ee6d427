import json
import math

import numpy as np
import pytest

from plasma_ldp import analytic as an
from plasma_ldp import cli, envelope
from plasma_ldp.errors import ConvergenceError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    meta, header, rows = envelope.parse_csv(text)
    return meta, header, np.array(rows, dtype=float)


# --- grids and envelopes ----------------------------------------------------------------------

def test_grid_row_counts():
    assert len(cli.parse_grid("-3:3:0.05")) == 121
    assert len(cli.parse_grid("0:1:0.3")) == 4  # 0.9 included, 1.2 is beyond half a step
    assert len(cli.parse_grid("1:1:0.1")) == 1
    for bad in ("1:0:0.1", "0:1:0", "0:1", "a:b:c", "0:inf:1"):
        with pytest.raises(ValueError):
            cli.parse_grid(bad)


def test_csv_roundtrip_bytes(capsys):
    code, out, _ = run(capsys, "ldf", "--which", "derivatives", "--s-grid", "-1:1:0.25")
    assert code == 0
    meta, header, rows = envelope.parse_csv(out)
    assert envelope.format_csv(meta, header, rows) == out


def test_csv_roundtrip_special_values():
    meta = envelope.header_meta("x", {"a": math.inf, "b": np.float64(0.1)})
    rows = [(1, 0.1, math.inf, -0.0, 1e-300), (2, math.nan, 5e300, 3.0, -7)]
    text = envelope.format_csv(meta, ["i", "a", "b", "c", "d"], rows)
    m2, h2, r2 = envelope.parse_csv(text)
    assert envelope.format_csv(m2, h2, r2) == text
    assert r2[0][1] == 0.1 and r2[1][4] == -7


def test_timestamp_pinned(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "86400")
    assert envelope.timestamp() == "1970-01-02T00:00:00Z"


# --- ldf -------------------------------------------------------------------------------------

def test_ldf_J(capsys):
    code, out, _ = run(capsys, "ldf", "--which", "J", "--s-grid", "-3:3:0.05")
    meta, header, rows = table(out)
    assert code == 0 and header == ["s", "J"] and len(rows) == 121
    assert meta["config"]["s_grid"] == "-3:3:0.05" and meta["version"]
    zero = rows[np.argmin(np.abs(rows[:, 0]))]
    assert abs(zero[0]) < 1e-12 and abs(zero[1]) < 1e-12


def test_ldf_psi_minimum(capsys):
    code, out, _ = run(capsys, "ldf", "--which", "Psi", "--x-grid", "0.05:3:0.05", "--threads", "3")
    _, header, rows = table(out)
    assert header == ["x", "Psi", "s"]
    assert rows[np.argmin(rows[:, 1]), 0] == pytest.approx(0.65)


def test_ldf_threads_do_not_change_output(capsys):
    a = run(capsys, "ldf", "--which", "Psi", "--x-grid", "0.2:2:0.2", "--threads", "1")[1]
    b = run(capsys, "ldf", "--which", "Psi", "--x-grid", "0.2:2:0.2", "--threads", "4")[1]
    assert a.replace('"threads": 1', '"threads": 4') == b


def test_ldf_density_annulus(capsys):
    code, out, _ = run(capsys, "ldf", "--which", "density", "--s", "-0.5")
    _, header, rows = table(out)
    assert header == ["s", "r", "marginal", "planar"]
    inside = rows[rows[:, 1] < 0.5 - 1e-12]
    assert len(inside) > 0 and np.all(inside[:, 2:] == 0)
    assert np.all(rows[(rows[:, 1] > 0.5) & (rows[:, 1] < 1.2)][:, 2] > 0)


def test_ldf_derivatives_both_sides_at_zero(capsys):
    _, out, _ = run(capsys, "ldf", "--which", "derivatives", "--s-grid", "-0.5:0.5:0.5")
    _, header, rows = table(out)
    row0 = rows[1]
    assert row0[header.index("J4_left")] == 0.5 and row0[header.index("J4_right")] == -0.5


def test_ldf_tol_override(capsys):
    code, _, err = run(capsys, "ldf", "--which", "Psi", "--x-grid", "0.01:0.02:0.01", "--tol", "1e-300")
    assert code == 2 and "numerical failure" in err


@pytest.mark.parametrize("argv", [
    ["ldf", "--which", "J", "--s-grid", "3:1:1"],
    ["ldf", "--which", "J"],
    ["ldf", "--which", "K", "--s-grid", "0:1:1"],
    ["ldf", "--which", "Psi", "--x-grid", "0:1:0.5"],
    ["finite-n", "--N", "0", "--s-grid", "0:1:1"],
    ["sample", "--N", "1", "--beta", "2"],
    ["sample", "--N", "8", "--beta", "-2"],
    ["verify", "--suite", "nope"],
    ["ldf", "--which", "J", "--s-grid", "0:1:1", "--seed", "-4"],
    ["bogus"],
])
def test_validation_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == 1


# --- finite-n --------------------------------------------------------------------------------

def test_finite_n_table(capsys):
    code, out, _ = run(capsys, "finite-n", "--N", "16", "--s-grid", "-2:2:0.1")
    meta, header, rows = table(out)
    assert code == 0 and header == ["s", "scaled_log_laplace", "J", "difference"]
    assert 1e-3 < np.max(np.abs(rows[:, 3])) < 1e-1
    assert meta["errors"]["max_abs_difference"] == pytest.approx(np.max(np.abs(rows[:, 3])))
    zero = rows[np.argmin(np.abs(rows[:, 0]))]
    assert zero[1] == 0 and zero[3] == 0


def test_finite_n_cumulants(capsys):
    code, out, _ = run(capsys, "finite-n", "--cumulants", "--N-max", "2000", "--n-points", "15")
    _, header, rows = table(out)
    assert header[:2] == ["N", "kappa1"] and "N6_kappa4" in header
    assert rows[0, 0] == 1 and rows[-1, 0] == 2000
    assert rows[-1, header.index("N2_kappa2")] == pytest.approx(0.25, rel=1e-2)


# --- sample ----------------------------------------------------------------------------------

def test_sample_byte_identical(tmp_path, capsys):
    outs = []
    for _ in range(2):
        code = cli.main(["sample", "--N", "16", "--beta", "2", "--sweeps", "800", "--seed", "42",
                         "--out", str(tmp_path / "t.csv"), "--summary", str(tmp_path / "t.json")])
        assert code == 0
        outs.append(((tmp_path / "t.csv").read_bytes(), (tmp_path / "t.json").read_bytes()))
    assert outs[0] == outs[1]


def test_sample_summary(tmp_path):
    code = cli.main(["sample", "--N", "32", "--beta", "2", "--s", "0", "--sweeps", "3000", "--seed", "5",
                     "--out", str(tmp_path / "t.csv"), "--summary", str(tmp_path / "s.json")])
    assert code == 0
    doc = json.loads((tmp_path / "s.json").read_text())
    p = doc["payload"]
    assert abs(p["z_vs_exact_finite_n"]) <= 4
    assert p["theory_x_of_s"] == pytest.approx(2 / 3)
    assert 0 < p["acceptance_rate"] < 1 and p["tau_int"] >= 1
    assert doc["config"]["seed"] == 5
    _, header, rows = envelope.parse_csv((tmp_path / "t.csv").read_text())
    assert header == ["sweep", "delta"] and len(rows) == 2400 and rows[0][0] == 600


@pytest.mark.slow
def test_sample_annulus_histogram(tmp_path):
    cli.main(["sample", "--N", "32", "--beta", "1", "--s", "-1", "--sweeps", "5000", "--seed", "1",
              "--out", str(tmp_path / "t.csv"), "--summary", str(tmp_path / "s.json")])
    p = json.loads((tmp_path / "s.json").read_text())["payload"]
    h = p["histogram"]
    total = sum(h["counts"]) + h["overflow"]
    # r0 = 1: only edge smearing of width O(N^-1/2) below it
    assert sum(h["counts"][:50]) / total < 1e-3
    assert sum(h["counts"][:90]) / total < 0.1


def test_sample_divergence_exit_code(monkeypatch, capsys):
    from plasma_ldp import sampler

    def boom(*a, **k):
        raise sampler.ChainDivergenceError("non-finite energy")

    monkeypatch.setattr(sampler, "run_chain", boom)
    code, _, err = run(capsys, "sample", "--N", "4", "--beta", "1", "--sweeps", "10")
    assert code == 2 and "non-finite" in err


# --- verify ----------------------------------------------------------------------------------

@pytest.mark.parametrize("suite", ["jump", "duality", "oracle", "freegas"])
def test_verify_passing_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite)
    doc = json.loads(out)
    assert code == 0 and doc["payload"]["passed"]
    checks = doc["payload"]["suites"][suite]["checks"]
    assert all({"name", "value", "tolerance", "passed"} <= set(c) for c in checks)


def test_verify_jump_values(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "jump")
    checks = {c["name"]: c for c in json.loads(out)["payload"]["suites"]["jump"]["checks"]}
    assert checks["J4_left_at_0"]["value"] == 0.5
    assert checks["J4_right_at_0"]["value"] == -0.5
    assert checks["J4_jump"]["value"] == 1.0


def test_verify_freegas_flags_discrepancy(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "freegas")
    checks = {c["name"]: c for c in json.loads(out)["payload"]["suites"]["freegas"]["checks"]}
    assert checks["printed_form_vs_quadrature_max"]["discrepancy_flagged"] is True


def test_verify_failure_exit_3(capsys):
    # the beta2 suite carries two checks whose stated tolerances the exact engine does not meet
    code, out, _ = run(capsys, "verify", "--suite", "beta2")
    doc = json.loads(out)
    failed = {c["name"] for c in doc["payload"]["suites"]["beta2"]["checks"] if not c["passed"]}
    assert code == 3
    assert failed == {"finite_n_max_error_N16", "N6_kappa4_spread_N100_800"}


def test_convergence_error_message():
    e = ConvergenceError("integral", estimate=1e-6, target=1e-9)
    assert e.estimate == 1e-6 and e.target == 1e-9
    assert "1.000e-06" in str(e) and "1.000e-09" in str(e)


from hypothesis import given  # noqa: E402
from hypothesis import strategies as hst  # noqa: E402


@given(hst.lists(hst.tuples(hst.integers(-10 ** 12, 10 ** 12), hst.floats(allow_nan=False),
                            hst.floats(allow_nan=False, allow_infinity=False)), max_size=20))
def test_csv_roundtrip_property(rows):
    meta = envelope.header_meta("prop", {"n": len(rows)})
    text = envelope.format_csv(meta, ["i", "a", "b"], rows)
    m2, h2, r2 = envelope.parse_csv(text)
    assert envelope.format_csv(m2, h2, r2) == text
    assert [tuple(r) for r in r2] == [tuple(r) for r in rows]
