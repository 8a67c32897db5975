import math

import numpy as np
import pytest

from brightbeam.errors import ScenarioError
from brightbeam.harness import (
    CSV_HEADER,
    SWEEP_PARAMS,
    compare_methods,
    run_fixture_table,
    run_scenario,
    sweep,
    sweep_csv,
    with_param,
)
from brightbeam.scenario import Scenario, scenario_from_dict

SQ37 = {
    "input_a.squeezing_db": 3.7, "input_a.antisqueezing_db": 3.7,
    "input_b.squeezing_db": 3.7, "input_b.antisqueezing_db": 3.7,
}
VS37 = 10 ** (-0.37)


def make(method="A", **extra):
    return scenario_from_dict({"method": method, **SQ37, **extra})


class TestRunScenario:
    def test_coherent_inputs_sit_on_the_bound(self):
        for method in ("A", "B", "C"):
            row = run_scenario(Scenario(method=method))
            assert row.sum_value == pytest.approx(2.0, rel=1e-12)
            assert not row.witnessed

    def test_lossless_all_methods_agree(self):
        for method in ("A", "B", "C"):
            row = run_scenario(make(method))
            assert row.v_sq_plus == pytest.approx(VS37, rel=1e-9)
            assert row.v_sq_minus == pytest.approx(VS37, rel=1e-9)
            assert row.sum_value == pytest.approx(2 * VS37, rel=1e-9)
            assert row.witnessed

    def test_bounds_per_method(self):
        theta = 1.1
        assert run_scenario(make("A", theta=theta)).bound == 2.0
        assert run_scenario(make("B", theta=theta)).bound == pytest.approx(
            2 * abs(math.sin(theta)))
        assert run_scenario(make("C", theta=theta)).bound == 2.0

    def test_witnessed_flag_consistent_with_fields(self):
        for method in ("A", "B", "C"):
            for sq in (0.0, 1.5, 3.7):
                row = run_scenario(make(method, **{
                    k: sq for k in SQ37}))
                assert row.witnessed == (row.sum_value < row.bound)

    def test_method_a_loss_budget(self):
        row = run_scenario(make("A", **{
            "budget_a.prop_loss": 0.1, "budget_a.visibility": 0.95,
            "budget_a.quantum_efficiency": 0.9,
            "budget_b.prop_loss": 0.1, "budget_b.visibility": 0.95,
            "budget_b.quantum_efficiency": 0.9,
        }))
        eta_y = 0.9 * 0.95 ** 2 * 0.9
        eta_x = 0.9 * 0.9
        assert row.v_sq_minus == pytest.approx(eta_y * VS37 + 1 - eta_y, rel=1e-9)
        assert row.v_sq_plus == pytest.approx(eta_x * VS37 + 1 - eta_x, rel=1e-9)

    def test_gain_optimize_beats_unit_gain_when_asymmetric(self):
        kwargs = {"input_b.squeezing_db": 2.0, "input_b.antisqueezing_db": 2.0,
                  "budget_b.prop_loss": 0.2}
        unit = run_scenario(make("A", **kwargs))
        opt = run_scenario(make("A", gain="optimize", **kwargs))
        assert opt.gain != pytest.approx(1.0)
        assert opt.sum_value < unit.sum_value

    def test_mc_estimate_within_sampling_error(self):
        for method in ("A", "B", "C"):
            row = run_scenario(make(method, mc_samples=200_000, seed=7))
            assert row.mc_stderr is not None and row.mc_stderr > 0
            assert abs(row.mc_sum - row.sum_value) < 4 * row.mc_stderr

    def test_mc_deterministic_for_fixed_seed(self):
        a = run_scenario(make("B", mc_samples=50_000, seed=3))
        b = run_scenario(make("B", mc_samples=50_000, seed=3))
        assert a.mc_sum == b.mc_sum
        c = run_scenario(make("B", mc_samples=50_000, seed=4))
        assert c.mc_sum != a.mc_sum

    def test_report_row_dict_shape(self):
        d = run_scenario(make("C", label="x", frequency_mhz=17.5)).to_dict()
        assert d["method"] == "C"
        assert d["sum"] == pytest.approx(2 * VS37, rel=1e-9)
        assert "mc_sum" not in d
        assert d["frequency_mhz"] == 17.5
        assert "port_c" in d["raw"]


class TestSweep:
    def test_csv_deterministic(self):
        s = make("B", mc_samples=20_000)
        text1 = sweep_csv(s, "theta", 0.2, 3.0, 8)
        text2 = sweep_csv(s, "theta", 0.2, 3.0, 8)
        assert text1 == text2
        lines = text1.rstrip("\n").split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 9
        for line in lines[1:]:
            assert len(line.split(",")) == len(CSV_HEADER.split(","))

    def test_theta_sweep_flat_witness_columns(self):
        # normalized combination variances do not depend on the entangling
        # phase, only the bound does
        rows = sweep(make("B"), "theta", 0.3, 2.8, 6)
        sums = [row.sum_value for _, row in rows]
        bounds = [row.bound for _, row in rows]
        assert np.ptp(sums) < 1e-9
        assert np.ptp(bounds) > 0.1

    def test_squeezing_sweep_monotone(self):
        rows = sweep(Scenario(method="A"), "squeezing_db", 0.0, 3.0, 7)
        sums = [row.sum_value for _, row in rows]
        assert sums[0] == pytest.approx(2.0, rel=1e-12)
        assert all(a > b for a, b in zip(sums, sums[1:]))

    def test_eta_sweep_degrades_toward_bound(self):
        rows = sweep(make("A"), "eta", 1.0, 0.5, 6)
        sums = [row.sum_value for _, row in rows]
        assert all(a < b for a, b in zip(sums, sums[1:]))
        assert sums[-1] < 2.0

    def test_excess_sweep_leaks_only_when_unbalanced(self):
        base = make("B", **{"excess_correlation": 0.95,
                            "input_a.correlated_group": 1,
                            "input_b.correlated_group": 1})
        balanced = sweep(base, "excess_phase_db", 0.0, 20.0, 5)
        unbalanced = sweep(scenario_from_dict({
            **SQ37, "method": "B", "excess_correlation": 0.95,
            "entangle_ratio": 0.48,
            "input_a.correlated_group": 1, "input_b.correlated_group": 1,
        }), "excess_phase_db", 0.0, 20.0, 5)
        sums_u = [row.sum_value for _, row in unbalanced]
        assert all(a < b for a, b in zip(sums_u, sums_u[1:]))
        sums_b = [row.sum_value for _, row in balanced]
        assert sums_u[-1] > sums_b[-1]

    def test_unknown_param_rejected(self):
        with pytest.raises(ScenarioError, match="sweep parameter"):
            with_param(Scenario(), "amplitude", 5.0)
        with pytest.raises(ScenarioError, match="steps"):
            sweep(Scenario(), "theta", 0.0, 1.0, 1)

    def test_all_declared_params_accepted(self):
        for p in SWEEP_PARAMS:
            with_param(Scenario(), p, 0.4)


class TestCompare:
    def test_fixture_table_runs_and_aligns(self):
        rows, table = run_fixture_table()
        assert len(rows) == 4
        lines = table.split("\n")
        assert lines[0].startswith("method")
        assert all(r.witnessed for r in rows)
        assert "note:" in table  # A at 20.5 MHz vs B/C at 17.5 MHz

    def test_note_absent_for_matching_frequencies(self):
        rows = [run_scenario(make(m, frequency_mhz=17.5, label=m)) for m in "BC"]
        assert "note:" not in compare_methods(rows)

    def test_single_row_rejected(self):
        with pytest.raises(ScenarioError):
            compare_methods([run_scenario(Scenario())])

    def test_fixtures_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("BRIGHTBEAM_FIXTURES", str(tmp_path))
        with pytest.raises(ScenarioError, match="no fixture scenarios"):
            run_fixture_table()
