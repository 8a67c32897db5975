"""Scenario execution, parameter sweeps and the method-comparison table."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .detection import DetectionResult, method_a_joint, _port_amplitude
from .entangle import generate_entangled, squeezing_variances, theta_adapted_bound
from .errors import ScenarioError
from .scenario import Scenario, load_scenario
from .states import BrightGaussianState, apply_beamsplitter, apply_loss, sample_fluctuations

CSV_HEADER = "method,param,value,v_sq_plus,v_sq_minus,sum,bound,witnessed,mc_sum,mc_stderr"
SWEEP_PARAMS = ("theta", "phi", "gain", "squeezing_db", "eta",
                "excess_phase_db", "entangle_ratio")
FIXTURES_ENV = "BRIGHTBEAM_FIXTURES"


@dataclass(frozen=True)
class ReportRow:
    """One evaluated scenario, ready for CSV/JSON emission."""

    method: str
    label: str
    v_sq_plus: float
    v_sq_minus: float
    sum_value: float
    bound: float
    witnessed: bool
    gain: float
    raw: dict
    mc_sum: float | None = None
    mc_stderr: float | None = None
    frequency_mhz: float | None = None

    def to_dict(self) -> dict:
        d = {
            "method": self.method,
            "label": self.label,
            "v_sq_plus": self.v_sq_plus,
            "v_sq_minus": self.v_sq_minus,
            "sum": self.sum_value,
            "bound": self.bound,
            "witnessed": self.witnessed,
            "gain": self.gain,
            "raw": self.raw,
        }
        if self.mc_sum is not None:
            d["mc_sum"] = self.mc_sum
            d["mc_stderr"] = self.mc_stderr
        if self.frequency_mhz is not None:
            d["frequency_mhz"] = self.frequency_mhz
        return d


def _entangled_state(s: Scenario) -> BrightGaussianState:
    return generate_entangled(s.input_a, s.input_b, s.theta, s.entangle_ratio,
                              excess_correlation=s.excess_correlation)


def _optimize_shared_gain(objective) -> float:
    res = minimize_scalar(lambda lg: objective(float(np.exp(lg))),
                          bounds=(np.log(1e-3), np.log(1e3)),
                          method="bounded", options={"xatol": 1e-12})
    g = float(np.exp(res.x))
    if not np.isfinite(g) or objective(g) > objective(1.0):
        return 1.0
    return g


def _eval_a(s: Scenario, state: BrightGaussianState):
    state_x, state_y = state, state
    for mode, budget in enumerate((s.budget_a, s.budget_b)):
        state_x = apply_loss(state_x, mode, budget.effective(include_visibility=False))
        state_y = apply_loss(state_y, mode, budget.effective(include_visibility=True))

    def variances(g):
        g_eff = g * (1.0 + s.imbalance)
        v_plus = squeezing_variances(state_x, g_eff)[0]
        v_minus = squeezing_variances(state_y, g_eff)[1]
        return v_plus, v_minus

    if s.gain == "optimize":
        g = _optimize_shared_gain(lambda g: sum(variances(g)))
    else:
        g = float(s.gain)
    v_plus, v_minus = variances(g)
    g_eff = g * (1.0 + s.imbalance)
    combo_x, anti_x = method_a_joint(state, "X", (s.budget_a, s.budget_b), g, s.imbalance)
    combo_y, anti_y = method_a_joint(state, "Y", (s.budget_a, s.budget_b), g, s.imbalance)
    raw = {"plus": combo_x.to_dict(), "plus_anti": anti_x.to_dict(),
           "minus": combo_y.to_dict(), "minus_anti": anti_y.to_dict()}
    shot = 1.0 + g_eff ** 2
    channels = [
        (state_x, np.array([1.0, 0.0, g_eff, 0.0]), shot, 1.0),
        (state_y, np.array([0.0, 1.0, 0.0, -g_eff]), shot, 1.0),
    ]
    return v_plus, v_minus, v_plus + v_minus, 2.0, g, raw, channels


def _eval_bc(s: Scenario, state: BrightGaussianState):
    lossy = state
    for mode, budget in enumerate((s.budget_a, s.budget_b)):
        lossy = apply_loss(lossy, mode, budget.effective())
    out = apply_beamsplitter(lossy, 0, 1, 0.5, s.phi)
    if s.method == "B":
        a_d = _port_amplitude(out, 0)
        a_c = _port_amplitude(out, 1)
        gain_c = 1.0 + s.imbalance
        shot = a_d ** 2 + (gain_c * a_c) ** 2
        w_sum = np.array([a_d, 0.0, gain_c * a_c, 0.0])
        w_diff = np.array([-a_d, 0.0, gain_c * a_c, 0.0])
        total = DetectionResult.from_variance(out.combination_variance(w_sum), shot)
        diff = DetectionResult.from_variance(out.combination_variance(w_diff), shot)
        raw = {"sum_channel": total.to_dict(), "diff_channel": diff.to_dict()}
        channels = [(out, w_sum, shot, 1.0), (out, w_diff, shot, 1.0)]
        v_plus, v_minus = total.normalized, diff.normalized
        return (v_plus, v_minus, v_plus + v_minus,
                theta_adapted_bound(s.theta), 1.0, raw, channels)
    # Method C: only the blend (v_plus + v_minus)/2 is observable in the
    # selected port; both report fields carry the port value.
    index = 1 if s.port == "c" else 0
    alpha = _port_amplitude(out, index)
    w = np.zeros(4)
    w[2 * index] = alpha
    port_result = DetectionResult.from_variance(out.combination_variance(w), alpha ** 2)
    raw = {f"port_{s.port}": port_result.to_dict()}
    other = 1 - index
    if out.amplitudes[other] > 1e-6 * np.linalg.norm(out.amplitudes):
        w2 = np.zeros(4)
        w2[2 * other] = out.amplitudes[other]
        raw["port_" + ("d" if s.port == "c" else "c")] = DetectionResult.from_variance(
            out.combination_variance(w2), out.amplitudes[other] ** 2).to_dict()
    v = port_result.normalized
    channels = [(out, w, alpha ** 2, 2.0)]
    return v, v, 2.0 * v, 2.0, 1.0, raw, channels


def _mc_estimate(channels, count: int, seed: int):
    """Empirical witness sum from the sampling oracle, with a standard error."""
    cache: dict[int, np.ndarray] = {}
    total = 0.0
    err_sq = 0.0
    for state, w, shot, mult in channels:
        key = id(state)
        if key not in cache:
            cache[key] = sample_fluctuations(state, count, seed + len(cache))
        x = cache[key] @ w
        v = float(np.var(x, ddof=1)) / shot
        total += mult * v
        err_sq += (mult * v) ** 2 * 2.0 / (count - 1)
    return total, math.sqrt(err_sq)


def run_scenario(s: Scenario) -> ReportRow:
    """Evaluate one scenario; deterministic for a fixed seed."""
    state = _entangled_state(s)
    if s.method == "A":
        parts = _eval_a(s, state)
    else:
        parts = _eval_bc(s, state)
    v_plus, v_minus, total, bound, gain, raw, channels = parts
    mc_sum = mc_stderr = None
    if s.mc_samples > 0:
        mc_sum, mc_stderr = _mc_estimate(channels, s.mc_samples, s.seed)
    return ReportRow(
        method=s.method,
        label=s.label,
        v_sq_plus=v_plus,
        v_sq_minus=v_minus,
        sum_value=total,
        bound=bound,
        witnessed=bool(total < bound),
        gain=gain,
        raw=raw,
        mc_sum=mc_sum,
        mc_stderr=mc_stderr,
        frequency_mhz=s.frequency_mhz,
    )


def with_param(s: Scenario, param: str, value: float) -> Scenario:
    """Return a copy of the scenario with one sweepable parameter set."""
    if param in ("theta", "phi", "entangle_ratio"):
        return replace(s, **{param: value})
    if param == "gain":
        return replace(s, gain=float(value))
    if param == "squeezing_db":
        # Minimum-uncertainty sweep: antisqueezing tracks the squeezing.
        return replace(
            s,
            input_a=replace(s.input_a, squeezing_db=value, antisqueezing_db=value),
            input_b=replace(s.input_b, squeezing_db=value, antisqueezing_db=value),
        )
    if param == "excess_phase_db":
        return replace(
            s,
            input_a=replace(s.input_a, excess_phase_db=value),
            input_b=replace(s.input_b, excess_phase_db=value),
        )
    if param == "eta":
        return replace(
            s,
            budget_a=replace(s.budget_a, propagation=value),
            budget_b=replace(s.budget_b, propagation=value),
        )
    raise ScenarioError(f"unknown sweep parameter {param!r}; choose from {SWEEP_PARAMS}")


def sweep(s: Scenario, param: str, start: float, stop: float,
          steps: int) -> list[tuple[float, ReportRow]]:
    if steps < 2:
        raise ScenarioError(f"sweep needs at least 2 steps, got {steps}")
    grid = np.linspace(start, stop, steps)
    return [(float(v), run_scenario(with_param(s, param, float(v)))) for v in grid]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return format(x, ".6g")


def sweep_csv(s: Scenario, param: str, start: float, stop: float, steps: int) -> str:
    """Run a sweep and render the fixed-schema CSV (deterministic)."""
    lines = [CSV_HEADER]
    for value, row in sweep(s, param, start, stop, steps):
        lines.append(",".join([
            row.method, param, _fmt(value),
            _fmt(row.v_sq_plus), _fmt(row.v_sq_minus),
            _fmt(row.sum_value), _fmt(row.bound), _fmt(row.witnessed),
            _fmt(row.mc_sum), _fmt(row.mc_stderr),
        ]))
    return "\n".join(lines) + "\n"


def compare_methods(rows: list[ReportRow]) -> str:
    """Aligned comparison table of witness sums across methods."""
    if len(rows) < 2:
        raise ScenarioError("method comparison needs at least 2 scenarios")
    width = max(24, max(len(row.label) for row in rows) + 2)
    header = f"{'method':<8}{'label':<{width}}{'sum':>10}{'bound':>10}{'witnessed':>11}{'f [MHz]':>10}"
    lines = [header, "-" * len(header)]
    for row in rows:
        freq = "" if row.frequency_mhz is None else _fmt(row.frequency_mhz)
        lines.append(
            f"{row.method:<8}{row.label:<{width}}{_fmt(row.sum_value):>10}"
            f"{_fmt(row.bound):>10}{_fmt(row.witnessed):>11}{freq:>10}"
        )
    freqs = {row.frequency_mhz for row in rows if row.frequency_mhz is not None}
    if len(freqs) > 1:
        lines.append("note: rows taken at different measurement frequencies "
                     "cannot be compared directly")
    return "\n".join(lines)


def fixtures_dir() -> Path:
    """Bundled fixture directory, overridable via BRIGHTBEAM_FIXTURES."""
    override = os.environ.get(FIXTURES_ENV)
    if override:
        return Path(override)
    return Path(resources.files("brightbeam") / "fixtures")


def run_fixture_table(directory: Path | None = None) -> tuple[list[ReportRow], str]:
    """Run every fixture scenario in the directory and format the table."""
    directory = Path(directory) if directory is not None else fixtures_dir()
    paths = sorted(directory.glob("*.json"))
    if len(paths) < 2:
        raise ScenarioError(f"no fixture scenarios found in {directory}")
    rows = [run_scenario(load_scenario(p)) for p in paths]
    return rows, compare_methods(rows)
