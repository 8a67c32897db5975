"""The three measurement schemes and their loss/shot-noise accounting.

Method A: two unbalanced Mach-Zehnder interferometers measure amplitude or
phase quadratures of each beam locally; correlations are formed
electronically.  Method B: the beam pair interferes on a 50/50 splitter
and the sum/difference photocurrents deliver both correlation signals at
once.  Method C: a single output port of the same interferometer is
detected; at verification phase pi/2 its normalized variance is half the
witness sum.

All physics stays in shot-noise-normalized units; absolute dBm powers
appear only in the electronic-noise subtraction utility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModeError, DomainError
from .states import (
    DARK_PORT_FACTOR,
    BrightGaussianState,
    apply_beamsplitter,
    apply_loss,
)
from .units import var_to_db

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class DetectionResult:
    """A photocurrent variance with its shot-noise reference."""

    variance: float
    shot_noise: float
    normalized: float
    rel_db: float

    @classmethod
    def from_variance(cls, variance: float, shot_noise: float) -> "DetectionResult":
        if shot_noise <= 0:
            raise DegenerateModeError("shot-noise reference must be positive")
        normalized = variance / shot_noise
        return cls(float(variance), float(shot_noise), float(normalized),
                   var_to_db(normalized))

    def to_dict(self) -> dict:
        return {
            "variance": self.variance,
            "shot_noise": self.shot_noise,
            "normalized": self.normalized,
            "rel_db": self.rel_db,
        }


@dataclass(frozen=True)
class LossBudget:
    """Pre-detection efficiency budget: propagation x visibility^2 x QE."""

    propagation: float = 1.0
    visibility: float = 1.0
    quantum_efficiency: float = 1.0

    def __post_init__(self):
        for name in ("propagation", "visibility", "quantum_efficiency"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must be in [0, 1], got {v}")

    def effective(self, include_visibility: bool = True) -> float:
        eta = self.propagation * self.quantum_efficiency
        if include_visibility:
            eta *= self.visibility ** 2
        return eta


@dataclass(frozen=True)
class MzGeometry:
    """Unbalanced Mach-Zehnder delay geometry for a pulsed source."""

    repetition_rate: float
    n: int
    delta_l: float
    measurement_frequency: float


def mz_geometry(repetition_rate: float, n: int) -> MzGeometry:
    """Arm-length difference and measurement frequency for delay order n.

    Interference of a pulse train requires the delay to be a whole number
    of pulse separations: delta_l = c*n/f_rep, measured at f_rep/(2n).
    """
    if repetition_rate <= 0:
        raise DomainError("repetition_rate must be positive")
    if n < 1:
        raise DomainError("delay order n must be >= 1")
    return MzGeometry(
        repetition_rate=repetition_rate,
        n=n,
        delta_l=SPEED_OF_LIGHT * n / repetition_rate,
        measurement_frequency=repetition_rate / (2 * n),
    )


def method_a_measure(state: BrightGaussianState, mode: int, quadrature: str,
                     budget: LossBudget = LossBudget()) -> DetectionResult:
    """Single-beam quadrature measurement with the unbalanced Mach-Zehnder.

    Phase (Y) measurements pay the full budget including visibility;
    amplitude (X) measurements need no interference and skip it.
    """
    eta = budget.effective(include_visibility=(quadrature == "Y"))
    lossy = apply_loss(state, mode, eta)
    alpha = lossy.amplitudes[mode]
    if alpha <= 0:
        raise DegenerateModeError("phase measurement needs a bright carrier")
    variance = alpha ** 2 * lossy.variance(mode, quadrature)
    return DetectionResult.from_variance(variance, alpha ** 2)


def method_a_joint(state: BrightGaussianState, quadrature: str,
                   budgets: tuple[LossBudget, LossBudget],
                   g: float = 1.0,
                   imbalance: float = 0.0) -> tuple[DetectionResult, DetectionResult]:
    """Joint two-beam measurement: correlation and anti-correlation channels.

    Returns (combination, anti_combination): for X the combination is the
    sum V(dX1 + g dX2), for Y the difference V(dY1 - g dY2); the anti
    channel flips the relative sign.  An electronic gain mismatch
    ``imbalance`` multiplies the second photocurrent (and enters the
    coherent reference the same way).
    """
    if state.n_modes != 2:
        raise DomainError("method A joint measurement needs a two-mode state")
    include_vis = quadrature == "Y"
    lossy = state
    for mode, budget in enumerate(budgets):
        lossy = apply_loss(lossy, mode, budget.effective(include_vis))
    a1, a2 = lossy.amplitudes
    if a1 <= 0 or a2 <= 0:
        raise DegenerateModeError("joint measurement needs two bright carriers")
    q = 0 if quadrature == "X" else 1
    sign = 1.0 if quadrature == "X" else -1.0
    g_eff = g * (1.0 + imbalance)
    shot = a1 ** 2 * (1.0 + g_eff ** 2)
    w = np.zeros(4)
    w[q] = a1
    w[2 + q] = sign * g_eff * a1
    combo = DetectionResult.from_variance(lossy.combination_variance(w), shot)
    w[2 + q] = -w[2 + q]
    anti = DetectionResult.from_variance(lossy.combination_variance(w), shot)
    return combo, anti


def _verification_interference(state: BrightGaussianState, phi: float,
                               budgets: tuple[LossBudget, LossBudget] | None = None):
    """Apply per-arm budgets, interfere at 50/50 with relative phase phi.

    Returns the output state; port 'd' is output 0 (the + combination,
    bright at phi = 0) and port 'c' is output 1 (the - combination).
    """
    if state.n_modes != 2:
        raise DomainError("verification interference needs a two-mode state")
    lossy = state
    if budgets is not None:
        for mode, budget in enumerate(budgets):
            lossy = apply_loss(lossy, mode, budget.effective())
    return apply_beamsplitter(lossy, 0, 1, 0.5, phi)


_PORT_INDEX = {"d": 0, "c": 1}


def _port_amplitude(out: BrightGaussianState, index: int) -> float:
    alpha = out.amplitudes[index]
    total = np.sqrt(np.sum(out.amplitudes ** 2))
    if alpha ** 2 < (DARK_PORT_FACTOR ** 2) * total ** 2 or alpha <= 0:
        raise DegenerateModeError(
            "interferometer output port is dark; shot-noise normalization degenerate"
        )
    return float(alpha)


def method_b_channels(state: BrightGaussianState, phi: float,
                      budgets: tuple[LossBudget, LossBudget] | None = None,
                      imbalance: float = 0.0) -> tuple[DetectionResult, DetectionResult]:
    """Sum and difference photocurrents after interfering the beam pair.

    At phi = pi/2 the sum channel carries the amplitude correlation signal
    weighted by the entangled-beam amplitudes and the difference channel
    the phase correlation signal; both are normalized to the coherent
    value of the identical combination.
    """
    out = _verification_interference(state, phi, budgets)
    a_d = _port_amplitude(out, 0)
    a_c = _port_amplitude(out, 1)
    gain_c = 1.0 + imbalance
    shot = a_d ** 2 + (gain_c * a_c) ** 2
    w_sum = np.array([a_d, 0.0, gain_c * a_c, 0.0])
    w_diff = np.array([-a_d, 0.0, gain_c * a_c, 0.0])
    total = DetectionResult.from_variance(out.combination_variance(w_sum), shot)
    diff = DetectionResult.from_variance(out.combination_variance(w_diff), shot)
    return total, diff


def method_c_single_port(state: BrightGaussianState, phi: float, port: str = "c",
                         budgets: tuple[LossBudget, LossBudget] | None = None
                         ) -> DetectionResult:
    """Direct detection in one interferometer output port.

    For a symmetric entangled pair the normalized variance is the convex
    blend ((1 -+ cos phi) Vplus + (1 +- cos phi) Vminus)/2; at
    phi = pi/2 it is (Vplus + Vminus)/2, half the witness sum.
    """
    if port not in _PORT_INDEX:
        raise DomainError(f"port must be 'c' or 'd', got {port!r}")
    out = _verification_interference(state, phi, budgets)
    index = _PORT_INDEX[port]
    alpha = _port_amplitude(out, index)
    w = np.zeros(4)
    w[2 * index] = alpha
    return DetectionResult.from_variance(out.combination_variance(w), alpha ** 2)


def shot_noise_reference(amplitudes) -> float:
    """Coherent-state variance of a multi-detector photocurrent combination."""
    amps = np.asarray(amplitudes, dtype=float)
    if np.any(amps < 0):
        raise DomainError("amplitudes must be non-negative")
    total = float(np.sum(amps ** 2))
    if total <= 0:
        raise DegenerateModeError("all-zero amplitudes give no shot-noise reference")
    return total


def correct_electronic_noise(signal_dbm: float, electronic_dbm: float) -> float:
    """Subtract the electronic noise floor in linear power, back to dBm."""
    if electronic_dbm == -math.inf:
        return signal_dbm
    if signal_dbm <= electronic_dbm:
        raise DomainError(
            "signal power must exceed the electronic noise floor for subtraction"
        )
    corrected = 10.0 ** (signal_dbm / 10.0) - 10.0 ** (electronic_dbm / 10.0)
    return 10.0 * math.log10(corrected)
