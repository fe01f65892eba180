"""Detector models: modal homodyne, position/momentum readout, split detection,
and seeded Monte Carlo shot-noise sampling.

All detectors report a DetectionRecord whose shot-noise reference (snl) is the
variance a coherent beam would produce in the same configuration, so
normalized_variance = 1 marks the quantum noise limit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState, apply_phase_shift, quadrature_stats
from .modes import ModalCoefficients

_LO_RESIDUAL_TOL = 1e-8
_LO_REGIME_FACTOR = 100.0


@dataclass(frozen=True)
class LocalOscillator:
    """Bright homodyne reference: transverse profile, phase, photon number."""

    profile: ModalCoefficients
    phase: float = 0.0
    photons: float = 1e8

    def __post_init__(self):
        if self.photons <= 0:
            raise ValueError("local oscillator photon number must be positive")
        if self.profile.norm_sq > 1.0 + 1e-9:
            raise ValueError("local oscillator profile norm exceeds 1")


@dataclass(frozen=True)
class DetectionRecord:
    mean_signal: float
    variance: float
    snl: float

    def __post_init__(self):
        if self.snl <= 0:
            raise ValueError("shot-noise reference must be positive")

    @property
    def normalized_variance(self):
        return self.variance / self.snl


def homodyne(state: GaussianState, beam, lo: LocalOscillator) -> DetectionRecord:
    """Homodyne detection with an arbitrary modal LO profile.

    Measures sqrt(N_LO) * X_phi of the mode selected by the LO profile; modes
    orthogonal to the LO contribute nothing.  Any LO weight outside the
    state's basis is rejected.
    """
    if not lo.profile.basis.compatible_with(state.basis):
        raise ValueError("local oscillator profile is not in the state's basis")
    if lo.profile.residual_norm > _LO_RESIDUAL_TOL:
        raise ValueError("local oscillator profile has out-of-basis weight")
    L = lo.profile.coeffs
    norm_sq = lo.profile.norm_sq
    if norm_sq < 1e-12:
        raise ValueError("local oscillator profile has zero norm")
    if lo.photons < _LO_REGIME_FACTOR * state.photon_scale:
        warnings.warn("local oscillator regime N_LO >= 100 N not satisfied; "
                      "linearized model may be inaccurate", stacklevel=2)
    # X = a_L e^{-i phi} + h.c. with a_L = sum conj(L_n) a_n
    mu = np.conj(L) * np.exp(-1j * lo.phase)
    v = np.zeros(state.dim)
    for n in range(state.modes_per_beam):
        v[state.index(beam, n, 0)] = mu[n].real
        v[state.index(beam, n, 1)] = -mu[n].imag
    mean = float(v @ state.mean)
    var = float(v @ state.cov @ v)
    root_nlo = np.sqrt(lo.photons)
    return DetectionRecord(mean_signal=root_nlo * mean,
                           variance=lo.photons * var,
                           snl=lo.photons * norm_sq)


def position_readout(state: GaussianState, beam):
    """Beam position x = (w0 / 2 sqrt(N)) X+ of the first-order mode."""
    N = state.photon_scale
    scale = state.basis.waist / (2.0 * np.sqrt(N))
    mean, var = quadrature_stats(state, beam, 1, 0.0)
    return float(scale * mean), float(scale**2 * var)


def momentum_readout(state: GaussianState, beam):
    """Beam momentum p = (1 / w0 sqrt(N)) X- of the first-order mode."""
    N = state.photon_scale
    scale = 1.0 / (state.basis.waist * np.sqrt(N))
    mean, var = quadrature_stats(state, beam, 1, np.pi / 2)
    return float(scale * mean), float(scale**2 * var)


def split_detect(state: GaussianState, beam, quadrature="plus") -> DetectionRecord:
    """Split-detector difference photocurrent, as a flipped-mode homodyne.

    quadrature "plus" reads X+ of the flipped mode; "minus" applies the cavity
    pi/2 shift internally and reads the orthogonal quadrature.  The mean field
    (v0 slot) acts as the phase reference, so snl = N.
    """
    if not state.basis.is_flipped():
        raise ValueError("split detection requires a state in the flipped basis")
    if quadrature not in ("plus", "minus"):
        raise ValueError(f"quadrature must be 'plus' or 'minus', got {quadrature!r}")
    if quadrature == "minus":
        state = apply_phase_shift(state, beam, 1, np.pi / 2)
    N = state.photon_scale
    mean, var = quadrature_stats(state, beam, 1, 0.0)
    return DetectionRecord(mean_signal=np.sqrt(N) * mean, variance=N * var, snl=N)


@dataclass(frozen=True)
class SampleStats:
    shots: int
    seed: int
    sample_mean: float
    sample_variance: float
    se_mean: float
    se_variance: float


def monte_carlo_sample(record: DetectionRecord, shots, seed) -> SampleStats:
    """Draw i.i.d. Gaussian photocurrent samples matching the record.

    Deterministic: a fixed seed reproduces the sample stream bit-for-bit.
    """
    if shots < 2:
        raise ValueError("monte_carlo_sample needs shots >= 2")
    rng = np.random.default_rng(seed)
    samples = record.mean_signal + np.sqrt(record.variance) * rng.standard_normal(shots)
    s2 = float(np.var(samples, ddof=1))
    return SampleStats(shots=shots, seed=seed,
                       sample_mean=float(np.mean(samples)),
                       sample_variance=s2,
                       se_mean=float(np.sqrt(s2 / shots)),
                       se_variance=float(s2 * np.sqrt(2.0 / (shots - 1))))
