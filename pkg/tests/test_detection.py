"""Detector models: homodyne gains, readout scalings, split detection,
Monte Carlo statistics."""

import numpy as np
import pytest

from cvbeams.detection import (DetectionRecord, LocalOscillator, homodyne,
                               momentum_readout, monte_carlo_sample,
                               position_readout, split_detect)
from cvbeams.gaussian import (apply_phase_shift, apply_squeezer, set_coherent,
                              vacuum_state)
from cvbeams.modes import (ModalCoefficients, ModeBasis,
                           decompose_displaced_tem00, decompose_tilted_tem00)

W0 = 1.0
N = 1e6
N_LO = 1e8


@pytest.fixture(scope="module")
def basis():
    return ModeBasis.hermite_gauss(W0, 8)


@pytest.fixture(scope="module")
def flip_basis():
    return ModeBasis.flipped(W0, 4)


def mode_lo(basis, mode, phase=0.0, photons=N_LO):
    coeffs = np.zeros(basis.truncation, dtype=complex)
    coeffs[mode] = 1.0
    return LocalOscillator(profile=ModalCoefficients(basis=basis, coeffs=coeffs),
                           phase=phase, photons=photons)


def coherent_beam(basis, coeffs=None):
    s = vacuum_state(1, basis, N)
    if coeffs is None:
        return set_coherent(s, 0, 0, np.sqrt(N))
    for n in range(basis.truncation):
        s = set_coherent(s, 0, n, np.sqrt(N) * coeffs[n])
    return s


class TestHomodyne:
    def test_displacement_gain(self, basis):
        d = 1e-3 * W0
        s = coherent_beam(basis, decompose_displaced_tem00(d, basis).coeffs)
        rec = homodyne(s, 0, mode_lo(basis, 1))
        assert rec.mean_signal == pytest.approx(2 * np.sqrt(N * N_LO) * d / W0,
                                                rel=1e-4)

    def test_tilt_gain(self, basis):
        p = 1e-3 / W0
        s = coherent_beam(basis, decompose_tilted_tem00(p, basis).coeffs)
        rec = homodyne(s, 0, mode_lo(basis, 1, phase=np.pi / 2))
        assert rec.mean_signal == pytest.approx(W0 * np.sqrt(N * N_LO) * p, rel=1e-4)

    def test_vacuum_is_shot_noise_limited(self, basis):
        rec = homodyne(coherent_beam(basis), 0, mode_lo(basis, 1))
        assert rec.normalized_variance == pytest.approx(1.0, abs=1e-10)
        assert rec.snl == N_LO

    def test_lo_orthogonal_to_squeezing_sees_vacuum(self, basis):
        s = apply_squeezer(coherent_beam(basis), 0, 1, 1.5)
        rec = homodyne(s, 0, mode_lo(basis, 2))
        assert rec.normalized_variance == pytest.approx(1.0, abs=1e-10)

    def test_gain_linearity(self, basis):
        slope = 2 * np.sqrt(N * N_LO) / W0
        for d in (1e-4, 1e-3, 1e-2):
            s = coherent_beam(basis, decompose_displaced_tem00(d * W0, basis).coeffs)
            rec = homodyne(s, 0, mode_lo(basis, 1))
            assert rec.mean_signal == pytest.approx(slope * d * W0, rel=1e-4)

    def test_zero_norm_lo_rejected(self, basis):
        lo = LocalOscillator(profile=ModalCoefficients(
            basis=basis, coeffs=np.zeros(8, dtype=complex), residual_norm=0.0),
            photons=N_LO)
        with pytest.raises(ValueError):
            homodyne(coherent_beam(basis), 0, lo)

    def test_out_of_basis_lo_rejected(self, basis):
        coeffs = np.zeros(8, dtype=complex)
        coeffs[1] = 0.9
        lo = LocalOscillator(profile=ModalCoefficients(
            basis=basis, coeffs=coeffs, residual_norm=np.sqrt(1 - 0.81)),
            photons=N_LO)
        with pytest.raises(ValueError):
            homodyne(coherent_beam(basis), 0, lo)

    def test_basis_mismatch_rejected(self, basis):
        other = ModeBasis.hermite_gauss(2.0, 8)
        with pytest.raises(ValueError):
            homodyne(coherent_beam(basis), 0, mode_lo(other, 1))

    def test_weak_lo_warns(self, basis):
        with pytest.warns(UserWarning, match="local oscillator regime"):
            homodyne(coherent_beam(basis), 0, mode_lo(basis, 1, photons=N))


class TestReadouts:
    def test_coherent_position_variance(self, basis):
        _, var = position_readout(coherent_beam(basis), 0)
        assert var == pytest.approx(W0**2 / (4 * N), rel=1e-12)

    def test_squeezed_position_variance(self, basis):
        r = 0.9
        s = apply_squeezer(coherent_beam(basis), 0, 1, r)
        _, var = position_readout(s, 0)
        assert var == pytest.approx(W0**2 / (4 * N) * np.exp(-2 * r), rel=1e-12)

    def test_displaced_position_mean(self, basis):
        d = 0.1 * W0
        s = coherent_beam(basis, decompose_displaced_tem00(d, basis).coeffs)
        mean, _ = position_readout(s, 0)
        # linearized readout picks out the mode-1 component: d exp(-d^2/2w0^2)
        assert mean == pytest.approx(d * np.exp(-d**2 / (2 * W0**2)), rel=1e-10)

    def test_coherent_momentum_variance(self, basis):
        _, var = momentum_readout(coherent_beam(basis), 0)
        assert var == pytest.approx(1.0 / (W0**2 * N), rel=1e-12)

    def test_momentum_squeezed_variance(self, basis):
        r = 0.9
        s = apply_squeezer(coherent_beam(basis), 0, 1, r, angle=np.pi / 2)
        _, var = momentum_readout(s, 0)
        assert var == pytest.approx(np.exp(-2 * r) / (W0**2 * N), rel=1e-12)


class TestSplitDetect:
    def test_coherent_beam_at_qnl(self, flip_basis):
        s = set_coherent(vacuum_state(1, flip_basis, N), 0, 0, np.sqrt(N))
        rec = split_detect(s, 0, "plus")
        assert rec.normalized_variance == pytest.approx(1.0, abs=1e-12)
        assert rec.snl == N

    def test_squeezed_flipped_mode(self, flip_basis):
        r = 0.5
        s = set_coherent(vacuum_state(1, flip_basis, N), 0, 0, np.sqrt(N))
        s = apply_squeezer(s, 0, 1, r)
        assert split_detect(s, 0, "plus").normalized_variance == pytest.approx(
            np.exp(-2 * r), abs=1e-12)
        assert split_detect(s, 0, "minus").normalized_variance == pytest.approx(
            np.exp(2 * r), abs=1e-9)

    def test_rotation_consistency(self, flip_basis):
        # plus readout on a pi/2-rotated state equals minus readout on the original
        s = apply_squeezer(vacuum_state(1, flip_basis, N), 0, 1, 0.8, angle=0.3)
        rotated = apply_phase_shift(s, 0, 1, np.pi / 2)
        assert split_detect(rotated, 0, "plus").variance == pytest.approx(
            split_detect(s, 0, "minus").variance, rel=1e-12)

    def test_hg_basis_rejected(self, flip_basis):
        hg = ModeBasis.hermite_gauss(W0, 4)
        with pytest.raises(ValueError):
            split_detect(vacuum_state(1, hg, N), 0, "plus")

    def test_bad_quadrature_rejected(self, flip_basis):
        with pytest.raises(ValueError):
            split_detect(vacuum_state(1, flip_basis, N), 0, "sideways")


class TestMonteCarlo:
    def test_variance_estimate(self):
        rec = DetectionRecord(mean_signal=0.0, variance=1.0, snl=1.0)
        stats = monte_carlo_sample(rec, 100_000, seed=1234)
        assert abs(stats.sample_variance - 1.0) < 0.03

    def test_determinism(self):
        rec = DetectionRecord(mean_signal=2.0, variance=3.0, snl=1.0)
        a = monte_carlo_sample(rec, 5000, seed=99)
        b = monte_carlo_sample(rec, 5000, seed=99)
        assert a == b

    def test_zero_variance(self):
        rec = DetectionRecord(mean_signal=5.0, variance=0.0, snl=1.0)
        stats = monte_carlo_sample(rec, 100, seed=0)
        assert stats.sample_mean == 5.0
        assert stats.sample_variance == 0.0

    def test_too_few_shots(self):
        rec = DetectionRecord(mean_signal=0.0, variance=1.0, snl=1.0)
        with pytest.raises(ValueError):
            monte_carlo_sample(rec, 1, seed=0)
