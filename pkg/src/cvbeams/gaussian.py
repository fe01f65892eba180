"""Gaussian quantum states over a transverse mode basis and symplectic ops.

State = quadrature mean vector + covariance matrix.  Quadrature ordering is
interleaved and beam-major: (X+_0, X-_0, X+_1, X-_1, ...) for beam 0, then
the same for beam 1.  Vacuum variance is normalized to 1 ([X+, X-] = 2i),
so "squeezed" means variance < 1.  The photon number N enters only as a
readout scale factor; noise matrices are N-independent (linearized model).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .modes import ModeBasis

_MAX_SQUEEZING = 20.0


def symplectic_form(n_modes):
    """Block-diagonal form pairing (X+, X-) per mode."""
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), J)


def symplectic_eigenvalues(cov):
    """Moduli of the eigenvalue pairs of Omega @ cov (each value repeats twice)."""
    n = cov.shape[0] // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ cov)
    return np.sort(np.abs(ev))[::2]


@dataclass(frozen=True)
class SymplecticTransform:
    matrix: np.ndarray
    label: str = ""

    def is_symplectic(self, tol=1e-10):
        n = self.matrix.shape[0] // 2
        Om = symplectic_form(n)
        return np.max(np.abs(self.matrix @ Om @ self.matrix.T - Om)) < tol

    def __matmul__(self, other):
        return SymplecticTransform(self.matrix @ other.matrix,
                                   label=f"{self.label}*{other.label}")


@dataclass(frozen=True)
class GaussianState:
    """Immutable mean vector + covariance matrix over all modes of B beams."""

    beams: int
    basis: ModeBasis
    mean: np.ndarray
    cov: np.ndarray
    photon_scale: float

    def __post_init__(self):
        if self.beams not in (1, 2):
            raise ValueError(f"beams must be 1 or 2, got {self.beams}")
        if self.photon_scale <= 0:
            raise ValueError("photon_scale must be positive")
        dim = 2 * self.beams * self.basis.truncation
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.shape != (dim,) or cov.shape != (dim, dim):
            raise ValueError("mean/cov shape inconsistent with beams and basis")
        if np.max(np.abs(cov - cov.T)) > 1e-10:
            raise ValueError("covariance matrix must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @property
    def modes_per_beam(self):
        return self.basis.truncation

    @property
    def dim(self):
        return 2 * self.beams * self.modes_per_beam

    def index(self, beam, mode, quad):
        """Flat index of quadrature quad (0 = X+, 1 = X-) of (beam, mode)."""
        if not 0 <= beam < self.beams:
            raise ValueError(f"beam index {beam} out of range")
        if not 0 <= mode < self.modes_per_beam:
            raise ValueError(f"mode index {mode} out of range")
        return 2 * (beam * self.modes_per_beam + mode) + quad

    def is_physical(self, tol=1e-9):
        return bool(np.min(symplectic_eigenvalues(self.cov)) >= 1.0 - tol)

    def transformed(self, S: SymplecticTransform):
        if not S.is_symplectic():
            raise ValueError(f"transform {S.label!r} is not symplectic")
        return replace(self, mean=S.matrix @ self.mean,
                       cov=S.matrix @ self.cov @ S.matrix.T)


def vacuum_state(beams, basis: ModeBasis, photon_scale) -> GaussianState:
    dim = 2 * beams * basis.truncation
    return GaussianState(beams=beams, basis=basis, mean=np.zeros(dim),
                         cov=np.eye(dim), photon_scale=photon_scale)


def set_coherent(state: GaussianState, beam, mode, amplitude) -> GaussianState:
    """Set the coherent amplitude alpha of one mode: mean (X+, X-) = (2 Re, 2 Im)."""
    mean = state.mean.copy()
    mean[state.index(beam, mode, 0)] = 2.0 * np.real(amplitude)
    mean[state.index(beam, mode, 1)] = 2.0 * np.imag(amplitude)
    return replace(state, mean=mean)


def _embed(state, beam, mode, block):
    """Lift a per-mode 2x2 matrix to the full quadrature space."""
    S = np.eye(state.dim)
    i = state.index(beam, mode, 0)
    S[i:i + 2, i:i + 2] = block
    return S


def _rotation(phi):
    # phi = pi/2 maps X+ -> X- readout
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]])


def apply_squeezer(state: GaussianState, beam, mode, r, angle=0.0) -> GaussianState:
    """Squeeze one mode: at angle 0, Var(X+) -> e^(-2r) Var(X+) on vacuum."""
    if r < 0:
        raise ValueError("squeezing parameter r must be >= 0")
    if r > _MAX_SQUEEZING:
        raise ValueError(f"squeezing r = {r} exceeds supported maximum {_MAX_SQUEEZING}")
    block = _rotation(-angle) @ np.diag([np.exp(-r), np.exp(r)]) @ _rotation(angle)
    S = SymplecticTransform(_embed(state, beam, mode, block), label=f"squeeze(r={r})")
    return state.transformed(S)


def apply_phase_shift(state: GaussianState, beam, mode, phi) -> GaussianState:
    """Rotate the (X+, X-) pair of one mode by phi."""
    S = SymplecticTransform(_embed(state, beam, mode, _rotation(phi)),
                            label=f"phase({phi})")
    return state.transformed(S)


def beam_splitter_5050(state: GaussianState) -> SymplecticTransform:
    """50:50 beam splitter pairing same-index modes of the two beams:
    out3 = (in1 + in2)/sqrt(2), out4 = (in1 - in2)/sqrt(2)."""
    if state.beams != 2:
        raise ValueError("50:50 beam splitter requires a two-beam state")
    half = 2 * state.modes_per_beam
    I = np.eye(half)
    S = np.block([[I, I], [I, -I]]) / np.sqrt(2.0)
    return SymplecticTransform(S, label="bs5050")


def apply_beam_splitter_5050(state: GaussianState) -> GaussianState:
    return state.transformed(beam_splitter_5050(state))


def mode_basis_symplectic(state: GaussianState, U, beam=None) -> SymplecticTransform:
    """Real symplectic image of a complex M x M mode-space unitary U.

    Applied to every beam unless a beam index is given.
    """
    U = np.asarray(U, dtype=complex)
    M = state.modes_per_beam
    if U.shape != (M, M):
        raise ValueError("unitary dimension must match modes per beam")
    if np.max(np.abs(U @ U.conj().T - np.eye(M))) > 1e-10:
        raise ValueError("mode-basis change requires a unitary matrix")
    R = np.zeros((2 * M, 2 * M))
    R[0::2, 0::2] = U.real
    R[0::2, 1::2] = -U.imag
    R[1::2, 0::2] = U.imag
    R[1::2, 1::2] = U.real
    beams = range(state.beams) if beam is None else [beam]
    S = np.eye(state.dim)
    for b in beams:
        i = state.index(b, 0, 0)
        S[i:i + 2 * M, i:i + 2 * M] = R
    return SymplecticTransform(S, label="basis_change")


def change_mode_basis(state: GaussianState, U, beam=None) -> GaussianState:
    return state.transformed(mode_basis_symplectic(state, U, beam=beam))


def quadrature_stats(state: GaussianState, beam, mode, phi=0.0):
    """Mean and variance of X_phi = X+ cos(phi) + X- sin(phi)."""
    v = np.zeros(state.dim)
    v[state.index(beam, mode, 0)] = np.cos(phi)
    v[state.index(beam, mode, 1)] = np.sin(phi)
    return float(v @ state.mean), float(v @ state.cov @ v)


def joint_variance(state: GaussianState, terms):
    """Variance of sum_k weight_k X_phi_k over (beam, mode, phi, weight) terms."""
    if not terms:
        raise ValueError("joint_variance needs at least one term")
    v = np.zeros(state.dim)
    for beam, mode, phi, weight in terms:
        v[state.index(beam, mode, 0)] += weight * np.cos(phi)
        v[state.index(beam, mode, 1)] += weight * np.sin(phi)
    return float(v @ state.cov @ v)


def joint_covariance(state: GaussianState, terms_a, terms_b):
    """Covariance of two weighted quadrature sums, by polarization."""
    both = list(terms_a) + list(terms_b)
    flipped_b = [(b, m, phi, -w) for b, m, phi, w in terms_b]
    return 0.25 * (joint_variance(state, both)
                   - joint_variance(state, list(terms_a) + flipped_b))
