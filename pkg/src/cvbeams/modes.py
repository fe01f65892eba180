"""Hermite-Gauss transverse mode math: evaluation, overlaps, decompositions.

Conventions: the ground mode is u0(x) = (2/(pi w0^2))^(1/4) exp(-x^2/w0^2),
so the first-order coefficient of a beam displaced by d is exactly d/w0 and
that of a beam tilted by transverse wavenumber p is exactly i*w0*p/2.  All
modes of one basis share the waist w0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

_HG_QUAD_NODES = 64      # Gauss-Hermite rule for smooth overlaps
_HALF_QUAD_NODES = 120   # Gauss-Legendre nodes per half-line (flipped-mode overlaps)
_HALF_RANGE_WAISTS = 9.0


def hg_eval(order, x, waist):
    """Evaluate the 1D Hermite-Gauss mode u_n(x).

    Uses the three-term recurrence on normalized Hermite functions, which is
    stable for all orders of interest (n <= 32 comfortably).
    """
    if order < 0:
        raise ValueError(f"mode order must be >= 0, got {order}")
    if waist <= 0:
        raise ValueError(f"waist must be positive, got {waist}")
    x = np.asarray(x, dtype=float)
    t = np.sqrt(2.0) * x / waist
    # h_n(t): unit-L2 Hermite functions, h0 = pi^(-1/4) exp(-t^2/2)
    h_prev = np.zeros_like(t)
    h = np.pi ** -0.25 * np.exp(-0.5 * t * t)
    for n in range(order):
        h, h_prev = (np.sqrt(2.0 / (n + 1)) * t * h
                     - np.sqrt(n / (n + 1)) * h_prev), h
    out = (2.0 / waist**2) ** 0.25 * h
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ModeProfile:
    """One transverse mode shape: Hermite-Gauss, flipped, or sampled on a grid."""

    kind: str                    # "hg" | "flipped" | "sampled"
    waist: float
    order: int = 0               # hg only
    grid: np.ndarray | None = None       # sampled only
    values: np.ndarray | None = None     # sampled only
    weights: np.ndarray | None = None    # quadrature weights matching grid

    def __post_init__(self):
        if self.waist <= 0:
            raise ValueError(f"waist must be positive, got {self.waist}")
        if self.kind == "hg" and self.order < 0:
            raise ValueError(f"mode order must be >= 0, got {self.order}")
        if self.kind == "sampled" and (self.grid is None or self.values is None):
            raise ValueError("sampled profile needs grid and values")
        if self.kind not in ("hg", "flipped", "sampled"):
            raise ValueError(f"unknown profile kind {self.kind!r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "hg":
            return hg_eval(self.order, x, self.waist)
        if self.kind == "flipped":
            return np.sign(x) * hg_eval(0, x, self.waist)
        re = np.interp(x, self.grid, self.values.real)
        im = np.interp(x, self.grid, self.values.imag)
        return re + 1j * im


def hermite_gauss(order, waist):
    return ModeProfile(kind="hg", waist=waist, order=order)


def flipped(waist):
    """The split-detection noise mode v1(x) = sign(x) * u0(x)."""
    return ModeProfile(kind="flipped", waist=waist)


def _gh_rule(waist):
    """Nodes x_i and total weights W_i so that integral f dx ~ sum W_i f(x_i)
    for integrands of the form (polynomial) * exp(-2 x^2 / w^2)."""
    t, w = np.polynomial.hermite.hermgauss(_HG_QUAD_NODES)
    x = waist * t / np.sqrt(2.0)
    W = w * np.exp(t * t) * waist / np.sqrt(2.0)
    return x, W


def _halfline_rule(waist):
    """Composite Gauss-Legendre rule split at x=0; exact for integrands that
    are smooth on each half-line (handles the flipped mode's sign jump)."""
    t, w = np.polynomial.legendre.leggauss(_HALF_QUAD_NODES)
    L = _HALF_RANGE_WAISTS * waist
    xr = 0.5 * L * (t + 1.0)
    wr = 0.5 * L * w
    x = np.concatenate([-xr[::-1], xr])
    W = np.concatenate([wr[::-1], wr])
    return x, W


def overlap(f: ModeProfile, g: ModeProfile):
    """Inner product <f|g> = integral f*(x) g(x) dx."""
    if abs(f.waist - g.waist) > 1e-12 * max(f.waist, g.waist):
        raise ValueError("overlap requires profiles sharing the same waist")
    if f.kind == "hg" and g.kind == "hg":
        x, W = _gh_rule(f.waist)
    elif f.kind == "sampled" and f.weights is not None:
        x, W = f.grid, f.weights
    elif g.kind == "sampled" and g.weights is not None:
        x, W = g.grid, g.weights
    else:
        x, W = _halfline_rule(f.waist)
    val = np.sum(W * np.conj(f(x)) * g(x))
    return complex(val)


@dataclass(frozen=True)
class ModeBasis:
    """Ordered orthonormal truncated set of transverse modes at one waist."""

    waist: float
    profiles: tuple

    def __post_init__(self):
        if self.waist <= 0:
            raise ValueError(f"waist must be positive, got {self.waist}")
        if len(self.profiles) < 2:
            raise ValueError("basis truncation must be >= 2 modes")

    @property
    def truncation(self):
        return len(self.profiles)

    @classmethod
    def hermite_gauss(cls, waist, truncation):
        if truncation < 2:
            raise ValueError("basis truncation must be >= 2 modes")
        return cls(waist=waist,
                   profiles=tuple(hermite_gauss(n, waist) for n in range(truncation)))

    @classmethod
    def flipped(cls, waist, truncation):
        """Basis {v0 = u0, v1 = flipped mode, ...} completed by orthonormalizing
        low-order HG modes against the first two on a split quadrature grid."""
        if truncation < 2:
            raise ValueError("basis truncation must be >= 2 modes")
        x, W = _halfline_rule(waist)
        raw = [hg_eval(0, x, waist), np.sign(x) * hg_eval(0, x, waist)]
        raw += [hg_eval(n, x, waist) for n in range(1, truncation - 1)]
        ortho = []
        for v in raw:
            v = np.array(v, dtype=float)
            for u in ortho:
                v = v - np.sum(W * u * v) * u
            v = v / np.sqrt(np.sum(W * v * v))
            ortho.append(v)
        profiles = [hermite_gauss(0, waist), flipped(waist)]
        for v in ortho[2:]:
            profiles.append(ModeProfile(kind="sampled", waist=waist,
                                        grid=x, values=v.astype(complex), weights=W))
        return cls(waist=waist, profiles=tuple(profiles))

    def is_flipped(self):
        return self.profiles[1].kind == "flipped"

    def gram(self):
        M = self.truncation
        G = np.empty((M, M), dtype=complex)
        for i in range(M):
            for j in range(M):
                G[i, j] = overlap(self.profiles[i], self.profiles[j])
        return G

    def compatible_with(self, other):
        return (abs(self.waist - other.waist) < 1e-12 * self.waist
                and self.truncation == other.truncation
                and all(p.kind == q.kind and p.order == q.order
                        for p, q in zip(self.profiles, other.profiles)))


@dataclass(frozen=True)
class ModalCoefficients:
    """Coefficients of a profile in a ModeBasis plus the out-of-basis weight."""

    basis: ModeBasis
    coeffs: np.ndarray
    residual_norm: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        if len(self.coeffs) != self.basis.truncation:
            raise ValueError("coefficient count must match basis truncation")
        if not 0.0 <= self.residual_norm <= 1.0:
            raise ValueError(f"residual_norm must lie in [0, 1], got {self.residual_norm}")

    @property
    def norm_sq(self):
        return float(np.sum(np.abs(self.coeffs) ** 2))


def _residual(coeffs):
    return float(np.sqrt(max(0.0, 1.0 - np.sum(np.abs(coeffs) ** 2))))


def decompose_displaced_tem00(d, basis: ModeBasis) -> ModalCoefficients:
    """HG coefficients of the exactly displaced ground mode u0(x - d)."""
    if not all(p.kind == "hg" and p.order == n for n, p in enumerate(basis.profiles)):
        raise ValueError("displaced-beam decomposition requires an HG basis")
    w0 = basis.waist
    x, W = _gh_rule(w0)
    shifted = hg_eval(0, x - d, w0)
    coeffs = np.array([np.sum(W * hg_eval(n, x, w0) * shifted)
                       for n in range(basis.truncation)], dtype=complex)
    return ModalCoefficients(basis=basis, coeffs=coeffs, residual_norm=_residual(coeffs))


def decompose_tilted_tem00(p, basis: ModeBasis) -> ModalCoefficients:
    """HG coefficients of exp(i p x) u0(x), the small-angle tilted ground mode."""
    if not all(pr.kind == "hg" and pr.order == n for n, pr in enumerate(basis.profiles)):
        raise ValueError("tilted-beam decomposition requires an HG basis")
    w0 = basis.waist
    x, W = _gh_rule(w0)
    tilted = np.exp(1j * p * x) * hg_eval(0, x, w0)
    coeffs = np.array([np.sum(W * hg_eval(n, x, w0) * tilted)
                       for n in range(basis.truncation)], dtype=complex)
    return ModalCoefficients(basis=basis, coeffs=coeffs, residual_norm=_residual(coeffs))


def flipped_mode_coeffs(basis: ModeBasis) -> ModalCoefficients:
    """HG-basis coefficients of v1(x) = sign(x) u0(x).

    Even orders vanish by parity and are set to exactly zero; odd orders are
    computed by adaptive half-range quadrature (the sign jump defeats plain
    Gauss-Hermite).
    """
    if not all(p.kind == "hg" and p.order == n for n, p in enumerate(basis.profiles)):
        raise ValueError("flipped-mode decomposition requires an HG basis")
    w0 = basis.waist
    coeffs = np.zeros(basis.truncation, dtype=complex)
    for n in range(1, basis.truncation, 2):
        val, _ = quad(lambda x: hg_eval(n, x, w0) * hg_eval(0, x, w0),
                      0.0, np.inf, epsabs=1e-12, epsrel=1e-12)
        coeffs[n] = 2.0 * val
    return ModalCoefficients(basis=basis, coeffs=coeffs, residual_norm=_residual(coeffs))


def gouy_factors(truncation):
    """Per-mode far-field phase factors i^n."""
    return 1j ** np.arange(truncation)


def farfield(coeffs: ModalCoefficients) -> ModalCoefficients:
    """Propagate modal coefficients to the far field (Fourier plane).

    Each mode picks up its Gouy factor i^n; unitary, so the residual weight
    is unchanged.
    """
    out = coeffs.coeffs * gouy_factors(coeffs.basis.truncation)
    return ModalCoefficients(basis=coeffs.basis, coeffs=out,
                             residual_norm=coeffs.residual_norm)
