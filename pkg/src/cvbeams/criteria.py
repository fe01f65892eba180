"""Entanglement and uncertainty diagnostics.

The inseparability value I = <(A3+A4)^2> <(B3-B4)^2> / |[A, B]|^2 certifies
entanglement of a Gaussian beam pair when I < 1.  Both quadrature pairings
(sum/diff and diff/sum) are evaluated and the smaller product is reported,
since either sign choice is admissible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detection import momentum_readout, position_readout
from .gaussian import GaussianState, joint_covariance, joint_variance, quadrature_stats

_SYMMETRY_TOL = 1e-6
_BOUNDARY_TOL = 1e-12   # separability boundary; absorbs float noise at I = 1


@dataclass(frozen=True)
class InseparabilityResult:
    sum_variance: float
    diff_variance: float
    commutator_norm_sq: float
    value: float
    entangled: bool
    pairing: str = "sum_diff"


def xp_commutator_norm(N):
    """|[x, p]| = 1/N for an N-photon beam."""
    if N <= 0:
        raise ValueError("photon number N must be positive")
    return 1.0 / N


def heisenberg_product(state: GaussianState, beam):
    """(product, normalized) of the position and momentum variances.

    The floor set by [x, p] = i/N is Var(x) Var(p) >= 1/(4 N^2); normalized
    divides by that floor, so minimum-uncertainty beams give exactly 1.
    """
    _, x_var = position_readout(state, beam)
    _, p_var = momentum_readout(state, beam)
    product = x_var * p_var
    N = state.photon_scale
    return product, product * 4.0 * N**2


def _require_interchangeable(pairs, what):
    # the product-form criterion assumes the two output beams have
    # symmetric fluctuations; assert instead of silently assuming
    for va, vb in pairs:
        if abs(va - vb) > _SYMMETRY_TOL * max(abs(va), abs(vb), 1e-30):
            raise ValueError(f"{what}: output beams are not interchangeable "
                             f"(variances {va} vs {vb})")


def inseparability_xp(joint_state: GaussianState, N=None, w0=None) -> InseparabilityResult:
    """Position-momentum inseparability of a two-beam post-beam-splitter state.

    Builds x_j = (w0/2 sqrt(N)) X+_j1 and p_j = (1/w0 sqrt(N)) X-_j1 from the
    joint covariance, evaluates both Duan pairings, and normalizes by the
    squared commutator (1/N)^2.
    """
    if joint_state.beams != 2:
        raise ValueError("x-p inseparability requires a two-beam joint state")
    if N is None:
        N = joint_state.photon_scale
    if w0 is None:
        w0 = joint_state.basis.waist
    sx = w0 / (2.0 * np.sqrt(N))
    sp = 1.0 / (w0 * np.sqrt(N))
    x3 = (0, 1, 0.0, sx)
    x4 = (1, 1, 0.0, sx)
    p3 = (0, 1, np.pi / 2, sp)
    p4 = (1, 1, np.pi / 2, sp)
    neg = lambda t: (t[0], t[1], t[2], -t[3])

    _require_interchangeable([
        (joint_variance(joint_state, [x3]), joint_variance(joint_state, [x4])),
        (joint_variance(joint_state, [p3]), joint_variance(joint_state, [p4])),
    ], "x-p inseparability")

    comm_sq = xp_commutator_norm(N) ** 2
    results = []
    for pairing, a_terms, b_terms in [
        ("sum_diff", [x3, x4], [p3, neg(p4)]),
        ("diff_sum", [x3, neg(x4)], [p3, p4]),
    ]:
        sv = joint_variance(joint_state, a_terms)
        dv = joint_variance(joint_state, b_terms)
        results.append((sv * dv / comm_sq, sv, dv, pairing))
    value, sv, dv, pairing = min(results, key=lambda t: t[0])
    return InseparabilityResult(sum_variance=sv, diff_variance=dv,
                                commutator_norm_sq=comm_sq, value=value,
                                entangled=bool(value < 1.0 - _BOUNDARY_TOL),
                                pairing=pairing)


def inseparability_split(joint_state: GaussianState, N=None) -> InseparabilityResult:
    """Split-detection inseparability of two beam-splitter outputs.

    The measured combinations refer the two split-detector photocurrents back
    to the input flipped modes c, d through the 50:50 relation: the sum of
    the amplitude readouts is sqrt(N)(X+_c + X+_d) = sqrt(2N) X+ of output 3,
    and the difference of the phase readouts is sqrt(N)(X+_d - X+_c)
    = -sqrt(2N) X+ of output 4.  Normalization is the photocurrent
    commutator scale (2N)^2, giving I = (V_c + V_d)^2 / 4.
    """
    if joint_state.beams != 2:
        raise ValueError("split inseparability requires a two-beam joint state")
    if not joint_state.basis.is_flipped():
        raise ValueError("split inseparability requires the flipped basis")
    if N is None:
        N = joint_state.photon_scale
    if N <= 0:
        raise ValueError("photon number N must be positive")

    _, v3 = quadrature_stats(joint_state, 0, 1, 0.0)
    _, v4 = quadrature_stats(joint_state, 1, 1, 0.0)
    _require_interchangeable([(v3, v4)], "split inseparability")

    sum_var = 2.0 * N * v3
    diff_var = 2.0 * N * v4
    comm_sq = (2.0 * N) ** 2
    value = sum_var * diff_var / comm_sq
    return InseparabilityResult(sum_variance=sum_var, diff_variance=diff_var,
                                commutator_norm_sq=comm_sq, value=value,
                                entangled=bool(value < 1.0 - _BOUNDARY_TOL))


def correlation_signatures(joint_state: GaussianState):
    """Normalized position and momentum correlations between beams 3 and 4."""
    if joint_state.beams != 2:
        raise ValueError("correlation signatures require a two-beam joint state")
    corr = []
    for phi in (0.0, np.pi / 2):
        a = [(0, 1, phi, 1.0)]
        b = [(1, 1, phi, 1.0)]
        va = joint_variance(joint_state, a)
        vb = joint_variance(joint_state, b)
        if va <= 0 or vb <= 0:
            raise ValueError("degenerate quadrature variance in correlation")
        corr.append(float(joint_covariance(joint_state, a, b) / np.sqrt(va * vb)))
    return corr[0], corr[1]
