"""cvbeams: continuous-variable spatial entanglement of bright optical beams.

Exact Gaussian-state (mean + covariance) propagation over a truncated
transverse-mode basis, with homodyne / split detection models, inseparability
diagnostics, and a config-driven scenario runner.
"""

__version__ = "0.1.0"

from .modes import (ModalCoefficients, ModeBasis, ModeProfile,
                    decompose_displaced_tem00, decompose_tilted_tem00,
                    farfield, flipped_mode_coeffs, gouy_factors, hg_eval,
                    overlap)
from .gaussian import (GaussianState, SymplecticTransform,
                       apply_beam_splitter_5050, apply_phase_shift,
                       apply_squeezer, change_mode_basis, joint_variance,
                       quadrature_stats, set_coherent, symplectic_eigenvalues,
                       vacuum_state)
from .detection import (DetectionRecord, LocalOscillator, homodyne,
                        momentum_readout, monte_carlo_sample,
                        position_readout, split_detect)
from .criteria import (InseparabilityResult, correlation_signatures,
                       heisenberg_product, inseparability_split,
                       inseparability_xp, xp_commutator_norm)
from .experiments import (ConfigError, ExperimentConfig, ExperimentReport,
                          emit_report, parse_config, run_scenario,
                          run_split_scenario, run_xp_scenario)
