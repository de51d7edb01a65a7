"""Quantum-correlation budgets for three-flavor neutrino oscillations.

Plane-wave (pure) and wave-packet (mixed) flavor states, the additive
complementarity budgets with auditable closure errors, residual and genuine
tripartite quantifiers, and a scan/audit CLI.
"""

from .ccr import (CcrBudget, budget_mixed_bipartite, budget_mixed_residual,
                  budget_mixed_single, budget_pure_hs_single,
                  budget_pure_residual, budget_pure_vn_bipartite,
                  budget_pure_vn_single, genuine_tripartite_discord,
                  genuine_tripartite_entanglement, mixed_budget_suite,
                  pure_budget_suite, residual_discord, residual_entropy)
from .params import (FLAVORS, MixingMatrix, OscillationParams, build_pmns,
                     default_params, load_config, params_from_dict)
from .planewave import (FlavorAmplitudes, evolve_amplitudes,
                        pure_density_matrix, transition_probabilities)
from .qinfo import (ConvergenceError, DensityMatrix, Spectrum, coherence_hs,
                    conditional_ignorance, discord_sum, eigenvalues_hermitian,
                    jacobi_eigh, mutual_information,
                    nonlocal_coherence_hs_bipartite,
                    nonlocal_coherence_hs_tripartite, partial_trace,
                    permute_qubits, predictability_hs, predictability_vn,
                    relative_entropy_coherence, vn_entropy, vn_entropy_diag)
from .scan import (AuditReport, ScanError, ScanRequest, ScanRow, audit,
                   available_quantities, emit_csv, emit_plot, format_csv,
                   run_scan)
from .wavepacket import (FlavorCoefficients, WavePacketConfig,
                         decoherence_factor, default_wavepacket_config,
                         flavor_coefficients, mixed_density_matrix,
                         wavepacket_from_dict, wp_transition_probability)

__version__ = "0.1.0"
