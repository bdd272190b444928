"""entdyn: entanglement decay of bipartite qudits under local decoherence.

Lindblad propagation, a layered stack of concurrence estimators (exact
two-qubit, pure-state, lower bounds, quasi-pure, convex-roof upper bound),
closed-form analytic oracles, and a scenario CLI with CSV/JSON/PNG export.
"""

from .analytic import BellKind, ThermalParams
from .concurrence import (ChiIndex, ConcurrenceEstimate, TMatrixSet, ZVector,
                          build_T, lower_bound_fixed_z, optimize_lower_bound,
                          pure_concurrence, quasipure_concurrence, quasipure_T,
                          two_qubit_block, upper_convex_roof, wootters)
from .hilbert import (DensityMatrix, HilbertDims, PureState,
                      SpectralDecomposition, bell_state, copy_space_map,
                      flat_index, spectral, two_term_state)
from .lindblad import (EnvironmentKind, EnvironmentModel, Generator,
                       IntegratorConfig, Trajectory, apply_generator,
                       evolve_trajectory, local_jump_operators, propagate)
from .scenarios import (OracleSpec, Scenario, StateSpec, TimeSeries,
                        fit_exponent, run_scenario, scenario_fig1,
                        scenario_fig2)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
