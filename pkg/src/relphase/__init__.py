"""Geometric phases of Everett relative states.

Discrete (Bargmann) phases of relative-state sequences, null-phase-curve line
integrals, the worked two-qubit and two-mode-squeezed examples, a simulation of
the ancilla-assisted interference protocol, and the Uhlmann holonomy of
relative density operators.
"""

__version__ = "0.1.0"

from .bargmann import (PhaseResult, StateSequence, bargmann_phase, pancharatnam_phase,
                       phase_distance, relative_sequence_phase, rho_sequence_phase,
                       sequence_phase, wrap_phase)
from .errors import (ContractViolation, NoUniqueGeodesic, PostselectionImpossible, RankDeficient,
                     RelPhaseError, SingularConnection, TruncationError, UndefinedPhase,
                     ZeroVisibility)
from .models import (PhasePolygon, SqueezedState, TwoQubitLambda, coherent_vector,
                     gamma_squeezed_closed_form, gamma_two_qubit_closed_form, make_squeezed,
                     make_two_qubit, polygon_pdq_area, qubit_sequence, relative_coherent_label)
from .nullcurves import (RayPath, Segment, coherent_line, coherent_polygon, connection_integral,
                         geodesic, geodesic_polygon, qubit_geodesic, refinement_phase,
                         relative_geodesic_polygon, three_point_phase)
from .protocol import (ProtocolConfig, StepRecord, alice_projector, bob_intensity,
                       find_fringe_max, joint_state, postselect, run_protocol, visibility_law)
from .state import (BipartiteState, DensityOperator, marginal_probability, reduced_density,
                    relative_state, schmidt_rank)
from .uhlmann import (HolonomyResult, MixedBipartiteState, inv_sqrt_psd, relative_density,
                      relative_holonomy, sqrt_psd, uhlmann_holonomy)
