"""photonsim: Fock-state simulation of linear-optical quantum circuits.

Build circuits from beam splitters, phase shifters, wave plates and delay
lines; compute their unitaries or decompose unitaries into meshes; simulate
with four engines (permanent-based amplitudes, full-path strong simulation,
component-wise stepping, exact output sampling); model imperfect sources and
time-bin interference; analyze post-selected logic gates and run variational
energy minimization.
"""

from .analysis import (CountRule, GateAnalysis, LogicalEncoding,
                       QubitOperator, analyze_gate, expectation,
                       logical_statevector, pk_analytic, pk_estimate,
                       post_select)
from .backends import (Distribution, SampleRecord, amplitude,
                       naive_full_distribution, probability, sample_cc2017,
                       simulate_annotated, slos_amplitudes,
                       slos_full_distribution, stepper_evolve,
                       stepper_full_distribution, total_variation)
from .circuit import (Circuit, beam_splitter, component_unitary,
                      compute_unitary, expanded_unitary, load_circuit,
                      mode_permutation, parse_circuit, phase_shifter,
                      polarization_rotator, polarizing_beam_splitter,
                      save_circuit, time_delay, wave_plate)
from .decompose import decompose_rectangular, decompose_triangular
from .errors import (CapabilityError, CapacityError, EmptyPostSelectionError,
                     NumericError, PhotonsimError, StateParseError)
from .fock import (FockBasis, FockState, StateVector, expand_polarization,
                   fock_dim, format_state, group_by_tag, parse_state, rank,
                   sv_inner, unrank)
from .linalg import Unitary, haar_unitary, load_matrix, save_matrix, submatrix_ts
from .optimize import nelder_mead, vqe_run
from .permanent import (kernel_backend, permanent, permanent_glynn,
                        permanent_ryser)
from .sources import (DetectionTrace, SourceModel, coincidence_histogram,
                      simulate_hom, simulate_time_circuit, source_emit,
                      unroll_time_circuit)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
