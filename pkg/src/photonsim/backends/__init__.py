"""The four simulation engines and their shared result types.

==========  =============================================  ==================
back-end    task                                           entry point
==========  =============================================  ==================
naive       single amplitudes / probabilities,             :func:`amplitude`,
            full distribution by enumeration               :func:`naive_full_distribution`
slos        full output state in one in-memory unfolding   :func:`slos_full_distribution`
stepper     component-wise state evolution (circuits)      :func:`stepper_evolve`
cc2017      exact output sampling                          :func:`sample_cc2017`
==========  =============================================  ==================
"""

from .annotated import simulate_annotated
from .distribution import (Distribution, SampleRecord, convolve,
                           empirical_distribution, total_variation)
from .naive import amplitude, naive_full_distribution, probability
from .sampler import sample_cc2017
from .slos import (DEFAULT_MEMORY_BUDGET, slos_amplitudes,
                   slos_full_distribution)
from .stepper import apply_block, stepper_evolve, stepper_full_distribution

#: CLI capability contract: which back-end may serve which task
BACKEND_NAMES = ("naive", "slos", "stepper", "cc2017")
DISTRIBUTION_BACKENDS = ("naive", "slos", "stepper")
SAMPLING_BACKENDS = ("cc2017",)

__all__ = [
    "Distribution", "SampleRecord", "convolve", "empirical_distribution",
    "total_variation", "amplitude", "probability",
    "naive_full_distribution", "slos_amplitudes", "slos_full_distribution",
    "DEFAULT_MEMORY_BUDGET", "stepper_evolve", "stepper_full_distribution",
    "apply_block", "sample_cc2017", "simulate_annotated",
    "BACKEND_NAMES", "DISTRIBUTION_BACKENDS", "SAMPLING_BACKENDS",
]
