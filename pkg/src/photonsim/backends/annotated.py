"""Simulation of tagged (partially distinguishable) photons.

Photons sharing a tag interfere fully; photons with different tags not at
all.  Each tag group therefore evolves independently, and the detector-level
distribution is the convolution of the per-group distributions.
"""

from __future__ import annotations

from ..fock import FockState, group_by_tag
from .distribution import Distribution, convolve
from .slos import slos_full_distribution


def simulate_annotated(u, input_state: FockState,
                       memory_budget: int | None = None) -> Distribution:
    """Exact detector-count distribution for a fully tagged input state."""
    if not input_state.annotated:
        raise ValueError("input carries no tags; use a plain back-end")
    groups = group_by_tag(input_state)
    if not groups:  # vacuum
        return Distribution({input_state.plain(): 1.0})
    result: Distribution | None = None
    for _, group_state in groups:
        dist = slos_full_distribution(u, group_state, memory_budget)
        result = dist if result is None else convolve(result, dist)
    return result
