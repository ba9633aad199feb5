"""Output distributions and sample records."""

from __future__ import annotations

from typing import Iterable, Mapping

from ..fock import FockState

#: tolerance on distribution mass bookkeeping
MASS_EPS = 1e-9


class Distribution:
    """A map from Fock states to probabilities.

    ``total_mass`` tracks the summed probability: 1 for an exact simulation
    of a unitary, less after filtering/post-selection.
    """

    __slots__ = ("probs", "total_mass")

    def __init__(self, probs: Mapping[FockState, float],
                 total_mass: float | None = None):
        self.probs = {s: float(p) for s, p in probs.items()}
        for state, p in self.probs.items():
            if p < -MASS_EPS or p > 1 + MASS_EPS:
                raise ValueError(f"probability {p} of {state} outside [0, 1]")
        mass = sum(self.probs.values())
        if total_mass is None:
            total_mass = mass
        elif abs(total_mass - mass) > MASS_EPS:
            raise ValueError(
                f"declared mass {total_mass} != summed mass {mass}")
        self.total_mass = float(total_mass)

    def __getitem__(self, state: FockState) -> float:
        return self.probs.get(state, 0.0)

    def __len__(self):
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def items(self):
        return self.probs.items()

    def sorted_items(self) -> list[tuple[FockState, float]]:
        """Descending probability, ties broken by canonical state order."""
        return sorted(self.probs.items(),
                      key=lambda kv: (-kv[1],
                                      tuple(-c for c in kv[0].occupations)))

    def __repr__(self):
        top = ", ".join(f"{s}: {p:.6g}" for s, p in self.sorted_items()[:4])
        more = "" if len(self) <= 4 else f", ... [{len(self)} states]"
        return f"Distribution({top}{more}, mass={self.total_mass:.6g})"


def convolve(a: Distribution, b: Distribution) -> Distribution:
    """Distribution of mode-wise occupation sums of independent draws."""
    out: dict[FockState, float] = {}
    for sa, pa in a.items():
        for sb, pb in b.items():
            joint = FockState([x + y for x, y in
                               zip(sa.occupations, sb.occupations)])
            out[joint] = out.get(joint, 0.0) + pa * pb
    return Distribution(out, total_mass=a.total_mass * b.total_mass)


def total_variation(a: Distribution, b: Distribution) -> float:
    states = set(a) | set(b)
    return 0.5 * sum(abs(a[s] - b[s]) for s in states)


def empirical_distribution(outcomes: Iterable[FockState]) -> Distribution:
    counts: dict[FockState, int] = {}
    total = 0
    for state in outcomes:
        counts[state] = counts.get(state, 0) + 1
        total += 1
    if total == 0:
        raise ValueError("no outcomes")
    return Distribution({s: c / total for s, c in counts.items()},
                        total_mass=1.0)


class SampleRecord:
    """Outcomes of a sampling run plus the seed that reproduces it."""

    __slots__ = ("outcomes", "seed")

    def __init__(self, outcomes: list[FockState], seed: int | None):
        self.outcomes = list(outcomes)
        self.seed = seed

    @property
    def count(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self):
        return len(self.outcomes)

    def to_distribution(self) -> Distribution:
        return empirical_distribution(self.outcomes)
