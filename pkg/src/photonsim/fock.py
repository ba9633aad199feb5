"""Fock states, sparse state vectors and the combinatorial photon-number basis.

States are occupation-number tuples over ``m`` optical modes, optionally
carrying one opaque string tag per photon (grouped per mode).  Two tag
families have reserved meaning: ``P:H``/``P:V`` mark polarisation, anything
else is a distinguishability label.  All types are immutable values.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import StateParseError

#: polarisation tags understood by :func:`expand_polarization`
POLARIZATION_TAGS = ("P:H", "P:V")

#: amplitudes below this magnitude are dropped when normalizing a StateVector
AMPLITUDE_PRUNE = 1e-12

#: tolerance on squared-norm checks
NORM_EPS = 1e-10


@lru_cache(maxsize=None)
def fock_dim(m: int, n: int) -> int:
    """Number of Fock states of ``n`` photons over ``m`` modes, C(m+n-1, n).

    Exact integer arithmetic; Python integers do not overflow.
    """
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"photon count must be >= 0, got {n}")
    return math.comb(m + n - 1, n)


class FockState:
    """An immutable Fock basis state, optionally annotated per photon.

    Parameters
    ----------
    occupations:
        photon count per mode.
    annotations:
        optional per-mode iterables of photon tags; mode ``i`` must carry
        exactly ``occupations[i]`` tags.  Tags within a mode are stored
        sorted (photons in one mode form a multiset).
    """

    __slots__ = ("occupations", "annotations", "_hash")

    def __init__(self, occupations: Iterable[int],
                 annotations: Iterable[Iterable[str]] | None = None):
        occ = tuple(int(c) for c in occupations)
        if not occ:
            raise ValueError("a state needs at least one mode")
        if any(c < 0 for c in occ):
            raise ValueError(f"negative occupation in {occ}")
        ann = None
        if annotations is not None:
            ann = tuple(tuple(sorted(str(t) for t in mode_tags))
                        for mode_tags in annotations)
            if len(ann) != len(occ):
                raise ValueError("annotations must cover every mode")
            for i, (c, tags) in enumerate(zip(occ, ann)):
                if len(tags) != c:
                    raise ValueError(
                        f"mode {i} has {c} photons but {len(tags)} tags")
        object.__setattr__(self, "occupations", occ)
        object.__setattr__(self, "annotations", ann)
        object.__setattr__(self, "_hash", hash((occ, ann)))

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("FockState is immutable")

    # -- basic queries -------------------------------------------------

    @property
    def m(self) -> int:
        """Mode count."""
        return len(self.occupations)

    @property
    def n(self) -> int:
        """Total photon number."""
        return sum(self.occupations)

    @property
    def annotated(self) -> bool:
        return self.annotations is not None

    def photon_modes(self) -> list[int]:
        """Mode index of each photon, with multiplicity, in mode order."""
        out: list[int] = []
        for i, c in enumerate(self.occupations):
            out.extend([i] * c)
        return out

    def plain(self) -> "FockState":
        """The same occupation pattern with annotations stripped."""
        if self.annotations is None:
            return self
        return FockState(self.occupations)

    # -- value semantics -----------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FockState)
                and self.occupations == other.occupations
                and self.annotations == other.annotations)

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.occupations)

    def __getitem__(self, i):
        return self.occupations[i]

    def __str__(self):
        return format_state(self)

    def __repr__(self):
        return f"FockState('{format_state(self)}')"


# ---------------------------------------------------------------------------
# text round-trip:  |1,0,2>   and   |{P:H},0>
# ---------------------------------------------------------------------------

_MODE_FIELD = re.compile(r"^(\d+|\{[^{}]*\})$")


def format_state(state: FockState) -> str:
    """Render a state in the ``|n1,n2,...>`` text form used everywhere."""
    if state.annotations is None:
        return "|" + ",".join(str(c) for c in state.occupations) + ">"
    fields = []
    for c, tags in zip(state.occupations, state.annotations):
        fields.append("0" if c == 0 else "{" + ",".join(tags) + "}")
    return "|" + ",".join(fields) + ">"


def parse_state(text: str) -> FockState:
    """Parse the ``|...>`` text form back into a :class:`FockState`.

    Raises :class:`StateParseError` on malformed input.  Annotated and plain
    non-zero modes cannot be mixed (every photon is tagged, or none is).
    """
    s = text.strip()
    if not (s.startswith("|") and s.endswith(">")):
        raise StateParseError(f"state must look like |...>, got {text!r}")
    body = s[1:-1]
    if not body:
        raise StateParseError("empty state")
    # split on commas that are not inside {...}
    fields: list[str] = []
    depth = 0
    cur = ""
    for ch in body:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise StateParseError(f"unbalanced braces in {text!r}")
        if ch == "," and depth == 0:
            fields.append(cur)
            cur = ""
        else:
            cur += ch
    if depth != 0:
        raise StateParseError(f"unbalanced braces in {text!r}")
    fields.append(cur)

    occupations: list[int] = []
    annotations: list[tuple[str, ...]] = []
    saw_tags = False
    saw_plain_photon = False
    for i, field in enumerate(fields):
        field = field.strip()
        if not _MODE_FIELD.match(field):
            raise StateParseError(
                f"bad mode field {field!r} in {text!r}", column=i)
        if field.startswith("{"):
            inner = field[1:-1].strip()
            tags = tuple(t.strip() for t in inner.split(",")) if inner else ()
            if any(not t for t in tags):
                raise StateParseError(f"empty tag in {field!r}", column=i)
            occupations.append(len(tags))
            annotations.append(tags)
            saw_tags = saw_tags or bool(tags)
        else:
            count = int(field)
            occupations.append(count)
            annotations.append(())
            saw_plain_photon = saw_plain_photon or count > 0
    if saw_tags and saw_plain_photon:
        raise StateParseError(
            f"cannot mix tagged and untagged photons in {text!r}")
    if saw_tags:
        return FockState(occupations, annotations)
    return FockState(occupations)


# ---------------------------------------------------------------------------
# canonical basis enumeration (descending lexicographic, |n,0,...,0> first)
# ---------------------------------------------------------------------------

def _states_desc_lex(m: int, n: int) -> Iterator[tuple[int, ...]]:
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _states_desc_lex(m - 1, n - first):
            yield (first,) + rest


class FockBasis:
    """The canonically ordered basis of all ``n``-photon ``m``-mode states.

    Ordering is descending lexicographic on occupation tuples, so
    ``|n,0,...,0>`` has rank 0.  ``rank`` and ``unrank`` are mutually
    inverse; the basis size is ``fock_dim(m, n)``.
    """

    def __init__(self, m: int, n: int):
        self.m = m
        self.n = n
        self.size = fock_dim(m, n)
        self._states: list[tuple[int, ...]] | None = None
        self._index: dict[tuple[int, ...], int] | None = None

    # materialize lazily: rank/unrank work arithmetically without a table
    def _ensure_table(self):
        if self._states is None:
            self._states = list(_states_desc_lex(self.m, self.n))
            self._index = {s: i for i, s in enumerate(self._states)}

    @property
    def occupation_tuples(self) -> list[tuple[int, ...]]:
        self._ensure_table()
        return self._states  # type: ignore[return-value]

    def states(self) -> Iterator[FockState]:
        for occ in self.occupation_tuples:
            yield FockState(occ)

    def index(self, occ: tuple[int, ...]) -> int:
        self._ensure_table()
        return self._index[occ]  # type: ignore[index]

    def __len__(self):
        return self.size

    def __iter__(self):
        return self.states()


def rank(state: FockState) -> int:
    """Canonical index of a plain state within ``FockBasis(m, n)``."""
    if state.annotated:
        raise ValueError("rank is defined on plain (unannotated) states")
    occ = state.occupations
    m = len(occ)
    remaining = sum(occ)
    r = 0
    for i in range(m - 1):
        for a in range(remaining, occ[i], -1):
            r += fock_dim(m - 1 - i, remaining - a)
        remaining -= occ[i]
    return r


def unrank(index: int, m: int, n: int) -> FockState:
    """Inverse of :func:`rank`."""
    size = fock_dim(m, n)
    if not 0 <= index < size:
        raise IndexError(f"rank {index} out of range for FockBasis({m},{n})")
    occ = []
    remaining = n
    for i in range(m - 1):
        for a in range(remaining, -1, -1):
            block = fock_dim(m - 1 - i, remaining - a)
            if index < block:
                occ.append(a)
                remaining -= a
                break
            index -= block
    occ.append(remaining)
    return FockState(occ)


# ---------------------------------------------------------------------------
# annotation handling
# ---------------------------------------------------------------------------

def expand_polarization(state: FockState) -> FockState:
    """Map a polarisation-annotated state onto ``2m`` plain spatial modes.

    Spatial mode ``i`` becomes the pair ``(2i, 2i+1) = (H, V)``.
    Every photon must carry a ``P:H`` or ``P:V`` tag.
    """
    if state.annotations is None:
        raise ValueError("state carries no polarisation annotations")
    occ = [0] * (2 * state.m)
    for i, tags in enumerate(state.annotations):
        for tag in tags:
            if tag == "P:H":
                occ[2 * i] += 1
            elif tag == "P:V":
                occ[2 * i + 1] += 1
            else:
                raise ValueError(
                    f"photon in mode {i} has non-polarisation tag {tag!r}")
    return FockState(occ)


def group_by_tag(state: FockState) -> list[tuple[str, FockState]]:
    """Partition an annotated state into one plain state per photon tag.

    The per-tag occupation vectors sum back to the input occupations.
    Groups are returned sorted by tag for determinism.
    """
    if state.annotations is None:
        raise ValueError("state carries no annotations")
    groups: dict[str, list[int]] = {}
    for i, tags in enumerate(state.annotations):
        for tag in tags:
            groups.setdefault(tag, [0] * state.m)[i] += 1
    return [(tag, FockState(occ)) for tag, occ in sorted(groups.items())]


# ---------------------------------------------------------------------------
# sparse state vectors
# ---------------------------------------------------------------------------

class StateVector:
    """A sparse complex-amplitude map over Fock states (a superposition).

    All keys share one mode count.  The squared-amplitude sum may be below 1
    (sub-normalized, e.g. after post-selection); :meth:`normalized` rescales
    to unit norm and prunes amplitudes below ``AMPLITUDE_PRUNE``.
    """

    __slots__ = ("m", "_terms")

    def __init__(self, terms: Mapping[FockState, complex] | None = None,
                 m: int | None = None):
        self._terms: dict[FockState, complex] = {}
        self.m = m
        if terms:
            for state, amp in terms.items():
                if self.m is None:
                    self.m = state.m
                elif state.m != self.m:
                    raise ValueError(
                        f"mode count mismatch: {state.m} != {self.m}")
                self._terms[state] = complex(amp)
        if self.m is None:
            raise ValueError("empty StateVector needs an explicit mode count")

    @classmethod
    def basis(cls, state: FockState) -> "StateVector":
        return cls({state: 1.0 + 0j})

    # -- mapping access -------------------------------------------------

    def items(self):
        return self._terms.items()

    def __getitem__(self, state: FockState) -> complex:
        return self._terms.get(state, 0j)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    # -- algebra ---------------------------------------------------------

    def norm_sq(self) -> float:
        return sum((a * a.conjugate()).real for a in self._terms.values())

    def inner(self, other: "StateVector") -> complex:
        """<self|other>, conjugate-linear in ``self``."""
        if self.m != other.m:
            raise ValueError(
                f"mode count mismatch: {self.m} != {other.m}")
        if len(self) <= len(other):
            return sum((amp.conjugate() * other[state]
                        for state, amp in self.items()), 0j)
        return sum((self[state].conjugate() * amp
                    for state, amp in other.items()), 0j)

    def __add__(self, other: "StateVector") -> "StateVector":
        if self.m != other.m:
            raise ValueError("mode count mismatch")
        terms = dict(self._terms)
        for state, amp in other.items():
            terms[state] = terms.get(state, 0j) + amp
        return StateVector(terms, m=self.m)

    def __mul__(self, scalar: complex) -> "StateVector":
        return StateVector({s: a * scalar for s, a in self._terms.items()},
                           m=self.m)

    __rmul__ = __mul__

    def normalized(self) -> "StateVector":
        norm = math.sqrt(self.norm_sq())
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        terms = {s: a / norm for s, a in self._terms.items()
                 if abs(a) / norm > AMPLITUDE_PRUNE}
        return StateVector(terms, m=self.m)

    def __repr__(self):
        parts = " + ".join(f"({a:.6g})*{s}" for s, a in
                           sorted(self._terms.items(),
                                  key=lambda kv: -abs(kv[1]))[:6])
        more = "" if len(self._terms) <= 6 else f" + ... [{len(self)} terms]"
        return f"StateVector({parts}{more})"


def sv_inner(a: StateVector, b: StateVector) -> complex:
    """<a|b> with the physics convention (conjugate-linear in ``a``)."""
    return a.inner(b)
