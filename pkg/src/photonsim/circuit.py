"""Linear-optical components and circuits.

A circuit is an ordered list of placements ``(offset, component-or-subcircuit)``
over ``m`` spatial modes.  The first-placed component acts first on the input
state, so the composed matrix is ``U = E_N ... E_2 E_1`` with each ``E_k`` the
component unitary embedded at its offset.

Beam splitter convention
------------------------
The generalized two-mode matrix is::

    [ e^{i phi_a} cos(theta)                 i e^{i phi_b} sin(theta)  ]
    [ i e^{i(phi_a - phi_b + phi_d)} sin(theta)   e^{i phi_d} cos(theta) ]

with defaults ``phi_a = 0``, ``phi_b = 3 pi / 2``, ``phi_d = pi`` (so the
default beam splitter is the real symmetric ``[[c, s], [s, -c]]``), and the
reflectivity parameterization ``theta = arcsin(sqrt(R))``: ``R`` is the
power coupled across the two ports, ``|u01|^2 = R``.

Polarisation components (wave plate, polarising beam splitter, polarisation
rotator) live on spatial modes but act on the doubled mode space where
spatial mode ``i`` splits into ``(2i, 2i+1) = (H, V)``; circuits containing
them must be simulated through :func:`expanded_unitary` /
:func:`expanded_placements` with a polarisation-expanded input.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .errors import CapabilityError, StateParseError
from .linalg import Unitary

BS_DEFAULT_PHI_A = 0.0
BS_DEFAULT_PHI_B = 3 * math.pi / 2
BS_DEFAULT_PHI_D = math.pi

#: component kinds, also the ``type`` strings of the circuit file format
KINDS = ("bs", "ps", "perm", "wp", "pbs", "pr", "td")

_POLARIZATION_KINDS = frozenset({"wp", "pbs", "pr"})


@dataclass(frozen=True)
class Component:
    """One placed optical element: a kind tag plus its named parameters."""

    kind: str
    params: tuple[tuple[str, object], ...]
    arity: int

    def param(self, name: str):
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def __str__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}({args})"


def beam_splitter(theta: float | None = None, R: float | None = None,
                  phi_a: float = BS_DEFAULT_PHI_A,
                  phi_b: float = BS_DEFAULT_PHI_B,
                  phi_d: float = BS_DEFAULT_PHI_D) -> Component:
    """Two-mode beam splitter, parameterized by ``theta`` or reflectivity ``R``."""
    if (theta is None) == (R is None):
        raise ValueError("give exactly one of theta or R")
    if R is not None:
        if not 0.0 <= R <= 1.0:
            raise ValueError(f"reflectivity must be in [0, 1], got {R}")
        angle_param = ("R", float(R))
    else:
        angle_param = ("theta", float(theta))
    return Component("bs", (angle_param, ("phi_a", float(phi_a)),
                            ("phi_b", float(phi_b)), ("phi_d", float(phi_d))), 2)


def phase_shifter(phi: float) -> Component:
    return Component("ps", (("phi", float(phi)),), 1)


def mode_permutation(perm) -> Component:
    """Wire permutation: a photon on local mode ``j`` exits on ``perm[j]``."""
    p = tuple(int(x) for x in perm)
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"{p} is not a permutation of 0..{len(p) - 1}")
    return Component("perm", (("perm", p),), len(p))


def wave_plate(delta: float, xi: float) -> Component:
    """Wave plate: ``delta`` tracks plate thickness, ``xi`` the optical-axis angle."""
    return Component("wp", (("delta", float(delta)), ("xi", float(xi))), 1)


def polarizing_beam_splitter() -> Component:
    return Component("pbs", (), 2)


def polarization_rotator(delta: float) -> Component:
    return Component("pr", (("delta", float(delta)),), 1)


def time_delay(periods: int) -> Component:
    """Delay line holding photons for an integer number of source periods."""
    periods = int(periods)
    if periods < 1:
        raise ValueError(f"delay must be a positive integer, got {periods}")
    return Component("td", (("periods", periods),), 1)


def _bs_theta(component: Component) -> float:
    try:
        return component.param("theta")
    except KeyError:
        return math.asin(math.sqrt(component.param("R")))


def component_unitary(component: Component) -> np.ndarray:
    """The component's matrix on its own modes (polarisation modes for
    wave plates / PBS / rotators).  Time delays have no mode unitary."""
    kind = component.kind
    if kind == "bs":
        theta = _bs_theta(component)
        a = component.param("phi_a")
        b = component.param("phi_b")
        d = component.param("phi_d")
        c, s = math.cos(theta), math.sin(theta)
        return np.array([
            [np.exp(1j * a) * c, 1j * np.exp(1j * b) * s],
            [1j * np.exp(1j * (a - b + d)) * s, np.exp(1j * d) * c],
        ])
    if kind == "ps":
        return np.array([[np.exp(1j * component.param("phi"))]])
    if kind == "perm":
        p = component.param("perm")
        mat = np.zeros((len(p), len(p)), dtype=complex)
        for j, i in enumerate(p):
            mat[i, j] = 1.0
        return mat
    if kind == "wp":
        delta, xi = component.param("delta"), component.param("xi")
        sd, cd = math.sin(delta), math.cos(delta)
        c2, s2 = math.cos(2 * xi), math.sin(2 * xi)
        return np.array([
            [1j * sd * c2 + cd, 1j * sd * s2],
            [1j * sd * s2, -1j * sd * c2 + cd],
        ])
    if kind == "pbs":
        return np.array([
            [0, 0, 1, 0],
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, 0, 1],
        ], dtype=complex)
    if kind == "pr":
        delta = component.param("delta")
        c, s = math.cos(delta), math.sin(delta)
        return np.array([[c, s], [-s, c]], dtype=complex)
    if kind == "td":
        raise CapabilityError("a time delay is not a mode unitary")
    raise ValueError(f"unknown component kind {kind!r}")


Placement = tuple[int, Union[Component, "Circuit"]]


class Circuit:
    """An ``m``-mode circuit assembled from components and sub-circuits.

    ``add`` appends and returns the circuit for builder-style chaining;
    circuits are treated as immutable once built.
    """

    def __init__(self, m: int, name: str = ""):
        if m < 1:
            raise ValueError("a circuit needs at least one mode")
        self.m = m
        self.name = name
        self.placements: list[Placement] = []

    def add(self, offset: int, item: Union[Component, "Circuit"]) -> "Circuit":
        arity = item.arity if isinstance(item, Component) else item.m
        if offset < 0 or offset + arity > self.m:
            raise ValueError(
                f"{item} spans modes {offset}..{offset + arity - 1}, "
                f"outside 0..{self.m - 1}")
        self.placements.append((offset, item))
        return self

    def flatten(self) -> Iterator[tuple[int, Component]]:
        """All components in placement order, sub-circuits spliced in."""
        for offset, item in self.placements:
            if isinstance(item, Circuit):
                for sub_offset, comp in item.flatten():
                    yield offset + sub_offset, comp
            else:
                yield offset, item

    @property
    def is_time_circuit(self) -> bool:
        return any(c.kind == "td" for _, c in self.flatten())

    @property
    def has_polarization(self) -> bool:
        return any(c.kind in _POLARIZATION_KINDS for _, c in self.flatten())

    def component_count(self) -> int:
        return sum(1 for _ in self.flatten())

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return (f"Circuit(m={self.m}{label}, "
                f"{self.component_count()} components)")


def compute_unitary(circuit: Circuit) -> Unitary:
    """Compose the circuit's spatial-mode unitary.

    Time circuits have no static unitary; polarised circuits must go through
    :func:`expanded_unitary` instead (a wave plate has no action on a plain
    spatial mode).
    """
    if circuit.is_time_circuit:
        raise CapabilityError(
            "time circuits have no static unitary; unroll them first")
    if circuit.has_polarization:
        raise CapabilityError(
            "circuit contains polarisation components; use expanded_unitary "
            "with a polarisation-expanded input")
    u = np.eye(circuit.m, dtype=complex)
    for offset, comp in circuit.flatten():
        block = component_unitary(comp)
        k = block.shape[0]
        u[offset:offset + k, :] = block @ u[offset:offset + k, :]
    return Unitary(u)


def _interleave_with_polarization(mat: np.ndarray) -> np.ndarray:
    """Lift a k-mode spatial matrix to 2k polarisation-split modes."""
    k = mat.shape[0]
    out = np.zeros((2 * k, 2 * k), dtype=complex)
    out[0::2, 0::2] = mat
    out[1::2, 1::2] = mat
    return out


def expanded_placements(circuit: Circuit) -> list[tuple[int, np.ndarray]]:
    """Placements lifted onto the doubled (H, V) mode space.

    Spatial components act identically on both polarisations; wave plates
    and rotators act on the (H, V) pair of their spatial mode; the PBS mixes
    the four polarisation modes of its spatial pair.
    """
    if circuit.is_time_circuit:
        raise CapabilityError("cannot polarisation-expand a time circuit")
    lifted = []
    for offset, comp in circuit.flatten():
        if comp.kind in _POLARIZATION_KINDS:
            lifted.append((2 * offset, component_unitary(comp)))
        else:
            lifted.append((2 * offset,
                           _interleave_with_polarization(component_unitary(comp))))
    return lifted


def expanded_unitary(circuit: Circuit) -> Unitary:
    """The circuit's unitary on the 2m polarisation-split modes."""
    u = np.eye(2 * circuit.m, dtype=complex)
    for offset, block in expanded_placements(circuit):
        k = block.shape[0]
        u[offset:offset + k, :] = block @ u[offset:offset + k, :]
    return Unitary(u)


# ---------------------------------------------------------------------------
# circuit files (JSON: modes, name, components with exact parameter keys)
# ---------------------------------------------------------------------------

_FACTORIES = {
    "bs": beam_splitter,
    "ps": phase_shifter,
    "perm": mode_permutation,
    "wp": wave_plate,
    "pbs": polarizing_beam_splitter,
    "pr": polarization_rotator,
    "td": time_delay,
}


def dump_circuit(circuit: Circuit) -> str:
    """Serialize (flattened) to the JSON circuit format; floats round-trip
    exactly via shortest-repr encoding."""
    entries = []
    for offset, comp in circuit.flatten():
        entry: dict = {"type": comp.kind, "offset": offset}
        for key, value in comp.params:
            entry[key] = list(value) if isinstance(value, tuple) else value
        entries.append(entry)
    doc = {"modes": circuit.m, "name": circuit.name, "components": entries}
    return json.dumps(doc, indent=2) + "\n"


def parse_circuit(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateParseError(f"bad circuit file: {exc.msg}",
                              line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise StateParseError("circuit file must be a JSON object")
    try:
        modes = int(doc["modes"])
        entries = doc["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateParseError(f"circuit file missing field: {exc}") from exc
    circuit = Circuit(modes, name=str(doc.get("name", "")))
    for idx, entry in enumerate(entries):
        if not isinstance(entry, dict) or "type" not in entry:
            raise StateParseError(f"component {idx} has no type")
        kind = entry["type"]
        factory = _FACTORIES.get(kind)
        if factory is None:
            raise StateParseError(f"component {idx}: unknown type {kind!r}")
        kwargs = {k: v for k, v in entry.items()
                  if k not in ("type", "offset")}
        try:
            comp = factory(**kwargs)
            circuit.add(int(entry.get("offset", 0)), comp)
        except (TypeError, ValueError) as exc:
            raise StateParseError(f"component {idx} ({kind}): {exc}") from exc
    return circuit


def save_circuit(path, circuit: Circuit) -> None:
    with open(path, "w") as fh:
        fh.write(dump_circuit(circuit))


def load_circuit(path) -> Circuit:
    with open(path) as fh:
        return parse_circuit(fh.read())
