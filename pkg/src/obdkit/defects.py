"""Oxide-breakdown defect sites, excitation conditions and stage data.

A defect site is one transistor of one gate.  Exciting it takes an ordered
two-vector input pair at that gate: the output must switch, the network
containing the defective transistor must establish the new output value
through that transistor, and no parallel companion may share the job.
NMOS defects in a NAND are therefore excited by any pair ending in the
all-ones vector, while each PMOS defect has exactly one excitation pair
(the one-hot-low final vector); NOR gates behave dually.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import total_ordering

from .netlist import GateKind, Netlist
from .networks import (
    Polarity,
    TransistorRef,
    conducts,
    expand_gate,
    parallel_siblings_off,
)


@total_ordering
class Stage(enum.Enum):
    """Breakdown severity, ordered from intact oxide to hard breakdown."""

    FAULT_FREE = 0
    MBD1 = 1
    MBD2 = 2
    MBD3 = 3
    HBD = 4

    def __lt__(self, other):
        if not isinstance(other, Stage):
            return NotImplemented
        return self.value < other.value

    @classmethod
    def from_name(cls, name: str) -> "Stage":
        key = name.strip().upper().replace("-", "_")
        if key in ("FAULT_FREE", "FAULTFREE", "FF"):
            return cls.FAULT_FREE
        return cls[key]


@dataclass(frozen=True)
class ObdDefect:
    """An injected breakdown: a site plus its current stage."""

    site: TransistorRef
    stage: Stage

    def __post_init__(self):
        if self.stage is Stage.FAULT_FREE:
            raise ValueError("an injected defect cannot be at the fault-free stage")


@dataclass(frozen=True, order=True)
class LocalPair:
    """Ordered two-vector stimulus at one gate's inputs."""

    v1: tuple[int, ...]
    v2: tuple[int, ...]

    def __post_init__(self):
        if self.v1 == self.v2:
            raise ValueError("the two vectors of a pair must differ")

    @property
    def bits(self) -> tuple[str, str]:
        return ("".join(map(str, self.v1)), "".join(map(str, self.v2)))

    def __str__(self) -> str:
        return f"({self.bits[0]},{self.bits[1]})"


class NoStageDataError(KeyError):
    """Requested a (polarity, stage) combination without tabulated data."""


@dataclass(frozen=True)
class StageParams:
    """Electrical strength of the breakdown path at one stage."""

    i_sat: float  # diode saturation current, A
    r_bd: float  # gate-to-breakdown-node resistance, ohm


# Measured-model progression of the breakdown path.  The fault-free row is
# a placeholder network so weak it never conducts; the PMOS path never
# reaches hard breakdown in the data.
_STAGE_TABLE: dict[Polarity, dict[Stage, StageParams]] = {
    Polarity.NMOS: {
        Stage.FAULT_FREE: StageParams(1e-30, 10_000.0),
        Stage.MBD1: StageParams(2e-28, 500.0),
        Stage.MBD2: StageParams(1e-27, 100.0),
        Stage.MBD3: StageParams(5e-27, 20.0),
        Stage.HBD: StageParams(2e-24, 0.05),
    },
    Polarity.PMOS: {
        Stage.FAULT_FREE: StageParams(1e-30, 10_000.0),
        Stage.MBD1: StageParams(1e-29, 1_000.0),
        Stage.MBD2: StageParams(1.1e-29, 900.0),
        Stage.MBD3: StageParams(1.2e-29, 830.0),
    },
}


def stage_params(polarity: Polarity, stage: Stage) -> StageParams:
    """Tabulated (i_sat, r_bd) for a breakdown stage of one polarity."""
    try:
        return _STAGE_TABLE[polarity][stage]
    except KeyError:
        raise NoStageDataError(
            f"no tabulated data for {polarity.name} at stage {stage.name}"
        ) from None


def enumerate_defects(
    netlist: Netlist, kinds_filter: set[GateKind] | None = None
) -> list[TransistorRef]:
    """All defect sites of a netlist, one per transistor.

    Deterministic order: gate order, then pin index, NMOS before PMOS.
    """
    sites: list[TransistorRef] = []
    for g in netlist.gates:
        if kinds_filter is not None and g.kind not in kinds_filter:
            continue
        for pin in range(g.kind.arity):
            sites.append(TransistorRef(g.id, Polarity.NMOS, pin))
            sites.append(TransistorRef(g.id, Polarity.PMOS, pin))
    return sites


def _all_vectors(width: int):
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=width)]


def excitation_pairs(kind: GateKind, site: TransistorRef) -> set[LocalPair]:
    """Gate-input pairs that excite a defect at ``site``.

    A pair (v1, v2) qualifies when the gate output differs between the two
    vectors, the defective transistor's network conducts under v2 with the
    transistor itself on, and every parallel sibling of the transistor is
    off under v2.
    """
    if site.pin >= kind.arity:
        raise ValueError(f"site {site} does not fit a {kind.name} gate")
    pull_up, pull_down = expand_gate(kind, site.gate_id)
    net = pull_up if site.polarity is Polarity.PMOS else pull_down
    leaf_on = lambda v: conducts(
        net if kind.arity == 1 else _leaf_of(net, site), v
    )
    pairs: set[LocalPair] = set()
    vectors = _all_vectors(kind.arity)
    for v2 in vectors:
        if not conducts(net, v2):
            continue
        if not leaf_on(v2):
            continue
        if not parallel_siblings_off(net, site, v2):
            continue
        for v1 in vectors:
            if v1 != v2 and kind.eval(v1) != kind.eval(v2):
                pairs.add(LocalPair(v1, v2))
    return pairs


def _leaf_of(net, site):
    from .networks import Leaf, Parallel, Series

    stack = [net]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            if (node.ref.polarity, node.ref.pin) == (site.polarity, site.pin):
                return node
        else:
            stack.extend(node.children)
    raise ValueError(f"transistor {site} is not in the network")


def local_test_set(kind: GateKind) -> tuple[LocalPair, ...]:
    """Minimum set of local pairs covering every defect site of a kind.

    Exact set cover by exhaustive search over the pair universe; among
    equal-size covers the lexicographically first is returned so results
    are reproducible.
    """
    sites = [
        TransistorRef("", pol, pin)
        for pin in range(kind.arity)
        for pol in (Polarity.NMOS, Polarity.PMOS)
    ]
    per_site = {s: excitation_pairs(kind, s) for s in sites}
    universe = sorted(set().union(*per_site.values()))
    for size in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            chosen = set(combo)
            if all(per_site[s] & chosen for s in sites):
                return combo
    raise AssertionError(f"no cover exists for {kind.name}")  # pragma: no cover
