"""Series-parallel transistor networks of static CMOS gates.

Each gate kind expands into a PMOS pull-up and an NMOS pull-down network
that are structural duals of each other.  Conduction is evaluated at the
switch level: an NMOS passes when its controlling input is 1, a PMOS when
it is 0; series composition ANDs, parallel composition ORs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .netlist import GateKind


class Polarity(enum.Enum):
    NMOS = "N"
    PMOS = "P"


@dataclass(frozen=True, order=True)
class TransistorRef:
    """One transistor inside a gate: (gate id, polarity, input pin)."""

    gate_id: str
    polarity: Polarity
    pin: int

    @property
    def label(self) -> str:
        """Short site label, e.g. ``g3.PA`` for the pin-0 PMOS of gate g3."""
        return f"{self.gate_id}.{self.polarity.value}{chr(ord('A') + self.pin)}"

    def __str__(self) -> str:
        return self.label


def parse_site_label(label: str) -> TransistorRef:
    """Invert :attr:`TransistorRef.label` (``g3.PA`` -> TransistorRef)."""
    gate_id, _, tail = label.rpartition(".")
    if not gate_id or len(tail) < 2 or tail[0] not in "NP":
        raise ValueError(f"bad site label {label!r}")
    pin = ord(tail[1:].upper()) - ord("A") if len(tail) == 2 else int(tail[1:])
    pol = Polarity.NMOS if tail[0] == "N" else Polarity.PMOS
    if pin < 0:
        raise ValueError(f"bad site label {label!r}")
    return TransistorRef(gate_id, pol, pin)


@dataclass(frozen=True)
class Leaf:
    ref: TransistorRef


@dataclass(frozen=True)
class Series:
    children: tuple


@dataclass(frozen=True)
class Parallel:
    children: tuple


NetworkExpr = Leaf | Series | Parallel


def expand_gate(kind: GateKind, gate_id: str = "") -> tuple[NetworkExpr, NetworkExpr]:
    """Pull-up and pull-down networks of a gate kind.

    NAND: parallel PMOS over a series NMOS stack; NOR is the dual; an
    inverter is a single transistor on each side.
    """
    p = [Leaf(TransistorRef(gate_id, Polarity.PMOS, i)) for i in range(kind.arity)]
    n = [Leaf(TransistorRef(gate_id, Polarity.NMOS, i)) for i in range(kind.arity)]
    if kind.family == "inv":
        return p[0], n[0]
    if kind.family == "nand":
        return Parallel(tuple(p)), Series(tuple(n))
    if kind.family == "nor":
        return Series(tuple(p)), Parallel(tuple(n))
    raise ValueError(f"unsupported gate kind {kind!r}")


def conducts(net: NetworkExpr, vector) -> bool:
    """Switch-level conduction of a network under a gate-input vector."""
    if isinstance(net, Leaf):
        bit = vector[net.ref.pin]
        return bit == 1 if net.ref.polarity is Polarity.NMOS else bit == 0
    if isinstance(net, Series):
        return all(conducts(c, vector) for c in net.children)
    return any(conducts(c, vector) for c in net.children)


def _path_to_leaf(net: NetworkExpr, ref: TransistorRef):
    """Root-to-leaf chain of nodes ending at the leaf for ``ref``.

    Leaves are matched on (polarity, pin) so a kind-level network can be
    queried with a site that carries a concrete gate id.
    """
    if isinstance(net, Leaf):
        if (net.ref.polarity, net.ref.pin) == (ref.polarity, ref.pin):
            return [net]
        return None
    for child in net.children:
        sub = _path_to_leaf(child, ref)
        if sub is not None:
            return [net] + sub
    return None


def parallel_siblings_off(net: NetworkExpr, ref: TransistorRef, vector) -> bool:
    """True when no parallel sibling of the transistor conducts.

    For every Parallel node on the path from the root to the transistor's
    leaf, all sibling subtrees must be non-conducting under ``vector`` so
    the transistor alone is responsible for its branch.
    """
    path = _path_to_leaf(net, ref)
    if path is None:
        raise ValueError(f"transistor {ref} is not in the network")
    for node, nxt in zip(path, path[1:]):
        if isinstance(node, Parallel):
            for sib in node.children:
                if sib is not nxt and conducts(sib, vector):
                    return False
    return True


def to_sexpr(net: NetworkExpr) -> str:
    """Render a network as a nested s-expression string."""
    if isinstance(net, Leaf):
        pol = "nmos" if net.ref.polarity is Polarity.NMOS else "pmos"
        return f"({pol} {net.ref.pin})"
    tag = "series" if isinstance(net, Series) else "parallel"
    return f"({tag} " + " ".join(to_sexpr(c) for c in net.children) + ")"
