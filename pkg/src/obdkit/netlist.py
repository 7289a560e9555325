"""Gate-level netlist parsing, validation and levelization.

The netlist format is line oriented, UTF-8, one statement per line with
``#`` starting a comment:

    input  <net>
    output <net>
    inv    <gate-id> <in> <out>
    nand2  <gate-id> <a> <b> <out>
    nor2   <gate-id> <a> <b> <out>

``nand3``/``nor4``-style statements are accepted for wider gates; the last
net on a gate line is always the output.  Only combinational circuits are
representable: every net has exactly one driver (a primary input or a gate
output) and the gate graph must be acyclic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class NetlistError(Exception):
    """Base class for all netlist validation failures."""


class NetlistSyntaxError(NetlistError):
    """Malformed statement; carries 1-based line and column."""

    def __init__(self, msg: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


class DuplicateDriverError(NetlistError):
    """A net is driven by more than one primary input or gate output."""


class UndrivenNetError(NetlistError):
    """A gate input or primary output has no driver."""


class CycleError(NetlistError):
    """The gate graph contains a combinational cycle."""


_NET_RE = re.compile(r"^[A-Za-z0-9_]+$")
_KIND_RE = re.compile(r"^(nand|nor)([0-9]+)$")


@dataclass(frozen=True)
class GateKind:
    """A primitive gate type: an inverter or a k-input NAND/NOR."""

    family: str  # "inv", "nand" or "nor"
    arity: int

    def __post_init__(self):
        if self.family == "inv":
            if self.arity != 1:
                raise ValueError("inverter arity must be 1")
        elif self.family in ("nand", "nor"):
            if self.arity < 2:
                raise ValueError(f"{self.family} arity must be >= 2")
        else:
            raise ValueError(f"unknown gate family {self.family!r}")

    @property
    def name(self) -> str:
        return "inv" if self.family == "inv" else f"{self.family}{self.arity}"

    def eval(self, bits) -> int:
        """Boolean function of the gate on a bit sequence."""
        if self.family == "inv":
            return 1 - bits[0]
        if self.family == "nand":
            return 0 if all(bits) else 1
        return 0 if any(bits) else 1

    def __str__(self) -> str:
        return self.name


INV = GateKind("inv", 1)
NAND2 = GateKind("nand", 2)
NOR2 = GateKind("nor", 2)


def kind_from_name(name: str) -> GateKind:
    """Parse a gate kind token such as ``inv``, ``nand2`` or ``nor3``."""
    if name == "inv":
        return INV
    m = _KIND_RE.match(name)
    if not m:
        raise ValueError(f"unknown gate kind {name!r}")
    return GateKind(m.group(1), int(m.group(2)))


@dataclass(frozen=True)
class Gate:
    id: str
    kind: GateKind
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class Netlist:
    """A validated combinational circuit over named nets.

    Immutable after construction; safe to share between threads.
    """

    primary_inputs: tuple[str, ...]
    primary_outputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    name: str = "netlist"
    _gate_by_id: dict = field(default_factory=dict, repr=False, compare=False)
    _driver: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_gate_by_id", {g.id: g for g in self.gates})
        drv = {}
        for pi in self.primary_inputs:
            drv[pi] = None
        for g in self.gates:
            drv[g.output] = g
        object.__setattr__(self, "_driver", drv)

    def gate(self, gate_id: str) -> Gate:
        return self._gate_by_id[gate_id]

    def driver_of(self, net: str):
        """Gate driving ``net``, or None when it is a primary input."""
        return self._driver[net]

    @property
    def nets(self) -> list[str]:
        seen = list(self.primary_inputs)
        for g in self.gates:
            if g.output not in seen:
                seen.append(g.output)
        return seen

    def counts_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for g in self.gates:
            out[g.kind.name] = out.get(g.kind.name, 0) + 1
        return out


def _validate(netlist: Netlist) -> Netlist:
    driven: dict[str, str] = {}
    for pi in netlist.primary_inputs:
        if pi in driven:
            raise DuplicateDriverError(f"primary input {pi!r} declared twice")
        driven[pi] = "input"
    for g in netlist.gates:
        if g.output in driven:
            raise DuplicateDriverError(
                f"net {g.output!r} driven by both {driven[g.output]} and gate {g.id!r}"
            )
        driven[g.output] = f"gate {g.id}"
    for g in netlist.gates:
        for net in g.inputs:
            if net not in driven:
                raise UndrivenNetError(f"gate {g.id!r} input net {net!r} has no driver")
    for po in netlist.primary_outputs:
        if po not in driven:
            raise UndrivenNetError(f"primary output {po!r} has no driver")
    levelize(netlist)  # raises CycleError on combinational loops
    return netlist


def parse_netlist(text: str, name: str = "netlist") -> Netlist:
    """Parse and validate netlist source text.

    Raises NetlistSyntaxError, DuplicateDriverError, UndrivenNetError or
    CycleError; gate order in the source is preserved.
    """
    inputs: list[str] = []
    outputs: list[str] = []
    gates: list[Gate] = []
    gate_ids: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0].lower()

        def bad(msg: str, col: int = 1):
            raise NetlistSyntaxError(msg, lineno, col)

        if head in ("input", "output"):
            if len(toks) != 2:
                bad(f"'{head}' expects exactly one net name")
            if not _NET_RE.match(toks[1]):
                bad(f"invalid net name {toks[1]!r}", raw.find(toks[1]) + 1)
            (inputs if head == "input" else outputs).append(toks[1])
            continue
        if head in ("dff", "latch", "flop"):
            bad("sequential elements are not supported")
        try:
            kind = kind_from_name(head)
        except ValueError:
            bad(f"unknown statement {head!r}")
        want = 2 + kind.arity + 1  # keyword, id, inputs, output
        if len(toks) != want:
            bad(f"'{kind.name}' expects {want - 1} names, got {len(toks) - 1}")
        gid = toks[1]
        for t in toks[1:]:
            if not _NET_RE.match(t):
                bad(f"invalid name {t!r}", raw.find(t) + 1)
        if gid in gate_ids:
            bad(f"duplicate gate id {gid!r}")
        gate_ids.add(gid)
        gates.append(Gate(gid, kind, tuple(toks[2:-1]), toks[-1]))

    nl = Netlist(tuple(inputs), tuple(outputs), tuple(gates), name=name)
    return _validate(nl)


def serialize(netlist: Netlist) -> str:
    """Render a netlist back to source text (parse round-trips)."""
    lines = [f"input {pi}" for pi in netlist.primary_inputs]
    lines += [f"output {po}" for po in netlist.primary_outputs]
    for g in netlist.gates:
        lines.append(f"{g.kind.name} {g.id} {' '.join(g.inputs)} {g.output}")
    return "\n".join(lines) + "\n"


def levelize(netlist: Netlist) -> tuple[list[Gate], int]:
    """Topologically order the gates.

    Returns (ordered gates, logic depth) where depth counts gates on the
    longest primary-input-to-output path.  Raises CycleError if the gate
    graph is cyclic.
    """
    level: dict[str, int] = {pi: 0 for pi in netlist.primary_inputs}
    pending = list(netlist.gates)
    ordered: list[Gate] = []
    while pending:
        progressed = False
        remaining: list[Gate] = []
        for g in pending:
            if all(net in level for net in g.inputs):
                level[g.output] = 1 + max((level[n] for n in g.inputs), default=0)
                ordered.append(g)
                progressed = True
            else:
                remaining.append(g)
        if not progressed:
            ids = ", ".join(g.id for g in remaining[:8])
            raise CycleError(f"combinational cycle through gates: {ids}")
        pending = remaining
    depth = max((level[g.output] for g in netlist.gates), default=0)
    return ordered, depth


# Sum bit of a full adder over inputs A, B, C, built from 14 two-input
# NANDs and 11 inverters with logic depth 9.  The structure follows the
# carry-style decomposition  S = (A+B+C)*not(maj(A,B,C)) + A*B*C  mapped
# to NAND2/INV cells without sharing: the majority network carries a
# duplicated B*C product term and the sum path re-buffers through a
# tied-input NAND, so the circuit is deliberately redundant and several
# breakdown sites in it are untestable.
FULL_ADDER_SUM_NET = """\
# sum bit of a full adder: S = A xor B xor C
# 14 nand2 + 11 inv, logic depth 9
input A
input B
input C
output S
nand2 g01 A B nab        # not(A*B)
nand2 g02 B C nbc        # not(B*C)
nand2 g03 B C nbc2       # duplicate product term
nand2 g04 C A nca        # not(C*A)
nand2 g05 nab nbc orl    # A*B + B*C
nand2 g06 nbc2 nca orr   # B*C + C*A
inv   g07 orl norl
inv   g08 orr norr
nand2 g09 norl norr cout # majority(A,B,C)
inv   g10 cout ncout
inv   g11 A na
inv   g12 B nb
nand2 g13 na nb orab     # A + B
inv   g14 orab norab
inv   g15 C nc
nand2 g16 norab nc or3   # A + B + C
nand2 g17 or3 ncout nt1  # not((A+B+C)*not(cout))
inv   g18 nt1 t1
nand2 g19 t1 t1 nt1b     # re-complement through a tied-input nand
nand2 g20 A B nab2       # duplicate product term
inv   g21 nab2 ab
nand2 g22 ab C nabc      # not(A*B*C)
inv   g23 nabc abc
inv   g24 abc nabcb
nand2 g25 nt1b nabcb S
"""


def builtin_full_adder() -> Netlist:
    """The bundled full-adder sum benchmark (14 NAND2 + 11 INV, depth 9)."""
    return parse_netlist(FULL_ADDER_SUM_NET, name="full_adder_sum")
