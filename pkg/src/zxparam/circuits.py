"""Circuit model, text format, unitary oracle and translation to diagrams.

The text format is line oriented with ``#`` comments:

    qreg <n>
    h <q> | s <q> | sdg <q> | z <q> | x <q> | cz <q1> <q2> | cx <control> <target>
    rz(<ident>) <q>      symbolic parameter, e.g. rz(t0) 0
    rz(<k>pi/2) <q>      Clifford constant, k integer

Numeric rz angles must be exact multiples of pi/2; symbolic parameters must
each occur on at most one gate.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Mapping, Optional, Tuple

import numpy as np

from .diagram import Diagram, NKind, SpiderNetwork, to_graph_like
from .errors import CircuitSyntaxError, NonCliffordConstant, RepeatedParameter
from .params import Phase


class GateKind(Enum):
    H = "h"
    S = "s"
    SDG = "sdg"
    Z = "z"
    X = "x"
    CZ = "cz"
    CX = "cx"
    RZ_CLIFFORD = "rz_clifford"
    RZ_PARAM = "rz_param"


TWO_QUBIT = {GateKind.CZ, GateKind.CX}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: Tuple[int, ...]
    k: int = 0  # rz_clifford angle in pi/2 units, mod 4
    param: Optional[str] = None  # rz_param identifier

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)
        n = 2 if self.kind in TWO_QUBIT else 1
        if len(self.qubits) != n:
            raise ValueError(f"{self.kind.value} takes {n} qubit(s)")


@dataclass
class Circuit:
    n_qubits: int
    gates: List[Gate] = field(default_factory=list)

    @property
    def params(self) -> List[str]:
        """Parameter ids in order of first appearance."""
        out = []
        for g in self.gates:
            if g.kind is GateKind.RZ_PARAM and g.param not in out:
                out.append(g.param)
        return out

    def param_gate_index(self, name: str) -> int:
        for i, g in enumerate(self.gates):
            if g.kind is GateKind.RZ_PARAM and g.param == name:
                return i
        raise KeyError(name)

    def validate(self) -> None:
        seen = set()
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise ValueError(f"qubit index out of range in {g}")
            if g.kind in TWO_QUBIT and g.qubits[0] == g.qubits[1]:
                raise ValueError(f"two-qubit gate on a single qubit: {g}")
            if g.kind is GateKind.RZ_PARAM:
                if g.param in seen:
                    raise RepeatedParameter(f"parameter {g.param!r} used on two gates")
                seen.add(g.param)

    def copy(self) -> "Circuit":
        return Circuit(self.n_qubits, list(self.gates))


# -- parser / printer ---------------------------------------------------------

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_NUM_PI = re.compile(r"^([+-]?[0-9]*\.?[0-9]+)pi(/2)?$")


def _parse_rz_angle(arg: str, line_no: int, col: int) -> Gate | Tuple[str, int]:
    """Returns ('param', name) or ('clifford', k)."""
    arg = arg.strip()
    if _IDENT.match(arg):
        return ("param", arg)
    m = _NUM_PI.match(arg.replace(" ", ""))
    if not m:
        if re.match(r"^[+-]?[0-9]", arg):
            raise NonCliffordConstant(f"rz angle {arg!r} is not of the form <k>pi/2", line_no, col)
        raise CircuitSyntaxError(f"bad rz argument {arg!r}", line_no, col)
    value = float(m.group(1))
    halves = value * (1 if m.group(2) else 2)  # in units of pi/2
    if abs(halves - round(halves)) > 1e-12:
        raise NonCliffordConstant(f"rz angle {arg!r} is not an exact multiple of pi/2", line_no, col)
    return ("clifford", int(round(halves)))


def parse_circuit(text: str) -> Circuit:
    """Parse circuit source; raises CircuitSyntaxError, NonCliffordConstant
    or RepeatedParameter."""
    circuit: Optional[Circuit] = None
    seen_params = set()
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if circuit is None:
            if head != "qreg":
                raise CircuitSyntaxError("first statement must be 'qreg <n>'", line_no)
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise CircuitSyntaxError("qreg needs a positive qubit count", line_no, len(head) + 1)
            circuit = Circuit(int(tokens[1]))
            continue
        if head == "qreg":
            raise CircuitSyntaxError("duplicate qreg", line_no)

        def qubit(tok: str, col: int) -> int:
            if not tok.isdigit():
                raise CircuitSyntaxError(f"expected qubit index, got {tok!r}", line_no, col)
            q = int(tok)
            if q >= circuit.n_qubits:
                raise CircuitSyntaxError(f"qubit {q} out of range (qreg {circuit.n_qubits})", line_no, col)
            return q

        simple = {"h": GateKind.H, "s": GateKind.S, "sdg": GateKind.SDG,
                  "z": GateKind.Z, "x": GateKind.X}
        if head in simple:
            if len(tokens) != 2:
                raise CircuitSyntaxError(f"{head} takes one qubit", line_no, len(head) + 1)
            circuit.gates.append(Gate(simple[head], (qubit(tokens[1], len(head) + 1),)))
        elif head in ("cz", "cx"):
            if len(tokens) != 3:
                raise CircuitSyntaxError(f"{head} takes two qubits", line_no, len(head) + 1)
            q1, q2 = qubit(tokens[1], len(head) + 1), qubit(tokens[2], len(head) + 3)
            if q1 == q2:
                raise CircuitSyntaxError(f"{head} qubits must differ", line_no, len(head) + 1)
            circuit.gates.append(Gate(GateKind.CZ if head == "cz" else GateKind.CX, (q1, q2)))
        elif head.startswith("rz"):
            m = re.match(r"^rz\((.*)\)$", tokens[0])
            if not m or len(tokens) != 2:
                raise CircuitSyntaxError("rz syntax is rz(<angle>) <qubit>", line_no)
            kind, value = _parse_rz_angle(m.group(1), line_no, 3)
            q = qubit(tokens[1], len(tokens[0]) + 1)
            if kind == "param":
                if value in seen_params:
                    raise RepeatedParameter(f"parameter {value!r} used on two gates (line {line_no})")
                seen_params.add(value)
                circuit.gates.append(Gate(GateKind.RZ_PARAM, (q,), param=value))
            else:
                circuit.gates.append(Gate(GateKind.RZ_CLIFFORD, (q,), k=value))
        else:
            raise CircuitSyntaxError(f"unknown gate {head!r}", line_no)
    if circuit is None:
        raise CircuitSyntaxError("empty source: missing qreg", 1)
    circuit.validate()
    return circuit


def emit_circuit(c: Circuit) -> str:
    """Canonical source text; parse_circuit(emit_circuit(c)) == c."""
    lines = [f"qreg {c.n_qubits}"]
    for g in c.gates:
        if g.kind is GateKind.RZ_PARAM:
            lines.append(f"rz({g.param}) {g.qubits[0]}")
        elif g.kind is GateKind.RZ_CLIFFORD:
            lines.append(f"rz({g.k}pi/2) {g.qubits[0]}")
        elif g.kind in TWO_QUBIT:
            lines.append(f"{g.kind.value} {g.qubits[0]} {g.qubits[1]}")
        else:
            lines.append(f"{g.kind.value} {g.qubits[0]}")
    return "\n".join(lines) + "\n"


# -- unitary oracle -----------------------------------------------------------

_H1 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X1 = np.array([[0, 1], [1, 0]], dtype=complex)


def _rz(angle: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * angle)]).astype(complex)


def _apply_1q(state: np.ndarray, gate: np.ndarray, q: int, n: int) -> np.ndarray:
    """Apply a 1-qubit gate to axis q of the output index (qubit 0 = MSB)."""
    t = state.reshape((2,) * n + (-1,))
    t = np.moveaxis(t, q, 0)
    t = np.tensordot(gate, t, axes=(1, 0))
    t = np.moveaxis(t, 0, q)
    return t.reshape(state.shape)


def _apply_cz(state: np.ndarray, q1: int, q2: int, n: int) -> np.ndarray:
    t = state.reshape((2,) * n + (-1,)).copy()
    idx = [slice(None)] * (n + 1)
    idx[q1] = 1
    idx[q2] = 1
    t[tuple(idx)] *= -1
    return t.reshape(state.shape)


def _apply_cx(state: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    t = state.reshape((2,) * n + (-1,)).copy()
    idx0 = [slice(None)] * (n + 1)
    idx1 = [slice(None)] * (n + 1)
    idx0[control] = 1
    idx1[control] = 1
    idx0[target] = 0
    idx1[target] = 1
    tmp = t[tuple(idx0)].copy()
    t[tuple(idx0)] = t[tuple(idx1)]
    t[tuple(idx1)] = tmp
    return t.reshape(state.shape)


def circuit_unitary(c: Circuit, assignment: Mapping[str, float] | None = None) -> np.ndarray:
    """Exact 2^n x 2^n unitary of the circuit at a parameter assignment.

    Built gate by gate on the computational basis (qubit 0 is the most
    significant bit), independent of the diagram machinery.
    """
    assignment = dict(assignment or {})
    missing = [p for p in c.params if p not in assignment]
    if missing:
        raise KeyError(f"no value for parameters {sorted(missing)}")
    n = c.n_qubits
    u = np.eye(2 ** n, dtype=complex)
    for g in c.gates:
        if g.kind is GateKind.H:
            u = _apply_1q(u, _H1, g.qubits[0], n)
        elif g.kind is GateKind.S:
            u = _apply_1q(u, _rz(math.pi / 2), g.qubits[0], n)
        elif g.kind is GateKind.SDG:
            u = _apply_1q(u, _rz(-math.pi / 2), g.qubits[0], n)
        elif g.kind is GateKind.Z:
            u = _apply_1q(u, _rz(math.pi), g.qubits[0], n)
        elif g.kind is GateKind.X:
            u = _apply_1q(u, _X1, g.qubits[0], n)
        elif g.kind is GateKind.RZ_CLIFFORD:
            u = _apply_1q(u, _rz(g.k * math.pi / 2), g.qubits[0], n)
        elif g.kind is GateKind.RZ_PARAM:
            u = _apply_1q(u, _rz(assignment[g.param]), g.qubits[0], n)
        elif g.kind is GateKind.CZ:
            u = _apply_cz(u, g.qubits[0], g.qubits[1], n)
        elif g.kind is GateKind.CX:
            u = _apply_cx(u, g.qubits[0], g.qubits[1], n)
        else:
            raise ValueError(f"unhandled gate {g}")
    return u


def flatten_unitary(u: np.ndarray, n: int) -> np.ndarray:
    """Flatten ⟨o|U|i⟩ to the tensor_eval wire convention (inputs then outputs)."""
    arr = u.reshape((2,) * (2 * n))
    arr = np.transpose(arr, list(range(n, 2 * n)) + list(range(n)))
    return np.ascontiguousarray(arr).reshape(-1)


# -- translation to diagrams --------------------------------------------------

def circuit_to_network(c: Circuit) -> SpiderNetwork:
    """Standard gate gadgets: CZ is a Hadamard edge, CX a Z-X plain edge."""
    c.validate()
    net = SpiderNetwork()
    frontier: List[int] = []
    for q in range(c.n_qubits):
        frontier.append(net.node(NKind.INPUT, position=q))

    def extend(q: int, kind: NKind, phase: Phase = Phase()) -> int:
        node = net.node(kind, phase)
        net.wire(frontier[q], node)
        frontier[q] = node
        return node

    for g in c.gates:
        if g.kind is GateKind.H:
            extend(g.qubits[0], NKind.HBOX)
        elif g.kind is GateKind.S:
            extend(g.qubits[0], NKind.Z, Phase(1))
        elif g.kind is GateKind.SDG:
            extend(g.qubits[0], NKind.Z, Phase(3))
        elif g.kind is GateKind.Z:
            extend(g.qubits[0], NKind.Z, Phase(2))
        elif g.kind is GateKind.X:
            extend(g.qubits[0], NKind.X, Phase(2))
        elif g.kind is GateKind.RZ_CLIFFORD:
            extend(g.qubits[0], NKind.Z, Phase(g.k))
        elif g.kind is GateKind.RZ_PARAM:
            extend(g.qubits[0], NKind.Z, Phase(0, ((g.param, 1),)))
        elif g.kind is GateKind.CZ:
            a = extend(g.qubits[0], NKind.Z)
            b = extend(g.qubits[1], NKind.Z)
            h = net.node(NKind.HBOX)
            net.wire(a, h)
            net.wire(h, b)
        elif g.kind is GateKind.CX:
            control = extend(g.qubits[0], NKind.Z)
            target = extend(g.qubits[1], NKind.X)
            net.wire(control, target)
        else:
            raise ValueError(f"unhandled gate {g}")

    for q in range(c.n_qubits):
        out = net.node(NKind.OUTPUT, position=q)
        net.wire(frontier[q], out)
    return net


def circuit_to_diagram(c: Circuit) -> Diagram:
    """Graph-like diagram tensor-proportional to the circuit's unitary."""
    return to_graph_like(circuit_to_network(c))


def circuit_state_diagram(c: Circuit) -> Diagram:
    """Graph-like diagram of the state  c |0...0> ; a phase-0 X-spider per
    qubit replaces the input wires."""
    net = circuit_to_network(c)
    for v, kind in list(net.kinds.items()):
        if kind is NKind.INPUT:
            net.kinds[v] = NKind.X
            net.positions.pop(v, None)
    return to_graph_like(net)
