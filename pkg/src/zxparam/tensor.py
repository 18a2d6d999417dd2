"""Exact tensor evaluation of diagrams and proportionality checking.

The contraction uses the plain Z-spider semantics: a spider of degree d
with phase a denotes the tensor with 1 at (0,...,0), e^{ia} at (1,...,1)
and 0 elsewhere; a Hadamard edge inserts the 2x2 Hadamard matrix.  These
evaluators are the independent oracle the rewrite engine is tested against,
so they deliberately share no code with the rewrite rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

import numpy as np

from .diagram import Diagram, EdgeKind, VKind
from .errors import MissingAssignment, ShapeMismatch, TooLarge

MAX_OPEN_WIRES = 12

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass
class TensorState:
    """Dense amplitudes over the diagram's open wires.

    ``wire_order`` lists boundary ids; the first wire is the most
    significant bit of the amplitude index.
    """

    amplitudes: np.ndarray
    wire_order: Tuple[int, ...]

    @property
    def n_wires(self) -> int:
        return len(self.wire_order)


class _Node:
    __slots__ = ("tensor", "legs")

    def __init__(self, tensor: np.ndarray, legs: List[object]):
        self.tensor = tensor
        self.legs = legs


def _spider_tensor(degree: int, angle: float) -> np.ndarray:
    if degree == 0:
        return np.array(1.0 + np.exp(1j * angle))
    t = np.zeros((2,) * degree, dtype=complex)
    t[(0,) * degree] = 1.0
    t[(1,) * degree] = np.exp(1j * angle)
    return t


def _contract_pair(a: _Node, b: _Node) -> _Node:
    shared = [leg for leg in a.legs if leg in b.legs]
    ax_a = [a.legs.index(leg) for leg in shared]
    ax_b = [b.legs.index(leg) for leg in shared]
    tensor = np.tensordot(a.tensor, b.tensor, axes=(ax_a, ax_b))
    legs = [leg for leg in a.legs if leg not in shared] + [leg for leg in b.legs if leg not in shared]
    return _Node(tensor, legs)


def _contract_network(nodes: List[_Node]) -> _Node:
    """Greedy pairwise contraction, smallest intermediate first."""
    nodes = list(nodes)
    while len(nodes) > 1:
        best = None
        best_cost = None
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                shared = sum(1 for leg in nodes[i].legs if leg in nodes[j].legs)
                if shared == 0:
                    continue
                cost = nodes[i].tensor.ndim + nodes[j].tensor.ndim - 2 * shared
                if best_cost is None or cost < best_cost:
                    best, best_cost = (i, j), cost
        if best is None:
            # disconnected components: multiply the scalar-most pair
            nodes.sort(key=lambda n: n.tensor.ndim)
            a, b = nodes[0], nodes[1]
            tensor = np.tensordot(a.tensor, b.tensor, axes=0)
            merged = _Node(tensor, a.legs + b.legs)
            nodes = [merged] + nodes[2:]
            continue
        i, j = best
        merged = _contract_pair(nodes[i], nodes[j])
        if merged.tensor.ndim > 26:
            raise TooLarge(f"intermediate tensor of rank {merged.tensor.ndim}")
        nodes = [n for k, n in enumerate(nodes) if k not in (i, j)] + [merged]
    return nodes[0]


def tensor_eval(d: Diagram, assignment: Mapping[str, float] | None = None) -> TensorState:
    """Contract ``d`` exactly at a concrete parameter assignment.

    Wire order is all inputs (by position) followed by all outputs (by
    position).  The result carries the definite scalar of this contraction;
    diagram rewrites only promise proportional results.
    """
    assignment = dict(assignment or {})
    missing = [p for p in d.param_registry if p not in assignment]
    if missing:
        raise MissingAssignment(f"no value for parameters {sorted(missing)}")
    wire_order = tuple(d.inputs() + d.outputs())
    if len(wire_order) > MAX_OPEN_WIRES:
        raise TooLarge(f"{len(wire_order)} open wires exceeds limit {MAX_OPEN_WIRES}")

    nodes: List[_Node] = []
    open_legs: Dict[int, object] = {}

    edge_leg = {}
    for a, b, kind in d.edges():
        edge_leg[(a, b)] = ("e", a, b)

    def leg_of(v: int, other: int):
        key = (v, other) if (v, other) in edge_leg else (other, v)
        return edge_leg[key]

    for a, b, kind in d.edges():
        if kind is EdgeKind.HADAMARD:
            mid = ("h", a, b)
            nodes.append(_Node(HADAMARD.copy(), [("e", a, b), mid]))
            edge_leg[(a, b)] = ("e", a, b)  # spider a side keeps original leg
            # record that b's side attaches to mid
            edge_leg[(b, a)] = mid

    def side_leg(v: int, other: int):
        if (v, other) in edge_leg:
            return edge_leg[(v, other)]
        return edge_leg[(other, v)]

    for v in d.vertices():
        data = d.vertex(v)
        nbrs = d.neighbors(v)
        legs = [side_leg(v, n) for n in nbrs]
        if data.kind is VKind.SPIDER:
            angle = data.phase.angle(assignment)
            nodes.append(_Node(_spider_tensor(len(legs), angle), legs))
        else:
            # boundary node: its single edge leg is the open wire
            if len(legs) != 1:
                raise ValueError(f"boundary node {v} has degree {len(legs)}")
            open_legs[v] = legs[0]

    if not nodes:
        # bare wires only: identity-like network of boundary pairs
        nodes.append(_Node(np.array(1.0 + 0j), []))

    # identity node for each open leg so open legs survive contraction
    for v, leg in open_legs.items():
        nodes.append(_Node(np.eye(2, dtype=complex), [leg, ("open", v)]))

    result = _contract_network(nodes)
    order = [result.legs.index(("open", v)) for v in wire_order]
    tensor = np.transpose(result.tensor, order) if order else result.tensor
    return TensorState(np.ascontiguousarray(tensor).reshape(-1), wire_order)


@dataclass
class ProportionalityReport:
    holds: bool
    ratios: List[complex]
    max_deviation: float

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "ratios": [[float(r.real), float(r.imag)] for r in self.ratios],
            "max_deviation": float(self.max_deviation),
        }


def proportionality_ratio(t1: np.ndarray, t2: np.ndarray, tol: float) -> Tuple[bool, complex, float]:
    """Is ``t1 = lam * t2`` for a nonzero ``lam``?  Returns (holds, lam, deviation)."""
    n1 = np.max(np.abs(t1))
    n2 = np.max(np.abs(t2))
    if n1 == 0 and n2 == 0:
        return True, 1.0 + 0j, 0.0
    if n1 == 0 or n2 == 0:
        return False, 0j, 1.0
    idx = int(np.argmax(np.abs(t2)))
    lam = t1[idx] / t2[idx]
    if lam == 0:
        return False, lam, 1.0
    deviation = float(np.max(np.abs(t1 - lam * t2)) / max(n1, float(np.abs(lam)) * n2))
    return deviation <= tol, lam, deviation


def check_proportional(t1: TensorState, t2: TensorState, tol: float = 1e-9) -> ProportionalityReport:
    """Proportionality of two tensor states up to one nonzero scalar."""
    if t1.n_wires != t2.n_wires:
        raise ShapeMismatch(f"wire counts differ: {t1.n_wires} vs {t2.n_wires}")
    holds, lam, dev = proportionality_ratio(t1.amplitudes, t2.amplitudes, tol)
    return ProportionalityReport(holds=holds, ratios=[lam], max_deviation=dev)
