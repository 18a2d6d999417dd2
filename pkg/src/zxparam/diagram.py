"""Graph-like parametrised ZX diagrams and conversion from raw spider networks.

A graph-like diagram has only Z-spiders, every spider-spider edge is a
Hadamard edge, the graph is simple, and boundary nodes have degree one.
Boundary edges may be plain or Hadamard; a Hadamard boundary edge encodes
the local Hadamard of the GSLC pseudo-normal form, while a boundary
spider's Clifford phase encodes its S-power.

Vertex ids are stable: an id removed by a rewrite is never reused, so
provenance tracking across rewrites can rely on identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from .errors import RepeatedParameter
from .params import ParamExpr, Phase


class EdgeKind(Enum):
    PLAIN = "plain"
    HADAMARD = "hadamard"


class VKind(Enum):
    INPUT = "input"
    OUTPUT = "output"
    SPIDER = "spider"


@dataclass
class Vertex:
    kind: VKind
    phase: Phase = field(default_factory=Phase)
    position: Optional[int] = None  # wire index, boundaries only

    @property
    def is_boundary(self) -> bool:
        return self.kind is not VKind.SPIDER


class Diagram:
    """Mutable graph-like ZX diagram with a parameter registry."""

    def __init__(self):
        self._vertices: Dict[int, Vertex] = {}
        self._adj: Dict[int, Dict[int, EdgeKind]] = {}
        self._next_id = 0
        self.param_registry: Dict[str, int] = {}

    # -- construction ---------------------------------------------------

    def _new_id(self) -> int:
        v = self._next_id
        self._next_id += 1
        return v

    def add_spider(self, phase: Phase = Phase()) -> int:
        v = self._new_id()
        self._vertices[v] = Vertex(VKind.SPIDER, phase)
        self._adj[v] = {}
        for name in phase.param_ids:
            self._register(name, v)
        return v

    def add_boundary(self, kind: VKind, position: int) -> int:
        if kind is VKind.SPIDER:
            raise ValueError("boundary vertex must be INPUT or OUTPUT")
        v = self._new_id()
        self._vertices[v] = Vertex(kind, Phase(), position)
        self._adj[v] = {}
        return v

    def add_edge(self, a: int, b: int, kind: EdgeKind = EdgeKind.HADAMARD) -> None:
        if a == b:
            raise ValueError("self-loops are not allowed in a graph-like diagram")
        if b in self._adj[a]:
            raise ValueError(f"parallel edge {a}-{b}")
        self._adj[a][b] = kind
        self._adj[b][a] = kind

    def _register(self, name: str, v: int) -> None:
        if name in self.param_registry and self.param_registry[name] != v:
            raise RepeatedParameter(f"parameter {name!r} already bound to spider {self.param_registry[name]}")
        self.param_registry[name] = v

    # -- queries ---------------------------------------------------------

    def vertex(self, v: int) -> Vertex:
        return self._vertices[v]

    def vertices(self) -> Iterator[int]:
        return iter(self._vertices)

    def spiders(self) -> List[int]:
        return [v for v, d in self._vertices.items() if d.kind is VKind.SPIDER]

    def boundaries(self) -> List[int]:
        return [v for v, d in self._vertices.items() if d.kind is not VKind.SPIDER]

    def inputs(self) -> List[int]:
        ins = [v for v, d in self._vertices.items() if d.kind is VKind.INPUT]
        return sorted(ins, key=lambda v: self._vertices[v].position or 0)

    def outputs(self) -> List[int]:
        outs = [v for v, d in self._vertices.items() if d.kind is VKind.OUTPUT]
        return sorted(outs, key=lambda v: self._vertices[v].position or 0)

    def neighbors(self, v: int) -> List[int]:
        return list(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edge_kind(self, a: int, b: int) -> EdgeKind:
        return self._adj[a][b]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj.get(a, {})

    def edges(self) -> Iterator[Tuple[int, int, EdgeKind]]:
        for a, nbrs in self._adj.items():
            for b, kind in nbrs.items():
                if a < b:
                    yield a, b, kind

    def phase(self, v: int) -> Phase:
        return self._vertices[v].phase

    def is_internal(self, v: int) -> bool:
        """A spider none of whose neighbours is a boundary node."""
        data = self._vertices[v]
        if data.kind is not VKind.SPIDER:
            return False
        return all(not self._vertices[n].is_boundary for n in self._adj[v])

    def is_boundary_spider(self, v: int) -> bool:
        data = self._vertices[v]
        if data.kind is not VKind.SPIDER:
            return False
        return any(self._vertices[n].is_boundary for n in self._adj[v])

    def boundary_wires(self, v: int) -> List[int]:
        """Boundary nodes attached to spider ``v``."""
        return [n for n in self._adj[v] if self._vertices[n].is_boundary]

    # -- mutation ---------------------------------------------------------

    def set_phase(self, v: int, phase: Phase) -> None:
        old = self._vertices[v].phase
        for name in old.param_ids:
            if self.param_registry.get(name) == v:
                del self.param_registry[name]
        self._vertices[v].phase = phase
        for name in phase.param_ids:
            self._register(name, v)

    def add_to_phase(self, v: int, k: int) -> None:
        self._vertices[v].phase = self._vertices[v].phase.add_clifford(k)

    def add_expr_to_phase(self, v: int, expr: ParamExpr) -> None:
        self.set_phase(v, self.phase(v).add_expr(expr))

    def remove_edge(self, a: int, b: int) -> None:
        del self._adj[a][b]
        del self._adj[b][a]

    def toggle_hadamard(self, a: int, b: int) -> None:
        """Complement the Hadamard edge between two spiders."""
        if b in self._adj[a]:
            self.remove_edge(a, b)
        else:
            self.add_edge(a, b, EdgeKind.HADAMARD)

    def remove_vertex(self, v: int) -> None:
        for n in list(self._adj[v]):
            self.remove_edge(v, n)
        for name in self._vertices[v].phase.param_ids:
            if self.param_registry.get(name) == v:
                del self.param_registry[name]
        del self._adj[v]
        del self._vertices[v]

    def copy(self) -> "Diagram":
        d = Diagram()
        d._vertices = {v: Vertex(x.kind, x.phase, x.position) for v, x in self._vertices.items()}
        d._adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        d._next_id = self._next_id
        d.param_registry = dict(self.param_registry)
        return d

    # -- structure helpers -------------------------------------------------

    def connected_components(self) -> List[Set[int]]:
        seen: Set[int] = set()
        comps = []
        for start in self._vertices:
            if start in seen:
                continue
            comp = {start}
            queue = [start]
            while queue:
                v = queue.pop()
                for n in self._adj[v]:
                    if n not in comp:
                        comp.add(n)
                        queue.append(n)
            seen |= comp
            comps.append(comp)
        return comps

    def param_exprs(self) -> Dict[int, ParamExpr]:
        """Parametrised spiders and their expressions, keyed by spider id."""
        out = {}
        for v, data in self._vertices.items():
            if data.kind is VKind.SPIDER and not data.phase.is_clifford():
                out[v] = data.phase.expr
        return out

    def __repr__(self) -> str:
        return (f"Diagram({len(self.spiders())} spiders, {len(self.boundaries())} boundaries, "
                f"{sum(1 for _ in self.edges())} edges, params {sorted(self.param_registry)})")


@dataclass(frozen=True)
class GadgetView:
    """A phase gadget: a 0/pi axis hub with a degree-1 phase carrier."""

    axis_spider: int
    phase_spider: int
    neighbourhood: FrozenSet[int]


def axis_parity(d: Diagram, g: GadgetView) -> int:
    """0 if the axis phase is 0, 1 if it is pi."""
    return d.phase(g.axis_spider).clifford // 2


def find_gadgets(d: Diagram) -> List[GadgetView]:
    """All phase gadgets of ``d``, sorted by axis id.

    An axis is an internal non-parametrised spider with a 0 or pi phase and
    exactly one degree-1 internal neighbour (the phase spider).  Hubs with
    several degree-1 plugs are left to the rewrite rules to resolve and are
    not reported as gadgets.
    """
    gadgets = []
    for v in sorted(d.spiders()):
        ph = d.phase(v)
        if not ph.is_pauli() or not d.is_internal(v):
            continue
        legs = [n for n in d.neighbors(v)
                if d.degree(n) == 1 and d.vertex(n).kind is VKind.SPIDER]
        if len(legs) != 1:
            continue
        leg = legs[0]
        nbhd = frozenset(n for n in d.neighbors(v) if n != leg)
        gadgets.append(GadgetView(axis_spider=v, phase_spider=leg, neighbourhood=nbhd))
    return gadgets


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def validate(d: Diagram) -> ValidationReport:
    """Report every violated graph-like invariant; empty report iff well-formed."""
    report = ValidationReport()
    for a, b, kind in d.edges():
        va, vb = d.vertex(a), d.vertex(b)
        if not va.is_boundary and not vb.is_boundary and kind is not EdgeKind.HADAMARD:
            report.add(f"plain spider-spider edge {a}-{b}")
    for v in d.vertices():
        data = d.vertex(v)
        if v in d._adj.get(v, {}):
            report.add(f"self-loop at vertex {v}")
        if data.is_boundary:
            if d.degree(v) != 1:
                report.add(f"boundary node {v} has degree {d.degree(v)}")
            if not data.phase.is_zero():
                report.add(f"boundary node {v} carries a phase")
    seen: Dict[str, int] = {}
    for v in d.spiders():
        for name in d.phase(v).param_ids:
            if name in seen:
                report.add(f"parameter {name!r} on spiders {seen[name]} and {v}")
            seen[name] = v
    for name, v in seen.items():
        if d.param_registry.get(name) != v:
            report.add(f"registry maps {name!r} to {d.param_registry.get(name)}, spider is {v}")
    for name in d.param_registry:
        if name not in seen:
            report.add(f"registry entry {name!r} has no owning spider")
    return report


# -- raw spider networks and the graph-like conversion -----------------------


class NKind(Enum):
    Z = "Z"
    X = "X"
    HBOX = "H"
    INPUT = "input"
    OUTPUT = "output"


class SpiderNetwork:
    """An arbitrary network of Z/X spiders, Hadamard boxes and boundary nodes.

    Edges form a multigraph and may connect any two nodes; this is the raw
    form a circuit translates into before conversion to a graph-like diagram.
    """

    def __init__(self):
        self.kinds: Dict[int, NKind] = {}
        self.phases: Dict[int, Phase] = {}
        self.positions: Dict[int, int] = {}
        self.edges: List[Tuple[int, int]] = []
        self._next = 0

    def node(self, kind: NKind, phase: Phase = Phase(), position: int | None = None) -> int:
        v = self._next
        self._next += 1
        self.kinds[v] = kind
        self.phases[v] = phase
        if position is not None:
            self.positions[v] = position
        return v

    def wire(self, a: int, b: int) -> None:
        self.edges.append((a, b))


def to_graph_like(raw: SpiderNetwork) -> Diagram:
    """Convert an arbitrary spider network into a graph-like diagram.

    Colour change turns X-spiders into Z-spiders with toggled edges, Hadamard
    boxes become edge toggles, plain edges between spiders are fused away,
    self-loops and parallel edges resolve by the standard mod-2 edge algebra
    (a Hadamard self-loop leaves a pi phase, parallel Hadamard edges cancel).
    The result is tensor-equal to the input up to a nonzero constant scalar.

    Raises RepeatedParameter if one parameter id occurs on two spiders.
    """
    seen_params: Dict[str, int] = {}
    for v, ph in raw.phases.items():
        for name in ph.param_ids:
            if name in seen_params:
                raise RepeatedParameter(f"parameter {name!r} occurs on nodes {seen_params[name]} and {v}")
            seen_params[name] = v

    # Working copies.  Edges carry a Hadamard parity bit.
    kinds = dict(raw.kinds)
    phases = dict(raw.phases)
    edges: List[List] = []  # [node, node, parity]
    for a, b in raw.edges:
        edges.append([a, b, 0])

    # Absorb H-boxes into edge parities.  An H-box must have exactly 2 wires.
    for v, kind in list(kinds.items()):
        if kind is not NKind.HBOX:
            continue
        incident = [e for e in edges if v in (e[0], e[1])]
        if len(incident) != 2:
            raise ValueError(f"Hadamard box {v} must have exactly 2 wires, has {len(incident)}")
        (e1, e2) = incident
        a = e1[0] if e1[1] == v else e1[1]
        b = e2[0] if e2[1] == v else e2[1]
        parity = (e1[2] + e2[2] + 1) % 2
        edges.remove(e1)
        if e2 is not e1:
            edges.remove(e2)
        edges.append([a, b, parity])
        del kinds[v]
        del phases[v]

    # Colour change: X spider becomes Z spider, toggling all incident parities.
    for v, kind in list(kinds.items()):
        if kind is not NKind.X:
            continue
        for e in edges:
            if e[0] == v:
                e[2] ^= 1
            if e[1] == v:
                e[2] ^= 1
            if e[0] == v and e[1] == v:
                e[2] ^= 0  # both endpoint toggles already applied
        kinds[v] = NKind.Z

    def resolve_local(v: int) -> None:
        """Remove self-loops at v and cancel parallel edge pairs incident to v."""
        changed = True
        while changed:
            changed = False
            for e in list(edges):
                if e[0] == v and e[1] == v:
                    if e[2] == 1:
                        phases[v] = phases[v].add_clifford(2)
                    edges.remove(e)
                    changed = True
            by_pair: Dict[FrozenSet[int], List] = {}
            for e in edges:
                if v in (e[0], e[1]):
                    by_pair.setdefault(frozenset((e[0], e[1])), []).append(e)
            for pair, es in by_pair.items():
                plains = [e for e in es if e[2] == 0]
                hads = [e for e in es if e[2] == 1]
                if len(plains) > 1:
                    # duplicate plain wires between spiders are redundant
                    for e in plains[1:]:
                        edges.remove(e)
                    changed = True
                if len(hads) > 1:
                    # Hopf: parallel Hadamard edges cancel pairwise
                    for e in hads[: 2 * (len(hads) // 2)]:
                        edges.remove(e)
                    changed = True

    # Fuse along plain spider-spider edges until only Hadamard edges remain.
    def find_plain_fusion() -> Optional[List]:
        for e in edges:
            a, b, parity = e
            if parity == 0 and kinds.get(a) is NKind.Z and kinds.get(b) is NKind.Z and a != b:
                return e
        return None

    for v in list(kinds):
        if kinds[v] is NKind.Z:
            resolve_local(v)

    while True:
        e = find_plain_fusion()
        if e is None:
            break
        a, b, _ = e
        edges.remove(e)
        phases[a] = phases[a].add_expr(phases[b].expr)
        for other in edges:
            if other[0] == b:
                other[0] = a
            if other[1] == b:
                other[1] = a
        del kinds[b]
        del phases[b]
        resolve_local(a)

    # Build the Diagram.  Boundary-boundary wires keep their parity as edge kind.
    d = Diagram()
    id_map: Dict[int, int] = {}
    for v, kind in kinds.items():
        if kind is NKind.Z:
            id_map[v] = d.add_spider(phases[v])
        elif kind is NKind.INPUT:
            id_map[v] = d.add_boundary(VKind.INPUT, raw.positions.get(v, 0))
        elif kind is NKind.OUTPUT:
            id_map[v] = d.add_boundary(VKind.OUTPUT, raw.positions.get(v, 0))
        else:
            raise ValueError(f"unresolved node kind {kind}")
    for a, b, parity in edges:
        kind = EdgeKind.HADAMARD if parity else EdgeKind.PLAIN
        da, db = id_map[a], id_map[b]
        if d.has_edge(da, db):
            # can only happen between a spider and a boundary pair; keep simple
            raise ValueError(f"unresolved parallel edge {da}-{db}")
        d.add_edge(da, db, kind)

    report = validate(d)
    if not report.ok:
        raise ValueError("conversion produced an invalid diagram: " + "; ".join(report.violations))
    return d
