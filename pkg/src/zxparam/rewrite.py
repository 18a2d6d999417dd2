"""Simplification rules for graph-like diagrams and the fixpoint driver.

Every rule preserves the diagram's tensor up to a scalar.  For local
complementation, pivots and gadget creation that scalar is a constant.
Fusing a gadget whose axis carries pi flips the sign of the absorbed
expression and discards a phase factor e^{i e(a)} that depends on the
parameters; the event records the discarded expression in ``dropped`` so
soundness can be checked exactly, and the sign flips in ``param_merge``
feed the affine map extraction.  Scalar removal likewise records the
parameters that vanish with a boundary-free component.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Dict, FrozenSet, List, Optional, Tuple

from .diagram import Diagram, EdgeKind, GadgetView, VKind, axis_parity, find_gadgets
from .errors import NotApplicable
from .params import ParamExpr, Phase


class Rule(Enum):
    LOCAL_COMP = "LocalComp"
    PIVOT = "Pivot"
    BOUNDARY_PIVOT = "BoundaryPivot"
    GADGET_PIVOT = "GadgetPivot"
    GADGET_FUSION = "GadgetFusion"
    GADGET_ID_FUSE = "GadgetIdFuse"
    SCALAR_REMOVAL = "ScalarRemoval"


@dataclass(frozen=True)
class ParamMerge:
    """Parameters absorbed into a surviving spider, with the applied signs."""

    absorbed: Tuple[Tuple[str, int], ...]
    survivor: int


@dataclass
class RewriteEvent:
    rule: Rule
    removed: Tuple[int, ...] = ()
    touched: Tuple[int, ...] = ()
    param_merge: Optional[ParamMerge] = None
    moved: Tuple[Tuple[str, int], ...] = ()  # parameter id -> new owning spider
    eliminated: Tuple[str, ...] = ()  # parameters dropped with a scalar component
    dropped: Optional[ParamExpr] = None  # phase e^{i expr} discarded by this rewrite


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise NotApplicable(message)


def _is_internal_pauli(d: Diagram, v: int) -> bool:
    if v not in d._vertices or d.vertex(v).kind is not VKind.SPIDER:
        return False
    ph = d.phase(v)
    return d.is_internal(v) and ph.is_pauli()


def _degree_one_plugs(d: Diagram, v: int) -> List[int]:
    return [n for n in d.neighbors(v)
            if d.degree(n) == 1 and d.vertex(n).kind is VKind.SPIDER]


def _is_clean_axis(d: Diagram, v: int) -> bool:
    return _is_internal_pauli(d, v) and len(_degree_one_plugs(d, v)) == 1


# -- local complementation ----------------------------------------------------

def local_complement_simp(d: Diagram, v: int) -> RewriteEvent:
    """Remove an internal spider with phase +-pi/2, complementing its
    neighbourhood and shifting each neighbour's phase by the opposite
    quarter turn."""
    _require(v in d._vertices and d.vertex(v).kind is VKind.SPIDER, f"{v} is not a spider")
    ph = d.phase(v)
    _require(ph.is_clifford() and ph.clifford in (1, 3), f"spider {v} phase is not +-pi/2")
    _require(d.is_internal(v), f"spider {v} is boundary-adjacent")
    nbrs = sorted(d.neighbors(v))
    d.remove_vertex(v)
    for a in nbrs:
        d.add_to_phase(a, -ph.clifford)
    for a, b in itertools.combinations(nbrs, 2):
        d.toggle_hadamard(a, b)
    return RewriteEvent(Rule.LOCAL_COMP, removed=(v,), touched=tuple(nbrs))


# -- pivot family -------------------------------------------------------------

def _pivot_core(d: Diagram, u: int, v: int) -> Tuple[int, ...]:
    """Remove the adjacent Pauli pair (u, v); complement edges between the
    three neighbourhood classes and propagate the pi phases."""
    pu, pv = d.phase(u).clifford, d.phase(v).clifford
    nu = set(d.neighbors(u)) - {v}
    nv = set(d.neighbors(v)) - {u}
    common = nu & nv
    only_u = nu - common
    only_v = nv - common
    d.remove_vertex(u)
    d.remove_vertex(v)
    for a, b in itertools.chain(
            itertools.product(only_u, only_v),
            itertools.product(only_u, common),
            itertools.product(only_v, common)):
        d.toggle_hadamard(a, b)
    for w in only_u:
        d.add_to_phase(w, pv)
    for w in only_v:
        d.add_to_phase(w, pu)
    for w in common:
        d.add_to_phase(w, 2 + pu + pv)
    return tuple(sorted(only_u | only_v | common))


def pivot_simp(d: Diagram, u: int, v: int) -> RewriteEvent:
    """Remove a Hadamard-adjacent pair of internal spiders with 0/pi phases."""
    for w in (u, v):
        _require(_is_internal_pauli(d, w), f"spider {w} is not an internal 0/pi Clifford spider")
    _require(d.has_edge(u, v), f"{u} and {v} are not adjacent")
    touched = _pivot_core(d, u, v)
    return RewriteEvent(Rule.PIVOT, removed=(u, v), touched=touched)


def _buffer_boundary_wires(d: Diagram, b: int) -> List[int]:
    """Insert a phase-0 spider on every boundary wire of ``b`` so that ``b``
    becomes internal; the inserted chain is tensor-exact."""
    added = []
    for o in d.boundary_wires(b):
        kind = d.edge_kind(b, o)
        d.remove_edge(b, o)
        z = d.add_spider(Phase())
        d.add_edge(b, z, EdgeKind.HADAMARD)
        d.add_edge(z, o, EdgeKind.HADAMARD if kind is EdgeKind.PLAIN else EdgeKind.PLAIN)
        added.append(z)
    return added


def _extract_phase_to_gadget(d: Diagram, w: int) -> Tuple[int, int]:
    """Unfuse the phase of ``w`` onto a fresh degree-1 spider behind a fresh
    phase-0 hub; tensor-exact.  Returns (hub, phase spider)."""
    expr = d.phase(w).expr
    d.set_phase(w, Phase())
    hub = d.add_spider(Phase())
    leaf = d.add_spider(Phase.from_expr(expr))
    d.add_edge(w, hub, EdgeKind.HADAMARD)
    d.add_edge(hub, leaf, EdgeKind.HADAMARD)
    return hub, leaf


def boundary_pivot(d: Diagram, u: int, b: int) -> RewriteEvent:
    """Pivot an internal 0/pi spider against a boundary spider.

    The boundary wires of ``b`` are split with fresh phase-0 spiders, the
    phase of ``b`` (Clifford or parametrised) moves onto a fresh phase
    gadget, and a regular pivot removes the pair.  Follow-up rules remove
    the introduced spiders again whenever the extracted phase is Clifford.
    """
    _require(_is_internal_pauli(d, u), f"spider {u} is not an internal 0/pi Clifford spider")
    _require(b in d._vertices and d.is_boundary_spider(b), f"{b} is not a boundary spider")
    _require(d.has_edge(u, b), f"{u} and {b} are not adjacent")
    _require(not _is_clean_axis(d, u), f"spider {u} is a gadget axis")
    added = _buffer_boundary_wires(d, b)
    moved: Tuple[Tuple[str, int], ...] = ()
    if not d.phase(b).is_zero():
        hub, leaf = _extract_phase_to_gadget(d, b)
        added += [hub, leaf]
        moved = tuple((name, leaf) for name in d.phase(leaf).param_ids)
    touched = _pivot_core(d, u, b)
    return RewriteEvent(Rule.BOUNDARY_PIVOT, removed=(u, b),
                        touched=tuple(sorted(set(touched) | set(added))), moved=moved)


def gadget_pivot(d: Diagram, u: int, w: int) -> RewriteEvent:
    """Remove an internal 0/pi spider adjacent to a parametrised spider by
    rebuilding it as a phase gadget.

    The phase of ``w`` moves onto a fresh degree-1 spider whose hub takes
    over the old neighbourhood of ``u``; the hub inherits the 0/pi phase of
    ``u``, so the rewrite is sound up to a constant scalar with the
    parameter sign unchanged.
    """
    _require(_is_internal_pauli(d, u), f"spider {u} is not an internal 0/pi Clifford spider")
    _require(not _is_clean_axis(d, u), f"spider {u} is a gadget axis")
    _require(w in d._vertices and d.vertex(w).kind is VKind.SPIDER and d.is_internal(w),
             f"{w} is not an internal spider")
    _require(not d.phase(w).is_clifford(), f"spider {w} carries no parameter")
    _require(d.has_edge(u, w), f"{u} and {w} are not adjacent")
    _require(d.degree(w) > 1, f"{u} and {w} already form a phase gadget")
    hub, leaf = _extract_phase_to_gadget(d, w)
    moved = tuple((name, leaf) for name in d.phase(leaf).param_ids)
    touched = _pivot_core(d, u, w)
    return RewriteEvent(Rule.GADGET_PIVOT, removed=(u, w),
                        touched=tuple(sorted(set(touched) | {hub, leaf})), moved=moved)


# -- gadget fusion ------------------------------------------------------------

def _check_gadget(d: Diagram, g: GadgetView) -> None:
    ok = (g.axis_spider in d._vertices and g.phase_spider in d._vertices
          and _is_internal_pauli(d, g.axis_spider)
          and d.degree(g.phase_spider) == 1
          and d.has_edge(g.axis_spider, g.phase_spider)
          and frozenset(n for n in d.neighbors(g.axis_spider) if n != g.phase_spider) == g.neighbourhood)
    _require(ok, f"not a current phase gadget: {g}")


def gadget_fusion(d: Diagram, g1: GadgetView, g2: GadgetView) -> RewriteEvent:
    """Fuse two phase gadgets with identical neighbourhoods.

    Expressions add term-wise; if the axis parities differ the absorbed
    expression enters negated and the discarded phase factor is recorded.
    A fusion that cancels all parameters leaves a Clifford degree-1 spider
    for the Clifford rules to remove.
    """
    _check_gadget(d, g1)
    _check_gadget(d, g2)
    _require(g1.axis_spider != g2.axis_spider, "cannot fuse a gadget with itself")
    _require(g1.neighbourhood == g2.neighbourhood, "gadget neighbourhoods differ")
    survivor, absorbed = (g1, g2) if g1.axis_spider < g2.axis_spider else (g2, g1)
    same_parity = axis_parity(d, survivor) == axis_parity(d, absorbed)
    expr = d.phase(absorbed.phase_spider).expr
    signed = expr if same_parity else expr.negated()
    sign = 1 if same_parity else -1
    d.remove_vertex(absorbed.phase_spider)
    d.remove_vertex(absorbed.axis_spider)
    d.add_expr_to_phase(survivor.phase_spider, signed)
    merge = None
    if expr.param_ids:
        merge = ParamMerge(tuple((name, sign) for name in expr.param_ids),
                           survivor.phase_spider)
    return RewriteEvent(Rule.GADGET_FUSION,
                        removed=(absorbed.axis_spider, absorbed.phase_spider),
                        touched=(survivor.axis_spider, survivor.phase_spider),
                        param_merge=merge,
                        dropped=None if same_parity else expr)


def gadget_id_fuse(d: Diagram, g: GadgetView) -> RewriteEvent:
    """Fuse a gadget with exactly one neighbour into that neighbour's phase.

    A 0 axis adds the expression directly; a pi axis adds it negated and
    discards the corresponding phase factor.
    """
    _check_gadget(d, g)
    _require(len(g.neighbourhood) == 1, f"gadget has {len(g.neighbourhood)} neighbours")
    (w,) = g.neighbourhood
    parity = axis_parity(d, g)
    expr = d.phase(g.phase_spider).expr
    signed = expr if parity == 0 else expr.negated()
    sign = 1 if parity == 0 else -1
    d.remove_vertex(g.phase_spider)
    d.remove_vertex(g.axis_spider)
    d.add_expr_to_phase(w, signed)
    merge = None
    if expr.param_ids:
        merge = ParamMerge(tuple((name, sign) for name in expr.param_ids), w)
    return RewriteEvent(Rule.GADGET_ID_FUSE,
                        removed=(g.axis_spider, g.phase_spider), touched=(w,),
                        param_merge=merge,
                        dropped=None if parity == 0 else expr)


# -- scalar removal -----------------------------------------------------------

def remove_scalar_spiders(d: Diagram) -> List[RewriteEvent]:
    """Remove every connected component without boundary nodes.

    Such components only contribute a global scalar; parameters they carry
    are recorded as eliminated (zero columns of the parameter map).
    """
    events = []
    for comp in d.connected_components():
        if any(d.vertex(v).is_boundary for v in comp):
            continue
        eliminated = []
        for v in comp:
            eliminated.extend(d.phase(v).param_ids)
        for v in comp:
            d.remove_vertex(v)
        events.append(RewriteEvent(Rule.SCALAR_REMOVAL, removed=tuple(sorted(comp)),
                                   eliminated=tuple(sorted(eliminated))))
    return events


# -- boundary decoration cleanup ---------------------------------------------

def _boundary_cleanup(d: Diagram, b: int) -> RewriteEvent:
    """Normalise a non-parametrised boundary spider with a Hadamard wire and
    an odd phase: buffer its wires and remove it by local complementation,
    leaving only S^k, H or Z.H decorations."""
    added = _buffer_boundary_wires(d, b)
    ph = d.phase(b)
    nbrs = sorted(d.neighbors(b))
    d.remove_vertex(b)
    for a in nbrs:
        d.add_to_phase(a, -ph.clifford)
    for a, c in itertools.combinations(nbrs, 2):
        d.toggle_hadamard(a, c)
    return RewriteEvent(Rule.LOCAL_COMP, removed=(b,),
                        touched=tuple(sorted(set(nbrs) | set(added))))


def _needs_boundary_cleanup(d: Diagram, b: int) -> bool:
    ph = d.phase(b)
    if not (ph.is_clifford() and ph.clifford in (1, 3)):
        return False
    return any(d.edge_kind(b, o) is EdgeKind.HADAMARD for o in d.boundary_wires(b))


# -- driver -------------------------------------------------------------------

def _pick(candidates: list, rng: Optional[Random]):
    if not candidates:
        return None
    if rng is None:
        return min(candidates)
    return rng.choice(sorted(candidates))


def _match_local_comp(d: Diagram) -> List[int]:
    return [v for v in d.spiders()
            if d.phase(v).is_clifford() and d.phase(v).clifford in (1, 3) and d.is_internal(v)]


def _match_pivot(d: Diagram) -> List[Tuple[int, int]]:
    out = []
    for a, b, kind in d.edges():
        if _is_internal_pauli(d, a) and _is_internal_pauli(d, b):
            out.append((min(a, b), max(a, b)))
    return out


def _match_gadget_pivot(d: Diagram) -> List[Tuple[int, int]]:
    out = []
    for u in d.spiders():
        if not _is_internal_pauli(d, u) or _is_clean_axis(d, u):
            continue
        for w in d.neighbors(u):
            if (d.vertex(w).kind is VKind.SPIDER and d.is_internal(w)
                    and not d.phase(w).is_clifford() and d.degree(w) > 1):
                out.append((u, w))
    return out


def _match_boundary_pivot(d: Diagram) -> List[Tuple[int, int]]:
    out = []
    for u in d.spiders():
        if not _is_internal_pauli(d, u) or _is_clean_axis(d, u):
            continue
        for b in d.neighbors(u):
            if d.is_boundary_spider(b):
                out.append((u, b))
    return out


def simplify(d: Diagram, seed: Optional[int] = None) -> Tuple[Diagram, List[RewriteEvent]]:
    """Run the full strategy to a fixpoint and return the terminal diagram.

    Rules are attempted in a fixed priority (local complementation, pivot,
    gadget pivot, boundary pivot, gadget fusion on one neighbour, gadget
    fusion, scalar removal, boundary decoration cleanup); within a rule the
    candidate with the smallest vertex ids is chosen, or a seeded random
    candidate when ``seed`` is given.  The terminal diagram satisfies the
    pseudo-normal form conditions checked by ``terminal_violations``.
    """
    d = d.copy()
    rng = Random(seed) if seed is not None else None
    events: List[RewriteEvent] = []
    limit = 1000 + 60 * (len(d.spiders()) + 2) ** 2
    steps = 0
    while True:
        steps += 1
        if steps > limit:
            raise RuntimeError("simplify did not reach a fixpoint (safety cap hit)")

        v = _pick(_match_local_comp(d), rng)
        if v is not None:
            events.append(local_complement_simp(d, v))
            continue
        pair = _pick(_match_pivot(d), rng)
        if pair is not None:
            events.append(pivot_simp(d, *pair))
            continue
        pair = _pick(_match_gadget_pivot(d), rng)
        if pair is not None:
            events.append(gadget_pivot(d, *pair))
            continue
        pair = _pick(_match_boundary_pivot(d), rng)
        if pair is not None:
            events.append(boundary_pivot(d, *pair))
            continue
        gadgets = find_gadgets(d)
        unary = [g for g in gadgets if len(g.neighbourhood) == 1]
        if unary:
            g = unary[0] if rng is None else rng.choice(unary)
            events.append(gadget_id_fuse(d, g))
            continue
        by_nbhd: Dict[FrozenSet[int], List[GadgetView]] = {}
        for g in gadgets:
            by_nbhd.setdefault(g.neighbourhood, []).append(g)
        fusable = [gs for gs in by_nbhd.values() if len(gs) > 1]
        if fusable:
            gs = min(fusable, key=lambda gs: gs[0].axis_spider) if rng is None else rng.choice(fusable)
            events.append(gadget_fusion(d, gs[0], gs[1]))
            continue
        scalar_events = remove_scalar_spiders(d)
        if scalar_events:
            events.extend(scalar_events)
            continue
        b = _pick([b for b in d.spiders() if d.is_boundary_spider(b) and _needs_boundary_cleanup(d, b)], rng)
        if b is not None:
            events.append(_boundary_cleanup(d, b))
            continue
        break
    return d, events


# -- terminal form ------------------------------------------------------------

def terminal_violations(d: Diagram) -> List[str]:
    """Structural conditions of the pseudo-normal form; empty iff terminal."""
    problems = []
    axes = {g.axis_spider for g in find_gadgets(d)}
    plugs = {g.phase_spider for g in find_gadgets(d)}
    for v in d.spiders():
        ph = d.phase(v)
        if d.is_internal(v) and ph.is_clifford() and v not in axes and v not in plugs:
            problems.append(f"internal Clifford spider {v} outside gadget axes")
        if d.is_boundary_spider(v) and ph.is_clifford():
            for o in d.boundary_wires(v):
                if d.edge_kind(v, o) is EdgeKind.HADAMARD and ph.clifford in (1, 3):
                    problems.append(f"boundary spider {v} has decoration S^{ph.clifford}H")
    for g in find_gadgets(d):
        if not d.phase(g.phase_spider).is_clifford() and len(g.neighbourhood) < 2:
            problems.append(f"gadget at axis {g.axis_spider} has {len(g.neighbourhood)} neighbours")
    seen: Dict[FrozenSet[int], int] = {}
    for g in find_gadgets(d):
        if d.phase(g.phase_spider).is_clifford():
            continue
        if g.neighbourhood in seen:
            problems.append(f"gadgets at axes {seen[g.neighbourhood]} and {g.axis_spider} share a neighbourhood")
        seen[g.neighbourhood] = g.axis_spider
    for comp in d.connected_components():
        if not any(d.vertex(v).is_boundary for v in comp):
            problems.append(f"scalar component {sorted(comp)} remains")
    return problems
