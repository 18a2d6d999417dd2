"""Independent oracles: finite-value reduction checking, AP forms, the
weight-two stabiliser certificate, the optimality certificate, and a
brute-force minimal-parameter-count search.

Everything here answers "is the optimiser right?" without reusing the
optimiser's code paths: circuits are evaluated through the dense unitary
oracle, stabiliser facts are read off the graph directly, and the brute
force enumerates all in-place parsimonious maps.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Sequence, Set, Tuple

import numpy as np

from .circuits import Circuit, Gate, GateKind, circuit_unitary
from .diagram import Diagram, EdgeKind, VKind, find_gadgets
from .errors import (DimensionMismatch, NotClifford, NotTerminalForm, TooManyParams, ZeroState)

from .reduction import ReductionMap
from .rewrite import (_buffer_boundary_wires, _match_local_comp, _match_pivot,
                      local_complement_simp, pivot_simp)
from .tensor import ProportionalityReport, proportionality_ratio

logger = logging.getLogger(__name__)


# -- finite-value reduction checking ------------------------------------------

def structured_samples(params: Sequence[str], n_random: int, seed: int = 0) -> List[Dict[str, float]]:
    """The all-zeros point, each parameter alone at pi, plus uniform-random
    vectors.  Two values per parameter suffice for exact equality of
    parametrised Clifford maps; the random points stress the scalar."""
    samples: List[Dict[str, float]] = [{p: 0.0 for p in params}]
    for p in params:
        s = {q: 0.0 for q in params}
        s[p] = math.pi
        samples.append(s)
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        samples.append({p: float(rng.uniform(0, 2 * math.pi)) for p in params})
    return samples


def check_reduction(c1: Circuit, c2: Circuit, reduction: ReductionMap,
                    n_samples: int = 5, tol: float = 1e-9, seed: int = 0) -> ProportionalityReport:
    """Does ``c1[a]`` equal ``c2[P a + c]`` up to a per-sample scalar?

    ``n_samples`` counts the uniform-random vectors added on top of the
    structured {0, pi} set.  The scalar may vary between samples; each
    sample's ratio must be a single nonzero constant across all amplitudes.
    """
    if c1.n_qubits != c2.n_qubits:
        raise DimensionMismatch(f"qubit counts differ: {c1.n_qubits} vs {c2.n_qubits}")
    if tuple(reduction.params_in) != tuple(c1.params):
        raise DimensionMismatch(f"map inputs {reduction.params_in} do not match circuit params {c1.params}")
    if sorted(reduction.new_param_names) != sorted(c2.params):
        raise DimensionMismatch(f"map outputs {reduction.new_param_names} do not match circuit params {c2.params}")
    ratios: List[complex] = []
    max_dev = 0.0
    holds = True
    for sample in structured_samples(c1.params, n_samples, seed):
        u1 = circuit_unitary(c1, sample)
        u2 = circuit_unitary(c2, reduction.apply(sample))
        ok, lam, dev = proportionality_ratio(u1.reshape(-1), u2.reshape(-1), tol)
        ratios.append(lam)
        max_dev = max(max_dev, dev)
        holds = holds and ok
    return ProportionalityReport(holds=holds, ratios=ratios, max_deviation=max_dev)


# -- AP form -------------------------------------------------------------------

@dataclass
class APForm:
    """A stabiliser state as an affine GF(2) subspace with a phase polynomial.

    The state is sum over {x : A x = b} of i^(sum_j linear_phase[j] x_j)
    times (-1)^(sum over quadratic_pairs x_i x_j) |x>.
    """

    n_qubits: int
    a_matrix: np.ndarray  # GF(2), reduced row echelon form
    b_vector: np.ndarray
    linear_phase: Tuple[int, ...]  # mod 4, units of pi/2
    quadratic_pairs: FrozenSet[Tuple[int, int]]

    def state(self) -> np.ndarray:
        """Dense reconstruction; first qubit is the most significant bit."""
        n = self.n_qubits
        amplitudes = np.zeros(2 ** n, dtype=complex)
        for idx in range(2 ** n):
            x = np.array([(idx >> (n - 1 - j)) & 1 for j in range(n)], dtype=np.uint8)
            if self.a_matrix.size and np.any((self.a_matrix @ x) % 2 != self.b_vector):
                continue
            phase = sum(self.linear_phase[j] * int(x[j]) for j in range(n)) % 4
            sign = sum(int(x[i]) * int(x[j]) for i, j in self.quadratic_pairs) % 2
            amplitudes[idx] = (1j ** phase) * ((-1) ** sign)
        return amplitudes


def _gf2_rref(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of [A|b] over GF(2); raises ZeroState if
    the system is inconsistent, drops zero rows."""
    a = a.copy() % 2
    b = b.copy() % 2
    rows, cols = a.shape
    pivot_row = 0
    for col in range(cols):
        hit = None
        for r in range(pivot_row, rows):
            if a[r, col]:
                hit = r
                break
        if hit is None:
            continue
        a[[pivot_row, hit]] = a[[hit, pivot_row]]
        b[[pivot_row, hit]] = b[[hit, pivot_row]]
        for r in range(rows):
            if r != pivot_row and a[r, col]:
                a[r] ^= a[pivot_row]
                b[r] ^= b[pivot_row]
        pivot_row += 1
        if pivot_row == rows:
            break
    keep = []
    for r in range(rows):
        if a[r].any():
            keep.append(r)
        elif b[r]:
            raise ZeroState("affine system A x = b is inconsistent")
    return a[keep], b[keep]


def ap_form(d: Diagram) -> APForm:
    """Decompose a Clifford state diagram into affine-with-phases form.

    The diagram is reduced with local complementation and pivoting only
    (plus exact buffering of Hadamard output wires), leaving internal 0/pi
    spiders as parity constraints over the outputs, output phases as the
    linear phase polynomial, and output-output edges as its quadratic part.
    """
    if d.inputs():
        raise NotClifford("AP form applies to states (no input wires)")
    if d.param_registry:
        raise NotClifford(f"diagram carries parameters {sorted(d.param_registry)}")
    for v in d.spiders():
        if not d.phase(v).is_clifford():
            raise NotClifford(f"spider {v} carries a parameter")

    d = d.copy()
    guard = 0
    while True:
        guard += 1
        if guard > 1000 + 20 * len(d.spiders()) ** 2:
            raise RuntimeError("ap_form reduction did not converge")
        lc = _match_local_comp(d)
        if lc:
            local_complement_simp(d, min(lc))
            continue
        pivots = _match_pivot(d)
        if pivots:
            pivot_simp(d, *min(pivots))
            continue
        had_boundary = [v for v in d.spiders() if d.is_boundary_spider(v)
                        and any(d.edge_kind(v, o) is EdgeKind.HADAMARD for o in d.boundary_wires(v))]
        if had_boundary:
            _buffer_boundary_wires(d, min(had_boundary))
            continue
        break

    outputs = d.outputs()
    n = len(outputs)
    var = {o: j for j, o in enumerate(outputs)}

    # representative variable for each boundary spider (first output by position)
    rep: Dict[int, int] = {}
    rows: List[np.ndarray] = []
    rhs: List[int] = []
    linear = [0] * n
    quad: Set[Tuple[int, int]] = set()

    def row_of(*idxs: int, parity: int) -> None:
        r = np.zeros(n, dtype=np.uint8)
        for j in idxs:
            r[j] ^= 1
        rows.append(r)
        rhs.append(parity % 2)

    for v in d.spiders():
        wires = [o for o in d.boundary_wires(v)]
        if not wires:
            continue
        js = sorted(var[o] for o in wires)
        rep[v] = js[0]
        for j in js[1:]:
            row_of(rep[v], j, parity=0)
        linear[rep[v]] = (linear[rep[v]] + d.phase(v).clifford) % 4

    for a, b, kind in d.edges():
        da, db = d.vertex(a), d.vertex(b)
        if da.is_boundary and db.is_boundary:
            # bare output-output wire
            ja, jb = var[a], var[b]
            if kind is EdgeKind.PLAIN:
                row_of(ja, jb, parity=0)
            else:
                quad.add((min(ja, jb), max(ja, jb)))

    for u in d.spiders():
        if u in rep:
            continue
        ph = d.phase(u)
        if not ph.is_pauli():
            raise NotClifford(f"internal spider {u} with phase {ph} survived reduction")
        nbr_vars = []
        for w in d.neighbors(u):
            if w not in rep:
                raise NotTerminalForm(f"internal spiders {u} and {w} remain adjacent")
            nbr_vars.append(rep[w])
        r = np.zeros(n, dtype=np.uint8)
        for j in nbr_vars:
            r[j] ^= 1
        rows.append(r)
        rhs.append(ph.clifford // 2)

    for a, b, kind in d.edges():
        if a in rep and b in rep:
            ja, jb = rep[a], rep[b]
            quad.add((min(ja, jb), max(ja, jb)))

    a_matrix = np.array(rows, dtype=np.uint8).reshape(len(rows), n)
    b_vector = np.array(rhs, dtype=np.uint8)
    a_matrix, b_vector = _gf2_rref(a_matrix, b_vector)
    return APForm(n, a_matrix, b_vector, tuple(linear), frozenset(quad))


# -- stabiliser certificates ---------------------------------------------------

def _gslc_shape_violations(d: Diagram) -> List[str]:
    """Violations of the plugged-GSLC shape (redexes are allowed here)."""
    problems = []
    gadgets = [g for g in find_gadgets(d) if not d.phase(g.phase_spider).is_clifford()]
    axes = {g.axis_spider for g in gadgets}
    plugs = {g.phase_spider for g in gadgets}
    for v in d.spiders():
        ph = d.phase(v)
        if d.is_internal(v) and ph.is_clifford() and v not in axes:
            if d.degree(v) > 0:
                problems.append(f"internal Clifford spider {v} is not a gadget axis")
        if d.is_boundary_spider(v) and ph.is_clifford():
            for o in d.boundary_wires(v):
                if d.edge_kind(v, o) is EdgeKind.HADAMARD and ph.clifford in (1, 3):
                    problems.append(f"boundary spider {v} has decoration S^{ph.clifford}H")
    return problems


@dataclass(frozen=True)
class ParamLeg:
    spider: int  # the spider carrying the expression
    vertex: int  # the graph vertex the leg plugs into
    decoration: str  # "I" or "H"


def _param_legs(d: Diagram) -> List[ParamLeg]:
    gadgets = {g.phase_spider: g for g in find_gadgets(d)}
    legs = []
    for v in sorted(d.spiders()):
        if d.phase(v).is_clifford():
            continue
        if v in gadgets:
            legs.append(ParamLeg(v, gadgets[v].axis_spider, "H"))
        else:
            legs.append(ParamLeg(v, v, "I"))
    return legs


def zz_certificate(d: Diagram) -> List[Tuple[Tuple[int, int], str]]:
    """Pairs of parameter legs admitting a weight-2 Z x Z stabiliser.

    Condition (i): the legs' vertices are adjacent, the Hadamard-decorated
    vertex has no other neighbour, and the decorations are I x H or H x I.
    Condition (ii): non-adjacent vertices with identical neighbourhoods,
    both decorated H.  An empty list certifies that no parameter fusion
    remains; the sign parity of a hypothetical fusion is immaterial because
    an odd pair reduces to the even case by absorbing a Pauli X.
    """
    shape = _gslc_shape_violations(d)
    if shape:
        raise NotTerminalForm("; ".join(shape))
    legs = _param_legs(d)
    plug_ids = {g.phase_spider for g in find_gadgets(d)}

    def graph_nbhd(v: int) -> FrozenSet[int]:
        return frozenset(n for n in d.neighbors(v)
                         if n not in plug_ids and d.vertex(n).kind is VKind.SPIDER)

    found = []
    for leg_a, leg_b in itertools.combinations(legs, 2):
        decos = {leg_a.decoration, leg_b.decoration}
        adjacent = d.has_edge(leg_a.vertex, leg_b.vertex)
        if decos == {"I", "H"}:
            h_leg = leg_a if leg_a.decoration == "H" else leg_b
            o_leg = leg_b if h_leg is leg_a else leg_a
            if adjacent and graph_nbhd(h_leg.vertex) == {o_leg.vertex}:
                found.append(((leg_a.spider, leg_b.spider), "i"))
        elif decos == {"H"}:
            if not adjacent and graph_nbhd(leg_a.vertex) == graph_nbhd(leg_b.vertex):
                found.append(((leg_a.spider, leg_b.spider), "ii"))
    return found


@dataclass
class CertificateReport:
    passed: bool
    failures: List[str] = field(default_factory=list)
    n_parameters: int = 0
    n_gadgets: int = 0

    def to_dict(self) -> dict:
        return {"passed": self.passed, "failures": list(self.failures),
                "n_parameters": self.n_parameters, "n_gadgets": self.n_gadgets}


def optimality_certificate(d: Diagram) -> CertificateReport:
    """The executable optimality conditions for a terminal diagram.

    Passing certifies the parameter count is minimal: every gadget touches
    at least two vertices, gadget neighbourhoods are pairwise distinct, no
    weight-2 Z x Z stabiliser connects two parameter legs, and no
    parametrised spider is isolated.
    """
    shape = _gslc_shape_violations(d)
    if shape:
        raise NotTerminalForm("; ".join(shape))
    failures = []
    gadgets = [g for g in find_gadgets(d) if not d.phase(g.phase_spider).is_clifford()]
    for g in gadgets:
        if len(g.neighbourhood) < 2:
            failures.append(f"(a) gadget at axis {g.axis_spider} has {len(g.neighbourhood)} neighbours")
    seen: Dict[FrozenSet[int], int] = {}
    for g in gadgets:
        if g.neighbourhood in seen:
            failures.append(f"(b) gadgets at axes {seen[g.neighbourhood]} and {g.axis_spider} "
                            f"share a neighbourhood")
        else:
            seen[g.neighbourhood] = g.axis_spider
    for pair, condition in zz_certificate(d):
        failures.append(f"(c) legs {pair} admit a ZZ stabiliser, condition ({condition})")
    for v in d.spiders():
        if not d.phase(v).is_clifford() and d.degree(v) == 0:
            failures.append(f"(d) parametrised spider {v} is isolated")
    return CertificateReport(passed=not failures, failures=failures,
                             n_parameters=len(_param_legs(d)), n_gadgets=len(gadgets))


# -- brute-force minimality oracle ---------------------------------------------

MAX_ORACLE_PARAMS = 5


@dataclass
class BruteForceResult:
    count: int
    witness: ReductionMap
    trivial: Tuple[str, ...] = ()


def _partitions_into(items: Sequence[str], n_parts: int):
    """All set partitions of ``items`` into exactly ``n_parts`` blocks, in a
    deterministic order."""
    items = list(items)
    if n_parts == 0:
        if not items:
            yield []
        return

    def rec(i: int, blocks: List[List[str]]):
        if i == len(items):
            if len(blocks) == n_parts:
                yield [list(b) for b in blocks]
            return
        item = items[i]
        for b in blocks:
            b.append(item)
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < n_parts:
            blocks.append([item])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def _zeroed_circuit(c: Circuit, keep: Mapping[str, str]) -> Circuit:
    """Keep only the parametrised gates in ``keep`` (renamed); drop the rest."""
    gates = []
    for g in c.gates:
        if g.kind is not GateKind.RZ_PARAM:
            gates.append(g)
        elif g.param in keep:
            gates.append(Gate(GateKind.RZ_PARAM, g.qubits, param=keep[g.param]))
    return Circuit(c.n_qubits, gates)


def brute_force_min(c: Circuit, tol: float = 1e-9, max_params: int = MAX_ORACLE_PARAMS,
                    n_samples: int = 5, seed: int = 0) -> BruteForceResult:
    """Smallest parameter count over all in-place parsimonious reductions.

    Enumerates every partition of the parameters into groups, every choice
    of representative (kept at +1) and every sign pattern for the others;
    a candidate passes when the original circuit is proportional to the
    candidate at the structured-plus-random sample set.  In-place maps are
    complete for minimality, and constants are provably unnecessary, so the
    returned count is the true optimum.
    """
    c.validate()
    params = c.params
    k = len(params)
    if k > max_params:
        raise TooManyParams(f"{k} parameters exceeds oracle limit {max_params}")
    if k == 0:
        return BruteForceResult(0, ReductionMap((), (), (), ()))

    samples = structured_samples(params, n_samples, seed)
    originals = [circuit_unitary(c, s) for s in samples]

    trivial = []
    base = originals[0]
    for j, p in enumerate(params):
        ok, _, _ = proportionality_ratio(originals[1 + j].reshape(-1), base.reshape(-1), tol)
        if ok:
            trivial.append(p)
    if trivial:
        logger.warning("parameters %s are trivial: {0,pi} evaluations are proportional", trivial)

    def candidate_passes(reduction: ReductionMap, candidate: Circuit) -> bool:
        for sample, u1 in zip(samples, originals):
            u2 = circuit_unitary(candidate, reduction.apply(sample))
            ok, _, _ = proportionality_ratio(u1.reshape(-1), u2.reshape(-1), tol)
            if not ok:
                return False
        return True

    for l in range(1, k + 1):
        for blocks in _partitions_into(params, l):
            blocks = sorted(blocks, key=lambda b: params.index(b[0]))
            rep_choices = itertools.product(*[range(len(b)) for b in blocks])
            for reps in rep_choices:
                others = [[p for i, p in enumerate(b) if i != r] for b, r in zip(blocks, reps)]
                flat_others = [p for grp in others for p in grp]
                for bits in itertools.product((1, -1), repeat=len(flat_others)):
                    signs = dict(zip(flat_others, bits))
                    rows = []
                    names = []
                    keep = {}
                    for b, r in zip(blocks, reps):
                        rep = b[r]
                        name = rep
                        names.append(name)
                        keep[rep] = name
                        rows.append(tuple([(rep, 1)] + [(p, signs[p]) for p in b if p != rep]))
                    reduction = ReductionMap(tuple(params), tuple(names), tuple(rows),
                                             tuple(0 for _ in rows))
                    candidate = _zeroed_circuit(c, keep)
                    if candidate_passes(reduction, candidate):
                        return BruteForceResult(l, reduction, tuple(trivial))
    raise AssertionError("identity reduction must pass; unreachable")
