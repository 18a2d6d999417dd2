from random import Random

import numpy as np
import pytest

from zxparam.circuits import GateKind, circuit_to_diagram, parse_circuit
from zxparam.errors import InconsistentProvenance
from zxparam.generate import random_circuit
from zxparam.reduction import ReductionMap, extract_reduction, phase_teleport
from zxparam.rewrite import RewriteEvent, Rule, simplify
from zxparam.verify import check_reduction


def run_extraction(src):
    c = parse_circuit(src)
    terminal, events = simplify(circuit_to_diagram(c))
    return c, extract_reduction(events, c.params, terminal)


def test_extract_reduction_fusion_example():
    c, m = run_extraction("qreg 1\nrz(t0) 0\nrz(t1) 0")
    assert m.p_matrix.tolist() == [[1, 1]]
    assert m.constants == (0,)
    assert m.new_param_names == ("u0",)


def test_extract_reduction_single_parameter():
    c, m = run_extraction("qreg 2\nh 0\nrz(t0) 0\ncx 0 1")
    assert m.p_matrix.tolist() in ([[1]], [[-1]])
    assert len(m.rows) == 1


def test_extract_reduction_replays_against_terminal():
    rng = Random(17)
    for i in range(20):
        n_gates = rng.randint(6, 24)
        c = random_circuit(Random(i + 600), rng.randint(2, 6), n_gates, rng.randint(1, 6))
        terminal, events = simplify(circuit_to_diagram(c))
        m = extract_reduction(events, c.params, terminal)
        # rows reconstruct the surviving expressions exactly
        exprs = {frozenset(e.terms): e for e in terminal.param_exprs().values()}
        for terms, const in zip(m.rows, m.constants):
            expr = exprs[frozenset(terms)]
            assert expr.clifford_const == const
        # parsimonious columns: each original parameter at most once
        assert np.all(np.abs(m.p_matrix).sum(axis=0) <= 1)


def test_extract_reduction_rejects_corrupted_events():
    c = parse_circuit("qreg 1\nrz(t0) 0\nrz(t1) 0")
    terminal, events = simplify(circuit_to_diagram(c))
    with pytest.raises(InconsistentProvenance):
        extract_reduction(events, ["t0"], terminal)  # t1 unknown to the replay
    bogus = events + [RewriteEvent(Rule.SCALAR_REMOVAL, eliminated=("t0",))]
    with pytest.raises(InconsistentProvenance):
        extract_reduction(bogus, c.params, terminal)


def test_phase_teleport_fusion_example():
    c = parse_circuit("qreg 1\nrz(t0) 0\nrz(t1) 0")
    res = phase_teleport(c)
    assert [g.param for g in res.circuit.gates] == ["u0"]
    assert res.reduction.row_string(0) == "u0 = t0 + t1"
    assert res.reduction.constants == (0,)
    assert check_reduction(c, res.circuit, res.reduction).holds


def test_phase_teleport_cx_commutation():
    c = parse_circuit("qreg 2\nrz(t0) 0\ncx 0 1\nrz(t1) 0\ncx 0 1")
    res = phase_teleport(c)
    assert len(res.circuit.params) == 1
    assert check_reduction(c, res.circuit, res.reduction).holds


def test_phase_teleport_hadamard_blocks_fusion():
    c = parse_circuit("qreg 1\nrz(t0) 0\nh 0\nrz(t1) 0")
    res = phase_teleport(c)
    assert len(res.circuit.params) == 2
    assert check_reduction(c, res.circuit, res.reduction).holds


def test_phase_teleport_sign_normalisation():
    # X conjugation flips t1; the representative keeps +1
    c = parse_circuit("qreg 1\nrz(t0) 0\nx 0\nrz(t1) 0\nx 0")
    res = phase_teleport(c)
    assert res.reduction.row_string(0) == "u0 = t0 - t1"
    assert check_reduction(c, res.circuit, res.reduction).holds
    # flipped representative order: representative sign still +1
    c = parse_circuit("qreg 1\nx 0\nrz(t0) 0\nx 0\nrz(t1) 0")
    res = phase_teleport(c)
    assert res.reduction.row_string(0) == "u0 = t0 - t1"
    assert check_reduction(c, res.circuit, res.reduction).holds


def test_phase_teleport_keeps_clifford_gates():
    rng = Random(23)
    for i in range(15):
        c = random_circuit(Random(i + 700), rng.randint(1, 6), rng.randint(3, 20), rng.randint(0, 5))
        res = phase_teleport(c)
        before = sorted((g.kind.value, g.qubits, g.k) for g in c.gates
                        if g.kind is not GateKind.RZ_PARAM)
        after = sorted((g.kind.value, g.qubits, g.k) for g in res.circuit.gates
                       if g.kind is not GateKind.RZ_PARAM)
        assert before == after


def test_phase_teleport_representative_is_earliest_gate():
    c = parse_circuit("qreg 2\nh 0\nrz(t0) 0\ncx 0 1\nrz(t1) 0\ncx 0 1")
    res = phase_teleport(c)
    assert len(res.circuit.params) == 1
    kept = [g for g in res.circuit.gates if g.kind is GateKind.RZ_PARAM]
    assert res.circuit.gates.index(kept[0]) == c.param_gate_index("t0")


def test_phase_teleport_idempotent_count():
    rng = Random(33)
    for i in range(12):
        c = random_circuit(Random(i + 800), rng.randint(1, 6), rng.randint(5, 20), rng.randint(0, 5))
        once = phase_teleport(c)
        twice = phase_teleport(once.circuit)
        assert len(twice.circuit.params) == len(once.circuit.params)


def test_phase_teleport_count_matches_terminal_diagram():
    rng = Random(43)
    for i in range(12):
        c = random_circuit(Random(i + 900), rng.randint(1, 6), rng.randint(3, 20), rng.randint(1, 5))
        res = phase_teleport(c)
        terminal, _ = simplify(circuit_to_diagram(c))
        assert len(res.circuit.params) == len(terminal.param_exprs())


def qaoa_like(n, pairs, layers, mixers=False):
    from zxparam.circuits import Circuit, Gate
    gates = []
    t = 0
    for layer in range(layers):
        for a, b in pairs:
            gates += [Gate(GateKind.CX, (a, b)),
                      Gate(GateKind.RZ_PARAM, (b,), param=f"t{t}"),
                      Gate(GateKind.CX, (a, b))]
            t += 1
        if mixers and layer < layers - 1:
            gates += [Gate(GateKind.H, (q,)) for q in range(n)]
    from zxparam.circuits import Circuit
    return Circuit(n, gates)


def test_repeated_parity_layers_fuse_to_one_parameter_each():
    for n, pairs in [(3, [(0, 1), (1, 2)]), (5, [(0, 1), (1, 2), (2, 3), (3, 4)])]:
        for layers in (2, 3):
            c = qaoa_like(n, pairs, layers)
            res = phase_teleport(c)
            assert len(res.circuit.params) == len(pairs)
            assert check_reduction(c, res.circuit, res.reduction).holds


def test_mixing_layers_block_fusion():
    from zxparam.verify import brute_force_min
    c = qaoa_like(3, [(0, 1), (1, 2)], 2, mixers=True)
    res = phase_teleport(c)
    assert len(res.circuit.params) == 4
    assert brute_force_min(c).count == 4
    assert check_reduction(c, res.circuit, res.reduction).holds


@pytest.mark.parametrize("name,src,expected", [
    ("diagonal separators commute", "qreg 1\nrz(t0) 0\ns 0\nrz(t1) 0\nz 0", 1),
    ("double X sandwich", "qreg 1\nx 0\nrz(t0) 0\nrz(t1) 0\nx 0", 1),
    ("across a swap", "qreg 2\nrz(t0) 0\ncx 0 1\ncx 1 0\ncx 0 1\nrz(t1) 1", 1),
    ("cz is diagonal", "qreg 2\nrz(t0) 0\ncz 0 1\nrz(t1) 0", 1),
    ("hadamard walls", "qreg 2\nrz(t0) 0\nh 0\nrz(t1) 0\nh 1\nrz(t2) 1", 3),
    ("circuit edges", "qreg 2\nrz(t0) 0\nh 0\ncx 0 1\nh 0\nrz(t1) 0", 2),
    ("parity ladder",
     "qreg 3\ncx 0 1\ncx 1 2\nrz(t0) 2\ncx 1 2\ncx 0 1\ncx 0 1\ncx 1 2\nrz(t1) 2\ncx 1 2\ncx 0 1", 1),
])
def test_known_fusion_structure(name, src, expected):
    from zxparam.verify import brute_force_min
    c = parse_circuit(src)
    res = phase_teleport(c)
    assert len(res.circuit.params) == expected, name
    assert brute_force_min(c).count == expected, name
    assert check_reduction(c, res.circuit, res.reduction).holds, name


def test_reduction_map_serialization_round_trip():
    m = ReductionMap(("t0", "t1", "t2"), ("u0", "u1"),
                     ((("t0", 1), ("t2", -1)), (("t1", 1),)), (0, 3), eliminated=())
    again = ReductionMap.from_text(m.to_text())
    assert again == m
    data = m.to_dict()
    assert set(data) == {"params_in", "params_out", "rows", "eliminated"}
    assert set(data["rows"][0]) == {"name", "terms", "const_pi_over_2"}
    assert m.row_string(1) == "u1 = t1 + 3pi/2"


def test_reduction_map_invariants():
    with pytest.raises(ValueError):  # zero row
        ReductionMap(("t0",), ("u0",), ((),), (0,))
    with pytest.raises(ValueError):  # non-parsimonious column
        ReductionMap(("t0",), ("u0", "u1"), ((("t0", 1),), (("t0", 1),)), (0, 0))
