"""Random-circuit experiment: optimise, verify, certify, and (for small
parameter counts) cross-check against the brute-force oracle.

Example:
    python scripts/run_pipeline.py --circuits 50 --qubits 6 --gates 25 --params 5 --seed 1
"""

import argparse
import time
from random import Random

from zxparam.circuits import circuit_to_diagram, emit_circuit
from zxparam.generate import random_circuit
from zxparam.reduction import phase_teleport
from zxparam.rewrite import simplify
from zxparam.verify import brute_force_min, check_reduction, optimality_certificate


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--circuits", type=int, default=30)
    parser.add_argument("--qubits", type=int, default=6)
    parser.add_argument("--gates", type=int, default=25)
    parser.add_argument("--params", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--oracle-max-params", type=int, default=4)
    parser.add_argument("--show-worst", action="store_true",
                        help="print the circuit with the largest reduction")
    args = parser.parse_args()

    rng = Random(args.seed)
    total_before = total_after = 0
    oracle_checked = 0
    best = None
    start = time.time()
    for i in range(args.circuits):
        n_gates = rng.randint(max(2, args.gates // 2), args.gates)
        n_params = rng.randint(1, min(args.params, n_gates))
        circuit = random_circuit(Random(args.seed * 10_000 + i),
                                 rng.randint(2, args.qubits), n_gates, n_params)
        result = phase_teleport(circuit, seed=args.seed)
        report = check_reduction(circuit, result.circuit, result.reduction, seed=args.seed)
        terminal, _ = simplify(circuit_to_diagram(circuit), seed=args.seed)
        certificate = optimality_certificate(terminal)
        assert report.holds, f"circuit {i}: proportionality failed"
        assert certificate.passed, f"circuit {i}: certificate failed: {certificate.failures}"
        before, after = len(circuit.params), len(result.circuit.params)
        if n_params <= args.oracle_max_params:
            oracle = brute_force_min(circuit, max_params=args.oracle_max_params)
            assert oracle.count == after, f"circuit {i}: oracle disagrees"
            oracle_checked += 1
        total_before += before
        total_after += after
        if best is None or before - after > best[0]:
            best = (before - after, circuit, result)
        print(f"circuit {i:3d}: {before} -> {after} parameters"
              + ("  (oracle agrees)" if n_params <= args.oracle_max_params else ""))

    elapsed = time.time() - start
    print(f"\n{args.circuits} circuits in {elapsed:.1f}s: "
          f"{total_before} -> {total_after} parameters "
          f"({total_before - total_after} removed); "
          f"{oracle_checked} oracle cross-checks, all verified")
    if args.show_worst and best is not None:
        _, circuit, result = best
        print("\nlargest reduction:")
        print(emit_circuit(circuit))
        print("optimised:")
        print(emit_circuit(result.circuit))
        for i in range(len(result.reduction.new_param_names)):
            print(" ", result.reduction.row_string(i))


if __name__ == "__main__":
    main()
