"""Shared helpers: parameter samples and the rule soundness check."""

import math
from random import Random
from typing import Callable, Dict, List, Sequence

import numpy as np

from zxparam.diagram import Diagram
from zxparam.rewrite import RewriteEvent
from zxparam.tensor import proportionality_ratio, tensor_eval


def param_samples(params: Sequence[str], n_random: int = 2, seed: int = 7) -> List[Dict[str, float]]:
    """All-zeros, each parameter alone at pi, plus random vectors: at least
    two values per parameter."""
    samples = [{p: 0.0 for p in params}]
    for p in params:
        s = {q: 0.0 for q in params}
        s[p] = math.pi
        samples.append(s)
    rng = Random(seed)
    for _ in range(n_random):
        samples.append({p: rng.uniform(0, 2 * math.pi) for p in params})
    return samples


def dropped_factor(event: RewriteEvent, assignment: Dict[str, float]) -> complex:
    if event.dropped is None:
        return 1.0 + 0j
    return complex(np.exp(1j * event.dropped.angle(assignment)))


ZERO_FLOOR = 1e-12  # well below any nonzero amplitude at test sizes


class ZeroInstance(Exception):
    """The generated diagram denotes the zero map; nothing to test."""


def assert_rule_sound(diagram: Diagram, apply_rule: Callable[[Diagram], RewriteEvent],
                      tol: float = 1e-9) -> RewriteEvent:
    """tensor(before) must equal a single constant times e^{i dropped(a)}
    times tensor(after) across all parameter samples.

    Samples where the state itself vanishes are vacuous and skipped (random
    non-unitary diagrams may hit them); a diagram that vanishes everywhere
    raises ZeroInstance so the caller can regenerate.
    """
    params = sorted(diagram.param_registry)
    before = diagram.copy()
    after = diagram.copy()
    event = apply_rule(after)
    evaluated = []
    for sample in param_samples(params):
        tb = tensor_eval(before, sample).amplitudes
        ta = tensor_eval(after, sample).amplitudes * dropped_factor(event, sample)
        evaluated.append((tb, ta))
    scale = max(max(np.max(np.abs(tb)), np.max(np.abs(ta))) for tb, ta in evaluated)
    if scale < ZERO_FLOOR:
        raise ZeroInstance
    floor = max(tol * scale, ZERO_FLOOR)
    ratios = []
    for tb, ta in evaluated:
        nb, na = np.max(np.abs(tb)), np.max(np.abs(ta))
        if nb < floor and na < floor:
            continue
        assert nb >= floor and na >= floor, "one side vanished alone"
        ok, lam, dev = proportionality_ratio(tb, ta, tol)
        assert ok, f"tensors not proportional (deviation {dev:.3e})"
        ratios.append(lam)
    if not ratios:
        raise ZeroInstance
    spread = max(abs(r - ratios[0]) for r in ratios)
    assert spread <= 1e-8 * max(abs(ratios[0]), 1.0), f"ratio varies across samples: {ratios}"
    return event
