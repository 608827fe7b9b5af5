"""Accuracy of computed roots against known ones."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class MatchReport:
    assignment: tuple[int, ...]
    """``assignment[i]`` is the truth index paired with computed root ``i``."""
    mean_error: float
    max_error: float
    max_residual: float = float("nan")


def match_roots(computed, truth, polynomial=None) -> MatchReport:
    """Pair computed and true roots so the summed distance is minimal.

    Uses an exact linear assignment solver, so the pairing is well defined
    even when roots are tightly clustered. If ``polynomial`` is given the
    largest ``|p(computed_i)|`` is recorded as well.
    """
    computed = np.asarray(computed, dtype=complex).ravel()
    truth = np.asarray(truth, dtype=complex).ravel()
    if computed.size != truth.size:
        raise ValueError(f"length mismatch: {computed.size} computed vs {truth.size} true roots")
    if computed.size == 0:
        raise ValueError("need at least one root")
    cost = np.abs(computed[:, None] - truth[None, :])
    rows, cols = linear_sum_assignment(cost)
    assignment = np.empty(computed.size, dtype=int)
    assignment[rows] = cols
    d = cost[rows, cols]
    res = float("nan")
    if polynomial is not None:
        res = float(np.max(np.abs(polynomial(computed))))
    return MatchReport(tuple(int(j) for j in assignment), float(d.mean()), float(d.max()), res)


def enclosure_check(truth, r: float, slack: float = 0.0) -> bool:
    """True iff every root lies in the closed disc of radius ``r * (1 + slack)``."""
    truth = np.asarray(truth, dtype=complex)
    return bool(np.all(np.abs(truth) <= r * (1.0 + slack)))
