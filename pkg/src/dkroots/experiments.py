"""Scenario runners for the radius, Wilkinson, clustered and random studies.

Every runner returns a list of :class:`ExperimentRecord` in (polynomial,
bound) order. Solver failures become records with status ``"Error"``
instead of aborting the suite.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace

import numpy as np

from .bounds import ALL_METHODS, PROPOSED_METHODS, BoundMethod, PowerIterConfig, PowerIterationError, radius
from .metrics import match_roots
from .poly import RealPolynomial, clustered, random_poly, wilkinson, wilkinson_perturbed, wilkinson_roots
from .solver import NumericalError, SolverConfig, solve

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "scenario",
    "degree",
    "bound",
    "radius",
    "iterations",
    "status",
    "mean_error",
    "max_residual",
    "seed",
    "wall_time_ms",
)
HISTORY_COLUMNS = ("scenario", "degree", "bound", "iteration", "max_step")

NO_TRUTH = -1.0
ERROR_STATUS = "Error"
BOUND_ONLY_STATUS = "BoundOnly"


@dataclass(frozen=True)
class ExperimentRecord:
    scenario: str
    degree: int
    bound_method: str
    radius: float
    iterations: int
    status: str
    mean_error: float
    max_residual: float
    seed: int
    wall_time_ms: float
    history: tuple[float, ...] | None = None

    def as_row(self) -> list[str]:
        return [
            self.scenario,
            str(self.degree),
            self.bound_method,
            repr(float(self.radius)),
            str(self.iterations),
            self.status,
            repr(float(self.mean_error)),
            repr(float(self.max_residual)),
            str(self.seed),
            repr(float(self.wall_time_ms)),
        ]

    @property
    def converged(self) -> bool:
        return self.status.startswith("Converged")


def write_csv(records: Iterable[ExperimentRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.as_row())


def write_history_csv(records: Iterable[ExperimentRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(HISTORY_COLUMNS)
    for rec in records:
        for i, step in enumerate(rec.history or (), start=1):
            w.writerow([rec.scenario, rec.degree, rec.bound_method, i, repr(float(step))])


def to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def _power_cfg(seed: int, power_cfg: PowerIterConfig | None) -> PowerIterConfig:
    return replace(power_cfg, seed=seed) if power_cfg else PowerIterConfig(seed=seed)


def _solve_record(
    scenario: str,
    p: RealPolynomial,
    bound: BoundMethod,
    cfg: SolverConfig,
    power_cfg: PowerIterConfig,
    truth=None,
) -> ExperimentRecord:
    t0 = time.perf_counter()
    try:
        out = solve(p, bound, cfg, power_cfg)
    except (NumericalError, PowerIterationError) as exc:
        log.warning("%s degree %d bound %s failed: %s", scenario, p.degree, bound.value, exc)
        try:
            r = radius(p, bound, power_cfg).radius
        except (ArithmeticError, ValueError):
            r = -1.0
        return ExperimentRecord(
            scenario, p.degree, bound.value, r, 0, ERROR_STATUS, NO_TRUTH, -1.0,
            power_cfg.seed, (time.perf_counter() - t0) * 1e3,
        )
    elapsed = (time.perf_counter() - t0) * 1e3
    err = match_roots(out.roots, truth).mean_error if truth is not None else NO_TRUTH
    return ExperimentRecord(
        scenario=scenario,
        degree=p.degree,
        bound_method=bound.value,
        radius=out.radius_used,
        iterations=out.iterations_used,
        status=out.status.value,
        mean_error=err,
        max_residual=out.max_residual,
        seed=power_cfg.seed,
        wall_time_ms=elapsed,
        history=out.history,
    )


def run_radius_comparison(
    count: int = 50,
    deg_lo: int = 3,
    deg_hi: int = 50,
    coeff_range: Sequence[float] = (-15.0, 15.0),
    seed: int = 42,
    power_cfg: PowerIterConfig | None = None,
    bounds: Sequence[BoundMethod] = ALL_METHODS,
) -> list[ExperimentRecord]:
    """Bound radii for ``count`` random polynomials; no solving.

    Degrees are drawn uniformly from ``[deg_lo, deg_hi]``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not 3 <= deg_lo <= deg_hi:
        raise ValueError("need 3 <= deg_lo <= deg_hi")
    lo, hi = coeff_range
    rng = np.random.default_rng(seed)
    pcfg = _power_cfg(seed, power_cfg)
    records = []
    for _ in range(count):
        n = int(rng.integers(deg_lo, deg_hi + 1))
        p = random_poly(n, lo, hi, rng)
        for m in bounds:
            t0 = time.perf_counter()
            res = radius(p, m, pcfg)
            records.append(
                ExperimentRecord(
                    "radius-comparison", n, m.value, res.radius, 0, BOUND_ONLY_STATUS,
                    NO_TRUTH, -1.0, seed, (time.perf_counter() - t0) * 1e3,
                )
            )
    return records


def run_wilkinson_suite(
    n_values: Sequence[int],
    bounds: Sequence[BoundMethod] = PROPOSED_METHODS,
    cfg: SolverConfig | None = None,
    seed: int = 0,
    power_cfg: PowerIterConfig | None = None,
) -> list[ExperimentRecord]:
    cfg = cfg or SolverConfig()
    pcfg = _power_cfg(seed, power_cfg)
    return [
        _solve_record("wilkinson", wilkinson(n), BoundMethod.parse(b), cfg, pcfg, wilkinson_roots(n))
        for n in n_values
        for b in bounds
    ]


def perturbed_scenario_name(eps: float, k: int) -> str:
    return f"wilkinson-perturbed:eps={eps!r}:k={k}"


def run_perturbed_wilkinson(
    n: int = 20,
    eps: float = 2.0**-23,
    k: int | None = None,
    bound: BoundMethod = BoundMethod.LAMBDA_MAX,
    cfg: SolverConfig | None = None,
    seed: int = 0,
    power_cfg: PowerIterConfig | None = None,
) -> ExperimentRecord:
    """Solve the perturbed polynomial and score it against the unperturbed roots."""
    cfg = cfg or SolverConfig()
    k = n - 1 if k is None else k
    p = wilkinson_perturbed(n, eps, k)
    return _solve_record(
        perturbed_scenario_name(eps, k), p, BoundMethod.parse(bound), cfg,
        _power_cfg(seed, power_cfg), wilkinson_roots(n),
    )


def run_clustered_suite(
    n_values: Sequence[int],
    spacing: float = 0.001,
    bounds: Sequence[BoundMethod] = PROPOSED_METHODS,
    cfg: SolverConfig | None = None,
    seed: int = 0,
    power_cfg: PowerIterConfig | None = None,
) -> list[ExperimentRecord]:
    cfg = cfg or SolverConfig()
    pcfg = _power_cfg(seed, power_cfg)
    records = []
    for n in n_values:
        p, truth = clustered(n, spacing)
        for b in bounds:
            records.append(_solve_record("clustered", p, BoundMethod.parse(b), cfg, pcfg, truth))
    return records


def run_random_suite(
    n_values: Sequence[int],
    coeff_range: Sequence[float] = (-15.0, 15.0),
    bounds: Sequence[BoundMethod] = (BoundMethod.LAMBDA_MAX,),
    cfg: SolverConfig | None = None,
    seed: int = 7,
    power_cfg: PowerIterConfig | None = None,
) -> list[ExperimentRecord]:
    """Random-coefficient polynomials; accuracy is the residual only (no truth)."""
    cfg = cfg or SolverConfig()
    lo, hi = coeff_range
    rng = np.random.default_rng(seed)
    pcfg = _power_cfg(seed, power_cfg)
    records = []
    for n in n_values:
        p = random_poly(n, lo, hi, rng)
        for b in bounds:
            records.append(_solve_record("random", p, BoundMethod.parse(b), cfg, pcfg))
    return records


def summarize(records: Sequence[ExperimentRecord]) -> str:
    solved = [r for r in records if r.status != BOUND_ONLY_STATUS]
    if not solved:
        return f"{len(records)} records"
    conv = sum(r.converged for r in solved)
    return f"{len(records)} records, {conv}/{len(solved)} converged ({100.0 * conv / len(solved):.1f}%)"
