"""Durand-Kerner (Weierstrass) simultaneous iteration."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundMethod, PowerIterConfig, radius as bound_radius
from .poly import RealPolynomial, scale_variable

UNIT_ROUNDOFF = np.finfo(float).eps / 2


class NumericalError(ArithmeticError):
    """Base class for solver failures that callers may want to report."""


class CollisionError(NumericalError):
    """Two iterates coincide (or the Weierstrass product is 0 / non-finite)."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"iterate {index} collides with another iterate")


class DivergenceError(NumericalError):
    pass


class Status(str, enum.Enum):
    CONVERGED_BY_STEP = "ConvergedByStep"
    CONVERGED_BY_RESIDUAL = "ConvergedByResidual"
    MAX_ITERATIONS = "MaxIterations"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rules and safeguards.

    ``eps1`` bounds the largest step ``|x_i' - x_i|``. ``eps2`` bounds the
    largest residual ``|p(x_i)|``; a residual that is already within the
    rounding error of evaluating ``p`` at ``x_i`` also counts as converged,
    since no further iteration can reduce it. ``enable_scaling=None`` turns
    variable scaling on for degrees above ``SCALING_DEGREE``.
    """

    eps1: float = 1e-12
    eps2: float = 1e-10
    max_iter: int = 1000
    angle_offset: float = 0.4
    collision_delta: float = 1e-9
    enable_scaling: bool | None = None
    record_history: bool = False

    SCALING_DEGREE = 60

    def __post_init__(self):
        if not (self.eps1 > 0 and self.eps2 > 0):
            raise ValueError("eps1 and eps2 must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0 < self.collision_delta < 1e-6:
            raise ValueError("collision_delta must lie in (0, 1e-6)")

    def scaling_for(self, degree: int) -> bool:
        if self.enable_scaling is None:
            return degree > self.SCALING_DEGREE
        return self.enable_scaling


@dataclass(frozen=True)
class SolveOutcome:
    roots: np.ndarray
    iterations_used: int
    status: Status
    radius_used: float
    bound_method: BoundMethod
    max_residual: float
    backward_error: float
    scaled: bool
    history: tuple[float, ...] | None = None

    @property
    def converged(self) -> bool:
        return self.status is not Status.MAX_ITERATIONS

    def to_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "iterations": self.iterations_used,
            "radius": self.radius_used,
            "bound": self.bound_method.value,
            "roots": [{"re": float(z.real), "im": float(z.imag)} for z in self.roots],
            "max_residual": self.max_residual,
        }
        if self.history is not None:
            out["history"] = list(self.history)
        return out


def initial_points(n: int, r: float, angle_offset: float = 0.4) -> np.ndarray:
    """``n`` equally spaced points on the circle ``|z| = r``, rotated by ``angle_offset``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not r > 0:
        raise ValueError("radius must be positive")
    theta = 2.0 * np.pi * np.arange(n) / n + angle_offset
    return r * np.exp(1j * theta)


class _Poly:
    """Evaluation helpers that stay finite for large ``|x|``.

    For ``|x| > 1`` the polynomial is evaluated as ``x**n * rev(1/x)`` where
    ``rev`` has the coefficients reversed, and only the bounded factor
    ``rev(1/x)`` is ever formed.
    """

    def __init__(self, coeffs: np.ndarray):
        self.c = np.asarray(coeffs, dtype=float)
        self.rev = self.c[::-1].copy()
        self.n = self.c.size - 1
        self.absc = np.abs(self.c)
        self.absrev = self.absc[::-1].copy()

    @staticmethod
    def _horner(c, z):
        acc = np.full(z.shape, c[0], dtype=z.dtype)
        for a in c[1:]:
            acc = acc * z + a
        return acc

    def split(self, x: np.ndarray):
        """Return ``(v, m, big)``.

        ``v`` is ``p(x)`` (``rev(1/x)`` where ``big``), and ``m`` is the
        matching value of the absolute-coefficient polynomial at ``|x|``.
        """
        big = np.abs(x) > 1.0
        v = np.empty(x.shape, dtype=complex)
        m = np.empty(x.shape, dtype=float)
        small = ~big
        if small.any():
            xs = x[small]
            v[small] = self._horner(self.c.astype(complex), xs)
            m[small] = self._horner(self.absc, np.abs(xs))
        if big.any():
            y = 1.0 / x[big]
            v[big] = self._horner(self.rev.astype(complex), y)
            m[big] = self._horner(self.absrev, np.abs(y))
        return v, m, big

    def log_abs(self, x: np.ndarray) -> np.ndarray:
        v, _, big = self.split(x)
        with np.errstate(divide="ignore"):
            out = np.log(np.abs(v))
        out[big] += self.n * np.log(np.abs(x[big]))
        return out

    def relative_residual(self, x: np.ndarray) -> np.ndarray:
        v, m, _ = self.split(x)
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.abs(v) / m
        rel[m == 0] = 0.0
        return rel


def _corrections(P: _Poly, xs: np.ndarray) -> np.ndarray:
    """Weierstrass corrections ``p(x_i) / prod_{j != i} (x_i - x_j)``, all from ``xs``."""
    n = xs.size
    if n == 1:
        return P._horner(P.c.astype(complex), xs)
    diff = xs[:, None] - xs[None, :]
    np.fill_diagonal(diff, 1.0)
    zero = diff == 0
    if zero.any():
        raise CollisionError(int(np.argwhere(zero)[0][0]))
    v, _, big = P.split(xs)

    num = v.copy()
    den = np.empty(n, dtype=complex)
    small = ~big
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        if small.any():
            den[small] = np.prod(diff[small], axis=1)
        if big.any():
            # x_i**n rev(1/x_i) / (x_i**(n-1) prod(1 - x_j/x_i)) = x_i rev / prod
            ratio = diff[big] / xs[big][:, None]
            ratio[np.arange(ratio.shape[0]), np.flatnonzero(big)] = 1.0
            den[big] = np.prod(ratio, axis=1)
            num[big] = xs[big] * v[big]
        w = num / den

    bad = ~np.isfinite(w) | ~np.isfinite(den) | (den == 0)
    if bad.any():
        # Retry the offending rows in log space before giving up.
        for i in np.flatnonzero(bad):
            w[i] = _log_correction(P, xs, i)
    return w


def _log_correction(P: _Poly, xs: np.ndarray, i: int) -> complex:
    d = xs[i] - np.delete(xs, i)
    if np.any(d == 0):
        raise CollisionError(i)
    log_den = np.sum(np.log(np.abs(d)))
    arg_den = np.sum(np.angle(d))
    v = P._horner(P.c.astype(complex), xs[i : i + 1])[0] if abs(xs[i]) <= 1 else None
    if v is None:
        y = 1.0 / xs[i]
        r = P._horner(P.rev.astype(complex), np.array([y]))[0]
        if r == 0:
            return 0j
        log_num = P.n * math.log(abs(xs[i])) + math.log(abs(r))
        arg_num = P.n * np.angle(xs[i]) + np.angle(r)
    else:
        if v == 0:
            return 0j
        log_num = math.log(abs(v))
        arg_num = np.angle(v)
    mag = log_num - log_den
    if not math.isfinite(mag) or mag > 709:
        raise CollisionError(i, f"Weierstrass correction for iterate {i} is not finite")
    return complex(math.exp(mag) * np.exp(1j * (arg_num - arg_den)))


def dk_step(p: RealPolynomial, xs: np.ndarray) -> tuple[np.ndarray, float]:
    """One simultaneous update of every iterate; returns ``(new_xs, max_step)``."""
    xs = np.asarray(xs, dtype=complex)
    if xs.size != p.degree:
        raise ValueError(f"expected {p.degree} iterates, got {xs.size}")
    w = _corrections(_Poly(p.as_array()), xs)
    return xs - w, float(np.max(np.abs(w)))


def _perturb(xs, idx, amount, k):
    rng = np.random.default_rng([k, idx])
    xs = xs.copy()
    xs[idx] += amount * np.exp(2j * np.pi * rng.random())
    return xs


def solve(
    p: RealPolynomial,
    method: BoundMethod | str = BoundMethod.LAMBDA_MAX,
    cfg: SolverConfig | None = None,
    power_cfg: PowerIterConfig | None = None,
) -> SolveOutcome:
    """Find all roots of ``p`` starting from the circle given by ``method``.

    With scaling active the iteration runs on ``q(y) = p(r*y)/r**n`` and the
    roots are mapped back. The stopping tests are applied in the original
    frame, so they do not depend on whether scaling was used; the reported
    ``max_residual`` is that of the polynomial actually iterated.
    """
    cfg = cfg or SolverConfig()
    method = BoundMethod.parse(method)
    bound = bound_radius(p, method, power_cfg)
    r = bound.radius
    n = p.degree
    scaled = cfg.scaling_for(n)
    s = r if scaled else 1.0
    work = scale_variable(p, s) if scaled else p
    P = _Poly(work.as_array())
    r_work = r / s
    log_s = math.log(s)
    log_eps2 = math.log(cfg.eps2)
    floor = 4 * n * UNIT_ROUNDOFF

    xs = initial_points(n, r_work, cfg.angle_offset)
    history = [] if cfg.record_history else None
    status = Status.MAX_ITERATIONS
    k = 0
    while k < cfg.max_iter:
        k += 1
        new = _guarded_step(P, xs, cfg.collision_delta * r_work, k)
        step = float(np.max(np.abs(new - xs))) * s
        xs = new
        if history is not None:
            history.append(step)
        if step < cfg.eps1:
            status = Status.CONVERGED_BY_STEP
            break
        small_abs = P.log_abs(xs) + n * log_s < log_eps2
        at_floor = P.relative_residual(xs) <= floor
        if np.all(small_abs | at_floor):
            status = Status.CONVERGED_BY_RESIDUAL
            break

    with np.errstate(over="ignore", invalid="ignore"):
        res = np.abs(P._horner(P.c.astype(complex), xs))
        # plain Horner, as a caller would evaluate it; log form only where that overflows
        bad = ~np.isfinite(res)
        res[bad] = np.exp(P.log_abs(xs[bad]))
    max_res = float(np.max(res))
    return SolveOutcome(
        roots=xs * s,
        iterations_used=k,
        status=status,
        radius_used=r,
        bound_method=method,
        max_residual=max_res,
        backward_error=float(np.max(P.relative_residual(xs))),
        scaled=scaled,
        history=tuple(history) if history is not None else None,
    )


def _guarded_step(P, xs, delta, k):
    attempts = 0
    nonfinite_retry = False
    while True:
        try:
            w = _corrections(P, xs)
        except CollisionError as exc:
            attempts += 1
            if attempts > xs.size + 1:
                raise DivergenceError(f"unable to separate colliding iterates at iteration {k}") from exc
            xs = _perturb(xs, exc.index, delta, k * (xs.size + 2) + attempts)
            continue
        new = xs - w
        bad = np.flatnonzero(~np.isfinite(new))
        if bad.size == 0:
            return new
        if nonfinite_retry:
            raise DivergenceError(f"divergence detected at iteration {k}")
        nonfinite_retry = True
        for i in bad:
            xs = _perturb(xs, int(i), delta, k)
