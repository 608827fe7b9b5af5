"""Radii of discs centred at the origin that contain every root of a polynomial.

Five strategies are provided. Each returns a :class:`BoundResult` and the
:func:`radius` dispatcher picks one by :class:`BoundMethod`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .poly import RealPolynomial, horner

MIN_RADIUS = 1e-6


class BoundMethod(str, enum.Enum):
    CAUCHY = "cauchy"
    LAGRANGE = "lagrange"
    ABERTH = "aberth"
    NEW_BOUND_1 = "new-bound-1"
    LAMBDA_MAX = "lambda-max"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: "str | BoundMethod") -> "BoundMethod":
        if isinstance(name, cls):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown bound {name!r}; expected one of {choices}") from None


ALL_METHODS = tuple(BoundMethod)
PROPOSED_METHODS = (BoundMethod.NEW_BOUND_1, BoundMethod.LAMBDA_MAX)


@dataclass(frozen=True)
class BoundDetail:
    r0: int | None = None
    power_iters: int | None = None
    power_converged: bool | None = None
    fallback: bool = False
    clamped: bool = False


@dataclass(frozen=True)
class BoundResult:
    method: BoundMethod
    radius: float
    detail: BoundDetail = field(default_factory=BoundDetail)

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius!r}")

    def as_row(self) -> dict:
        d = self.detail
        return {
            "method": self.method.value,
            "radius": format(self.radius, ".17g"),
            "r0": "" if d.r0 is None else str(d.r0),
            "power_iters": "" if d.power_iters is None else str(d.power_iters),
            "fallback": "true" if d.fallback else "false",
        }


@dataclass(frozen=True)
class PowerIterConfig:
    """Settings for the dominant-modulus power iteration.

    ``block_size`` vectors are iterated together and the modulus is read off
    the Ritz values of the projected block. ``block_size=1`` is the plain
    Rayleigh-quotient power method. The estimate is accepted once it has
    changed by less than ``rel_tol`` for ``patience`` consecutive steps.
    """

    max_iters: int = 200
    rel_tol: float = 1e-8
    seed: int = 0
    block_size: int = 8
    patience: int = 5
    safety_factor: float = 1.0

    def __post_init__(self):
        if self.max_iters < 2:
            raise ValueError("max_iters must be >= 2")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if not self.safety_factor > 0:
            raise ValueError("safety_factor must be positive")


class PowerIterationError(ArithmeticError):
    pass


def _clamped(method, r, detail=None, minimum=MIN_RADIUS):
    detail = detail or BoundDetail()
    if not r >= minimum:
        detail = replace(detail, clamped=True)
        r = minimum
    return BoundResult(method, float(r), detail)


def _root_terms(p: RealPolynomial) -> np.ndarray:
    """``|a_k| ** (1 / (k - 1))`` for ``k = 2 .. n+1``."""
    tail = np.abs(np.asarray(p.tail, dtype=float))
    return tail ** (1.0 / np.arange(1, tail.size + 1))


def cauchy_bound(p: RealPolynomial) -> BoundResult:
    """``1 + max |a_i|``."""
    return _clamped(BoundMethod.CAUCHY, 1.0 + max(abs(c) for c in p.tail))


def lagrange_bound(p: RealPolynomial, rule: str = "two-largest") -> BoundResult:
    """Lagrange-type bound built from ``t_k = |a_k| ** (1/(k-1))``.

    ``rule="two-largest"`` is Lagrange's theorem: the sum of the two largest
    ``t_k``. ``rule="one-plus-max"`` is ``1 + max t_k``, which is tighter but
    fails to enclose the roots when ``max t_k > 1`` (e.g. ``x**2 - 10x - 100``).
    """
    t = _root_terms(p)
    if rule == "two-largest":
        top = np.sort(t)[::-1]
        r = top[0] + (top[1] if top.size > 1 else 0.0)
    elif rule == "one-plus-max":
        r = 1.0 + t.max()
    else:
        raise ValueError(f"unknown lagrange rule {rule!r}")
    return _clamped(BoundMethod.LAGRANGE, r)


def shift_polynomial(p: RealPolynomial, c: float) -> RealPolynomial:
    """Coefficients of ``q(w) = p(w + c)`` via repeated synthetic division."""
    a = list(p.coeffs)
    n = len(a) - 1
    if c == 0:
        return p
    # After pass j, a[n - j] holds the Taylor coefficient of w**j.
    for j in range(n):
        for i in range(1, n + 1 - j):
            a[i] += c * a[i - 1]
    return RealPolynomial(a)


def _majorant_positive(mags: np.ndarray, w: float) -> bool:
    # s(w) = w^n - sum |c_k| w^(n-k) > 0  <=>  1 - sum |c_k| w^-k > 0  for w > 0
    if w <= 0:
        return False
    acc = horner(np.concatenate([mags[::-1], [0.0]]), 1.0 / w)
    return bool(1.0 - acc > 0)


def aberth_bound(p: RealPolynomial) -> BoundResult:
    """Aberth's bound ``|a_2|/n + r0``.

    The polynomial is re-centred at ``-a_2/n`` so the ``w**(n-1)`` term
    vanishes; ``r0`` is the smallest integer where the comparison polynomial
    ``w**n - sum |c_k| w**(n-k)`` turns positive. That predicate is monotone
    in ``w``, so the smallest integer is located by doubling then bisection.
    """
    n = p.degree
    a2 = p.coeffs[1]
    q = shift_polynomial(p, -a2 / n)
    mags = np.abs(np.asarray(q.tail, dtype=float))
    upper = math.ceil(max(float(mags.max()), n)) + 1
    if not _majorant_positive(mags, float(upper)):
        fb = cauchy_bound(p)
        return BoundResult(BoundMethod.ABERTH, fb.radius, BoundDetail(fallback=True))
    if _majorant_positive(mags, 1.0):
        r0 = 1
    else:
        lo, hi = 1, 2
        while hi < upper and not _majorant_positive(mags, float(hi)):
            lo, hi = hi, hi * 2
        hi = min(hi, upper)
        # invariant: predicate false at lo, true at hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _majorant_positive(mags, float(mid)):
                hi = mid
            else:
                lo = mid
        r0 = hi
    return _clamped(BoundMethod.ABERTH, abs(a2) / n + r0, BoundDetail(r0=r0))


def new_bound1(p: RealPolynomial, minimum: float = 1.0) -> BoundResult:
    """Sum of ``|a_k| ** (1/(k-1))`` over every non-leading coefficient.

    ``x**n + a`` gives ``|a| ** (1/n)``, the common modulus of its roots. An
    all-zero tail returns ``minimum``.
    """
    t = _root_terms(p)
    r = float(t.sum())
    if r == 0.0:
        return BoundResult(BoundMethod.NEW_BOUND_1, float(minimum), BoundDetail(clamped=True))
    return _clamped(BoundMethod.NEW_BOUND_1, r)


@dataclass(frozen=True)
class CompanionMatrix:
    """Companion matrix stored by its first row ``[-a_2, ..., -a_{n+1}]``.

    Rows below the first are the shifted identity, so a product costs O(n).
    """

    first_row: np.ndarray

    @property
    def order(self) -> int:
        return self.first_row.size

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = np.empty_like(x, dtype=float)
        y[0] = self.first_row @ x
        y[1:] = x[:-1]
        return y

    def to_dense(self) -> np.ndarray:
        n = self.order
        m = np.zeros((n, n))
        m[0] = self.first_row
        if n > 1:
            m[np.arange(1, n), np.arange(n - 1)] = 1.0
        return m


def companion_matrix(p: RealPolynomial) -> CompanionMatrix:
    return CompanionMatrix(-np.asarray(p.tail, dtype=float))


@dataclass(frozen=True)
class PowerEstimate:
    modulus: float
    iterations: int
    converged: bool


def _start_block(n, d, seed):
    rng = np.random.default_rng(seed)
    x0 = 2.0 * rng.random((n, d))
    q, _ = np.linalg.qr(x0)
    return q


def dominant_modulus(C: CompanionMatrix, cfg: PowerIterConfig | None = None) -> PowerEstimate:
    """Estimate the largest eigenvalue modulus of ``C`` by block power iteration.

    ``block_size`` orthonormal vectors are multiplied by ``C`` and
    re-orthonormalised each step. The estimate is the largest modulus among
    the eigenvalues of the small projected matrix ``X.T @ C @ X``. Several
    vectors are needed because companion matrices of real polynomials often
    carry a complex-conjugate pair, or several pairs of nearly equal modulus,
    at the top. A single vector cannot separate those in a few hundred steps.
    """
    cfg = cfg or PowerIterConfig()
    n = C.order
    if not np.any(C.first_row):
        return PowerEstimate(0.0, 0, True)
    if n == 1:
        return PowerEstimate(abs(float(C.first_row[0])), 1, True)
    d = min(cfg.block_size, n)

    X = _start_block(n, d, cfg.seed)
    restarted = False
    prev = None
    streak = 0
    est = float("nan")
    k = 0
    while k < cfg.max_iters:
        k += 1
        Y = C.matvec(X)
        if not np.any(Y):
            if restarted:
                raise PowerIterationError("power iteration reached the zero vector twice")
            restarted = True
            X = _start_block(n, d, cfg.seed + 1)
            prev, streak = None, 0
            continue
        H = X.T @ Y
        est = float(np.max(np.abs(np.linalg.eigvals(H))))
        X, _ = np.linalg.qr(Y)
        if prev is not None and abs(est - prev) <= cfg.rel_tol * est:
            streak += 1
            if streak >= cfg.patience:
                return PowerEstimate(est, k, True)
        else:
            streak = 0
        prev = est
    if not math.isfinite(est):
        raise PowerIterationError("power iteration produced a non-finite estimate")
    return PowerEstimate(est, k, False)


def lambda_max_bound(p: RealPolynomial, cfg: PowerIterConfig | None = None) -> BoundResult:
    """Modulus of the dominant eigenvalue of the companion matrix."""
    cfg = cfg or PowerIterConfig()
    est = dominant_modulus(companion_matrix(p), cfg)
    detail = BoundDetail(power_iters=est.iterations, power_converged=est.converged)
    return _clamped(BoundMethod.LAMBDA_MAX, est.modulus * cfg.safety_factor, detail)


def radius(
    p: RealPolynomial,
    method: BoundMethod | str,
    cfg: PowerIterConfig | None = None,
    min_radius: float = MIN_RADIUS,
) -> BoundResult:
    method = BoundMethod.parse(method)
    if method is BoundMethod.CAUCHY:
        res = cauchy_bound(p)
    elif method is BoundMethod.LAGRANGE:
        res = lagrange_bound(p)
    elif method is BoundMethod.ABERTH:
        res = aberth_bound(p)
    elif method is BoundMethod.NEW_BOUND_1:
        res = new_bound1(p)
    else:
        res = lambda_max_bound(p, cfg)
    if res.radius < min_radius:
        res = _clamped(method, res.radius, res.detail, minimum=min_radius)
    return res


def all_bounds(p: RealPolynomial, cfg: PowerIterConfig | None = None) -> list[BoundResult]:
    return [radius(p, m, cfg) for m in ALL_METHODS]
