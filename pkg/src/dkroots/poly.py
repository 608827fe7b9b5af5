"""Monic real polynomials, Horner evaluation and the benchmark families.

Coefficients are stored in descending powers with the leading 1 at index 0,
so ``coeffs[i - 1]`` is the coefficient usually written ``a_i``::

    p(x) = x**n + a_2 x**(n-1) + ... + a_n x + a_{n+1}
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

# Largest Wilkinson degree whose coefficients all fit in a double.
WILKINSON_MAX_DEGREE = 169


class PolynomialError(ValueError):
    """Raised for malformed polynomials or invalid generator arguments."""


@dataclass(frozen=True)
class RealPolynomial:
    """A monic polynomial with finite real coefficients.

    ``coeffs`` is ``(1, a_2, ..., a_{n+1})``. Any iterable of numbers is
    accepted and stored as a tuple of floats.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        try:
            coeffs = tuple(float(c) for c in self.coeffs)
        except (TypeError, ValueError, OverflowError) as exc:
            raise PolynomialError(f"coefficients must be real numbers: {exc}") from None
        if len(coeffs) < 2:
            raise PolynomialError("degree must be at least 1")
        if coeffs[0] != 1.0:
            raise PolynomialError(f"leading coefficient must be 1, got {coeffs[0]!r}")
        for i, c in enumerate(coeffs):
            if not math.isfinite(c):
                raise PolynomialError(f"coefficient {i} is not finite: {c!r}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def tail(self) -> tuple[float, ...]:
        """Non-leading coefficients ``a_2 .. a_{n+1}``."""
        return self.coeffs[1:]

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def __call__(self, z):
        return evaluate(self, z)

    def __len__(self):
        return len(self.coeffs)


def horner(coeffs: Sequence[float] | np.ndarray, z):
    """Evaluate descending-power ``coeffs`` at ``z`` (scalar or array)."""
    if isinstance(z, np.ndarray):
        acc = np.full(z.shape, coeffs[0], dtype=np.result_type(z, np.float64, np.asarray(coeffs).dtype))
        for c in coeffs[1:]:
            acc = acc * z + c
        return acc
    acc = coeffs[0]
    for c in coeffs[1:]:
        acc = acc * z + c
    return acc


def evaluate(p: RealPolynomial, z) -> complex:
    """Return ``p(z)`` by one left-to-right Horner pass.

    Overflow is not trapped here; a non-finite result is returned as-is.
    """
    if isinstance(z, np.ndarray):
        return horner(p.coeffs, z.astype(complex))
    return complex(horner(p.coeffs, complex(z)))


def _expand(roots: Iterable[complex]) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for r in roots:
        nxt = np.empty(out.size + 1, dtype=complex)
        nxt[:-1] = out
        nxt[-1] = 0
        nxt[1:] -= r * out
        out = nxt
    return out


def from_roots(roots: Iterable[complex], tol: float = 1e-10) -> RealPolynomial:
    """Build the monic polynomial ``prod(x - r)``.

    The root multiset must be closed under conjugation. Imaginary parts left
    over from rounding are dropped when they are below ``tol`` relative to the
    coefficient's size; anything larger means the input was not conjugate
    closed.
    """
    roots = np.asarray(list(roots), dtype=complex)
    if roots.size == 0:
        raise PolynomialError("need at least one root")
    if not np.all(np.isfinite(roots)):
        raise PolynomialError("roots must be finite")
    full = _expand(roots)
    scale = np.maximum(1.0, np.abs(full.real))
    if np.any(np.abs(full.imag) > tol * scale):
        raise PolynomialError("complex coefficients would result: roots are not closed under conjugation")
    return RealPolynomial(full.real)


def wilkinson(n: int) -> RealPolynomial:
    """``prod_{i=1}^{n} (x + i)``, roots ``-1, ..., -n``.

    The expansion is done in exact integer arithmetic and rounded once.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise PolynomialError(f"wilkinson degree must be a positive integer, got {n!r}")
    if n > WILKINSON_MAX_DEGREE:
        raise PolynomialError(
            f"wilkinson({n}) has coefficients beyond double range (max degree {WILKINSON_MAX_DEGREE})"
        )
    c = [1]
    for i in range(1, n + 1):
        c = [a + i * b for a, b in zip(c + [0], [0] + c)]
    return RealPolynomial([float(v) for v in c])


def wilkinson_roots(n: int) -> np.ndarray:
    return -np.arange(1, n + 1, dtype=float).astype(complex)


def wilkinson_perturbed(n: int, eps: float, k: int) -> RealPolynomial:
    """``wilkinson(n)`` with ``eps`` subtracted from the coefficient of ``x**k``.

    Wilkinson's classic experiment is ``n=20, eps=2**-23, k=19``.
    """
    base = wilkinson(n)
    if not 0 <= k <= n - 1:
        raise PolynomialError(f"perturbed power k must satisfy 0 <= k <= {n - 1}, got {k}")
    coeffs = list(base.coeffs)
    coeffs[n - k] -= eps
    return RealPolynomial(coeffs)


def clustered(n: int, spacing: float = 0.001) -> tuple[RealPolynomial, np.ndarray]:
    """Polynomial with real roots ``-(1 + spacing*i)``, ``i = 1..n``, and those roots."""
    if n < 1:
        raise PolynomialError("clustered degree must be >= 1")
    if not spacing > 0:
        raise PolynomialError("spacing must be positive")
    roots = -(1.0 + spacing * np.arange(1, n + 1, dtype=float))
    coeffs = _expand(roots.astype(complex)).real
    return RealPolynomial(coeffs), roots.astype(complex)


def random_poly(n: int, lo: float = -15.0, hi: float = 15.0, rng=None) -> RealPolynomial:
    """Monic degree-``n`` polynomial with tail coefficients uniform on ``[lo, hi]``.

    ``rng`` is a ``numpy.random.Generator`` or an integer seed.
    """
    if n < 1:
        raise PolynomialError("degree must be >= 1")
    if lo > hi:
        raise PolynomialError(f"empty coefficient range [{lo}, {hi}]")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    tail = rng.uniform(lo, hi, size=n)
    return RealPolynomial(np.concatenate([[1.0], tail]))


def _div_pow(c: float, s: float, k: int) -> float:
    # c / s**k without intermediate overflow/underflow of s**k
    if c == 0.0 or k == 0:
        return c
    cm, ce = math.frexp(c)
    sm, se = math.frexp(s)
    pm, pe = 1.0, 0
    for _ in range(k):
        pm, e = math.frexp(pm * sm)
        pe += e + se
    return math.ldexp(cm / pm, ce - pe)


def scale_variable(p: RealPolynomial, s: float) -> RealPolynomial:
    """Return ``q(y) = p(s*y) / s**n``; the roots of ``q`` are those of ``p`` over ``s``."""
    if not s > 0 or not math.isfinite(s):
        raise PolynomialError(f"scale factor must be positive and finite, got {s!r}")
    if s == 1.0:
        return p
    return RealPolynomial([_div_pow(c, s, k) for k, c in enumerate(p.coeffs)])
