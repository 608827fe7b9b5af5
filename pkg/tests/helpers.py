"""Independent oracles shared by the test modules."""

from itertools import permutations

import mpmath as mp
import numpy as np

from dkroots.poly import from_roots

mp.mp.dps = 50


def closed_form_roots(coeffs):
    """Roots of a monic polynomial of degree 1-4 from the classical formulas.

    Evaluated in 50-digit arithmetic so the result is an accurate reference
    for the double-precision coefficients given.
    """
    c = [mp.mpf(float(v)) for v in coeffs]
    n = len(c) - 1
    if n == 1:
        out = [-c[1]]
    elif n == 2:
        out = _quadratic(c[1], c[2])
    elif n == 3:
        out = _cubic(c[1], c[2], c[3])
    elif n == 4:
        out = _quartic(c[1], c[2], c[3], c[4])
    else:
        raise ValueError("closed form only up to degree 4")
    return np.array([complex(z) for z in out])


def _quadratic(b, c):
    d = mp.sqrt(mp.mpc(b * b - 4 * c))
    return [(-b + d) / 2, (-b - d) / 2]


def _cubic(b, c, d):
    # x = t - b/3  ->  t^3 + p t + q
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    w = mp.mpc(-0.5, mp.sqrt(3) / 2)
    disc = mp.sqrt(mp.mpc(q * q / 4 + p**3 / 27))
    u3 = -q / 2 + disc
    if abs(u3) < abs(-q / 2 - disc):
        u3 = -q / 2 - disc
    if u3 == 0:
        ts = [mp.mpc(0)] * 3
    else:
        u = mp.cbrt(u3)
        ts = []
        for k in range(3):
            uk = u * w**k
            ts.append(uk - p / (3 * uk))
    return [t - b / 3 for t in ts]


def _quartic(b, c, d, e):
    # x = y - b/4  ->  y^4 + p y^2 + q y + r
    p = c - 3 * b * b / 8
    q = b**3 / 8 - b * c / 2 + d
    r = -3 * b**4 / 256 + b * b * c / 16 - b * d / 4 + e
    if abs(q) < mp.mpf(10) ** -40:
        zs = _quadratic(p, r)
        ys = []
        for z in zs:
            s = mp.sqrt(mp.mpc(z))
            ys += [s, -s]
    else:
        # resolvent: 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0
        ms = _cubic(p, (2 * p * p - 8 * r) / 8, -q * q / 8)
        m = max(ms, key=abs)
        s2m = mp.sqrt(2 * m)
        ys = []
        for s in (1, -1):
            inner = mp.sqrt(-(2 * p + 2 * m + s * mp.sqrt(2) * q / mp.sqrt(m)))
            for t in (1, -1):
                ys.append((s * s2m + t * inner) / 2)
    return [y - b / 4 for y in ys]


def conjugate_closed_roots(rng, n, radius=10.0, min_sep=0.0, max_tries=1000):
    """``n`` roots uniform in the disc ``|z| <= radius``, closed under conjugation."""
    for _ in range(max_tries):
        roots = []
        for _ in range(n // 2):
            rad = radius * np.sqrt(rng.random())
            th = rng.uniform(0.0, np.pi)
            z = rad * np.exp(1j * th)
            roots += [z, np.conj(z)]
        if n % 2:
            roots.append(complex(rng.uniform(-radius, radius)))
        roots = np.array(roots, dtype=complex)
        if min_sep <= 0 or n == 1:
            return roots
        d = np.abs(roots[:, None] - roots[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() >= min_sep:
            return roots
    raise RuntimeError("could not satisfy root separation")


def disk_corpus(count, deg_lo, deg_hi, seed, radius=10.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(deg_lo, deg_hi + 1))
        roots = conjugate_closed_roots(rng, n, radius)
        out.append((from_roots(roots), roots))
    return out


def brute_force_matching_cost(a, b):
    """Minimum total pairing distance by enumerating all permutations."""
    a = np.asarray(a)
    b = np.asarray(b)
    return min(sum(abs(a[i] - b[j]) for i, j in enumerate(perm)) for perm in permutations(range(len(b))))


def greedy_matching_cost(a, b):
    left = list(range(len(b)))
    total = 0.0
    for z in a:
        j = min(left, key=lambda k: abs(z - b[k]))
        total += abs(z - b[j])
        left.remove(j)
    return total
