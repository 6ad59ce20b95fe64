"""Real-valued special functions and Nakagami-m moments.

The regularized lower incomplete gamma function is evaluated with the usual
split: power series below ``x = k + 1`` and a modified-Lentz continued
fraction above it.  Both paths are vectorized over ``x``.
"""

import math
from typing import NamedTuple

import numpy as np

EPS = 1e-14
MAX_ITER = 500
_TINY = 1e-300


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class NakagamiMoments(NamedTuple):
    mean: float
    variance: float


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _max_iter(k):
    # both expansions need O(sqrt(k)) terms when x is close to k
    return MAX_ITER + int(10 * math.sqrt(k))


def _series(k, x, lgk):
    total = np.full_like(x, 1.0 / k)
    term = total.copy()
    active = np.ones(x.shape, dtype=bool)
    for n in range(1, _max_iter(k) + 1):
        term[active] *= x[active] / (k + n)
        total[active] += term[active]
        active &= np.abs(term) >= np.abs(total) * EPS
        if not active.any():
            break
    else:
        raise RuntimeError(f"incomplete gamma series did not converge for k={k}")
    return total * np.exp(k * np.log(x) - x - lgk)


def _continued_fraction(k, x, lgk):
    # Q(k, x) by modified Lentz
    b = x + 1.0 - k
    c = np.full_like(x, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, _max_iter(k) + 1):
        an = -i * (i - k)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= EPS
        if not active.any():
            break
    else:
        raise RuntimeError(f"incomplete gamma continued fraction did not converge for k={k}")
    return np.exp(k * np.log(x) - x - lgk) * h


def reg_lower_incomplete_gamma(k, x):
    """Regularized lower incomplete gamma ``P(k, x) = gamma(k, x) / Gamma(k)``.

    ``k`` is a positive scalar; ``x`` may be a scalar or an array of
    nonnegative values.  Scalars in give a float out.
    """
    k = float(k)
    if not k > 0:
        raise DomainError(f"shape k must be positive, got {k!r}")
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa < 0):
        raise DomainError("x must be nonnegative")

    out = np.zeros(xa.shape)
    lgk = math.lgamma(k)
    flat = xa.reshape(-1)
    res = out.reshape(-1)

    lo = (flat > 0) & (flat < k + 1.0)
    hi = flat >= k + 1.0
    if lo.any():
        res[lo] = _series(k, flat[lo], lgk)
    if hi.any():
        finite = hi & np.isfinite(flat)
        res[hi & ~finite] = 1.0
        if finite.any():
            res[finite] = 1.0 - _continued_fraction(k, flat[finite], lgk)
    np.clip(out, 0.0, 1.0, out=out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def nakagami_moments(m, omega):
    """Mean and variance of a Nakagami(m, omega) amplitude."""
    if not m >= 0.5:
        raise DomainError(f"Nakagami shape must be >= 0.5, got {m!r}")
    if not omega > 0:
        raise DomainError(f"Nakagami spread must be positive, got {omega!r}")
    mean = math.exp(math.lgamma(m + 0.5) - math.lgamma(m)) * math.sqrt(omega / m)
    return NakagamiMoments(mean, omega - mean * mean)
