"""Renyi entropies and the closed-form variance <-> entropy maps.

All entropies are in nats.  The qubit maps work on the normalised variance
v = Var(A) / lambda^2 in [0, 1] and accept scalars or numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ArgumentOutOfRange, EntropyOutOfRange, VarianceOutOfRange
from .linalg import expectation

SHANNON_WINDOW = 1e-6
BISECT_TOL = 1e-12
RANGE_ATOL = 1e-12
LN2 = float(np.log(2.0))


def _check_alpha(alpha):
    if not alpha > 0:
        raise ValueError(f"Renyi index must be positive, got {alpha}")


def renyi_entropy(p, alpha: float) -> float:
    """H_alpha(p) = ln(sum p^alpha) / (1 - alpha); Shannon within 1e-6 of alpha = 1."""
    _check_alpha(alpha)
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    if abs(alpha - 1.0) < SHANNON_WINDOW:
        nz = p[p > 0]
        return float(max(-np.sum(nz * np.log(nz)), 0.0))
    return float(max(np.log(np.sum(p**alpha)) / (1.0 - alpha), 0.0))


def renyi_entropy_rows(p, alpha: float) -> np.ndarray:
    """:func:`renyi_entropy` applied to each row of a 2-d array."""
    _check_alpha(alpha)
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    if abs(alpha - 1.0) < SHANNON_WINDOW:
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
        h = -t.sum(axis=-1)
    else:
        h = np.log(np.sum(p**alpha, axis=-1)) / (1.0 - alpha)
    return np.maximum(h, 0.0)


def collision_entropy(p) -> float:
    return renyi_entropy(p, 2.0)


def qubit_probabilities(v):
    """a_+ = (1 + sqrt(1 - v)) / 2 and a_- = 1 - a_+ for normalised variance v.

    a_- is formed as v / (4 a_+) to keep its relative accuracy for small v.
    """
    v = np.asarray(v, dtype=float)
    ap = (1.0 + np.sqrt(np.clip(1.0 - v, 0.0, None))) / 2.0
    return ap, v / (4.0 * ap)


def _f(v, alpha):
    ap, am = qubit_probabilities(v)
    if abs(alpha - 1.0) < SHANNON_WINDOW:
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(am > 0, am * np.log(np.where(am > 0, am, 1.0)), 0.0)
        return -(ap * np.log(ap) + t)
    return np.log(ap**alpha + am**alpha) / (1.0 - alpha)


def _f_scalar(v: float, alpha: float) -> float:
    ap = (1.0 + math.sqrt(max(1.0 - v, 0.0))) / 2.0
    am = v / (4.0 * ap)
    if abs(alpha - 1.0) < SHANNON_WINDOW:
        return -(ap * math.log(ap) + (am * math.log(am) if am > 0 else 0.0))
    return math.log(ap**alpha + am**alpha) / (1.0 - alpha)


def _bisect_scalar(h: float, alpha: float) -> float:
    # same stopping rule as the array path, without numpy call overhead
    lo, hi = 0.0, 1.0
    eps4 = 4 * np.finfo(float).eps
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        fm = _f_scalar(mid, alpha)
        if abs(fm - h) < BISECT_TOL or hi - lo <= eps4 * hi:
            return mid
        if fm < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


def qubit_entropy_from_variance(v, alpha: float):
    """f_alpha(v) = ln(a_+^alpha + a_-^alpha) / (1 - alpha).

    Increasing in v, with f(0) = 0 and f(1) = ln 2.
    """
    _check_alpha(alpha)
    va = np.asarray(v, dtype=float)
    if np.any(va < -RANGE_ATOL) or np.any(va > 1.0 + RANGE_ATOL):
        raise VarianceOutOfRange("normalised qubit variance must lie in [0, 1]")
    va = np.clip(va, 0.0, 1.0)
    return _scalar_or_array(np.clip(_f(va, alpha), 0.0, LN2), v)


def qubit_variance_from_entropy(h, alpha: float):
    """g_alpha(h): the inverse of :func:`qubit_entropy_from_variance`.

    Vectorised bisection on [0, 1] until |f(v) - h| < 1e-12 or the bracket
    is down to a few ulps of its upper end.  The stop is relative because
    for alpha < 1 the slope of f is unbounded as v -> 0.
    """
    _check_alpha(alpha)
    ha = np.asarray(h, dtype=float)
    if np.any(ha < -RANGE_ATOL) or np.any(ha > LN2 + RANGE_ATOL):
        raise EntropyOutOfRange("qubit entropy must lie in [0, ln 2]")
    ha = np.clip(ha, 0.0, LN2)
    if ha.ndim == 0:
        hs = float(ha)
        return 0.0 if hs == 0.0 else 1.0 if hs == LN2 else _bisect_scalar(hs, alpha)
    lo = np.zeros_like(ha)
    hi = np.ones_like(ha)
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        fm = _f(mid, alpha)
        done = (np.abs(fm - ha) < BISECT_TOL) | (hi - lo <= 4 * np.finfo(float).eps * hi)
        if np.all(done):
            lo = hi = mid
            break
        below = fm < ha
        lo = np.where(done, mid, np.where(below, mid, lo))
        hi = np.where(done, mid, np.where(below, hi, mid))
    out = 0.5 * (lo + hi)
    out = np.where(ha == 0.0, 0.0, np.where(ha == LN2, 1.0, out))
    return _scalar_or_array(out, h)


def collision_variance_closed_form(h2):
    """g_2(h) = 2 - 2 exp(-h), the alpha = 2 inverse in closed form."""
    return 2.0 - 2.0 * np.exp(-np.asarray(h2, dtype=float))


def spin1_collision_entropy_from_variances(vJ: float, vJ2: float) -> float:
    """H_2(J) = -ln(1 - V(J)/2 - 3 V(J^2)/2) for a spin-1 component J."""
    arg = 1.0 - 0.5 * vJ - 1.5 * vJ2
    if not 0.0 < arg <= 1.0 + RANGE_ATOL:
        raise ArgumentOutOfRange(f"1 - V(J)/2 - 3V(J^2)/2 = {arg!r} is outside (0, 1]")
    return max(-float(np.log(min(arg, 1.0))), 0.0)


def spin32_collision_entropy_from_moments(m: dict) -> float:
    """Collision entropy of a spin-3/2 component from its low moments.

    ``m`` needs keys ``vJ3``, ``vJ2``, ``vJ`` (variances of J^3, J^2, J) and
    the means ``J4``, ``J``, ``J3``.
    """
    bracket = (
        5.0 / 9.0 * m["vJ3"]
        + 0.25 * m["vJ2"]
        + 365.0 / 144.0 * m["vJ"]
        - 41.0 / 18.0 * (m["J4"] - m["J"] * m["J3"])
    )
    arg = 1.0 - bracket
    if not 0.0 < arg <= 1.0 + 1e-10:
        raise ArgumentOutOfRange(f"collision-probability argument {arg!r} is outside (0, 1]")
    return max(-float(np.log(min(arg, 1.0))), 0.0)


def spin32_moments(rho, a) -> dict:
    """Moments of a spin-3/2 component needed by :func:`spin32_collision_entropy_from_moments`."""
    j = a.matrix
    powers = [np.eye(j.shape[0])]
    for _ in range(6):
        powers.append(powers[-1] @ j)
    e = [expectation(rho, pw) for pw in powers]
    return {
        "vJ": e[2] - e[1] ** 2,
        "vJ2": e[4] - e[2] ** 2,
        "vJ3": e[6] - e[3] ** 2,
        "J": e[1],
        "J3": e[3],
        "J4": e[4],
    }
