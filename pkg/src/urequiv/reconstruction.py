"""Recovering Born probabilities from second moments.

Two independent routes are provided:

* from the variances of a commutative family sharing the eigenbasis of A.
  Each variance is linear in the pair products x_jk = p_j p_k, so a linear
  solve gives x and the products are then factorised into p.
* from covariances of the Lagrange basis polynomials l_j(A), using
  Omega_ij = -cov(l_i, l_j) = p_i p_j and p_i^2 = Omega_ij Omega_ik / Omega_jk.

The spin-1 closed forms in terms of V(J), V(J^2) and <J^3> are a special case
of the second route.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    AmbiguousDistribution,
    DegenerateSpectrum,
    InconsistentVariances,
    NotSpinOne,
    NumericallyDegenerate,
    RankDeficient,
    VanishingDenominator,
)
from .linalg import apply_function, expectation
from .observables import Observable, ProbDist, covariance, lagrange_basis, variance
from .states import DensityMatrix

ZERO_ATOL = 1e-10
DENOM_ATOL = 1e-12
RESIDUAL_FAIL = 1e-6


def pair_index(j: int, k: int, n: int) -> int:
    """Column of the pair (j, k), j < k, in lexicographic order (zero-based)."""
    if not 0 <= j < k < n:
        raise IndexError(f"need 0 <= j < k < n, got ({j}, {k}, {n})")
    return j * n - j * (j + 1) // 2 + (k - j - 1)


def pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


@dataclass(frozen=True, eq=False)
class CommutativeSet:
    """Operators diagonal in the eigenbasis of ``base``.

    ``spectra[i]`` lists the eigenvalues of member i on that basis; row 0 is
    the base observable itself.  ``G[i, l] = (spectra[i, j] - spectra[i, k])**2``
    for the l-th pair (j, k).
    """

    base: Observable
    spectra: np.ndarray
    G: np.ndarray

    @property
    def n(self) -> int:
        return self.base.dim

    @property
    def size(self) -> int:
        return self.spectra.shape[0]

    def operator(self, i: int) -> np.ndarray:
        return apply_function(self.base.op, self.spectra[i])

    def variances(self, rho: DensityMatrix) -> np.ndarray:
        """Variance of every member in ``rho``."""
        out = np.empty(self.size)
        for i in range(self.size):
            m = self.operator(i)
            mean = expectation(rho, m)
            out[i] = expectation(rho, m @ m) - mean * mean
        return out


def coefficient_matrix(spectra) -> np.ndarray:
    spectra = np.atleast_2d(np.asarray(spectra, dtype=float))
    n = spectra.shape[1]
    cols = [(spectra[:, j] - spectra[:, k]) ** 2 for j, k in pairs(n)]
    return np.stack(cols, axis=1)


def _check_rank(G):
    s = np.linalg.svd(G, compute_uv=False)
    if s.size == 0 or s[-1] <= 1e-10 * s[0] or G.shape[0] < G.shape[1]:
        raise RankDeficient("coefficient matrix does not have full column rank")


def build_commutative_set(a: Observable) -> CommutativeSet:
    """A together with D_jk = |j><j| - |k><k| for every pair j < k.

    D_jk contributes 4 to its own pair column and 1 to each pair sharing
    exactly one index, which makes G full column rank for every N >= 2.
    """
    n = a.dim
    if n < 2:
        raise ValueError("need at least two outcomes")
    rows = [np.asarray(a.eigenvalues, dtype=float)]
    for j, k in pairs(n):
        d = np.zeros(n)
        d[j], d[k] = 1.0, -1.0
        rows.append(d)
    spectra = np.array(rows)
    G = coefficient_matrix(spectra)
    _check_rank(G)
    for arr in (spectra, G):
        arr.setflags(write=False)
    return CommutativeSet(base=a, spectra=spectra, G=G)


def variances_to_pair_products(cs: CommutativeSet, dvec) -> np.ndarray:
    """Least-squares solution x of G x = dvec, clamped into [0, 1/4].

    Raises ``InconsistentVariances`` when the residual exceeds 1e-6, i.e. no
    state produces these variances.
    """
    d = np.asarray(dvec, dtype=float)
    if d.shape != (cs.size,):
        raise ValueError(f"expected {cs.size} variances, got shape {d.shape}")
    if np.any(d < -ZERO_ATOL):
        raise InconsistentVariances("negative variance")
    G = cs.G
    x = np.linalg.solve(G.T @ G, G.T @ d)
    resid = np.max(np.abs(G @ x - d))
    if resid > RESIDUAL_FAIL or np.any(x < -1e-8) or np.any(x > 0.25 + 1e-8):
        raise InconsistentVariances(f"variances are not realisable (residual {resid:.2e})")
    return np.clip(x, 0.0, 0.25)


def _pair_matrix(x, n):
    X = np.zeros((n, n))
    for (j, k), v in zip(pairs(n), x):
        X[j, k] = X[k, j] = v
    return X


def _two_outcome(s):
    """Roots of p(1 - p) = s, larger one first."""
    r = np.sqrt(max(0.0, 1.0 - 4.0 * s))
    return (1.0 + r) / 2.0, (1.0 - r) / 2.0


def pair_products_to_probs(x, n: int) -> ProbDist:
    """Factorise pair products x_jk = p_j p_k (j < k) into a distribution.

    With three or more outcomes in the support the answer is unique.  With
    two, the products cannot tell the outcomes apart and the larger
    probability goes to the lower index.  If every product vanishes the
    state is an unidentified eigenstate and ``AmbiguousDistribution`` is raised.
    """
    x = np.clip(np.asarray(x, dtype=float), 0.0, 0.25)
    if x.shape != (n * (n - 1) // 2,):
        raise ValueError(f"expected {n * (n - 1) // 2} pair products, got {x.shape}")
    if n == 1:
        return ProbDist([1.0])
    X = _pair_matrix(x, n)
    if np.all(x < ZERO_ATOL):
        fallback = ProbDist(np.eye(n)[0], method="ambiguous")
        raise AmbiguousDistribution("all pair products vanish; the occupied eigenvalue is unknown", fallback)

    m = int(np.argmax(X.sum(axis=1)))
    partners = [int(i) for i in np.argsort(-X[m], kind="stable") if i != m]
    j, k = partners[0], partners[1] if len(partners) > 1 else None
    p = np.zeros(n)
    if k is None or X[m, k] < ZERO_ATOL:
        # support is {m, j}
        hi, lo = _two_outcome(X[m, j])
        first, second = sorted((m, j))
        p[first], p[second] = hi, lo
        method = "two_outcome"
    else:
        if X[j, k] < DENOM_ATOL:
            raise NumericallyDegenerate("pair-product denominator vanishes")
        p[m] = np.sqrt(X[m, j] * X[m, k] / X[j, k])
        others = [i for i in range(n) if i != m]
        p[others] = X[others, m] / p[m]
        method = "pair_products"
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    recon = np.array([p[a] * p[b] for a, b in pairs(n)])
    if np.max(np.abs(recon - x)) > 1e-6:
        raise NumericallyDegenerate("pair products are not of rank-one form")
    return ProbDist(p, method=method)


def probs_from_variances(rho: DensityMatrix, a: Observable) -> ProbDist:
    """Born distribution of ``a`` from member variances of its commutative set."""
    cs = build_commutative_set(a)
    return pair_products_to_probs(variances_to_pair_products(cs, cs.variances(rho)), a.dim)


def omega_matrix(rho: DensityMatrix, a: Observable) -> np.ndarray:
    """Omega_ij = -cov(l_i(A), l_j(A)) for i != j; zero diagonal."""
    n = a.dim
    ells = [lagrange_basis(a, j) for j in range(n)]
    om = np.zeros((n, n))
    for i, j in pairs(n):
        om[i, j] = om[j, i] = -covariance(rho, ells[i], ells[j])
    return om


def _probs_from_omega(om, eigenvalues, mean):
    """Core of :func:`probs_from_covariances`; ``mean`` is <A>, used only to
    place probability mass the covariances cannot locate."""
    n = om.shape[0]
    lam = np.asarray(eigenvalues, dtype=float)
    if np.max(om) < ZERO_ATOL:
        p = np.zeros(n)
        p[int(np.argmin(np.abs(lam - mean)))] = 1.0
        return p, "point_mass"

    p = np.full(n, np.nan)
    if n > 2:
        for i in range(n):
            rest = [(j, k) for j, k in pairs(n) if i not in (j, k)]
            j, k = max(rest, key=lambda jk: abs(om[jk]))
            if abs(om[j, k]) >= DENOM_ATOL:
                p[i] = np.sqrt(max(0.0, om[i, j] * om[i, k] / om[j, k]))
    unknown = np.flatnonzero(np.isnan(p))
    if unknown.size == 0:
        # small entries are accurate in absolute terms; the largest absorbs
        # the rounding through normalisation
        top = int(np.argmax(p))
        p[top] = max(0.0, 1.0 - (p.sum() - p[top]))
        return p, "covariance"
    if unknown.size != 2:
        raise VanishingDenominator("no usable covariance triple")
    # two-point support {j, k}: p_j p_k = Omega_jk and p_j + p_k = s give the
    # split; <A> only decides which outcome carries the larger share
    j, k = unknown
    known = np.ones(n, dtype=bool)
    known[[j, k]] = False
    s = 1.0 - np.sum(p[known])
    r = np.sqrt(max(0.0, s * s - 4.0 * om[j, k]))
    hi, lo = (s + r) / 2.0, (s - r) / 2.0
    rest_mean = float(np.sum(p[known] * lam[known]))
    mid = (lam[j] + lam[k]) / 2.0 * s
    if (mean - rest_mean - mid) * (lam[j] - lam[k]) >= 0:
        p[j], p[k] = hi, lo
    else:
        p[j], p[k] = lo, hi
    return p, ("two_outcome" if n == 2 else "covariance_two_point")


def probs_from_covariances(rho: DensityMatrix, a: Observable) -> ProbDist:
    """Born distribution of a nondegenerate ``a`` from Lagrange-polynomial covariances.

    For each i the partner pair (j, k) with the largest |Omega_jk| is used.
    When the state's support has at most two outcomes the covariances do not
    say where the mass sits; the first moment <A> settles it and the result
    is flagged through ``ProbDist.method``.
    """
    if not a.nondegenerate:
        raise DegenerateSpectrum("covariance reconstruction needs distinct eigenvalues")
    om = omega_matrix(rho, a)
    p, method = _probs_from_omega(om, a.eigenvalues, expectation(rho, a.matrix))
    p = np.clip(p, 0.0, None)
    return ProbDist(p / p.sum(), method=method)


def _is_spin_one(a: Observable) -> bool:
    return a.dim == 3 and np.allclose(a.eigenvalues, [1.0, 0.0, -1.0], atol=1e-10)


def spin1_moments(rho: DensityMatrix, a: Observable) -> dict:
    """V(J), V(J^2) and T = <J^3> - <J^2><J> for a spin-1 component J."""
    j = a.matrix
    j2 = j @ j
    e1, e2, e3, e4 = (expectation(rho, m) for m in (j, j2, j2 @ j, j2 @ j2))
    return {"vJ": e2 - e1 * e1, "vJ2": e4 - e2 * e2, "T": e3 - e2 * e1}


def spin1_probs_from_moments(rho: DensityMatrix, a: Observable) -> ProbDist:
    """(p_+1, p_0, p_-1) of a spin-1 component from V(J), V(J^2) and <J^3>.

    p1^2 = (V2 + T)(V - V2) / 4(V2 - T),  p2^2 = (V2^2 - T^2) / (V - V2),
    p3^2 = (V2 - T)(V - V2) / 4(V2 + T).  A denominator below 1e-12 falls
    back to :func:`probs_from_covariances` (method ``"covariance_fallback"``).
    """
    if not _is_spin_one(a):
        raise NotSpinOne("closed forms need a spin-1 component with spectrum {1, 0, -1}")
    mo = spin1_moments(rho, a)
    v, v2, t = mo["vJ"], mo["vJ2"], mo["T"]
    dens = (v2 - t, v - v2, v2 + t)
    if min(abs(d) for d in dens) < DENOM_ATOL:
        fb = probs_from_covariances(rho, a)
        return ProbDist(fb.probs, method="covariance_fallback")
    sq = np.array([
        (v2 + t) * (v - v2) / (4.0 * (v2 - t)),
        (v2 * v2 - t * t) / (v - v2),
        (v2 - t) * (v - v2) / (4.0 * (v2 + t)),
    ])
    p = np.sqrt(np.clip(sq, 0.0, None))
    return ProbDist(p / p.sum(), method="spin1_closed_form")
