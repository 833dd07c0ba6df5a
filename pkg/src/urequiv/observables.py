"""Observables, Born probabilities, variances and covariance functions.

Indices are zero-based throughout: ``lagrange_basis(a, 0)`` is the projector
onto the eigenvector of the largest eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, DimensionMismatch, InvalidAxis, NonCommuting
from .linalg import (
    HermitianOperator,
    apply_function,
    apply_polynomial,
    as_matrix,
    eigen_decompose,
    expectation,
)
from .states import PAULIS, DensityMatrix

PROB_NEG_ATOL = 1e-12
PROB_SUM_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class Observable:
    op: HermitianOperator
    nondegenerate: bool

    @classmethod
    def from_matrix(cls, m, traceless: bool = False) -> "Observable":
        """Decompose ``m``; ``traceless=True`` first removes Tr[m]/N."""
        a = as_matrix(m)
        if traceless:
            a = a - np.trace(a).real / a.shape[0] * np.eye(a.shape[0])
        op = eigen_decompose(a)
        return cls(op=op, nondegenerate=not op.degenerate_pairs())

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.op.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.op.eigenvectors


@dataclass(frozen=True, eq=False)
class ProbDist:
    """Born distribution of an observable, in its eigenvalue order.

    ``method`` records how the probabilities were obtained when a
    reconstruction routine had to leave its primary path.
    """

    probs: np.ndarray
    method: str = "born"

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).reshape(-1)
        if np.any(p < -PROB_NEG_ATOL):
            raise ValueError(f"negative probability {p.min()!r}")
        if abs(p.sum() - 1.0) > PROB_SUM_ATOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return len(self.probs)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)


def _check_dims(rho, a):
    if rho.dim != a.dim:
        raise DimensionMismatch(f"state has dim {rho.dim}, observable has dim {a.dim}")


def born_probabilities(rho: DensityMatrix, a: Observable) -> ProbDist:
    """p_j = <j|rho|j> over the eigenvectors of ``a``."""
    _check_dims(rho, a)
    u = a.eigenvectors
    p = np.einsum("ij,ik,kj->j", u.conj(), rho.matrix, u).real
    return ProbDist(p)


def variance(rho: DensityMatrix, a: Observable) -> float:
    """Tr[rho A^2] - Tr[rho A]^2."""
    _check_dims(rho, a)
    m = a.matrix
    mean = expectation(rho, m)
    return max(expectation(rho, m @ m) - mean * mean, 0.0)


def pairwise_variance(p, eigenvalues) -> float:
    """(1/2) sum_jk p_j p_k (lambda_j - lambda_k)^2."""
    p = np.asarray(p, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)
    d = lam[:, None] - lam[None, :]
    return 0.5 * float(p @ (d * d) @ p)


def covariance(rho: DensityMatrix, f, g) -> float:
    """<fg> - <f><g> for two commuting operators."""
    f = as_matrix(getattr(f, "matrix", f))
    g = as_matrix(getattr(g, "matrix", g))
    if f.shape != g.shape or f.shape[0] != rho.dim:
        raise DimensionMismatch("operator and state dimensions differ")
    fg = f @ g
    if np.max(np.abs(fg - g @ f)) >= 1e-10:
        raise NonCommuting("covariance is defined here for commuting operators only")
    # <fg> of commuting Hermitian operators is real
    return float(np.einsum("ij,ji->", rho.matrix, fg).real) - expectation(rho, f) * expectation(rho, g)


def lagrange_basis(a: Observable, j: int) -> np.ndarray:
    """l_j(A): the Lagrange polynomial equal to 1 at lambda_j, 0 at the others.

    Evaluated spectrally as the indicator of ``lambda_j``, which is the
    projector onto the j-th eigenvector.
    """
    if not a.nondegenerate:
        raise DegenerateSpectrum("Lagrange basis needs pairwise distinct eigenvalues")
    if not 0 <= j < a.dim:
        raise IndexError(f"eigen-index {j} out of range for dim {a.dim}")
    indicator = np.zeros(a.dim)
    indicator[j] = 1.0
    return apply_function(a.op, indicator)


def lagrange_coefficients(eigenvalues, j: int) -> np.ndarray:
    """Monomial coefficients (increasing degree) of prod_{m != j} (x - l_m)/(l_j - l_m)."""
    lam = np.asarray(eigenvalues, dtype=float)
    poly = np.array([1.0])
    for m, lm in enumerate(lam):
        if m != j:
            poly = np.polynomial.polynomial.polymul(poly, [-lm, 1.0]) / (lam[j] - lm)
    return poly


def lagrange_basis_polynomial(a: Observable, j: int) -> np.ndarray:
    """l_j(A) through its monomial expansion; cross-check for :func:`lagrange_basis`."""
    if not a.nondegenerate:
        raise DegenerateSpectrum("Lagrange basis needs pairwise distinct eigenvalues")
    return apply_polynomial(a.op, lagrange_coefficients(a.eigenvalues, j))


def overlap_bound(a: Observable, b: Observable) -> float:
    """c_ab = max_jk |<a_j|b_k>|."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim} vs {b.dim}")
    return float(np.max(np.abs(a.eigenvectors.conj().T @ b.eigenvectors)))


def spin_matrices(j2: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(J_x, J_y, J_z) for spin j = j2/2 in the |j, m> basis, m descending."""
    if int(j2) < 1:
        raise ValueError(f"twice-spin must be >= 1, got {j2}")
    j = j2 / 2
    m = j - np.arange(j2 + 1)
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1)) sits just above the diagonal
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    jm = jp.conj().T
    return (jp + jm) / 2, (jp - jm) / 2j, np.diag(m).astype(complex)


def spin_operator(j2: int, axis) -> Observable:
    """n.J for twice-spin ``j2`` (hbar = 1) along the unit vector ``axis``."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.0) > 1e-12:
        raise InvalidAxis(f"axis must be a unit 3-vector, got {axis}")
    jx, jy, jz = spin_matrices(j2)
    return Observable.from_matrix(axis[0] * jx + axis[1] * jy + axis[2] * jz)


def pauli_operator(axis) -> Observable:
    """n.sigma along a unit vector; eigenvalues +1 and -1."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.0) > 1e-12:
        raise InvalidAxis(f"axis must be a unit 3-vector, got {axis}")
    return Observable.from_matrix(sum(c * s for c, s in zip(axis, PAULIS)))


def axis_in_xz(theta_deg: float) -> np.ndarray:
    """Unit vector in the x-z plane at ``theta_deg`` from +z towards +x."""
    t = np.deg2rad(theta_deg)
    return np.array([np.sin(t), 0.0, np.cos(t)])
