"""Small dense complex Hermitian linear algebra.

The eigensolver is a cyclic Jacobi iteration written for the matrix sizes
used throughout the package (N <= 8).  It is self-contained on purpose:
eigenvector phases and eigenvalue ordering are fixed by convention so that
probabilities and basis overlaps are reproducible bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NonRealExpectation, NotHermitian

HERMITIAN_ATOL = 1e-12
EXPECTATION_IMAG_ATOL = 1e-10
MAX_SWEEPS = 100
OFFDIAG_RTOL = 1e-14
DEGENERACY_RTOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a square complex128 array, validating its shape."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def is_hermitian(m, atol: float = HERMITIAN_ATOL) -> bool:
    a = as_matrix(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= atol)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix together with its spectral decomposition.

    ``eigenvalues`` are real and sorted in descending order; column ``j`` of
    ``eigenvectors`` is the eigenvector of ``eigenvalues[j]``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for name in ("matrix", "eigenvalues", "eigenvectors"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def projector(self, j: int) -> np.ndarray:
        v = self.eigenvectors[:, j]
        return np.outer(v, v.conj())

    def degenerate_pairs(self) -> list[tuple[int, int]]:
        """Index pairs whose eigenvalues coincide within the degeneracy threshold."""
        lam = self.eigenvalues
        out = []
        for i in range(len(lam)):
            for j in range(i + 1, len(lam)):
                if are_degenerate(lam[i], lam[j]):
                    out.append((i, j))
        return out


def are_degenerate(x: float, y: float) -> bool:
    return abs(x - y) < DEGENERACY_RTOL * max(1.0, abs(x), abs(y))


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps on a copy of ``a``; returns (eigenvalues, vectors).

    Works on nested lists of Python complex numbers: at N <= 8 that beats
    numpy's per-call overhead by a wide margin.
    """
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), np.eye(n, dtype=complex)
    target = OFFDIAG_RTOL * scale
    skip = 1e-3 * target
    A = a.tolist()
    V = np.eye(n, dtype=complex).tolist()

    for _ in range(MAX_SWEEPS):
        off = math.sqrt(sum(abs(A[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off < target:
            vals = np.array([A[i][i].real for i in range(n)])
            return vals, np.array(V, dtype=complex)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                mod = abs(apq)
                if mod < skip:
                    A[p][q] = A[q][p] = 0j
                    continue
                # Phase e^{-i phi} on column q makes the pivot real, then a
                # real Givens rotation annihilates it:
                # U = [[c, s], [-s conj(ph), c conj(ph)]],  A <- U^dag A U,  V <- V U
                ph = apq / mod
                cph = ph.conjugate()
                theta = (A[q][q].real - A[p][p].real) / (2.0 * mod)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sc = s * cph
                cc = c * cph
                for M in (A, V):
                    for row in M:
                        xp = row[p]
                        xq = row[q]
                        row[p] = c * xp - sc * xq
                        row[q] = s * xp + cc * xq
                rp = A[p]
                rq = A[q]
                sp = s * ph
                cp = c * ph
                for k in range(n):
                    xp = rp[k]
                    xq = rq[k]
                    rp[k] = c * xp - sp * xq
                    rq[k] = s * xp + cp * xq
                A[p][q] = A[q][p] = 0j
                A[p][p] = complex(A[p][p].real, 0.0)
                A[q][q] = complex(A[q][q].real, 0.0)
    raise NoConvergence(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        mags = np.abs(col)
        # first entry within rounding of the maximum, so equal-modulus
        # entries resolve the same way every run
        k = int(np.argmax(mags >= mags.max() - 1e-12))
        out[:, j] = col * (col[k].conjugate() / mags[k])
        out[k, j] = mags[k]
    return out


def eigen_decompose(m) -> HermitianOperator:
    """Spectral decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Raises ``NotHermitian`` when ``m`` differs from its adjoint by more than
    1e-12 in any entry, and ``NoConvergence`` after 100 sweeps.
    """
    a = as_matrix(m)
    if not is_hermitian(a):
        raise NotHermitian("matrix is not Hermitian within 1e-12")
    a = (a + a.conj().T) / 2
    vals, vecs = _jacobi(a)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = _fix_phases(vecs[:, order])
    return HermitianOperator(matrix=a, eigenvalues=vals, eigenvectors=vecs)


def expectation(rho, m) -> float:
    """Re Tr[rho m]; the imaginary part must vanish to 1e-10."""
    r = as_matrix(getattr(rho, "matrix", rho))
    a = as_matrix(getattr(m, "matrix", m))
    if r.shape != a.shape:
        raise DimensionMismatch(f"state is {r.shape}, operator is {a.shape}")
    val = np.einsum("ij,ji->", r, a)
    if abs(val.imag) > EXPECTATION_IMAG_ATOL:
        raise NonRealExpectation(f"Tr[rho m] has imaginary part {val.imag:.3e}")
    return float(val.real)


def commutator_half_i(a, b) -> np.ndarray:
    """C = (AB - BA) / 2i, so that [A, B] = 2iC."""
    a = as_matrix(getattr(a, "matrix", a))
    b = as_matrix(getattr(b, "matrix", b))
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return (a @ b - b @ a) / 2j


def apply_function(op: HermitianOperator, values) -> np.ndarray:
    """Sum_j values[j] |j><j| in the eigenbasis of ``op``."""
    u = op.eigenvectors
    return (u * np.asarray(values)) @ u.conj().T


def apply_polynomial(op: HermitianOperator, coeffs) -> np.ndarray:
    """Evaluate sum_k coeffs[k] op^k through the spectral decomposition.

    ``coeffs`` is in increasing-degree order, as in
    :func:`numpy.polynomial.polynomial.polyval`.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise ValueError("coeffs must be a non-empty 1-d sequence")
    f = np.polynomial.polynomial.polyval(op.eigenvalues, coeffs)
    return apply_function(op, f)
