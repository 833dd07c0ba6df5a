"""Quantum states: construction, seeded sampling, purity and Bloch helpers.

Random states come from numpy's Philox4x64 counter-based generator keyed by
the caller's seed, so a seed fully determines the sample on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidBloch, NotHermitian, NotNormalized, UncertaintyError
from .linalg import as_matrix, is_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def rng_from_seed(seed: int) -> np.random.Generator:
    """Philox-backed generator for a non-negative 64-bit seed."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if abs(np.vdot(v, v).real - 1.0) > 1e-12:
            raise NotNormalized(f"state vector has squared norm {np.vdot(v, v).real!r}")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def normalized(cls, v) -> "StateVector":
        v = np.asarray(v, dtype=complex).reshape(-1)
        return cls(v / np.linalg.norm(v))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive semidefinite, unit-trace Hermitian matrix.

    Validation happens on construction: Hermitian to 1e-12, trace one to
    1e-10 and smallest eigenvalue no lower than -1e-10.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(as_matrix(self.matrix), copy=True)
        if not is_hermitian(m):
            raise NotHermitian("density matrix is not Hermitian within 1e-12")
        m = (m + m.conj().T) / 2
        if abs(np.trace(m).real - 1.0) > 1e-10:
            raise UncertaintyError(f"density matrix has trace {np.trace(m).real!r}")
        # smallest eigenvalue >= -1e-10  <=>  rho + 1e-10 I admits a Cholesky factor
        try:
            np.linalg.cholesky(m + 1e-10 * np.eye(m.shape[0]))
        except np.linalg.LinAlgError:
            raise UncertaintyError("density matrix is not positive semidefinite") from None
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def purity(self) -> float:
        # Tr[rho^2] for Hermitian rho is the squared Frobenius norm
        return float(np.sum(np.abs(self.matrix) ** 2))


def pure_state(v) -> DensityMatrix:
    """Projector |psi><psi| onto a normalized state vector."""
    if not isinstance(v, StateVector):
        v = StateVector(v)
    a = v.amplitudes
    return DensityMatrix(np.outer(a, a.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def _check_dim(dim):
    if int(dim) < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")


def random_pure(dim: int, seed: int) -> StateVector:
    """Haar-random pure state: 2*dim standard normals form the amplitudes."""
    _check_dim(dim)
    x = rng_from_seed(seed).standard_normal(2 * dim)
    return StateVector.normalized(x[:dim] + 1j * x[dim:])


def random_mixed(dim: int, seed: int) -> DensityMatrix:
    """Hilbert-Schmidt random state GG^dag / Tr[GG^dag] with Ginibre G."""
    _check_dim(dim)
    x = rng_from_seed(seed).standard_normal(2 * dim * dim)
    g = (x[: dim * dim] + 1j * x[dim * dim:]).reshape(dim, dim)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_batch(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random state vectors as the rows of an (n, dim) array."""
    _check_dim(dim)
    x = rng.standard_normal((n, 2 * dim))
    v = x[:, :dim] + 1j * x[:, dim:]
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_mixed_batch(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Hilbert-Schmidt random density matrices, shape (n, dim, dim)."""
    _check_dim(dim)
    x = rng.standard_normal((n, 2, dim, dim))
    g = x[:, 0] + 1j * x[:, 1]
    m = g @ np.conj(np.swapaxes(g, 1, 2))
    tr = np.trace(m, axis1=1, axis2=2).real
    return m / tr[:, None, None]


def qubit_from_bloch(n, r: float) -> DensityMatrix:
    """(I + r n.sigma) / 2 for a unit vector n and 0 <= r <= 1."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise InvalidBloch(f"Bloch direction must be a unit 3-vector, got {n}")
    if not 0.0 <= r <= 1.0:
        raise InvalidBloch(f"Bloch radius must lie in [0, 1], got {r}")
    return DensityMatrix((np.eye(2) + r * sum(c * s for c, s in zip(n, PAULIS))) / 2)


def bloch_vector(rho: DensityMatrix) -> np.ndarray:
    """Real 3-vector r with rho = (I + r.sigma)/2."""
    if rho.dim != 2:
        raise InvalidBloch("Bloch vectors exist for qubits only")
    return np.array([np.trace(rho.matrix @ s).real for s in PAULIS])


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)
