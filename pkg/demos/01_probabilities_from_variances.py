"""Recovering a measurement distribution from second moments.

Run: python3 demos/01_probabilities_from_variances.py
"""

# %% A random spin-1 state and a random component of J
import numpy as np

from urequiv.observables import born_probabilities, spin_operator
from urequiv.reconstruction import (
    build_commutative_set,
    omega_matrix,
    probs_from_covariances,
    probs_from_variances,
    spin1_probs_from_moments,
)
from urequiv.states import random_mixed

rho = random_mixed(3, seed=2)
axis = np.array([1.0, -2.0, 2.0]) / 3
j = spin_operator(2, axis)
print("Born rule        ", np.asarray(born_probabilities(rho, j)))

# %% Route 1: variances of a commuting family
# Each variance is linear in the products p_j p_k, so a linear solve and a
# factorisation give p back.
cs = build_commutative_set(j)
print("coefficient matrix G:\n", cs.G)
print("from variances   ", np.asarray(probs_from_variances(rho, j)))

# %% Route 2: covariances of the Lagrange projectors
# -cov(l_i, l_j) = p_i p_j, and p_i^2 = Omega_ij Omega_ik / Omega_jk.
print("Omega:\n", omega_matrix(rho, j))
print("from covariances ", np.asarray(probs_from_covariances(rho, j)))

# %% Route 3: the spin-1 closed forms in V(J), V(J^2) and <J^3>
print("closed forms     ", np.asarray(spin1_probs_from_moments(rho, j)))
