"""Spin-1: the 7/16 variance bound and collision entropy from variances.

Run: python3 demos/03_spin_one.py
"""

# %%
import math

import numpy as np

from urequiv.entropy import collision_entropy, spin1_collision_entropy_from_variances
from urequiv.explorer import minimize_over_pure, spin1_inequality_region_minimum, variance_sum_objective
from urequiv.observables import born_probabilities, spin_operator
from urequiv.reconstruction import spin1_moments
from urequiv.relations import puchala_constant
from urequiv.states import random_mixed

jx, jz = spin_operator(2, [1, 0, 0]), spin_operator(2, [0, 0, 1])

# %% The collision-entropy bound for x and z and its variance form
c = puchala_constant(1 / math.sqrt(2))
print("4 exp(-c) =", 4 * math.exp(-c), " 25/8 - 1/sqrt(2) =", 25 / 8 - 1 / math.sqrt(2))

# %% H_2 from V(J) and V(J^2) against the Born rule
rho = random_mixed(3, seed=11)
m = spin1_moments(rho, jz)
print("H2 from variances", spin1_collision_entropy_from_variances(m["vJ"], m["vJ2"]))
print("H2 direct        ", collision_entropy(born_probabilities(rho, jz)))

# %% Minimum of V(Jx) + V(Jz) over pure states
res = minimize_over_pure(variance_sum_objective(jx, jz), 3, restarts=64, seed=7)
print("min V(Jx)+V(Jz) over states:", res.best_value, " 7/16 =", 7 / 16)
psi = res.best_state.amplitudes
print("minimiser |amplitudes|^2:", np.round(np.abs(psi) ** 2, 6))

# %% The same minimum allowed by the variance-form inequality alone
# The inequality treats the two distributions as independent, so it is a
# relaxation: its minimum sits below 7/16.
diag = spin1_inequality_region_minimum()
print("min allowed by the inequality alone:", diag.best_value)
