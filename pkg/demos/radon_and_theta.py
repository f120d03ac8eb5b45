"""Radon transform of Gaussian-class functions, the E_n index sets and the Theta map."""

import numpy as np

from nilpair import radon_spectrum as rs

# line 4: R(D F) = D'(R F) for D = L, M, Delta and a non-invariant test function
F = rs.default_test_function(4)
for fam in ("L", "M", "Delta"):
    D = rs.family_operator(4, fam)
    print(f"line 4, {fam:5s}: sup |R(DF) - D'(RF)| = {rs.check_radon_commutation(4, D, F):.1e}")

# Gaussian against its closed form, via the generic quadrature path
pts = rs.sample_grid(5, 4)
R = rs.radon_transform(lambda x: np.exp(-np.sum(x * x, axis=1)), 2, t_grid=pts)
print("\nGaussian, line 2:", np.max(np.abs(R - np.pi * np.exp(-np.sum(pts ** 2, axis=1)))))

for n in range(6):
    print(f"E_{n} = {rs.e_n_set(n)}")

print("\nTheta(line 4, (1, 0.5, 4)) =", rs.theta_map(4, [1, 0.5, 4]))
xi = [1.0, 2.0, 3.0, 5.0, 4.0]
print("line 8, pattern-corrected:", rs.theta_map(8, xi))
print("line 8, as printed:       ", rs.theta_map(8, xi, "as-printed"))
