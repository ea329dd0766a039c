"""Matrix Lie algebra toolkit: structure constants, the exponential, Adjoint
matrices, and the Lie-Poisson bivector on the dual.

Run:  python3 demos/01_lie_algebra_basics.py
"""

import numpy as np

from algpois import liealg as la

np.set_printoptions(precision=4, suppress=True)

# The catalog carries the small algebras everything else is built on.
sl2 = la.algebra("sl2")
print("sl(2) basis (v_a, v_b, v_c):")
for v in sl2.basis:
    print(v, "")

# Structure constants encode the bracket table [v_i, v_j] = sum_k c^k_ij v_k.
print("bracket table entries:")
print("  [v_a, v_b] coefficients:", sl2.c[:, 0, 1], " (2 v_b)")
print("  [v_b, v_c] coefficients:", sl2.c[:, 1, 2], " (v_a)")
print("  [v_a, v_c] coefficients:", sl2.c[:, 0, 2], " (-2 v_c)")

# The Lie-Poisson bivector is linear in the dual coordinates.
xi = np.array([1.0, 2.0, 3.0])
print("\nLie-Poisson matrix at xi =", xi)
print(la.lie_poisson_bivector(sl2, xi))

# The exponential maps the algebra to the group; nilpotent directions are exact.
vb = sl2.basis[1]
print("\nexp(v_b) (nilpotent, two-term Taylor is exact):")
print(la.matrix_exp(vb))

# Adjoint matrices represent conjugation in the chosen basis and are
# homomorphic: Am(gh) = Am(g) Am(h).
rng = np.random.default_rng(0)
g = la.random_group_element(sl2, rng)
h = la.random_group_element(sl2, rng)
am_err = np.linalg.norm(la.adjoint_matrix(sl2, g @ h)
                        - la.adjoint_matrix(sl2, g) @ la.adjoint_matrix(sl2, h))
print(f"\nAdjoint homomorphism residual on a random pair: {am_err:.2e}")

# The bivector transforms by congruence under the Adjoint matrix.
am = la.adjoint_matrix(sl2, g)
lhs = la.lie_poisson_bivector(sl2, xi @ am)
rhs = am.T @ la.lie_poisson_bivector(sl2, xi) @ am
print(f"bivector transformation-law residual: {np.max(np.abs(lhs - rhs)):.2e}")

# The coadjoint infinitesimal is the negative of the bivector.
print("\ncoadjoint infinitesimal at e_1:")
print(la.coadjoint_infinitesimal(sl2, [1.0, 0.0, 0.0]))
