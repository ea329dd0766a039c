"""Block Poisson structures on M x g*: assembly, certification, canonical
group action, compatibility pencils, semidirect-product cross-check.

Run:  python3 demos/04_poisson_structures.py
"""

import numpy as np

from algpois import liealg as la
from algpois import poisson as ps
from algpois.actions import catalog

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(3)

# Assembling the projective structure: the first row carries the
# infinitesimals, the lower-right block the Lie-Poisson bivector.
P = ps.assemble(catalog("sl2-projective"))
w = [0.7, 1.0, -0.5, 2.0]
print("sl2-projective structure at (u, xi) =", w)
print(P.matrix(w))

# Translations give the canonical Darboux block.
print("\ntranslation-2 structure (Darboux):")
print(ps.assemble(catalog("translation-2")).matrix([0.1, 0.2, 0.3, 0.4]))

# Certification: the Jacobi cyclic sum over AD derivatives of the bivector.
for name in ("sl2-projective", "so3-mobius", "sl2-frame"):
    res = ps.jacobi_residual(ps.assemble(catalog(name)), rng, 50)
    print(f"jacobi residual {name:15s}: {res:.2e}")
bad = ps.assemble(ps.corrupted_action(catalog("sl2-projective")))
print(f"jacobi residual corrupted control : {ps.jacobi_residual(bad, rng, 50):.2e}")

# The joint action (z, xi) -> (g^-1.z, xi Am(g)) preserves the bracket.
a = catalog("sl2-projective")
g = a.random_group(rng)
print(f"\ncanonical action residual: "
      f"{ps.canonical_action_residual(P, a, g, w):.2e}")

# Two actions of one group are compatible exactly when their difference
# fields commute; the affine pair differs by a translation.
res = ps.compatibility_residual(catalog("aff2-a"), catalog("aff2-b"), rng, 30)
print(f"\naff2 pair compatibility residual: {res:.2e}")
P1, P2 = ps.assemble(catalog("aff2-a")), ps.assemble(catalog("aff2-b"))
for k in (0.0, 0.5, 1.0, 2.0):
    print(f"  pencil k={k}: jacobi {ps.jacobi_residual(ps.pencil(P1, P2, k), rng, 25):.2e}")
bad_pair = ps.compatibility_residual(catalog("sl2-projective"),
                                     catalog("sl2-trivial"), rng, 30)
print(f"incompatible control (projective vs trivial): {bad_pair:.2e}")

# Linear contragredient actions reproduce the semidirect-product Lie-Poisson
# structure entrywise -- two completely independent construction routes.
for alg_name, act_name, n in (("sl2", "sl2-contragredient", 2),
                              ("so3", "so3-contragredient", 3)):
    Pa = ps.semidirect_lie_poisson(la.algebra(alg_name), n)
    Pb = ps.assemble(catalog(act_name))
    dev = max(np.max(np.abs(Pa.matrix(v) - Pb.matrix(v)))
              for v in rng.uniform(-2, 2, (50, Pa.dim)))
    print(f"\nsemidirect({alg_name},{n}) vs contragredient action: {dev:.2e}")
