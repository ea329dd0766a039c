"""Group actions on coordinate patches and their infinitesimal matrices.

Every infinitesimal column is produced by differentiating the action itself
with dual numbers; nothing is hand-entered (the so3-mobius entry, which ships
only its infinitesimals, is the documented exception).

Run:  python3 demos/02_actions_and_infinitesimals.py
"""

import numpy as np

from algpois import actions as act
from algpois import liealg as la

np.set_printoptions(precision=4, suppress=True)

# The projective action of SL(2): u -> (au + b)/(cu + d).
proj = act.catalog("sl2-projective")
u = 0.7
print("sl2-projective infinitesimal row at u = 0.7:",
      act.infinitesimal_matrix(proj, [u])[0], " (2u, 1, -u^2)")

# The planar Euclidean action: rotation plus translation.
se2 = act.catalog("se2-linear")
print("se2-linear infinitesimals at (1.2, -0.4):")
print(act.infinitesimal_matrix(se2, [1.2, -0.4]))

# The equivariance identity ties the infinitesimals at z and at g^-1.z
# through the Adjoint matrix; it certifies that Phi and Am belong together.
rng = np.random.default_rng(1)
for name in ("sl2-projective", "se2-linear", "so3-linear", "sl2-tangent"):
    a = act.catalog(name)
    g = a.random_group(rng, 0.4)
    z = a.sample(rng)[0]
    print(f"equivariance residual           {name:18s}: "
          f"{act.equivariance_residual(a, g, z):.2e}")

# Prolongation pushes a 1-d action to the jet coordinates (u, u_v, u_vv, ...)
# by repeated total differentiation; the catalog carries the closed forms and
# the recursion reproduces them.
jet = act.prolong(proj, 2)
cat = act.catalog("sl2-prolonged")
g = la.random_group_element(la.algebra("sl2"), rng, 0.4)
z = [0.4, 1.2, -0.3]
import algpois.duals as dm
print("\nprolonged action, AD recursion vs closed form at one point:")
print("  recursion  :", dm.real_vec(jet.act(g, z)))
print("  closed form:", dm.real_vec(cat.act(g, z)))

# Right actions flip the sign of Phi when converted to left actions.
right = act.catalog("sl2-projective-right")
left = act.convert_right_to_left(right)
print("\nright-action Phi:", act.infinitesimal_matrix(right, [u])[0])
print("converted-left Phi:", act.infinitesimal_matrix(left, [u])[0])
