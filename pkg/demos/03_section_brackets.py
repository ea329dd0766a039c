"""The two Lie brackets on sections M -> g and the algebroid axioms.

The pointwise bracket ignores the action; the second bracket differentiates
along the anchor fields.  Anchor homomorphism and the Jacobi identity are
certified numerically -- together they pin every sign in the construction.

Run:  python3 demos/03_section_brackets.py
"""

import numpy as np

from algpois import algebroid as ab
from algpois import liealg as la
from algpois.actions import catalog

np.set_printoptions(precision=5, suppress=True)

sl2 = la.algebra("sl2")
proj = catalog("sl2-projective")
rng = np.random.default_rng(2)

x = ab.random_poly_section(sl2, 1, rng, degree=2)
y = ab.random_poly_section(sl2, 1, rng, degree=2)
z = ab.random_poly_section(sl2, 1, rng, degree=2)

u = 0.6
print("x(u), y(u) coefficients at u = 0.6:")
print(" ", np.asarray(x([u])), "\n ", np.asarray(y([u])))

print("\npointwise bracket [x, y](u):", np.asarray(ab.pointwise_bracket(x, y)([u])))
rho = ab.anchor(proj, x)
print("anchor field rho(x)(u):", rho([u])[0])
print("second bracket [[x, y]](u):", np.asarray(
    [float(v) for v in ab.second_bracket(proj, x, y)([u])]))

# the trivial action collapses the second bracket to minus the pointwise one
triv = catalog("sl2-trivial")
sb = ab.second_bracket(triv, x, y)([u])
pw = ab.pointwise_bracket(x, y)([u])
print("\ntrivial action: [[x,y]] + [x,y] =",
      np.asarray([float(a + b) for a, b in zip(sb, pw)]))

# the translation algebra on the line gives the classic x y_t - y x_t
tr = catalog("translation-1")
xt = ab.poly_section(tr.alg, [[0.3], [1.0], [0.5]])
yt = ab.poly_section(tr.alg, [[-0.2], [2.0]])
t = 0.7
val = float(ab.second_bracket(tr, xt, yt)([t])[0])
xv, yv = 0.3 + t + 0.5 * t * t, -0.2 + 2 * t
print(f"\ntranslation bracket at t=0.7: {val:.6f}  "
      f"(x y_t - y x_t = {xv * 2.0 - yv * (1 + t):.6f})")

# axiom certification
print("\nalgebroid axiom residuals on sl2-projective:")
print(f"  Leibniz (f = z1)        : "
      f"{ab.leibniz_residual(proj, x, y, lambda w: w[0], rng, 25):.2e}")
print(f"  anchor homomorphism     : "
      f"{ab.anchor_homomorphism_residual(proj, x, y, rng, 25):.2e}")
print(f"  section Jacobi          : "
      f"{ab.jacobi_residual_sections(proj, x, y, z, rng, 10):.2e}")
print(f"  antisymmetry            : "
      f"{ab.antisymmetry_residual(proj, x, y, rng, 10):.2e}")
