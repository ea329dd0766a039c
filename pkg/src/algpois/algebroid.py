"""Sections M -> g, the pointwise and action-dependent brackets, the anchor
map, and numerical certification of the algebroid axioms.

The action-dependent bracket implemented here is
    [[x, y]] = L_rho(x) y - L_rho(y) x - [x, y]        (left actions)
    [[x, y]] = -L_rho(x) y + L_rho(y) x - [x, y]       (right actions)
with [x, y] the pointwise matrix bracket in coefficients.  The anchor
homomorphism and Jacobi residuals below jointly pin every sign; a failure is
a build-stopping error, not a silent flip.
"""

from dataclasses import dataclass

import numpy as np

from . import duals as dm
from .actions import infinitesimal_matrix
from .errors import AlgebraMismatch

DEFAULT_SEED = 20240915


@dataclass(frozen=True)
class Section:
    """Map M -> g by coefficient functions in the fixed basis."""

    alg: object
    coeffs: callable            # z -> sequence of r components (dual-capable)
    label: str = ""

    def __call__(self, z):
        return list(self.coeffs(list(z)))

    def value_matrix(self, z):
        """Matrix value sum_k x^k(z) v_k."""
        return self.alg.element(self(z))


def constant_section(alg, coeffs, label=""):
    co = [float(c) for c in coeffs]
    return Section(alg, lambda z: list(co), label or f"const{co}")


def poly_section(alg, coef, label=""):
    """Polynomial section on a 1-d patch: coef has shape (deg+1, r) and
    component k is sum_d coef[d, k] * z^d."""
    coef = np.asarray(coef, dtype=float)

    def fn(z):
        u = z[0]
        out = []
        for k in range(coef.shape[1]):
            acc = coef[0, k]
            pw = 1.0
            for d in range(1, coef.shape[0]):
                pw = pw * u
                acc = acc + coef[d, k] * pw
            out.append(acc)
        return out

    return Section(alg, fn, label)


def random_poly_section(alg, p, rng, degree=2, scale=1.0):
    """Random polynomial section on an R^p patch (degree <= 2 monomials for
    p > 1; full 1-d polynomials for p = 1)."""
    if p == 1:
        coef = rng.uniform(-scale, scale, (degree + 1, alg.r))
        return poly_section(alg, coef)
    lin = rng.uniform(-scale, scale, (alg.r, p))
    quad = rng.uniform(-scale, scale, (alg.r, p, p)) if degree >= 2 else None
    con = rng.uniform(-scale, scale, alg.r)

    def fn(z):
        out = []
        for k in range(alg.r):
            acc = con[k] + sum(lin[k, i] * z[i] for i in range(p))
            if quad is not None:
                for i in range(p):
                    for j in range(p):
                        acc = acc + quad[k, i, j] * (z[i] * z[j])
            out.append(acc)
        return out

    return Section(alg, fn)


def _check_same_algebra(x, y):
    if x.alg.name != y.alg.name or x.alg.basis.shape != y.alg.basis.shape:
        raise AlgebraMismatch(f"{x.alg.name} vs {y.alg.name}")


def pointwise_bracket(x, y):
    """[x, y](z) = [x(z), y(z)] via the structure constants."""
    _check_same_algebra(x, y)
    alg = x.alg
    return Section(alg, lambda z: list(alg.bracket_coeffs(x(z), y(z))),
                   f"[{x.label},{y.label}]")


def anchor(action, x):
    """rho(x)(z) = Phi(z) x(z) as a p-vector field, dual-capable."""

    def rho(z):
        phi = infinitesimal_matrix(action, z)
        xv = x(z)
        return [sum(phi[l, k] * xv[k] for k in range(action.r))
                for l in range(action.p)]

    return rho


def lie_derivative_section(action, x, y):
    """Component-wise derivative of y's coefficients along rho(x)."""
    rho = anchor(action, x)

    def coeffs(z):
        v = rho(z)
        _, dv = dm.directional(lambda w: y.coeffs(w), list(z), v)
        return dv

    return Section(x.alg, coeffs, f"L_rho({x.label}){y.label}")


def second_bracket(action, x, y):
    """The action-dependent bracket on sections; sign per action parity."""
    _check_same_algebra(x, y)
    lxy = lie_derivative_section(action, x, y)
    lyx = lie_derivative_section(action, y, x)
    pw = pointwise_bracket(x, y)
    sign = 1.0 if action.parity == "left" else -1.0

    def coeffs(z):
        a, b, c = lxy.coeffs(z), lyx.coeffs(z), pw.coeffs(z)
        return [sign * (a[k] - b[k]) - c[k] for k in range(x.alg.r)]

    return Section(x.alg, coeffs, f"[[{x.label},{y.label}]]")


def _sup_over_samples(action, fn, rng, n):
    worst = 0.0
    for z in action.sample(rng, n):
        worst = max(worst, fn(list(z)))
    return worst


def leibniz_residual(action, x, y, f, rng=None, n=50):
    """sup_z || [[x, f y]] - f [[x, y]] - (rho(x) f) y ||."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    fy = Section(y.alg, lambda z: [f(z) * c for c in y.coeffs(z)])
    lhs = second_bracket(action, x, fy)
    xy = second_bracket(action, x, y)
    rho = anchor(action, x)

    def res(z):
        _, df = dm.directional(lambda w: f(w), z, rho(z))
        a = lhs.coeffs(z)
        b = xy.coeffs(z)
        yv = y.coeffs(z)
        fv = f(z)
        return max(abs(dm.real(a[k] - fv * b[k] - df * yv[k]))
                   for k in range(x.alg.r))

    return _sup_over_samples(action, res, rng, n)


def vector_field_bracket(X, Y, z):
    """[X, Y](z) for vector fields given as z -> list, via AD."""
    xv = X(z)
    yv = Y(z)
    _, dY = dm.directional(Y, list(z), xv)
    _, dX = dm.directional(X, list(z), yv)
    return [dY[m] - dX[m] for m in range(len(z))]


def anchor_homomorphism_residual(action, x, y, rng=None, n=50):
    """sup_z || rho([[x, y]]) - [rho(x), rho(y)] ||."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    rx, ry = anchor(action, x), anchor(action, y)
    rbr = anchor(action, second_bracket(action, x, y))

    def res(z):
        lhs = rbr(z)
        rhs = vector_field_bracket(rx, ry, z)
        return max(abs(dm.real(lhs[m] - rhs[m])) for m in range(action.p))

    return _sup_over_samples(action, res, rng, n)


def jacobi_residual_sections(action, x, y, z, rng=None, n=20):
    """sup over samples of || [[x,[[y,z]]]] + [[y,[[z,x]]]] + [[z,[[x,y]]]] ||."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    t1 = second_bracket(action, x, second_bracket(action, y, z))
    t2 = second_bracket(action, y, second_bracket(action, z, x))
    t3 = second_bracket(action, z, second_bracket(action, x, y))

    def res(w):
        a, b, c = t1.coeffs(w), t2.coeffs(w), t3.coeffs(w)
        return max(abs(dm.real(a[k] + b[k] + c[k])) for k in range(x.alg.r))

    return _sup_over_samples(action, res, rng, n)


def antisymmetry_residual(action, x, y, rng=None, n=20):
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    xy = second_bracket(action, x, y)
    yx = second_bracket(action, y, x)

    def res(z):
        a, b = xy.coeffs(z), yx.coeffs(z)
        return max(abs(dm.real(a[k] + b[k])) for k in range(x.alg.r))

    return _sup_over_samples(action, res, rng, n)
