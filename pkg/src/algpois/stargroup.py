"""Local group structure on group-valued sections M -> G.

The star product composes a section with itself shifted along the action:
    left action:   (g * h)(s) = g(h(s) . s) h(s)
    right action:  (g * h)(s) = g(s) h(g(s) . s)
It is associative with the constant-identity section as unit, and inverses
exist near the unit (computed here per evaluation point, honoring the fact
that a global smooth inverse map need not exist).  Differentiating the
star-conjugation twice recovers the negative of the action-dependent section
bracket; `bracket_from_conjugation` performs that numerically.
"""

from dataclasses import dataclass

import numpy as np

from . import duals as dm
from . import liealg as la
from .algebroid import Section, second_bracket
from .errors import NotInvertible, OutOfDomain

DEFAULT_SEED = 20240918
NEIGHBORHOOD_DEFAULT = 0.2


@dataclass(frozen=True)
class GroupSection:
    """Map M -> G given by a matrix-valued function, tied to an action."""

    action: object
    fn: callable                 # z -> (n, n) matrix, dual-capable
    label: str = ""

    def __call__(self, z):
        return self.fn(list(z) if not np.isscalar(z) else [z])

    def constraint_residual(self, points):
        worst = 0.0
        for s in points:
            worst = max(worst, la.group_constraint_residual(
                self.action.alg, dm.real_mat(self(s))))
        return worst

    def c1_distance_to_unit(self, points):
        """sup over points of max(|g(s) - e|, |dg/ds|), entrywise."""
        n = self.action.alg.n
        worst = 0.0
        for s in points:
            m = dm.real_mat(self(s))
            worst = max(worst, float(np.max(np.abs(m - np.eye(n)))))
            for l in range(self.action.p):
                v = [0.0] * self.action.p
                v[l] = 1.0
                _, dmat = dm.directional(lambda w: self.fn(w), list(np.atleast_1d(s)), v)
                worst = max(worst, float(np.max(np.abs(dm.real_mat(dmat)))))
        return worst


def unit_section(action):
    n = action.alg.n
    return GroupSection(action, lambda z: np.eye(n), "e")


def exp_section(x, action, eps=1.0):
    """Group section s -> exp(eps x(s)) from an algebra-valued section."""

    def fn(z):
        return la.matrix_exp(x.alg.element(x.coeffs(z)), eps)

    return GroupSection(action, fn, f"exp({eps}*{x.label})")


def star_product(g, h):
    """(g * h)(s), parity taken from the shared action."""
    action = g.action

    def fn(z):
        if action.parity == "left":
            hz = h.fn(z)
            shifted = action.act(dm.real_mat(hz) if _is_real(hz) else hz, z)
            return np.dot(g.fn(shifted), hz)
        gz = g.fn(z)
        shifted = action.act(dm.real_mat(gz) if _is_real(gz) else gz, z)
        return np.dot(gz, h.fn(shifted))

    return GroupSection(action, fn, f"({g.label}*{h.label})")


def _is_real(m):
    return not (isinstance(m, np.ndarray) and m.dtype == object)


def star_inverse_at(g, s, max_iter=50, tol=1e-12):
    """Value of g^{*-1} at the point s: solve g(w) . w = s, return g(w)^-1."""
    action = g.action
    s = np.asarray(s, float)

    def F(w):
        out = action.act(g.fn(w), w)
        return [out[i] - s[i] for i in range(action.p)]

    w = list(s)
    val, J = dm.jacobian(F, w)
    for _ in range(max_iter):
        if np.linalg.norm(val) < tol:
            return np.linalg.inv(dm.real_mat(g.fn(w)))
        try:
            step = np.linalg.solve(J, val)
        except np.linalg.LinAlgError:
            raise NotInvertible("singular Jacobian in star-inverse solve") from None
        w = list(np.asarray(w) - step)
        val, J = dm.jacobian(F, w)
    raise NotInvertible(f"star-inverse iteration did not converge at s={s}")


def star_inverse(g, neighborhood=NEIGHBORHOOD_DEFAULT, check_points=None):
    """The star-inverse section, solved per evaluation point.

    g must lie in a C^1-neighborhood of the unit section; the sup-distance is
    measured on `check_points` (defaults to a small sample) and compared to
    `neighborhood`.
    """
    action = g.action
    if check_points is None:
        check_points = action.sample(np.random.default_rng(DEFAULT_SEED), 5)
    dist = g.c1_distance_to_unit(check_points)
    if dist > neighborhood:
        raise NotInvertible(
            f"section is C1-far from the unit ({dist:.3g} > {neighborhood}); "
            "the local inverse is not certified there")

    return GroupSection(action, lambda z: star_inverse_at(g, dm.real_vec(z)),
                        f"{g.label}^*-1")


def star_conjugation(g, h):
    """g * h * g^{*-1}."""
    return star_product(star_product(g, h), star_inverse(g))


def unit_law_residual(g, points):
    e = unit_section(g.action)
    worst = 0.0
    for s in points:
        a = dm.real_mat(star_product(e, g)(s))
        b = dm.real_mat(star_product(g, e)(s))
        c = dm.real_mat(g(s))
        worst = max(worst, float(np.max(np.abs(a - c))), float(np.max(np.abs(b - c))))
    return worst


def associativity_residual(g, h, f, points):
    worst = 0.0
    lhs = star_product(star_product(g, h), f)
    rhs = star_product(g, star_product(h, f))
    for s in points:
        worst = max(worst, float(np.max(np.abs(
            dm.real_mat(lhs(s)) - dm.real_mat(rhs(s))))))
    return worst


def action_property_residual(g, h, points):
    """Residual of sigma(g * h, s) = sigma(g, sigma(h, s)) (left) or the
    parity-swapped identity for right actions."""
    action = g.action
    worst = 0.0
    gh = star_product(g, h)
    for s in points:
        s = list(np.atleast_1d(np.asarray(s, float)))
        one = dm.real_vec(action.act(dm.real_mat(gh(s)), s))
        if action.parity == "left":
            mid = dm.real_vec(action.act(dm.real_mat(h(s)), s))
            two = dm.real_vec(action.act(dm.real_mat(g(mid)), list(mid)))
        else:
            mid = dm.real_vec(action.act(dm.real_mat(g(s)), s))
            two = dm.real_vec(action.act(dm.real_mat(h(mid)), list(mid)))
        worst = max(worst, float(np.max(np.abs(one - two))))
    return worst


def inverse_residual(g, points):
    """|| (g * g^{*-1})(s) - e || over the points."""
    ginv = star_inverse(g)
    prod = star_product(g, ginv)
    n = g.action.alg.n
    worst = 0.0
    for s in points:
        worst = max(worst, float(np.max(np.abs(dm.real_mat(prod(s)) - np.eye(n)))))
    return worst


def conjugation_stencil(action, x, y, eps, s):
    """Mixed second difference of the star-conjugation at the point s."""
    s = list(np.atleast_1d(np.asarray(s, float)))

    def corner(e, d):
        ge = exp_section(x, action, e)
        hd = exp_section(y, action, d)
        conj = star_product(star_product(ge, hd),
                            GroupSection(action,
                                         lambda z: star_inverse_at(ge, dm.real_vec(z)),
                                         "inv"))
        return dm.real_mat(conj(s))

    return (corner(eps, eps) - corner(eps, -eps)
            - corner(-eps, eps) + corner(-eps, -eps)) / (4.0 * eps * eps)


def bracket_from_conjugation(action, x, y, eps=1e-3, richardson=True):
    """Section approximating d2/de dd of exp(e x) * exp(d y) * exp(e x)^{*-1}.

    Contracted to equal -[[x, y]] with O(eps^2) error (one Richardson level
    applied by default).  Evaluates the difference stencil per point; real
    arguments only.
    """
    if not (1e-4 <= eps <= 1e-2):
        raise OutOfDomain("eps outside the supported stencil range [1e-4, 1e-2]")

    def coeffs(z):
        b1 = conjugation_stencil(action, x, y, eps, z)
        if richardson:
            b2 = conjugation_stencil(action, x, y, eps / 2.0, z)
            b1 = (4.0 * b2 - b1) / 3.0
        flat = b1.ravel()
        return list(x.alg._pinv @ flat)

    return Section(x.alg, coeffs, f"conj-bracket({x.label},{y.label})")


def conjugation_bracket_residual(action, x, y, eps, points):
    """Max deviation of the conjugation bracket from -[[x, y]] at the points."""
    approx = bracket_from_conjugation(action, x, y, eps)
    exact = second_bracket(action, x, y)
    worst = 0.0
    for s in points:
        a = np.asarray(approx.coeffs(list(np.atleast_1d(s))), float)
        b = dm.real_vec(exact.coeffs(list(np.atleast_1d(s))))
        worst = max(worst, float(np.max(np.abs(a + b))))
    return worst
