"""Lie group actions on coordinate patches: catalog, AD infinitesimals,
equivariance certification, jet prolongation.

Every action evaluator is written with generic arithmetic so dual numbers can
flow through it; infinitesimal columns are obtained by differentiating
act(exp(t v_k), z) in t at 0, never hand-entered (the one catalogued exception
is "so3-mobius", which ships only its infinitesimal matrix).
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import duals as dm
from . import liealg as la
from .duals import Dual
from .errors import (
    OutOfDomain, SingularJacobian, UnknownAction, UnsupportedShape,
)

DEN_TOL = 1e-8


@dataclass(frozen=True)
class SmoothMap:
    """A pure function evaluable on (nested) dual numbers."""

    fn: callable
    n_in: int
    n_out: int

    def __call__(self, *args):
        return self.fn(*args)


@dataclass(frozen=True)
class ActionSpec:
    """A smooth left or right action of a matrix group on an R^p patch."""

    name: str
    alg: la.LieAlgebra
    act: callable              # (g_matrix, z_seq) -> list of p components
    p: int
    parity: str = "left"                    # "left" | "right"
    guard: callable = None                  # z (floats) -> bool
    sample_lo: np.ndarray = None
    sample_hi: np.ndarray = None
    phi_override: callable = None           # z -> (p, r) array
    notes: str = ""

    @property
    def r(self):
        return self.alg.r

    @property
    def has_act(self):
        return self.act is not None

    def in_domain(self, z):
        if self.guard is None:
            return True
        return bool(self.guard([dm.real(c) for c in z]))

    def apply(self, g, z):
        """act(g, z) with a domain check on the real part of z."""
        if not self.has_act:
            raise UnsupportedShape(f"{self.name} carries no closed-form action")
        if not self.in_domain(z):
            raise OutOfDomain(f"{self.name}: point outside domain guard")
        return self.act(g, z)

    def sample(self, rng, count=1):
        """Points drawn from the sample box, rejection-sampled on the guard."""
        out = []
        tries = 0
        while len(out) < count:
            z = rng.uniform(self.sample_lo, self.sample_hi)
            tries += 1
            if tries > 1000 * count:
                raise OutOfDomain(f"{self.name}: sampling starved by the guard")
            if self.in_domain(z):
                out.append(z)
        return np.array(out)

    def random_group(self, rng, scale=0.5):
        return la.random_group_element(self.alg, rng, scale)


class Infinitesimals:
    """Matrix of infinitesimals of an action and its z-Jacobian, AD-produced."""

    def __init__(self, action):
        self.action = action

    def phi(self, z):
        return infinitesimal_matrix(self.action, z)

    def dphi(self, z):
        """(p, r, p) tensor d Phi_{lk} / d z_m."""
        p = self.action.p
        out = np.empty((p, self.action.r, p))
        for m in range(p):
            v = [0.0] * p
            v[m] = 1.0
            _, dcol = dm.directional(lambda w: infinitesimal_matrix(self.action, w), list(z), v)
            out[:, :, m] = dm.real_mat(dcol)
        return out


def infinitesimal_matrix(action, z):
    """Phi(z)[l, k] = d/dt|0 (exp(t v_k) . z)^l.

    Differentiates the action itself through the first-order Taylor of the
    exponential (exact for a first-order dual step).  Dual-number entries in z
    propagate, so this can sit inside outer derivatives.
    """
    z = list(z)
    if not action.in_domain(z):
        raise OutOfDomain(f"{action.name}: point outside domain guard")
    if action.phi_override is not None:
        return action.phi_override(z)
    r, p, n = action.r, action.p, action.alg.n
    dual_in = any(isinstance(c, Dual) for c in z)
    cols = []
    for k in range(r):
        tag = dm._fresh_tag()
        t = Dual(0.0, 1.0, tag)
        g = np.empty((n, n), dtype=object)
        vk = action.alg.basis[k]
        for i in range(n):
            for j in range(n):
                g[i, j] = (1.0 if i == j else 0.0) + t * vk[i, j]
        w = action.act(g, z)
        cols.append([c.im if isinstance(c, Dual) and c.tag == tag else 0.0 for c in w])
    if dual_in:
        out = np.empty((p, r), dtype=object)
        for k in range(r):
            for l in range(p):
                out[l, k] = cols[k][l]
        return out
    return np.array(cols, dtype=float).T


def infinitesimal_of(action, z, coeffs):
    """d/dt|0 exp(t sum_k coeffs_k v_k) . z -- linearity oracle."""
    x = action.alg.element(coeffs)
    _, dv = dm.derivative(lambda t: action.act(la.matrix_exp(x, t), list(z)), 0.0)
    return np.array([dm.real(c) for c in dv])


def act_jacobian(action, g, z):
    """d(g.z)/dz as a float (p, p) matrix; outermost use only."""
    _, J = dm.jacobian(lambda w: action.act(g, w), list(z))
    return J


def equivariance_residual(action, g, z):
    """|| (d(g^-1.z)/dz)^-1 Phi(g^-1.z) - Phi(z) Am(g) ||_F.

    Near zero exactly when the infinitesimals transform under the Adjoint
    action the way a genuine group action forces them to.  The identity is
    stated for left actions; right actions are converted first (which flips
    the sign of Phi consistently on both sides).
    """
    if action.parity == "right":
        action = convert_right_to_left(action)
    g = np.asarray(g, dtype=float)
    ginv = np.linalg.inv(g)
    z = [float(c) for c in z]
    w = [dm.real(c) for c in action.apply(ginv, z)]
    if not action.in_domain(w):
        raise OutOfDomain(f"{action.name}: g^-1.z leaves the domain")
    J = act_jacobian(action, ginv, z)
    if abs(np.linalg.det(J)) < 1e-12:
        raise SingularJacobian(f"{action.name}: Jacobian of g^-1 singular at z")
    lhs = np.linalg.solve(J, infinitesimal_matrix(action, w))
    rhs = infinitesimal_matrix(action, z) @ la.adjoint_matrix(action.alg, g)
    return float(np.linalg.norm(lhs - rhs))


def composition_residual(action, g, h, z):
    """|| h.(g.z) - (hg).z || (left) or the right-action counterpart."""
    z = list(z)
    if action.parity == "left":
        one = action.act(h, action.act(g, z))
        two = action.act(np.asarray(h) @ np.asarray(g), z)
    else:
        one = action.act(h, action.act(g, z))
        two = action.act(np.asarray(g) @ np.asarray(h), z)
    return float(np.max(np.abs(dm.real_vec(one) - dm.real_vec(two))))


def identity_residual(action, z):
    e = np.eye(action.alg.n)
    return float(np.max(np.abs(dm.real_vec(action.act(e, list(z))) - np.asarray(z, float))))


def validate_action(action, rng=None, n_samples=3, tol_id=1e-12, tol_comp=1e-9):
    """Identity and composition residual check; raises on failure."""
    if not action.has_act:
        return
    rng = rng or np.random.default_rng(20240501)
    for z in action.sample(rng, n_samples):
        if identity_residual(action, z) > tol_id:
            raise UnknownAction(f"{action.name}: identity law fails")
        g, h = action.random_group(rng), action.random_group(rng)
        if composition_residual(action, g, h, z) > tol_comp:
            raise UnknownAction(f"{action.name}: composition law fails")


def convert_right_to_left(action):
    """g . z := g^-1 ._R z; flips the sign of the infinitesimal matrix."""
    if action.parity != "right":
        raise UnsupportedShape("conversion applies to right actions")

    def act(g, z):
        return action.act(la.mat_inv(g), z)

    return ActionSpec(
        name=action.name + "-as-left", alg=action.alg, act=act, p=action.p,
        parity="left", guard=action.guard,
        sample_lo=action.sample_lo, sample_hi=action.sample_hi)


# ----------------------------------------------------------------------------
# jet prolongation
# ----------------------------------------------------------------------------

def _jet_component(base_act, n):
    if n == 0:
        def f0(g, zj):
            return base_act(g, [zj[0]])[0]
        return f0
    fprev = _jet_component(base_act, n - 1)

    def fn(g, zj):
        # total derivative along the curve: the independent variable is
        # invariant, so D_v(g.v) = 1 and g.u_{(n)} = D_v(g.u_{(n-1)})
        _, dv = dm.directional(lambda w: fprev(g, w), list(zj[:n]), list(zj[1 : n + 1]))
        return dv
    return fn


def prolong(action, order):
    """Action on the jet coordinates (u, u_v, ..., u_{(order v)}).

    The base action must be one-dimensional (u depending on an invariant
    independent variable); order <= 3.
    """
    if action.p != 1 or not action.has_act:
        raise UnsupportedShape("prolongation needs a 1-d base action with a closed form")
    if order > 3:
        raise UnsupportedShape("prolongation supported up to order 3")
    comps = [_jet_component(action.act, n) for n in range(order + 1)]

    def act(g, zj):
        return [f(g, zj) for f in comps]

    guard = action.guard
    jet_guard = (lambda zj: guard([zj[0]])) if guard is not None else None
    lo = np.concatenate([[action.sample_lo[0]], [0.3], np.full(max(order - 1, 0), -2.0)])
    hi = np.concatenate([[action.sample_hi[0]], [2.0], np.full(max(order - 1, 0), 2.0)])
    return ActionSpec(
        name=f"{action.name}-jet{order}", alg=action.alg, act=act, p=order + 1,
        parity=action.parity, guard=jet_guard, sample_lo=lo, sample_hi=hi)


# ----------------------------------------------------------------------------
# catalog
# ----------------------------------------------------------------------------

def _sl2_projective_act(g, z):
    u = z[0]
    den = g[1, 0] * u + g[1, 1]
    if abs(dm.real(den)) < DEN_TOL:
        raise OutOfDomain("projective action: cu + d ~ 0")
    return [(g[0, 0] * u + g[0, 1]) / den]


def _sl2_tangent_act(g, z):
    u, v = z[0], z[1]
    den = g[1, 0] * u + g[1, 1]
    if abs(dm.real(den)) < DEN_TOL:
        raise OutOfDomain("tangent action: cu + d ~ 0")
    return [(g[0, 0] * u + g[0, 1]) / den, v / (den * den)]


def _sl2_prolonged_act(g, z):
    u, uv, uvv = z[0], z[1], z[2]
    cc, d = g[1, 0], g[1, 1]
    den = cc * u + d
    if abs(dm.real(den)) < DEN_TOL:
        raise OutOfDomain("prolonged action: cu + d ~ 0")
    return [
        (g[0, 0] * u + g[0, 1]) / den,
        uv / (den * den),
        (den * uvv - 2.0 * cc * uv * uv) / (den * den * den),
    ]


def _sl2_prolonged3_act(g, z):
    u, uv, uvv, uvvv = z[0], z[1], z[2], z[3]
    cc, d = g[1, 0], g[1, 1]
    den = cc * u + d
    if abs(dm.real(den)) < DEN_TOL:
        raise OutOfDomain("prolonged action: cu + d ~ 0")
    den2 = den * den
    return [
        (g[0, 0] * u + g[0, 1]) / den,
        uv / den2,
        (den * uvv - 2.0 * cc * uv * uv) / (den2 * den),
        (den2 * uvvv - 6.0 * cc * den * uv * uvv + 6.0 * cc * cc * uv * uv * uv)
        / (den2 * den2),
    ]


def _se2_act(g, z):
    x, y = z[0], z[1]
    return [g[0, 0] * x + g[0, 1] * y + g[0, 2],
            g[1, 0] * x + g[1, 1] * y + g[1, 2]]


def _linear_act(g, z):
    n = len(z)
    return [sum(g[i, j] * z[j] for j in range(n)) for i in range(n)]


def _contragredient_act(g, z):
    gi = la.mat_inv(g)
    n = len(z)
    return [sum(gi[j, i] * z[j] for j in range(n)) for i in range(n)]


def _translation_act(g, z):
    r = len(z)
    return [z[j] + g[j, r] for j in range(r)]


def _translation_scalar_act(g, z):
    return [z[0] + dm.log(g[0, 0])]


def _aff2_a_act(g, z):
    return [g[0, 0] * z[0] + g[0, 1] * z[1], z[1]]


def _aff2_b_act(g, z):
    return [g[0, 0] * z[0] + g[0, 1] * z[1] + g[0, 2], z[1] + g[1, 2]]


def _sl2_frame_act(g, z):
    a, b, cc = z[0], z[1], z[2]
    if abs(dm.real(a)) < 1e-10:
        raise OutOfDomain("frame action: sigma_a ~ 0")
    sig = np.empty((2, 2), dtype=object)
    sig[0, 0], sig[0, 1] = a, b
    sig[1, 0], sig[1, 1] = cc, (1.0 + b * cc) / a
    gi = la.mat_inv(g)
    out = np.dot(sig, gi)
    return [out[0, 0], out[0, 1], out[1, 0]]


def _sl2_projective_right_act(g, z):
    u = z[0]
    den = -g[1, 0] * u + g[0, 0]
    if abs(dm.real(den)) < DEN_TOL:
        raise OutOfDomain("right projective action: -cu + a ~ 0")
    return [(g[1, 1] * u - g[0, 1]) / den]


def _so3_mobius_phi(z):
    x, y = z[0], z[1]
    return np.array([
        [y, 0.5 * (1.0 + x * x - y * y), x * y],
        [-x, x * y, 0.5 * (1.0 - x * x + y * y)],
    ])


def _box(*pairs):
    lo = np.array([p[0] for p in pairs], dtype=float)
    hi = np.array([p[1] for p in pairs], dtype=float)
    return lo, hi


def _entries():
    sl2 = la.algebra("sl2")
    so3 = la.algebra("so3")

    def E(name, alg, act, p, lo, hi, parity="left", guard=None, phi=None, notes=""):
        return ActionSpec(name=name, alg=alg, act=act, p=p, parity=parity,
                          guard=guard, sample_lo=lo, sample_hi=hi,
                          phi_override=phi, notes=notes)

    ents = {
        "sl2-projective": E("sl2-projective", sl2, _sl2_projective_act, 1, *_box((-2, 2))),
        "sl2-projective-right": E("sl2-projective-right", sl2, _sl2_projective_right_act,
                                  1, *_box((-2, 2)), parity="right"),
        "sl2-tangent": E("sl2-tangent", sl2, _sl2_tangent_act, 2,
                         *_box((-2, 2), (0.4, 2)),
                         guard=lambda z: abs(z[1]) > 0.01),
        "sl2-prolonged": E("sl2-prolonged", sl2, _sl2_prolonged_act, 3,
                           *_box((-2, 2), (0.3, 2), (-2, 2))),
        "sl2-prolonged-3": E("sl2-prolonged-3", sl2, _sl2_prolonged3_act, 4,
                             *_box((-2, 2), (0.3, 2), (-2, 2), (-2, 2))),
        "sl2-contragredient": E("sl2-contragredient", sl2, _contragredient_act, 2,
                                *_box((-2, 2), (-2, 2))),
        "sl2-frame": E("sl2-frame", sl2, _sl2_frame_act, 3,
                       *_box((0.5, 2), (-1, 1), (-1, 1)),
                       guard=lambda z: abs(z[0]) > 0.1),
        "sl2-trivial": E("sl2-trivial", sl2, lambda g, z: list(z), 1, *_box((-2, 2))),
        "se2-linear": E("se2-linear", la.algebra("se2"), _se2_act, 2,
                        *_box((-2, 2), (-2, 2))),
        "so3-linear": E("so3-linear", so3, _linear_act, 3,
                        *_box((-2, 2), (-2, 2), (-2, 2))),
        "so3-contragredient": E("so3-contragredient", so3, _contragredient_act, 3,
                                *_box((-2, 2), (-2, 2), (-2, 2))),
        "so3-mobius": E("so3-mobius", la.algebra("so3m"), None, 2,
                        *_box((-2, 2), (-2, 2)), phi=_so3_mobius_phi,
                        notes=("no closed-form action is catalogued; the "
                               "infinitesimal matrix is authoritative and "
                               "action-based residuals are skipped")),
        "translation-scalar": E("translation-scalar", la.algebra("scalar"),
                                _translation_scalar_act, 1, *_box((-2, 2))),
        "aff2-a": E("aff2-a", la.algebra("aff2"), _aff2_a_act, 2,
                    *_box((-2, 2), (-2, 2))),
        "aff2-b": E("aff2-b", la.algebra("aff2"), _aff2_b_act, 2,
                    *_box((-2, 2), (-2, 2))),
    }
    return ents


@lru_cache(maxsize=None)
def _catalog_entry(name):
    key = name.strip().lower()
    if key.startswith("translation-") and key != "translation-scalar":
        try:
            r = int(key.split("-", 1)[1])
        except ValueError:
            raise UnknownAction(name) from None
        alg = la.algebra(f"translation({r})")
        lo = np.full(r, -2.0)
        hi = np.full(r, 2.0)
        spec = ActionSpec(name=key, alg=alg, act=_translation_act, p=r,
                          sample_lo=lo, sample_hi=hi)
        validate_action(spec)
        return spec
    ents = _entries()
    if key not in ents:
        raise UnknownAction(name)
    spec = ents[key]
    validate_action(spec)
    return spec


def catalog(name):
    """Validated catalog action by name.

    Names: sl2-projective, sl2-projective-right, sl2-tangent, sl2-prolonged,
    sl2-contragredient, sl2-frame, sl2-trivial, se2-linear, so3-linear,
    so3-contragredient, so3-mobius, translation-<r>, translation-scalar,
    aff2-a, aff2-b.
    """
    return _catalog_entry(name)


def catalog_names():
    names = sorted(_entries().keys())
    return names + ["translation-1", "translation-2", "translation-3"]


def action_to_config(action):
    """Serializable description of a catalog action."""
    return {"group": action.alg.name, "action": action.name,
            "params": {"p": action.p, "parity": action.parity}}


def action_from_config(block):
    # catalog-only in v1; a user-defined expression parser is an extension point
    return catalog(block["action"])
