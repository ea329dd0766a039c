"""Hamiltonian flows for assembled Poisson structures, conservation
monitoring, invariant-Hamiltonian freezing, and moving-frame reduction.

The integrator is fixed-step classical RK4; group-valued frame states are
projected back onto the group constraint after every step (SL(2): rescale by
det^-1/2, SO(3): polar projection).
"""

from dataclasses import dataclass, field

import numpy as np

from . import duals as dm
from . import liealg as la
from .actions import infinitesimal_matrix
from .errors import (
    DomainExit, NonFinite, NotFreeRegular, NotInvariant, OutOfDomain,
    UnsupportedShape,
)
from .poisson import assemble

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of a Hamiltonian system."""

    times: np.ndarray
    states: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t, s = np.asarray(self.times), np.asarray(self.states)
        if t.ndim != 1 or s.shape[0] != t.shape[0]:
            raise NonFinite("trajectory shape mismatch")
        if np.any(np.diff(t) <= 0):
            raise NonFinite("times must increase strictly")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(s))):
            raise NonFinite("non-finite state in trajectory")

    @property
    def final(self):
        return self.states[-1]


def split_state(P, w):
    return np.asarray(w[: P.p], float), np.asarray(w[P.p :], float)


def grad_h(H, p, w):
    """(grad_z H, grad_xi H) at the concatenated state w."""
    g = dm.gradient(lambda s: H(s[:p], s[p:]), list(w))
    return g[:p], g[p:]


def _rk4(rhs, w0, t_end, dt, post_step=None, guard=None):
    n_steps = max(1, int(round(t_end / dt)))
    h = t_end / n_steps            # snapped so the grid lands on t_end exactly
    w = np.array(w0, dtype=float)
    times = np.empty(n_steps + 1)
    states = np.empty((n_steps + 1, w.size))
    times[0], states[0] = 0.0, w
    for i in range(1, n_steps + 1):
        try:
            k1 = rhs(w)
            k2 = rhs(w + 0.5 * h * k1)
            k3 = rhs(w + 0.5 * h * k2)
            k4 = rhs(w + h * k3)
        except OutOfDomain as exc:
            raise DomainExit(f"stage point left the domain at t~{i * h:.6g}: {exc}") from exc
        w = w + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if post_step is not None:
            w = post_step(w)
        if not np.all(np.isfinite(w)):
            raise NonFinite(f"non-finite state at t={i * h:.6g}")
        if guard is not None and not guard(w):
            raise DomainExit(f"trajectory left the domain at t={i * h:.6g}")
        times[i], states[i] = i * h, w
    return times, states


def flow(P, H, init, t_end, dt):
    """Integrate (z', xi') = Lambda(z, xi) grad H with classical RK4."""
    if dt <= 0:
        raise NonFinite("dt must be positive")
    p = P.p

    def rhs(w):
        g = dm.gradient(lambda s: H(s[:p], s[p:]), list(w))
        return P.matrix(w) @ g

    guard = None
    if P.action is not None and P.action.guard is not None:
        guard = lambda w: P.action.in_domain(w[:p])
    times, states = _rk4(rhs, init, t_end, dt, guard=guard)
    return Trajectory(times, states,
                      {"integrator": "rk4", "dt": dt, "p": p, "r": P.r,
                       "structure": P.label})


def conserved_monitor(traj, F):
    """max_t |F(state_t) - F(state_0)| for F(z, xi)."""
    p = traj.meta["p"]
    vals = np.array([F(w[:p], w[p:]) for w in traj.states])
    return float(np.max(np.abs(vals - vals[0])))


def rk4_order_ratio(P, H, init, t_end, dt):
    """H-drift ratio between steps dt and dt/2; ~16 for a 4th-order method."""
    d1 = conserved_monitor(flow(P, H, init, t_end, dt), H)
    d2 = conserved_monitor(flow(P, H, init, t_end, dt / 2), H)
    return d1 / d2


def invariance_residual(action, H, rng=None, n=30, scale=0.4):
    """max |H(g^-1.z, xi Am(g)) - H(z, xi)| over random (g, z, xi)."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    worst = 0.0
    p = action.p
    for _ in range(n):
        g = action.random_group(rng, scale)
        ginv = np.linalg.inv(g)
        am = la.adjoint_matrix(action.alg, g)
        z = action.sample(rng)[0]
        znew = dm.real_vec(action.apply(ginv, list(z)))
        if not action.in_domain(znew):
            continue
        xi = rng.uniform(-2, 2, action.r)
        worst = max(worst, abs(H(znew, xi @ am) - H(z, xi)))
    return worst


def xi_dot(action, H, w):
    """xi-velocity -Phi^T grad_z H + Lambda(g*) grad_xi H at state w."""
    p = action.p
    gz, gxi = grad_h(H, p, w)
    phi = infinitesimal_matrix(action, list(w[:p]))
    lam = la.lie_poisson_bivector(action.alg, w[p:])
    return -phi.T @ gz + lam @ gxi


def xi_freeze_check(action, H, init=None, t_end=10.0, dt=1e-2, rng=None,
                    inv_tol=1e-8):
    """Pointwise max ||xi'|| along a flow of an invariant Hamiltonian.

    The invariance pre-check runs first; failure raises NotInvariant carrying
    the measured residual (reported, never silently patched).
    """
    res = invariance_residual(action, H, rng)
    if res > inv_tol:
        raise NotInvariant(f"invariance residual {res:.3e} > {inv_tol:.1e}")
    P = assemble(action)
    if init is None:
        init = np.concatenate([action.sample(np.random.default_rng(DEFAULT_SEED))[0],
                               np.ones(action.r)])
    traj = flow(P, H, init, t_end, dt)
    stride = max(1, len(traj.times) // 200)
    worst = 0.0
    for w in traj.states[::stride]:
        worst = max(worst, float(np.max(np.abs(xi_dot(action, H, w)))))
    return worst


# ----------------------------------------------------------------------------
# moving frames
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class MovingFrame:
    """Equivariant map sigma: M -> G with sigma(g.z) = sigma(z) g^-1."""

    action: object
    targets: np.ndarray
    sigma: callable                  # z -> group matrix
    method: str = "newton"

    def normalized_invariants(self, z):
        return dm.real_vec(self.action.act(self.sigma(z), list(z)))

    def equivariance_residual(self, g, z):
        g = np.asarray(g, float)
        gz = dm.real_vec(self.action.act(g, list(z)))
        lhs = self.sigma(gz)
        rhs = self.sigma(z) @ np.linalg.inv(g)
        return float(np.max(np.abs(lhs - rhs)))


def _sl2_prolonged_closed_frame(z):
    u, uv = float(z[0]), float(z[1])
    uvv = float(z[2])
    if uv <= 0:
        raise NotFreeRegular("closed-form frame needs u_v > 0")
    s = np.sqrt(uv)
    a = 1.0 / s
    b = -u / s
    c = uvv / (2.0 * uv * s)
    d = (1.0 + b * c) / a
    return np.array([[a, b], [c, d]])


def newton_frame_solve(action, z, targets, max_iter=100, tol=1e-12):
    """Solve act(exp(sum a_i v_i), z) = targets for the chart coordinates a."""
    r = action.alg.r
    if action.p < r:
        raise UnsupportedShape("need at least dim G normalization equations")
    z = [float(c) for c in z]
    targets = np.asarray(targets, float)

    def F(a):
        g = la.matrix_exp(action.alg.element(a))
        out = action.act(g, z)
        return [out[i] - targets[i] for i in range(r)]

    a = np.zeros(r)
    val, J = dm.jacobian(F, list(a))
    best = np.linalg.norm(val)
    for _ in range(max_iter):
        if best < tol:
            break
        try:
            step = np.linalg.solve(J, val)
        except np.linalg.LinAlgError:
            raise NotFreeRegular("singular Newton system for the frame") from None
        lam = 1.0
        for _ in range(25):
            cand = a - lam * step
            v2 = dm.real_vec(F(list(cand)))
            if np.linalg.norm(v2) < best:
                a, best = cand, np.linalg.norm(v2)
                break
            lam *= 0.5
        else:
            raise NotFreeRegular("Newton iteration stalled for the frame")
        val, J = dm.jacobian(F, list(a))
        best = np.linalg.norm(val)
    else:
        raise NotFreeRegular("Newton iteration did not converge")
    return la.matrix_exp(action.alg.element(a))


def moving_frame(action, targets, method="auto"):
    """Frame from the normalization equations act(sigma(z), z) = targets.

    method: "closed" (catalogued closed form), "newton", or "auto" (closed
    form when available, Newton otherwise).
    """
    targets = np.asarray(targets, float)
    use_closed = (method in ("auto", "closed")
                  and action.name == "sl2-prolonged"
                  and np.allclose(targets, [0.0, 1.0, 0.0]))
    if method == "closed" and not use_closed:
        raise UnsupportedShape("no closed-form frame catalogued for this action")
    if use_closed:
        return MovingFrame(action, targets, _sl2_prolonged_closed_frame, "closed")
    return MovingFrame(action, targets,
                       lambda z: newton_frame_solve(action, z, targets),
                       "newton")


def renormalize_group(alg, m):
    """Project a near-group matrix back onto the group constraint."""
    name = alg.name
    if name == "sl2":
        det = np.linalg.det(m)
        return m / np.sqrt(det)
    if name in ("so3", "so3m"):
        u, _, vt = np.linalg.svd(m)
        return u @ vt
    return m


def frame_flow(action, H, targets, sigma0, xi0, t_end, dt):
    """Integrate the frame-adapted system
        sigma' = -sigma sum_i (dH/dxi_i) v_i,
        xi'    = -Phi(z)^T grad_z H + Lambda(g*) grad_xi H,  z = sigma^-1 . k,
    as a matrix ODE with per-step group renormalization.

    States are (sigma.ravel(), xi); meta carries the layout.
    """
    alg = action.alg
    n, r, p = alg.n, alg.r, action.p
    targets = np.asarray(targets, float)

    def rhs(w):
        sig = w[: n * n].reshape(n, n)
        xi = w[n * n :]
        z = dm.real_vec(action.act(np.linalg.inv(sig), list(targets)))
        gz, gxi = grad_h(H, p, np.concatenate([z, xi]))
        sig_dot = -sig @ alg.element(gxi)
        phi = infinitesimal_matrix(action, list(z))
        xi_d = -phi.T @ gz + la.lie_poisson_bivector(alg, xi) @ gxi
        return np.concatenate([sig_dot.ravel(), xi_d])

    def post(w):
        sig = renormalize_group(alg, w[: n * n].reshape(n, n))
        return np.concatenate([sig.ravel(), w[n * n :]])

    w0 = np.concatenate([np.asarray(sigma0, float).ravel(), np.asarray(xi0, float)])
    times, states = _rk4(rhs, w0, t_end, dt, post_step=post)
    return Trajectory(times, states,
                      {"integrator": "rk4", "dt": dt, "layout": "sigma+xi",
                       "n": n, "r": r, "p": n * n, "structure": f"frame({action.name})"})


def frame_state_to_z(action, targets, w):
    """Recover the base-coordinate point from a frame-flow state row."""
    n = action.alg.n
    sig = np.asarray(w[: n * n], float).reshape(n, n)
    return dm.real_vec(action.act(np.linalg.inv(sig), list(targets)))


# ----------------------------------------------------------------------------
# Hamiltonian presets
# ----------------------------------------------------------------------------

def _h_so3_orbit(z, xi):
    return 0.2 * (z[0] ** 2 + z[1] ** 2) + 2.0 * xi[0] ** 2 - xi[1] ** 2 + 3.0 * xi[2] ** 2


def _h_so3_xi_quadratic(z, xi):
    return 2.0 * xi[0] ** 2 - xi[1] ** 2 + 3.0 * xi[2] ** 2


def _h_so3_xi_cubic(z, xi):
    return 2.0 * xi[0] * xi[1] - xi[2] ** 3


def _h_sl2_frame_six(z, xi):
    return (0.2 * (z[0] ** 2 + z[1] ** 2 + z[2] ** 2)
            + xi[0] ** 2 + xi[1] ** 2 + xi[2] ** 2)


def _h_harmonic(z, xi):
    return 0.5 * (sum(c * c for c in z) + sum(c * c for c in xi))


def _h_kappa1_printed(z, xi):
    return 4.0 * xi[0] ** 2 + xi[1] * xi[2]


def _h_kappa2(z, xi):
    return (z[0] ** 2 * xi[1] - z[0] * xi[0] - xi[2]) / z[1]


def _h_sl2_casimir(z, xi):
    return xi[0] ** 2 + 4.0 * xi[1] * xi[2]


PRESETS = {
    "so3-orbit": _h_so3_orbit,
    "so3-xi-quadratic": _h_so3_xi_quadratic,
    "so3-xi-cubic": _h_so3_xi_cubic,
    "sl2-frame-six": _h_sl2_frame_six,
    "harmonic": _h_harmonic,
    "kappa1-printed": _h_kappa1_printed,
    "kappa2": _h_kappa2,
    "sl2-casimir": _h_sl2_casimir,
}


def preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise UnsupportedShape(f"unknown Hamiltonian preset {name!r}") from None
