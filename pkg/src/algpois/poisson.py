"""Block Poisson structures on M x g*: assembly, certification, canonical
actions, compatibility of two actions, and semidirect-product cross-checks.

A structure's bivector is a function of the concatenated state w = (z, xi)
and is evaluable on dual numbers, so every derivative taken of it (Jacobi
cyclic sums, compatibility commutators) is exact.
"""

from dataclasses import dataclass, field

import numpy as np

from . import duals as dm
from . import liealg as la
from .actions import ActionSpec, act_jacobian, infinitesimal_matrix
from .errors import AlgebraMismatch, DimensionMismatch, OutOfDomain

DEFAULT_SEED = 20240916


@dataclass(frozen=True)
class PoissonStructure:
    """Antisymmetric bivector Lambda(w) on a (p + r)-dimensional state."""

    p: int                       # manifold coordinates
    r: int                       # dual-algebra coordinates
    lam: callable                # w -> (p+r, p+r) matrix, dual-capable
    label: str = ""
    action: object = None
    alg: object = None
    sample_lo: np.ndarray = None
    sample_hi: np.ndarray = None

    @property
    def dim(self):
        return self.p + self.r

    def __call__(self, w):
        return self.lam(list(w))

    def matrix(self, w):
        """Float bivector at a real state."""
        return dm.real_mat(self.lam([float(c) for c in w]))

    def sample(self, rng):
        if self.sample_lo is None:
            return rng.uniform(-2.0, 2.0, self.dim)
        while True:
            w = rng.uniform(self.sample_lo, self.sample_hi)
            if self.action is None or self.action.in_domain(w[: self.p]):
                return w


def _block(phi, lg, p, r):
    dual = (isinstance(phi, np.ndarray) and phi.dtype == object) or \
           (isinstance(lg, np.ndarray) and lg.dtype == object)
    d = p + r
    out = np.zeros((d, d), dtype=object if dual else float)
    for l in range(p):
        for k in range(r):
            out[l, p + k] = phi[l, k]
            out[p + k, l] = -phi[l, k]
    for i in range(r):
        for j in range(r):
            out[p + i, p + j] = lg[i, j]
    return out


def assemble(action):
    """Lambda(z, xi) = [[0, Phi(z)], [-Phi(z)^T, Lambda(g*)(xi)]] for left
    actions; the Phi block is sign-flipped for right actions."""
    p, r, alg = action.p, action.alg.r, action.alg
    sign = 1.0 if action.parity == "left" else -1.0

    def lam(w):
        z, xi = w[:p], w[p:]
        phi = infinitesimal_matrix(action, z)
        if sign < 0:
            phi = -phi
        lg = la.lie_poisson_bivector(alg, xi)
        return _block(phi, lg, p, r)

    lo = np.concatenate([action.sample_lo, np.full(r, -2.0)])
    hi = np.concatenate([action.sample_hi, np.full(r, 2.0)])
    return PoissonStructure(p=p, r=r, lam=lam, label=action.name,
                            action=action, alg=alg, sample_lo=lo, sample_hi=hi)


def lie_poisson_structure(alg, label=None):
    """The bare Lie-Poisson structure on g* (trivial action block)."""

    def lam(w):
        return la.lie_poisson_bivector(alg, w)

    return PoissonStructure(p=0, r=alg.r, lam=lam,
                            label=label or f"lie-poisson({alg.name})", alg=alg,
                            sample_lo=np.full(alg.r, -2.0),
                            sample_hi=np.full(alg.r, 2.0))


def gradient_state(f, p, w):
    """Gradient of f(z, xi) over the concatenated state w."""
    return dm.gradient(lambda s: f(s[:p], s[p:]), list(w))


def bracket(P, F, H, w):
    """{F, H}(w) = grad F . Lambda . grad H with AD gradients."""
    gF = gradient_state(F, P.p, w)
    gH = gradient_state(H, P.p, w)
    return float(gF @ P.matrix(w) @ gH)


def structure_derivative(P, w):
    """(d, d, d) tensor dlam[l, j, k] = d Lambda_jk / d w_l."""
    d = P.dim
    out = np.empty((d, d, d))
    for l in range(d):
        v = [0.0] * d
        v[l] = 1.0
        _, dv = dm.directional(P.lam, list(w), v)
        out[l] = dm.real_mat(dv)
    return out


def jacobi_residual(P, rng=None, n_points=100):
    """Max cyclic sum sum_l (Lam_il d_l Lam_jk + Lam_jl d_l Lam_ki +
    Lam_kl d_l Lam_ij) over all index triples and sampled states."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    worst = 0.0
    for _ in range(n_points):
        w = P.sample(rng)
        lam = P.matrix(w)
        dlam = structure_derivative(P, w)
        t1 = np.einsum("il,ljk->ijk", lam, dlam)
        t2 = np.einsum("jl,lki->ijk", lam, dlam)
        t3 = np.einsum("kl,lij->ijk", lam, dlam)
        worst = max(worst, float(np.max(np.abs(t1 + t2 + t3))))
    return worst


def antisymmetry_residual(P, rng=None, n_points=20):
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    worst = 0.0
    for _ in range(n_points):
        lam = P.matrix(P.sample(rng))
        worst = max(worst, float(np.max(np.abs(lam + lam.T))))
    return worst


def canonical_action_residual(P, action, g, w):
    """|| D^T Lambda(g^-1.z, xi Am(g)) D - Lambda(z, xi) || for the block
    Jacobian D = diag((d(g^-1.z)/dz)^-T, Am(g)^-1)."""
    p = P.p
    z, xi = np.asarray(w[:p], float), np.asarray(w[p:], float)
    g = np.asarray(g, float)
    ginv = np.linalg.inv(g)
    am = la.adjoint_matrix(action.alg, g)
    znew = dm.real_vec(action.apply(ginv, list(z)))
    if not action.in_domain(znew):
        raise OutOfDomain(f"{action.name}: transformed point left the domain")
    J = act_jacobian(action, ginv, z)
    D = np.zeros((P.dim, P.dim))
    D[:p, :p] = np.linalg.inv(J).T
    D[p:, p:] = np.linalg.inv(am)
    lam_new = P.matrix(np.concatenate([znew, xi @ am]))
    return float(np.max(np.abs(D.T @ lam_new @ D - P.matrix(w))))


def compatibility_residual(action1, action2, rng=None, n_points=50):
    """Max commutator norm of the difference fields of two actions of the
    same group; < tol iff the two assembled brackets are compatible."""
    if action1.alg.name != action2.alg.name:
        raise AlgebraMismatch(f"{action1.alg.name} vs {action2.alg.name}")
    if action1.p != action2.p:
        raise DimensionMismatch("actions live on patches of different dimension")
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    s1 = 1.0 if action1.parity == "left" else -1.0
    s2 = 1.0 if action2.parity == "left" else -1.0
    p, r = action1.p, action1.alg.r

    def theta_diff(z):
        a = infinitesimal_matrix(action1, z)
        b = infinitesimal_matrix(action2, z)
        if (isinstance(a, np.ndarray) and a.dtype == object) or \
           (isinstance(b, np.ndarray) and b.dtype == object):
            out = np.empty((p, r), dtype=object)
            for i in range(p):
                for j in range(r):
                    out[i, j] = s1 * a[i, j] - s2 * b[i, j]
            return out
        return s1 * a - s2 * b

    worst = 0.0
    for _ in range(n_points):
        z = action1.sample(rng)[0]
        if not action2.in_domain(z):
            continue
        D = dm.real_mat(theta_diff(list(z)))
        dD = np.empty((p, p, r))
        for l in range(p):
            v = [0.0] * p
            v[l] = 1.0
            _, dv = dm.directional(theta_diff, list(z), v)
            dD[l] = dm.real_mat(dv)
        comm = np.einsum("li,lmj->ijm", D, dD) - np.einsum("lj,lmi->ijm", D, dD)
        worst = max(worst, float(np.max(np.abs(comm))))
    return worst


def pencil(P1, P2, k):
    """(1-k) Lambda_1 + k Lambda_2; certify with jacobi_residual."""
    if P1.dim != P2.dim:
        raise DimensionMismatch("pencil of structures of different dimension")
    kk = float(k)

    def lam(w):
        a = P1.lam(w)
        b = P2.lam(w)
        return a * (1.0 - kk) + b * kk

    return PoissonStructure(
        p=P1.p, r=P1.r, lam=lam, label=f"pencil({P1.label},{P2.label};{kk})",
        action=P1.action, alg=P1.alg,
        sample_lo=P1.sample_lo, sample_hi=P1.sample_hi)


def semidirect_lie_poisson(alg, n):
    """Lie-Poisson structure of g |x R^n in coordinates (z, xi), built from
    the block basis (w_j, vbar_i) through structure constants only."""
    basis = la.semidirect_basis(alg, n)
    c = la.structure_constants(basis)
    pinv = np.linalg.pinv(basis.reshape(basis.shape[0], -1).T)
    h = la.LieAlgebra(f"semidirect({alg.name},{n})", basis, c, pinv)

    def lam(w):
        return la.lie_poisson_bivector(h, w)

    return PoissonStructure(p=n, r=alg.r, lam=lam, label=h.name, alg=h,
                            sample_lo=np.full(n + alg.r, -2.0),
                            sample_hi=np.full(n + alg.r, 2.0))


def corrupted_action(action, amp=0.3):
    """Negative control: add z-dependent noise to one infinitesimal column,
    breaking the commutation relations and hence the Jacobi identity."""

    def phi(z):
        base = infinitesimal_matrix(action, z)
        bump = amp * (z[0] * z[0])
        if isinstance(base, np.ndarray) and base.dtype == object:
            out = base.copy()
            out[0, 1] = out[0, 1] + bump
            return out
        out = np.array(base, dtype=object)
        out[0, 1] = out[0, 1] + bump
        return out

    return ActionSpec(name=action.name + "-corrupted", alg=action.alg, act=None,
                      p=action.p, parity=action.parity, guard=action.guard,
                      sample_lo=action.sample_lo, sample_hi=action.sample_hi,
                      phi_override=phi,
                      notes="negative control, deliberately not a valid action")
