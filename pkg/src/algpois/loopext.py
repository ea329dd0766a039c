"""Discretized loop algebra on the circle: the central-extension cocycle for
both section brackets, the extended Hamiltonian vector fields, and the
companion bracket with a frozen dual point.

Sections S^1 -> g are sampled on a periodic grid; derivatives are spectral
(or 4th-order central differences) and the quadrature is the trapezoid rule,
so every identity on band-limited data holds to machine precision.  The
bracket used throughout this module is the one the extended-bracket
derivation produces,
    [[a, b]] = [a, b] + rho(a) b_s - rho(b) a_s,
whose pointwise-term sign differs from the section bracket in `algebroid`
(the two are exchanged by the representation-sign isomorphism); the
reduction of the extended vector field to the unextended one for the trivial
action fixes this choice.
"""

from dataclasses import dataclass, field

import numpy as np

from . import duals as dm
from .actions import infinitesimal_matrix
from .errors import DegeneratePairing, DimensionMismatch, GridMismatch, UnsupportedShape

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class LoopGrid:
    """Periodic grid on [0, 2pi) with a derivative and a quadrature."""

    N: int = 256
    deriv_kind: str = "spectral"        # "spectral" | "fd4"

    def __post_init__(self):
        if self.N < 4 or self.N & (self.N - 1):
            raise UnsupportedShape("grid size must be a power of two >= 4")
        if self.deriv_kind not in ("spectral", "fd4"):
            raise UnsupportedShape(f"unknown derivative kind {self.deriv_kind!r}")

    @property
    def nodes(self):
        return TWO_PI * np.arange(self.N) / self.N

    def deriv(self, arr):
        """d/ds along axis 0 of periodic samples."""
        arr = np.asarray(arr, float)
        if arr.shape[0] != self.N:
            raise GridMismatch(f"samples have length {arr.shape[0]}, grid {self.N}")
        if self.deriv_kind == "spectral":
            F = np.fft.rfft(arr, axis=0)
            k = np.arange(self.N // 2 + 1, dtype=float)
            k[-1] = 0.0                      # drop the Nyquist mode derivative
            shape = (len(k),) + (1,) * (arr.ndim - 1)
            return np.fft.irfft(F * (1j * k).reshape(shape), n=self.N, axis=0)
        h = TWO_PI / self.N
        return (-np.roll(arr, -2, 0) + 8 * np.roll(arr, -1, 0)
                - 8 * np.roll(arr, 1, 0) + np.roll(arr, 2, 0)) / (12 * h)

    def quad(self, values):
        """Trapezoid rule (periodic, hence spectrally accurate)."""
        values = np.asarray(values, float)
        if values.shape[0] != self.N:
            raise GridMismatch(f"values have length {values.shape[0]}, grid {self.N}")
        return float(np.sum(values, axis=0) * (TWO_PI / self.N))


@dataclass(frozen=True)
class LoopSection:
    """Grid samples of a section S^1 -> g in basis coefficients, shape (N, r)."""

    grid: LoopGrid
    alg: object
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, float)
        if s.shape != (self.grid.N, self.alg.r):
            raise DimensionMismatch(
                f"samples shape {s.shape}, expected {(self.grid.N, self.alg.r)}")
        if not np.all(np.isfinite(s)):
            raise DimensionMismatch("non-finite loop section samples")
        object.__setattr__(self, "samples", s)

    def matrices(self):
        return np.einsum("ak,kij->aij", self.samples, self.alg.basis)

    def deriv(self):
        return LoopSection(self.grid, self.alg, self.grid.deriv(self.samples))

    def __add__(self, other):
        _same_grid(self, other)
        return LoopSection(self.grid, self.alg, self.samples + other.samples)

    def __sub__(self, other):
        _same_grid(self, other)
        return LoopSection(self.grid, self.alg, self.samples - other.samples)

    def __mul__(self, c):
        return LoopSection(self.grid, self.alg, self.samples * float(c))

    __rmul__ = __mul__


@dataclass(frozen=True)
class CentralState:
    """Dual point identified with a section via the trace pairing, plus the
    central parameter."""

    xi: LoopSection
    r: float = -1.0


def _same_grid(x, y):
    if x.grid.N != y.grid.N or x.grid.deriv_kind != y.grid.deriv_kind:
        raise GridMismatch("loop sections live on different grids")
    if x.alg.name != y.alg.name:
        raise DimensionMismatch(f"{x.alg.name} vs {y.alg.name}")


def from_function(grid, alg, fn):
    """Sample a coefficient function s -> (r,) on the grid."""
    return LoopSection(grid, alg, np.array([fn(s) for s in grid.nodes], float))


def random_trig_section(grid, alg, rng, degree=4, scale=1.0):
    """Band-limited section: trig polynomial coefficients of given degree."""
    s = grid.nodes
    out = np.zeros((grid.N, alg.r))
    for k in range(alg.r):
        out[:, k] = rng.uniform(-scale, scale)
        for d in range(1, degree + 1):
            a, b = rng.uniform(-scale, scale, 2) / d
            out[:, k] += a * np.cos(d * s) + b * np.sin(d * s)
    return LoopSection(grid, alg, out)


def gram_matrix(alg):
    g = alg.gram()
    if abs(np.linalg.det(g)) < 1e-12 or np.linalg.cond(g) > 1e12:
        raise DegeneratePairing(
            f"trace form of {alg.name} is singular; use a faithful "
            "representation with nondegenerate pairing")
    return g


def trace_pair(x, y):
    """Per-node tr(x(s) y(s)), shape (N,)."""
    _same_grid(x, y)
    G = gram_matrix(x.alg)
    return np.einsum("ak,kl,al->a", x.samples, G, y.samples)


def pointwise_bracket_loop(x, y):
    """Per-node matrix bracket in coefficients."""
    _same_grid(x, y)
    return LoopSection(x.grid, x.alg,
                       np.einsum("kij,ai,aj->ak", x.alg.c, x.samples, y.samples))


def cocycle_beta(x, y, pairing="trace"):
    """beta(x, y) = integral of tr(x y_s); `pairing="plain"` drops the trace
    form (coefficient dot product) as a deliberate negative control."""
    _same_grid(x, y)
    ys = y.deriv().samples
    if pairing == "trace":
        G = gram_matrix(x.alg)
        dens = np.einsum("ak,kl,al->a", x.samples, G, ys)
    else:
        dens = np.einsum("ak,ak->a", x.samples, ys)
    return x.grid.quad(dens)


def rho_hat_rows(action, grid):
    """(N, r) array with rho_hat(v_k, s_j): the 1-d infinitesimal row."""
    if action.p != 1:
        raise UnsupportedShape("loop machinery needs a one-dimensional base")
    return np.array([infinitesimal_matrix(action, [s])[0] for s in grid.nodes])


def loop_bracket(x, y, action=None, E=None):
    """[[x, y]] = [x, y] + rho(x) y_s - rho(y) x_s on grid samples.

    The scalar rho(.) comes either from an action's infinitesimal row or
    directly from a supplied E-field section via the trace pairing.
    """
    _same_grid(x, y)
    out = pointwise_bracket_loop(x, y).samples.copy()
    if action is None and E is None:
        return LoopSection(x.grid, x.alg, out)
    if E is not None:
        rho_x = trace_pair(x, E)
        rho_y = trace_pair(y, E)
    else:
        rows = rho_hat_rows(action, x.grid)
        rho_x = np.einsum("ak,ak->a", rows, x.samples)
        rho_y = np.einsum("ak,ak->a", rows, y.samples)
    out += rho_x[:, None] * y.deriv().samples - rho_y[:, None] * x.deriv().samples
    return LoopSection(x.grid, x.alg, out)


def cocycle_residual_second(x, y, z, action=None, E=None, pairing="trace"):
    """|beta([[y,z]], x) + beta([[z,x]], y) + beta([[x,y]], z)|."""
    return abs(cocycle_beta(loop_bracket(y, z, action, E), x, pairing)
               + cocycle_beta(loop_bracket(z, x, action, E), y, pairing)
               + cocycle_beta(loop_bracket(x, y, action, E), z, pairing))


def cocycle_residual_first(x, y, z, pairing="trace"):
    """Cocycle identity of beta for the pointwise bracket."""
    return abs(cocycle_beta(pointwise_bracket_loop(y, z), x, pairing)
               + cocycle_beta(pointwise_bracket_loop(z, x), y, pairing)
               + cocycle_beta(pointwise_bracket_loop(x, y), z, pairing))


def E_field(action, grid):
    """Section E with rho_hat(x, s) = tr(x E(s)), from a Gram solve."""
    rows = rho_hat_rows(action, grid)
    alg = action.alg
    G = gram_matrix(alg)
    coeffs = np.linalg.solve(G, rows.T).T
    E = LoopSection(grid, alg, coeffs)
    resid = np.max(np.abs(rows - np.einsum("kl,al->ak", G, E.samples)))
    if resid > 1e-10:
        raise DegeneratePairing(f"E-field reconstruction residual {resid:.3e}")
    return E


def ham_vf_first(state, dF):
    """[x^xi, dF] - r (dF)_s: the unextended-bracket Hamiltonian field."""
    x = state.xi
    _same_grid(x, dF)
    out = pointwise_bracket_loop(x, dF).samples - state.r * dF.deriv().samples
    return LoopSection(x.grid, x.alg, out)


def ham_vf_second(state, dF, action=None, E=None):
    """Extended-bracket Hamiltonian field
        [x^xi, dF] - r (dF)_s - (tr(dF E) x^xi)_s - tr(x^xi (dF)_s) E.
    E comes from the action's infinitesimal row unless supplied directly.
    """
    x = state.xi
    _same_grid(x, dF)
    if E is None:
        if action is None:
            E = LoopSection(x.grid, x.alg, np.zeros_like(x.samples))
        else:
            E = E_field(action, x.grid)
    _same_grid(x, E)
    base = ham_vf_first(state, dF).samples
    tfe = trace_pair(dF, E)
    term3 = x.grid.deriv(tfe[:, None] * x.samples)
    txfs = trace_pair(x, dF.deriv())
    term4 = txfs[:, None] * E.samples
    return LoopSection(x.grid, x.alg, base - term3 - term4)


def bracket_second_value(state, dF, dH, action=None, E=None):
    """{F, H} = integral of tr(HVF_second(F) dH) at the state."""
    hv = ham_vf_second(state, dF, action, E)
    return dF.grid.quad(trace_pair(hv, dH))


def zero_bracket(xi0, dF, dH, action=None, E=None, alpha=1.0):
    """{F, H}_0 = alpha * integral of tr(x^{xi0} [[dF, dH]]), frozen xi0."""
    _same_grid(xi0, dF)
    br = loop_bracket(dF, dH, action, E)
    return alpha * xi0.grid.quad(trace_pair(xi0, br))


# ----------------------------------------------------------------------------
# quadratic functionals and the desk-scale Jacobi test
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticFunctional:
    """F(x) = 1/2 integral of x^T S(s) x with symmetric S; the variation in
    the trace pairing is G^-1 S(s) x."""

    grid: LoopGrid
    alg: object
    S: np.ndarray                # (N, r, r), symmetric per node

    def __post_init__(self):
        S = np.asarray(self.S, float)
        if S.shape != (self.grid.N, self.alg.r, self.alg.r):
            raise DimensionMismatch("S field shape mismatch")
        object.__setattr__(self, "S", 0.5 * (S + np.transpose(S, (0, 2, 1))))

    def value(self, x):
        dens = 0.5 * np.einsum("ak,akl,al->a", x.samples, self.S, x.samples)
        return self.grid.quad(dens)

    def variation(self, x):
        G = gram_matrix(self.alg)
        coeff = np.einsum("akl,al->ak", self.S, x.samples)
        return LoopSection(self.grid, self.alg,
                           np.linalg.solve(G, coeff.T).T)


def random_quadratic_functional(grid, alg, rng, degree=2, scale=1.0):
    s = grid.nodes
    S = np.zeros((grid.N, alg.r, alg.r))
    for i in range(alg.r):
        for j in range(alg.r):
            S[:, i, j] = rng.uniform(-scale, scale)
            for d in range(1, degree + 1):
                S[:, i, j] += rng.uniform(-scale, scale) / d * np.cos(d * s)
                S[:, i, j] += rng.uniform(-scale, scale) / d * np.sin(d * s)
    return QuadraticFunctional(grid, alg, S)


def pencil_bracket_value(k, F, H, x, xi0, r=-1.0, action=None, E=None, alpha=1.0):
    """Value of (1-k){F,H}_0 + k{F,H}_ext at the section x.

    The extended part is integral of tr(x [[dF,dH]]) + r beta(dF, dH), which
    is the pre-integration-by-parts form of the extended bracket.
    """
    dF = F.variation(x)
    dH = H.variation(x)
    br = loop_bracket(dF, dH, action, E)
    val2 = x.grid.quad(trace_pair(x, br)) + r * cocycle_beta(dF, dH)
    val0 = alpha * x.grid.quad(trace_pair(xi0, br))
    return (1.0 - k) * val0 + k * val2


def functional_gradient(K, x, step=1e-3):
    """Variation section of a scalar functional K at x.

    Five-point differences per sample: exact for polynomial functionals of
    degree <= 4, which covers the cubic pencil-bracket values.
    """
    grid, alg = x.grid, x.alg
    G = gram_matrix(alg)
    base = x.samples
    grad = np.zeros_like(base)
    for j in range(grid.N):
        for k in range(alg.r):
            pert = np.zeros_like(base)
            pert[j, k] = step
            kp1 = K(LoopSection(grid, alg, base + pert))
            km1 = K(LoopSection(grid, alg, base - pert))
            kp2 = K(LoopSection(grid, alg, base + 2 * pert))
            km2 = K(LoopSection(grid, alg, base - 2 * pert))
            grad[j, k] = (-kp2 + 8 * kp1 - 8 * km1 + km2) / (12 * step)
    # pairing weight: d/de K = integral tr(x^eta dK) = (2pi/N) eta . G dK
    coeff = grad * (grid.N / TWO_PI)
    return LoopSection(grid, alg, np.linalg.solve(G, coeff.T).T)


def jacobi_pencil_residual(k, F, G_, H, x0, xi0, r=-1.0, action=None, E=None,
                           alpha=1.0, step=1e-3):
    """Cyclic sum of iterated pencil brackets at the point x0; the inner
    bracket's variation is taken by exact finite differences."""

    def Kval(A, B):
        def K(x):
            return pencil_bracket_value(k, A, B, x, xi0, r, action, E, alpha)
        return K

    def outer(A, B, C):
        # {{A, B}, C} at x0
        dAB = functional_gradient(Kval(A, B), x0, step)
        dC = C.variation(x0)
        br = loop_bracket(dAB, dC, action, E)
        val2 = x0.grid.quad(trace_pair(x0, br)) + r * cocycle_beta(dAB, dC)
        val0 = alpha * x0.grid.quad(trace_pair(xi0, br))
        return (1.0 - k) * val0 + k * val2

    return abs(outer(F, H, G_) + outer(H, G_, F) + outer(G_, F, H))
