"""Matrix Lie algebra data: bases, structure constants, Adjoint matrices,
the matrix exponential, and the Lie-Poisson bivector on the dual.

Conventions. A `LieAlgebra` stores r basis matrices v_1..v_r of size n x n and
the structure tensor c with [v_i, v_j] = sum_k c[k, i, j] v_k.  The Lie-Poisson
bivector on the dual, in the coordinates xi_1..xi_r associated to the basis,
is Lambda(xi)_{ij} = sum_k c[k, i, j] xi_k.  The Adjoint matrix Am(g) solves
g v_i g^-1 = sum_k v_k Am(g)_{ki}, i.e. column i holds the basis coordinates
of the conjugated generator.
"""

import re as _re
from dataclasses import dataclass, field

import numpy as np

from . import duals as dm
from .duals import Dual
from .errors import (
    DependentBasis, DimensionMismatch, NotClosed, NotInSpan, UnknownAlgebra,
)

SPAN_TOL = 1e-10


def commutator(a, b):
    return a @ b - b @ a


def _contains_dual(arr):
    if isinstance(arr, np.ndarray) and arr.dtype == object:
        return any(isinstance(x, Dual) for x in arr.ravel())
    return isinstance(arr, Dual)


@dataclass(frozen=True)
class LieAlgebra:
    """Matrix Lie algebra with a fixed basis and structure tensor."""

    name: str
    basis: np.ndarray          # (r, n, n)
    c: np.ndarray              # (r, r, r), [v_i, v_j] = sum_k c[k,i,j] v_k
    _pinv: np.ndarray = field(repr=False, default=None)

    @property
    def r(self):
        return self.basis.shape[0]

    @property
    def n(self):
        return self.basis.shape[1]

    def element(self, coeffs):
        """Matrix sum_k coeffs_k v_k; accepts dual coefficients."""
        coeffs = list(coeffs)
        if any(isinstance(x, Dual) for x in coeffs):
            out = np.zeros((self.n, self.n), dtype=object)
            for k, ck in enumerate(coeffs):
                out = out + ck * self.basis[k]
            return out
        return np.einsum("k,kab->ab", np.asarray(coeffs, dtype=float), self.basis)

    def coeffs_of(self, m, tol=SPAN_TOL):
        """Coordinates of matrix m in the basis; NotInSpan above tol."""
        flat = np.asarray(m, dtype=float).ravel()
        co = self._pinv @ flat
        resid = np.linalg.norm(self.flat_basis.T @ co - flat)
        if resid > tol * max(1.0, np.linalg.norm(flat)):
            raise NotInSpan(f"residual {resid:.3e} expressing matrix in {self.name} basis")
        return co

    @property
    def flat_basis(self):
        return self.basis.reshape(self.r, -1)

    def bracket_coeffs(self, x, y):
        """Coefficients of [x, y] for coefficient vectors x, y (dual-capable)."""
        if any(isinstance(v, Dual) for v in list(x) + list(y)):
            # dense loops; r <= 6 across the catalog
            out = []
            for k in range(self.r):
                acc = 0.0
                ck = self.c[k]
                for i in range(self.r):
                    xi = x[i]
                    row = ck[i]
                    for j in range(self.r):
                        if row[j] != 0.0:
                            acc = acc + row[j] * (xi * y[j])
                out.append(acc)
            return out
        return np.einsum("kij,i,j->k", self.c, np.asarray(x, float), np.asarray(y, float))

    def gram(self):
        """Trace-form Gram matrix tr(v_i v_j)."""
        return np.einsum("iab,jba->ij", self.basis, self.basis)

    def random_element(self, rng, scale=0.5):
        co = rng.uniform(-1.0, 1.0, self.r)
        m = self.element(co)
        nrm = np.linalg.norm(m)
        if nrm > scale:
            m = m * (scale / nrm)
        return m


def structure_constants(basis, tol=1e-12):
    """Structure tensor c[k,i,j] from commutators of the basis matrices.

    Raises DependentBasis for a rank-deficient basis and NotClosed when some
    commutator leaves the span (closure residual >= tol).
    """
    basis = np.asarray(basis, dtype=float)
    r = basis.shape[0]
    flat = basis.reshape(r, -1)
    if np.linalg.matrix_rank(flat, tol=1e-10) < r:
        raise DependentBasis("basis matrices are linearly dependent")
    pinv = np.linalg.pinv(flat.T)
    c = np.zeros((r, r, r))
    worst = 0.0
    for i in range(r):
        for j in range(r):
            com = commutator(basis[i], basis[j]).ravel()
            co = pinv @ com
            worst = max(worst, np.linalg.norm(flat.T @ co - com))
            c[:, i, j] = co
    if worst >= tol:
        raise NotClosed(f"closure residual {worst:.3e} >= {tol:.1e}")
    return c


def structure_antisymmetry_residual(c):
    return float(np.max(np.abs(c + np.transpose(c, (0, 2, 1)))))


def structure_jacobi_residual(c):
    """Max residual of sum_m (c^m_ij c^l_mk + c^m_jk c^l_mi + c^m_ki c^l_mj)."""
    t1 = np.einsum("mij,lmk->lijk", c, c)
    t2 = np.einsum("mjk,lmi->lijk", c, c)
    t3 = np.einsum("mki,lmj->lijk", c, c)
    return float(np.max(np.abs(t1 + t2 + t3)))


def lie_poisson_bivector(alg, xi):
    """Lambda(g*)(xi)_{ij} = sum_k c^k_ij xi_k; antisymmetric by construction."""
    xi = list(xi)
    if len(xi) != alg.r:
        raise DimensionMismatch(f"xi has length {len(xi)}, algebra dim {alg.r}")
    if any(isinstance(x, Dual) for x in xi):
        out = np.zeros((alg.r, alg.r), dtype=object)
        for k, xk in enumerate(xi):
            out = out + xk * alg.c[k]
        return out
    return np.einsum("kij,k->ij", alg.c, np.asarray(xi, dtype=float))


def coadjoint_infinitesimal(alg, xi):
    """Infinitesimal matrix of the coadjoint action: -Lambda(g*)(xi)."""
    return -lie_poisson_bivector(alg, xi)


def adjoint_matrix(alg, g, tol=SPAN_TOL):
    """Am(g) with g v_i g^-1 = sum_k v_k Am(g)_{ki}."""
    g = np.asarray(g, dtype=float)
    if g.shape != (alg.n, alg.n):
        raise DimensionMismatch(f"group element shape {g.shape}, expected {(alg.n, alg.n)}")
    ginv = np.linalg.inv(g)
    am = np.empty((alg.r, alg.r))
    for i in range(alg.r):
        am[:, i] = alg.coeffs_of(g @ alg.basis[i] @ ginv, tol=tol)
    return am


def matrix_exp(x, t=1.0):
    """exp(t x) by scaling and squaring with a Taylor core.

    Generic over the entry type: dual-number entries flow through, so the
    exponential can sit inside differentiated expressions.
    """
    x = np.asarray(x)
    n = x.shape[0]
    if _contains_dual(x) or isinstance(t, Dual):
        a = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                a[i, j] = t * x[i, j]
        nrm = np.linalg.norm(dm.real_mat(a))
        s = max(0, int(np.ceil(np.log2(nrm))) + 1) if nrm > 0.5 else 0
        a = a * (0.5 ** s)
        out = np.eye(n) + a
        term = a
        k = 1
        while True:
            k += 1
            term = np.dot(term, a) * (1.0 / k)
            out = out + term
            if max(dm.magnitude(e) for e in term.ravel()) < 1e-18 or k > 40:
                break
        for _ in range(s):
            out = np.dot(out, out)
        return out
    a = np.asarray(x, dtype=float) * float(t)
    nrm = np.linalg.norm(a)
    s = max(0, int(np.ceil(np.log2(nrm))) + 1) if nrm > 0.5 else 0
    a = a * (0.5 ** s)
    out = np.eye(n) + a
    term = a
    k = 1
    while np.max(np.abs(term)) > 1e-18 and k <= 40:
        k += 1
        term = term @ a / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def random_group_element(alg, rng, scale=0.5):
    """exp(x) for a random algebra element with ||x|| <= scale."""
    return matrix_exp(alg.random_element(rng, scale))


def mat_inv(m):
    """Inverse of a small matrix, generic over the entry type.

    Gauss-Jordan with partial pivoting on the real magnitude, so dual-number
    entries propagate derivatives through the inversion.
    """
    m = np.asarray(m)
    n = m.shape[0]
    if not _contains_dual(m):
        return np.linalg.inv(np.asarray(m, dtype=float))
    a = np.empty((n, 2 * n), dtype=object)
    for i in range(n):
        for j in range(n):
            a[i, j] = m[i, j]
            a[i, n + j] = 1.0 if i == j else 0.0
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(dm.real(a[i, col])))
        if abs(dm.real(a[piv, col])) < 1e-14:
            raise np.linalg.LinAlgError("singular matrix in mat_inv")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
        inv_p = 1.0 / a[col, col]
        for j in range(2 * n):
            a[col, j] = a[col, j] * inv_p
        for i in range(n):
            if i != col:
                f = a[i, col]
                if dm.magnitude(f) != 0.0:
                    for j in range(2 * n):
                        a[i, j] = a[i, j] - f * a[col, j]
    return a[:, n:]


def group_constraint_residual(alg, g):
    """How far g is from the group the catalog algebra belongs to."""
    g = np.asarray(g, dtype=float)
    name = alg.name.split("(")[0].split("-")[0]
    if name in ("sl2",):
        return abs(np.linalg.det(g) - 1.0)
    if name in ("so3", "so3m"):
        return max(np.max(np.abs(g.T @ g - np.eye(3))), abs(np.linalg.det(g) - 1.0))
    if name == "se2":
        rot = g[:2, :2]
        return max(np.max(np.abs(rot.T @ rot - np.eye(2))),
                   np.max(np.abs(g[2] - np.array([0.0, 0.0, 1.0]))))
    if name == "translation":
        n = g.shape[0]
        return np.max(np.abs(g - np.eye(n) - np.pad(
            g[: n - 1, n - 1 :], ((0, 1), (n - 1, 0)))))
    det = np.linalg.det(g)
    return 0.0 if abs(det) > 0 else 1.0


# ----------------------------------------------------------------------------
# catalog
# ----------------------------------------------------------------------------

def _sl2_basis():
    va = np.array([[1.0, 0.0], [0.0, -1.0]])
    vb = np.array([[0.0, 1.0], [0.0, 0.0]])
    vc = np.array([[0.0, 0.0], [1.0, 0.0]])
    return np.stack([va, vb, vc])


def _so3_basis():
    vxy = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
    vyz = np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
    vzx = np.array([[0.0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    return np.stack([vxy, vyz, vzx])


def _se2_basis():
    vt = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
    va = np.array([[0.0, 0, 1], [0, 0, 0], [0, 0, 0]])
    vb = np.array([[0.0, 0, 0], [0, 0, 1], [0, 0, 0]])
    return np.stack([vt, va, vb])


def _translation_basis(r):
    out = np.zeros((r, r + 1, r + 1))
    for j in range(r):
        out[j, j, r] = 1.0
    return out


def _aff2_basis():
    # scaling+shear of x plus translations of (x, y); 3x3 affine matrices
    vl = np.zeros((3, 3)); vl[0, 0] = 1.0
    vm = np.zeros((3, 3)); vm[0, 1] = 1.0
    ve = np.zeros((3, 3)); ve[0, 2] = 1.0
    vd = np.zeros((3, 3)); vd[1, 2] = 1.0
    return np.stack([vl, vm, ve, vd])


def semidirect_basis(alg, n):
    """Block basis (w_1..w_n, vbar_1..vbar_r) of g |x R^n in gl(n+1)."""
    if n != alg.n:
        raise DimensionMismatch(
            f"semidirect factor dim {n} must match the representation size {alg.n}")
    m = alg.n + 1
    out = np.zeros((n + alg.r, m, m))
    for j in range(n):
        out[j, j, m - 1] = 1.0
    for i in range(alg.r):
        out[n + i, : alg.n, : alg.n] = alg.basis[i]
    return out


def _make(name, basis):
    basis = np.asarray(basis, dtype=float)
    c = structure_constants(basis)
    pinv = np.linalg.pinv(basis.reshape(basis.shape[0], -1).T)
    return LieAlgebra(name, basis, c, pinv)


def algebra(name):
    """Catalog lookup: sl2, so3, se2, aff2, scalar, translation(r),
    semidirect(<name>, n); also so3m (orientation-reversed so3 basis)."""
    key = name.strip().lower().replace(" ", "")
    m = _re.fullmatch(r"translation[(\-](\d+)\)?", key)
    if m:
        r = int(m.group(1))
        return _make(f"translation({r})", _translation_basis(r))
    m = _re.fullmatch(r"semidirect\((\w+),(\d+)\)", key)
    if m:
        inner = algebra(m.group(1))
        return _make(f"semidirect({m.group(1)},{m.group(2)})",
                     semidirect_basis(inner, int(m.group(2))))
    if key == "sl2":
        return _make("sl2", _sl2_basis())
    if key == "so3":
        return _make("so3", _so3_basis())
    if key == "so3m":
        return _make("so3m", -_so3_basis())
    if key == "se2":
        return _make("se2", _se2_basis())
    if key == "aff2":
        return _make("aff2", _aff2_basis())
    if key == "scalar":
        return _make("scalar", np.ones((1, 1, 1)))
    raise UnknownAlgebra(name)
