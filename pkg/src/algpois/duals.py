"""Forward-mode automatic differentiation on tagged dual numbers.

Every smooth expression in the package is written with ordinary Python
arithmetic so it can be evaluated on floats or on `Dual` values.  A `Dual`
carries a value part `re`, a derivative part `im` and an integer `tag`
identifying the derivative level it belongs to.  Tags make nested
differentiation sound: each call to `directional` (or friends) allocates a
fresh tag, wraps its inputs at that tag, and extracts exactly that tag from
the result, so an inner derivative never contaminates an outer one.

`im` is usually a scalar; `gradient` uses one evaluation with a numpy array
as the derivative part (vector tangents) to get all partials at once.
"""

import math

import numpy as np

_SCALARS = (int, float, np.integer, np.floating)

_next_tag = 0


def _fresh_tag():
    global _next_tag
    _next_tag += 1
    return _next_tag


class Dual:
    __slots__ = ("re", "im", "tag")

    def __init__(self, re, im, tag):
        self.re = re
        self.im = im
        self.tag = tag

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, o):
        if isinstance(o, Dual):
            if o.tag == self.tag:
                return Dual(self.re + o.re, self.im + o.im, self.tag)
            if o.tag > self.tag:
                return Dual(self + o.re, o.im, o.tag)
            return Dual(self.re + o, self.im, self.tag)
        if isinstance(o, _SCALARS):
            return Dual(self.re + o, self.im, self.tag)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.re, -self.im, self.tag)

    def __sub__(self, o):
        if isinstance(o, (Dual,) + _SCALARS):
            return self.__add__(-o)
        return NotImplemented

    def __rsub__(self, o):
        if isinstance(o, _SCALARS):
            return (-self).__add__(o)
        return NotImplemented

    def __mul__(self, o):
        if isinstance(o, Dual):
            if o.tag == self.tag:
                return Dual(self.re * o.re, self.re * o.im + self.im * o.re, self.tag)
            if o.tag > self.tag:
                return Dual(self * o.re, self * o.im, o.tag)
            return Dual(self.re * o, self.im * o, self.tag)
        if isinstance(o, _SCALARS):
            return Dual(self.re * o, self.im * o, self.tag)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual):
            if o.tag == self.tag:
                inv = 1.0 / o.re
                q = self.re * inv
                return Dual(q, (self.im - q * o.im) * inv, self.tag)
            if o.tag > self.tag:
                return Dual(self, 0.0, o.tag).__truediv__(o)
            return Dual(self.re / o, self.im / o, self.tag)
        if isinstance(o, _SCALARS):
            return Dual(self.re / o, self.im / o, self.tag)
        return NotImplemented

    def __rtruediv__(self, o):
        if isinstance(o, _SCALARS):
            return Dual(float(o), 0.0, self.tag).__truediv__(self)
        return NotImplemented

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer() and abs(p) <= 64):
            n = int(p)
            if n == 0:
                return Dual(1.0, 0.0, self.tag)
            if n < 0:
                base = self.__pow__(-n)
                return 1.0 / base
            out = self
            for _ in range(n - 1):
                out = out * self
            return out
        if isinstance(p, _SCALARS):
            # x**p = exp(p log x); requires positive real part
            return (self.log() * float(p)).exp()
        if isinstance(p, Dual):
            return (self.log() * p).exp()
        return NotImplemented

    def __rpow__(self, base):
        if isinstance(base, _SCALARS):
            return (self * math.log(base)).exp()
        return NotImplemented

    def __abs__(self):
        return self if real(self) >= 0 else -self

    # comparisons act on the underlying real value (used by guards/pivoting)
    def __lt__(self, o):
        return real(self) < real(o)

    def __le__(self, o):
        return real(self) <= real(o)

    def __gt__(self, o):
        return real(self) > real(o)

    def __ge__(self, o):
        return real(self) >= real(o)

    def __repr__(self):
        return f"Dual({self.re!r}, {self.im!r}, t{self.tag})"

    # -- elementary functions (chain rule) -----------------------------------

    def exp(self):
        v = exp(self.re)
        return Dual(v, self.im * v, self.tag)

    def log(self):
        return Dual(log(self.re), self.im / self.re, self.tag)

    def sqrt(self):
        v = sqrt(self.re)
        return Dual(v, self.im / (2.0 * v), self.tag)

    def sin(self):
        return Dual(sin(self.re), self.im * cos(self.re), self.tag)

    def cos(self):
        return Dual(cos(self.re), -self.im * sin(self.re), self.tag)

    def tan(self):
        c = cos(self.re)
        return Dual(tan(self.re), self.im / (c * c), self.tag)

    def arctan(self):
        return Dual(arctan(self.re), self.im / (1.0 + self.re * self.re), self.tag)


# -- generic elementary functions (work on float, Dual, ndarray) -------------

def exp(x):
    if isinstance(x, Dual):
        return x.exp()
    if isinstance(x, np.ndarray):
        return np.exp(x)
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        return x.log()
    if isinstance(x, np.ndarray):
        return np.log(x)
    return math.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        return x.sqrt()
    if isinstance(x, np.ndarray):
        return np.sqrt(x)
    return math.sqrt(x)


def sin(x):
    if isinstance(x, Dual):
        return x.sin()
    if isinstance(x, np.ndarray):
        return np.sin(x)
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return x.cos()
    if isinstance(x, np.ndarray):
        return np.cos(x)
    return math.cos(x)


def tan(x):
    if isinstance(x, Dual):
        return x.tan()
    return math.tan(x)


def arctan(x):
    if isinstance(x, Dual):
        return x.arctan()
    return math.atan(x)


def real(x):
    """Underlying float value of an arbitrarily nested dual."""
    while isinstance(x, Dual):
        x = x.re
    return x


def real_vec(xs):
    return np.array([real(x) for x in xs], dtype=float)


def real_mat(m):
    m = np.asarray(m)
    out = np.empty(m.shape, dtype=float)
    flat_in, flat_out = m.ravel(), out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = real(flat_in[i])
    return out


def magnitude(x):
    """Max abs over all parts of a nested dual; convergence measure."""
    if isinstance(x, Dual):
        return max(magnitude(x.re), magnitude(x.im))
    if isinstance(x, np.ndarray):
        return float(np.max(np.abs(x))) if x.size else 0.0
    return abs(float(x))


def _value_part(y, tag):
    if isinstance(y, Dual) and y.tag == tag:
        return y.re
    return y


def _deriv_part(y, tag):
    if isinstance(y, Dual) and y.tag == tag:
        return y.im
    return 0.0


def _map_structure(f, y):
    if isinstance(y, (list, tuple)):
        return type(y)(_map_structure(f, c) for c in y)
    if isinstance(y, np.ndarray) and y.dtype == object:
        out = np.empty(y.shape, dtype=object)
        fo, fi = out.ravel(), y.ravel()
        for k in range(fi.size):
            fo[k] = f(fi[k])
        return out
    return f(y)


def directional(f, x, v):
    """(f(x), directional derivative of f at x along v).

    f maps a sequence of scalars to a scalar, a sequence, or an object array;
    the return mirrors f's structure in both slots.
    """
    tag = _fresh_tag()
    xw = [Dual(xi, vi, tag) for xi, vi in zip(x, v)]
    y = f(xw)
    return (_map_structure(lambda c: _value_part(c, tag), y),
            _map_structure(lambda c: _deriv_part(c, tag), y))


def derivative(f, t0, h=1.0):
    """(f(t0), df/dt at t0) for a scalar-argument f."""
    tag = _fresh_tag()
    y = f(Dual(t0, h, tag))
    return (_map_structure(lambda c: _value_part(c, tag), y),
            _map_structure(lambda c: _deriv_part(c, tag), y))


def gradient(f, x):
    """Gradient of scalar f at x in one pass using vector tangents."""
    n = len(x)
    tag = _fresh_tag()
    eye = np.eye(n)
    xw = [Dual(float(x[i]), eye[i], tag) for i in range(n)]
    y = f(xw)
    if isinstance(y, Dual) and y.tag == tag:
        g = y.im
        return np.asarray(g, dtype=float) if isinstance(g, np.ndarray) else np.full(n, float(g))
    return np.zeros(n)


def jacobian(f, x):
    """(f(x), J) with J[i, j] = d f_i / d x_j, via n directional passes."""
    n = len(x)
    cols = []
    val = None
    for j in range(n):
        v = [0.0] * n
        v[j] = 1.0
        val, dv = directional(f, x, v)
        cols.append([real(c) for c in (dv if not isinstance(dv, np.ndarray) else dv.ravel())])
    vals = [real(c) for c in (val if not isinstance(val, np.ndarray) else val.ravel())]
    J = np.array(cols, dtype=float).T
    return np.array(vals, dtype=float), J
