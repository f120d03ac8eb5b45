"""Real composition algebras R, C, H, O built by Cayley-Dickson doubling.

Coefficients are duck-typed: anything supporting +, -, * and unary minus
works (floats, ``Fraction``, :class:`GaussQ`, exact polynomials, numpy
arrays).  The doubling convention is

    (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).

Besides the scalar :class:`CAElement` type the module exposes vectorised
helpers that act on arrays whose last axis holds the 1/2/4/8 components.
Those are what the catalog uses to write invariants once and evaluate them
over floats (batched) or over exact polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    QQ = Fraction

RATIONALS = (int, Fraction, type(QQ(0)))

DIMS = {"R": 1, "C": 2, "H": 4, "O": 8}
_TAG_OF_DIM = {v: k for k, v in DIMS.items()}


class GaussQ:
    """Exact Gaussian rational ``re + i*im`` with rational (``QQ``) parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = QQ(re)
        self.im = QQ(im)

    @staticmethod
    def coerce(x):
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, RATIONALS) or isinstance(x, Rational):
            return GaussQ(x, 0)
        return None

    def __add__(self, other):
        o = GaussQ.coerce(other)
        if o is None:
            return NotImplemented if not isinstance(other, (float, complex)) else complex(self) + other
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussQ.coerce(other)
        if o is None:
            return NotImplemented if not isinstance(other, (float, complex)) else complex(self) - other
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = GaussQ.coerce(other)
        if o is None:
            return NotImplemented if not isinstance(other, (float, complex)) else complex(self) * other
        if not self.im and not o.im:
            return GaussQ(self.re * o.re, 0)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussQ.coerce(other)
        if o is None:
            return NotImplemented if not isinstance(other, (float, complex)) else complex(self) / other
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("GaussQ division by zero")
        num = self * o.conjugate()
        return GaussQ(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = GaussQ.coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out, base = GaussQ(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = GaussQ.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __float__(self):
        if self.im:
            raise TypeError("non-real GaussQ has no float value")
        return float(self.re)

    def __repr__(self):
        if not self.im:
            return f"GaussQ({self.re})"
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


I = GaussQ(0, 1)


class FloatRing:
    """Double precision coefficients."""

    name = "float"
    zero = 0.0
    one = 1.0

    @staticmethod
    def from_int(k):
        return float(k)


class GaussianRationalRing:
    """Exact Gaussian rationals."""

    name = "gaussian-rational"
    zero = GaussQ(0)
    one = GaussQ(1)

    @staticmethod
    def from_int(k):
        return GaussQ(k)


class CAElement:
    """Element of R, C, H or O over an arbitrary coefficient ring."""

    __slots__ = ("tag", "coeffs")

    def __init__(self, tag: str, coeffs):
        if tag not in DIMS:
            raise ValueError(f"unknown algebra tag {tag!r}")
        coeffs = tuple(coeffs)
        if len(coeffs) != DIMS[tag]:
            raise ValueError(f"{tag} needs {DIMS[tag]} coefficients, got {len(coeffs)}")
        self.tag = tag
        self.coeffs = coeffs

    @classmethod
    def basis(cls, tag: str, k: int, ring=FloatRing):
        c = [ring.zero] * DIMS[tag]
        c[k] = ring.one
        return cls(tag, c)

    @classmethod
    def one(cls, tag: str, ring=FloatRing):
        return cls.basis(tag, 0, ring)

    def __add__(self, other):
        _same(self, other)
        return CAElement(self.tag, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        _same(self, other)
        return CAElement(self.tag, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CAElement(self.tag, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, CAElement):
            return ca_mul(self, other)
        return CAElement(self.tag, [a * other for a in self.coeffs])

    def __rmul__(self, other):
        return CAElement(self.tag, [other * a for a in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, CAElement):
            return NotImplemented
        return self.tag == other.tag and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.tag, self.coeffs))

    def __repr__(self):
        return f"CAElement({self.tag!r}, {list(self.coeffs)!r})"

    def to_array(self):
        return np.array(self.coeffs, dtype=float)


def _same(x, y):
    if not isinstance(y, CAElement) or x.tag != y.tag:
        raise ValueError(f"algebra tags differ: {x.tag} vs {getattr(y, 'tag', type(y).__name__)}")


def _cd_conj(c):
    return (c[0],) + tuple(-a for a in c[1:])


def _cd_mul(x, y):
    n = len(x)
    if n == 1:
        return (x[0] * y[0],)
    h = n // 2
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    ac = _cd_mul(a, c)
    db = _cd_mul(_cd_conj(d), b)
    da = _cd_mul(d, a)
    bc = _cd_mul(b, _cd_conj(c))
    return tuple(p - q for p, q in zip(ac, db)) + tuple(p + q for p, q in zip(da, bc))


def ca_mul(x: CAElement, y: CAElement) -> CAElement:
    _same(x, y)
    return CAElement(x.tag, _cd_mul(x.coeffs, y.coeffs))


def ca_conj(x: CAElement) -> CAElement:
    return CAElement(x.tag, _cd_conj(x.coeffs))


def ca_re(x: CAElement):
    return x.coeffs[0]


def ca_im(x: CAElement) -> CAElement:
    zero = x.coeffs[0] - x.coeffs[0]
    return CAElement(x.tag, (zero,) + x.coeffs[1:])


def ca_norm2(x: CAElement):
    return ca_re(ca_mul(x, ca_conj(x)))


def left_mult_matrix(a: CAElement) -> np.ndarray:
    """Real matrix of ``x -> a x`` in the coordinate basis."""
    n = DIMS[a.tag]
    a = CAElement(a.tag, [float(c) for c in a.coeffs])
    cols = [ca_mul(a, CAElement.basis(a.tag, j)).to_array() for j in range(n)]
    return np.column_stack(cols)


def right_mult_matrix(a: CAElement) -> np.ndarray:
    n = DIMS[a.tag]
    a = CAElement(a.tag, [float(c) for c in a.coeffs])
    cols = [ca_mul(CAElement.basis(a.tag, j), a).to_array() for j in range(n)]
    return np.column_stack(cols)


@lru_cache(maxsize=None)
def mult_table(tag: str):
    """Sparse structure constants: tuples (i, j, k, sign) with e_i e_j = sign e_k."""
    n = DIMS[tag]
    out = []
    for i in range(n):
        for j in range(n):
            prod = _cd_mul(CAElement.basis(tag, i, GaussianRationalRing).coeffs,
                           CAElement.basis(tag, j, GaussianRationalRing).coeffs)
            hits = [(k, c) for k, c in enumerate(prod) if c]
            assert len(hits) == 1 and abs(hits[0][1].re) == 1
            k, c = hits[0]
            out.append((i, j, k, int(c.re)))
    return tuple(out)


def tag_of(x) -> str:
    return _TAG_OF_DIM[np.shape(x)[-1]]


# vectorised hypercomplex arrays: last axis = components


def hc_mul(x, y):
    """Componentwise-broadcast product of hypercomplex arrays."""
    x = np.asarray(x)
    y = np.asarray(y)
    n = x.shape[-1]
    if y.shape[-1] != n:
        raise ValueError("component axes differ")
    table = mult_table(_TAG_OF_DIM[n])
    acc = [None] * n
    for i, j, k, s in table:
        term = x[..., i] * y[..., j]
        if acc[k] is None:
            acc[k] = term if s > 0 else -term
        elif s > 0:
            acc[k] = acc[k] + term
        else:
            acc[k] = acc[k] - term
    return np.stack(acc, axis=-1)


def hc_conj(x):
    x = np.asarray(x)
    sign = np.ones(x.shape[-1], dtype=int)
    sign[1:] = -1
    if x.dtype == object:
        sign = sign.astype(object)
    return x * sign


def hc_re(x):
    return np.asarray(x)[..., 0]


def hc_im(x):
    x = np.asarray(x)
    out = x.copy()
    out[..., 0] = out[..., 0] * 0
    return out


def hc_norm2(x):
    x = np.asarray(x)
    return (x * x).sum(axis=-1)


def hc_scalar(s, n):
    """Embed a real (array) scalar as a hypercomplex array with n components."""
    s = np.asarray(s)
    out = np.zeros(s.shape + (n,), dtype=object if s.dtype == object else float)
    out[..., 0] = s
    return out


def hc_unit(k, n, dtype=float):
    out = np.zeros(n, dtype=dtype)
    if dtype == object:
        out[...] = 0
    out[k] = 1
    return out


def hc_matmul(a, b):
    """Matrix product of hypercomplex matrices of shape (..., m, n, c) @ (..., n, p, c)."""
    a = np.asarray(a)
    b = np.asarray(b)
    prod = hc_mul(a[..., :, :, None, :], b[..., None, :, :, :])
    return prod.sum(axis=-3)


def hc_adjoint(a):
    """Conjugate transpose of a hypercomplex matrix (..., m, n, c)."""
    return hc_conj(np.swapaxes(np.asarray(a), -2, -3))


def hc_transpose(a):
    return np.swapaxes(np.asarray(a), -2, -3)


def hc_trace(a):
    a = np.asarray(a)
    return np.trace(a, axis1=-3, axis2=-2)


def times_i(x):
    """Left multiplication by the unit i in C or H arrays."""
    x = np.asarray(x)
    n = x.shape[-1]
    unit = hc_unit(1, n, dtype=object if x.dtype == object else float)
    return hc_mul(unit, x)
