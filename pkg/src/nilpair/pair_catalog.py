"""Catalog of the pairs (N, K): Table-1 lines, Appendix cases, quotients.

Conventions (fixed here, validated only by the invariance suite):

* real coordinates of C^p are interleaved (re, im) per entry, of H^p and
  O^p grouped by four / eight components, matrices are row-major;
* every z coordinate system is orthonormal for a K-invariant inner product,
  so all a_z are skew.  For the Table-1 lines the scale is chosen so that
  the block-1/2 algebras satisfy |J_z v| = |z||v| exactly;
* ids are ``T1-L<k>`` for Table-1 lines, ``A<k>`` (optionally ``A<k>:<variant>``)
  for Appendix cases and ``Q<k>`` for quotient rows.

Radical dimensions of the degenerate forms omega_{zeta0} in the third block
are r = 1 (line 10), 2 (line 11), 1 (line 12), as forced by the splitting
v = v1 + v2 of each line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

from .composition_algebras import (
    hc_adjoint, hc_conj, hc_matmul, hc_mul, hc_norm2, hc_trace, hc_unit,
)
from .group_actions import (
    ActionElement, GroupElement, linear_map_matrix, g2_basis, null_space, so_basis,
    sp_basis, spin7_basis, su_basis, u_basis, solve_center_action,
)


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# generic array helpers (work for float batches and object arrays)


def _is_obj(x):
    return np.asarray(x).dtype == object


def _zeros(shape, like):
    if _is_obj(like):
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape)


def _shape(x, inner):
    x = np.asarray(x)
    return x.reshape(x.shape[:-1] + tuple(inner))


def _flat(x, k):
    x = np.asarray(x)
    return x.reshape(x.shape[:-k] + (-1,))


def _stack(parts):
    return np.stack([np.asarray(p) for p in parts], axis=-1)


def nsq(x):
    x = np.asarray(x)
    return (x * x).sum(axis=-1)


def _unit(k, n, like):
    return hc_unit(k, n, dtype=object if _is_obj(like) else float)


def _times(x, k):
    """Right multiplication of a hypercomplex array by the basis unit e_k."""
    return hc_mul(x, _unit(k, np.shape(x)[-1], x))


def _rowprod(a, b):
    """sum_k a_k conj(b_k) for hypercomplex rows (..., n, c)."""
    return hc_mul(a, hc_conj(b)).sum(axis=-2)


def _cross3(a, b, mul):
    """Bilinear cross product of arrays (..., 3, *) with a scalar product ``mul``."""
    return _stack_axis([
        mul(a[..., 1, :], b[..., 2, :]) - mul(a[..., 2, :], b[..., 1, :]),
        mul(a[..., 2, :], b[..., 0, :]) - mul(a[..., 0, :], b[..., 2, :]),
        mul(a[..., 0, :], b[..., 1, :]) - mul(a[..., 1, :], b[..., 0, :]),
    ], axis=-2)


def _stack_axis(parts, axis):
    return np.stack([np.asarray(p) for p in parts], axis=axis)


def _re_tr(m):
    return hc_trace(m)[..., 0]


def _pow(m, k):
    out = m
    for _ in range(k - 1):
        out = hc_matmul(out, m)
    return out


def _rpow(m, k):
    out = m
    for _ in range(k - 1):
        out = out @ m
    return out


# ---------------------------------------------------------------------------
# coordinate systems on z (orthonormal for an invariant inner product)


class Coords:
    dim: int = 0
    exact: bool = True

    def to_mat(self, z):
        raise NotImplementedError

    def from_mat(self, m):
        raise NotImplementedError


class ImCoords(Coords):
    """Imaginary part of H or O: z -> (0, z)."""

    def __init__(self, c):
        self.c = c
        self.dim = c - 1

    def to_mat(self, z):
        z = np.asarray(z)
        out = _zeros(z.shape[:-1] + (self.c,), z)
        out[..., 1:] = z
        return out

    def from_mat(self, m):
        return np.asarray(m)[..., 1:]


class Su2Coords(Coords):
    """(a, b, c) -> [[ia, b+ic], [-b+ic, -ia]]."""

    dim = 3

    def to_mat(self, z):
        z = np.asarray(z)
        m = _zeros(z.shape[:-1] + (2, 2, 2), z)
        a, b, c = z[..., 0], z[..., 1], z[..., 2]
        m[..., 0, 0, 1] = a
        m[..., 0, 1, 0] = b
        m[..., 0, 1, 1] = c
        m[..., 1, 0, 0] = -b
        m[..., 1, 0, 1] = c
        m[..., 1, 1, 1] = -a
        return m

    def from_mat(self, m):
        m = np.asarray(m)
        return _stack([(m[..., 0, 0, 1] - m[..., 1, 1, 1]) / 2, m[..., 0, 1, 0], m[..., 0, 1, 1]])


class U2Coords(Coords):
    """(t, a, b, c) -> [[i(t+a), b+ic], [-b+ic, i(t-a)]]."""

    dim = 4

    def to_mat(self, z):
        z = np.asarray(z)
        m = _zeros(z.shape[:-1] + (2, 2, 2), z)
        t, a, b, c = (z[..., k] for k in range(4))
        m[..., 0, 0, 1] = t + a
        m[..., 0, 1, 0] = b
        m[..., 0, 1, 1] = c
        m[..., 1, 0, 0] = -b
        m[..., 1, 0, 1] = c
        m[..., 1, 1, 1] = t - a
        return m

    def from_mat(self, m):
        m = np.asarray(m)
        return _stack([(m[..., 0, 0, 1] + m[..., 1, 1, 1]) / 2, (m[..., 0, 0, 1] - m[..., 1, 1, 1]) / 2,
                       m[..., 0, 1, 0], m[..., 0, 1, 1]])


class HS0H2Coords(Coords):
    """(alpha, q) -> [[alpha, q], [conj q, -alpha]] (trace-free quaternionic Hermitian)."""

    dim = 5

    def to_mat(self, z):
        z = np.asarray(z)
        m = _zeros(z.shape[:-1] + (2, 2, 4), z)
        m[..., 0, 0, 0] = z[..., 0]
        m[..., 1, 1, 0] = -z[..., 0]
        m[..., 0, 1, :] = z[..., 1:5]
        m[..., 1, 0, :] = hc_conj(z[..., 1:5])
        return m

    def from_mat(self, m):
        m = np.asarray(m)
        return np.concatenate([((m[..., 0, 0, 0] - m[..., 1, 1, 0]) / 2)[..., None], m[..., 0, 1, :]], axis=-1)


class SkewCoords(Coords):
    """Skew-symmetric n x n matrices with entries in R (c=1, plain) or C (c=2)."""

    def __init__(self, n, c=1):
        self.n, self.c = n, c
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.dim = len(self.pairs) * c

    def to_mat(self, z):
        z = np.asarray(z)
        n, c = self.n, self.c
        if c == 1:
            m = _zeros(z.shape[:-1] + (n, n), z)
            for k, (i, j) in enumerate(self.pairs):
                m[..., i, j] = z[..., k]
                m[..., j, i] = -z[..., k]
            return m
        m = _zeros(z.shape[:-1] + (n, n, c), z)
        zz = _shape(z, (len(self.pairs), c))
        for k, (i, j) in enumerate(self.pairs):
            m[..., i, j, :] = zz[..., k, :]
            m[..., j, i, :] = -zz[..., k, :]
        return m

    def from_mat(self, m):
        m = np.asarray(m)
        if self.c == 1:
            return _stack([m[..., i, j] for i, j in self.pairs])
        return _flat(_stack_axis([m[..., i, j, :] for i, j in self.pairs], axis=-2), 2)


_R2 = math.sqrt(2.0)


class UnCoords(Coords):
    """u_n, orthonormal for Re tr(z w*): diag i a_j, off-diagonal (b + ic)/sqrt2."""

    exact = False

    def __init__(self, n):
        self.n = n
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.dim = n * n

    def to_mat(self, z):
        z = np.asarray(z)
        n = self.n
        m = _zeros(z.shape[:-1] + (n, n, 2), z)
        for j in range(n):
            m[..., j, j, 1] = z[..., j]
        for k, (i, j) in enumerate(self.pairs):
            b, c = z[..., n + 2 * k] / _R2, z[..., n + 2 * k + 1] / _R2
            m[..., i, j, 0], m[..., i, j, 1] = b, c
            m[..., j, i, 0], m[..., j, i, 1] = -b, c
        return m

    def from_mat(self, m):
        m = np.asarray(m)
        parts = [m[..., j, j, 1] for j in range(self.n)]
        for i, j in self.pairs:
            parts += [_R2 * m[..., i, j, 0], _R2 * m[..., i, j, 1]]
        return _stack(parts)


class SpCoords(Coords):
    """sp_n (quaternionic skew-Hermitian), orthonormal for Re tr(z w*)."""

    exact = False

    def __init__(self, n):
        self.n = n
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.dim = n * (2 * n + 1)

    def to_mat(self, z):
        z = np.asarray(z)
        n = self.n
        m = _zeros(z.shape[:-1] + (n, n, 4), z)
        for j in range(n):
            m[..., j, j, 1:] = z[..., 3 * j:3 * j + 3]
        off = 3 * n
        for k, (i, j) in enumerate(self.pairs):
            q = z[..., off + 4 * k: off + 4 * k + 4] / _R2
            m[..., i, j, :] = q
            m[..., j, i, :] = -hc_conj(q)
        return m

    def from_mat(self, m):
        m = np.asarray(m)
        parts = [m[..., j, j, 1:] for j in range(self.n)]
        parts += [_R2 * m[..., i, j, :] for i, j in self.pairs]
        return np.concatenate(parts, axis=-1)


class HS0HnCoords(Coords):
    """Trace-free quaternionic Hermitian n x n, orthonormal for tr(z w)."""

    exact = False

    def __init__(self, n):
        self.n = n
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        h = np.zeros((n - 1, n))
        for m in range(1, n):
            h[m - 1, :m] = 1.0
            h[m - 1, m] = -m
            h[m - 1] /= math.sqrt(m * (m + 1))
        self.helmert = h
        self.dim = (n - 1) + 4 * len(self.pairs)

    def to_mat(self, z):
        z = np.asarray(z)
        n = self.n
        m = _zeros(z.shape[:-1] + (n, n, 4), z)
        diag = z[..., : n - 1] @ self.helmert
        for j in range(n):
            m[..., j, j, 0] = diag[..., j]
        off = n - 1
        for k, (i, j) in enumerate(self.pairs):
            q = z[..., off + 4 * k: off + 4 * k + 4] / _R2
            m[..., i, j, :] = q
            m[..., j, i, :] = hc_conj(q)
        return m

    def from_mat(self, m):
        m = np.asarray(m)
        diag = _stack([m[..., j, j, 0] for j in range(self.n)])
        parts = [diag @ self.helmert.T]
        parts += [_R2 * m[..., i, j, :] for i, j in self.pairs]
        return np.concatenate(parts, axis=-1)


def _sub_coords_join(parts):
    return np.concatenate([np.asarray(p) for p in parts], axis=-1)


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class HilbertEntry:
    name: str
    func: Callable
    bidegree: tuple
    family: str = ""
    restricts_to: tuple | None = None

    @property
    def gamma(self) -> int:
        return self.bidegree[0] + 2 * self.bidegree[1]


@dataclass(frozen=True, eq=False)
class CaseDescriptor:
    id: str
    dim_v: int
    dim_z: int
    gen_factory: Callable = field(repr=False)
    hilbert_basis: tuple = ()
    bracket: Callable | None = field(default=None, repr=False)
    discrete_elements: tuple = ()
    block: int | None = None
    n_param: int | None = None
    variant: str | None = None
    group: str = ""
    exact: bool = False
    z_coords: Coords | None = field(default=None, repr=False)
    notes: str = ""

    @cached_property
    def generators(self) -> tuple:
        return tuple(self.gen_factory())

    @property
    def d(self) -> int:
        return len(self.hilbert_basis)

    @property
    def key(self) -> str:
        s = self.id if self.variant is None else f"{self.id}:{self.variant}"
        return s if self.n_param is None else f"{s}[n={self.n_param}]"

    @property
    def bidegrees(self):
        return [tuple(h.bidegree) for h in self.hilbert_basis]

    def eval_hilbert(self, v, z):
        return _stack([h.func(np.asarray(v), np.asarray(z)) for h in self.hilbert_basis])


@dataclass(frozen=True, eq=False)
class QuotientDescriptor:
    line: int
    parent: CaseDescriptor
    zeta0: tuple
    v_split: tuple
    rho_v_prime: tuple
    radical: int = 0
    k0: str = ""

    @property
    def d(self) -> int:
        return len(self.rho_v_prime) + 1

    def zeta0_array(self):
        return np.array([float(x) for x in self.zeta0])

    def eval_rho_prime(self, v, t):
        v = np.asarray(v)
        parts = [h.func(v) for h in self.rho_v_prime]
        parts.append(np.asarray(t))
        return _stack(parts)


@dataclass(frozen=True)
class PrimeEntry:
    name: str
    func: Callable
    degree: int


# ---------------------------------------------------------------------------
# generator factories


def _act_v(fn, dim_v):
    return linear_map_matrix(fn, dim_v) if dim_v else np.zeros((0, 0))


def _gens(pairs):
    return [ActionElement(np.asarray(a, dtype=float), np.asarray(b, dtype=float)) for a, b in pairs]


def _zero(n):
    return np.zeros((n, n))


def _conj_action(coords: Coords, X):
    """a_z for z -> k z k^*, i.e. dz = X z - z X (X a matrix or a scalar unit)."""
    mul = hc_mul if np.ndim(X) == 1 else hc_matmul

    def f(z):
        m = coords.to_mat(z)
        return coords.from_mat(mul(X, m) - mul(m, X))
    return linear_map_matrix(f, coords.dim)


def _right_scalar_action(c, shape, X):
    """v -> v k^*, k = exp(tX), with X imaginary unit, on entries of shape."""
    def f(v):
        V = _shape(v, shape + (c,))
        return _flat(-hc_mul(V, X), len(shape) + 1)
    return f


def _left_matrix_action(shape, X):
    def f(v):
        V = _shape(v, shape)
        return _flat(hc_matmul(X, V), len(shape))
    return f


def _right_matrix_action(shape, X):
    """v -> v k^*: dv = -v X."""
    def f(v):
        V = _shape(v, shape)
        return _flat(-hc_matmul(V, X), len(shape))
    return f


def _rotation_rows(v, rows_dim):
    """SO2 generator on R^2 (x) W with W of real dim rows_dim: (v1, v2) -> (-v2, v1)."""
    v = np.asarray(v)
    v1, v2 = v[..., :rows_dim], v[..., rows_dim:]
    return np.concatenate([-v2, v1], axis=-1)


def _scalar_phase(shape, c=2):
    """dv = i v on complex arrays."""
    def f(v):
        V = _shape(v, shape + (c,))
        return _flat(hc_mul(_unit(1, c, V), V), len(shape) + 1)
    return f


def _complex_sp_basis(n):
    """Compact sp_n inside u_{2n} preserving the form  t v J u  (J standard)."""
    m = 2 * n
    J = np.zeros((m, m, 2))
    J[:n, n:, 0] = np.eye(n)
    J[n:, :n, 0] = -np.eye(n)
    basis = u_basis(m)

    def constraint(X):
        c = hc_matmul(np.swapaxes(X, 0, 1), J) + hc_matmul(J, X)
        return c.ravel()

    A = np.column_stack([constraint(b) for b in basis])
    kern = null_space(A)
    return [sum(c * b for c, b in zip(kern[:, k], basis)) for k in range(kern.shape[1])]


# ---------------------------------------------------------------------------
# brackets


def _br_line1(n):
    def br(v, u):
        V, U = _shape(v, (2 * n, 2)), _shape(u, (2 * n, 2))
        s = (hc_mul(V[..., :n, :], U[..., n:, :]) - hc_mul(V[..., n:, :], U[..., :n, :])).sum(axis=-2)
        return s
    return br


def _br_quat_col(n):
    """Im(v^* u) for quaternionic columns."""
    def br(v, u):
        V, U = _shape(v, (n, 1, 4)), _shape(u, (n, 1, 4))
        return hc_matmul(hc_adjoint(V), U)[..., 0, 0, 1:]
    return br


def _br_oct(v, u):
    """Im(v u^*) on O (also used on Im O)."""
    v, u = np.asarray(v), np.asarray(u)
    if v.shape[-1] == 7:
        v = ImCoords(8).to_mat(v)
        u = ImCoords(8).to_mat(u)
    return hc_mul(v, hc_conj(u))[..., 1:]


def _br_u2_block(p):
    coords = Su2Coords()

    def br(v, u):
        V, U = _shape(v, (2, p, 2)), _shape(u, (2, p, 2))
        W = hc_matmul(V, hc_adjoint(U)) - hc_matmul(U, hc_adjoint(V))
        return coords.from_mat(W)
    return br


def _br_line5(v, u):
    V, U = _shape(v, (2, 1, 4)), _shape(u, (2, 1, 4))
    W = hc_matmul(_times(V, 1), hc_adjoint(U)) - hc_matmul(_times(U, 1), hc_adjoint(V))
    return HS0H2Coords().from_mat(W)


def _br_rows(n, c):
    """-(1/2)(v1u1* - u1v1* + v2u2* - u2v2*) = -Im(v1u1* + v2u2*) for rows over H or O."""
    def br(v, u):
        V, U = _shape(v, (2, n, c)), _shape(u, (2, n, c))
        s = _rowprod(V[..., 0, :, :], U[..., 0, :, :]) + _rowprod(V[..., 1, :, :], U[..., 1, :, :])
        return -s[..., 1:]
    return br


def _br_cross_real(v, u):
    v, u = np.asarray(v), np.asarray(u)
    return _stack([v[..., 1] * u[..., 2] - v[..., 2] * u[..., 1],
                   v[..., 2] * u[..., 0] - v[..., 0] * u[..., 2],
                   v[..., 0] * u[..., 1] - v[..., 1] * u[..., 0]])


def _br_cross_complex(v, u):
    V, U = _shape(v, (3, 2)), _shape(u, (3, 2))
    return _flat(_cross3(V, U, hc_mul), 2)


# ---------------------------------------------------------------------------
# Table 1


def _h(name, func, bideg, family="", restricts_to=None):
    return HilbertEntry(name, func, tuple(bideg), family, restricts_to)


def _p(name, func, degree):
    return PrimeEntry(name, func, degree)


def _nv(v, z=None):
    return nsq(v)


def _nz(v, z):
    return nsq(z)


def _sub_nsq(k0, k1):
    return lambda v: nsq(np.asarray(v)[..., k0:k1])


def _diff_halves(dim_v):
    h = dim_v // 2
    return lambda v: nsq(np.asarray(v)[..., :h]) - nsq(np.asarray(v)[..., h:])


def _line1(n):
    dim_v, dim_z = 4 * n, 2

    def gens():
        out = []
        for X in _complex_sp_basis(n):
            out.append((_act_v(_left_matrix_action((2 * n, 1, 2), X), dim_v), _zero(2)))
        a_v = _act_v(_scalar_phase((2 * n,)), dim_v)
        a_z = 2 * np.array([[0.0, -1.0], [1.0, 0.0]])
        out.append((a_v, a_z))
        return _gens(out)

    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)), _h("|z|^2", _nz, (0, 2), "Delta", (1, 1)))
    return dict(dim_v=dim_v, dim_z=dim_z, gen_factory=gens, hilbert_basis=hb, bracket=_br_line1(n),
                block=1, group=f"U1 x Sp{n}", exact=True, z_coords=None)


def _line2(n):
    dim_v, dim_z = 4 * n, 3
    coords = ImCoords(4)

    def gens():
        out = []
        for X in [_unit(k, 4, np.zeros(1)) for k in (1, 2, 3)]:
            out.append((_act_v(_right_scalar_action(4, (n,), X), dim_v), _conj_action(coords, X)))
        for X in sp_basis(n):
            out.append((_act_v(_left_matrix_action((n, 1, 4), X), dim_v), _zero(3)))
        return _gens(out)

    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)), _h("|z|^2", _nz, (0, 2), "Delta", (1, 1)))
    return dict(dim_v=dim_v, dim_z=dim_z, gen_factory=gens, hilbert_basis=hb, bracket=_br_quat_col(n),
                block=1, group=f"Sp1 x Sp{n}", exact=True)


def _spin7_gens(copies=1, extra=()):
    out = []
    for L in spin7_basis():
        a_v = np.kron(np.eye(copies), L)
        ca = solve_center_action(L, _br_oct, 8, 7)
        out.append((a_v, ca.a_z))
    out.extend(extra)
    return _gens(out)


def _line3():
    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)), _h("|z|^2", _nz, (0, 2), "Delta", (1, 1)))
    return dict(dim_v=8, dim_z=7, gen_factory=lambda: _spin7_gens(), hilbert_basis=hb, bracket=_br_oct,
                block=1, group="Spin7", exact=True)


def _u2_block_case(p, left, right, group):
    """Lines 4, 6, 7: v = 2 x p complex, z in su2, k.(v,z) = (k1 v k2^*, k1 z k1^*)."""
    dim_v, dim_z = 4 * p, 3
    coords = Su2Coords()

    def gens():
        out = []
        for X in left:
            out.append((_act_v(_left_matrix_action((2, p, 2), X), dim_v), _conj_action(coords, X)))
        for X in right:
            out.append((_act_v(_right_matrix_action((2, p, 2), X), dim_v), _zero(3)))
        return _gens(out)

    return dim_v, dim_z, coords, gens


def _mixed_u2(p, coords=None):
    coords = coords or Su2Coords()

    def f(v, z):
        V = _shape(v, (2, p, 2))
        Z = coords.to_mat(z)
        s = hc_trace(hc_matmul(hc_adjoint(V), hc_matmul(Z, V)))
        return -s[..., 1]  # Re(i s)
    return f


def _quartic_c(p):
    def f(v, z=None):
        V = _shape(v, (2, p, 2))
        A = hc_matmul(hc_adjoint(V), V)
        return _re_tr(hc_matmul(A, A))
    return f


def _line4():
    dim_v, dim_z, coords, gens = _u2_block_case(1, u_basis(2), [], "U2")
    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("i v^* z v", _mixed_u2(1), (2, 1), "M", (1, 2)),
          _h("|z|^2", _nz, (0, 2), "Delta", (2, 2)))
    return dict(dim_v=dim_v, dim_z=dim_z, gen_factory=gens, hilbert_basis=hb, bracket=_br_u2_block(1),
                block=2, group="U2", exact=True, z_coords=coords)


def _line5():
    coords = HS0H2Coords()

    def gens():
        out = []
        for X in sp_basis(2):
            out.append((_act_v(_left_matrix_action((2, 1, 4), X), 8), _conj_action(coords, X)))
        return _gens(out)

    def mixed(v, z):
        V = _shape(v, (2, 1, 4))
        return hc_matmul(hc_adjoint(V), hc_matmul(coords.to_mat(z), V))[..., 0, 0, 0]

    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("v^* z v", mixed, (2, 1), "M", (1, 2)),
          _h("|z|^2", _nz, (0, 2), "Delta", (2, 2)))
    return dict(dim_v=8, dim_z=5, gen_factory=gens, hilbert_basis=hb, bracket=_br_line5,
                block=2, group="Sp2", exact=True, z_coords=coords)


def _line67(p, left, right, group):
    dim_v, dim_z, coords, gens = _u2_block_case(p, left, right, group)
    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("tr((v^* v)^2)", _quartic_c(p), (4, 0), "L", (1,)),
          _h("i tr(v^* z v)", _mixed_u2(p), (2, 1), "M", (2, 3)),
          _h("|z|^2", _nz, (0, 2), "Delta", (3, 3)))
    return dict(dim_v=dim_v, dim_z=dim_z, gen_factory=gens, hilbert_basis=hb, bracket=_br_u2_block(p),
                block=2, group=group, exact=True, z_coords=coords)


def _rows_invariants(n, c):
    """Invariants of v = (v1; v2), rows over H (c=4) or O (n=1, c=8)."""

    def split(v):
        V = _shape(v, (2, n, c))
        return V[..., 0, :, :], V[..., 1, :, :]

    def quartic(v, z=None):
        a, b = split(v)
        return nsq(_flat(a, 2)) ** 2 + 2 * hc_norm2(_rowprod(a, b)) + nsq(_flat(b, 2)) ** 2

    def gram(v, z=None):
        a, b = split(v)
        return nsq(_flat(a, 2)) * nsq(_flat(b, 2)) - _rowprod(a, b)[..., 0] ** 2

    def skew_part(v):
        a, b = split(v)
        return _rowprod(a, b) - _rowprod(b, a)

    def mixed(v, z):
        w = skew_part(v)
        return hc_mul(w, ImCoords(c).to_mat(z))[..., 0]

    def mixed_at(zeta):
        def f(v):
            w = skew_part(v)
            zz = np.array(zeta, dtype=object if _is_obj(w) else float)
            return hc_mul(w, ImCoords(c).to_mat(zz))[..., 0]
        return f

    return quartic, gram, mixed, mixed_at


def _line8(n):
    dim_v, dim_z = 8 * n, 3
    coords = ImCoords(4)

    def gens():
        out = []
        for X in [_unit(k, 4, np.zeros(1)) for k in (1, 2, 3)]:
            def f(v, X=X):
                V = _shape(v, (2, n, 4))
                return _flat(hc_mul(X, V), 3)
            out.append((_act_v(f, dim_v), _conj_action(coords, X)))
        for X in sp_basis(n):
            out.append((_act_v(_right_matrix_action((2, n, 4), X), dim_v), _zero(3)))
        out.append((_act_v(lambda v: _rotation_rows(v, 4 * n), dim_v), _zero(3)))
        return _gens(out)

    quartic, gram, mixed, _ = _rows_invariants(n, 4)
    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("|v1|^4+2|v1v2^*|^2+|v2|^4", quartic, (4, 0), "L", (1,)),
          _h("|v1|^2|v2|^2-(Re v1v2^*)^2", gram, (4, 0), "L", (2,)),
          _h("Re((v1v2^*-v2v1^*)z)", mixed, (2, 1), "M", (3, 4)),
          _h("|z|^2", _nz, (0, 2), "Delta", (4, 4)))
    return dict(dim_v=dim_v, dim_z=dim_z, gen_factory=gens, hilbert_basis=hb, bracket=_br_rows(n, 4),
                block=2, group=f"SO2 x Sp1 x Sp{n}", exact=True, z_coords=coords)


def _line9():
    rot = (_act_v(lambda v: _rotation_rows(v, 8), 16), _zero(7))
    _, gram, mixed, _ = _rows_invariants(1, 8)
    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("|v1|^2|v2|^2-(Re v1v2^*)^2", gram, (4, 0), "L", (1,)),
          _h("Re((v1v2^*-v2v1^*)z)", mixed, (2, 1), "M", (2, 3)),
          _h("|z|^2", _nz, (0, 2), "Delta", (3, 3)))
    return dict(dim_v=16, dim_z=7, gen_factory=lambda: _spin7_gens(2, [rot]), hilbert_basis=hb,
                bracket=_br_rows(1, 8), block=2, group="SO2 x Spin7", exact=True)


def _dot(v, z):
    return (np.asarray(v) * np.asarray(z)).sum(axis=-1)


def _line10():
    def gens():
        return _gens([(X, X) for X in so_basis(3)])

    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("t v z", _dot, (1, 1), "M", (1, 2)),
          _h("|z|^2", _nz, (0, 2), "Delta", (2, 2)))
    return dict(dim_v=3, dim_z=3, gen_factory=gens, hilbert_basis=hb, bracket=_br_cross_real,
                block=3, group="SO3", exact=True)


def _line11():
    def gens():
        out = []
        for X in su_basis(3):
            Xc = hc_conj(X)
            out.append((_act_v(_left_matrix_action((3, 1, 2), X), 6),
                        _act_v(_left_matrix_action((3, 1, 2), Xc), 6)))
        return _gens(out)

    def tvz(v, z):
        return hc_mul(_shape(v, (3, 2)), _shape(z, (3, 2))).sum(axis=-2)

    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("Re(t v z)", lambda v, z: tvz(v, z)[..., 0], (1, 1), "M", (1, 3)),
          _h("Im(t v z)", lambda v, z: tvz(v, z)[..., 1], (1, 1), "M", (2, 3)),
          _h("|z|^2", _nz, (0, 2), "Delta", (3, 3)))
    return dict(dim_v=6, dim_z=6, gen_factory=gens, hilbert_basis=hb, bracket=_br_cross_complex,
                block=3, group="SU3", exact=True)


def _line12():
    def gens():
        return _gens([(D, D) for D in g2_basis()])

    hb = (_h("|v|^2", _nv, (2, 0), "L", (0,)),
          _h("t v z", _dot, (1, 1), "M", (1, 2)),
          _h("|z|^2", _nz, (0, 2), "Delta", (2, 2)))
    return dict(dim_v=7, dim_z=7, gen_factory=gens, hilbert_basis=hb, bracket=_br_oct,
                block=3, group="G2", exact=True)


TABLE1_NMIN = {1: 1, 2: 1, 7: 3, 8: 2}


def _table1(line: int, n: int | None):
    if line == 1:
        return _line1(n)
    if line == 2:
        return _line2(n)
    if line == 3:
        return _line3()
    if line == 4:
        return _line4()
    if line == 5:
        return _line5()
    if line == 6:
        return _line67(2, u_basis(2), su_basis(2), "U2 x SU2")
    if line == 7:
        return _line67(n, su_basis(2), su_basis(n), f"SU2 x SU{n}")
    if line == 8:
        return _line8(n)
    if line == 9:
        return _line9()
    if line == 10:
        return _line10()
    if line == 11:
        return _line11()
    if line == 12:
        return _line12()
    raise CatalogError(f"no Table-1 line {line}")


# ---------------------------------------------------------------------------
# quotients (Table 3)


def _quotient_spec(line: int, n: int | None):
    nv = _p("|v|^2", lambda v: nsq(v), 2)
    if line == 1:
        return dict(zeta0=(1, 0), v_split=(4 * n,), rho=(nv,), radical=0, k0=f"Sp{n}")
    if line == 2:
        return dict(zeta0=(1, 0, 0), v_split=(4 * n,), rho=(nv,), radical=0, k0=f"U1 x Sp{n}")
    if line == 3:
        return dict(zeta0=(0,) * 6 + (1,), v_split=(8,), rho=(nv,), radical=0, k0="SU4")
    if line in (4, 5):
        dv = 4 if line == 4 else 8
        zeta = (-1, 0, 0) if line == 4 else (1, 0, 0, 0, 0)
        return dict(zeta0=zeta, v_split=(dv // 2, dv // 2),
                    rho=(nv, _p("|v1|^2-|v2|^2", _diff_halves(dv), 2)), radical=0,
                    k0="U1 x U1" if line == 4 else "Sp1 x Sp1")
    if line in (6, 7):
        p = 2 if line == 6 else n
        return dict(zeta0=(-1, 0, 0), v_split=(2 * p, 2 * p),
                    rho=(nv, _p("tr((v^* v)^2)", _quartic_c(p), 4),
                         _p("|v1|^2-|v2|^2", _diff_halves(4 * p), 2)), radical=0,
                    k0="U1 x U1 x SU2" if line == 6 else f"S(U1 x U1) x SU{p}")
    if line == 8:
        quartic, gram, _, mixed_at = _rows_invariants(n, 4)
        zeta = (1, 0, 0)
        return dict(zeta0=zeta, v_split=(4 * n, 4 * n),
                    rho=(nv, _p("|v1|^4+2|v1v2^*|^2+|v2|^4", quartic, 4),
                         _p("|v1|^2|v2|^2-(Re(v1,v2))^2", gram, 4),
                         _p("-2 Im(v1,v2)", mixed_at(zeta), 2)), radical=0, k0=f"U1 x U1 x Sp{n}")
    if line == 9:
        _, gram, _, mixed_at = _rows_invariants(1, 8)
        zeta = (0,) * 6 + (1,)
        return dict(zeta0=zeta, v_split=(8, 8),
                    rho=(nv, _p("|v1|^2|v2|^2-(Re(v1,v2))^2", gram, 4),
                         _p("-2 Im(v1,v2)", mixed_at(zeta), 2)), radical=0, k0="U1 x SU4")
    if line == 10:
        return dict(zeta0=(0, 0, 1), v_split=(2, 1),
                    rho=(nv, _p("v3", lambda v: np.asarray(v)[..., 2], 1)), radical=1, k0="U1")
    if line == 11:
        return dict(zeta0=(0, 0, 0, 0, 1, 0), v_split=(4, 2),
                    rho=(nv, _p("Re v3", lambda v: np.asarray(v)[..., 4], 1),
                         _p("Im v3", lambda v: np.asarray(v)[..., 5], 1)), radical=2, k0="SU2")
    if line == 12:
        return dict(zeta0=(0,) * 6 + (1,), v_split=(6, 1),
                    rho=(nv, _p("v7", lambda v: np.asarray(v)[..., 6], 1)), radical=1, k0="SU3")
    raise CatalogError(f"no quotient for line {line}")


# ---------------------------------------------------------------------------
# Appendix cases


def _pf_entries(m):
    from .invariant_engine import pfaffian
    return pfaffian(m)


def _complexify(x):
    """hypercomplex (..., 2) -> scalar complex array (float) or object GaussQ-valued."""
    x = np.asarray(x)
    if x.dtype == object:
        from .composition_algebras import I
        return x[..., 0] + I * x[..., 1]
    return x[..., 0] + 1j * x[..., 1]


def _real_part(s):
    s = np.asarray(s)
    if s.dtype == object:
        return np.vectorize(lambda e: e.real_part() if hasattr(e, "real_part") else (e.real if hasattr(e, "real") else e), otypes=[object])(s)
    return s.real


def _imag_part(s):
    s = np.asarray(s)
    if s.dtype == object:
        return np.vectorize(lambda e: e.imag_part() if hasattr(e, "imag_part") else (e.imag if hasattr(e, "imag") else 0), otypes=[object])(s)
    return s.imag


def _bordered_real(Z, v):
    from .invariant_engine import bordered
    return bordered(Z, v)


def _app1(n, variant):
    coords = SkewCoords(n)
    l = n // 2

    def gens():
        return _gens([(X, linear_map_matrix(lambda z, X=X: coords.from_mat(X @ coords.to_mat(z) - coords.to_mat(z) @ X), coords.dim))
                      for X in so_basis(n)])

    def trz(k):
        return lambda v, z: np.trace(_rpow(coords.to_mat(z), 2 * k), axis1=-2, axis2=-1)

    def vzv(k):
        def f(v, z):
            v = np.asarray(v)
            if k == 0:
                return nsq(v)
            w = (_rpow(coords.to_mat(z), 2 * k) @ v[..., :, None])[..., 0]
            return (v * w).sum(axis=-1)
        return f

    hb = []
    if variant == "SO":
        if n % 2 == 0:
            hb += [_h(f"tr(z^{2*k})", trz(k), (0, 2 * k)) for k in range(1, l)]
            hb.append(_h("Pf(z)", lambda v, z: _pf_entries(coords.to_mat(z)), (0, l)))
            hb += [_h(f"t v z^{2*k} v", vzv(k), (2, 2 * k)) for k in range(0, l)]
        else:
            hb += [_h(f"tr(z^{2*k})", trz(k), (0, 2 * k)) for k in range(1, l + 1)]
            hb += [_h(f"t v z^{2*k} v", vzv(k), (2, 2 * k)) for k in range(0, l)]
            hb.append(_h("Pf(z|v)", lambda v, z: _pf_entries(_bordered_real(coords.to_mat(z), np.asarray(v))), (1, l)))
        discrete = ()
    else:
        hb += [_h(f"tr(z^{2*k})", trz(k), (0, 2 * k)) for k in range(1, n // 2 + 1)]
        hb += [_h(f"t v z^{2*k} v", vzv(k), (2, 2 * k)) for k in range(0, (n - 1) // 2 + 1)]
        R = np.eye(n)
        R[0, 0] = -1.0
        gz = linear_map_matrix(lambda z: coords.from_mat(R @ coords.to_mat(z) @ R.T), coords.dim)
        discrete = (GroupElement(R, gz),)
    return dict(dim_v=n, dim_z=coords.dim, gen_factory=gens, hilbert_basis=tuple(hb),
                discrete_elements=discrete, group=f"{variant}{n}", exact=True, z_coords=coords)


def _app2():
    d = _line3()
    d.update(block=None, group="Spin7")
    return d


def _app3():
    d = _line12()
    d.update(block=None, bracket=None, group="G2")
    hb = (_h("|v|^2", _nv, (2, 0)), _h("t v z", _dot, (1, 1)), _h("|z|^2", _nz, (0, 2)))
    d["hilbert_basis"] = hb
    return d


def _phase_element(shape_v, v_fn, coords, z_fn, dim_v, theta=0.7):
    g_v = linear_map_matrix(v_fn, dim_v)
    g_z = linear_map_matrix(z_fn, coords.dim) if coords is not None else np.eye(0)
    return GroupElement(g_v, g_z)


def _app45(n, variant):
    coords = SkewCoords(n, 2)
    dim_v = 2 * n

    def z_act(X):
        def f(z):
            Z = coords.to_mat(z)
            return coords.from_mat(hc_matmul(X, Z) + hc_matmul(Z, np.swapaxes(X, 0, 1)))
        return f

    def gens():
        basis = u_basis(n) if variant == "U" else su_basis(n)
        return _gens([(_act_v(_left_matrix_action((n, 1, 2), X), dim_v), linear_map_matrix(z_act(X), coords.dim))
                      for X in basis])

    def C(v):
        return _shape(v, (n, 1, 2))

    def zbz(z):
        Z = coords.to_mat(z)
        return hc_matmul(hc_conj(Z), Z)

    def tr_zbz(k):
        return lambda v, z: _re_tr(_pow(zbz(z), k))

    def vzzv(k):
        def f(v, z):
            if k == 0:
                return nsq(v)
            Z = coords.to_mat(z)
            M = _pow(hc_matmul(Z, hc_conj(Z)), k)
            return hc_matmul(hc_adjoint(C(v)), hc_matmul(M, C(v)))[..., 0, 0, 0]
        return f

    def pf(z):
        return _pf_entries(_complexify(coords.to_mat(z)))

    def pf_b(v, z):
        return _pf_entries(_bordered_complex(_complexify(coords.to_mat(z)), _complexify(_shape(v, (n, 2)))))

    hb = []
    if n == 2:
        if variant == "U":
            hb = [_h("|v|^2", _nv, (2, 0)), _h("|z|^2", _nz, (0, 2))]
        else:
            hb = [_h("|v|^2", _nv, (2, 0)), _h("Re z", lambda v, z: np.asarray(z)[..., 0], (0, 1)),
                  _h("Im z", lambda v, z: np.asarray(z)[..., 1], (0, 1))]
    elif variant == "U":
        hb += [_h(f"tr((zbar z)^{k})", tr_zbz(k), (0, 2 * k)) for k in range(1, n // 2 + 1)]
        hb += [_h(f"v^*(z zbar)^{k} v", vzzv(k), (2, 2 * k)) for k in range(0, (n - 1) // 2 + 1)]
    elif n % 2 == 0:
        l = n // 2
        hb += [_h(f"tr((zbar z)^{k})", tr_zbz(k), (0, 2 * k)) for k in range(1, l)]
        hb += [_h("Re Pf(z)", lambda v, z: _real_part(pf(z)), (0, l)),
               _h("Im Pf(z)", lambda v, z: _imag_part(pf(z)), (0, l))]
        hb += [_h(f"v^*(z zbar)^{k} v", vzzv(k), (2, 2 * k)) for k in range(0, (n - 1) // 2 + 1)]
    else:
        l = n // 2
        hb += [_h(f"tr((zbar z)^{k})", tr_zbz(k), (0, 2 * k)) for k in range(1, n // 2 + 1)]
        hb += [_h(f"v^*(z zbar)^{k} v", vzzv(k), (2, 2 * k)) for k in range(0, l)]
        hb += [_h("Re Pf(z|v)", lambda v, z: _real_part(pf_b(v, z)), (1, l)),
               _h("Im Pf(z|v)", lambda v, z: _imag_part(pf_b(v, z)), (1, l))]

    discrete = ()
    if variant == "U":
        ph = np.zeros((n, n, 2))
        ph[..., 0] = np.eye(n)
        ph[0, 0] = [math.cos(0.7), math.sin(0.7)]
        g_v = linear_map_matrix(lambda v: _flat(hc_matmul(ph, C(v)), 3), dim_v)
        g_z = linear_map_matrix(lambda z: coords.from_mat(hc_matmul(hc_matmul(ph, coords.to_mat(z)), np.swapaxes(ph, 0, 1))), coords.dim)
        discrete = (GroupElement(g_v, g_z),)
    return dict(dim_v=dim_v, dim_z=coords.dim, gen_factory=gens, hilbert_basis=tuple(hb),
                discrete_elements=discrete, group=f"{variant}{n}", exact=True, z_coords=coords)


def _bordered_complex(Z, v):
    from .invariant_engine import bordered
    return bordered(Z, v)


def _app6(n):
    coords = UnCoords(n)
    dim_v = 2 * n

    def gens():
        return _gens([(_act_v(_left_matrix_action((n, 1, 2), X), dim_v), _conj_action(coords, X))
                      for X in u_basis(n)])

    def ipow(k):
        # i^k as hypercomplex unit
        return np.array([[1, 0], [0, 1], [-1, 0], [0, -1]][k % 4], dtype=float)

    def trk(k):
        return lambda v, z: hc_mul(ipow(k), hc_trace(_pow(coords.to_mat(z), k)))[..., 0]

    def vzk(k):
        def f(v, z):
            if k == 0:
                return nsq(v)
            V = _shape(v, (n, 1, 2))
            s = hc_matmul(hc_adjoint(V), hc_matmul(_pow(coords.to_mat(z), k), V))[..., 0, 0, :]
            return hc_mul(ipow(k), s)[..., 0]
        return f

    hb = [_h(f"i^{k} tr(z^{k})", trk(k), (0, k)) for k in range(1, n + 1)]
    hb += [_h(f"i^{k} v^* z^{k} v", vzk(k), (2, k)) for k in range(0, n)]
    return dict(dim_v=dim_v, dim_z=coords.dim, gen_factory=gens, hilbert_basis=tuple(hb),
                group=f"U{n}", exact=False, z_coords=coords)


def _app7(n, variant):
    hs = HS0HnCoords(n)
    dim_v = 4 * n
    dim_hs = hs.dim
    dim_z = dim_hs + 3
    im = ImCoords(4)

    def gens():
        out = []
        for X in sp_basis(n):
            a_z = np.zeros((dim_z, dim_z))
            a_z[:dim_hs, :dim_hs] = _conj_action(hs, X)
            out.append((_act_v(_left_matrix_action((n, 1, 4), X), dim_v), a_z))
        if variant == "U1":
            X = _unit(1, 4, np.zeros(1))
            a_z = np.zeros((dim_z, dim_z))
            a_z[dim_hs:, dim_hs:] = _conj_action(im, X)
            out.append((_act_v(_right_scalar_action(4, (n,), X), dim_v), a_z))
        return _gens(out)

    def Z(z):
        return hs.to_mat(np.asarray(z)[..., :dim_hs])

    def trk(k):
        return lambda v, z: _re_tr(_pow(Z(z), k))

    def vzk(k):
        def f(v, z):
            if k == 0:
                return nsq(v)
            V = _shape(v, (n, 1, 4))
            return hc_matmul(hc_adjoint(V), hc_matmul(_pow(Z(z), k), V))[..., 0, 0, 0]
        return f

    def lin(k):
        return lambda v, z: np.asarray(z)[..., dim_hs + k]

    hb = [_h(f"tr(z^{k})", trk(k), (0, k)) for k in range(2, n + 1)]
    hb += [_h(f"v^* z^{k} v", vzk(k), (2, k)) for k in range(0, n)]
    if variant == "U1":
        hb += [_h("a", lin(0), (0, 1)),
               _h("b^2+c^2", lambda v, z: np.asarray(z)[..., dim_hs + 1] ** 2 + np.asarray(z)[..., dim_hs + 2] ** 2, (0, 2))]
    else:
        hb += [_h("a", lin(0), (0, 1)), _h("b", lin(1), (0, 1)), _h("c", lin(2), (0, 1))]
    return dict(dim_v=dim_v, dim_z=dim_z, gen_factory=gens, hilbert_basis=tuple(hb),
                group=("U1 x " if variant == "U1" else "") + f"Sp{n}", exact=False)


def _app8():
    rot = (_act_v(lambda v: _rotation_rows(v, 8), 16), _zero(7))
    _, gram, mixed, _ = _rows_invariants(1, 8)

    def re_z_v1v2bar(v, z):
        v = np.asarray(v)
        w = hc_mul(v[..., :8], hc_conj(v[..., 8:]))
        return hc_mul(ImCoords(8).to_mat(z), w)[..., 0]

    hb = (_h("|z|^2", _nz, (0, 2)), _h("|v|^2", _nv, (2, 0)),
          _h("Re(z(v1 v2bar))", re_z_v1v2bar, (2, 1)), _h("|v1|^2|v2|^2-(Re v1v2bar)^2", gram, (4, 0)))
    return dict(dim_v=16, dim_z=7, gen_factory=lambda: _spin7_gens(2, [rot]), hilbert_basis=hb,
                bracket=_br_rows(1, 8), group="U1 x Spin7", exact=True)


def _app9(n):
    d = _line2(n)
    d.update(block=None)
    return d


def _app10(n):
    coords = SpCoords(2)
    dim_v = 8 * n

    def gens():
        out = []
        for X in sp_basis(2):
            out.append((_act_v(_left_matrix_action((2, n, 4), X), dim_v), _conj_action(coords, X)))
        for X in sp_basis(n):
            out.append((_act_v(_right_matrix_action((2, n, 4), X), dim_v), _zero(coords.dim)))
        return _gens(out)

    def V(v):
        return _shape(v, (2, n, 4))

    def Z(z):
        return coords.to_mat(z)

    def vv(v):
        return hc_matmul(V(v), hc_adjoint(V(v)))

    def f_zv(v, z):
        zv = hc_matmul(Z(z), V(v))
        return _re_tr(hc_matmul(zv, hc_adjoint(zv)))

    def f_comm(v, z):
        c = hc_matmul(Z(z), vv(v)) - hc_matmul(vv(v), Z(z))
        return _re_tr(hc_matmul(c, c))

    hb = [_h("tr(z^2)", lambda v, z: _re_tr(_pow(Z(z), 2)), (0, 2)),
          _h("tr(z^4)", lambda v, z: _re_tr(_pow(Z(z), 4)), (0, 4)),
          _h("|v|^2", _nv, (2, 0)),
          _h("tr(zv(zv)^*)", f_zv, (2, 2)),
          _h("tr((zvv^*-vv^*z)^2)", f_comm, (4, 2))]
    if n >= 2:
        hb.append(_h("tr((vv^*)^2)", lambda v, z: _re_tr(_pow(vv(v), 2)), (4, 0)))
    return dict(dim_v=dim_v, dim_z=coords.dim, gen_factory=gens, hilbert_basis=tuple(hb),
                group=f"Sp2 x Sp{n}", exact=False, z_coords=coords)


def _app11(n, variant):
    coords = U2Coords()
    dim_v = 4 * n

    def gens():
        left = u_basis(2) if variant == "U2" else su_basis(2)
        out = [(_act_v(_left_matrix_action((2, n, 2), X), dim_v), _conj_action(coords, X)) for X in left]
        out += [(_act_v(_right_matrix_action((2, n, 2), X), dim_v), _zero(4)) for X in su_basis(n)]
        return _gens(out)

    def Z(z):
        return coords.to_mat(z)

    hb = (_h("i tr(z)", lambda v, z: -hc_trace(Z(z))[..., 1], (0, 1)),
          _h("tr(z^2)", lambda v, z: _re_tr(_pow(Z(z), 2)), (0, 2)),
          _h("|v|^2", _nv, (2, 0)),
          _h("tr((vv^*)^2)", _quartic_c(n), (4, 0)),
          _h("i tr(v^* z v)", _mixed_u2(n, coords), (2, 1)))
    discrete = ()
    if variant == "U2":
        ph = np.zeros((2, 2, 2))
        ph[..., 0] = np.eye(2)
        ph[0, 0] = [math.cos(0.7), math.sin(0.7)]
        g_v = linear_map_matrix(lambda v: _flat(hc_matmul(ph, _shape(v, (2, n, 2))), 3), dim_v)
        g_z = linear_map_matrix(lambda z: coords.from_mat(hc_matmul(hc_matmul(ph, Z(z)), hc_adjoint(ph))), 4)
        discrete = (GroupElement(g_v, g_z),)
    return dict(dim_v=dim_v, dim_z=4, gen_factory=gens, hilbert_basis=hb, discrete_elements=discrete,
                group=f"{variant} x SU{n}", exact=True, z_coords=coords)


def _app12(n, variant):
    """Real model R^2 (x) H^n, K = SO2 x Sp1 x Sp_n, z = (z0 in Im H, t)."""
    dim_v = 8 * n
    im = ImCoords(4)

    def gens():
        out = []
        for X in [_unit(k, 4, np.zeros(1)) for k in (1, 2, 3)]:
            def f(v, X=X):
                return _flat(hc_mul(X, _shape(v, (2, n, 4))), 3)
            a_z = np.zeros((4, 4))
            a_z[:3, :3] = _conj_action(im, X)
            out.append((_act_v(f, dim_v), a_z))
        for X in sp_basis(n):
            out.append((_act_v(_right_matrix_action((2, n, 4), X), dim_v), _zero(4)))
        out.append((_act_v(lambda v: _rotation_rows(v, 4 * n), dim_v), _zero(4)))
        return _gens(out)

    quartic, gram, _, _ = _rows_invariants(n, 4)

    def mixed(v, z):
        _, _, m, _ = _rows_invariants(n, 4)
        return m(v, np.asarray(z)[..., :3])

    def t_of(z):
        return np.asarray(z)[..., 3]

    if variant == "remark":
        hb = (_h("t", lambda v, z: t_of(z), (0, 1)),
              _h("|z0|^2", lambda v, z: nsq(np.asarray(z)[..., :3]), (0, 2)),
              _h("|v|^2", _nv, (2, 0)),
              _h("|v1|^4+2|v1v2^*|^2+|v2|^4", quartic, (4, 0)),
              _h("|v1|^2|v2|^2-(Re v1v2^*)^2", gram, (4, 0)),
              _h("Re((v1v2^*-v2v1^*)z0)", mixed, (2, 1)))
    else:
        def zdot(v, z):
            # u2 element acting on rows: t J + left multiplication by z0
            V = _shape(v, (2, n, 4))
            z = np.asarray(z)
            z0 = im.to_mat(z[..., :3])[..., None, None, :]
            left = hc_mul(z0, V)
            t = z[..., 3][..., None, None, None]
            jv = np.stack([-V[..., 1, :, :], V[..., 0, :, :]], axis=-3)
            return left + t * jv

        def f6(v, z):
            V = _shape(v, (2, n, 4))
            W = zdot(v, z)
            jw = np.stack([-W[..., 1, :, :], W[..., 0, :, :]], axis=-3)
            return (V * jw).sum(axis=(-1, -2, -3))

        hb = (_h("i tr(z)", lambda v, z: -2 * t_of(z), (0, 1)),
              _h("tr(z^2)", lambda v, z: -2 * (t_of(z) ** 2 + nsq(np.asarray(z)[..., :3])), (0, 2)),
              _h("|v|^2", _nv, (2, 0)),
              _h("tr((vv^*)^2)", lambda v, z: _re_tr(_pow(hc_matmul(_shape(v, (2, n, 4)), hc_adjoint(_shape(v, (2, n, 4)))), 2)), (4, 0)),
              _h("|x|^2|y|^2-(t x y)^2", gram, (4, 0)),
              _h("tr(v^* i z v)", f6, (2, 1)))
    return dict(dim_v=dim_v, dim_z=4, gen_factory=gens, hilbert_basis=hb,
                group=f"U2 x Sp{n}", exact=True)


APPENDIX_VARIANTS = {
    1: ("SO", "O"), 4: ("U",), 5: ("SU",), 7: ("Sp", "U1"), 11: ("U2", "SU2"), 12: ("theorem", "remark"),
}
APPENDIX_NMIN = {1: 3, 4: 2, 5: 2, 6: 2, 7: 2, 9: 1, 10: 1, 11: 2, 12: 2}
APPENDIX_GROUPS = {
    1: "SO_n / O_n on R^n + so_n", 2: "Spin7 on R^8 + R^7", 3: "G2 on R^7 + R^7",
    4: "U_n on C^n + L^2 C^n", 5: "SU_n on C^n + L^2 C^n", 6: "U_n on C^n + u_n",
    7: "(U1 x) Sp_n on H^n + (HS^2_0 H^n + Im H)", 8: "U1 x Spin7 on C^8 + R^7",
    9: "Sp1 x Sp_n on H^n + sp1", 10: "Sp2 x Sp_n on H^2 (x) H^n + sp2",
    11: "U2 x SU_n on C^2 (x) C^n + u2", 12: "U2 x Sp_n on C^2 (x) H^n + u2",
}
TABLE1_GROUPS = {
    1: "U1 x Sp_n", 2: "Sp1 x Sp_n", 3: "Spin7", 4: "U2", 5: "Sp2", 6: "U2 x SU2",
    7: "SU2 x SU_n (n>=3)", 8: "SO2 x Sp1 x Sp_n", 9: "SO2 x Spin7", 10: "SO3", 11: "SU3", 12: "G2",
}


def _appendix(k: int, n: int | None, variant: str | None):
    if k == 1:
        return _app1(n, variant)
    if k == 2:
        return _app2()
    if k == 3:
        return _app3()
    if k in (4, 5):
        return _app45(n, "U" if k == 4 else "SU")
    if k == 6:
        return _app6(n)
    if k == 7:
        return _app7(n, variant)
    if k == 8:
        return _app8()
    if k == 9:
        return _app9(n)
    if k == 10:
        return _app10(n)
    if k == 11:
        return _app11(n, variant)
    if k == 12:
        return _app12(n, variant)
    raise CatalogError(f"no Appendix case {k}")


# ---------------------------------------------------------------------------
# public API

_ID = re.compile(r"^(?:(T1-L|A)(\d+)|Q(\d+))(?::([A-Za-z0-9]+))?$")


def parse_id(case_id: str):
    m = _ID.match(case_id.strip())
    if not m:
        raise CatalogError(f"unknown case id {case_id!r}")
    if m.group(3):
        return "Q", int(m.group(3)), m.group(4)
    return ("T1" if m.group(1) == "T1-L" else "A"), int(m.group(2)), m.group(4)


def _needs_n(kind, k):
    if kind == "T1":
        return k in TABLE1_NMIN
    return k in APPENDIX_NMIN


def _nmin(kind, k, variant=None):
    if kind == "T1":
        return TABLE1_NMIN.get(k)
    if k == 11 and variant == "SU2":
        return 3
    return APPENDIX_NMIN.get(k)


def get_case(case_id: str, n: int | None = None, variant: str | None = None) -> CaseDescriptor:
    kind, k, v2 = parse_id(case_id)
    variant = variant or v2
    if kind == "Q":
        raise CatalogError("quotient ids are served by get_quotient")
    if kind == "T1" and not 1 <= k <= 12:
        raise CatalogError(f"no Table-1 line {k}")
    if kind == "A" and not 1 <= k <= 12:
        raise CatalogError(f"no Appendix case {k}")
    if kind == "T1" and variant is not None:
        raise CatalogError("Table-1 lines have no variants")
    if kind == "A":
        allowed = APPENDIX_VARIANTS.get(k)
        if allowed is None:
            if variant is not None:
                raise CatalogError(f"Appendix case {k} has no variants")
        else:
            variant = variant or allowed[0]
            if variant not in allowed:
                raise CatalogError(f"variant {variant!r} not in {allowed} for Appendix case {k}")
    if _needs_n(kind, k):
        nmin = _nmin(kind, k, variant)
        n = nmin if n is None else int(n)
        if n < nmin:
            raise CatalogError(f"{case_id}: n={n} below minimum {nmin}")
    elif n is not None and kind == "T1" and k in (3, 4, 5, 6, 9, 10, 11, 12):
        n = None
    elif n is not None and kind == "A" and k in (2, 3, 8):
        n = None
    return _build(kind, k, n, variant)


@lru_cache(maxsize=None)
def _build(kind, k, n, variant):
    if kind == "T1":
        d = _table1(k, n)
        cid = f"T1-L{k}"
    else:
        d = _appendix(k, n, variant)
        cid = f"A{k}"
    exact = d.pop("exact", False)
    coords = d.pop("z_coords", None)
    group = d.pop("group", "")
    if coords is not None and not coords.exact:
        exact = False
    return CaseDescriptor(id=cid, n_param=n, variant=variant, exact=exact, z_coords=coords, group=group, **d)


def get_quotient(line, n: int | None = None) -> QuotientDescriptor:
    if isinstance(line, str):
        kind, k, _ = parse_id(line)
        if kind not in ("Q", "T1"):
            raise CatalogError("quotients exist for Table-1 lines only")
        line = k
    parent = get_case(f"T1-L{line}", n)
    return _build_quotient(line, parent.n_param)


@lru_cache(maxsize=None)
def _build_quotient(line, n):
    parent = get_case(f"T1-L{line}", n)
    spec = _quotient_spec(line, parent.n_param)
    return QuotientDescriptor(line=line, parent=parent, zeta0=tuple(spec["zeta0"]), v_split=tuple(spec["v_split"]),
                              rho_v_prime=tuple(spec["rho"]), radical=spec["radical"], k0=spec["k0"])


def bracket(case, v, u):
    case = case if isinstance(case, CaseDescriptor) else get_case(case)
    if case.bracket is None:
        raise CatalogError(f"{case.key} carries no bracket")
    return np.asarray(case.bracket(np.asarray(v), np.asarray(u)))


def structure_constants(case, exact: bool = True) -> np.ndarray:
    """c[l, r, s] = <[e_r, e_s], eps_l>; Fractions when exact."""
    case = case if isinstance(case, CaseDescriptor) else get_case(case)
    n = case.dim_v
    if exact:
        eye = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                eye[i, j] = Fraction(int(i == j))
    else:
        eye = np.eye(n)
    r_idx, s_idx = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    vals = bracket(case, eye[r_idx.ravel()], eye[s_idx.ravel()])
    vals = vals.reshape(n, n, case.dim_z)
    out = np.moveaxis(vals, -1, 0)
    if exact:
        out = np.vectorize(lambda x: Fraction(x), otypes=[object])(out)
    return out


def j_map(case, z) -> np.ndarray:
    """Matrix J_z with <J_z v, v'> = <z, [v, v']>."""
    case = case if isinstance(case, CaseDescriptor) else get_case(case)
    c = structure_constants(case, exact=False)
    z = np.asarray(z, dtype=float)
    # <J_z e_r, e_s> = sum_l z_l c[l, r, s]  ->  J[s, r]
    return np.einsum("l,lrs->sr", z, c)


def central_reduction(case, z_subspace) -> CaseDescriptor:
    """Quotient by a K-invariant subspace of z (columns of z_subspace)."""
    case = case if isinstance(case, CaseDescriptor) else get_case(case)
    S = np.asarray(z_subspace, dtype=float).reshape(case.dim_z, -1)
    if S.size and np.linalg.matrix_rank(S) > 0:
        Qs, _ = np.linalg.qr(S)
        Qs = Qs[:, : np.linalg.matrix_rank(S)]
    else:
        Qs = np.zeros((case.dim_z, 0))
    k = Qs.shape[1]
    if k == case.dim_z:
        raise CatalogError("reduction by all of z leaves an abelian quotient")
    P = np.eye(case.dim_z) - Qs @ Qs.T
    for g in case.generators:
        if k and np.abs(P @ g.a_z @ Qs).max() > 1e-10:
            raise CatalogError("subspace is not K-invariant")
    if k == 0:
        return case
    full = np.linalg.svd(P)[0][:, : case.dim_z - k]
    comp = full
    gens = tuple(ActionElement(g.a_v, comp.T @ g.a_z @ comp) for g in case.generators)
    br = None
    if case.bracket is not None:
        parent_br = case.bracket

        def br(v, u):
            return np.asarray(parent_br(v, u), dtype=float) @ comp
    disc = tuple(GroupElement(g.g_v, comp.T @ g.g_z @ comp) for g in case.discrete_elements)
    return CaseDescriptor(id=case.id, dim_v=case.dim_v, dim_z=case.dim_z - k, gen_factory=lambda: gens,
                          hilbert_basis=(), bracket=br, discrete_elements=disc, block=case.block,
                          n_param=case.n_param, variant=(case.variant or "") + "/reduced", group=case.group,
                          exact=False, notes="central reduction")


def table1_cases(include_regression: bool = True) -> list[CaseDescriptor]:
    out = []
    for k in range(1, 13):
        if k in TABLE1_NMIN:
            nmin = TABLE1_NMIN[k]
            ns = [nmin, nmin + 1] if include_regression else [nmin]
            out += [get_case(f"T1-L{k}", n) for n in ns]
        else:
            out.append(get_case(f"T1-L{k}"))
    return out


def appendix_cases(include_regression: bool = True) -> list[CaseDescriptor]:
    out = []
    for k in range(1, 13):
        variants = APPENDIX_VARIANTS.get(k, (None,))
        for var in variants:
            if k in APPENDIX_NMIN:
                nmin = _nmin("A", k, var)
                ns = [nmin, nmin + 1] if include_regression else [nmin]
                if k in (1, 4, 5) and include_regression:
                    ns = [nmin, nmin + 1, nmin + 2]
                out += [get_case(f"A{k}", n, var) for n in ns]
            else:
                out.append(get_case(f"A{k}", None, var))
    return out


def all_cases(include_regression: bool = True) -> list[CaseDescriptor]:
    return table1_cases(include_regression) + appendix_cases(include_regression)


def catalog_rows():
    """Rows of the three tables (Table 1, Appendix cases, quotients), one per entry."""
    t1 = []
    for k in range(1, 13):
        c = get_case(f"T1-L{k}")
        t1.append(dict(id=f"T1-L{k}", group=TABLE1_GROUPS[k], dim_v=c.dim_v, dim_z=c.dim_z, d=c.d,
                       bidegrees=[list(b) for b in c.bidegrees], block=c.block,
                       n=c.n_param, hilbert=[h.name for h in c.hilbert_basis]))
    app = []
    for k in range(1, 13):
        variants = APPENDIX_VARIANTS.get(k, (None,))
        c = get_case(f"A{k}", None, variants[0])
        app.append(dict(id=f"A{k}", group=APPENDIX_GROUPS[k], dim_v=c.dim_v, dim_z=c.dim_z, d=c.d,
                        bidegrees=[list(b) for b in c.bidegrees], block=None, n=c.n_param,
                        variants=[v for v in variants if v], hilbert=[h.name for h in c.hilbert_basis]))
    quo = []
    for k in range(1, 13):
        q = get_quotient(k)
        quo.append(dict(id=f"Q{k}", group=q.k0, dim_v=q.parent.dim_v, dim_z=1, d=q.d,
                        bidegrees=[[p.degree, 0] for p in q.rho_v_prime] + [[0, 1]],
                        block=q.parent.block, n=q.parent.n_param, radical=q.radical,
                        zeta0=[str(x) for x in q.zeta0], hilbert=[p.name for p in q.rho_v_prime] + ["t"]))
    return dict(table1=t1, appendix=app, quotients=quo)
