"""Lie algebras of the compact groups K, their exponentials and sampling.

Everything is realised as real matrices acting on the real coordinates of
v and z.  Classical algebras are first written as hypercomplex matrices
(last axis = components, see :mod:`nilpair.composition_algebras`) and then
turned into real matrices by evaluating the induced linear map on a basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.linalg import expm

from .composition_algebras import CAElement, hc_mul, left_mult_matrix

RANK_REL_TOL = 1e-8


class RankAmbiguityError(RuntimeError):
    """Singular values sit too close to the rank threshold to decide."""


@dataclass(frozen=True)
class ActionElement:
    a_v: np.ndarray
    a_z: np.ndarray

    def skew_residual(self) -> float:
        r = 0.0
        for m in (self.a_v, self.a_z):
            if m.size:
                r = max(r, float(np.abs(m + m.T).max()))
        return r

    def scaled(self, c: float) -> "ActionElement":
        return ActionElement(c * self.a_v, c * self.a_z)

    def __add__(self, other):
        return ActionElement(self.a_v + other.a_v, self.a_z + other.a_z)


@dataclass(frozen=True)
class GroupElement:
    g_v: np.ndarray
    g_z: np.ndarray

    def orthogonality_residual(self) -> float:
        r = 0.0
        for m in (self.g_v, self.g_z):
            if m.size:
                r = max(r, float(np.abs(m.T @ m - np.eye(m.shape[0])).max()))
        return r

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.g_v @ other.g_v, self.g_z @ other.g_z)

    def act(self, v, z):
        v = np.asarray(v)
        z = np.asarray(z)
        return v @ self.g_v.T, z @ self.g_z.T

    @classmethod
    def identity(cls, dim_v: int, dim_z: int) -> "GroupElement":
        return cls(np.eye(dim_v), np.eye(dim_z))


def linear_map_matrix(f: Callable[[np.ndarray], np.ndarray], dim_in: int) -> np.ndarray:
    """Matrix of a linear map on flat real coordinates (evaluated on the basis)."""
    basis = np.eye(dim_in)
    out = np.asarray(f(basis))
    return out.reshape(dim_in, -1).T


def numeric_rank(m: np.ndarray, rel_tol: float = RANK_REL_TOL, strict: bool = False) -> int:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    thr = rel_tol * s[0]
    if strict:
        near = (s > thr * 1e-2) & (s < thr * 1e2)
        if near.any():
            raise RankAmbiguityError(f"singular values {s[near]} within two decades of threshold {thr:.3e}")
    return int((s > thr).sum())


def null_space(m: np.ndarray, rel_tol: float = RANK_REL_TOL, strict: bool = True) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of m."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    _, s, vt = np.linalg.svd(m)
    rank = numeric_rank(m, rel_tol, strict=strict)
    return vt[rank:].T


# classical Lie algebras as hypercomplex matrices


def _hc_zeros(n, c):
    return np.zeros((n, n, c))


def so_basis(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j], m[j, i] = 1.0, -1.0
            out.append(m)
    return out


def u_basis(n: int) -> list[np.ndarray]:
    """Anti-Hermitian complex n x n matrices, shape (n, n, 2)."""
    out = []
    for j in range(n):
        m = _hc_zeros(n, 2)
        m[j, j, 1] = 1.0
        out.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            m = _hc_zeros(n, 2)
            m[j, k, 0], m[k, j, 0] = 1.0, -1.0
            out.append(m)
            m = _hc_zeros(n, 2)
            m[j, k, 1], m[k, j, 1] = 1.0, 1.0
            out.append(m)
    return out


def su_basis(n: int) -> list[np.ndarray]:
    out = []
    for j in range(n - 1):
        m = _hc_zeros(n, 2)
        m[j, j, 1], m[j + 1, j + 1, 1] = 1.0, -1.0
        out.append(m)
    out.extend(u_basis(n)[n:])
    return out


def sp_basis(n: int) -> list[np.ndarray]:
    """Quaternionic skew-Hermitian n x n matrices, shape (n, n, 4); dim n(2n+1)."""
    out = []
    for j in range(n):
        for c in (1, 2, 3):
            m = _hc_zeros(n, 4)
            m[j, j, c] = 1.0
            out.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            for c in range(4):
                m = _hc_zeros(n, 4)
                m[j, k, c] = 1.0
                m[k, j, c] = -1.0 if c == 0 else 1.0
                out.append(m)
    return out


def imag_units(c: int) -> list[np.ndarray]:
    out = []
    for k in range(1, c):
        e = np.zeros(c)
        e[k] = 1.0
        out.append(e)
    return out


def spin7_basis() -> list[np.ndarray]:
    """The 21 products L_{e_i} L_{e_j}, 1 <= i < j <= 7, acting on R^8 = O."""
    L = [left_mult_matrix(CAElement.basis("O", k)) for k in range(1, 8)]
    return [L[i] @ L[j] for i in range(7) for j in range(i + 1, 7)]


def g2_basis(rel_tol: float = RANK_REL_TOL) -> list[np.ndarray]:
    """Derivations of O (restricted to Im O) as 7 x 7 skew matrices."""
    so7 = so_basis(7)
    eye8 = np.eye(8)

    def ext(d7):
        d = np.zeros((8, 8))
        d[1:, 1:] = d7
        return d

    cols = []
    for d7 in so7:
        d = ext(d7)
        # D(e_a e_b) - (D e_a) e_b - e_a (D e_b) for all basis pairs
        ea = eye8[:, None, :]
        eb = eye8[None, :, :]
        lhs = hc_mul(ea, eb) @ d.T
        rhs = hc_mul(ea @ d.T, eb) + hc_mul(ea, eb @ d.T)
        cols.append((lhs - rhs).ravel())
    system = np.column_stack(cols)
    kern = null_space(system, rel_tol, strict=True)
    return [sum(c * b for c, b in zip(kern[:, k], so7)) for k in range(kern.shape[1])]


def span_residual(basis: Sequence[np.ndarray], mats: Sequence[np.ndarray]) -> float:
    """Max distance of mats from span(basis), in the Frobenius sense."""
    b = np.column_stack([m.ravel() for m in basis])
    q, _ = np.linalg.qr(b)
    r = 0.0
    for m in mats:
        x = m.ravel()
        r = max(r, float(np.linalg.norm(x - q @ (q.T @ x))))
    return r


def commutator_closure_residual(basis: Sequence[np.ndarray]) -> float:
    brs = [a @ b - b @ a for i, a in enumerate(basis) for b in basis[i + 1:]]
    return span_residual(basis, brs)


class CenterAction(NamedTuple):
    a_z: np.ndarray
    residual: float


def solve_center_action(a_v: np.ndarray, bracket: Callable, dim_v: int, dim_z: int) -> CenterAction:
    """Least-squares a_z with a_z [v,u] = [a_v v, u] + [v, a_v u] on basis pairs."""
    eye = np.eye(dim_v)
    r_idx, s_idx = np.triu_indices(dim_v, 1)
    e_r, e_s = eye[r_idx], eye[s_idx]
    B = np.asarray(bracket(e_r, e_s), dtype=float).reshape(-1, dim_z).T
    R = (np.asarray(bracket(e_r @ a_v.T, e_s), dtype=float)
         + np.asarray(bracket(e_r, e_s @ a_v.T), dtype=float)).reshape(-1, dim_z).T
    a_z = R @ np.linalg.pinv(B)
    scale = 1.0 + float(np.abs(R).max(initial=0.0))
    res = float(np.abs(a_z @ B - R).max(initial=0.0)) / scale
    return CenterAction(a_z, res)


def exp_action(A: ActionElement, t: float = 1.0) -> GroupElement:
    """Matrix exponential (scaling-and-squaring Pade, via scipy)."""
    gv = expm(t * A.a_v) if A.a_v.size else A.a_v.copy()
    gz = expm(t * A.a_z) if A.a_z.size else A.a_z.copy()
    return GroupElement(gv, gz)


def random_algebra_element(gens: Sequence[ActionElement], rng: np.random.Generator) -> ActionElement:
    c = rng.standard_normal(len(gens))
    a_v = sum(ci * g.a_v for ci, g in zip(c, gens))
    a_z = sum(ci * g.a_z for ci, g in zip(c, gens))
    return ActionElement(np.asarray(a_v), np.asarray(a_z))


def sample_from_generators(gens: Sequence[ActionElement], rng: np.random.Generator,
                           factors: int = 3) -> GroupElement:
    g = None
    for _ in range(factors):
        h = exp_action(random_algebra_element(gens, rng))
        g = h if g is None else g @ h
    return g


def sample_group_element(case, rng_seed: int) -> GroupElement:
    """Product of exponentials of 3 random algebra combinations; deterministic in the seed."""
    case = _resolve(case)
    rng = np.random.default_rng(rng_seed)
    return sample_from_generators(case.generators, rng)


def lie_basis(case, n: int | None = None) -> list[ActionElement]:
    return list(_resolve(case, n).generators)


def _resolve(case, n=None):
    if isinstance(case, str):
        from .pair_catalog import get_case
        return get_case(case, n)
    return case
