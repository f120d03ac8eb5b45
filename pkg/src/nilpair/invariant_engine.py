"""Evaluation and verification of Hilbert bases.

Pfaffians (plain and bordered), the Hilbert map rho, invariance residuals,
Jacobian ranks, bi-degree checks and the restriction consistency of the
quotient rows.

Gradients come from :class:`Jet`, a forward-mode derivative carried through
the same invariant code that evaluates rho.  A Jet holds a batch of values
and their gradients, so one object-array evaluation differentiates rho at
many points at once and no finite-difference step is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .composition_algebras import GaussQ
from .group_actions import GroupElement, numeric_rank, sample_group_element, RANK_REL_TOL

# ---------------------------------------------------------------------------
# Pfaffians


class SkewMatrix:
    """Square matrix with exact antisymmetry checked at construction."""

    __slots__ = ("m",)

    def __init__(self, m, atol: float = 0.0):
        m = np.asarray(m)
        if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
            raise ValueError("skew matrix must be square")
        n = m.shape[-1]
        for i in range(n):
            for j in range(i, n):
                s = np.asarray(m[..., i, j] + m[..., j, i])
                bad = np.abs(s.astype(complex)).max() > atol if s.dtype != object else any(bool(x) for x in s.ravel())
                if bad:
                    raise ValueError(f"entry ({i},{j}) violates antisymmetry")
        self.m = m

    @property
    def n(self) -> int:
        return self.m.shape[-1]

    def __array__(self, dtype=None, copy=None):
        return self.m if dtype is None else self.m.astype(dtype)


def pfaffian(M):
    """Pfaffian by first-row expansion, memoised on index subsets.

    Works entry-wise, so M may carry leading batch axes and any ring that
    supports +, -, *.
    """
    m = M.m if isinstance(M, SkewMatrix) else np.asarray(M)
    n = m.shape[-1]
    if m.shape[-2] != n:
        raise ValueError("Pfaffian needs a square matrix")
    if n % 2:
        raise ValueError(f"Pfaffian needs even dimension, got {n}")
    if n == 0:
        return 1
    memo = {}

    def pf(idx):
        if len(idx) == 2:
            return m[..., idx[0], idx[1]]
        if idx in memo:
            return memo[idx]
        i0 = idx[0]
        acc = None
        for p in range(1, len(idx)):
            rest = idx[1:p] + idx[p + 1:]
            term = m[..., i0, idx[p]] * pf(rest)
            if acc is None:
                acc = term
            elif p % 2:
                acc = acc + term
            else:
                acc = acc - term
        memo[idx] = acc
        return acc

    return pf(tuple(range(n)))


def bordered(z, v):
    """(z|v) = [[z, v], [-v^t, 0]] for odd n, so that Pf(z|v) makes sense."""
    z = z.m if isinstance(z, SkewMatrix) else np.asarray(z)
    v = np.asarray(v)
    n = z.shape[-1]
    if v.shape[-1] != n or z.shape[-2] != n:
        raise ValueError(f"bordered: z is {z.shape[-2:]}, v has {v.shape[-1]} entries")
    if n % 2 == 0:
        raise ValueError("bordered matrix of even n is odd-sized; Pfaffian undefined")
    batch = np.broadcast_shapes(z.shape[:-2], v.shape[:-1])
    dtype = object if (z.dtype == object or v.dtype == object) else np.result_type(z, v)
    out = np.zeros(batch + (n + 1, n + 1), dtype=dtype)
    if dtype == object:
        out.fill(0)
    out[..., :n, :n] = z
    out[..., :n, n] = v
    out[..., n, :n] = -v
    return out


# ---------------------------------------------------------------------------
# forward-mode jets


class Jet:
    """Batched value with gradient: val (B,), grad (B, N) or broadcastable."""

    __slots__ = ("val", "grad")
    __array_priority__ = 1000

    def __init__(self, val, grad):
        self.val = val
        self.grad = grad

    @staticmethod
    def _lift(o):
        o = _unwrap(o)
        if isinstance(o, Jet):
            return o
        if isinstance(o, GaussQ):
            o = complex(o)
        return Jet(o, 0.0)

    @staticmethod
    def _col(x):
        return np.asarray(x)[..., None]

    def __add__(self, o):
        o = Jet._lift(o)
        return Jet(self.val + o.val, self.grad + o.grad)

    __radd__ = __add__

    def __sub__(self, o):
        o = Jet._lift(o)
        return Jet(self.val - o.val, self.grad - o.grad)

    def __rsub__(self, o):
        return Jet._lift(o) - self

    def __neg__(self):
        return Jet(-self.val, -self.grad)

    def __mul__(self, o):
        o = _unwrap(o)
        if not isinstance(o, Jet):
            o = complex(o) if isinstance(o, GaussQ) else o
            return Jet(self.val * o, self.grad * o)
        return Jet(self.val * o.val, Jet._col(self.val) * o.grad + Jet._col(o.val) * self.grad)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Jet):
            raise TypeError("division by a Jet is not needed by polynomial invariants")
        return Jet(self.val / o, self.grad / o)

    def __pow__(self, k: int):
        if k == 0:
            return Jet(np.ones_like(self.val), 0.0)
        return Jet(self.val ** k, k * Jet._col(self.val ** (k - 1)) * self.grad)

    def real_part(self):
        return Jet(np.real(self.val), np.real(self.grad))

    def imag_part(self):
        return Jet(np.imag(self.val), np.imag(self.grad))


def _unwrap(o):
    if isinstance(o, np.ndarray) and o.dtype == object and o.shape == ():
        return o.item()
    return o


def jet_variables(x):
    """Object array of Jets seeded with the identity gradient, one per coordinate of x (B, N)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    N = x.shape[-1]
    eye = np.eye(N)
    out = np.empty(N, dtype=object)
    for k in range(N):
        out[k] = Jet(x[:, k], eye[k])
    return out


def _unjet(j, B, N):
    j = _unwrap(j)
    if not isinstance(j, Jet):
        return np.broadcast_to(np.asarray(j, dtype=float), (B,)), np.zeros((B, N))
    val = np.broadcast_to(np.real_if_close(np.asarray(j.val)), (B,)).astype(float)
    grad = np.broadcast_to(np.real_if_close(np.asarray(j.grad)), (B, N)).astype(float)
    return val, grad


# ---------------------------------------------------------------------------
# Hilbert map


def _case(case, n=None):
    if isinstance(case, str):
        from .pair_catalog import get_case
        return get_case(case, n)
    return case


@dataclass(frozen=True)
class HilbertMap:
    case: object
    d: int
    eval: Callable

    @classmethod
    def of(cls, case) -> "HilbertMap":
        case = _case(case)
        return cls(case, case.d, lambda v, z: eval_hilbert(case, v, z))


def eval_hilbert(case, v, z) -> np.ndarray:
    case = _case(case)
    v = np.asarray(v)
    z = np.asarray(z)
    if v.shape[-1] != case.dim_v or z.shape[-1] != case.dim_z:
        raise ValueError(f"{case.key}: expected dims ({case.dim_v}, {case.dim_z}), got ({v.shape[-1]}, {z.shape[-1]})")
    if v.dtype != object:
        v = v.astype(float)
        z = z.astype(float)
    return case.eval_hilbert(v, z)


def split_point(case, x):
    x = np.asarray(x)
    return x[..., : case.dim_v], x[..., case.dim_v:]


def hilbert_jacobian(case, x):
    """Values (B, d) and Jacobians (B, d, dim n) of rho at points x (B, dim n)."""
    case = _case(case)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    B, N = x.shape
    jv = jet_variables(x)
    out = [h.func(jv[: case.dim_v], jv[case.dim_v:]) for h in case.hilbert_basis]
    vals, grads = zip(*(_unjet(o, B, N) for o in out))
    return np.stack(vals, axis=-1), np.stack(grads, axis=-2)


def _points(case, rng, k):
    return rng.standard_normal((k, case.dim_v + case.dim_z))


def _rel_err(a, b):
    return float((np.abs(a - b) / (1.0 + np.abs(b))).max(initial=0.0))


def invariance_residual(case, num_samples: int = 100, rng_seed: int = 0, group_elements=None) -> float:
    """max |rho(g x) - rho(x)| / (1 + |rho(x)|) over sampled g (discrete elements folded in)."""
    case = _case(case)
    rng = np.random.default_rng([rng_seed, 1])
    if group_elements is None:
        group_elements = [sample_group_element(case, int(s)) for s in rng.integers(0, 2**63 - 1, num_samples)]
        for k, d in enumerate(case.discrete_elements):
            group_elements.append(d)
            group_elements[k % num_samples] = d @ group_elements[k % num_samples]
    if not group_elements:
        return 0.0
    x = _points(case, rng, len(group_elements))
    v, z = split_point(case, x)
    gv = np.stack([g.act(v[i], z[i])[0] for i, g in enumerate(group_elements)])
    gz = np.stack([g.act(v[i], z[i])[1] for i, g in enumerate(group_elements)])
    return _rel_err(eval_hilbert(case, gv, gz), eval_hilbert(case, v, z))


def infinitesimal_residual(case, num_samples: int = 20, rng_seed: int = 0) -> float:
    """max over generators A and points x of |grad rho_j(x) . A x| / ((1 + |rho_j(x)|)(1 + |x|))."""
    case = _case(case)
    rng = np.random.default_rng([rng_seed, 2])
    x = _points(case, rng, num_samples)
    vals, jac = hilbert_jacobian(case, x)
    scale = (1.0 + np.abs(vals)) * (1.0 + np.linalg.norm(x, axis=-1))[:, None]
    worst = 0.0
    for g in case.generators:
        A = np.zeros((x.shape[1], x.shape[1]))
        A[: case.dim_v, : case.dim_v] = g.a_v
        A[case.dim_v:, case.dim_v:] = g.a_z
        ax = x @ A.T
        deriv = np.einsum("bdn,bn->bd", jac, ax)
        worst = max(worst, float((np.abs(deriv) / scale).max(initial=0.0)))
    return worst


def jacobian_rank(case, point, tol: float = RANK_REL_TOL) -> int:
    case = _case(case)
    _, jac = hilbert_jacobian(case, np.asarray(point, dtype=float)[None, :])
    return numeric_rank(jac[0], tol)


def jacobian_ranks(case, num_points: int = 100, rng_seed: int = 0, tol: float = RANK_REL_TOL) -> np.ndarray:
    case = _case(case)
    rng = np.random.default_rng([rng_seed, 3])
    _, jac = hilbert_jacobian(case, _points(case, rng, num_points))
    return np.array([numeric_rank(j, tol) for j in jac])


@dataclass(frozen=True)
class BidegreeReport:
    case_key: str
    bidegrees: tuple
    gammas: tuple
    residual: float

    @property
    def ok(self) -> bool:
        return self.residual <= 1e-9


def bidegree_check(case, num_samples: int = 20, rng_seed: int = 0) -> BidegreeReport:
    case = _case(case)
    rng = np.random.default_rng([rng_seed, 4])
    x = _points(case, rng, num_samples)
    v, z = split_point(case, x)
    s = rng.uniform(0.5, 2.0, (num_samples, 1))
    t = rng.uniform(0.5, 2.0, (num_samples, 1))
    base = eval_hilbert(case, v, z)
    scaled = eval_hilbert(case, s * v, t * z)
    a = np.array([b[0] for b in case.bidegrees])
    b = np.array([b[1] for b in case.bidegrees])
    expected = s ** a * t ** b * base
    res = float((np.abs(scaled - expected) / (1.0 + np.abs(expected))).max(initial=0.0))
    return BidegreeReport(case.key, tuple(case.bidegrees), tuple(h.gamma for h in case.hilbert_basis), res)


@dataclass(frozen=True)
class RestrictionReport:
    line: int
    pairing: tuple
    residual: float
    unmatched: tuple

    @property
    def ok(self) -> bool:
        return self.residual <= 1e-9 and not self.unmatched


def restriction_check(line, n=None, num_samples: int = 20, rng_seed: int = 0) -> RestrictionReport:
    """rho_i(v, t zeta0) = product of rho'_j entries as declared in the catalog."""
    from .pair_catalog import get_quotient
    q = get_quotient(line, n)
    case = q.parent
    rng = np.random.default_rng([rng_seed, 5])
    v = rng.standard_normal((num_samples, case.dim_v))
    t = rng.standard_normal(num_samples)
    z = t[:, None] * q.zeta0_array()[None, :]
    rho = eval_hilbert(case, v, z)
    rho_p = q.eval_rho_prime(v, t)
    res = 0.0
    pairing = []
    covered = set()
    for i, h in enumerate(case.hilbert_basis):
        idx = h.restricts_to
        if idx is None:
            continue
        prod = np.prod(rho_p[:, list(idx)], axis=1)
        res = max(res, _rel_err(rho[:, i], prod))
        names = [q.rho_v_prime[j].name if j < len(q.rho_v_prime) else "t" for j in idx]
        pairing.append((h.name, "*".join(names)))
        covered.update(idx)
    unmatched = tuple(p.name for j, p in enumerate(q.rho_v_prime) if j not in covered)
    return RestrictionReport(q.line, tuple(pairing), res, unmatched)


def orbit_codim(case, zeta) -> int:
    """Dimension of span{a_z zeta : a in k}, the tangent space of the K-orbit through zeta.

    For rank-one pairs this equals dim z - 1 at generic zeta, which is the
    quantity the acceptance check compares against.
    """
    case = _case(case)
    zeta = np.asarray(zeta, dtype=float)
    if not np.any(zeta):
        return 0
    m = np.column_stack([g.a_z @ zeta for g in case.generators])
    return numeric_rank(m)


def htype_residual(case, num_samples: int = 20, rng_seed: int = 0) -> float:
    """max | |J_z v| - |z||v| | over random unit z, v."""
    from .pair_catalog import j_map
    case = _case(case)
    rng = np.random.default_rng([rng_seed, 6])
    res = 0.0
    for _ in range(num_samples):
        z = rng.standard_normal(case.dim_z)
        v = rng.standard_normal(case.dim_v)
        lhs = np.linalg.norm(j_map(case, z) @ v)
        res = max(res, abs(lhs - np.linalg.norm(z) * np.linalg.norm(v)))
    return res


def radical_dim(line, n=None) -> int:
    """dim v - rank J_{zeta0}."""
    from .pair_catalog import get_quotient, j_map
    q = get_quotient(line, n)
    return q.parent.dim_v - numeric_rank(j_map(q.parent, q.zeta0_array()))


def corrupt_case(case, index: int | None = None):
    """Copy of case whose generator ``index`` gains a non-invariant monomial of the same bi-degree.

    By default the last generator that depends on v is corrupted; functions of
    z alone can be invariant for trivial reasons (A5 with n = 2).
    """
    case = _case(case)
    hb = list(case.hilbert_basis)
    if index is None:
        index = max(i for i, h in enumerate(hb) if h.bidegree[0] > 0)
    k = index % len(hb)
    h = hb[k]
    a, b = h.bidegree

    def f(v, z, inner=h.func):
        v = np.asarray(v)
        z = np.asarray(z)
        return inner(v, z) + v[..., 0] ** a * z[..., 0] ** b if (a or b) else inner(v, z)

    hb[k] = replace(h, name=h.name + " (corrupted)", func=f)
    return replace(case, hilbert_basis=tuple(hb), notes="mutation witness")
