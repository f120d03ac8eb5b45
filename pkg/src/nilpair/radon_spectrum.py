"""Radon transform along zeta0^perp, the Theta map, E_n and the Hadamard split.

Test functions of the Gaussian class are stored as ``P(x) exp(-|x|^2)`` with
P a polynomial, so derivatives are analytic.  Their fiber integrals use
Gauss-Hermite moments coordinate by coordinate, which for a polynomial
integrand coincides with the full tensor grid of the same order.  Arbitrary
callables go through an explicit tensor grid, capped by a node budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .composition_algebras import GaussQ
from .symm_calculus import DiffOp, ExactPoly, radon_reduce

GH_ORDER = 40
GRID_WINDOW = 4.0
NODE_BUDGET = 2_000_000


class QuadratureError(RuntimeError):
    pass


class ThetaDomainError(ValueError):
    pass


class HadamardPreconditionError(ValueError):
    pass


@lru_cache(maxsize=None)
def gauss_hermite(order: int):
    return np.polynomial.hermite.hermgauss(order)


@lru_cache(maxsize=None)
def _moments(order: int, kmax: int):
    x, w = gauss_hermite(order)
    return np.array([float(np.sum(w * x ** k)) for k in range(kmax + 1)])


def _num(c):
    if isinstance(c, GaussQ):
        return complex(c) if c.im else float(c.re)
    if isinstance(c, complex):
        return c
    return float(c)


def _num_poly(p: ExactPoly) -> ExactPoly:
    return ExactPoly._raw(p.nvars, {e: _num(c) for e, c in p.terms.items()})


@dataclass(frozen=True)
class SampledFunction:
    func: Callable
    dim: int
    decay: str = "gaussian-poly"

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


class GaussPoly:
    """P(x) exp(-|x|^2) with P an ExactPoly (float or rational coefficients)."""

    decay = "gaussian-poly"

    def __init__(self, poly: ExactPoly):
        self.poly = _num_poly(poly)
        self.dim = poly.nvars

    @classmethod
    def gaussian(cls, dim: int) -> "GaussPoly":
        return cls(ExactPoly.const(1.0, dim))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.poly.evaluate(x) * np.exp(-np.sum(x * x, axis=-1))

    def __add__(self, o):
        return GaussPoly(self.poly + o.poly)

    def scale(self, c) -> "GaussPoly":
        return GaussPoly(self.poly.scale(c))

    def diff(self, k: int) -> "GaussPoly":
        x = ExactPoly.var(k, self.dim).scale(-2.0)
        return GaussPoly(self.poly.diff(k) + x * self.poly)

    def diff_multi(self, beta) -> "GaussPoly":
        out = self
        for k, m in enumerate(beta):
            for _ in range(m):
                out = out.diff(k)
        return out

    def apply(self, D: DiffOp) -> "GaussPoly":
        """D F, with the coefficients of D turned into floats."""
        out = ExactPoly(self.dim)
        cache = {}
        for beta, a in D.terms.items():
            if beta not in cache:
                cache[beta] = self.diff_multi(beta).poly
            out = out + _num_poly(a) * cache[beta]
        return GaussPoly(out)


def _fiber_axes(zeta0):
    z = np.asarray([float(x) for x in zeta0])
    nz = np.flatnonzero(z)
    if len(nz) != 1 or abs(abs(z[nz[0]]) - 1.0) > 0:
        raise ValueError("zeta0 must be a signed coordinate axis")
    return int(nz[0]), float(z[nz[0]])


def radon_gausspoly(F: GaussPoly, dim_v: int, zeta0, order: int = GH_ORDER) -> GaussPoly:
    """R F(v, t) = int F(v, t zeta0 + zeta') d zeta' for F in the Gaussian class."""
    dim_z = F.dim - dim_v
    axis, sign = _fiber_axes(zeta0)
    zdeg = max((max(e[dim_v:], default=0) for e in F.poly.terms), default=0)
    if zdeg >= 2 * order:
        raise QuadratureError(f"Gauss-Hermite order {order} cannot integrate degree {zdeg} exactly")
    mom = _moments(order, max(zdeg, 0))
    out = {}
    for e, c in F.poly.terms.items():
        w = c
        for l in range(dim_z):
            if l != axis:
                w = w * mom[e[dim_v + l]]
        if w == 0:
            continue
        k = e[dim_v + axis]
        ne = tuple(e[:dim_v]) + (k,)
        out[ne] = out.get(ne, 0.0) + w * sign ** k
    return GaussPoly(ExactPoly(dim_v + 1, out))


def radon_transform(F, line, t_grid=None, quad_spec=None, n=None):
    """Radon transform for a Table-1 line.

    ``F`` is a GaussPoly (exact moments) or a callable on (v, z) points,
    integrated on a tensor Gauss-Hermite grid.  With ``t_grid`` given the
    callable result is returned evaluated at the (v, t) points of the grid.
    """
    from .pair_catalog import get_quotient
    q = get_quotient(line, n)
    dim_v, dim_z = q.parent.dim_v, q.parent.dim_z
    spec = dict(order=GH_ORDER, tol=1e-8, budget=NODE_BUDGET)
    spec.update(quad_spec or {})
    if isinstance(F, GaussPoly):
        out = radon_gausspoly(F, dim_v, q.zeta0, spec["order"])
        return out if t_grid is None else out(t_grid)
    axis, sign = _fiber_axes(q.zeta0)
    func = F.func if isinstance(F, SampledFunction) else F

    def integrate(order, pts):
        x, w = gauss_hermite(order)
        k = dim_z - 1
        if order ** k > spec["budget"]:
            raise QuadratureError(f"tensor grid {order}^{k} exceeds node budget {spec['budget']}")
        nodes = np.array(list(itertools.product(x, repeat=k))).reshape(-1, k)
        weights = np.prod(np.array(list(itertools.product(w, repeat=k))).reshape(-1, k), axis=1)
        weights = weights * np.exp(np.sum(nodes ** 2, axis=1))
        pts = np.atleast_2d(pts)
        res = np.zeros(len(pts))
        for i, p in enumerate(pts):
            z = np.zeros((len(nodes), dim_z))
            others = [l for l in range(dim_z) if l != axis]
            z[:, others] = nodes
            z[:, axis] = sign * p[dim_v]
            v = np.broadcast_to(p[:dim_v], (len(nodes), dim_v))
            res[i] = np.sum(weights * func(np.concatenate([v, z], axis=1)))
        return res

    def evaluate(pts):
        a = integrate(spec["order"], pts)
        b = integrate(spec["order"] // 2, pts)
        if np.max(np.abs(a - b)) > spec["tol"] * (1 + np.max(np.abs(a))):
            raise QuadratureError("order-halving disagreement exceeds tolerance")
        return a

    if t_grid is not None:
        return evaluate(np.asarray(t_grid, dtype=float))
    return SampledFunction(evaluate, dim_v + 1)


def sample_grid(dim: int, count: int = 64, seed: int = 0, window: float = GRID_WINDOW) -> np.ndarray:
    """Deterministic points in [-window, window]^dim, concentrated where |x|^2 is of order one.

    Uniform points in a high-dimensional cube land where Gaussian-class
    functions are numerically zero, which would make sup-norm residuals
    vacuous.
    """
    rng = np.random.default_rng([seed, 7])
    return np.clip(rng.standard_normal((count, dim)) / np.sqrt(dim), -window, window)


def check_radon_commutation(line, D, F: GaussPoly, n=None, points=None) -> float:
    """sup |R(D F) - (R D)(R F)| on sample points of N'."""
    from .pair_catalog import get_quotient
    q = get_quotient(line, n)
    dim_v = q.parent.dim_v
    lhs = radon_gausspoly(F.apply(D), dim_v, q.zeta0)
    rhs = radon_gausspoly(F, dim_v, q.zeta0).apply(radon_reduce(D, dim_v, q.zeta0))
    pts = sample_grid(dim_v + 1) if points is None else np.asarray(points)
    return float(np.max(np.abs(lhs(pts) - rhs(pts))))


def family_operator(line, family: str, n=None) -> DiffOp:
    """lambda' of the first catalog generator of family 'L', 'M' or 'Delta'."""
    from .pair_catalog import get_case
    from .symm_calculus import algebra_of, hilbert_polys, symmetrize
    case = get_case(f"T1-L{line}", n)
    polys = hilbert_polys(case)
    for h, p in zip(case.hilbert_basis, polys):
        if h.family == family:
            return symmetrize(p, algebra_of(case))
    raise KeyError(f"line {line} has no generator of family {family!r}")


def default_test_function(line, n=None, seed: int = 0) -> GaussPoly:
    """Gaussian times a fixed low-degree non-invariant polynomial (deterministic in the seed)."""
    from .pair_catalog import get_case
    case = get_case(f"T1-L{line}", n)
    N = case.dim_v + case.dim_z
    rng = np.random.default_rng([seed, 8])
    x = ExactPoly.variables(N)
    i, j = rng.integers(0, case.dim_v, 2)
    l = case.dim_v + int(rng.integers(0, case.dim_z))
    p = 1.0 + x[i] * 0.5 + x[j] * x[l] * 0.25 + x[l] * x[l] * 0.125
    return GaussPoly(p)


# ---------------------------------------------------------------------------
# E_n


def e_n_set(n: int, line: int | None = None) -> list[tuple]:
    """Index pairs (j, k) of the expansion; triples (j1, j2, k) at line 11."""
    if n < 0:
        raise ValueError("n must be non-negative")
    m = n // 2
    top = 2 * m + 1 if n % 2 == 0 else 2 * m + 2
    pairs = [(top - 2 * i, i) for i in range(m + 1 if n % 2 == 0 else m + 2)]
    if n % 2 == 0:
        pairs.append((0, m + 1))
    if line == 11:
        return [(j1, j - j1, k) for j, k in pairs for j1 in range(j, -1, -1)]
    return pairs


# ---------------------------------------------------------------------------
# Theta


THETA_VARIANTS = ("pattern-corrected", "as-printed")


def _theta_rule(line: int, variant: str):
    """Tuple of (index j, scaled) for the middle coordinates: eta_j = xi_j (xi_d^{-1/2} if scaled)."""
    if line in (4, 5, 10, 12):
        return 3, {1: 1}
    if line in (6, 7, 9):
        return 4, {1: None, 2: 2}
    if line == 8:
        return 5, {1: None, 2: None, 3: 3 if variant == "pattern-corrected" else 2}
    if line == 11:
        return 4, {1: 1, 2: 2}
    if line in (1, 2, 3):
        return 2, {}
    raise ValueError(f"no Theta row for line {line}")


def theta_map(line: int, xi, variant: str = "pattern-corrected") -> np.ndarray:
    """eta_1 = xi_1, eta_d = sqrt(xi_d), middle rows per line; needs xi_d > 0.

    ``variant='as-printed'`` uses the alternative line-8 row eta_4 = xi_3 xi_5^{-1/2}.
    """
    if variant not in THETA_VARIANTS:
        raise ValueError(f"variant must be one of {THETA_VARIANTS}")
    d, rule = _theta_rule(line, variant)
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != d:
        raise ValueError(f"line {line} expects d = {d}, got {xi.shape[-1]}")
    xd = xi[..., d - 1]
    if np.any(xd <= 0):
        raise ThetaDomainError("Theta needs xi_d > 0")
    s = np.sqrt(xd)
    out = np.empty_like(xi)
    out[..., 0] = xi[..., 0]
    for j in range(1, d - 1):
        src = rule.get(j)
        out[..., j] = xi[..., j] if src is None else xi[..., src] / s
    out[..., d - 1] = s
    return out


def theta_inverse(line: int, eta, variant: str = "pattern-corrected") -> np.ndarray:
    if variant != "pattern-corrected" and line == 8:
        raise ValueError("the as-printed line-8 row drops xi_4 and has no inverse")
    d, rule = _theta_rule(line, variant)
    eta = np.asarray(eta, dtype=float)
    if np.any(eta[..., d - 1] <= 0):
        raise ThetaDomainError("inverse needs eta_d > 0")
    s = eta[..., d - 1]
    out = np.empty_like(eta)
    out[..., 0] = eta[..., 0]
    for j in range(1, d - 1):
        out[..., j] = eta[..., j] if rule.get(j) is None else eta[..., j] * s
    out[..., d - 1] = s * s
    return out


def theta_weights(line: int, n=None):
    """Homogeneity weights (gamma_j on xi, gamma'_j on eta) from catalog degrees."""
    from .pair_catalog import get_quotient
    q = get_quotient(line, n)
    gam = tuple(h.gamma for h in q.parent.hilbert_basis)
    gam_p = tuple(p.degree for p in q.rho_v_prime) + (2,)
    return gam, gam_p


def in_omega(line: int, xi, constants) -> np.ndarray:
    """|xi_l| <= 2 C_l (1 + |xi_1|)^{gamma_l / 2} for the middle coordinates."""
    from .pair_catalog import get_case
    gam = [h.gamma for h in get_case(f"T1-L{line}").hilbert_basis]
    xi = np.asarray(xi, dtype=float)
    ok = np.ones(xi.shape[:-1], dtype=bool)
    for l in range(1, xi.shape[-1] - 1):
        ok &= np.abs(xi[..., l]) <= 2 * constants[l] * (1 + np.abs(xi[..., 0])) ** (gam[l] / 2)
    return ok


# ---------------------------------------------------------------------------
# Hadamard split


def smooth_bump(r, radius: float):
    """C^2 piecewise-quintic bump: 1 on |y| <= radius/2, 0 on |y| >= radius."""
    s = np.clip((np.asarray(r, dtype=float) - radius / 2) / (radius / 2), 0.0, 1.0)
    return 1.0 - s ** 3 * (10 - 15 * s + 6 * s * s)


def _dy(h, x, y, j, step):
    e = np.zeros(y.shape[-1])
    e[j] = 1.0

    def central(d):
        return (h(x, y + d * e) - h(x, y - d * e)) / (2 * d)

    return (4 * central(step / 2) - central(step)) / 3


def hadamard_split(h: Callable, m: int, cutoff_radius: float = 1.0, check_x=None,
                   nodes: int = 24, step: float = 1e-2):
    """Components h_j with h(x, y) = sum_j y_j h_j(x, y), for h(x, 0) = 0.

    h_j = psi(y) int_0^1 (d_{y_j} h)(x, r y) dr + y_j h(x, y) (1 - psi(y)) / |y|^2.
    """
    if check_x is not None:
        cx = np.atleast_2d(np.asarray(check_x, dtype=float))
        at0 = h(cx, np.zeros((len(cx), m)))
        if np.max(np.abs(at0)) > 1e-9:
            raise HadamardPreconditionError("h(x, 0) does not vanish")
    r, w = np.polynomial.legendre.leggauss(nodes)
    r = (r + 1) / 2
    w = w / 2

    def component(j):
        def hj(x, y):
            x = np.atleast_2d(np.asarray(x, dtype=float))
            y = np.atleast_2d(np.asarray(y, dtype=float))
            ny2 = np.sum(y * y, axis=-1)
            psi = smooth_bump(np.sqrt(ny2), cutoff_radius)
            integral = sum(wk * _dy(h, x, rk * y, j, step) for rk, wk in zip(r, w))
            far = np.where(ny2 > (cutoff_radius / 2) ** 2, y[..., j] * h(x, y) * (1 - psi) / np.maximum(ny2, 1e-300), 0.0)
            return psi * integral + far
        return hj

    return [component(j) for j in range(m)]
