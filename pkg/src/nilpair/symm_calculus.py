"""Exact calculus of left-invariant differential operators on step-two groups.

Polynomials live on the real coordinates x = (v, z) of n = v + z and carry
Gaussian-rational coefficients.  Operators are stored normal ordered,
``sum_beta a_beta(x) d^beta`` with coefficients to the left, so equality of
operators is equality of dictionaries.

Left-invariant fields use exponential coordinates (step-two
Baker-Campbell-Hausdorff):

    X_r = d_{v_r} + 1/2 sum_{t, l} v_t c^l_{t r} d_{z_l},
    c^l_{t r} = <[e_t, e_r], eps_l>,

so that [X_r, X_s] = sum_l c^l_{r s} d_{z_l}.  The modified symmetrisation
sends x^alpha to i^{-|alpha|} times the average over orderings of the
corresponding product of fields.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .composition_algebras import QQ, RATIONALS, GaussQ, I


def _norm(c):
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, RATIONALS):
        return QQ(c)
    if isinstance(c, GaussQ) and not c.im:
        return c.re
    if isinstance(c, complex):
        return c.real if not c.imag else c
    return c


def _conj(c):
    if isinstance(c, (GaussQ, complex)):
        return c.conjugate()
    return c


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class ExactPoly:
    """Sparse polynomial: dense exponent tuple -> coefficient; zeros never stored."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        out = {}
        if terms:
            for e, c in terms.items():
                c = _norm(c)
                if c:
                    out[tuple(e)] = c
        self.terms = out

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def var(cls, k: int, nvars: int) -> "ExactPoly":
        e = [0] * nvars
        e[k] = 1
        return cls._raw(nvars, {tuple(e): QQ(1)})

    @classmethod
    def const(cls, c, nvars: int) -> "ExactPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variables(cls, nvars: int) -> np.ndarray:
        out = np.empty(nvars, dtype=object)
        for k in range(nvars):
            out[k] = cls.var(k, nvars)
        return out

    def _coerce(self, o):
        if isinstance(o, ExactPoly):
            if o.nvars != self.nvars:
                raise ValueError("polynomials over different variable sets")
            return o
        if isinstance(o, np.ndarray) and o.shape == () and o.dtype == object:
            return self._coerce(o.item())
        return ExactPoly.const(o, self.nvars)

    def __add__(self, o):
        o = self._coerce(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            s = t.get(e)
            s = c if s is None else _norm(s + c)
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return ExactPoly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def scale(self, c):
        c = _norm(c)
        if not c:
            return ExactPoly._raw(self.nvars, {})
        return ExactPoly._raw(self.nvars, {e: _norm(v * c) for e, v in self.terms.items()})

    def __mul__(self, o):
        if isinstance(o, np.ndarray) and o.shape == () and o.dtype == object:
            o = o.item()
        if not isinstance(o, ExactPoly):
            return self.scale(o)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = _add_exp(e1, e2)
                p = c1 * c2
                s = t.get(e)
                t[e] = p if s is None else s + p
        return ExactPoly(self.nvars, t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, ExactPoly):
            raise TypeError("polynomial division is not supported")
        return self.scale(QQ(1) / _norm(c) if isinstance(_norm(c), RATIONALS) else 1 / c)

    def __pow__(self, k: int):
        out = ExactPoly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, ExactPoly):
            o = ExactPoly.const(o, self.nvars)
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def conj(self) -> "ExactPoly":
        return ExactPoly._raw(self.nvars, {e: _conj(c) for e, c in self.terms.items()})

    def real_part(self) -> "ExactPoly":
        return ExactPoly(self.nvars, {e: (c.re if isinstance(c, GaussQ) else c) for e, c in self.terms.items()})

    def imag_part(self) -> "ExactPoly":
        return ExactPoly(self.nvars, {e: (c.im if isinstance(c, GaussQ) else 0) for e, c in self.terms.items()})

    def is_real(self) -> bool:
        return all(not isinstance(c, (GaussQ, complex)) for c in self.terms.values())

    def diff(self, k: int, times: int = 1) -> "ExactPoly":
        t = {}
        for e, c in self.terms.items():
            if e[k] >= times:
                f = 1
                for j in range(times):
                    f *= e[k] - j
                ne = list(e)
                ne[k] -= times
                t[tuple(ne)] = c * f
        return ExactPoly._raw(self.nvars, t)

    def diff_multi(self, delta) -> "ExactPoly":
        out = self
        for k, m in enumerate(delta):
            if m:
                out = out.diff(k, m)
                if not out.terms:
                    break
        return out

    def degree_split(self, nv: int):
        """Set of (deg in the first nv variables, deg in the rest)."""
        return {(sum(e[:nv]), sum(e[nv:])) for e in self.terms}

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def substitute(self, images, nvars_out: int) -> "ExactPoly":
        """Replace variable k by images[k] (ExactPoly over nvars_out variables)."""
        out = ExactPoly(nvars_out)
        cache = {}
        for e, c in self.terms.items():
            term = ExactPoly.const(c, nvars_out)
            for k, m in enumerate(e):
                if m:
                    key = (k, m)
                    if key not in cache:
                        cache[key] = images[k] ** m
                    term = term * cache[key]
            out = out + term
        return out

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        acc = 0.0
        for e, c in self.terms.items():
            cc = complex(c) if isinstance(c, GaussQ) else float(c) if isinstance(c, RATIONALS) else c
            acc = acc + cc * np.prod(x[..., :] ** np.array(e), axis=-1)
        return acc

    def to_str(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{k}" for k in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(names[k] + (f"^{m}" if m > 1 else "") for k, m in enumerate(e) if m)
            cs = str(c)
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts)

    def __repr__(self):
        return f"ExactPoly({self.to_str()})"


class DiffOp:
    """Normal-ordered operator sum_beta a_beta(x) d^beta."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {tuple(b): a for b, a in (terms or {}).items() if a}

    @classmethod
    def derivative(cls, beta, nvars: int) -> "DiffOp":
        return cls(nvars, {tuple(beta): ExactPoly.const(1, nvars)})

    @classmethod
    def d(cls, k: int, nvars: int, times: int = 1) -> "DiffOp":
        b = [0] * nvars
        b[k] = times
        return cls.derivative(b, nvars)

    @classmethod
    def identity(cls, nvars: int) -> "DiffOp":
        return cls.derivative((0,) * nvars, nvars)

    @classmethod
    def multiplication(cls, p: ExactPoly) -> "DiffOp":
        return cls(p.nvars, {(0,) * p.nvars: p})

    def _acc(self, t, b, a):
        s = t.get(b)
        t[b] = a if s is None else s + a

    def __add__(self, o):
        t = dict(self.terms)
        for b, a in o.terms.items():
            self._acc(t, b, a)
        return DiffOp(self.nvars, t)

    def __neg__(self):
        return DiffOp(self.nvars, {b: -a for b, a in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "DiffOp":
        return DiffOp(self.nvars, {b: a.scale(c) for b, a in self.terms.items()})

    def __matmul__(self, o: "DiffOp") -> "DiffOp":
        """Composition self o other, re-normal-ordered by the Leibniz rule."""
        t = {}
        for beta, a in self.terms.items():
            nz = [(k, m) for k, m in enumerate(beta) if m]
            ranges = [range(m + 1) for _, m in nz]
            for gamma, b in o.terms.items():
                for sel in itertools.product(*ranges):
                    delta = [0] * self.nvars
                    coef = 1
                    for (k, m), j in zip(nz, sel):
                        delta[k] = j
                        coef *= comb(m, j)
                    db = b.diff_multi(delta)
                    if not db.terms:
                        continue
                    rest = tuple(bb - dd + gg for bb, dd, gg in zip(beta, delta, gamma))
                    self._acc(t, rest, (a * db).scale(coef))
        return DiffOp(self.nvars, t)

    def __pow__(self, k: int) -> "DiffOp":
        out = DiffOp.identity(self.nvars)
        for _ in range(k):
            out = out @ self
        return out

    def commutator(self, o: "DiffOp") -> "DiffOp":
        return (self @ o) - (o @ self)

    def __eq__(self, o):
        return isinstance(o, DiffOp) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        return max((sum(b) for b in self.terms), default=-1)

    def apply(self, p: ExactPoly) -> ExactPoly:
        out = ExactPoly(self.nvars)
        for b, a in self.terms.items():
            out = out + a * p.diff_multi(b)
        return out

    def to_str(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{k}" for k in range(self.nvars)]
        parts = []
        for b in sorted(self.terms, reverse=True):
            d = "".join(f"d[{names[k]}]" + (f"^{m}" if m > 1 else "") for k, m in enumerate(b) if m)
            parts.append(f"({self.terms[b].to_str(names)})" + (f" {d}" if d else ""))
        return "\n".join(parts)

    def __repr__(self):
        return f"DiffOp({self.to_str()})"


# ---------------------------------------------------------------------------
# step-two algebras


class StepTwoAlgebra:
    """n = v + z with structure constants c[l, r, s] = <[e_r, e_s], eps_l> (rationals)."""

    def __init__(self, c, dim_v: int, dim_z: int, names=None):
        self.c = np.asarray(c, dtype=object)
        self.dim_v = dim_v
        self.dim_z = dim_z
        self.nvars = dim_v + dim_z
        self.names = names or [f"v{k}" for k in range(dim_v)] + [f"z{k}" for k in range(dim_z)]
        self._w = {}
        self._fields = None

    @classmethod
    def from_case(cls, case) -> "StepTwoAlgebra":
        from .pair_catalog import structure_constants
        return cls(structure_constants(case, exact=True), case.dim_v, case.dim_z)

    @classmethod
    def abelian(cls, dim_v: int, dim_z: int = 0) -> "StepTwoAlgebra":
        c = np.empty((dim_z, dim_v, dim_v), dtype=object)
        c.fill(QQ(0))
        return cls(c, dim_v, dim_z)

    def quotient(self, zeta0) -> "StepTwoAlgebra":
        """N' = N / zeta0^perp with one central coordinate t = <z, zeta0> (zeta0 a unit axis vector)."""
        zeta = [QQ(x) for x in zeta0]
        c = np.empty((1, self.dim_v, self.dim_v), dtype=object)
        for r in range(self.dim_v):
            for s in range(self.dim_v):
                c[0, r, s] = sum((zeta[l] * self.c[l, r, s] for l in range(self.dim_z)), QQ(0))
        return StepTwoAlgebra(c, self.dim_v, 1, self.names[: self.dim_v] + ["t"])

    def fields(self):
        """(X_0 .. X_{dim_v-1}, d_{z_0} .. d_{z_{dim_z-1}})."""
        if self._fields is None:
            N = self.nvars
            xs = []
            for r in range(self.dim_v):
                op = DiffOp.d(r, N)
                for l in range(self.dim_z):
                    coef = ExactPoly(N, {tuple(int(j == t) for j in range(N)): QQ(self.c[l, t, r]) / 2
                                         for t in range(self.dim_v) if self.c[l, t, r]})
                    if coef:
                        op = op + DiffOp(N, {tuple(int(j == self.dim_v + l) for j in range(N)): coef})
                xs.append(op)
            dz = [DiffOp.d(self.dim_v + l, N) for l in range(self.dim_z)]
            self._fields = tuple(xs) + tuple(dz)
        return self._fields

    def field_symbols(self):
        """Symbols of the fields as polynomials in (x, xi), 2 * nvars variables."""
        N = self.nvars
        out = []
        for f in self.fields():
            s = ExactPoly(2 * N)
            for beta, a in f.terms.items():
                k = beta.index(1)
                s = s + ExactPoly._raw(2 * N, {e + tuple(int(j == k) for j in range(N)): c for e, c in a.terms.items()})
            out.append(s)
        return out

    def words(self, alpha) -> DiffOp:
        """Sum over all distinct orderings of the product of fields with multiplicities alpha."""
        alpha = tuple(alpha)
        if alpha in self._w:
            return self._w[alpha]
        N = self.nvars
        if not any(alpha):
            out = DiffOp.identity(N)
        elif any(alpha[self.dim_v:]):
            # central fields commute with everything: each word is (v-word) d_z^{alpha_z}
            av = alpha[: self.dim_v] + (0,) * self.dim_z
            az = (0,) * self.dim_v + alpha[self.dim_v:]
            k, kv = sum(alpha), sum(av)
            mult = comb(k, kv) * _multinom(az)
            out = (self.words(av) @ DiffOp.derivative(az, N)).scale(mult)
        else:
            F = self.fields()
            out = DiffOp(N)
            for i, a in enumerate(alpha):
                if a:
                    rest = list(alpha)
                    rest[i] -= 1
                    out = out + F[i] @ self.words(rest)
        self._w[alpha] = out
        return out

    def symmetrize_monomial(self, alpha) -> DiffOp:
        """lambda(x^alpha): the average over orderings (no i-power)."""
        k = sum(alpha)
        return self.words(alpha).scale(QQ(_multinom_denominator(alpha), factorial(k)))

    def poly_ring_variables(self) -> np.ndarray:
        return ExactPoly.variables(self.nvars)


def _multinom(alpha) -> int:
    k = sum(alpha)
    out = factorial(k)
    for a in alpha:
        out //= factorial(a)
    return out


def _multinom_denominator(alpha) -> int:
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


_IPOW = {0: QQ(1), 1: GaussQ(0, -1), 2: QQ(-1), 3: I}


def left_invariant_fields(case_or_algebra):
    alg = _algebra(case_or_algebra)
    return alg.fields()


def symmetrize(P: ExactPoly, case_or_algebra) -> DiffOp:
    """lambda'(P) via its normal-ordered symbol.

    In exponential coordinates x . exp(y) = x + y + [x, y]/2 is affine in y,
    so lambda(P) f(x) = P(d_y) f(x + A_x y)|_{y=0} = P(A_x^t xi) with xi -> d
    placed to the right of the x-dependent coefficients.  The i-power of the
    modified symmetrisation becomes the substitution xi -> -i A_x^t xi.
    """
    alg = _algebra(case_or_algebra)
    if P.nvars != alg.nvars:
        raise ValueError(f"polynomial has {P.nvars} variables, algebra {alg.nvars}")
    N = alg.nvars
    images = [s.scale(_IPOW[1]) for s in alg.field_symbols()]
    return _symbol_to_op(P.substitute(images, 2 * N), N)


def symmetrize_by_words(P: ExactPoly, case_or_algebra) -> DiffOp:
    """lambda'(P) straight from the definition: averages over orderings of field products."""
    alg = _algebra(case_or_algebra)
    out = DiffOp(alg.nvars)
    for alpha, c in P.terms.items():
        out = out + alg.symmetrize_monomial(alpha).scale(_norm(c * _IPOW[sum(alpha) % 4]))
    return out


def _symbol_to_op(sym: ExactPoly, N: int) -> DiffOp:
    t = {}
    for e, c in sym.terms.items():
        beta, xe = e[N:], e[:N]
        t.setdefault(beta, {})[xe] = c
    return DiffOp(N, {b: ExactPoly._raw(N, d) for b, d in t.items()})


def formal_adjoint(D: DiffOp) -> DiffOp:
    """Adjoint of a d^beta is (-1)^{|beta|} d^beta o conj(a), re-normal-ordered.

    d^beta o b = sum_{delta <= beta} C(beta, delta) (d^delta b) d^{beta - delta}.
    """
    N = D.nvars
    t = {}
    for beta, a in D.terms.items():
        ca = a.conj()
        sign = -1 if sum(beta) % 2 else 1
        nz = [(k, m) for k, m in enumerate(beta) if m]
        for sel in itertools.product(*[range(m + 1) for _, m in nz]):
            delta = [0] * N
            coef = sign
            for (k, m), j in zip(nz, sel):
                delta[k] = j
                coef *= comb(m, j)
            db = ca.diff_multi(delta)
            if not db.terms:
                continue
            rest = tuple(b - d for b, d in zip(beta, delta))
            bucket = t.setdefault(rest, {})
            for e, c in db.terms.items():
                s = bucket.get(e)
                bucket[e] = c * coef if s is None else s + c * coef
    return DiffOp(N, {b: ExactPoly(N, d) for b, d in t.items()})


def homogeneity_degree(D: DiffOp, dim_v: int):
    """gamma with D(f o delta_r) = r^gamma (D f) o delta_r for all terms, else None."""
    weights = set()
    for beta, a in D.terms.items():
        wb = sum(beta[:dim_v]) + 2 * sum(beta[dim_v:])
        for dv, dz in a.degree_split(dim_v):
            weights.add(wb - dv - 2 * dz)
    return weights.pop() if len(weights) == 1 else None


def z_order_lower_bound(D: DiffOp, dim_v: int):
    """min |beta_z| over the terms; None for the zero operator."""
    if not D.terms:
        return None
    return min(sum(b[dim_v:]) for b in D.terms)


def const_coeff_op(P: ExactPoly) -> DiffOp:
    """P(i^{-1} grad): x^alpha -> i^{-|alpha|} d^alpha."""
    out = DiffOp(P.nvars)
    for alpha, c in P.terms.items():
        out = out + DiffOp.derivative(alpha, P.nvars).scale(_norm(c * _IPOW[sum(alpha) % 4]))
    return out


def restrict_poly(P: ExactPoly, dim_v: int, zeta0) -> ExactPoly:
    """P(v, t zeta0) as a polynomial in (v, t)."""
    nout = dim_v + 1
    ims = [ExactPoly.var(k, nout) for k in range(dim_v)]
    t = ExactPoly.var(dim_v, nout)
    ims += [t.scale(QQ(x)) for x in zeta0]
    return P.substitute(ims, nout)


def radon_reduce(D: DiffOp, dim_v: int, zeta0) -> DiffOp:
    """D' with (D'G) o q = D(G o q), q(v, z) = (v, <z, zeta0>), coefficients restricted to z = t zeta0."""
    zeta = [QQ(x) for x in zeta0]
    nout = dim_v + 1
    out = DiffOp(nout)
    for beta, a in D.terms.items():
        bz = beta[dim_v:]
        c = QQ(1)
        for l, m in enumerate(bz):
            if m:
                c *= zeta[l] ** m
        if not c:
            continue
        nb = tuple(beta[:dim_v]) + (sum(bz),)
        out = out + DiffOp(nout, {nb: restrict_poly(a, dim_v, zeta).scale(c)})
    return out


def hilbert_polys(case):
    """Exact polynomials of the catalog generators (Table-1 coordinates are rational)."""
    return _hilbert_polys(case)


@lru_cache(maxsize=None)
def _hilbert_polys(case):
    N = case.dim_v + case.dim_z
    x = ExactPoly.variables(N)
    out = []
    for h in case.hilbert_basis:
        p = h.func(x[: case.dim_v], x[case.dim_v:])
        if isinstance(p, np.ndarray):
            p = p.item()
        if not isinstance(p, ExactPoly):
            p = ExactPoly.const(p, N)
        out.append(p)
    return tuple(out)


def rho_prime_polys(quotient):
    """Exact polynomials of the quotient generators rho'_v and t over (v, t)."""
    N = quotient.parent.dim_v + 1
    x = ExactPoly.variables(N)
    out = []
    for p in quotient.rho_v_prime:
        q = p.func(x[: quotient.parent.dim_v])
        out.append(q.item() if isinstance(q, np.ndarray) else q)
    out.append(x[-1])
    return tuple(out)


_ALGEBRAS = {}


def _algebra(obj) -> StepTwoAlgebra:
    if isinstance(obj, StepTwoAlgebra):
        return obj
    key = obj.key if hasattr(obj, "key") else obj
    if key not in _ALGEBRAS:
        from .pair_catalog import get_case
        case = obj if hasattr(obj, "key") else get_case(obj)
        _ALGEBRAS[key] = StepTwoAlgebra.from_case(case)
    return _ALGEBRAS[key]


def algebra_of(case) -> StepTwoAlgebra:
    return _algebra(case)
