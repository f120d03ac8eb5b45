from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from nilpair import pair_catalog as pc
from nilpair import symm_calculus as sc
from nilpair.composition_algebras import GaussQ
from nilpair.symm_calculus import DiffOp, ExactPoly, QQ, StepTwoAlgebra

GOLDEN = Path(__file__).parent / "golden"
LINES = range(1, 13)


def case_of(line):
    return pc.get_case(f"T1-L{line}")


def sublaplacian(alg):
    F = alg.fields()
    out = DiffOp(alg.nvars)
    for r in range(alg.dim_v):
        out = out - F[r] @ F[r]
    return out


def central_laplacian(alg):
    out = DiffOp(alg.nvars)
    for l in range(alg.dim_z):
        out = out - DiffOp.d(alg.dim_v + l, alg.nvars, 2)
    return out


def test_exact_poly_arithmetic():
    x, y = ExactPoly.variables(2)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert (p - p).terms == {}
    assert p.diff(0) == x.scale(2)
    assert p.evaluate(np.array([3.0, 1.0])) == 8
    assert ExactPoly.const(0, 2).terms == {}


def test_abelian_fields():
    alg = StepTwoAlgebra.abelian(3)
    assert list(alg.fields()) == [DiffOp.d(k, 3) for k in range(3)]


@pytest.mark.parametrize("line", LINES)
def test_structure_constants(line):
    case = case_of(line)
    alg = sc.algebra_of(case)
    F = alg.fields()
    c = pc.structure_constants(case, exact=False)
    for r in range(case.dim_v):
        for s in range(case.dim_v):
            rhs = DiffOp(alg.nvars)
            for l in range(case.dim_z):
                if c[l, r, s]:
                    rhs = rhs + F[case.dim_v + l].scale(QQ(Fraction(c[l, r, s])))
            assert F[r].commutator(F[s]) == rhs
        for l in range(case.dim_z):
            assert F[r].commutator(F[case.dim_v + l]).is_zero()


def test_degree_one_symmetrisation():
    alg = sc.algebra_of(case_of(4))
    x = ExactPoly.variables(alg.nvars)
    assert sc.symmetrize(x[2], alg) == alg.fields()[2].scale(GaussQ(0, -1))


@pytest.mark.parametrize("line", LINES)
def test_sublaplacian_and_central_laplacian(line):
    case = case_of(line)
    alg = sc.algebra_of(case)
    polys = sc.hilbert_polys(case)
    assert sc.symmetrize(polys[0], alg) == sublaplacian(alg)
    assert sc.symmetrize(polys[-1], alg) == central_laplacian(alg)


@pytest.mark.parametrize("line", [1, 4, 5, 6, 10, 11, 12])
def test_symbol_method_matches_word_oracle(line):
    case = case_of(line)
    alg = sc.algebra_of(case)
    for p in sc.hilbert_polys(case):
        assert sc.symmetrize(p, alg) == sc.symmetrize_by_words(p, alg)


def test_word_oracle_on_mixed_monomials():
    alg = sc.algebra_of(case_of(2))
    x = ExactPoly.variables(alg.nvars)
    for p in (x[0] * x[1] * x[4], x[0] * x[0] * x[1], x[2] * x[5] * x[5] * x[3], x[0] * x[1] * x[2] * x[3]):
        assert sc.symmetrize(p, alg) == sc.symmetrize_by_words(p, alg)


@pytest.mark.parametrize("line,name", [(4, "line4_mixed_operator.txt"), (10, "line10_mixed_operator.txt")])
def test_golden_mixed_operator(line, name):
    case = case_of(line)
    alg = sc.algebra_of(case)
    i = [h.family for h in case.hilbert_basis].index("M")
    op = sc.symmetrize(sc.hilbert_polys(case)[i], alg)
    assert op.to_str(alg.names) + "\n" == (GOLDEN / name).read_text()


def test_adjoint_basics():
    d = DiffOp.d(5, 7)
    assert sc.formal_adjoint(d) == -d
    rng = np.random.default_rng(0)
    x = ExactPoly.variables(3)
    D = DiffOp(3)
    for _ in range(5):
        beta = tuple(rng.integers(0, 3, 3))
        coef = (x[int(rng.integers(3))] * x[int(rng.integers(3))]).scale(GaussQ(int(rng.integers(-3, 4)), 1))
        D = D + DiffOp(3, {beta: coef})
    assert sc.formal_adjoint(sc.formal_adjoint(D)) == D


@pytest.mark.parametrize("line", LINES)
def test_generators_are_self_adjoint(line):
    case = case_of(line)
    alg = sc.algebra_of(case)
    for p in sc.hilbert_polys(case):
        assert p.is_real()
        op = sc.symmetrize(p, alg)
        assert sc.formal_adjoint(op) == op


def test_non_real_symbol_is_not_self_adjoint():
    alg = sc.algebra_of(case_of(10))
    x = ExactPoly.variables(alg.nvars)
    op = sc.symmetrize(x[0].scale(GaussQ(0, 1)), alg)
    assert sc.formal_adjoint(op) != op


@pytest.mark.parametrize("line", LINES)
def test_homogeneity(line):
    case = case_of(line)
    alg = sc.algebra_of(case)
    degs = [sc.homogeneity_degree(sc.symmetrize(p, alg), case.dim_v) for p in sc.hilbert_polys(case)]
    assert degs == [h.gamma for h in case.hilbert_basis]
    assert degs[0] == 2 and degs[-1] == 4
    mixed = [g for g, h in zip(degs, case.hilbert_basis) if h.family == "M"]
    assert set(mixed) == ({4} if case.block == 2 else {3} if case.block == 3 else set())


def test_mixed_homogeneity_is_none():
    alg = sc.algebra_of(case_of(4))
    assert sc.homogeneity_degree(DiffOp.d(0, alg.nvars) + DiffOp.d(4, alg.nvars), 4) is None


def test_composition_is_associative():
    alg = sc.algebra_of(case_of(4))
    F = alg.fields()
    x = ExactPoly.variables(alg.nvars)
    A = F[0] @ F[1] + DiffOp.multiplication(x[2] * x[5])
    B = F[3].scale(GaussQ(0, 1)) + F[5]
    C = F[2] @ F[2] + DiffOp.multiplication(x[0])
    assert (A @ B) @ C == A @ (B @ C)


@pytest.mark.parametrize("line", [2, 4, 10])
def test_symmetrisation_equivariance(line):
    case = case_of(line)
    alg = sc.algebra_of(case)
    N = alg.nvars
    x = ExactPoly.variables(N)
    polys = [x[0] * x[1], x[0] * x[case.dim_v], x[1] * x[1] + x[case.dim_v + case.dim_z - 1]]
    for g in case.generators[:4]:
        A = np.zeros((N, N))
        A[:case.dim_v, :case.dim_v] = g.a_v
        A[case.dim_v:, case.dim_v:] = g.a_z
        V = DiffOp(N)
        for i in range(N):
            coef = ExactPoly(N)
            for j in range(N):
                if A[i, j]:
                    coef = coef + x[j].scale(QQ(Fraction(A[i, j])))
            V = V + DiffOp(N, {tuple(int(k == i) for k in range(N)): coef})
        for P in polys:
            assert sc.symmetrize(V.apply(P), alg) == V.commutator(sc.symmetrize(P, alg))


@pytest.mark.parametrize("line", LINES)
def test_radon_reduction_commutes_with_symmetrisation(line):
    case = case_of(line)
    alg = sc.algebra_of(case)
    q = pc.get_quotient(line)
    qalg = alg.quotient(q.zeta0)
    for p in sc.hilbert_polys(case):
        lhs = sc.radon_reduce(sc.symmetrize(p, alg), case.dim_v, q.zeta0)
        assert lhs == sc.symmetrize(sc.restrict_poly(p, case.dim_v, q.zeta0), qalg)
    assert sc.radon_reduce(sublaplacian(alg), case.dim_v, q.zeta0) == sublaplacian(qalg)
    assert sc.radon_reduce(central_laplacian(alg), case.dim_v, q.zeta0) == -DiffOp.d(case.dim_v, case.dim_v + 1, 2)


@pytest.mark.parametrize("line", LINES)
def test_restriction_matches_quotient_generators(line):
    q = pc.get_quotient(line)
    case = q.parent
    rho_p = sc.rho_prime_polys(q)
    for h, p in zip(case.hilbert_basis, sc.hilbert_polys(case)):
        if h.restricts_to is None:
            continue
        prod = ExactPoly.const(1, case.dim_v + 1)
        for j in h.restricts_to:
            prod = prod * rho_p[j]
        assert sc.restrict_poly(p, case.dim_v, q.zeta0) == prod


def test_z_order():
    alg = sc.algebra_of(case_of(4))
    assert sc.z_order_lower_bound(central_laplacian(alg), 4) == 2
    assert sc.z_order_lower_bound(DiffOp(alg.nvars), 4) is None


@pytest.mark.parametrize("line,expected", [(4, [2, 3]), (5, [2, 3]), (10, [None, None])])
def test_constant_coefficient_replacement(line, expected):
    case = case_of(line)
    alg = sc.algebra_of(case)
    i = [h.family for h in case.hilbert_basis].index("M")
    P = sc.hilbert_polys(case)[i]
    M, p = sc.symmetrize(P, alg), sc.const_coeff_op(P)
    bounds = [sc.z_order_lower_bound(M ** j - p ** j, case.dim_v) for j in (1, 2)]
    assert bounds == expected
    for j, b in zip((1, 2), bounds):
        assert b is None or b >= j + 1
