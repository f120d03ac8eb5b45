import numpy as np
import pytest

from nilpair import pair_catalog as pc
from nilpair.composition_algebras import CAElement, hc_mul, left_mult_matrix
from nilpair.group_actions import (
    ActionElement, GroupElement, RankAmbiguityError, commutator_closure_residual, exp_action, g2_basis,
    lie_basis, numeric_rank, sample_group_element, so_basis, solve_center_action, sp_basis, span_residual,
    spin7_basis, su_basis, u_basis,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_classical_dimensions(n):
    assert len(so_basis(n)) == n * (n - 1) // 2
    assert len(u_basis(n)) == n * n
    assert len(su_basis(n)) == n * n - 1
    assert len(sp_basis(n)) == n * (2 * n + 1)


@pytest.mark.parametrize("case_id,n,count", [("T1-L2", 1, 6), ("T1-L1", 2, 11), ("A3", None, 14),
                                             ("A2", None, 21), ("T1-L3", None, 21)])
def test_lie_basis_length(case_id, n, count):
    assert len(lie_basis(case_id, n)) == count


def test_g2_derivations():
    basis = g2_basis()
    assert len(basis) == 14
    rng = np.random.default_rng(0)
    x, y = rng.standard_normal((2, 8))
    for D7 in basis:
        D = np.zeros((8, 8))
        D[1:, 1:] = D7
        lhs = D @ hc_mul(x, y)
        rhs = hc_mul(D @ x, y) + hc_mul(x, D @ y)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10
    assert commutator_closure_residual(basis) <= 1e-10


def test_spin7_basis():
    basis = spin7_basis()
    assert len(basis) == 21
    assert numeric_rank(np.array([b.ravel() for b in basis])) == 21
    assert max(np.abs(b + b.T).max() for b in basis) <= 1e-12
    assert commutator_closure_residual(basis) <= 1e-10


def test_spin7_excludes_generic_skew():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((8, 8))
    assert span_residual(spin7_basis(), [A - A.T]) > 1e-3


def _br(case):
    return lambda v, u: pc.bracket(case, v, u)


def test_solve_center_action():
    case = pc.get_case("A2")
    zero = solve_center_action(np.zeros((8, 8)), _br(case), 8, 7)
    assert np.all(zero.a_z == 0) and zero.residual <= 1e-12
    e = [CAElement.basis("O", k) for k in range(8)]
    av = left_mult_matrix(e[1]) @ left_mult_matrix(e[2])
    assert solve_center_action(av, _br(case), 8, 7).residual <= 1e-9
    rng = np.random.default_rng(2)
    A = rng.standard_normal((8, 8))
    assert solve_center_action(A - A.T, _br(case), 8, 7).residual > 1e-3


def test_every_catalog_generator_is_skew():
    for case in pc.all_cases(include_regression=False):
        assert max(g.skew_residual() for g in case.generators) <= 1e-12, case.key


def test_bracket_equivariance():
    for case in pc.all_cases(include_regression=False):
        if case.bracket is None:
            continue
        for g in case.generators:
            assert solve_center_action(g.a_v, _br(case), case.dim_v, case.dim_z).residual <= 1e-9, case.key


def test_exp_action():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 6))
    B = rng.standard_normal((3, 3))
    X = ActionElement(A - A.T, B - B.T)
    assert exp_action(ActionElement(np.zeros((6, 6)), np.zeros((3, 3)))).orthogonality_residual() == 0
    g = exp_action(X, 0.7)
    assert g.orthogonality_residual() <= 1e-10
    back = g @ exp_action(X, -0.7)
    assert back.orthogonality_residual() <= 1e-10
    np.testing.assert_allclose(back.g_v, np.eye(6), atol=1e-10)


def test_sampling_is_deterministic():
    case = pc.get_case("T1-L9")
    a, b = sample_group_element(case, 11), sample_group_element(case, 11)
    assert np.array_equal(a.g_v, b.g_v) and np.array_equal(a.g_z, b.g_z)
    assert not np.array_equal(a.g_v, sample_group_element(case, 12).g_v)
    assert a.orthogonality_residual() <= 1e-10


def test_identity_element():
    g = GroupElement.identity(3, 2)
    v, z = g.act(np.arange(3.0), np.arange(2.0))
    assert np.array_equal(v, np.arange(3.0)) and np.array_equal(z, np.arange(2.0))


def test_rank_ambiguity_detected():
    m = np.diag([1.0, 1e-8])
    with pytest.raises(RankAmbiguityError):
        numeric_rank(m, strict=True)
    assert numeric_rank(np.diag([1.0, 1e-14])) == 1
