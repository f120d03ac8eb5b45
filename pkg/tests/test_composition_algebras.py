from fractions import Fraction

import numpy as np
import pytest

from nilpair.composition_algebras import (
    CAElement, GaussQ, GaussianRationalRing, ca_conj, ca_im, ca_mul, ca_norm2, ca_re,
    hc_conj, hc_mul, hc_norm2, left_mult_matrix, right_mult_matrix,
)


def hamilton(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ])


def test_unit_law():
    x = CAElement("O", range(1, 9))
    one = CAElement.one("O")
    assert ca_mul(one, x) == x and ca_mul(x, one) == x


def test_i_times_j_is_k():
    i, j = CAElement.basis("H", 1), CAElement.basis("H", 2)
    assert ca_mul(i, j) == CAElement.basis("H", 3)
    assert ca_mul(j, i) == -CAElement.basis("H", 3)


def test_quaternions_match_hamilton_formula():
    rng = np.random.default_rng(1)
    for _ in range(20):
        p, q = rng.standard_normal((2, 4))
        np.testing.assert_allclose(hc_mul(p, q), hamilton(p, q), atol=1e-14)


@pytest.mark.parametrize("tag,n", [("C", 2), ("H", 4), ("O", 8)])
def test_composition_law(tag, n):
    rng = np.random.default_rng(2)
    x, y = rng.standard_normal((2, 10_000, n))
    res = hc_norm2(hc_mul(x, y)) - hc_norm2(x) * hc_norm2(y)
    assert np.max(np.abs(res)) <= 1e-12 * np.max(hc_norm2(x) * hc_norm2(y))


def test_conjugation_is_anti_automorphism():
    rng = np.random.default_rng(3)
    x, y = rng.standard_normal((2, 1000, 8))
    np.testing.assert_allclose(hc_conj(hc_mul(x, y)), hc_mul(hc_conj(y), hc_conj(x)), atol=1e-12)


def test_octonions_alternative_not_associative():
    rng = np.random.default_rng(4)
    x, y = rng.standard_normal((2, 1000, 8))
    np.testing.assert_allclose(hc_mul(hc_mul(x, x), y), hc_mul(x, hc_mul(x, y)), atol=1e-12)
    np.testing.assert_allclose(hc_mul(hc_mul(y, x), x), hc_mul(y, hc_mul(x, x)), atol=1e-12)
    e = [CAElement.basis("O", k) for k in range(8)]
    assert any(ca_mul(ca_mul(e[a], e[b]), e[c]) != ca_mul(e[a], ca_mul(e[b], e[c]))
               for a in range(1, 8) for b in range(1, 8) for c in range(1, 8))


@pytest.mark.parametrize("tag", ["R", "C", "H"])
def test_associative_tags(tag):
    n = {"R": 1, "C": 2, "H": 4}[tag]
    e = [CAElement.basis(tag, k) for k in range(n)]
    for a in e:
        for b in e:
            for c in e:
                assert ca_mul(ca_mul(a, b), c) == ca_mul(a, ca_mul(b, c))


def test_re_im_conj():
    i = CAElement.basis("H", 1)
    assert ca_conj(CAElement.one("H")) == CAElement.one("H")
    assert ca_im(i) == i and ca_re(i) == 0
    assert ca_norm2(CAElement("O", [1] * 8)) == 8


def test_mismatched_tags_rejected():
    with pytest.raises(ValueError):
        ca_mul(CAElement.one("H"), CAElement.one("O"))


def test_left_mult_matrix():
    e1 = CAElement.basis("O", 1)
    M = left_mult_matrix(e1)
    np.testing.assert_allclose(M, -M.T, atol=1e-12)
    np.testing.assert_allclose(M @ M, -np.eye(8), atol=1e-12)
    np.testing.assert_allclose(left_mult_matrix(CAElement.one("O")), np.eye(8))
    rng = np.random.default_rng(5)
    a, x = rng.standard_normal((2, 8))
    A, X = CAElement("O", a), CAElement("O", x)
    np.testing.assert_allclose(left_mult_matrix(A) @ x, ca_mul(A, X).to_array(), atol=1e-12)
    np.testing.assert_allclose(right_mult_matrix(A) @ x, ca_mul(X, A).to_array(), atol=1e-12)


def test_clifford_relation():
    for a in range(1, 8):
        for b in range(a + 1, 8):
            La = left_mult_matrix(CAElement.basis("O", a))
            Lb = left_mult_matrix(CAElement.basis("O", b))
            assert np.max(np.abs(La @ Lb + Lb @ La)) <= 1e-12


def test_exact_ring():
    R = GaussianRationalRing
    x = CAElement("H", [GaussQ(1, 2), R.zero, GaussQ(Fraction(1, 3)), R.one])
    y = CAElement("H", [R.one, GaussQ(0, 1), R.zero, GaussQ(-2)])
    lhs = ca_norm2(ca_mul(x, y))
    assert lhs == ca_norm2(x) * ca_norm2(y)
    assert GaussQ(1, 1) * GaussQ(1, -1) == 2
