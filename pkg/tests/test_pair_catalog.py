import json

import numpy as np
import pytest

from nilpair import pair_catalog as pc
from nilpair.group_actions import numeric_rank

TABLE1_DIMS = {1: (4, 2), 2: (4, 3), 3: (8, 7), 4: (4, 3), 5: (8, 5), 6: (8, 3), 7: (12, 3), 8: (16, 3),
               9: (16, 7), 10: (3, 3), 11: (6, 6), 12: (7, 7)}
TABLE1_D = {1: 2, 2: 2, 3: 2, 4: 3, 5: 3, 6: 4, 7: 4, 8: 5, 9: 4, 10: 3, 11: 4, 12: 3}


@pytest.mark.parametrize("line", range(1, 13))
def test_table1_shape(line):
    case = pc.get_case(f"T1-L{line}")
    assert (case.dim_v, case.dim_z) == TABLE1_DIMS[line]
    assert case.d == TABLE1_D[line]
    assert case.block == (1 if line <= 3 else 2 if line <= 9 else 3)
    assert case.hilbert_basis[0].name == "|v|^2" and case.hilbert_basis[-1].name == "|z|^2"


def test_line2_basis_values():
    case = pc.get_case("T1-L2", 1)
    assert [h.name for h in case.hilbert_basis] == ["|v|^2", "|z|^2"]
    v = np.array([0.6, 0, 0.8, 0])
    z = np.array([0, 1.0, 0])
    np.testing.assert_allclose(case.eval_hilbert(v, z), [1, 1], atol=1e-15)


def test_line10_basis():
    case = pc.get_case("T1-L10")
    assert [h.name for h in case.hilbert_basis] == ["|v|^2", "t v z", "|z|^2"]
    assert [h.bidegree for h in case.hilbert_basis] == [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("bad", [("T1-L13", None), ("A13", None), ("T1-L7", 1), ("A1", 2), ("B1", None)])
def test_invalid_ids(bad):
    with pytest.raises(pc.CatalogError):
        pc.get_case(*bad)


def test_brackets_examples():
    line2 = pc.get_case("T1-L2", 1)
    np.testing.assert_allclose(pc.bracket(line2, [1, 0, 0, 0], [0, 1, 0, 0]), [1, 0, 0])
    line10 = pc.get_case("T1-L10")
    e = np.eye(6)
    np.testing.assert_allclose(pc.bracket(line10, e[0], e[1]), [0, 0, 1])
    np.testing.assert_allclose(pc.bracket(line10, e[1], e[2]), [1, 0, 0])


@pytest.mark.parametrize("case", pc.table1_cases(include_regression=False), ids=lambda c: c.key)
def test_bracket_is_antisymmetric_and_surjective(case):
    rng = np.random.default_rng(0)
    v, u, w = rng.standard_normal((3, case.dim_v))
    assert np.max(np.abs(pc.bracket(case, v, v))) <= 1e-12
    np.testing.assert_allclose(pc.bracket(case, v, u), -pc.bracket(case, u, v), atol=1e-12)
    np.testing.assert_allclose(pc.bracket(case, v, 2 * u + w), 2 * pc.bracket(case, v, u) + pc.bracket(case, v, w),
                               atol=1e-12)
    c = pc.structure_constants(case, exact=False)
    assert numeric_rank(c.reshape(case.dim_z, -1)) == case.dim_z


@pytest.mark.parametrize("case", pc.table1_cases(include_regression=False), ids=lambda c: c.key)
def test_j_map(case):
    rng = np.random.default_rng(1)
    z = rng.standard_normal(case.dim_z)
    J = pc.j_map(case, z)
    np.testing.assert_allclose(J, -J.T, atol=1e-12)
    assert np.all(pc.j_map(case, np.zeros(case.dim_z)) == 0)
    v, u = rng.standard_normal((2, case.dim_v))
    assert abs(u @ J @ v - z @ pc.bracket(case, v, u)) <= 1e-12
    if case.block in (1, 2):
        z, v = z / np.linalg.norm(z), v / np.linalg.norm(v)
        assert abs(np.linalg.norm(pc.j_map(case, z) @ v) - 1) <= 1e-10


@pytest.mark.parametrize("line,r", [(10, 1), (11, 2), (12, 1)])
def test_block3_radical(line, r):
    case = pc.get_case(f"T1-L{line}")
    q = pc.get_quotient(line)
    assert numeric_rank(pc.j_map(case, q.zeta0_array())) == case.dim_v - r
    assert q.radical == r
    rng = np.random.default_rng(2)
    z, v = rng.standard_normal((200, case.dim_z)), rng.standard_normal((200, case.dim_v))
    gap = [abs(np.linalg.norm(pc.j_map(case, a) @ b) - np.linalg.norm(a) * np.linalg.norm(b)) for a, b in zip(z, v)]
    assert max(gap) > 1e-3


def test_line10_generic_rank():
    case = pc.get_case("T1-L10")
    z = np.random.default_rng(3).standard_normal(3)
    assert numeric_rank(pc.j_map(case, z)) == 2


def test_quotients():
    assert [p.name for p in pc.get_quotient(4).rho_v_prime] == ["|v|^2", "|v1|^2-|v2|^2"]
    assert [p.name for p in pc.get_quotient(12).rho_v_prime] == ["|v|^2", "v7"]
    assert [p.name for p in pc.get_quotient(1).rho_v_prime] == ["|v|^2"]
    for line in range(1, 13):
        q = pc.get_quotient(line)
        assert q.d == q.parent.d


def test_central_reduction():
    a7 = pc.get_case("A7", 2, "Sp")
    assert pc.central_reduction(a7, np.zeros((a7.dim_z, 0))) is a7
    hs_block = np.eye(a7.dim_z)[:, :5]
    assert pc.central_reduction(a7, hs_block).dim_z == 3
    with pytest.raises(pc.CatalogError):
        pc.central_reduction(a7, np.eye(a7.dim_z))
    with pytest.raises(pc.CatalogError):
        pc.central_reduction(a7, np.eye(a7.dim_z)[:, :1])


def test_default_parameters():
    keys = [c.key for c in pc.all_cases()]
    assert "A1:O[n=4]" in keys and "A1:O[n=5]" in keys
    assert len(keys) == len(set(keys))
    assert [c.key for c in pc.table1_cases(include_regression=False)][:2] == ["T1-L1[n=1]", "T1-L2[n=1]"]


def test_catalog_rows():
    rows = pc.catalog_rows()
    assert [len(rows[k]) for k in ("table1", "appendix", "quotients")] == [12, 12, 12]
    for r in rows["table1"] + rows["appendix"]:
        assert {"id", "dim_v", "dim_z", "d", "bidegrees", "block"} <= set(r)
    json.dumps(rows)
