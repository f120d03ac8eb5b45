"""Acceptance criteria 1-11, one PASS/FAIL line each."""

import time

import numpy as np
import pytest
from scipy.stats import ortho_group

from nilpair import invariant_engine as ie
from nilpair import pair_catalog as pc
from nilpair import radon_spectrum as rs
from nilpair import symm_calculus as sc
from nilpair import verify_cli as cli
from nilpair.symm_calculus import DiffOp

TABLE1 = pc.table1_cases()
EXACT_CASES = [c for c in pc.all_cases() if c.bracket is not None and c.exact]
LINE_OF = {c.key: int(c.id[4:]) for c in TABLE1}


def _expected_degree(h, block):
    if h.family == "Delta":
        return 4
    if h.family == "M":
        return 4 if block == 2 else 3
    # |v|^2 gives L; the extra v-quartics of lines 6-9 give degree 4
    return 2 if h.bidegree == (2, 0) else 4


@pytest.fixture
def verdict(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {k:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def _fields_sum_sq(alg):
    F = alg.fields()
    out = DiffOp(alg.nvars)
    for r in range(alg.dim_v):
        out = out - F[r] @ F[r]
    return out


def _ops(case):
    alg = sc.algebra_of(case)
    return alg, sc.hilbert_polys(case), [sc.symmetrize(p, alg) for p in sc.hilbert_polys(case)]


def test_criterion_01_invariance(verdict):
    t0 = time.perf_counter()
    worst_g = worst_i = 0.0
    bad = []
    cases = pc.all_cases()
    for case in cases:
        g = ie.invariance_residual(case, 100, 0)
        i = ie.infinitesimal_residual(case, 20, 0)
        worst_g, worst_i = max(worst_g, g), max(worst_i, i)
        if g > 1e-8 or i > 1e-6:
            bad.append(case.key)
    dt = time.perf_counter() - t0
    verdict(1, not bad and dt <= 60,
            f"{len(cases)} cases, max group residual {worst_g:.1e} (<=1e-8), max infinitesimal {worst_i:.1e} "
            f"(<=1e-6), {dt:.1f} s (<=60 s){', failing ' + str(bad) if bad else ''}")


def test_criterion_02_independence(verdict):
    rates = {c.key: float(np.mean(ie.jacobian_ranks(c, 100, 0, tol=1e-8) == c.d)) for c in pc.all_cases()}
    worst = min(rates, key=rates.get)
    verdict(2, all(r >= 0.95 for r in rates.values()),
            f"rank = d on >= {min(rates.values()):.2f} of 100 points in every case (worst {worst})")


def test_criterion_03_htype(verdict):
    rng = np.random.default_rng(0)
    worst = 0.0
    for case in TABLE1:
        if case.block in (1, 2):
            for _ in range(50):
                z, v = rng.standard_normal(case.dim_z), rng.standard_normal(case.dim_v)
                J = pc.j_map(case, z)
                worst = max(worst, abs(np.linalg.norm(J @ v) - np.linalg.norm(z) * np.linalg.norm(v)))
    radicals = []
    for line in (10, 11, 12):
        case = pc.get_case(f"T1-L{line}")
        J = pc.j_map(case, pc.get_quotient(line).zeta0_array())
        radicals.append(case.dim_v - int(np.linalg.matrix_rank(J, tol=1e-8 * np.linalg.norm(J, 2))))
    verdict(3, worst <= 1e-10 and radicals == [1, 2, 1],
            f"blocks 1-2 max ||J_z v| - |z||v|| = {worst:.1e} (<=1e-10); block-3 radicals {radicals} (want [1, 2, 1])")


def test_criterion_04_rank_one(verdict):
    rng = np.random.default_rng(1)
    got = {c.key: (ie.orbit_codim(c, rng.standard_normal(c.dim_z)), c.dim_z - 1) for c in TABLE1}
    bad = [k for k, (a, b) in got.items() if a != b]
    verdict(4, not bad, f"generic orbit dimension = dim z - 1 on {len(got) - len(bad)}/{len(got)} Table-1 cases")


def test_criterion_05_structure_constants(verdict):
    bad = []
    for case in EXACT_CASES:
        alg = sc.algebra_of(case)
        F = alg.fields()
        c = pc.structure_constants(case, exact=True)
        for r in range(case.dim_v):
            for s in range(r + 1, case.dim_v):
                rhs = DiffOp(alg.nvars)
                for l in range(case.dim_z):
                    if c[l, r, s]:
                        rhs = rhs + F[case.dim_v + l].scale(sc.QQ(c[l, r, s]))
                if F[r].commutator(F[s]) != rhs:
                    bad.append((case.key, r, s))
    verdict(5, not bad, f"[X_r, X_s] = sum c d_z exactly on {len(EXACT_CASES)} exact-pipeline cases"
            + (f", mismatches {bad[:5]}" if bad else ""))


def test_criterion_06_symmetrisation(verdict):
    problems = []
    for case in TABLE1:
        alg, polys, ops = _ops(case)
        if ops[0] != _fields_sum_sq(alg):
            problems.append(f"{case.key}: lambda'(|v|^2) != L")
        if any(sc.formal_adjoint(o) != o for o in ops):
            problems.append(f"{case.key}: not self-adjoint")
        for h, o in zip(case.hilbert_basis, ops):
            want = _expected_degree(h, case.block)
            if sc.homogeneity_degree(o, case.dim_v) != want:
                problems.append(f"{case.key}: degree of {h.name}")
    verdict(6, not problems, f"L, self-adjointness and degrees (L:2, Delta:4, M:4/3, extra L:4) on {len(TABLE1)} cases"
            + (f"; {problems}" if problems else ""))


def test_criterion_07_radon(verdict):
    bad, worst = [], 0.0
    for case in TABLE1:
        line = LINE_OF[case.key]
        alg, polys, ops = _ops(case)
        q = pc.get_quotient(line, case.n_param)
        qalg = alg.quotient(q.zeta0)
        for h, p, o in zip(case.hilbert_basis, polys, ops):
            if sc.radon_reduce(o, case.dim_v, q.zeta0) != sc.symmetrize(sc.restrict_poly(p, case.dim_v, q.zeta0), qalg):
                bad.append((case.key, h.name))
        F = rs.default_test_function(line, case.n_param)
        for fam in ("L", "Delta", "M"):
            if fam == "M" and case.block == 1:
                continue
            D = rs.family_operator(line, fam, case.n_param)
            worst = max(worst, rs.check_radon_commutation(line, D, F, case.n_param))
    verdict(7, not bad and worst <= 1e-6,
            f"RadonD exact for every generator ({'ok' if not bad else bad}); quadrature residual {worst:.1e} (<=1e-6)")


def test_criterion_08_constant_coefficients(verdict):
    out = {}
    for line in (4, 10):
        case = pc.get_case(f"T1-L{line}")
        alg, polys, ops = _ops(case)
        i = [h.family for h in case.hilbert_basis].index("M")
        M, p = ops[i], sc.const_coeff_op(polys[i])
        out[line] = [sc.z_order_lower_bound(M ** j - p ** j, case.dim_v) for j in (1, 2)]
    ok = all(b is None or b >= j + 1 for bounds in out.values() for j, b in zip((1, 2), bounds))
    verdict(8, ok, f"z-order bounds for j = 1, 2: line 4 {out[4]}, line 10 {out[10]} (None: difference is zero)")


def test_criterion_09_pfaffian(verdict):
    rng = np.random.default_rng(2)
    rel = 0.0
    for n in (2, 4, 6, 8, 10):
        for _ in range(10):
            a = rng.standard_normal((n, n))
            M = a - a.T
            rel = max(rel, abs(ie.pfaffian(M) ** 2 - np.linalg.det(M)) / abs(np.linalg.det(M)))
    a = rng.standard_normal((6, 6))
    M = a - a.T
    pf = ie.pfaffian(M)
    cov = max(abs(ie.pfaffian(g @ M @ g.T) - np.linalg.det(g) * pf)
              for g in ortho_group.rvs(6, size=50, random_state=rng)) / abs(pf)
    pf_cases = [c for c in pc.all_cases() if c.id in ("A1", "A4", "A5")]
    inv = max(ie.invariance_residual(c, 100, 0) for c in pf_cases)
    inf = max(ie.infinitesimal_residual(c, 20, 0) for c in pf_cases)
    verdict(9, rel <= 1e-8 and cov <= 1e-8 and inv <= 1e-8 and inf <= 1e-6,
            f"Pf^2 = det rel {rel:.1e}; Pf(gMg^t) = det(g) Pf(M) rel {cov:.1e} over 50 g; "
            f"bordered cases ({len(pf_cases)}) residuals {inv:.1e} / {inf:.1e}")


def test_criterion_10_combinatorics_theta(verdict):
    counts = all(len(rs.e_n_set(n)) == n // 2 + 2 and (0, n // 2 + 1) in rs.e_n_set(n) for n in range(41))
    example = np.allclose(rs.theta_map(4, [1, 0.5, 4]), [1, 0.25, 2], rtol=0, atol=1e-15)
    injective = True
    rng = np.random.default_rng(3)
    for line in range(1, 13):
        d = pc.get_case(f"T1-L{line}").d
        xi = rng.standard_normal((10_000, d))
        xi[:, -1] = np.abs(xi[:, -1]) + 1e-6
        eta = rs.theta_map(line, xi)
        _, first = np.unique(eta, axis=0, return_index=True)
        injective &= len(first) == len(np.unique(xi, axis=0))
        injective &= np.allclose(rs.theta_inverse(line, eta), xi, rtol=1e-10, atol=1e-12)
    verdict(10, counts and example and injective,
            f"|E_n| = floor(n/2) + 2 with (0, m+1) for n <= 40: {counts}; line-4 example: {example}; "
            f"injective on 1e4 tuples x 12 lines: {injective}")


def test_criterion_11_determinism(verdict):
    t0 = time.perf_counter()
    a = cli.run_suite(cli.SuiteConfig())
    dt = time.perf_counter() - t0
    b = cli.run_suite(cli.SuiteConfig())
    same = cli.report_json(cli.strip_timing(a)) == cli.report_json(cli.strip_timing(b))
    verdict(11, a["verdict"] == "pass" and dt <= 120 and same,
            f"default verify: {a['verdict']} on {len(a['cases'])} cases in {dt:.1f} s (<=120 s); "
            f"second run byte-identical: {same}")
