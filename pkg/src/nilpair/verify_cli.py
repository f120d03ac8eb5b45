"""Command-line front end: ``nilpair verify | catalog | radon-demo``.

Exit codes: 0 when every enabled check passes, 1 on a check failure, 2 on a
configuration error.  ``--report PATH`` writes the JSON report; apart from
the ``elapsed_ms`` fields it is byte-identical for a fixed seed and config.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from . import invariant_engine as ie
from . import pair_catalog as pc
from . import radon_spectrum as rs
from . import symm_calculus as sc

SCHEMA = "nilpair-report/1"
ALL_CHECKS = ("invariance", "infinitesimal", "jacobian", "bidegree", "restriction",
              "htype", "orbit", "exact", "radon")
EXACT_CHECKS = ("exact", "radon")
ZORDER_LINES = (4, 10)


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    cases: list = field(default_factory=lambda: ["all"])
    n: int | None = None
    samples: int = 100
    tol_group: float = 1e-8
    tol_inf: float = 1e-6
    tol_rank_rate: float = 0.95
    tol_bidegree: float = 1e-9
    tol_restriction: float = 1e-9
    tol_htype: float = 1e-10
    tol_radon: float = 1e-6
    seed: int = 0
    checks: tuple = ALL_CHECKS
    exact: bool = True
    jobs: int = 1

    def validate(self):
        if self.samples <= 0:
            raise ConfigError("--samples must be positive")
        for name in ("tol_group", "tol_inf", "tol_bidegree", "tol_restriction", "tol_htype", "tol_radon"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v >= 0 and math.isfinite(v)):
                raise ConfigError(f"{name} must be a finite non-negative number")
        bad = [c for c in self.checks if c not in ALL_CHECKS]
        if bad:
            raise ConfigError(f"unknown checks {bad}; choose from {list(ALL_CHECKS)}")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        return self


# ---------------------------------------------------------------------------
# case selection


def _normalise_selector(sel: str) -> str:
    s = sel.strip()
    low = s.lower()
    if low.startswith("table1-line"):
        return "T1-L" + s[len("table1-line"):]
    if low.startswith("appendix"):
        return "A" + s[len("appendix"):].lstrip("-_ ")
    return s


def select_cases(selectors, n=None):
    """Keys (id, n, variant) in report order; parametrised cases default to (n_min, n_min + 1)."""
    keys = []
    for raw in selectors:
        sel = _normalise_selector(raw)
        if sel in ("all", "table1", "appendix"):
            pool = {"all": pc.all_cases, "table1": pc.table1_cases, "appendix": pc.appendix_cases}[sel]()
            keys += [(c.id, c.n_param, c.variant) for c in pool]
            continue
        try:
            kind, k, variant = pc.parse_id(sel)
        except pc.CatalogError as e:
            raise ConfigError(str(e)) from None
        if kind == "Q":
            raise ConfigError("quotient rows are checked through their Table-1 line")
        cid = f"T1-L{k}" if kind == "T1" else f"A{k}"
        variants = [variant] if variant else list(pc.APPENDIX_VARIANTS.get(k, (None,))) if kind == "A" else [None]
        for var in variants:
            try:
                if n is not None:
                    ns = [n]
                else:
                    base = pc.get_case(cid, None, var)
                    ns = [base.n_param] if base.n_param is None else [base.n_param, base.n_param + 1]
                for m in ns:
                    c = pc.get_case(cid, m, var)
                    keys.append((c.id, c.n_param, c.variant))
            except pc.CatalogError as e:
                raise ConfigError(str(e)) from None
    seen, out = set(), []
    for key in keys:
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


# ---------------------------------------------------------------------------
# per-case checks


def _exact_checks(case, record, cfg):
    alg = sc.algebra_of(case)
    F = alg.fields()
    dv, N = case.dim_v, alg.nvars
    ok = True
    for r in range(dv):
        for s in range(r + 1, dv):
            rhs = sc.DiffOp(N)
            for l in range(case.dim_z):
                if alg.c[l, r, s]:
                    rhs = rhs + F[dv + l].scale(alg.c[l, r, s])
            if not (F[r].commutator(F[s]) - rhs).is_zero():
                ok = False
    out = {"structure_constants": ok}
    if case.id.startswith("T1-"):
        line = int(case.id[4:])
        polys = sc.hilbert_polys(case)
        ops = [sc.symmetrize(p, alg) for p in polys]
        L = sc.DiffOp(N)
        for r in range(dv):
            L = L - F[r] @ F[r]
        out["sublaplacian"] = ops[0] == L
        out["self_adjoint"] = all(sc.formal_adjoint(o) == o for o in ops)
        degs = [sc.homogeneity_degree(o, dv) for o in ops]
        record["homogeneity_degrees"] = degs
        out["homogeneity"] = degs == [h.gamma for h in case.hilbert_basis]
        q = pc.get_quotient(line, case.n_param)
        qalg = alg.quotient(q.zeta0)
        out["radon_d"] = all(sc.radon_reduce(o, dv, q.zeta0) == sc.symmetrize(sc.restrict_poly(p, dv, q.zeta0), qalg)
                             for o, p in zip(ops, polys))
        if line in ZORDER_LINES:
            i = next(j for j, h in enumerate(case.hilbert_basis) if h.family == "M")
            M, p = ops[i], sc.const_coeff_op(polys[i])
            bounds = []
            for j in (1, 2):
                b = sc.z_order_lower_bound(M ** j - p ** j, dv)
                bounds.append(b)
                # zero operator: the bound holds vacuously
                if b is not None and b < j + 1:
                    out["z_order"] = False
            out.setdefault("z_order", True)
            record["z_order_bounds"] = bounds
    return out


def run_case(key, cfg: SuiteConfig) -> dict:
    cid, n, variant = key
    t0 = time.perf_counter()
    case = pc.get_case(cid, n, variant)
    checks = set(cfg.checks)
    seed = cfg.seed
    rec = {"case": cid, "variant": variant, "n": n, "key": case.key, "d": case.d,
           "bidegrees": [list(b) for b in case.bidegrees], "residuals": {}, "verdicts": {}}
    res, ver = rec["residuals"], rec["verdicts"]
    if "invariance" in checks:
        res["group"] = ie.invariance_residual(case, cfg.samples, seed)
        ver["group"] = res["group"] <= cfg.tol_group
    if "infinitesimal" in checks:
        res["infinitesimal"] = ie.infinitesimal_residual(case, min(cfg.samples, 20), seed)
        ver["infinitesimal"] = res["infinitesimal"] <= cfg.tol_inf
    if "jacobian" in checks:
        ranks = ie.jacobian_ranks(case, cfg.samples, seed)
        rec["jacobian_pass_rate"] = float(np.mean(ranks == case.d))
        ver["jacobian"] = rec["jacobian_pass_rate"] >= cfg.tol_rank_rate
    if "bidegree" in checks:
        res["bidegree"] = ie.bidegree_check(case, 20, seed).residual
        ver["bidegree"] = res["bidegree"] <= cfg.tol_bidegree
    table1 = cid.startswith("T1-")
    line = int(cid[4:]) if table1 else None
    if table1 and "restriction" in checks:
        r = ie.restriction_check(line, n, 20, seed)
        res["restriction"] = r.residual
        rec["restriction_pairing"] = [list(p) for p in r.pairing]
        ver["restriction"] = r.residual <= cfg.tol_restriction and not r.unmatched
    if table1 and "htype" in checks:
        if case.block in (1, 2):
            res["htype"] = ie.htype_residual(case, 20, seed)
            rec["htype"] = "H-type" if res["htype"] <= cfg.tol_htype else "not H-type"
            ver["htype"] = rec["htype"] == "H-type"
        else:
            r = ie.radical_dim(line, n)
            expected = pc.get_quotient(line, n).radical
            rec["htype"] = f"degenerate, radical {r}"
            ver["htype"] = r == expected
    if table1 and "orbit" in checks:
        rng = np.random.default_rng([seed, 9])
        rec["orbit_codim"] = ie.orbit_codim(case, rng.standard_normal(case.dim_z))
        ver["orbit"] = rec["orbit_codim"] == case.dim_z - 1
    if cfg.exact and "exact" in checks and case.bracket is not None and case.exact:
        ex = _exact_checks(case, rec, cfg)
        rec["exact"] = ex
        ver["exact"] = all(ex.values())
    if cfg.exact and table1 and "radon" in checks:
        F = rs.default_test_function(line, n, seed)
        worst = 0.0
        for fam in ("L", "M", "Delta"):
            if fam == "M" and case.block == 1:
                continue
            worst = max(worst, rs.check_radon_commutation(line, rs.family_operator(line, fam, n), F, n))
        res["radon"] = worst
        ver["radon"] = worst <= cfg.tol_radon
    rec["verdict"] = "pass" if all(ver.values()) else "fail"
    rec["elapsed_ms"] = round(1000 * (time.perf_counter() - t0), 1)
    return rec


def _run_case_star(args):
    return run_case(*args)


def run_suite(cfg: SuiteConfig) -> dict:
    cfg.validate()
    keys = select_cases(cfg.cases, cfg.n)
    t0 = time.perf_counter()
    if cfg.jobs > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            records = list(ex.map(_run_case_star, [(k, cfg) for k in keys]))
    else:
        records = [run_case(k, cfg) for k in keys]
    failures = [f"{r['key']}:{name}" for r in records for name, ok in r["verdicts"].items() if not ok]
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "seed": cfg.seed,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(cfg).items() if k != "jobs"},
        "cases": records,
        "failures": failures,
        "verdict": "pass" if not failures else "fail",
        "elapsed_ms": round(1000 * (time.perf_counter() - t0), 1),
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "elapsed_ms"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# catalog and demo


def print_catalog(fmt: str = "text") -> str:
    rows = pc.catalog_rows()
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=1)
    lines = []
    titles = {"table1": "Table 1: pairs with dim z > 1, K minimal",
              "appendix": "Appendix cases: generators of R[n]^K",
              "quotients": "Quotients N' with K'_0 and rho'_v"}
    for key in ("table1", "appendix", "quotients"):
        lines.append(titles[key])
        for r in rows[key]:
            extra = f" n>={r['n']}" if r.get("n") is not None else ""
            lines.append(f"  {r['id']:7s} {r['group']:42s} dim v={r['dim_v']:<3d} dim z={r['dim_z']:<3d} d={r['d']}{extra}")
            lines.append(f"          {', '.join(r['hilbert'])}")
        lines.append("")
    return "\n".join(lines)


def radon_demo(line: int = 2) -> str:
    q = pc.get_quotient(line)
    dim_v, dim_z = q.parent.dim_v, q.parent.dim_z
    F = rs.GaussPoly.gaussian(dim_v + dim_z)
    R = rs.radon_transform(F, line)
    pts = rs.sample_grid(dim_v + 1, 5)
    closed = np.pi ** ((dim_z - 1) / 2) * np.exp(-np.sum(pts ** 2, axis=1))
    out = [f"Radon transform of exp(-|v|^2-|z|^2) for Table-1 line {line} (dim z = {dim_z})",
           f"closed form: pi^{(dim_z - 1) / 2:g} exp(-|v|^2 - t^2)"]
    for p, a, b in zip(pts, R(pts), closed):
        out.append(f"  |v|^2={np.sum(p[:-1] ** 2):.4f} t={p[-1]:+.4f}  quadrature={a:.12e}  closed={b:.12e}")
    out.append(f"max abs error {np.max(np.abs(R(pts) - closed)):.3e}")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilpair", description="Verify Hilbert bases of nilpotent Gelfand pairs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--case", action="append", dest="cases", metavar="ID",
                   help="case id (T1-L3, A1:O, Table1-line3, all, table1, appendix); repeatable")
    v.add_argument("--n", type=int, default=None, help="parameter n for parametrised cases")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--tol-group", type=float, default=1e-8)
    v.add_argument("--tol-inf", type=float, default=1e-6)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--checks", default=",".join(ALL_CHECKS), help="comma-separated subset of " + ",".join(ALL_CHECKS))
    v.add_argument("--report", metavar="PATH", help="write the JSON report here")
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=True, help="include exact-pipeline checks")
    mode.add_argument("--numeric", dest="exact", action="store_false", help="numeric checks only")
    v.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    c = sub.add_parser("catalog", help="print the classification tables")
    c.add_argument("--format", choices=("text", "json"), default="text")

    d = sub.add_parser("radon-demo", help="Radon transform of a Gaussian against its closed form")
    d.add_argument("--line", type=int, default=2)
    return p


def config_from_args(args) -> SuiteConfig:
    seed = args.seed
    env = os.environ.get("NILPAIR_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ConfigError(f"NILPAIR_SEED must be an integer, got {env!r}") from None
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    return SuiteConfig(cases=args.cases or ["all"], n=args.n, samples=args.samples, tol_group=args.tol_group,
                       tol_inf=args.tol_inf, seed=seed, checks=checks, exact=args.exact, jobs=args.jobs).validate()


def _summary(report: dict) -> str:
    lines = []
    for r in report["cases"]:
        res = " ".join(f"{k}={v:.1e}" for k, v in sorted(r["residuals"].items()))
        jac = f" rank={r['jacobian_pass_rate']:.2f}" if "jacobian_pass_rate" in r else ""
        lines.append(f"{r['verdict'].upper():4s} {r['key']:20s} {res}{jac}")
    for f in report["failures"]:
        lines.append(f"failed: {f}")
    lines.append(f"overall: {report['verdict']} ({len(report['cases'])} cases, {report['elapsed_ms'] / 1000:.1f} s)")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog":
        print(print_catalog(args.format))
        return 0
    if args.command == "radon-demo":
        try:
            print(radon_demo(args.line))
        except pc.CatalogError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        return 0
    try:
        cfg = config_from_args(args)
        report = run_suite(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    print(_summary(report))
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report_json(report) + "\n")
    return 0 if report["verdict"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
