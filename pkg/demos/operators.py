"""From invariant polynomials to left-invariant operators on line 10 (SO3 on R^3 + so3)."""

from nilpair import pair_catalog as pc
from nilpair import symm_calculus as sc

case = pc.get_case("T1-L10")
alg = sc.algebra_of(case)
polys = sc.hilbert_polys(case)

print("left-invariant fields X_r:")
for r, X in enumerate(alg.fields()[: case.dim_v]):
    print(f"X_{r} =", X.to_str(alg.names).replace("\n", " + "))

L, M, Delta = (sc.symmetrize(p, alg) for p in polys)
print("\nlambda'(|v|^2)  =", L.to_str(alg.names).replace("\n", " + "))
print("lambda'(t v z)  =", M.to_str(alg.names).replace("\n", " + "))
print("lambda'(|z|^2)  =", Delta.to_str(alg.names).replace("\n", " + "))

for name, D in (("L", L), ("M", M), ("Delta", Delta)):
    print(f"{name}: self-adjoint {sc.formal_adjoint(D) == D}, degree {sc.homogeneity_degree(D, case.dim_v)}")

# Radon reduction to N' = N / zeta0^perp
q = pc.get_quotient(10)
qalg = alg.quotient(q.zeta0)
for h, p, D in zip(case.hilbert_basis, polys, (L, M, Delta)):
    lhs = sc.radon_reduce(D, case.dim_v, q.zeta0)
    rhs = sc.symmetrize(sc.restrict_poly(p, case.dim_v, q.zeta0), qalg)
    print(f"reduced {h.name:7s} -> {lhs.to_str(qalg.names).replace(chr(10), ' + ')}   matches: {lhs == rhs}")
