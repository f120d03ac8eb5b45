"""Walk through one pair per block: the Hilbert basis, its invariance and its independence.

Run with ``python3 demos/hilbert_bases.py``.
"""

import numpy as np

from nilpair import invariant_engine as ie
from nilpair import pair_catalog as pc

for line in (3, 4, 10):
    case = pc.get_case(f"T1-L{line}")
    print(f"Table 1, line {line}: K = {case.group}, dim v = {case.dim_v}, dim z = {case.dim_z}")
    for h in case.hilbert_basis:
        print(f"   {h.name:14s} bi-degree {h.bidegree}  operator degree {h.gamma}")

    print(f"   group residual        {ie.invariance_residual(case, 100, 0):.1e}")
    print(f"   infinitesimal residual {ie.infinitesimal_residual(case, 20, 0):.1e}")
    ranks = ie.jacobian_ranks(case, 100, 0)
    print(f"   Jacobian rank = d at {np.mean(ranks == case.d):.0%} of random points")

    # a corrupted basis must be caught
    bad = ie.corrupt_case(case)
    print(f"   corrupted basis residual {ie.invariance_residual(bad, 100, 0):.2f}\n")

# Block 3 is where H-type fails: J_{zeta0} has a radical.
for line in (10, 11, 12):
    print(f"line {line}: radical of J_zeta0 has dimension {ie.radical_dim(line)}")
