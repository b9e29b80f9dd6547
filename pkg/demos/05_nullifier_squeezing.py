"""
Nullifier squeezing
===================

Starting from vacuum (quadrature variance 1/2), squeezing with the coupling
matrix A and a quarter turn on one colour class of the bipartition gives a
state whose nullifiers p - A q each have variance e^{-2r}.
"""

import math

import numpy as np

from combcluster import build_crown_supergraph, build_torus_supergraph, nullifier_stats, prepare_cluster

for name, A in [("crown(6)", build_crown_supergraph(6).expand()), ("torus(6)", build_torus_supergraph(6).expand())]:
    print(f"{name}: {A.n} modes")
    for r in (0.0, 0.5, 1.0, 2.0, 3.0):
        stats = nullifier_stats(prepare_cluster(A, r), A)
        off = stats.covariance - np.diag(stats.variances)
        print(f"  r={r:.1f}  max var={stats.variances.max():.6e}  e^-2r={math.exp(-2 * r):.6e}"
              f"  max |off-diag|={np.abs(off).max():.1e}")
