"""
Shaping the cluster with q measurements
=======================================

Measuring q deletes a node and its edges. The crown's top layer leaves a ring;
three of the four torus layers leave a square lattice on a torus; cutting out
2M more macronodes opens it into an M x (M-2) sheet. The Gaussian simulation
agrees: reduced nullifiers still shrink as e^{-2r}.
"""

from combcluster import (
    MeasurementPattern,
    build_crown_supergraph,
    crown_to_ring,
    torus_to_lattice,
    unroll_torus,
    verify_reduction_gaussian,
)

ring = crown_to_ring(6)
print("crown(6) -> ring:", ring.reduced.n, "nodes, weights", sorted({str(w) for _, _, w in ring.reduced.edges()}),
      "| matches reference:", ring.verify())

lat = torus_to_lattice(6)
print("torus(6) -> lattice:", lat.reduced.n, "nodes, degrees", set(lat.reduced.degrees()), "| ok:", lat.verify())

sheet = unroll_torus(6)
print("torus(6) -> sheet:", sheet.reduced.n, "nodes = 6 x 4 grid | ok:", sheet.verify())

table = verify_reduction_gaussian(
    build_crown_supergraph(6).expand(), MeasurementPattern.crown_top(6), ring.reduced, [1, 2, 3]
)
for r, ratio in zip(table.r, table.ratios):
    print(f"  r={r:.0f}: variance / e^-2r = {ratio.max():.6f}")
print(f"spread across r: {table.max_ratio_spread():.2%}")
