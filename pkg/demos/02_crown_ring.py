"""
The crown ring in three forms
=============================

A ring of two-node macronodes whose edges alternate between the projectors
pi+ and pi-. After relabelling, the same graph is block-Hankel with three
nonzero 2x2 blocks, and after reversing the subindex order it is a plain
Hankel matrix with seven nonzero entries, one per pump frequency.
"""

from combcluster import (
    apply_permutation,
    build_crown_supergraph,
    check_orthogonal,
    crown_block_hankel,
    crown_full_hankel,
    crown_hankel_relabeling,
    crown_relabeling,
    expand_shorthand,
    format_shorthand,
    two_path_conditions,
)

N = 6
sup = build_crown_supergraph(N).expand()
print(f"crown({N}): {sup.n} physical nodes, {sup.edge_count()} edges")
print("A @ A == 1:", check_orthogonal(sup)[0], "| 2-path conditions:", two_path_conditions(sup).ok)

block = expand_shorthand(crown_block_hankel(N))
assert apply_permutation(sup, crown_relabeling(N)) == block
print("nonzero 2x2 blocks:", [k + 1 for k in crown_block_hankel(N).nonzero_indices()])

full = crown_full_hankel(N)
assert apply_permutation(sup, crown_hankel_relabeling(N)) == expand_shorthand(full)
print("scalar shorthand:", format_shorthand(full))

for n in (6, 10, 20, 40):
    print(f"  N={n:2d}: {len(crown_full_hankel(n).nonzero_indices())} nonzero entries")
