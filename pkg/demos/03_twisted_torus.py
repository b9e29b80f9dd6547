"""
The twisted torus
=================

M^2 four-node macronodes threaded twice: once by steps of 1 and once by
steps of M+1. Every macronode meets each of the four projectors Pi0..Pi3
exactly once. Flipping the sign of one block keeps the matrix orthogonal and
lets it be rewritten with 2x2 blocks: fifteen pump lines for any M.
"""

from collections import Counter

from combcluster import (
    apply_permutation,
    build_torus_supergraph,
    check_orthogonal,
    expand_shorthand,
    torus_block_hankel_2,
    torus_primed_4,
    torus_relabeling,
    torus_skew_circulant_4,
    torus_unit_swap,
)

M = 6
spec = build_torus_supergraph(M)
print(f"torus({M}): {spec.macronode_count} macronodes, {len(spec.edges)} macro-edges")
print("colours at macronode 0:", sorted(spec.degree_labels()[0]))

sup = spec.expand()
circ = expand_shorthand(torus_skew_circulant_4(M))
assert apply_permutation(sup, torus_relabeling(M)) == circ

primed = expand_shorthand(torus_primed_4(M))
print("primed form still squares to 1:", check_orthogonal(primed)[0])

two = torus_block_hankel_2(M)
assert apply_permutation(primed, torus_unit_swap(M)) == expand_shorthand(two)
print("2x2 shorthand length", two.length, "with", len(two.nonzero_indices()), "nonzero blocks")

for m in (6, 8, 10):
    print(f"  M={m:2d}: {len(torus_block_hankel_2(m).nonzero_indices())} blocks")

print("edge colours:", Counter(e.label for e in spec.edges))
