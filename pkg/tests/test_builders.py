from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from combcluster import (
    PROJECTORS,
    DyadicMatrix,
    apply_permutation,
    build_crown_supergraph,
    build_torus_supergraph,
    check_orthogonal,
    crown_block_hankel,
    crown_full_hankel,
    crown_hankel_relabeling,
    crown_relabeling,
    expand_shorthand,
    is_block_hankel,
    subindex_swap_permutation,
    torus_block_hankel_2,
    torus_primed_4,
    torus_relabeling,
    torus_skew_circulant_4,
    torus_unit_swap,
    two_coloring,
    two_path_conditions,
)

HALF = Fraction(1, 2)


def _one_based_nonzero(s):
    return [k + 1 for k in s.nonzero_indices()]


def test_projector_identities():
    pp, pm = PROJECTORS.pi_plus, PROJECTORS.pi_minus
    assert pp @ pp == pp and pm @ pm == pm
    assert (pp @ pm).is_zero()
    assert pp + pm == DyadicMatrix.identity(2)
    P = PROJECTORS.Pi
    for i in range(4):
        for j in range(4):
            prod = P[i] @ P[j]
            assert prod == P[i] if i == j else prod.is_zero()
    assert P[0] + P[1] + P[2] + P[3] == DyadicMatrix.identity(4)
    # every entry of a 4x4 projector is +-1/4
    for p in P:
        assert set(np.abs(p.to_float()).ravel()) == {0.25}


def test_crown_supergraph_edges_n4():
    spec = build_crown_supergraph(4)
    got = [(e.i, e.j, e.label) for e in spec.edges]
    assert got == [(0, 1, "pi+"), (1, 2, "pi-"), (2, 3, "pi+"), (3, 0, "pi-")]


@pytest.mark.parametrize("N", [3, 5, 2])
def test_crown_rejects_bad_sizes(N):
    with pytest.raises(ValueError):
        build_crown_supergraph(N)
    with pytest.raises(ValueError):
        crown_full_hankel(N)


def test_crown_orthogonal_by_fraction_oracle(oracles):
    g = build_crown_supergraph(6).expand()
    A = oracles.fractions(g)
    assert oracles.matmul(A, A) == oracles.identity(12)


def test_crown_block_hankel_positions_n6():
    s = crown_block_hankel(6)
    assert s.length == 11
    assert _one_based_nonzero(s) == [4, 6, 10]


@pytest.mark.parametrize("N", [4, 6, 8, 10])
def test_crown_block_form_is_relabelled_supergraph(N):
    sup = build_crown_supergraph(N).expand()
    block = expand_shorthand(crown_block_hankel(N))
    assert apply_permutation(sup, crown_relabeling(N)) == block
    assert len(crown_block_hankel(N).nonzero_indices()) == 3
    assert check_orthogonal(block)[0]


def test_crown_full_hankel_n6():
    s = crown_full_hankel(6)
    assert s.length == 23
    assert _one_based_nonzero(s) == [4, 6, 10, 12, 16, 18, 22]
    vals = {k + 1: s.blocks[k][0, 0] for k in s.nonzero_indices()}
    assert vals.pop(12) == -HALF
    assert set(vals.values()) == {HALF}


@pytest.mark.parametrize("N", [6, 10, 20, 40])
def test_crown_full_hankel_seven_entries(N):
    assert len(crown_full_hankel(N).nonzero_indices()) == 7


@pytest.mark.parametrize("N", [4, 6, 8])
def test_crown_full_hankel_is_swapped_block_form(N):
    block = expand_shorthand(crown_block_hankel(N))
    full = expand_shorthand(crown_full_hankel(N))
    assert apply_permutation(block, subindex_swap_permutation(N, 2)) == full
    sup = build_crown_supergraph(N).expand()
    assert apply_permutation(sup, crown_hankel_relabeling(N)) == full
    assert check_orthogonal(full)[0]


def test_torus_supergraph_counts_m4():
    spec = build_torus_supergraph(4)
    assert spec.macronode_count == 16
    assert len(spec.edges) == 32
    g = spec.expand()
    assert g.n == 64 and g.block_size == 4


@pytest.mark.parametrize("M", [4, 6])
def test_torus_one_edge_of_each_colour(M):
    for labels in build_torus_supergraph(M).degree_labels():
        assert sorted(labels) == ["Pi0", "Pi1", "Pi2", "Pi3"]


@pytest.mark.parametrize("M", [3, 5, 2])
def test_torus_rejects_bad_sizes(M):
    with pytest.raises(ValueError):
        build_torus_supergraph(M)


def test_torus_block_hankel_2_needs_m6():
    with pytest.raises(ValueError):
        torus_block_hankel_2(4)


def test_torus_orthogonal_by_fraction_oracle(oracles):
    A = oracles.fractions(build_torus_supergraph(4).expand())
    assert oracles.matmul(A, A) == oracles.identity(64)


@pytest.mark.parametrize("M,u,v", [(4, 3, 5), (6, 5, 21)])
def test_torus_4_layout(M, u, v):
    s = torus_skew_circulant_4(M)
    assert s.length == 2 * M * M - 1
    # Pi1 sits after u zeros, Pi0 after a further v zeros, Pi3 after u more.
    assert _one_based_nonzero(s)[:4] == [u + 1, u + v + 2, 2 * u + v + 3, 2 * u + v + 5]
    assert len(s.nonzero_indices()) == 7


@pytest.mark.parametrize("M", [4, 6, 8])
def test_torus_4_is_relabelled_supergraph(M):
    sup = build_torus_supergraph(M).expand()
    g = expand_shorthand(torus_skew_circulant_4(M))
    assert apply_permutation(sup, torus_relabeling(M)) == g
    assert is_block_hankel(g, 4)[0]


def test_torus_primed_differs_in_one_block_m4():
    a = expand_shorthand(torus_skew_circulant_4(4)).weights
    b = expand_shorthand(torus_primed_4(4)).weights
    diff = np.argwhere(a.numerators != b.numerators)
    upper = [(i, j) for i, j in diff if i < j]
    assert len(upper) == 16
    assert np.array_equal(a.numerators[tuple(diff.T)], -b.numerators[tuple(diff.T)])


@pytest.mark.parametrize("M", [4, 6])
def test_torus_primed_orthogonal_but_not_circulant(M):
    g = expand_shorthand(torus_primed_4(M))
    assert check_orthogonal(g)[0]
    assert is_block_hankel(g, 4)[0]
    # The circulant form repeats its left half after the centre; the sign flip breaks the repeat.
    K = M * M
    plain, primed = torus_skew_circulant_4(M), torus_primed_4(M)
    assert plain.blocks[:K - 1] == plain.blocks[K:]
    assert primed.blocks[:K - 1] != primed.blocks[K:]


@pytest.mark.parametrize("M", [6, 8, 10])
def test_torus_block_hankel_2_fifteen_blocks(M):
    s = torus_block_hankel_2(M)
    assert s.length == 4 * M * M - 1
    nz = s.nonzero_indices()
    assert len(nz) == 15
    pp, pm = PROJECTORS.pi_plus * HALF, PROJECTORS.pi_minus * HALF
    kinds = []
    for k in nz:
        b = s.blocks[k]
        if b in (pp, -pp):
            kinds.append("+")
        elif b in (pm, -pm):
            kinds.append("-")
        else:
            raise AssertionError(f"block {k} is not a signed half projector")
    assert kinds.count("+") == 7 and kinds.count("-") == 8


def test_torus_block_hankel_2_side_length_m6():
    s = torus_block_hankel_2(6)
    assert s.K - 1 == 71
    assert s.length == 143


@pytest.mark.parametrize("M", [6, 8])
def test_torus_block_hankel_2_is_swapped_primed(M):
    primed = expand_shorthand(torus_primed_4(M))
    swapped = apply_permutation(primed, torus_unit_swap(M))
    assert swapped == expand_shorthand(torus_block_hankel_2(M))


def test_unprimed_does_not_swap_to_block_hankel():
    g = apply_permutation(expand_shorthand(torus_skew_circulant_4(6)), torus_unit_swap(6))
    assert not is_block_hankel(g, 2)[0]


@pytest.mark.parametrize("build", [
    lambda: build_crown_supergraph(6).expand(),
    lambda: expand_shorthand(crown_full_hankel(8)),
    lambda: build_torus_supergraph(4).expand(),
    lambda: expand_shorthand(torus_block_hankel_2(6)),
])
def test_constructors_symmetric_zero_diagonal_bipartite(build):
    g = build()
    assert g.weights.is_symmetric()
    assert not g.weights.numerators.diagonal().any()
    colour = two_coloring(g)
    assert colour is not None
    for i, j, _ in g.edges():
        assert colour[i] != colour[j]
    assert two_path_conditions(g).ok


@pytest.mark.parametrize("M", [2, 4, 6, 8, 10, 12])
def test_long_threading_visits_every_macronode(M):
    n = M * M
    assert gcd(M + 1, n) == 1
    seen, j = set(), 0
    while j not in seen:
        seen.add(j)
        j = (j + M + 1) % n
    assert len(seen) == n
