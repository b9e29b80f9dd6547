import itertools
from fractions import Fraction

import numpy as np
import pytest

from combcluster import (
    X,
    BlockShorthand,
    DyadicMatrix,
    MalformedShorthand,
    NotBlockHankel,
    NotFactorizable,
    Permutation,
    WeightedGraph,
    apply_permutation,
    bipartite_factor,
    check_orthogonal,
    expand_shorthand,
    is_block_hankel,
    subindex_swap_permutation,
    tensor_swap_permutation,
    to_shorthand,
    torus_skew_circulant_4,
    two_coloring,
    two_path_conditions,
)


def test_scalar_shorthand_expands_by_definition(oracles):
    # [a,b/c/d,e] with distinct values so any misplaced entry shows up.
    vals = [1, 2, 3, 5, 7]
    g = expand_shorthand(BlockShorthand.scalar(vals))
    assert oracles.fractions(g) == oracles.hankel([[[v]] for v in vals], 1)
    assert g.to_float().tolist() == [[1, 2, 3], [2, 3, 5], [3, 5, 7]]


def test_shorthand_positions():
    s = BlockShorthand.scalar([1, 2, 3, 5, 7])
    assert (s.length, s.K, s.center, s.modes) == (5, 3, 3, 3)
    assert str(s) == "[1,2/3/5,7]"


def test_single_entry_centre():
    g = expand_shorthand(BlockShorthand.scalar([0, 1, 0]))
    assert g.to_float().tolist() == [[0, 1], [1, 0]]
    assert g == X


def test_block_expansion_matches_oracle(oracles):
    rng = np.random.default_rng(1)
    blocks = []
    for _ in range(5):
        b = rng.integers(-3, 4, (2, 2))
        blocks.append(b + b.T)
    s = BlockShorthand(tuple(DyadicMatrix(b, 1) for b in blocks), 2)
    g = expand_shorthand(s)
    want = oracles.hankel([[[Fraction(int(x), 2) for x in row] for row in b] for b in blocks], 2)
    assert oracles.fractions(g) == want
    assert to_shorthand(g) == s


def test_malformed_shorthand():
    with pytest.raises(MalformedShorthand):
        BlockShorthand.scalar([1, 2])
    with pytest.raises(MalformedShorthand):
        BlockShorthand((DyadicMatrix.from_values([[0, 1], [2, 0]]),), 2)
    with pytest.raises(MalformedShorthand):
        BlockShorthand((DyadicMatrix.identity(3),), 2)


def test_not_block_hankel_located():
    g = WeightedGraph.from_matrix([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    ok, where = is_block_hankel(g)
    assert not ok and where == (1, 1)
    with pytest.raises(NotBlockHankel) as info:
        to_shorthand(g)
    assert (info.value.i, info.value.j) == (1, 1)


def test_torus_block_form_is_hankel_only_at_its_own_block_size():
    g = expand_shorthand(torus_skew_circulant_4(4))
    assert is_block_hankel(g, 4)[0]
    assert not is_block_hankel(g, 2)[0]


def test_orthogonality_of_X():
    ok, residual = check_orthogonal(X)
    assert ok and residual.is_zero()


def test_orthogonality_residual_for_corner_one():
    g = expand_shorthand(BlockShorthand.scalar([0, 1, 1]))
    ok, residual = check_orthogonal(g)
    assert not ok
    # ((0,1),(1,1))^2 = ((1,1),(1,2)), minus the identity.
    assert residual.to_float().tolist() == [[0, 1], [1, 1]]


def test_two_path_report_for_path_graph():
    g = WeightedGraph.from_matrix([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    rep = two_path_conditions(g)
    assert not rep.ok
    assert [j for j, _ in rep.closed] == [1]
    assert [(j, k) for j, k, _ in rep.open] == [(0, 2)]
    assert rep.paths == (1,)


def test_bipartite_factor_reads_A0():
    # [0,0,0/a/0,b,0] is A0 (x) X with A0 = [0/a/b].
    a, b = Fraction(1, 2), Fraction(-3, 4)
    g = expand_shorthand(BlockShorthand.scalar([0, 0, 0, a, 0, b, 0]))
    A0 = bipartite_factor(g)
    assert A0.to_float().tolist() == [[0, 0.5], [0.5, -0.75]]
    assert to_shorthand(A0) == BlockShorthand.scalar([0, a, b])
    assert bipartite_factor(X).to_float().tolist() == [[1.0]]


def test_bipartite_factor_rejects_diagonal():
    g = WeightedGraph.from_matrix([[1, 1], [1, 0]])
    with pytest.raises(NotFactorizable) as info:
        bipartite_factor(g)
    assert info.value.location == (0, 0)


def test_bipartite_factor_rejects_pattern_break():
    g = WeightedGraph.from_matrix([[0, 1, 1, 0], [1, 0, 0, 0], [1, 0, 0, 1], [0, 0, 1, 0]])
    with pytest.raises(NotFactorizable):
        bipartite_factor(g)


def test_tensor_swap_k2_exchanges_middle_labels():
    assert tensor_swap_permutation(2).mapping == (0, 2, 1, 3)
    assert tensor_swap_permutation(1) == Permutation.identity(2)


def _kron_graph(a, b):
    return WeightedGraph(a.weights.kron(b.weights))


@pytest.mark.parametrize("k", [2, 3, 5])
def test_tensor_swap_turns_A0_X_into_X_A0(k):
    rng = np.random.default_rng(k)
    m = rng.integers(-4, 5, (k, k))
    A0 = WeightedGraph(DyadicMatrix(m + m.T, 2))
    swapped = apply_permutation(_kron_graph(A0, X), tensor_swap_permutation(k))
    assert swapped == _kron_graph(X, A0)


def test_tensor_swap_k3_brute_force_entrywise():
    rng = np.random.default_rng(9)
    m = rng.integers(-5, 6, (3, 3))
    A0 = (m + m.T).tolist()
    G = [[A0[i // 2][j // 2] * (i % 2 != j % 2) for j in range(6)] for i in range(6)]
    want = [[A0[i % 3][j % 3] * (i // 3 != j // 3) for j in range(6)] for i in range(6)]
    p = tensor_swap_permutation(3)
    got = [[None] * 6 for _ in range(6)]
    for i, j in itertools.product(range(6), repeat=2):
        got[p(i)][p(j)] = G[i][j]
    assert got == want


def test_subindex_swap_formula():
    assert subindex_swap_permutation(2).mapping == (0, 2, 1, 3)
    p = subindex_swap_permutation(5, 2)
    for m_, c in itertools.product(range(5), range(2)):
        assert p(2 * m_ + c) == 5 * c + m_
    assert p.then(p.inverse()) == Permutation.identity(10)


def test_subindex_swap_with_units_keeps_inner_order():
    p = subindex_swap_permutation(2, 2, unit=2)
    assert p.mapping == (0, 1, 4, 5, 2, 3, 6, 7)


def test_permutation_basics():
    p = Permutation((2, 0, 1))
    assert p.inverse().mapping == (1, 2, 0)
    assert p.then(p).mapping == (1, 2, 0)
    assert p.lift(2).mapping == (4, 5, 0, 1, 2, 3)
    with pytest.raises(ValueError):
        Permutation((0, 0))


def test_apply_permutation_moves_weights():
    g = WeightedGraph.from_matrix([[0, 1, 0], [1, 0, 2], [0, 2, 0]])
    h = apply_permutation(g, Permutation((2, 0, 1)))
    # weight on (i, j) moves to (p(i), p(j))
    assert h[2, 0] == 1 and h[0, 1] == 2
    assert apply_permutation(g, Permutation.identity(3)) == g
    with pytest.raises(ValueError):
        apply_permutation(g, Permutation.identity(4))


def test_two_coloring():
    ring4 = WeightedGraph.from_matrix([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]])
    assert two_coloring(ring4) == [0, 1, 0, 1]
    tri = WeightedGraph.from_matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert two_coloring(tri) is None


def test_weighted_graph_validation():
    with pytest.raises(ValueError):
        WeightedGraph.from_matrix([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        WeightedGraph.from_matrix([[0, 1, 0]])
    with pytest.raises(ValueError):
        WeightedGraph.empty(3, block_size=2)
    g = WeightedGraph.from_matrix([[0, 1], [1, 0]])
    assert list(g.edges()) == [(0, 1, 1)]
    assert g.degrees() == [1, 1]
