"""Graph-level q-measurement reductions of the crown and torus clusters.

In the ideal-squeezing limit a ``q`` measurement deletes the node and its
incident edges; the outcome only shifts means. "Uniform" weights are judged up
to local sign flips ``q -> -q, p -> -p``, which flip the signs of every edge
at a node.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .builders import (
    build_crown_supergraph,
    build_torus_supergraph,
    crown_hankel_relabeling,
    crown_relabeling,
    torus_relabeling,
    torus_unit_swap,
)
from .dyadic import Dyadic, DyadicMatrix
from .gaussian import condition_q, nullifier_stats, prepare_cluster, sign_flip, apply
from .hankel import Permutation, WeightedGraph, apply_permutation

__all__ = [
    "MeasurementPattern",
    "ReductionReport",
    "DecayTable",
    "SignFrustrated",
    "UnrollError",
    "delete_measured",
    "sign_normalize",
    "apply_sign_flips",
    "cycle_graph",
    "torus_lattice_graph",
    "grid_graph",
    "crown_to_ring",
    "torus_to_lattice",
    "unroll_cut",
    "unroll_torus",
    "verify_reduction_gaussian",
    "crown_form_map",
    "torus_form_map",
    "degree_census",
]


class SignFrustrated(ValueError):
    """Some cycle has a negative weight product, so no sign flips make all edges positive."""


class UnrollError(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementPattern:
    """Nodes of an ``n``-node graph whose ``q`` quadrature is measured."""

    nodes: frozenset[int]
    n: int

    def __post_init__(self):
        nodes = frozenset(int(k) for k in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        bad = sorted(k for k in nodes if not 0 <= k < self.n)
        if bad:
            raise ValueError(f"pattern nodes {bad} out of range for {self.n} nodes")

    @property
    def kept(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.n) if k not in self.nodes)

    def relabel(self, p: Permutation) -> MeasurementPattern:
        return MeasurementPattern(frozenset(p(k) for k in self.nodes), self.n)

    @classmethod
    def crown_top(cls, N: int, form: str = "supergraph") -> MeasurementPattern:
        """Top layer of the crown (physical index 0 in each macronode)."""
        pattern = cls(frozenset(2 * j for j in range(N)), 2 * N)
        return pattern.relabel(crown_form_map(N, form))

    @classmethod
    def torus_layers(cls, M: int, keep_layer: int = 0, form: str = "supergraph") -> MeasurementPattern:
        """Every physical node except layer ``keep_layer`` of each macronode."""
        if keep_layer not in range(4):
            raise ValueError(f"layer must be 0..3, got {keep_layer}")
        n = M * M
        pattern = cls(frozenset(4 * j + s for j in range(n) for s in range(4) if s != keep_layer), 4 * n)
        return pattern.relabel(torus_form_map(M, form))

    @classmethod
    def unroll(cls, M: int, keep_layer: int = 0, form: str = "supergraph") -> MeasurementPattern:
        """Three layers everywhere plus all four layers of the cut macronodes."""
        return _unroll_pattern(M, keep_layer, unroll_cut(M)).relabel(torus_form_map(M, form))


def _unroll_pattern(M: int, layer: int, cut: Iterable[int]) -> MeasurementPattern:
    if layer not in range(4):
        raise ValueError(f"layer must be 0..3, got {layer}")
    cut = set(cut)
    nodes = frozenset(
        4 * j + s for j in range(M * M) for s in range(4) if s != layer or j in cut
    )
    return MeasurementPattern(nodes, 4 * M * M)


def crown_form_map(N: int, form: str) -> Permutation:
    """Relabelling from crown supergraph indices to the indices of ``form``."""
    if form == "supergraph":
        return Permutation.identity(2 * N)
    if form == "block":
        return crown_relabeling(N)
    if form == "hankel2":
        return crown_hankel_relabeling(N)
    raise ValueError(f"unknown crown form {form!r}")


def torus_form_map(M: int, form: str) -> Permutation:
    """Relabelling from torus supergraph indices to the indices of ``form``."""
    if form == "supergraph":
        return Permutation.identity(4 * M * M)
    if form in ("block", "primed"):
        return torus_relabeling(M)
    if form == "hankel2":
        return torus_relabeling(M).then(torus_unit_swap(M))
    raise ValueError(f"unknown torus form {form!r}")


def delete_measured(g: WeightedGraph, pattern: MeasurementPattern) -> WeightedGraph:
    """Induced subgraph on the unmeasured nodes, kept in increasing index order."""
    if pattern.n != g.n:
        raise ValueError(f"pattern is for {pattern.n} nodes, graph has {g.n}")
    keep = np.array(pattern.kept, dtype=np.intp)
    num = g.weights.numerators[np.ix_(keep, keep)]
    return WeightedGraph(DyadicMatrix(num, g.weights.exponent))


def sign_normalize(g: WeightedGraph) -> frozenset[int]:
    """Nodes to sign-flip so that every edge weight becomes positive.

    Raises:
        SignFrustrated: a cycle with negative weight product exists.
    """
    num = g.weights.numerators
    nbrs = g.neighbours()
    sign = [0] * g.n
    for start in range(g.n):
        if sign[start]:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in nbrs[v]:
                if w == v:
                    continue
                want = sign[v] * (1 if num[v, w] > 0 else -1)
                if not sign[w]:
                    sign[w] = want
                    queue.append(w)
                elif sign[w] != want:
                    raise SignFrustrated(f"edge ({v}, {w}) closes a negative cycle")
    return frozenset(k for k, s in enumerate(sign) if s < 0)


def apply_sign_flips(g: WeightedGraph, flips: Iterable[int]) -> WeightedGraph:
    d = np.ones(g.n, dtype=np.int64)
    d[list(flips)] = -1
    num = g.weights.numerators * np.outer(d, d)
    return WeightedGraph(DyadicMatrix(num, g.weights.exponent), g.block_size)


def _circulant(n: int, steps: Sequence[int], weight) -> WeightedGraph:
    w = Dyadic.coerce(weight)
    num = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        for s in steps:
            num[j, (j + s) % n] = num[(j + s) % n, j] = w.numerator
    return WeightedGraph(DyadicMatrix(num, w.exponent))


def cycle_graph(n: int, weight=Dyadic(1, 2)) -> WeightedGraph:
    return _circulant(n, [1], weight)


def torus_lattice_graph(M: int, weight=Dyadic(1, 4)) -> WeightedGraph:
    """Scalar circulant with steps ``+-1`` and ``+-(M+1)`` on ``M**2`` nodes."""
    return _circulant(M * M, [1, M + 1], weight)


def grid_graph(cols: int, rows: int, weight=Dyadic(1, 4)) -> WeightedGraph:
    """Planar ``cols x rows`` grid; node ``(x, y)`` has index ``y*cols + x``."""
    w = Dyadic.coerce(weight)
    n = cols * rows
    num = np.zeros((n, n), dtype=np.int64)
    for y in range(rows):
        for x in range(cols):
            i = y * cols + x
            if x + 1 < cols:
                num[i, i + 1] = num[i + 1, i] = w.numerator
            if y + 1 < rows:
                num[i, i + cols] = num[i + cols, i] = w.numerator
    return WeightedGraph(DyadicMatrix(num, w.exponent))


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of a reduction.

    ``reduced`` is indexed by position in ``kept`` (original labels, ascending).
    ``witness`` maps reduced indices onto ``reference`` so that the sign-fixed
    reduced graph, relabelled by the witness, equals ``reference`` exactly.
    """

    reduced: WeightedGraph
    kept: tuple[int, ...]
    reference: WeightedGraph
    witness: Permutation | None
    sign_flips: frozenset[int] = field(default_factory=frozenset)

    @property
    def normalized(self) -> WeightedGraph:
        return apply_sign_flips(self.reduced, self.sign_flips)

    def verify(self) -> bool:
        if self.witness is None:
            return False
        return apply_permutation(self.normalized, self.witness) == self.reference


def _cycle_witness(g: WeightedGraph) -> Permutation | None:
    """Positions along the cycle starting at node 0, or ``None`` if ``g`` is not one cycle."""
    nbrs = [[w for w in nb if w != v] for v, nb in enumerate(g.neighbours())]
    if g.n < 3 or any(len(nb) != 2 for nb in nbrs):
        return None
    order = [0, nbrs[0][0]]
    while len(order) < g.n:
        a, b = nbrs[order[-1]]
        nxt = b if a == order[-2] else a
        if nxt == 0:
            return None
        order.append(nxt)
    if 0 not in nbrs[order[-1]]:
        return None
    pos = [0] * g.n
    for p, v in enumerate(order):
        pos[v] = p
    return Permutation(tuple(pos))


def crown_to_ring(N: int) -> ReductionReport:
    """Measure the crown's top layer; the bottom layer is an ``N``-cycle with weights 1/2."""
    g = build_crown_supergraph(N).expand()
    pattern = MeasurementPattern.crown_top(N)
    reduced = delete_measured(g, pattern)
    flips = sign_normalize(reduced)
    return ReductionReport(
        reduced, pattern.kept, cycle_graph(N), _cycle_witness(reduced), flips
    )


def torus_to_lattice(M: int, layer: int = 0) -> ReductionReport:
    """Measure three of the four layers; the kept layer is the scalar twisted torus with weights 1/4.

    Macronode ``j`` keeps physical node ``4*j + layer``, which becomes reduced
    node ``j``; the witness is checked rather than assumed.
    """
    g = build_torus_supergraph(M).expand()
    pattern = MeasurementPattern.torus_layers(M, layer)
    reduced = delete_measured(g, pattern)
    flips = sign_normalize(reduced)
    return ReductionReport(
        reduced, pattern.kept, torus_lattice_graph(M), Permutation.identity(M * M), flips
    )


def _plane_index(M: int, x: int, y: int) -> int:
    # Horizontal steps are +-1 and vertical steps +-(M+1) on the circulant.
    return (x + (M + 1) * y) % (M * M)


def unroll_cut(M: int) -> list[int]:
    """Macronodes outside the ``M x (M-2)`` rectangle embedded at the origin.

    The lattice of identifications is spanned by ``(M+1, -1)`` and ``(1, M-1)``;
    no nonzero lattice vector fits inside that rectangle or links two of its
    nodes across the boundary, so the rectangle embeds as a planar grid.
    """
    inside = {_plane_index(M, x, y) for y in range(M - 2) for x in range(M)}
    return sorted(set(range(M * M)) - inside)


def unroll_torus(M: int, layer: int = 0, cut: Sequence[int] | None = None) -> ReductionReport:
    """Cut the reduced torus open into an ``M x (M-2)`` planar grid.

    ``cut`` lists macronodes to measure out entirely (default :func:`unroll_cut`).

    Raises:
        UnrollError: the remaining graph is not the expected grid.
    """
    cut = sorted(set(unroll_cut(M) if cut is None else cut))
    keep_macro = [j for j in range(M * M) if j not in set(cut)]
    g = build_torus_supergraph(M).expand()
    pattern = _unroll_pattern(M, layer, cut)
    reduced = delete_measured(g, pattern)
    reference = grid_graph(M, M - 2)
    if reduced.n != M * (M - 2):
        raise UnrollError(f"cut leaves {reduced.n} nodes, expected {M * (M - 2)}")
    census = degree_census(reduced)
    expected = degree_census(reference)
    if census != expected:
        raise UnrollError(f"degree census {census} differs from grid census {expected}")
    flips = sign_normalize(reduced)
    position = {j: p for p, j in enumerate(keep_macro)}
    mapping = [0] * reduced.n
    for y in range(M - 2):
        for x in range(M):
            j = _plane_index(M, x, y)
            if j not in position:
                raise UnrollError(f"macronode {j} at grid site ({x}, {y}) was cut")
            mapping[position[j]] = y * M + x
    try:
        witness = Permutation(tuple(mapping))
    except ValueError as exc:
        raise UnrollError("grid sites do not cover the kept macronodes") from exc
    report = ReductionReport(reduced, pattern.kept, reference, witness, flips)
    if not report.verify():
        raise UnrollError("kept macronodes do not form the planar grid")
    return report


def degree_census(g: WeightedGraph) -> dict[int, int]:
    out: dict[int, int] = {}
    for d in g.degrees():
        out[d] = out.get(d, 0) + 1
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class DecayTable:
    r: tuple[float, ...]
    variances: tuple[np.ndarray, ...]

    @property
    def ratios(self) -> tuple[np.ndarray, ...]:
        return tuple(v / np.exp(-2 * r) for r, v in zip(self.r, self.variances))

    def max_ratio_spread(self) -> float:
        """Largest relative spread of each nullifier's ratio across the ``r`` values."""
        R = np.vstack(self.ratios)
        return float(np.max((R.max(axis=0) - R.min(axis=0)) / R.max(axis=0)))


def verify_reduction_gaussian(
    A: WeightedGraph,
    pattern: MeasurementPattern,
    reference: WeightedGraph,
    r_values: Sequence[float],
    sign_flips: Iterable[int] = (),
) -> DecayTable:
    """Cross-check the deletion rule against Gaussian conditioning.

    For each ``r`` the cluster for ``A`` is prepared, every node in ``pattern``
    is measured in ``q`` with outcome fixed to 0, the kept modes in
    ``sign_flips`` (reduced indices) are half-turned, and nullifier variances
    are taken against ``reference``, which is indexed like the reduced graph
    (kept nodes in ascending order).
    """
    flips = list(sign_flips)
    variances = []
    for r in r_values:
        state = prepare_cluster(A, r)
        state = condition_q(state, sorted(pattern.nodes), 0.0).state
        if flips:
            state = apply(state, sign_flip(flips, state.n_modes))
        variances.append(nullifier_stats(state, reference).variances)
    return DecayTable(tuple(float(r) for r in r_values), tuple(variances))
