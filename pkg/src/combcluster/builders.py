"""Constructors for the crown ring and the twisted toroidal lattice.

Both families are built three ways: as a projector-weighted supergraph on
macronodes, as a block-skew-circulant shorthand, and as a shorthand with
smaller blocks obtained by reversing the subindex order. The relabellings
connecting the forms are exposed so callers can check the equivalences.

Within a crown macronode, physical index 0 is the top layer and 1 the bottom
layer. Within a torus macronode of size 4, physical index ``2*a + b`` pairs
``a`` (first tensor factor of the projector) with ``b`` (second factor).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .dyadic import Dyadic, DyadicMatrix
from .hankel import BlockShorthand, Permutation, WeightedGraph, subindex_swap_permutation

__all__ = [
    "ProjectorLibrary",
    "PROJECTORS",
    "MacroEdge",
    "SupergraphSpec",
    "build_crown_supergraph",
    "crown_block_hankel",
    "crown_full_hankel",
    "crown_relabeling",
    "crown_hankel_relabeling",
    "build_torus_supergraph",
    "torus_skew_circulant_4",
    "torus_primed_4",
    "torus_block_hankel_2",
    "torus_relabeling",
    "torus_unit_swap",
    "ring_skew_labels",
]

_HALF = Dyadic(1, 2)


@dataclass(frozen=True)
class ProjectorLibrary:
    """The 2x2 projectors ``pi+``, ``pi-`` and their four 4x4 tensor products."""

    pi_plus: DyadicMatrix
    pi_minus: DyadicMatrix
    Pi: tuple[DyadicMatrix, DyadicMatrix, DyadicMatrix, DyadicMatrix]

    @classmethod
    def standard(cls) -> ProjectorLibrary:
        pp = DyadicMatrix(np.array([[1, 1], [1, 1]]), 1)
        pm = DyadicMatrix(np.array([[1, -1], [-1, 1]]), 1)
        # Pi^i = pi^(s) (x) pi^(t) with (s, t) the binary digits of i, '+' = 0.
        return cls(pp, pm, (pp.kron(pp), pp.kron(pm), pm.kron(pp), pm.kron(pm)))

    def names(self) -> dict[str, DyadicMatrix]:
        return {
            "pi+": self.pi_plus,
            "pi-": self.pi_minus,
            **{f"Pi{i}": P for i, P in enumerate(self.Pi)},
        }


PROJECTORS = ProjectorLibrary.standard()


@dataclass(frozen=True)
class MacroEdge:
    i: int
    j: int
    weight: DyadicMatrix
    label: str


@dataclass(frozen=True)
class SupergraphSpec:
    """Matrix-weighted graph on macronodes of ``macronode_size`` physical nodes."""

    macronode_count: int
    macronode_size: int
    edges: tuple[MacroEdge, ...]

    def expand(self) -> WeightedGraph:
        """Physical adjacency matrix; macronode ``i`` owns indices ``m*i .. m*i + m - 1``."""
        m, n = self.macronode_size, self.macronode_count
        exp = max((e.weight.exponent for e in self.edges), default=0)
        num = np.zeros((n * m, n * m), dtype=np.int64)
        for e in self.edges:
            w = e.weight.rescaled(exp)
            num[e.i * m:(e.i + 1) * m, e.j * m:(e.j + 1) * m] += w
            num[e.j * m:(e.j + 1) * m, e.i * m:(e.i + 1) * m] += w.T
        return WeightedGraph(DyadicMatrix(num, exp), m)

    def degree_labels(self) -> list[list[str]]:
        """Projector labels incident on each macronode."""
        out: list[list[str]] = [[] for _ in range(self.macronode_count)]
        for e in self.edges:
            out[e.i].append(e.label)
            out[e.j].append(e.label)
        return out

    def physical_edge_labels(self) -> dict[tuple[int, int], str]:
        """Map each physical edge ``(a, b)``, ``a < b``, to its macro-edge label."""
        m = self.macronode_size
        out = {}
        for e in self.edges:
            for s in range(m):
                for t in range(m):
                    if e.weight.numerators[s, t]:
                        a, b = e.i * m + s, e.j * m + t
                        out[(min(a, b), max(a, b))] = e.label
        return out


def _check_even(value: int, minimum: int, name: str) -> None:
    if value % 2 or value < minimum:
        raise ValueError(f"{name} must be even and at least {minimum}, got {value}")


def ring_skew_labels(n: int) -> Permutation:
    """Relabel an alternating ring so its adjacency becomes skew-circulant.

    Position ``p`` on the ring keeps label ``p`` when even and gets ``n - 2 - p``
    (mod ``n``) when odd: even labels climb one way round the ring while odd
    labels descend. Edges starting at even positions then land on the
    skew-diagonal ``-3 (mod n)`` and edges starting at odd ones on ``-1``.
    """
    return Permutation(tuple(p if p % 2 == 0 else (n - 2 - p) % n for p in range(n)))


def build_crown_supergraph(N: int) -> SupergraphSpec:
    """Ring of ``N`` two-node macronodes, ``A[j, j+1] = pi+`` for even ``j`` and ``pi-`` for odd."""
    _check_even(N, 4, "N")
    edges = tuple(
        MacroEdge(j, (j + 1) % N, *((PROJECTORS.pi_plus, "pi+") if j % 2 == 0 else (PROJECTORS.pi_minus, "pi-")))
        for j in range(N)
    )
    return SupergraphSpec(N, 2, edges)


def crown_relabeling(N: int) -> Permutation:
    """Physical relabelling taking the crown supergraph expansion to :func:`crown_block_hankel`."""
    _check_even(N, 4, "N")
    return ring_skew_labels(N).lift(2)


def crown_hankel_relabeling(N: int) -> Permutation:
    """Supergraph expansion to :func:`crown_full_hankel`: ring relabelling, then subindex swap."""
    return crown_relabeling(N).then(subindex_swap_permutation(N, 2))


def crown_block_hankel(N: int) -> BlockShorthand:
    """``[0^(N-3), pi+, 0 / pi- / 0^(N-3), pi+, 0]`` with 2x2 blocks."""
    _check_even(N, 4, "N")
    pp, pm = PROJECTORS.pi_plus, PROJECTORS.pi_minus
    return BlockShorthand.from_runs([N - 3, pp, 1, pm, N - 3, pp, 1], 2)


def crown_full_hankel(N: int) -> BlockShorthand:
    """Scalar shorthand ``1/2 [0^(N-3),1,0,1,0^(N-3),1,0 / -1 / same]`` on ``2N`` modes."""
    _check_even(N, 4, "N")
    side = [N - 3, [[1]], 1, [[1]], N - 3, [[1]], 1]
    return BlockShorthand.from_runs(side + [[[-1]]] + side, 1, scale=_HALF)


def build_torus_supergraph(M: int) -> SupergraphSpec:
    """Circulant supergraph on ``M**2`` four-node macronodes.

    Ring edges ``(j, j+1)`` carry ``Pi3`` for even ``j`` and ``Pi2`` for odd ``j``;
    long edges ``(j, j+M+1)`` carry ``Pi0`` for even ``j`` and ``Pi1`` for odd ``j``.
    Indices are taken mod ``M**2``.
    """
    _check_even(M, 4, "M")
    n = M * M
    assert gcd(M + 1, n) == 1
    P = PROJECTORS.Pi
    edges = []
    for j in range(n):
        edges.append(MacroEdge(j, (j + 1) % n, *((P[3], "Pi3") if j % 2 == 0 else (P[2], "Pi2"))))
    for j in range(n):
        edges.append(MacroEdge(j, (j + M + 1) % n, *((P[0], "Pi0") if j % 2 == 0 else (P[1], "Pi1"))))
    return SupergraphSpec(n, 4, tuple(edges))


def torus_relabeling(M: int) -> Permutation:
    """Physical relabelling taking the torus supergraph expansion to :func:`torus_skew_circulant_4`."""
    _check_even(M, 4, "M")
    return ring_skew_labels(M * M).lift(4)


def torus_unit_swap(M: int) -> Permutation:
    """Subindex swap on 2x2 units used to turn :func:`torus_primed_4` into :func:`torus_block_hankel_2`.

    Each 4x4 block is viewed as a 2x2 array of 2x2 blocks; unit ``2*b + c``
    (macronode ``b``, half ``c``) moves to ``M**2 * c + b``.
    """
    _check_even(M, 4, "M")
    return subindex_swap_permutation(M * M, 2, unit=2)


def _torus_4(M: int, primed: bool) -> BlockShorthand:
    _check_even(M, 4, "M")
    P = PROJECTORS.Pi
    u, v = M - 1, M * M - 2 * M - 3
    last = -P[3] if primed else P[3]
    left = [u, P[1], v, P[0], u, P[3], 1]
    right = [u, P[1], v, P[0], u, last, 1]
    return BlockShorthand.from_runs(left + [P[2]] + right, 4)


def torus_skew_circulant_4(M: int) -> BlockShorthand:
    """``[0^u,Pi1,0^v,Pi0,0^u,Pi3,0 / Pi2 / 0^u,Pi1,0^v,Pi0,0^u,Pi3,0]``, ``u = M-1``, ``v = M^2-2M-3``."""
    return _torus_4(M, primed=False)


def torus_primed_4(M: int) -> BlockShorthand:
    """As :func:`torus_skew_circulant_4` with the next-to-last block negated (``Pi3 -> -Pi3``)."""
    return _torus_4(M, primed=True)


def torus_block_hankel_2(M: int) -> BlockShorthand:
    """2x2-block shorthand of the primed torus after :func:`torus_unit_swap`.

    ``1/2 [L / -pi+ / L]`` with
    ``L = 0^u,pi-,0^v,pi+,0^u,pi-,0,pi+,0^u,pi-,0^v,pi+,0^u,-pi-,0``,
    ``u = M-1`` and ``v = M^2-2M-3``: fifteen nonzero blocks, seven of
    ``pi+`` type and eight of ``pi-`` type, for every ``M``.
    """
    _check_even(M, 6, "M")
    pp, pm = PROJECTORS.pi_plus, PROJECTORS.pi_minus
    u, v = M - 1, M * M - 2 * M - 3
    side = [u, pm, v, pp, u, pm, 1, pp, u, pm, v, pp, u, -pm, 1]
    return BlockShorthand.from_runs(side + [-pp] + side, 2, scale=_HALF)
