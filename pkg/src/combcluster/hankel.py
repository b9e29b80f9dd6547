"""Hankel and block-Hankel matrices, shorthand vectors, and structural checks.

Node indices are 0-based throughout. A mode labelled ``k`` in 1-based comb
notation is index ``k - 1`` here.

A block-Hankel matrix with ``K x K`` blocks of size ``m`` is determined by the
``2K - 1`` blocks on its first block row and last block column; that list is
the shorthand vector, and block ``(i, j)`` of the matrix equals shorthand
entry ``i + j``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .dyadic import Dyadic, DyadicMatrix

__all__ = [
    "WeightedGraph",
    "BlockShorthand",
    "Permutation",
    "NotBlockHankel",
    "NotFactorizable",
    "MalformedShorthand",
    "TwoPathReport",
    "expand_shorthand",
    "to_shorthand",
    "is_block_hankel",
    "check_orthogonal",
    "two_path_conditions",
    "bipartite_factor",
    "two_coloring",
    "tensor_swap_permutation",
    "subindex_swap_permutation",
    "apply_permutation",
    "X",
]


class MalformedShorthand(ValueError):
    pass


class NotBlockHankel(ValueError):
    """Raised with the first block pair ``(i, j)`` whose block differs from shorthand entry ``i + j``."""

    def __init__(self, i: int, j: int, block_size: int):
        self.i, self.j, self.block_size = i, j, block_size
        super().__init__(
            f"block ({i}, {j}) (size {block_size}) breaks the constant block skew-diagonal {i + j}"
        )


class NotFactorizable(ValueError):
    """Raised when a matrix is not of the form ``A0 (x) X``."""

    def __init__(self, message: str, location: tuple[int, int]):
        self.location = location
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Symmetric exact adjacency matrix with a declared block granularity."""

    weights: DyadicMatrix
    block_size: int = 1

    def __post_init__(self):
        if not isinstance(self.weights, DyadicMatrix):
            object.__setattr__(self, "weights", DyadicMatrix.from_values(self.weights))
        n, n2 = self.weights.shape
        if n != n2:
            raise ValueError(f"adjacency matrix must be square, got {self.weights.shape}")
        if not self.weights.is_symmetric():
            raise ValueError("adjacency matrix must be symmetric")
        if self.block_size < 1 or n % self.block_size:
            raise ValueError(f"block size {self.block_size} does not divide {n}")

    @classmethod
    def from_matrix(cls, values, block_size: int = 1) -> WeightedGraph:
        return cls(DyadicMatrix.from_values(values), block_size)

    @classmethod
    def empty(cls, n: int, block_size: int = 1) -> WeightedGraph:
        return cls(DyadicMatrix.zeros(n), block_size)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def to_float(self) -> np.ndarray:
        return self.weights.to_float()

    def __getitem__(self, ij) -> Dyadic:
        return self.weights[ij]

    def edges(self) -> Iterator[tuple[int, int, Dyadic]]:
        """Undirected edges ``(i, j, w)`` with ``i <= j``."""
        for i, j, w in self.weights.entries():
            if i <= j:
                yield i, j, w

    def edge_count(self) -> int:
        return sum(1 for i, j, _ in self.edges() if i != j)

    def neighbours(self) -> list[list[int]]:
        nz = self.weights.numerators
        return [list(map(int, np.flatnonzero(nz[i]))) for i in range(self.n)]

    def degrees(self) -> list[int]:
        nz = self.weights.numerators
        return [int(np.count_nonzero(nz[i])) - int(nz[i, i] != 0) for i in range(self.n)]

    def with_block_size(self, m: int) -> WeightedGraph:
        return WeightedGraph(self.weights, m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.weights == other.weights

    def __hash__(self) -> int:
        return hash(self.weights)

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, block_size={self.block_size}, edges={self.edge_count()})"


@dataclass(frozen=True, eq=False)
class BlockShorthand:
    """Shorthand vector of a (block-)Hankel matrix.

    ``blocks`` holds ``2K - 1`` symmetric ``m x m`` blocks. The slash-delimited
    centre block, shared by the first block row and last block column, sits at
    list index ``K - 1`` (1-based position ``K``).
    """

    blocks: tuple[DyadicMatrix, ...]
    block_size: int = 1

    def __post_init__(self):
        blocks = tuple(
            b if isinstance(b, DyadicMatrix) else DyadicMatrix.from_values(b)
            for b in self.blocks
        )
        object.__setattr__(self, "blocks", blocks)
        m = self.block_size
        if len(blocks) % 2 == 0:
            raise MalformedShorthand(f"shorthand length {len(blocks)} is even")
        for k, b in enumerate(blocks):
            if b.shape != (m, m):
                raise MalformedShorthand(f"block {k} has shape {b.shape}, expected ({m}, {m})")
            if not b.is_symmetric():
                raise MalformedShorthand(f"block {k} is not symmetric")

    @classmethod
    def scalar(cls, values: Sequence) -> BlockShorthand:
        """Shorthand with 1x1 entries, e.g. ``[a, b, c, d, e]`` for ``[a,b/c/d,e]``."""
        return cls(tuple(DyadicMatrix.from_values([[v]]) for v in values), 1)

    @classmethod
    def from_runs(cls, parts: Sequence, block_size: int, scale=1) -> BlockShorthand:
        """Assemble from ``int`` zero-run lengths and explicit blocks, scaled by ``scale``."""
        zero = DyadicMatrix.zeros(block_size)
        blocks: list[DyadicMatrix] = []
        for part in parts:
            if isinstance(part, (int, np.integer)):
                if part < 0:
                    raise MalformedShorthand(f"negative zero-run length {part}")
                blocks.extend([zero] * int(part))
            else:
                blocks.append(DyadicMatrix.from_values(part) * scale)
        return cls(tuple(blocks), block_size)

    @property
    def length(self) -> int:
        return len(self.blocks)

    @property
    def K(self) -> int:
        """Number of blocks per side of the expanded matrix."""
        return (len(self.blocks) + 1) // 2

    @property
    def center(self) -> int:
        """1-based position of the slash-delimited centre block."""
        return self.K

    @property
    def modes(self) -> int:
        return self.K * self.block_size

    def nonzero_indices(self) -> list[int]:
        """0-based positions of the nonzero blocks."""
        return [k for k, b in enumerate(self.blocks) if not b.is_zero()]

    def to_float(self) -> np.ndarray:
        return np.stack([b.to_float() for b in self.blocks])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockShorthand):
            return NotImplemented
        return self.block_size == other.block_size and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash((self.block_size, self.blocks))

    def __str__(self) -> str:
        def fmt(b: DyadicMatrix) -> str:
            if self.block_size == 1:
                return str(b[0, 0])
            return "0" if b.is_zero() else repr(b.to_fractions().tolist())

        c = self.K - 1
        left = ",".join(fmt(b) for b in self.blocks[:c])
        right = ",".join(fmt(b) for b in self.blocks[c + 1:])
        return f"[{left}/{fmt(self.blocks[c])}/{right}]"


@dataclass(frozen=True)
class Permutation:
    """Relabelling ``old index i -> new index mapping[i]``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(v) for v in self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError("mapping is not a bijection on {0..n-1}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))

    def then(self, other: Permutation) -> Permutation:
        """Apply ``self`` first, then ``other``."""
        if other.n != self.n:
            raise ValueError("permutation sizes differ")
        return Permutation(tuple(other.mapping[j] for j in self.mapping))

    def lift(self, m: int) -> Permutation:
        """Act on macronodes of size ``m``: index ``m*i + s`` goes to ``m*p(i) + s``."""
        return Permutation(tuple(m * j + s for j in self.mapping for s in range(m)))

    def array(self) -> np.ndarray:
        return np.asarray(self.mapping, dtype=np.intp)


X = WeightedGraph(DyadicMatrix(np.array([[0, 1], [1, 0]])))


def _block_view(num: np.ndarray, m: int) -> np.ndarray:
    K = num.shape[0] // m
    return num.reshape(K, m, K, m).transpose(0, 2, 1, 3)


def expand_shorthand(s: BlockShorthand) -> WeightedGraph:
    """Expand a shorthand vector into its ``(K m) x (K m)`` block-Hankel matrix."""
    m, K = s.block_size, s.K
    exp = max(b.exponent for b in s.blocks)
    stack = np.stack([b.rescaled(exp) for b in s.blocks])
    idx = np.arange(K)[:, None] + np.arange(K)[None, :]
    num = stack[idx].transpose(0, 2, 1, 3).reshape(K * m, K * m)
    return WeightedGraph(DyadicMatrix(num, exp), m)


def _shorthand_blocks(g: WeightedGraph, m: int) -> list[DyadicMatrix]:
    K = g.n // m
    w = g.weights
    out = []
    for k in range(2 * K - 1):
        i, j = (0, k) if k < K else (k - K + 1, K - 1)
        out.append(w[i * m:(i + 1) * m, j * m:(j + 1) * m])
    return out


def is_block_hankel(g: WeightedGraph, m: int | None = None) -> tuple[bool, tuple[int, int] | None]:
    """Predicate form of :func:`to_shorthand`: ``(ok, first violating block pair)``."""
    m = g.block_size if m is None else m
    if m < 1 or g.n % m:
        raise ValueError(f"block size {m} does not divide {g.n}")
    K = g.n // m
    view = _block_view(g.weights.numerators, m)
    ks = np.arange(2 * K - 1)
    rows = np.where(ks < K, 0, ks - K + 1)
    cols = np.where(ks < K, ks, K - 1)
    ref = view[rows, cols]
    idx = np.arange(K)[:, None] + np.arange(K)[None, :]
    bad = np.any(view != ref[idx], axis=(2, 3))
    if not bad.any():
        return True, None
    i, j = np.argwhere(bad)[0]
    return False, (int(i), int(j))


def to_shorthand(g: WeightedGraph, m: int | None = None) -> BlockShorthand:
    """Read off the shorthand vector of a block-Hankel matrix.

    Raises:
        NotBlockHankel: if some block differs from its skew-diagonal representative.
    """
    m = g.block_size if m is None else m
    ok, where = is_block_hankel(g, m)
    if not ok:
        raise NotBlockHankel(where[0], where[1], m)
    return BlockShorthand(tuple(_shorthand_blocks(g, m)), m)


def check_orthogonal(g: WeightedGraph) -> tuple[bool, DyadicMatrix]:
    """Exact test of ``A @ A == 1``; returns the flag and the residual ``A @ A - 1``."""
    residual = g.weights @ g.weights - DyadicMatrix.identity(g.n)
    return residual.is_zero(), residual


@dataclass(frozen=True)
class TwoPathReport:
    """Failures of the two local orthogonality conditions.

    ``closed`` lists ``(node, total)`` where closed 2-path weights do not sum to 1;
    ``open`` lists ``(j, k, total)`` with ``j < k`` where 2-paths between distinct
    nodes do not cancel; ``paths`` counts the 2-paths feeding each open failure.
    """

    closed: tuple[tuple[int, Dyadic], ...]
    open: tuple[tuple[int, int, Dyadic], ...]
    paths: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.closed and not self.open


def two_path_conditions(g: WeightedGraph) -> TwoPathReport:
    """Check orthogonality by enumerating 2-paths through the neighbour lists.

    Works node by node without forming ``A @ A``, so it serves as an independent
    route to the same verdict as :func:`check_orthogonal`.
    """
    num = g.weights.numerators
    den_exp = 2 * g.weights.exponent
    one = 1 << den_exp
    nbrs = g.neighbours()
    closed = []
    open_ = []
    counts = []
    for j in range(g.n):
        sums: dict[int, int] = {}
        npaths: dict[int, int] = {}
        for l in nbrs[j]:
            wjl = int(num[j, l])
            for k in nbrs[l]:
                sums[k] = sums.get(k, 0) + wjl * int(num[l, k])
                npaths[k] = npaths.get(k, 0) + 1
        if sums.get(j, 0) != one:
            closed.append((j, Dyadic(sums.get(j, 0), 1 << den_exp)))
        for k in sorted(sums):
            if k > j and sums[k] != 0:
                open_.append((j, k, Dyadic(sums[k], 1 << den_exp)))
                counts.append(npaths[k])
    return TwoPathReport(tuple(closed), tuple(open_), tuple(counts))


def bipartite_factor(g: WeightedGraph) -> WeightedGraph:
    """Factor ``g = A0 (x) X`` exactly and return ``A0``.

    Index ``2*i + a`` of ``g`` corresponds to ``(i, a)``; the factor is read
    from the ``(2i, 2j+1)`` entries and the whole tensor pattern is verified.

    Raises:
        NotFactorizable: on a nonzero diagonal entry (single-mode squeezing) or
            any entry inconsistent with the tensor pattern.
    """
    n = g.n
    if n % 2:
        raise NotFactorizable(f"odd dimension {n}", (0, 0))
    num = g.weights.numerators
    diag = np.flatnonzero(np.diagonal(num))
    if diag.size:
        i = int(diag[0])
        raise NotFactorizable(f"nonzero main diagonal at ({i}, {i})", (i, i))
    a0 = DyadicMatrix(num[0::2, 1::2], g.weights.exponent)
    rebuilt = a0.kron(X.weights)
    if rebuilt != g.weights:
        e = max(rebuilt.exponent, g.weights.exponent)
        diff = np.argwhere(rebuilt.rescaled(e) != g.weights.rescaled(e))
        i, j = map(int, diff[0])
        raise NotFactorizable(f"entry ({i}, {j}) breaks the A0 (x) X pattern", (i, j))
    block = g.block_size if g.block_size > 1 and (n // 2) % g.block_size == 0 else 1
    return WeightedGraph(a0, block)


def two_coloring(g: WeightedGraph) -> list[int] | None:
    """BFS 2-colouring (colour of node 0 in each component is 0), or ``None`` if an odd cycle exists."""
    nbrs = g.neighbours()
    colour = [-1] * g.n
    for start in range(g.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in nbrs[v]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[v]
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return None
    return colour


def subindex_swap_permutation(count_major: int, count_minor: int = 2, unit: int = 1) -> Permutation:
    """Reverse the order of a two-level index.

    An index ``[m, c] = count_minor*m + c`` (``m < count_major``, ``c < count_minor``)
    is sent to ``[c, m] = count_major*c + m``. With ``unit > 1`` the permuted
    objects are consecutive runs of ``unit`` indices that keep their inner order.
    """
    mapping = [0] * (count_major * count_minor * unit)
    for m in range(count_major):
        for c in range(count_minor):
            for d in range(unit):
                mapping[(count_minor * m + c) * unit + d] = (count_major * c + m) * unit + d
    return Permutation(tuple(mapping))


def tensor_swap_permutation(k: int) -> Permutation:
    """Relabelling that turns ``A0 (x) X`` into ``X (x) A0`` for any ``k x k`` ``A0``.

    For ``k = 2`` this exchanges indices 1 and 2 (modes 2 and 3 in 1-based labels).
    """
    return subindex_swap_permutation(k, 2)


def apply_permutation(g: WeightedGraph, p: Permutation) -> WeightedGraph:
    """Return ``P g P^T``: the weight on ``(i, j)`` moves to ``(p(i), p(j))``."""
    if p.n != g.n:
        raise ValueError(f"permutation of size {p.n} cannot act on a graph with {g.n} nodes")
    inv = p.inverse().array()
    num = g.weights.numerators[np.ix_(inv, inv)]
    return WeightedGraph(DyadicMatrix(num, g.weights.exponent), g.block_size)
