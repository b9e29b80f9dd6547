"""Heisenberg-picture Gaussian simulation of the multimode OPO.

Conventions: ``hbar = 1``, ``q = (a^dag + a)/sqrt(2)``, so each vacuum
quadrature has variance 1/2. Phase-space vectors are ordered with all
positions first, ``(q_1..q_n, p_1..p_n)``, unlike the interleaved ordering
common elsewhere.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .hankel import WeightedGraph, check_orthogonal, two_coloring

__all__ = [
    "GaussianState",
    "NullifierStats",
    "MeasurementResult",
    "NotOrthogonal",
    "NotBipartite",
    "SYMPLECTIC_TOL",
    "DEGENERACY_TOL",
    "omega",
    "is_symplectic",
    "vacuum",
    "opo_symplectic",
    "phase_shift_T",
    "sign_flip",
    "apply",
    "nullifier_stats",
    "cluster_symplectic",
    "prepare_cluster",
    "condition_q",
    "measure_q",
]

SYMPLECTIC_TOL = 1e-10
DEGENERACY_TOL = 1e-12


class NotOrthogonal(ValueError):
    pass


class NotBipartite(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix in ``(q..., p...)`` ordering."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float)
        cov = np.array(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2:
            raise ValueError(f"mean must be a vector of even length, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"covariance shape {cov.shape} does not match mean length {mean.size}")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def is_physical(self, tol: float = 1e-9) -> bool:
        """Uncertainty relation ``cov + (i/2) Omega >= 0`` up to ``tol``."""
        w = np.linalg.eigvalsh(self.cov + 0.5j * omega(self.n_modes))
        return bool(w.min() >= -tol)


def omega(n: int) -> np.ndarray:
    """Symplectic form for ``(q..., p...)`` ordering."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    S = np.asarray(S)
    Om = omega(S.shape[0] // 2)
    return bool(np.max(np.abs(S @ Om @ S.T - Om)) < tol)


def vacuum(n: int) -> GaussianState:
    if n < 1:
        raise ValueError("need at least one mode")
    return GaussianState(np.zeros(2 * n), 0.5 * np.eye(2 * n))


def _as_float_graph(G) -> tuple[np.ndarray, bool | None]:
    if isinstance(G, WeightedGraph):
        return G.to_float(), check_orthogonal(G)[0]
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError("coupling matrix must be square")
    if not np.array_equal(G, G.T):
        raise ValueError("coupling matrix must be symmetric")
    return G, None


def opo_symplectic(G, r: float, method: str = "auto") -> np.ndarray:
    """Symplectic matrix ``diag(exp(r G), exp(-r G))`` of the OPO evolution.

    With ``G @ G == 1`` (checked exactly for a :class:`WeightedGraph`) the
    exponentials reduce to ``cosh(r) 1 +- sinh(r) G``. Otherwise, or with
    ``method="expm"``, a scaling-and-squaring exponential is used.
    """
    Gf, orthogonal = _as_float_graph(G)
    n = Gf.shape[0]
    if method not in ("auto", "closed", "expm"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and orthogonal is False:
        raise NotOrthogonal("closed form needs G @ G == 1")
    use_closed = method == "closed" or (method == "auto" and orthogonal)
    if use_closed:
        c, s = np.cosh(r), np.sinh(r)
        plus = c * np.eye(n) + s * Gf
        minus = c * np.eye(n) - s * Gf
    else:
        plus = scipy.linalg.expm(r * Gf)
        minus = scipy.linalg.expm(-r * Gf)
    zero = np.zeros((n, n))
    return np.block([[plus, zero], [zero, minus]])


def phase_shift_T(flip: Sequence[int], n: int) -> np.ndarray:
    """Quarter-turn redefinition ``q -> -p``, ``p -> q`` on the modes in ``flip``."""
    T = np.eye(2 * n)
    for k in set(int(k) for k in flip):
        if not 0 <= k < n:
            raise ValueError(f"mode {k} out of range for {n} modes")
        T[k, k] = 0.0
        T[n + k, n + k] = 0.0
        T[k, n + k] = -1.0
        T[n + k, k] = 1.0
    return T


def sign_flip(flip: Sequence[int], n: int) -> np.ndarray:
    """Half-turn ``q -> -q``, ``p -> -p`` on the modes in ``flip``."""
    d = np.ones(2 * n)
    for k in flip:
        d[k] = d[n + k] = -1.0
    return np.diag(d)


def apply(state: GaussianState, S: np.ndarray) -> GaussianState:
    S = np.asarray(S, dtype=float)
    if S.shape != (state.mean.size,) * 2:
        raise ValueError(f"symplectic of shape {S.shape} does not fit {state.n_modes} modes")
    cov = S @ state.cov @ S.T
    return GaussianState(S @ state.mean, 0.5 * (cov + cov.T))


class NullifierStats(NamedTuple):
    variances: np.ndarray
    covariance: np.ndarray


def nullifier_stats(state: GaussianState, A) -> NullifierStats:
    """Covariance of the nullifiers ``p - A q`` and its diagonal."""
    Af = A.to_float() if isinstance(A, WeightedGraph) else np.asarray(A, dtype=float)
    n = state.n_modes
    if Af.shape != (n, n):
        raise ValueError(f"adjacency of shape {Af.shape} does not fit {n} modes")
    R = np.hstack([-Af, np.eye(n)])
    N = R @ state.cov @ R.T
    N = 0.5 * (N + N.T)
    return NullifierStats(np.diag(N).copy(), N)


def cluster_symplectic(A: WeightedGraph, r: float) -> np.ndarray:
    """Squeeze with ``H(A)`` and quarter-turn one colour class of the bipartition.

    For a bipartite ``A`` with ``A @ A == 1`` every nullifier ``p - A q`` of
    the resulting state from vacuum has variance ``e^{-2r}`` and the nullifiers
    are uncorrelated.

    Raises:
        NotOrthogonal: ``A @ A != 1``.
        NotBipartite: ``A`` has a self-loop or odd cycle.
    """
    ok, _ = check_orthogonal(A)
    if not ok:
        raise NotOrthogonal("adjacency matrix does not square to the identity")
    colour = two_coloring(A)
    if colour is None or A.weights.numerators.diagonal().any():
        raise NotBipartite("adjacency matrix is not bipartite")
    flip = [k for k, c in enumerate(colour) if c == 1]
    return phase_shift_T(flip, A.n) @ opo_symplectic(A, r, method="closed")


def prepare_cluster(A: WeightedGraph, r: float) -> GaussianState:
    """Vacuum evolved into the CV cluster state with adjacency ``A`` at squeezing ``r``."""
    return apply(vacuum(A.n), cluster_symplectic(A, r))


def _drop_modes(n: int, modes: Sequence[int]) -> np.ndarray:
    keep = [k for k in range(n) if k not in set(modes)]
    return np.array(keep + [n + k for k in keep], dtype=np.intp)


class MeasurementResult(NamedTuple):
    outcomes: np.ndarray
    state: GaussianState
    degenerate: bool


def condition_q(
    state: GaussianState,
    modes: Sequence[int],
    outcomes: Sequence[float] | float = 0.0,
    tol: float = DEGENERACY_TOL,
) -> MeasurementResult:
    """Condition on ``q`` outcomes of ``modes`` and discard those modes.

    Uses the Schur complement of the measured block. If that block is singular
    to within ``tol`` the pseudo-inverse is used and ``degenerate`` is set.
    """
    n = state.n_modes
    modes = [int(k) for k in modes]
    if len(set(modes)) != len(modes) or any(not 0 <= k < n for k in modes):
        raise ValueError(f"invalid mode list {modes} for {n} modes")
    x = np.broadcast_to(np.asarray(outcomes, dtype=float), (len(modes),)).copy()
    if not modes:
        return MeasurementResult(x, state, False)
    keep = _drop_modes(n, modes)
    meas = np.array(modes, dtype=np.intp)
    V = state.cov
    Vmm = V[np.ix_(meas, meas)]
    Vkm = V[np.ix_(keep, meas)]
    evals = np.linalg.eigvalsh(Vmm)
    degenerate = bool(evals.min() < tol)
    if degenerate:
        inv = np.linalg.pinv(Vmm, rcond=tol, hermitian=True)
        gain = Vkm @ inv
    else:
        gain = scipy.linalg.solve(Vmm, Vkm.T, assume_a="pos").T
    mean = state.mean[keep] + gain @ (x - state.mean[meas])
    cov = V[np.ix_(keep, keep)] - gain @ Vkm.T
    return MeasurementResult(x, GaussianState(mean, 0.5 * (cov + cov.T)), degenerate)


def measure_q(
    state: GaussianState,
    node: int,
    rng: np.random.Generator | int | None = None,
    outcome: float | None = None,
    tol: float = DEGENERACY_TOL,
) -> tuple[float, GaussianState]:
    """Homodyne ``q`` measurement of one mode.

    Exactly one of ``rng`` (generator or seed) and ``outcome`` must be given;
    with ``rng`` the outcome is drawn from the marginal of ``q_node``.
    Returns the outcome and the conditional state on the remaining modes.
    """
    if (rng is None) == (outcome is None):
        raise ValueError("pass exactly one of rng or outcome")
    if not 0 <= node < state.n_modes:
        raise ValueError(f"mode {node} out of range")
    if outcome is None:
        rng = np.random.default_rng(rng)
        sd = np.sqrt(max(state.cov[node, node], 0.0))
        outcome = float(state.mean[node] + sd * rng.standard_normal())
    res = condition_q(state, [node], [outcome], tol)
    if res.degenerate:
        warnings.warn(f"q variance of mode {node} below {tol}; used pseudo-inverse", RuntimeWarning)
    return float(outcome), res.state
