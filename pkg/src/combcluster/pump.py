"""Compile (block-)Hankel coupling matrices into pump spectra.

Each nonzero shorthand entry at 1-based position ``k`` drives every mode pair
``(m, n)`` with ``m + n = k + 1`` (1-based frequency labels), so the pump line
sits at ``omega_m + omega_n = 2*Omega + (k + 1)*dOmega``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .hankel import (
    BlockShorthand,
    WeightedGraph,
    check_orthogonal,
    is_block_hankel,
    two_coloring,
)

__all__ = [
    "CombSpec",
    "PumpLine",
    "PumpSpec",
    "BlockNotRealizable",
    "RealizabilityReport",
    "compile_scalar",
    "compile_polarized",
    "compile_shorthand",
    "pump_to_blocks",
    "validate_realizable",
]

CSV_COLUMNS = ("skew_index", "frequency_hz", "amplitude", "phase", "polarization_deg")


class BlockNotRealizable(ValueError):
    """A 2x2 block is not of the ``((a, b), (b, a))`` form a single polarized line produces."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"shorthand block {index} is not of the form ((a, b), (b, a))")


@dataclass(frozen=True)
class CombSpec:
    offset_hz: float
    fsr_hz: float
    n_freqs: int
    modes_per_freq: int = 1

    def __post_init__(self):
        if self.fsr_hz <= 0:
            raise ValueError("free spectral range must be positive")
        if self.modes_per_freq not in (1, 2):
            raise ValueError("modes_per_freq must be 1 or 2")
        if self.n_freqs < 1:
            raise ValueError("need at least one comb frequency")

    def frequency(self, n: int) -> float:
        """Frequency of comb line ``n`` (1-based)."""
        return self.offset_hz + n * self.fsr_hz


@dataclass(frozen=True)
class PumpLine:
    skew_index: int
    frequency_hz: float
    amplitude: float
    phase: float
    polarization_deg: float | None = None

    @property
    def expression(self) -> str:
        return f"2*Omega + {self.skew_index + 1}*dOmega"

    def coupled_pairs(self, n_freqs: int) -> list[tuple[int, int]]:
        """1-based frequency pairs ``(m, n)``, ``m <= n``, driven by this line."""
        total = self.skew_index + 1
        return [(m, total - m) for m in range(1, n_freqs + 1) if m <= total - m <= n_freqs]


@dataclass(frozen=True)
class PumpSpec:
    comb: CombSpec
    lines: tuple[PumpLine, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {"comb": asdict(self.comb), "lines": [asdict(line) for line in self.lines]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> PumpSpec:
        comb = CombSpec(**data["comb"])
        return cls(comb, tuple(PumpLine(**line) for line in data["lines"]))

    @classmethod
    def from_json(cls, text: str) -> PumpSpec:
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for line in self.lines:
            pol = "" if line.polarization_deg is None else repr(line.polarization_deg)
            writer.writerow(
                [line.skew_index, repr(line.frequency_hz), repr(line.amplitude), repr(line.phase), pol]
            )
        return buf.getvalue()


def _default_comb(s: BlockShorthand, comb: CombSpec | None) -> CombSpec:
    if comb is None:
        return CombSpec(0.0, 1.0, s.K, s.block_size)
    if comb.n_freqs != s.K or comb.modes_per_freq != s.block_size:
        raise ValueError(
            f"comb has {comb.n_freqs} frequencies x {comb.modes_per_freq} modes; "
            f"shorthand needs {s.K} x {s.block_size}"
        )
    return comb


def compile_scalar(s: BlockShorthand, comb: CombSpec | None = None) -> PumpSpec:
    """One line per nonzero entry of a scalar shorthand; negative entries get phase pi."""
    if s.block_size != 1:
        raise ValueError("compile_scalar needs a shorthand with 1x1 entries")
    comb = _default_comb(s, comb)
    lines = []
    for idx in s.nonzero_indices():
        value = float(s.blocks[idx][0, 0])
        k = idx + 1
        lines.append(
            PumpLine(
                skew_index=k,
                frequency_hz=2 * comb.offset_hz + (k + 1) * comb.fsr_hz,
                amplitude=abs(value),
                phase=0 if value > 0 else math.pi,
            )
        )
    return PumpSpec(comb, tuple(lines))


def compile_polarized(s: BlockShorthand, comb: CombSpec | None = None) -> PumpSpec:
    """One polarized line per nonzero 2x2 block ``((a, b), (b, a))``.

    ``a`` (YY and ZZ couplings) is the Z-pump share and ``b`` (YZ coupling) the
    Y-pump share, so the angle from Z is ``atan2(b, a)``. An overall negative
    block is reported as phase pi with the angle kept in ``(-90, 90]``.
    """
    if s.block_size != 2:
        raise ValueError("compile_polarized needs a shorthand with 2x2 blocks")
    comb = _default_comb(s, comb)
    lines = []
    for idx in s.nonzero_indices():
        block = s.blocks[idx]
        if block[0, 0] != block[1, 1] or block[0, 1] != block[1, 0]:
            raise BlockNotRealizable(idx)
        a, b = float(block[0, 0]), float(block[0, 1])
        phase = 0
        if a < 0 or (a == 0 and b < 0):
            a, b, phase = -a, -b, math.pi
        k = idx + 1
        lines.append(
            PumpLine(
                skew_index=k,
                frequency_hz=2 * comb.offset_hz + (k + 1) * comb.fsr_hz,
                amplitude=math.hypot(a, b),
                phase=phase,
                polarization_deg=math.degrees(math.atan2(b, a)),
            )
        )
    return PumpSpec(comb, tuple(lines))


def compile_shorthand(s: BlockShorthand, comb: CombSpec | None = None) -> PumpSpec:
    if s.block_size == 1:
        return compile_scalar(s, comb)
    if s.block_size == 2:
        return compile_polarized(s, comb)
    raise ValueError(f"no pump model for {s.block_size}x{s.block_size} blocks")


def pump_to_blocks(spec: PumpSpec) -> np.ndarray:
    """Rebuild the shorthand blocks (as floats) that a pump spectrum implements."""
    K, m = spec.comb.n_freqs, spec.comb.modes_per_freq
    out = np.zeros((2 * K - 1, m, m))
    for line in spec.lines:
        sign = -1.0 if line.phase else 1.0
        if m == 1:
            out[line.skew_index - 1] = sign * line.amplitude
        else:
            theta = math.radians(line.polarization_deg)
            a, b = line.amplitude * math.cos(theta), line.amplitude * math.sin(theta)
            out[line.skew_index - 1] = sign * np.array([[a, b], [b, a]])
    return out


@dataclass(frozen=True)
class RealizabilityReport:
    """Whether a coupling matrix can be pumped: block-Hankel, orthogonal, bipartite."""

    block_hankel: bool
    orthogonal: bool
    bipartite: bool
    hankel_violation: tuple[int, int] | None = None
    orthogonality_residual: tuple[int, int] | None = None
    bipartite_failure: str | None = None

    @property
    def compilable(self) -> bool:
        return self.block_hankel and self.orthogonal and self.bipartite

    def to_dict(self) -> dict:
        return {**asdict(self), "compilable": self.compilable}


def validate_realizable(g: WeightedGraph, m: int | None = None) -> RealizabilityReport:
    m = g.block_size if m is None else m
    hankel_ok, where = is_block_hankel(g, m)
    orth_ok, residual = check_orthogonal(g)
    first_residual = None if orth_ok else residual.nonzero()[0]
    diag = np.flatnonzero(g.weights.numerators.diagonal())
    failure = None
    if diag.size:
        failure = f"nonzero diagonal at node {int(diag[0])}"
    elif two_coloring(g) is None:
        failure = "odd cycle"
    return RealizabilityReport(
        block_hankel=hankel_ok,
        orthogonal=orth_ok,
        bipartite=failure is None,
        hankel_violation=where,
        orthogonality_residual=first_residual,
        bipartite_failure=failure,
    )
