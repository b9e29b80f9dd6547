"""Graph files, shorthand text syntax and DOT export.

Weights cross the file boundary as integer ``num``/``den`` pairs so that
reading a file back gives the identical exact matrix.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .dyadic import Dyadic, DyadicMatrix
from .hankel import BlockShorthand, WeightedGraph, expand_shorthand, to_shorthand

__all__ = [
    "GraphFile",
    "GraphFileError",
    "parse_shorthand",
    "format_shorthand",
    "to_dot",
    "PROJECTOR_COLORS",
]

FORMAT_VERSION = 1

# Colours of the four 4x4 projector bands; the 2x2 pair reuses two of them.
PROJECTOR_COLORS = {
    "Pi0": "red",
    "Pi1": "yellow",
    "Pi2": "blue",
    "Pi3": "green",
    "pi+": "red",
    "pi-": "blue",
}


class GraphFileError(ValueError):
    pass


def _dyadic_json(d: Dyadic) -> dict[str, int]:
    return {"num": d.numerator, "den": d.denominator}


def _dyadic_from_json(obj: Any) -> Dyadic:
    try:
        return Dyadic(int(obj["num"]), int(obj.get("den", 1)))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFileError(f"bad dyadic entry {obj!r}: {exc}") from exc


@dataclass(frozen=True)
class GraphFile:
    """A graph plus optional provenance (``family``: name, size, form)."""

    graph: WeightedGraph
    encoding: str = "dense"
    family: dict | None = None

    def __post_init__(self):
        if self.encoding not in ("dense", "shorthand"):
            raise GraphFileError(f"unknown encoding {self.encoding!r}")

    @property
    def shorthand(self) -> BlockShorthand:
        return to_shorthand(self.graph, self.graph.block_size)

    def to_dict(self) -> dict:
        g = self.graph
        out: dict[str, Any] = {
            "version": FORMAT_VERSION,
            "modes": g.n,
            "block_size": g.block_size,
            "encoding": self.encoding,
        }
        if self.encoding == "shorthand":
            out["shorthand"] = [
                [_dyadic_json(b[i, j]) for i in range(b.shape[0]) for j in range(b.shape[1])]
                for b in self.shorthand.blocks
            ]
        else:
            out["entries"] = [
                {"i": i, "j": j, **_dyadic_json(w)} for i, j, w in g.weights.entries()
            ]
        if self.family is not None:
            out["family"] = dict(self.family)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> GraphFile:
        try:
            version = int(data["version"])
            n = int(data["modes"])
            m = int(data.get("block_size", 1))
            encoding = data["encoding"]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphFileError(f"missing or invalid header field: {exc}") from exc
        if version != FORMAT_VERSION:
            raise GraphFileError(f"unsupported version {version}")
        if m < 1 or n % m:
            raise GraphFileError(f"block size {m} does not divide {n} modes")
        if encoding == "shorthand":
            raw = data.get("shorthand")
            if not isinstance(raw, list):
                raise GraphFileError("shorthand encoding needs a 'shorthand' list")
            blocks = []
            for k, flat in enumerate(raw):
                if len(flat) != m * m:
                    raise GraphFileError(f"shorthand block {k} has {len(flat)} entries, expected {m * m}")
                vals = [_dyadic_from_json(e) for e in flat]
                blocks.append(DyadicMatrix.from_values([vals[r * m:(r + 1) * m] for r in range(m)]))
            try:
                graph = expand_shorthand(BlockShorthand(tuple(blocks), m))
            except ValueError as exc:
                raise GraphFileError(str(exc)) from exc
            if graph.n != n:
                raise GraphFileError(f"shorthand expands to {graph.n} modes, header says {n}")
        elif encoding == "dense":
            rows: list[list[Dyadic]] = [[Dyadic(0)] * n for _ in range(n)]
            for e in data.get("entries", []):
                try:
                    i, j = int(e["i"]), int(e["j"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise GraphFileError(f"bad entry {e!r}") from exc
                if not (0 <= i < n and 0 <= j < n):
                    raise GraphFileError(f"entry ({i}, {j}) outside a {n}-mode graph")
                rows[i][j] = _dyadic_from_json(e)
            try:
                graph = WeightedGraph(DyadicMatrix.from_values(rows) if n else DyadicMatrix.zeros(0), m)
            except ValueError as exc:
                raise GraphFileError(str(exc)) from exc
        else:
            raise GraphFileError(f"unknown encoding {encoding!r}")
        return cls(graph, encoding, data.get("family"))

    @classmethod
    def from_json(cls, text: str) -> GraphFile:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFileError(f"not JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def read(cls, path) -> GraphFile:
        with open(path) as fh:
            return cls.from_json(fh.read())

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())


_RUN = re.compile(r"^0\^(\d+)$")


def _parse_entries(text: str) -> list[Dyadic]:
    out: list[Dyadic] = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        run = _RUN.match(tok)
        if run:
            out.extend([Dyadic(0)] * int(run.group(1)))
        else:
            try:
                out.append(Dyadic.coerce(Fraction(tok)))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"cannot read shorthand entry {tok!r}") from exc
    return out


def parse_shorthand(text: str) -> BlockShorthand:
    """Parse scalar shorthand text such as ``[a,b/c/d,e]``.

    Entries are integers or exact decimals (slashes inside the brackets only
    delimit the centre), ``0^k`` stands for ``k`` zeros, and an optional
    ``scale*`` prefix such as ``1/2*[...]`` multiplies every entry.
    """
    text = text.strip()
    scale = Dyadic(1)
    if "*" in text:
        prefix, text = text.split("*", 1)
        scale = Dyadic.coerce(Fraction(prefix.strip()))
        text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError("shorthand must be enclosed in brackets")
    parts = text[1:-1].split("/")
    if len(parts) != 3:
        raise ValueError("shorthand needs exactly one slash-delimited centre entry")
    left, centre, right = (_parse_entries(p) for p in parts)
    if len(centre) != 1:
        raise ValueError("centre must be a single entry")
    if len(left) != len(right):
        raise ValueError(f"{len(left)} entries before the centre but {len(right)} after")
    return BlockShorthand.scalar([scale * v for v in left + centre + right])


def format_shorthand(s: BlockShorthand) -> str:
    """Inverse of :func:`parse_shorthand` for scalar shorthands.

    A common power-of-two denominator is pulled into a ``1/2^e*`` prefix so the
    bracketed entries are integers; zero runs are written ``0^k``.
    """
    if s.block_size != 1:
        raise ValueError("text syntax covers scalar shorthands only")
    exp = max(b.exponent for b in s.blocks)
    nums = [int(b.rescaled(exp)[0, 0]) for b in s.blocks]

    def compress(vals: list[int]) -> str:
        out, run = [], 0
        for v in vals + [None]:
            if v == 0:
                run += 1
                continue
            if run:
                out.append(f"0^{run}" if run > 1 else "0")
                run = 0
            if v is not None:
                out.append(str(v))
        return ",".join(out)

    c = s.K - 1
    body = f"[{compress(nums[:c])}/{nums[c]}/{compress(nums[c + 1:])}]"
    return f"1/{1 << exp}*{body}" if exp else body


def to_dot(g: WeightedGraph, edge_labels: dict[tuple[int, int], str] | None = None, name: str = "G") -> str:
    """Undirected DOT text; edges are labelled with exact weights.

    ``edge_labels`` maps ``(a, b)`` with ``a < b`` to a projector name, which
    selects the edge colour.
    """
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        lines.append(f"  n{v};")
    for i, j, w in g.edges():
        attrs = [f'label="{w}"']
        if edge_labels and (i, j) in edge_labels:
            tag = edge_labels[(i, j)]
            attrs.append(f"color={PROJECTOR_COLORS.get(tag, 'black')}")
            attrs.append(f'projector="{tag}"')
        lines.append(f"  n{i} -- n{j} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
