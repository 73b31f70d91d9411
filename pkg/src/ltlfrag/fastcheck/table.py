"""Complexity of existential model checking for every (temporal set, clone) pair."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from ..clones import CloneId, classify_clone
from ..formula import BoolFun, TEMPORAL_OPS


class Label(str, Enum):
    InL = "InL"
    NLComplete = "NLComplete"
    NPHard = "NPHard"
    PSpaceHard = "PSpaceHard"
    NPComplete = "NPComplete"
    PSpaceComplete = "PSpaceComplete"
    Open = "Open"

    @property
    def pretty(self) -> str:
        return _PRETTY[self]


_PRETTY = {
    Label.InL: "in L",
    Label.NLComplete: "NL-complete",
    Label.NPHard: "NP-hard",
    Label.PSpaceHard: "PSPACE-hard",
    Label.NPComplete: "NP-complete",
    Label.PSpaceComplete: "PSPACE-complete",
    Label.Open: "Open",
}


@dataclass(frozen=True)
class Classification:
    label: Label
    source: str | None  # legend key: "1".."16", "S", "T" or "c"

    def __str__(self) -> str:
        if self.source is None:
            return self.label.pretty
        return f"{self.label.pretty} ({self.source})"


COLUMNS = (CloneId.I, CloneId.N, CloneId.E, CloneId.V, CloneId.M, CloneId.L, CloneId.BF)

# Cells read left to right in COLUMNS order. NL/L/NP/PS name the class,
# the suffix is the legend key, "--" is a blank (open) cell.
_GRID = """
X     NL10 NL10 NL12 NL11 NP2  NL14 NP-S
G     NL10 NL10 NL12 NL13 NP2  --   NP-S
F     NL10 NL10 NP5  NL11 NP2  --   NP-S
FG    NL10 NL10 NPc  NL13 NPc  --   NP-S
FX    NL10 NL10 NPc  NL11 NPc  --   PS-T
GX    NL10 NL10 NL12 NP6  PS3  --   PS-T
FGX   NL10 NL10 NPc  NPc  PS1  --   PS-T
S     L15  L15  L15  L15  L15  L15  L15
SX    NP8  NP8  NP8  NP8  NP8  NP8  NP8
SG    NP8  NP8  NP8  NP8  PS4  NP8  PS4
SF    NL16 NP9  NP9  NL16 PS4  NP9  PS4
SFG   NPc  NPc  NPc  NPc  PSc  NPc  PS-S
SFX   NPc  NPc  NPc  NPc  PSc  NPc  PS-T
SGX   NPc  NPc  NPc  NPc  PSc  NPc  PS-T
SFGX  NPc  NPc  NPc  NPc  PSc  NPc  PS-T
U     NP7  NPc  NPc  NPc  PS3  NPc  PS-T
"""

_CLASS = {"NL": Label.NLComplete, "L": Label.InL, "NP": Label.NPHard, "PS": Label.PSpaceHard}


def _cell(text: str) -> Classification:
    if text == "--":
        return Classification(Label.Open, None)
    for prefix in ("NL", "NP", "PS", "L"):
        if text.startswith(prefix):
            return Classification(_CLASS[prefix], text[len(prefix):].lstrip("-"))
    raise ValueError(text)


TABLE: dict[str, dict[CloneId, Classification]] = {}
for _line in _GRID.strip().splitlines():
    _row, *_cells = _line.split()
    TABLE[_row] = {c: _cell(t) for c, t in zip(COLUMNS, _cells, strict=True)}

ROWS = tuple(TABLE)


def row_of(temporal: Iterable[str]) -> str:
    """The table row for a set of temporal operators.

    Any set containing U falls into the last row; the empty set is read
    as the S row (no temporal operator behaves like S alone).
    """
    ops = set(temporal)
    unknown = ops - set(TEMPORAL_OPS)
    if unknown:
        raise ValueError(f"unknown temporal operators: {sorted(unknown)}")
    if "U" in ops:
        return "U"
    future = "".join(o for o in "FGX" if o in ops)
    if "S" in ops or not future:
        return "S" + future
    return future


def classify_problem(temporal: Iterable[str], base: Iterable[BoolFun]) -> Classification:
    return TABLE[row_of(temporal)][classify_clone(base)]


def classify_cell(temporal: Iterable[str], clone: CloneId) -> Classification:
    return TABLE[row_of(temporal)][clone]
