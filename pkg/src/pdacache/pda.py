"""Placement delivery array data model, canonical labeling and file formats."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, TextIO, Union

import numpy as np

STAR = -1

__all__ = [
    "STAR",
    "ColLabel",
    "PdaArray",
    "PdaFormatError",
    "RawLabels",
    "RowLabel",
    "SchemeParams",
    "canonicalize",
    "pda_from_json",
    "pda_to_json",
    "read_pda",
    "write_pda",
]


class PdaFormatError(ValueError):
    """Malformed PDA text. ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column


class DimensionMismatchError(PdaFormatError):
    pass


@dataclass(frozen=True)
class RowLabel:
    """Packet index ``(f, g)``: a POA row and the block's g-vector."""

    f: tuple[int, ...]
    g: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"(({_digits(self.f)}),({_digits(self.g)}))"


@dataclass(frozen=True)
class ColLabel:
    """User index ``(I, c)``.

    ``block`` is only non-zero for columns appended by the column-selection
    transform, where the same ``(I, c)`` pair occurs once per block.
    """

    I: tuple[int, ...]
    c: tuple[int, ...]
    block: int = 0

    def __post_init__(self):
        if len(self.I) != len(self.c):
            raise ValueError("I and c must have equal length")
        if any(a >= b for a, b in zip(self.I, self.I[1:])):
            raise ValueError(f"I must be strictly increasing, got {self.I}")

    def __str__(self) -> str:
        s = "({" + ",".join(map(str, self.I)) + "},(" + _digits(self.c) + "))"
        return s if self.block == 0 else f"{s}#{self.block}"


def _digits(v: Iterable[int]) -> str:
    v = tuple(v)
    if all(0 <= x < 10 for x in v):
        return "".join(map(str, v))
    return ",".join(map(str, v))


@dataclass(frozen=True, eq=False)
class RawLabels:
    """Un-canonicalized ``(v, o(v))`` symbols.

    ``vec`` holds v encoded as a base-q integer (first coordinate most
    significant), ``occ`` the occurrence order; both are -1 on stars.
    """

    q: int
    length: int
    vec: np.ndarray
    occ: np.ndarray

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.length):
            code, d = divmod(int(code), self.q)
            out.append(d)
        return tuple(reversed(out))

    def label(self, i: int, j: int) -> Optional[tuple[tuple[int, ...], int]]:
        if self.vec[i, j] < 0:
            return None
        return self.decode(self.vec[i, j]), int(self.occ[i, j])


@dataclass(frozen=True, eq=False)
class PdaArray:
    """An F x K array over ``{*} U [0, S-1]``.

    ``grid`` uses :data:`STAR` for stars. For raw (un-canonicalized) arrays
    the non-star cells of ``grid`` are meaningless and ``raw`` carries the
    labels. ``z`` and ``s`` are the declared counts; ``None`` means "derive
    from the grid".
    """

    grid: np.ndarray
    z: Optional[int] = None
    s: Optional[int] = None
    row_labels: Optional[tuple[RowLabel, ...]] = None
    col_labels: Optional[tuple[ColLabel, ...]] = None
    raw: Optional[RawLabels] = None
    # (v, o) label of each canonical integer, kept by canonicalize()
    symbol_labels: Optional[tuple[tuple[tuple[int, ...], int], ...]] = None

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=np.int64)
        if g.ndim != 2:
            raise ValueError("grid must be two-dimensional")
        g.setflags(write=False)
        object.__setattr__(self, "grid", g)
        if self.row_labels is not None and len(self.row_labels) != g.shape[0]:
            raise ValueError("row label count does not match F")
        if self.col_labels is not None and len(self.col_labels) != g.shape[1]:
            raise ValueError("column label count does not match K")

    @property
    def F(self) -> int:
        return self.grid.shape[0]

    @property
    def K(self) -> int:
        return self.grid.shape[1]

    @property
    def canonical(self) -> bool:
        return self.raw is None

    @property
    def star_mask(self) -> np.ndarray:
        return self.grid == STAR

    @property
    def Z(self) -> int:
        if self.z is not None:
            return self.z
        return int(self.star_mask[:, 0].sum()) if self.K else 0

    @property
    def S(self) -> int:
        if self.s is not None:
            return self.s
        return len(np.unique(self.grid[self.grid != STAR]))

    @property
    def params(self) -> tuple[int, int, int, int]:
        return self.K, self.F, self.Z, self.S

    def entry(self, i: int, j: int) -> Union[None, int, tuple[tuple[int, ...], int]]:
        """``None`` for a star, else the integer or raw ``(v, o)`` label."""
        if self.raw is not None:
            return self.raw.label(i, j)
        x = int(self.grid[i, j])
        return None if x == STAR else x

    def row_index(self, label: RowLabel) -> int:
        return self.row_labels.index(label)

    def col_index(self, label: ColLabel) -> int:
        return self.col_labels.index(label)

    def __eq__(self, other):
        if not isinstance(other, PdaArray):
            return NotImplemented
        return (
            self.grid.shape == other.grid.shape
            and bool(np.array_equal(self.grid, other.grid))
            and self.params == other.params
        )

    __hash__ = None


@dataclass(frozen=True)
class SchemeParams:
    """Closed-form or measured parameters of a coded caching scheme."""

    K: int
    F: int
    Z: int
    S: int
    memory_ratio: Fraction = field(default=None)
    rate: Fraction = field(default=None)

    def __post_init__(self):
        if self.memory_ratio is None:
            object.__setattr__(self, "memory_ratio", Fraction(self.Z, self.F) if self.F else Fraction(0))
        if self.rate is None:
            object.__setattr__(self, "rate", Fraction(self.S, self.F) if self.F else Fraction(0))
        for name in ("memory_ratio", "rate"):
            if not isinstance(getattr(self, name), Fraction):
                raise TypeError(f"{name} must be a Fraction")

    def as_dict(self) -> dict:
        return {
            "K": self.K,
            "F": self.F,
            "Z": self.Z,
            "S": self.S,
            "memory_ratio": str(self.memory_ratio),
            "rate": str(self.rate),
        }


def canonicalize(pda: PdaArray) -> PdaArray:
    """Replace ``(v, o)`` labels by integers ``0..S-1``.

    Labels are ordered by v read as a base-q number, then by o.
    """
    if pda.raw is None:
        return pda
    raw = pda.raw
    mask = raw.vec >= 0
    grid = np.full(raw.vec.shape, STAR, dtype=np.int64)
    if mask.any():
        span = int(raw.occ.max()) + 1
        keys = raw.vec[mask].astype(np.int64) * span + raw.occ[mask]
        uniq, inv = np.unique(keys, return_inverse=True)
        grid[mask] = inv
        s = len(uniq)
        names = tuple((raw.decode(k // span), int(k % span)) for k in uniq)
    else:
        s = 0
        names = ()
    z = int((~mask[:, 0]).sum()) if grid.shape[1] else 0
    return PdaArray(
        grid, z=z, s=s, row_labels=pda.row_labels, col_labels=pda.col_labels, symbol_labels=names
    )


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def read_pda(stream: Union[str, TextIO]) -> PdaArray:
    """Parse the ``pda 1`` text format.

    Declared K/F are enforced against the grid shape; declared Z/S are kept
    as-is and only checked by the verifier.
    """
    text = stream if isinstance(stream, str) else stream.read()
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise PdaFormatError("empty input", line=1)
    n, magic = lines[0]
    if magic.split() != ["pda", "1"]:
        raise PdaFormatError(f"expected header 'pda 1', got {magic!r}", line=n, column=1)
    if len(lines) < 2:
        raise PdaFormatError("missing 'K F Z S' line", line=n + 1)
    n, counts = lines[1]
    toks = counts.split()
    if len(toks) != 4:
        raise PdaFormatError(f"expected 4 counts, got {len(toks)}", line=n, column=1)
    vals = []
    for col, tok in enumerate(toks, 1):
        if not tok.isdigit():
            raise PdaFormatError(f"bad count {tok!r}", line=n, column=col)
        vals.append(int(tok))
    K, F, Z, S = vals
    body = lines[2:]
    if len(body) != F:
        raise DimensionMismatchError(f"expected {F} rows, got {len(body)}", line=body[-1][0] if body else n)
    grid = np.empty((F, K), dtype=np.int64)
    for i, (n, ln) in enumerate(body):
        toks = ln.split()
        if len(toks) != K:
            raise DimensionMismatchError(f"row has {len(toks)} entries, expected K={K}", line=n)
        for j, tok in enumerate(toks):
            if tok == "*":
                grid[i, j] = STAR
            elif tok.isdigit():
                grid[i, j] = int(tok)
            else:
                raise PdaFormatError(f"bad entry {tok!r}", line=n, column=j + 1)
    return PdaArray(grid, z=Z, s=S)


def write_pda(pda: PdaArray, comments: Iterable[str] = ()) -> str:
    if not pda.canonical:
        raise ValueError("array still carries raw (v, o) labels; canonicalize first")
    out = io.StringIO()
    out.write("pda 1\n")
    out.write("%d %d %d %d\n" % pda.params)
    for row in pda.grid:
        out.write(" ".join("*" if x == STAR else str(x) for x in row))
        out.write("\n")
    for c in comments:
        out.write(f"# {c}\n")
    return out.getvalue()


def pda_to_json(pda: PdaArray) -> dict:
    if not pda.canonical:
        raise ValueError("array still carries raw (v, o) labels; canonicalize first")
    K, F, Z, S = pda.params
    doc = {
        "format": "pda",
        "version": 1,
        "K": K,
        "F": F,
        "Z": Z,
        "S": S,
        "grid": [[None if x == STAR else int(x) for x in row] for row in pda.grid],
    }
    if pda.row_labels is not None:
        doc["row_labels"] = [{"f": list(r.f), "g": list(r.g)} for r in pda.row_labels]
    if pda.col_labels is not None:
        doc["col_labels"] = [{"I": list(c.I), "c": list(c.c), "block": c.block} for c in pda.col_labels]
    return doc


def pda_from_json(doc: Union[str, dict]) -> PdaArray:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("format") != "pda" or doc.get("version") != 1:
        raise PdaFormatError("not a version-1 PDA JSON document")
    grid = np.array(
        [[STAR if x is None else int(x) for x in row] for row in doc["grid"]], dtype=np.int64
    ).reshape(doc["F"], doc["K"])
    rows = cols = None
    if "row_labels" in doc:
        rows = tuple(RowLabel(tuple(r["f"]), tuple(r["g"])) for r in doc["row_labels"])
    if "col_labels" in doc:
        cols = tuple(ColLabel(tuple(c["I"]), tuple(c["c"]), c.get("block", 0)) for c in doc["col_labels"])
    return PdaArray(grid, z=doc["Z"], s=doc["S"], row_labels=rows, col_labels=cols)
