"""Brute-force checks of the PDA conditions, useless stars and scheme metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .pda import STAR, PdaArray, SchemeParams


class NotCanonicalError(ValueError):
    pass


class NonUniformColumnsError(ValueError):
    """Columns disagree on their star count, so no single Z exists."""


@dataclass
class PdaReport:
    c1: bool
    c2: bool
    c3: bool
    star_counts: list[int]
    declared: tuple[int, int, int, int]
    missing_symbols: list[int] = field(default_factory=list)
    out_of_range: list[int] = field(default_factory=list)
    # ((i1, j1), (i2, j2)) of the first pair breaking C3
    c3_violation: Optional[tuple[tuple[int, int], tuple[int, int]]] = None
    c3_reason: str = ""
    gain_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.c1 and self.c2 and self.c3

    def as_dict(self) -> dict:
        K, F, Z, S = self.declared
        return {
            "passed": self.passed,
            "declared": {"K": K, "F": F, "Z": Z, "S": S},
            "c1": {"passed": self.c1, "star_counts": self.star_counts},
            "c2": {
                "passed": self.c2,
                "missing_symbols": self.missing_symbols,
                "out_of_range": self.out_of_range,
            },
            "c3": {
                "passed": self.c3,
                "violation": [list(p) for p in self.c3_violation] if self.c3_violation else None,
                "reason": self.c3_reason,
            },
            "gain_histogram": {str(k): v for k, v in sorted(self.gain_histogram.items())},
        }


@dataclass
class UselessStarReport:
    positions: list[tuple[int, int]]
    per_column: list[int]

    @property
    def uniform(self) -> Optional[int]:
        if not self.per_column:
            return 0
        first = self.per_column[0]
        return first if all(c == first for c in self.per_column) else None

    def as_dict(self) -> dict:
        return {
            "count": len(self.positions),
            "per_column": self.per_column,
            "positions": [list(p) for p in self.positions],
        }


def _require_canonical(pda: PdaArray) -> None:
    if not pda.canonical:
        raise NotCanonicalError("array carries raw labels; canonicalize first")


def _symbol_groups(grid: np.ndarray):
    """Yield ``(symbol, rows, cols)`` for every integer in the grid."""
    ii, jj = np.nonzero(grid != STAR)
    ss = grid[ii, jj]
    order = np.argsort(ss, kind="stable")
    ii, jj, ss = ii[order], jj[order], ss[order]
    cuts = np.nonzero(np.diff(ss))[0] + 1
    for a, b in zip(np.r_[0, cuts], np.r_[cuts, len(ss)]):
        if a < b:
            yield int(ss[a]), ii[a:b], jj[a:b]


def verify_pda(pda: PdaArray) -> PdaReport:
    _require_canonical(pda)
    grid = pda.grid
    K, F, Z, S = pda.params
    stars = (grid == STAR).sum(axis=0)
    c1 = bool((stars == Z).all())

    present = np.unique(grid[grid != STAR])
    out_of_range = [int(x) for x in present if x < 0 or x >= S]
    missing = sorted(set(range(S)) - set(int(x) for x in present))
    c2 = not missing and not out_of_range

    c3, violation, reason = True, None, ""
    hist: dict[int, int] = {}
    for s, rows, cols in _symbol_groups(grid):
        hist[s] = len(rows)
        if not c3 or len(rows) < 2:
            continue
        a, b = np.triu_indices(len(rows), 1)
        r1, r2, k1, k2 = rows[a], rows[b], cols[a], cols[b]
        same_row = r1 == r2
        same_col = k1 == k2
        cross = (grid[r1, k2] != STAR) | (grid[r2, k1] != STAR)
        bad = same_row | same_col | cross
        if bad.any():
            x = int(np.argmax(bad))
            c3 = False
            violation = ((int(r1[x]), int(k1[x])), (int(r2[x]), int(k2[x])))
            if same_row[x]:
                reason = f"symbol {s} repeated in row {int(r1[x])}"
            elif same_col[x]:
                reason = f"symbol {s} repeated in column {int(k1[x])}"
            else:
                reason = f"symbol {s}: cross positions are not both stars"
    return PdaReport(
        c1=c1,
        c2=c2,
        c3=c3,
        star_counts=[int(x) for x in stars],
        declared=(K, F, Z, S),
        missing_symbols=missing,
        out_of_range=out_of_range,
        c3_violation=violation,
        c3_reason=reason,
        gain_histogram=hist,
    )


def useful_star_mask(pda: PdaArray) -> np.ndarray:
    """True at stars that sit in some ``[[s, *], [*, s]]`` subarray.

    For a pair of equal entries at ``(r1, c1)`` and ``(r2, c2)`` whose cross
    positions are both stars, both cross stars are useful.
    """
    _require_canonical(pda)
    grid = pda.grid
    star = grid == STAR
    useful = np.zeros(grid.shape, dtype=bool)
    for _, rows, cols in _symbol_groups(grid):
        if len(rows) < 2:
            continue
        a, b = np.triu_indices(len(rows), 1)
        r1, r2, c1, c2 = rows[a], rows[b], cols[a], cols[b]
        ok = (r1 != r2) & (c1 != c2) & star[r1, c2] & star[r2, c1]
        useful[r1[ok], c2[ok]] = True
        useful[r2[ok], c1[ok]] = True
    return useful


def find_useless_stars(pda: PdaArray) -> UselessStarReport:
    _require_canonical(pda)
    useless = (pda.grid == STAR) & ~useful_star_mask(pda)
    ii, jj = np.nonzero(useless)
    return UselessStarReport(
        positions=[(int(i), int(j)) for i, j in zip(ii, jj)],
        per_column=[int(x) for x in useless.sum(axis=0)],
    )


def scheme_metrics(pda: PdaArray) -> SchemeParams:
    """Measured ``(K, F, Z, S)`` with exact Z/F and S/F."""
    _require_canonical(pda)
    grid = pda.grid
    stars = (grid == STAR).sum(axis=0)
    if len(stars) and not (stars == stars[0]).all():
        raise NonUniformColumnsError(f"star counts per column differ: {sorted(set(stars.tolist()))}")
    Z = int(stars[0]) if len(stars) else 0
    S = len(np.unique(grid[grid != STAR]))
    F = grid.shape[0]
    return SchemeParams(K=grid.shape[1], F=F, Z=Z, S=S, memory_ratio=Fraction(Z, F), rate=Fraction(S, F))
