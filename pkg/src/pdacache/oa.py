"""Orthogonal arrays and proper orthogonal arrays (constant row sum mod q)."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Optional, TextIO, Union

import numpy as np


class ParameterError(ValueError):
    """Parameters outside the range a construction is defined for."""


class IndexNotIntegralError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OrthogonalArray:
    rows: np.ndarray
    q: int
    t: int

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=np.int64)
        if r.ndim != 2:
            raise ValueError("rows must be an l x m matrix")
        r.setflags(write=False)
        object.__setattr__(self, "rows", r)

    @property
    def l(self) -> int:
        return self.rows.shape[0]

    @property
    def m(self) -> int:
        return self.rows.shape[1]

    @property
    def index(self) -> int:
        return self.l // self.q**self.t

    def row_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(x) for x in r) for r in self.rows}


@dataclass(frozen=True)
class OaReport:
    passed: bool
    t: int
    index: int
    columns: Optional[tuple[int, ...]] = None
    tuple_: Optional[tuple[int, ...]] = None
    count: Optional[int] = None


def build_poa(m: int, q: int, row_sum: int) -> OrthogonalArray:
    """Rows ``(f_0, ..., f_{m-2}, row_sum - sum f_i mod q)`` in lexicographic order."""
    if m < 2 or q < 2:
        raise ParameterError(f"need m >= 2 and q >= 2, got m={m}, q={q}")
    if not 0 <= row_sum < q:
        raise ParameterError(f"row_sum must lie in [0, {q - 1}], got {row_sum}")
    head = np.array(list(itertools.product(range(q), repeat=m - 1)), dtype=np.int64).reshape(-1, m - 1)
    last = (row_sum - head.sum(axis=1)) % q
    return OrthogonalArray(np.column_stack([head, last]), q=q, t=m - 1)


def full_factorial(m: int, q: int) -> OrthogonalArray:
    """All q^m tuples in lexicographic order; an OA of strength m and index 1."""
    if m < 1 or q < 2:
        raise ParameterError(f"need m >= 1 and q >= 2, got m={m}, q={q}")
    rows = np.array(list(itertools.product(range(q), repeat=m)), dtype=np.int64).reshape(-1, m)
    return OrthogonalArray(rows, q=q, t=m)


def verify_oa(arr: OrthogonalArray, t: int) -> OaReport:
    """Brute-force check that every t-column projection is balanced."""
    l, m, q = arr.l, arr.m, arr.q
    if not 1 <= t <= m:
        raise ParameterError(f"strength must lie in [1, {m}], got {t}")
    lam, rem = divmod(l, q**t)
    if rem:
        raise IndexNotIntegralError(f"q^t = {q**t} does not divide l = {l}")
    for cols in itertools.combinations(range(m), t):
        counts = Counter(tuple(int(x) for x in r) for r in arr.rows[:, cols])
        for tup in itertools.product(range(q), repeat=t):
            if counts.get(tup, 0) != lam:
                return OaReport(False, t, lam, cols, tup, counts.get(tup, 0))
    return OaReport(True, t, lam)


def is_proper(arr: OrthogonalArray) -> Optional[int]:
    if arr.l == 0:
        return None
    sums = arr.rows.sum(axis=1) % arr.q
    return int(sums[0]) if bool((sums == sums[0]).all()) else None


def write_oa(arr: OrthogonalArray) -> str:
    lines = ["oa 1", f"{arr.l} {arr.m} {arr.q} {arr.t}"]
    lines += [" ".join(str(int(x)) for x in r) for r in arr.rows]
    return "\n".join(lines) + "\n"


def read_oa(stream: Union[str, TextIO]) -> OrthogonalArray:
    text = stream if isinstance(stream, str) else stream.read()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) < 2 or lines[0].split() != ["oa", "1"]:
        raise ValueError("expected 'oa 1' header")
    l, m, q, t = (int(x) for x in lines[1].split())
    rows = [[int(x) for x in ln.split()] for ln in lines[2:]]
    if len(rows) != l or any(len(r) != m for r in rows):
        raise ValueError(f"expected {l} rows of {m} entries")
    return OrthogonalArray(np.array(rows, dtype=np.int64).reshape(l, m), q=q, t=t)
