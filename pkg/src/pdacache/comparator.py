"""Closed-form comparison rows and the preset tables behind the CLI's CSV output."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence, Union

from .closed_forms import (
    ClosedForm,
    QZMT_SCHEMES,
    flexible,
    hypergraph_alt,
    projective_2019,
    projective_2021,
    theorem1,
    theorem2,
    theorem3,
    theorem4,
)

HEADER = ["scheme", "params", "K", "ratio_exact", "ratio", "rate_exact", "rate", "F", "flag"]

Number = Union[int, Fraction]


def display(x: Number) -> str:
    """4 significant digits, fixed notation below 1e6."""
    f = float(x)
    if f == 0:
        return "0"
    s = f"{f:.4g}"
    if "e" in s and abs(f) < 1e6:
        s = f"{f:.4f}".rstrip("0").rstrip(".")
    return s


def _exact(x: Number) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class ComparatorRow:
    scheme: str
    params: tuple[int, ...]
    K: int
    ratio: Fraction
    rate: Fraction
    F: Number
    flag: str = ""

    @classmethod
    def from_closed_form(cls, scheme: str, params: tuple[int, ...], cf: ClosedForm, flag: str = "") -> "ComparatorRow":
        return cls(scheme, tuple(params), cf.K, Fraction(cf.ratio), Fraction(cf.rate), cf.F, flag)

    def cells(self) -> list[str]:
        return [
            self.scheme,
            "(" + ",".join(map(str, self.params)) + ")",
            str(self.K),
            _exact(self.ratio),
            display(self.ratio),
            _exact(self.rate),
            display(self.rate),
            _exact(self.F),
            self.flag,
        ]


@dataclass(frozen=True)
class PrintedRow:
    """Values exactly as a published table shows them (strings keep precision)."""

    scheme: str
    params: tuple[int, ...]
    K: str
    ratio: str
    rate: str
    F: str

    def cells(self) -> list[str]:
        p = "(" + ",".join(map(str, self.params)) + ")"
        return [self.scheme + "[printed]", p, self.K, "", self.ratio, "", self.rate, self.F, "printed"]


def tolerance(printed: str) -> Decimal:
    """One unit in the last printed place.

    The published tables mix rounded and truncated decimals, so both are
    accepted. Integers written with trailing zeros are read as rounded to
    their significant digits: ``3555770000`` carries a tolerance of 10000.
    """
    if "." in printed:
        return Decimal(10) ** (-len(printed.split(".")[1]))
    zeros = len(printed) - len(printed.rstrip("0"))
    return Decimal(10) ** zeros if zeros else Decimal(0)


def _close(value: Number, printed: str) -> bool:
    v = Fraction(value)
    diff = abs(v - Fraction(Decimal(printed)))
    return diff < Fraction(tolerance(printed)) or diff == 0


def mismatch_flag(cf: ClosedForm, printed: PrintedRow) -> str:
    bad = []
    for name, val, shown in (
        ("K", cf.K, printed.K),
        ("ratio", cf.ratio, printed.ratio),
        ("rate", cf.rate, printed.rate),
        ("F", cf.F, printed.F),
    ):
        if not _close(val, shown):
            bad.append(f"{name} printed {shown} vs {display(val) if name in ('ratio', 'rate') else val}")
    return "ok" if not bad else "mismatch: " + "; ".join(bad)


def to_csv(rows: Iterable[Union[ComparatorRow, PrintedRow]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(r.cells())
    return buf.getvalue()


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def fig3_rows(q: int = 9, m: int = 3, t: int = 2) -> list[ComparatorRow]:
    rows = []
    for z in range(1, q):
        p = (q, z, m, t)
        rows.append(ComparatorRow.from_closed_form("theorem1", p, theorem1(*p)))
        rows.append(ComparatorRow.from_closed_form("theorem3", p, theorem3(*p)))
        rows.append(ComparatorRow.from_closed_form("flexible", p, flexible(*p)))
    return rows


# (scheme, params, K, ratio, rate, F) as printed
TABLE3 = [
    ("theorem2", (7, 5, 4, 1), "70", "0.7143", "2.0", "343"),
    ("projective_2021", (2, 3, 1, 6), "63", "0.7620", "2.1", "651"),
    ("theorem2", (13, 9, 4, 1), "130", "0.69", "4.0", "2197"),
    ("projective_2021", (2, 4, 1, 7), "127", "0.76", "4.4", "2667"),
    ("theorem2", (21, 11, 2, 1), "63", "0.52", "10.0", "21"),
    ("projective_2021", (2, 4, 1, 6), "63", "0.51", "10.3", "63"),
    ("theorem2", (17, 13, 4, 2), "13056", "0.94", "16.0", "4096"),
    ("projective_2021", (2, 4, 2, 8), "10795", "0.94", "18.6", "10795"),
]

# theorem4 rows carry z_r^* as a fifth parameter
TABLE5 = [
    ("theorem4", (5, 2, 4, 2, 1), "150", "0.50", "12.5", "90"),
    ("projective_2019", (5, 8, 2, 2), "127", "0.50", "9.1", "3555770000"),
    ("theorem4", (8, 4, 4, 1, 1), "32", "0.20", "6.4", "680"),
    ("projective_2019", (3, 6, 2, 2), "31", "0.48", "3.2", "26040"),
    ("theorem4", (8, 2, 4, 2, 1), "384", "0.29", "45.2", "408"),
    ("projective_2019", (4, 7, 2, 3), "364", "0.33", "40.5", "5008860000"),
    ("theorem4", (13, 6, 5, 2, 1), "1690", "0.33", "111.9", "12506"),
    ("projective_2019", (5, 8, 2, 3), "1093", "0.33", "104.1", "1995520000000000"),
]

_EVAL = {
    "theorem2": lambda p: theorem2(*p),
    "theorem4": lambda p: theorem4(*p[:4]),
    "projective_2019": lambda p: projective_2019(*p),
    "projective_2021": lambda p: projective_2021(*p),
}


def _table_rows(table) -> list[Union[ComparatorRow, PrintedRow]]:
    rows: list[Union[ComparatorRow, PrintedRow]] = []
    for scheme, params, *shown in table:
        printed = PrintedRow(scheme, params, *shown)
        cf = _EVAL[scheme](params)
        rows.append(printed)
        rows.append(ComparatorRow.from_closed_form(scheme, params, cf, mismatch_flag(cf, printed)))
    return rows


def table3_rows() -> list[Union[ComparatorRow, PrintedRow]]:
    return _table_rows(TABLE3)


def table5_rows() -> list[Union[ComparatorRow, PrintedRow]]:
    return _table_rows(TABLE5)


def table4_rows(qs: Sequence[int] = (2, 3, 4, 5), mts: Sequence[tuple[int, int]] = ((2, 1), (3, 1), (3, 2), (4, 2))) -> list[ComparatorRow]:
    """theorem2 at z = q-1 next to the high-memory hypergraph family."""
    rows = []
    for q, (m, t) in product(qs, mts):
        rows.append(ComparatorRow.from_closed_form("theorem2", (q, q - 1, m, t), theorem2(q, q - 1, m, t)))
        rows.append(ComparatorRow.from_closed_form("hypergraph_alt", (q, m, t), hypergraph_alt(q, m, t)))
    return rows


def table2_rows(points: Sequence[tuple[int, int, int, int]]) -> list[ComparatorRow]:
    rows = []
    for p in points:
        for name in ("theorem1", "theorem2", "theorem3", "theorem4"):
            rows.append(ComparatorRow.from_closed_form(name, tuple(p), QZMT_SCHEMES[name](*p)))
    return rows


def custom_rows(
    schemes: Sequence[str],
    qs: Sequence[int],
    zs: Optional[Sequence[int]],
    ms: Sequence[int],
    ts: Sequence[int],
) -> list[ComparatorRow]:
    """Every listed (q, z, m, t) scheme at every grid point; z defaults to 1..q-1."""
    for s in schemes:
        if s not in QZMT_SCHEMES:
            raise ValueError(f"unknown scheme {s!r}; choose from {sorted(QZMT_SCHEMES)}")
    rows = []
    for q, m, t in product(qs, ms, ts):
        for z in zs if zs else range(1, q):
            for s in schemes:
                rows.append(ComparatorRow.from_closed_form(s, (q, z, m, t), QZMT_SCHEMES[s](q, z, m, t)))
    return rows


PRESETS = {
    "fig3": fig3_rows,
    "table3": table3_rows,
    "table4": table4_rows,
    "table5": table5_rows,
}
