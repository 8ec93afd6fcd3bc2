import csv
import io
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdacache.comparator import (
    HEADER,
    ComparatorRow,
    PrintedRow,
    custom_rows,
    display,
    fig3_rows,
    table2_rows,
    table3_rows,
    table4_rows,
    table5_rows,
    to_csv,
    tolerance,
)
from pdacache.constructions import construct_theorem1, transform_theorem2
from pdacache.pda import canonicalize
from pdacache.verifier import scheme_metrics


def _parse(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_header():
    assert to_csv([]).strip() == ",".join(HEADER)


def test_display():
    assert display(Fraction(5, 7)) == "0.7143"
    assert display(Fraction(768, 17)) == "45.18"
    assert display(2) == "2"
    assert display(0) == "0"
    assert display(Fraction(1, 20000)) == "0.0001"


def test_tolerance():
    assert str(tolerance("0.7143")) == "0.0001"
    assert tolerance("3555770000") == 10000
    assert tolerance("343") == 0


def test_fig3_z5():
    rows = {(r.scheme, r.params[1]): r for r in fig3_rows()}
    assert rows[("theorem1", 5)].F == 324 and rows[("flexible", 5)].F == 2916
    assert rows[("theorem1", 5)].rate == rows[("flexible", 5)].rate == 4
    assert len(rows) == 24


def test_table3_row_and_single_duplicate():
    rows = [r for r in table3_rows() if isinstance(r, ComparatorRow)]
    first = rows[0]
    assert first.params == (7, 5, 4, 1)
    assert (first.K, first.ratio, first.rate, first.F) == (70, Fraction(5, 7), 2, 343)
    assert first.flag == "ok"
    assert sum(r.params == (7, 5, 4, 1) for r in rows) == 1
    bad = {r.params for r in rows if r.flag.startswith("mismatch")}
    assert bad == {(17, 13, 4, 2)}


def test_table5_flags():
    rows = [r for r in table5_rows() if isinstance(r, ComparatorRow)]
    flags = {r.params: r.flag for r in rows}
    assert flags[(8, 4, 4, 1, 1)] == "mismatch: F printed 680 vs 320"
    assert flags[(5, 2, 4, 2, 1)] == flags[(8, 2, 4, 2, 1)] == flags[(13, 6, 5, 2, 1)] == "ok"
    assert flags[(4, 7, 2, 3)].startswith("mismatch: F")


def test_printed_rows_side_by_side():
    rows = table5_rows()
    assert isinstance(rows[0], PrintedRow) and rows[0].F == "90"
    parsed = _parse(to_csv(rows))
    assert parsed[0]["scheme"] == "theorem4[printed]" and parsed[0]["flag"] == "printed"
    assert parsed[1]["F"] == "90" and parsed[1]["ratio_exact"] == "1/2"


def test_table4_rates():
    for r in table4_rows():
        if r.scheme == "theorem2":
            assert r.rate == 1
        else:
            q, m, t = r.params
            assert r.rate == Fraction(1, (q - 1) ** t)


def test_table2_rows():
    rows = {(r.scheme, r.params): r for r in table2_rows([(5, 3, 2, 1), (5, 2, 2, 1)])}
    r1 = rows[("theorem1", (5, 3, 2, 1))]
    assert (r1.K, r1.ratio, r1.rate, r1.F) == (10, Fraction(3, 5), 1, 10)
    r2 = rows[("theorem2", (5, 3, 2, 1))]
    assert (r2.K, r2.F, r2.rate) == (15, 5, 2)
    r3 = rows[("theorem3", (5, 2, 2, 1))]
    assert (r3.ratio, r3.rate, r3.F) == (Fraction(1, 4), Fraction(15, 4), 4)


def test_custom_unknown_scheme():
    with pytest.raises(ValueError):
        custom_rows(["nope"], [3], None, [2], [1])


def test_presets_are_deterministic():
    for fn in (fig3_rows, table3_rows, table4_rows, table5_rows):
        assert to_csv(fn()) == to_csv(fn())


@given(st.integers(2, 6), st.sampled_from([(2, 1), (3, 1), (3, 2)]))
@settings(max_examples=25, deadline=None)
def test_rows_equal_built_arrays(q, mt):
    m, t = mt
    for row in custom_rows(["theorem1", "theorem2"], [q], None, [m], [t]):
        build = construct_theorem1 if row.scheme == "theorem1" else transform_theorem2
        got = scheme_metrics(canonicalize(build(*row.params)))
        assert (row.K, row.F, row.ratio, row.rate) == (got.K, got.F, got.memory_ratio, got.rate)
