import io
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdacache.constructions import construct_theorem1
from pdacache.pda import (
    STAR,
    ColLabel,
    DimensionMismatchError,
    PdaArray,
    PdaFormatError,
    RowLabel,
    SchemeParams,
    canonicalize,
    pda_from_json,
    pda_to_json,
    read_pda,
    write_pda,
)

EQ1 = np.array([[0, STAR, 2, STAR], [STAR, 0, STAR, 2], [STAR, 1, STAR, 3], [1, STAR, 3, STAR]])


def test_read_eq1(eq1_text):
    pda = read_pda(eq1_text)
    assert pda.params == (4, 4, 2, 4)
    assert np.array_equal(pda.grid, EQ1)
    assert pda.entry(0, 1) is None and pda.entry(3, 0) == 1


def test_read_from_stream(eq1_text):
    assert read_pda(io.StringIO(eq1_text)) == read_pda(eq1_text)


def test_write_read_roundtrip(eq1_text):
    pda = read_pda(eq1_text)
    assert read_pda(write_pda(pda, comments=["note"])) == pda


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("pdx 1\n1 1 0 1\n0\n", 1, 1),
        ("pda 1\n1 1 a 1\n0\n", 2, 3),
        ("pda 1\n2 1 0 1\n0 ?\n", 3, 2),
    ],
)
def test_parse_error_location(text, line, column):
    with pytest.raises(PdaFormatError) as exc:
        read_pda(text)
    assert exc.value.line == line and exc.value.column == column


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        read_pda("pda 1\n2 2 1 1\n0 *\n")
    with pytest.raises(DimensionMismatchError):
        read_pda("pda 1\n2 1 0 1\n0\n")


def test_empty_input():
    with pytest.raises(PdaFormatError):
        read_pda("# only a comment\n")


def test_grid_is_read_only(eq1_text):
    pda = read_pda(eq1_text)
    with pytest.raises(ValueError):
        pda.grid[0, 0] = 5


def test_json_roundtrip_keeps_labels():
    pda = canonicalize(construct_theorem1(5, 3, 2, 1))
    doc = json.loads(json.dumps(pda_to_json(pda)))
    back = pda_from_json(doc)
    assert back == pda
    assert back.row_labels == pda.row_labels and back.col_labels == pda.col_labels
    assert doc["grid"][0][0] is None


def test_json_rejects_other_format():
    with pytest.raises(PdaFormatError):
        pda_from_json({"format": "oa", "version": 1})


def test_raw_arrays_cannot_be_written():
    raw = construct_theorem1(5, 3, 2, 1)
    assert not raw.canonical
    with pytest.raises(ValueError):
        write_pda(raw)
    with pytest.raises(ValueError):
        pda_to_json(raw)


def test_canonical_order_is_vector_then_occurrence():
    pda = canonicalize(construct_theorem1(5, 3, 2, 1))
    names = list(pda.symbol_labels)
    assert names == sorted(names)
    assert names[0] == ((0, 3), 0) and names[-1] == ((4, 4), 0)
    # entry (row ((14),(0)), column ({0},(0))) carries (04, 0)
    assert names[pda.grid[1, 0]] == ((0, 4), 0)


def test_labels():
    assert str(RowLabel((1, 4), (0,))) == "((14),(0))"
    assert str(ColLabel((0,), (3,))) == "({0},(3))"
    assert str(ColLabel((0,), (3,), block=1)) == "({0},(3))#1"
    with pytest.raises(ValueError):
        ColLabel((1, 0), (0, 0))
    with pytest.raises(ValueError):
        ColLabel((0,), (0, 0))


def test_label_count_checked():
    with pytest.raises(ValueError):
        PdaArray(EQ1, row_labels=(RowLabel((0,)),))


def test_scheme_params_defaults():
    p = SchemeParams(K=4, F=4, Z=2, S=4)
    assert p.memory_ratio == Fraction(1, 2) and p.rate == 1
    assert p.as_dict()["rate"] == "1"
    with pytest.raises(TypeError):
        SchemeParams(K=1, F=2, Z=1, S=1, memory_ratio=0.5)


grids = st.integers(1, 6).flatmap(
    lambda f: st.integers(1, 6).flatmap(
        lambda k: st.lists(st.lists(st.integers(-1, 9), min_size=k, max_size=k), min_size=f, max_size=f)
    )
)


@given(grids)
@settings(max_examples=60, deadline=None)
def test_text_and_json_roundtrip_any_grid(rows):
    pda = PdaArray(np.array(rows))
    assert read_pda(write_pda(pda)) == pda
    assert pda_from_json(pda_to_json(pda)) == pda
