"""Shared fixture loaders for the printed example arrays."""

from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def load_label_table(name):
    """Parse a fixture of ``*``, ``x`` or ``v..o`` tokens.

    Returns (row labels or None, entries) where entries[i][j] is ``None`` for
    a star, ``"x"`` for a marked useless star, else ``(v tuple, o)``.
    """
    rows, entries = [], []
    for line in (FIXTURES / name).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        toks = line.split()
        if toks[0].startswith("(("):
            rows.append(toks.pop(0))
        out = []
        for tok in toks:
            if tok == "*":
                out.append(None)
            elif tok == "x":
                out.append("x")
            else:
                out.append((tuple(int(c) for c in tok[:-1]), int(tok[-1])))
        entries.append(out)
    return (rows or None), entries


def raw_entries(pda):
    return [[pda.entry(i, j) for j in range(pda.K)] for i in range(pda.F)]


@pytest.fixture
def eq1_text():
    return (FIXTURES / "eq1.pda").read_text()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
