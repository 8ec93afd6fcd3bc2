"""PDA constructions.

Three literature baselines built over the full factorial ``[0, q-1]^m``
(partition, hypergraph, flexible-memory), the POA-based stacked
construction (:func:`construct_theorem1`) and its column-selection
transform (:func:`transform_theorem2`).

Every builder returns a raw-labeled :class:`~pdacache.pda.PdaArray`; pass
it through :func:`~pdacache.pda.canonicalize` to get integer symbols.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .oa import ParameterError, build_poa, full_factorial
from .pda import STAR, ColLabel, PdaArray, RawLabels, RowLabel

__all__ = [
    "ConstructionError",
    "Theorem1Params",
    "column_labels",
    "construct_flexible_pda",
    "construct_hypergraph_pda",
    "construct_partition_pda",
    "construct_theorem1",
    "transform_theorem2",
]


class ConstructionError(RuntimeError):
    """Internal inconsistency; never expected on valid parameters."""


@dataclass(frozen=True)
class Theorem1Params:
    q: int
    z: int
    m: int
    t: int

    def __post_init__(self):
        check_qzmt(self.q, self.z, self.m, self.t)

    @property
    def r(self) -> int:
        """Block count per coordinate, floor((q-1)/(q-z))."""
        return (self.q - 1) // (self.q - self.z)

    @property
    def L(self) -> int:
        return self.r**self.t

    @property
    def E(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.r), repeat=self.t))


def check_qzmt(q: int, z: int, m: int, t: int) -> None:
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    if not 1 <= z <= q - 1:
        raise ParameterError(f"z must lie in [1, q-1] = [1, {q - 1}], got {z}")
    if m < 2:
        raise ParameterError(f"m must be >= 2, got {m}")
    if not 1 <= t <= m - 1:
        raise ParameterError(f"t must lie in [1, m-1] = [1, {m - 1}], got {t}")


def column_labels(q: int, m: int, t: int) -> list[ColLabel]:
    """``(I, c)`` pairs: I-subsets lexicographically, then c lexicographically."""
    return [
        ColLabel(I, c)
        for I in itertools.combinations(range(m), t)
        for c in itertools.product(range(q), repeat=t)
    ]


def _powers(q: int, length: int) -> np.ndarray:
    return q ** np.arange(length - 1, -1, -1, dtype=np.int64)


def _occurrence_order(vec: np.ndarray) -> np.ndarray:
    """Per column, how many earlier rows hold the same vector (stars -> -1)."""
    F, K = vec.shape
    ii, jj = np.nonzero(vec >= 0)
    vv = vec[ii, jj]
    order = np.lexsort((ii, vv, jj))
    jj_s, vv_s = jj[order], vv[order]
    start = np.ones(len(order), dtype=bool)
    start[1:] = (jj_s[1:] != jj_s[:-1]) | (vv_s[1:] != vv_s[:-1])
    idx = np.arange(len(order))
    group_first = np.maximum.accumulate(np.where(start, idx, 0))
    occ = np.full((F, K), -1, dtype=np.int64)
    occ[ii[order], jj_s] = idx - group_first
    return occ


def _raw_pda(q, length, vec, rows, cols) -> PdaArray:
    occ = _occurrence_order(vec)
    grid = np.where(vec >= 0, 0, STAR)
    return PdaArray(
        grid,
        row_labels=tuple(rows),
        col_labels=tuple(cols),
        raw=RawLabels(q=q, length=length, vec=vec, occ=occ),
    )


def _hypergraph_block(f: np.ndarray, g: tuple[int, ...], q: int, z: int, t: int) -> np.ndarray:
    """Entries of the flexible-memory rule for one g-block, vectors of length m+t.

    Coordinate xi_h becomes c_h - g_h(q-z); the tail holds f_{xi_h} - c_h - 1.
    """
    n, m = f.shape
    cs = np.array(list(itertools.product(range(q), repeat=t)), dtype=np.int64)
    pw = _powers(q, m + t)
    gshift = np.array(g, dtype=np.int64) * (q - z)
    blocks = []
    for I in itertools.combinations(range(m), t):
        I = list(I)
        fi = f[:, I]                                          # n x t
        diff = (cs[None, :, :] - fi[:, None, :]) % q          # c_h - f_{xi_h}
        star = (diff < z).any(axis=2)                         # n x q^t
        keep = np.ones(m, dtype=bool)
        keep[I] = False
        base = f[:, keep] @ pw[:m][keep]                      # n
        head = ((cs - gshift) % q) @ pw[I]                    # q^t
        tail = ((fi[:, None, :] - cs[None, :, :] - 1) % q) @ pw[m:]
        code = base[:, None] + head[None, :] + tail
        blocks.append(np.where(star, -1, code))
    return np.concatenate(blocks, axis=1)


def construct_partition_pda(q: int, m: int) -> PdaArray:
    """The q^m x (m+1)q array whose rows run over all of ``[0, q-1]^m``.

    Column ``(xi, c)`` with ``xi < m`` stars rows with ``f_xi = c``; the extra
    column family ``xi = m`` stars rows whose coordinate sum is ``c``.
    """
    if q < 2 or m < 1:
        raise ParameterError(f"need q >= 2 and m >= 1, got q={q}, m={m}")
    f = full_factorial(m, q).rows
    pw = _powers(q, m + 1)
    cols, parts = [], []
    for xi in range(m + 1):
        for c in range(q):
            cols.append(ColLabel((xi,), (c,)))
            if xi < m:
                star = f[:, xi] == c
                v = f.copy()
                v[:, xi] = c
                last = (f[:, xi] - c - 1) % q
            else:
                total = f.sum(axis=1) % q
                star = total == c
                v = f
                last = (c - total - 1) % q
            code = v @ pw[:m] + last
            parts.append(np.where(star, -1, code))
    vec = np.column_stack(parts)
    rows = [RowLabel(tuple(int(x) for x in r)) for r in f]
    return _raw_pda(q, m + 1, vec, rows, cols)


def construct_hypergraph_pda(q: int, m: int, t: int) -> PdaArray:
    if q < 2 or not 1 <= t < m:
        raise ParameterError(f"need q >= 2 and 1 <= t < m, got q={q}, m={m}, t={t}")
    f = full_factorial(m, q).rows
    vec = _hypergraph_block(f, (0,) * t, q, 1, t)
    rows = [RowLabel(tuple(int(x) for x in r)) for r in f]
    return _raw_pda(q, m + t, vec, rows, column_labels(q, m, t))


def construct_flexible_pda(q: int, z: int, m: int, t: int) -> PdaArray:
    """Flexible-memory baseline: the full factorial repeated once per g-vector."""
    p = Theorem1Params(q, z, m, t)
    f = full_factorial(m, q).rows
    vecs, rows = [], []
    for g in p.E:
        vecs.append(_hypergraph_block(f, g, q, z, t))
        rows += [RowLabel(tuple(int(x) for x in r), g) for r in f]
    return _raw_pda(q, m + t, np.vstack(vecs), rows, column_labels(q, m, t))


# ---------------------------------------------------------------------------
# POA-based construction
# ---------------------------------------------------------------------------


def _poa_block(f: np.ndarray, g: tuple[int, ...], q: int, z: int, t: int) -> np.ndarray:
    """One block P_j as base-q vector codes (length m), -1 on stars."""
    n, m = f.shape
    cs = np.array(list(itertools.product(range(q), repeat=t)), dtype=np.int64)
    pw = _powers(q, m)
    gshift = np.array(g, dtype=np.int64) * (q - z)
    blocks = []
    for I in itertools.combinations(range(m), t):
        I = list(I)
        diff = (cs[None, :, :] - f[:, I][:, None, :]) % q
        star = (diff < z).any(axis=2)
        keep = np.ones(m, dtype=bool)
        keep[I] = False
        base = f[:, keep] @ pw[keep]
        head = ((cs - gshift) % q) @ pw[I]
        blocks.append(np.where(star, -1, base[:, None] + head[None, :]))
    return np.concatenate(blocks, axis=1)


def _theorem1_blocks(p: Theorem1Params):
    q, z, m, t = p.q, p.z, p.m, p.t
    out = []
    for g in p.E:
        f = build_poa(m, q, (sum(g) * (q - z)) % q).rows
        out.append((g, f, _poa_block(f, g, q, z, t)))
    return out


def construct_theorem1(q: int, z: int, m: int, t: int) -> PdaArray:
    """Stack of L = floor((q-1)/(q-z))^t POA blocks, one per g-vector.

    Occurrence orders are counted per column over the whole stack, top to
    bottom, starting at 0.
    """
    p = Theorem1Params(q, z, m, t)
    blocks = _theorem1_blocks(p)
    rows = [RowLabel(tuple(int(x) for x in r), g) for g, f, _ in blocks for r in f]
    vec = np.vstack([b for _, _, b in blocks])
    return _raw_pda(q, m, vec, rows, column_labels(q, m, t))


def transform_theorem2(q: int, z: int, m: int, t: int) -> PdaArray:
    """Relabel blocks 1..L-1 after block 0, keep their I within [0, m-2], and
    place the blocks side by side.

    The relabel target of an entry of P_0 at row ``f`` and column ``(I, c)``
    is computed directly: row ``f + g(q-z)`` on the coordinates of I and
    column ``(I, c + g(q-z))``.
    """
    p = Theorem1Params(q, z, m, t)
    blocks = _theorem1_blocks(p)
    cols = column_labels(q, m, t)
    n = q ** (m - 1)
    g0, f0, vec0 = blocks[0]
    occ0 = _occurrence_order(vec0)
    # rows of every block are sorted by their first m-1 coordinates
    row_pw = _powers(q, m - 1)
    c_pw = _powers(q, t)
    subsets = list(itertools.combinations(range(m), t))

    vec_parts, occ_parts = [vec0], [occ0]
    out_cols = list(cols)
    for j in range(1, p.L):
        g, fj, vecj = blocks[j]
        shift = np.array(g, dtype=np.int64) * (q - z)
        occj = np.full_like(vecj, -1)
        for col, label in enumerate(cols):
            src = np.nonzero(vec0[:, col] >= 0)[0]
            if len(src) == 0:
                continue
            I = list(label.I)
            frow = f0[src].copy()
            frow[:, I] = (frow[:, I] + shift) % q
            tgt_rows = frow[:, : m - 1] @ row_pw
            cprime = (np.array(label.c) + shift) % q
            tgt_col = subsets.index(label.I) * q**t + int(cprime @ c_pw)
            if (vecj[tgt_rows, tgt_col] < 0).any():
                raise ConstructionError(f"relabel target is a star (block {j}, column {label})")
            if not np.array_equal(vecj[tgt_rows, tgt_col], vec0[src, col]):
                raise ConstructionError(f"relabel target holds a different vector (block {j}, column {label})")
            occj[tgt_rows, tgt_col] = occ0[src, col]
        if ((vecj >= 0) != (occj >= 0)).any():
            raise ConstructionError(f"block {j} has entries with no relabel source")
        keep = [i for i, c in enumerate(cols) if max(c.I) <= m - 2]
        vec_parts.append(vecj[:, keep])
        occ_parts.append(occj[:, keep])
        out_cols += [ColLabel(cols[i].I, cols[i].c, block=j) for i in keep]

    rows = [RowLabel(tuple(int(x) for x in r), g0) for r in f0]
    vec = np.hstack(vec_parts)
    occ = np.hstack(occ_parts)
    grid = np.where(vec >= 0, 0, STAR)
    assert len(rows) == n
    return PdaArray(
        grid,
        row_labels=tuple(rows),
        col_labels=tuple(out_cols),
        raw=RawLabels(q=q, length=m, vec=vec, occ=occ),
    )


def theorem1_counts(q: int, z: int, m: int, t: int) -> tuple[int, int, int, int]:
    p = Theorem1Params(q, z, m, t)
    L = p.L
    return (
        comb(m, t) * q**t,
        L * q ** (m - 1),
        L * (q ** (m - 1) - q ** (m - t - 1) * (q - z) ** t),
        q ** (m - 1) * (q - z) ** t,
    )


def theorem2_counts(q: int, z: int, m: int, t: int) -> tuple[int, int, int, int]:
    p = Theorem1Params(q, z, m, t)
    return (
        (comb(m - 1, t) * p.L + comb(m, t) - comb(m - 1, t)) * q**t,
        q ** (m - 1),
        q ** (m - 1) - q ** (m - t - 1) * (q - z) ** t,
        q ** (m - 1) * (q - z) ** t,
    )
