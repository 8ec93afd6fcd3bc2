"""Coded placement: useless-star removal, systematic MDS packets over GF(256)
and closed forms for the two coded-placement schemes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Optional, Sequence

import numpy as np

from . import gf256
from .constructions import Theorem1Params
from .oa import ParameterError
from .pda import PdaArray, SchemeParams
from .verifier import UselessStarReport, find_useless_stars, scheme_metrics

MAX_CODE_LENGTH = 255
FIELD = "GF(2^8), x^8+x^4+x^3+x^2+1"


class MdsError(ValueError):
    pass


class CodeTooLongError(MdsError):
    pass


class InsufficientSymbolsError(MdsError):
    pass


class NonUniformUselessError(ValueError):
    """Columns hold different numbers of useless stars."""


class EmptyClassError(ValueError):
    pass


# ---------------------------------------------------------------------------
# MDS code
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _parity_rows(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    # Vandermonde rows a^0..a^{k-1} at a = 0..n-1; any k rows are invertible.
    vander = np.array([[gf256.power(a, j) for j in range(k)] for a in range(n)], dtype=np.uint8)
    gen = gf256.matmul(vander, gf256.mat_inv(vander[:k]))
    parity = gen[k:].copy()
    if len(parity):
        # column scaling keeps the code MDS and makes the first parity row
        # the plain field sum
        for j in range(k):
            parity[:, j] = gf256.MUL[gf256.inv(int(parity[0, j]))][parity[:, j]]
    return tuple(tuple(int(x) for x in row) for row in parity)


@lru_cache(maxsize=4096)
def _decoder(n: int, k: int, use: tuple[int, ...]) -> np.ndarray:
    sub = MdsSpec(n, k).generator()[list(use)]
    inv = gf256.mat_inv(sub)
    inv.setflags(write=False)
    return inv


@dataclass(frozen=True)
class MdsSpec:
    """Systematic ``[n, k]`` erasure code: symbols ``0..k-1`` are the data."""

    n: int
    k: int
    field: str = FIELD

    def __post_init__(self):
        if not 0 < self.k <= self.n:
            raise MdsError(f"need 0 < k <= n, got n={self.n}, k={self.k}")

    @property
    def encodable(self) -> bool:
        return self.n <= MAX_CODE_LENGTH

    @property
    def parity(self) -> tuple[tuple[int, ...], ...]:
        if not self.encodable:
            raise CodeTooLongError(f"n={self.n} exceeds {MAX_CODE_LENGTH} evaluation points")
        return _parity_rows(self.n, self.k)

    def generator(self) -> np.ndarray:
        return np.vstack([np.eye(self.k, dtype=np.uint8), np.array(self.parity, dtype=np.uint8).reshape(-1, self.k)])

    def as_dict(self) -> dict:
        d = {"n": self.n, "k": self.k, "field": self.field}
        if self.encodable:
            d["parity"] = [list(r) for r in self.parity]
        return d


def _as_packets(data: Sequence, k: int) -> np.ndarray:
    if len(data) != k:
        raise MdsError(f"expected {k} data packets, got {len(data)}")
    arrs = [np.frombuffer(bytes(d), dtype=np.uint8) if not isinstance(d, np.ndarray) else d for d in data]
    if len({a.shape for a in arrs}) > 1:
        raise MdsError("data packets differ in length")
    return np.vstack(arrs).astype(np.uint8) if arrs else np.zeros((0, 0), np.uint8)


def mds_encode(spec: MdsSpec, data: Sequence) -> list[np.ndarray]:
    """``n`` coded packets; the first ``k`` are the data unchanged."""
    packets = _as_packets(data, spec.k)
    parity = gf256.matmul(np.array(spec.parity, dtype=np.uint8).reshape(-1, spec.k), packets)
    return [packets[i].copy() for i in range(spec.k)] + [parity[i] for i in range(len(parity))]


def mds_decode(spec: MdsSpec, symbols: Mapping[int, np.ndarray]) -> list[np.ndarray]:
    """Recover the data from any ``k`` of the indexed coded packets."""
    if isinstance(symbols, Mapping):
        items = list(symbols.items())
    else:
        items = list(symbols)
    idx = [i for i, _ in items]
    if len(set(idx)) != len(idx):
        raise MdsError(f"duplicate symbol index in {sorted(idx)}")
    if any(not 0 <= i < spec.n for i in idx):
        raise MdsError(f"symbol index out of range [0, {spec.n - 1}]")
    if len(items) < spec.k:
        raise InsufficientSymbolsError(f"need {spec.k} symbols, got {len(items)}")
    items = sorted(items)[: spec.k]
    use = [i for i, _ in items]
    packets = np.vstack([np.asarray(p, dtype=np.uint8) for _, p in items])
    if use == list(range(spec.k)):
        return [packets[i].copy() for i in range(spec.k)]
    data = gf256.matmul(_decoder(spec.n, spec.k, tuple(use)), packets)
    return [data[i] for i in range(spec.k)]


# ---------------------------------------------------------------------------
# useless-star stripping
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CodedPda:
    base: PdaArray
    useless: UselessStarReport
    z_prime: int
    # stars dropped from the caches; a subset of the useless stars
    stripped: np.ndarray = field(repr=False)
    spec: MdsSpec = None

    @property
    def row_to_symbol(self) -> list[int]:
        return list(range(self.base.F))

    @property
    def cache_mask(self) -> np.ndarray:
        return self.base.star_mask & ~self.stripped

    def metrics(self) -> SchemeParams:
        K, F, Z, S = self.base.params
        n = F - self.z_prime
        return SchemeParams(
            K=K,
            F=n,
            Z=Z - self.z_prime,
            S=S,
            memory_ratio=Fraction(Z - self.z_prime, n),
            rate=Fraction(S, n),
        )


def strip_useless(pda: PdaArray, z_prime: Optional[int] = None) -> CodedPda:
    """Drop useless stars and attach an ``[F, F - Z']`` MDS code.

    By default every useless star is removed and the per-column count must be
    uniform. With ``z_prime`` given, exactly that many useless stars are
    removed from each column (the topmost ones), which must not exceed any
    column's useless count.
    """
    base = scheme_metrics(pda)  # rejects non-uniform star counts
    report = find_useless_stars(pda)
    useless = np.zeros(pda.grid.shape, dtype=bool)
    for i, j in report.positions:
        useless[i, j] = True
    if z_prime is None:
        zp = report.uniform
        if zp is None:
            raise NonUniformUselessError(
                f"useless stars per column differ: {sorted(set(report.per_column))}"
            )
        stripped = useless
    else:
        if z_prime < 0 or (report.per_column and min(report.per_column) < z_prime):
            raise NonUniformUselessError(
                f"cannot strip {z_prime} per column; fewest useless in a column is {min(report.per_column)}"
            )
        zp = z_prime
        rank = np.cumsum(useless, axis=0)
        stripped = useless & (rank <= z_prime)
    if zp >= base.F:
        raise ValueError("stripping would leave no packets")
    return CodedPda(base=pda, useless=report, z_prime=zp, stripped=stripped, spec=MdsSpec(pda.F, pda.F - zp))


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def zr_star(q: int, r: int) -> int:
    """Smallest z in [1, q-1] with floor((q-1)/(q-z)) == r."""
    for z in range(1, q):
        if (q - 1) // (q - z) == r:
            return z
    raise EmptyClassError(f"no z in [1, {q - 1}] has floor((q-1)/(q-z)) = {r}")


@dataclass(frozen=True)
class Theorem34Params:
    q: int
    z: int
    m: int
    t: int
    r: int
    z_star: int
    params: SchemeParams
    z_prime: int  # useless stars removed per column of the uncoded array


def _coded_closed_form(q, z, m, t, blocks: int, K: int) -> Theorem34Params:
    r = (q - 1) // (q - z)
    zs = zr_star(q, r)
    a = Fraction(q - zs, q) ** t
    b = Fraction(q - z, q) ** t
    F = blocks * q ** (m - 1) * (1 + b - a)
    ratio = (1 - a) / (1 - a + b)
    rate = Fraction((q - z) ** t) / (blocks * (1 - a + b))
    S = q ** (m - 1) * (q - z) ** t
    assert F.denominator == 1
    F = int(F)
    Z = ratio * F
    assert Z.denominator == 1 and rate == Fraction(S, F)
    z_prime = blocks * (q ** (m - 1 - t)) * ((q - zs) ** t - (q - z) ** t)
    return Theorem34Params(
        q, z, m, t, r, zs, SchemeParams(K=K, F=F, Z=int(Z), S=S, memory_ratio=ratio, rate=rate), z_prime
    )


def theorem3_params(q: int, z: int, m: int, t: int) -> Theorem34Params:
    p = Theorem1Params(q, z, m, t)
    return _coded_closed_form(q, z, m, t, p.L, comb(m, t) * q**t)


def theorem4_params(q: int, z: int, m: int, t: int) -> Theorem34Params:
    p = Theorem1Params(q, z, m, t)
    K = (comb(m - 1, t) * p.L + comb(m, t) - comb(m - 1, t)) * q**t
    return _coded_closed_form(q, z, m, t, 1, K)
