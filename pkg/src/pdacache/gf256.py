"""GF(2^8) arithmetic via log/antilog tables (reduction polynomial 0x11d)."""

from __future__ import annotations

import numpy as np

POLY = 0x11D
ORDER = 256

EXP = np.zeros(2 * ORDER, dtype=np.int64)
LOG = np.zeros(ORDER, dtype=np.int64)

_x = 1
for _i in range(ORDER - 1):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & ORDER:
        _x ^= POLY
EXP[ORDER - 1 : 2 * ORDER - 2] = EXP[: ORDER - 1]

# full product table; 64 KiB, lets packet arithmetic run as fancy indexing
MUL = np.zeros((ORDER, ORDER), dtype=np.uint8)
_nz = np.arange(1, ORDER)
MUL[1:, 1:] = EXP[(LOG[_nz][:, None] + LOG[_nz][None, :]) % (ORDER - 1)]


def add(a: int, b: int) -> int:
    return a ^ b


def mul(a: int, b: int) -> int:
    return int(MUL[a, b])


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return int(EXP[(ORDER - 1 - LOG[a]) % (ORDER - 1)])


def div(a: int, b: int) -> int:
    return mul(a, inv(b))


def power(a: int, n: int) -> int:
    if n == 0:
        return 1
    if a == 0:
        return 0
    return int(EXP[(LOG[a] * n) % (ORDER - 1)])


def scale(c: int, data: np.ndarray) -> np.ndarray:
    """Multiply every byte of ``data`` by the scalar ``c``."""
    return MUL[c][data]


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(256); ``b`` may be a matrix of packets (rows)."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    for i in range(a.shape[0]):
        acc = out[i]
        for k in range(a.shape[1]):
            if a[i, k]:
                acc ^= MUL[a[i, k]][b[k]]
    return out


def mat_inv(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; raises ``ValueError`` on a singular matrix."""
    a = np.array(a, dtype=np.uint8)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    aug = np.concatenate([a, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col]), None)
        if piv is None:
            raise ValueError("singular matrix over GF(256)")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] = MUL[inv(int(aug[col, col]))][aug[col]]
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] ^= MUL[aug[r, col]][aug[col]]
    return aug[:, n:]
