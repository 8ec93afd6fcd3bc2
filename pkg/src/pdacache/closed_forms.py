"""Closed-form (K, M/N, R, F) of known and new coded caching schemes.

All values are exact: integers or :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Callable, Union

from .coded import theorem3_params, theorem4_params
from .constructions import Theorem1Params, check_qzmt
from .oa import ParameterError

Number = Union[int, Fraction]


@dataclass(frozen=True)
class ClosedForm:
    K: int
    ratio: Fraction
    rate: Fraction
    F: Number


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


def _int_or_frac(x: Fraction) -> Number:
    return int(x) if x.denominator == 1 else x


# --- literature baselines ---------------------------------------------------


def maddah_ali_niesen(k: int, t: int) -> ClosedForm:
    if not 0 < t < k:
        raise ParameterError(f"need 0 < t < k, got k={k}, t={t}")
    return ClosedForm(k, Fraction(t, k), Fraction(k - t, 1 + t), comb(k, t))


def projective_2019(m: int, k: int, t: int, q: int) -> ClosedForm:
    """Projective-geometry scheme with parameters (m, k, t, q), m + t <= k."""
    if m + t > k or min(m, k, t) < 1 or q < 2:
        raise ParameterError(f"need m + t <= k and positive parameters, got {(m, k, t, q)}")
    gb = lambda n, r: gaussian_binomial(n, r, q)  # noqa: E731
    K = gb(k - t + 1, 1)
    ratio = 1 - Fraction(q ** (m + 1) * gb(k - t, m + 1), gb(k - t + 1, m + 1))
    rate = Fraction(q ** (m + 1) * gb(k - m - t, 1), m + 2)
    F = Fraction(
        gb(k - t + 1, m + 1) * prod(q ** (m + 1) - q**i for i in range(m + 1)),
        (q - 1) ** (m + 1) * factorial(m + 1),
    )
    return ClosedForm(K, ratio, rate, _int_or_frac(F))


def projective_2021(q: int, m: int, t: int, k: int) -> ClosedForm:
    """Subspace-based projective-geometry scheme with parameters (q, m, t, k)."""
    if m + t > k or min(m, k, t) < 1 or q < 2:
        raise ParameterError(f"need m + t <= k and positive parameters, got {(q, m, t, k)}")
    gb = lambda n, r: gaussian_binomial(n, r, q)  # noqa: E731
    F = gb(k, m + t)
    return ClosedForm(gb(k, t), 1 - Fraction(gb(k - t, m), F), Fraction(gb(k, m), F), F)


def hypergraph(q: int, m: int, t: int) -> ClosedForm:
    if q < 2 or not 1 <= t < m:
        raise ParameterError(f"need q >= 2 and 1 <= t < m, got {(q, m, t)}")
    return ClosedForm(comb(m, t) * q**t, 1 - Fraction(q - 1, q) ** t, Fraction((q - 1) ** t), q**m)


def hypergraph_alt(q: int, m: int, t: int) -> ClosedForm:
    """The high-memory hypergraph family: M/N = 1 - 1/q^t."""
    if q < 2 or not 1 <= t < m:
        raise ParameterError(f"need q >= 2 and 1 <= t < m, got {(q, m, t)}")
    return ClosedForm(comb(m, t) * q**t, 1 - Fraction(1, q**t), Fraction(1, (q - 1) ** t), (q - 1) ** t * q**m)


def partition(q: int, m: int) -> ClosedForm:
    if q < 2 or m < 1:
        raise ParameterError(f"need q >= 2 and m >= 1, got {(q, m)}")
    F = q**m
    return ClosedForm((m + 1) * q, Fraction(q ** (m - 1), F), Fraction(q ** (m + 1) - F, F), F)


def flexible(q: int, z: int, m: int, t: int) -> ClosedForm:
    L = Theorem1Params(q, z, m, t).L
    F = L * q**m
    return ClosedForm(comb(m, t) * q**t, 1 - Fraction(q - z, q) ** t, Fraction((q - z) ** t, L), F)


def oa_z1(q: int, m: int, t: int) -> ClosedForm:
    """The q^{m-1}-packet scheme built on an OA of strength m-1 (z = 1)."""
    check_qzmt(q, 1, m, t)
    return ClosedForm(comb(m, t) * q**t, 1 - Fraction(q - 1, q) ** t, Fraction((q - 1) ** t), q ** (m - 1))


# --- new schemes ----------------------------------------------------------------


def theorem1(q: int, z: int, m: int, t: int) -> ClosedForm:
    L = Theorem1Params(q, z, m, t).L
    return ClosedForm(
        comb(m, t) * q**t, 1 - Fraction(q - z, q) ** t, Fraction((q - z) ** t, L), L * q ** (m - 1)
    )


def theorem2(q: int, z: int, m: int, t: int) -> ClosedForm:
    L = Theorem1Params(q, z, m, t).L
    K = (comb(m - 1, t) * L + comb(m, t) - comb(m - 1, t)) * q**t
    return ClosedForm(K, 1 - Fraction(q - z, q) ** t, Fraction((q - z) ** t), q ** (m - 1))


def theorem3(q: int, z: int, m: int, t: int) -> ClosedForm:
    p = theorem3_params(q, z, m, t).params
    return ClosedForm(p.K, p.memory_ratio, p.rate, p.F)


def theorem4(q: int, z: int, m: int, t: int) -> ClosedForm:
    p = theorem4_params(q, z, m, t).params
    return ClosedForm(p.K, p.memory_ratio, p.rate, p.F)


QZMT_SCHEMES: dict[str, Callable[..., ClosedForm]] = {
    "theorem1": theorem1,
    "theorem2": theorem2,
    "theorem3": theorem3,
    "theorem4": theorem4,
    "flexible": flexible,
}
