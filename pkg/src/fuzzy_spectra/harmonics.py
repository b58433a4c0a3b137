"""Classical spherical harmonics in coefficient space.

A function on the sphere is a coefficient array over orthonormal
Condon-Shortley ``Y_l^m`` ordered by ``(l asc, m asc)``; index
``l*l + l + m``.  Multiplication goes through Gaunt coefficients.
"""
from __future__ import annotations

from functools import lru_cache
from math import pi, sqrt
from typing import Mapping

import numpy as np

from .lie_reps import clebsch_gordan, coupled_index


def lmax_of(coeffs: np.ndarray) -> int:
    n = len(coeffs)
    l = int(round(sqrt(n))) - 1
    if (l + 1) ** 2 != n:
        raise ValueError(f"length {n} is not a square: not a triangular (l, m) coefficient set")
    return l


def from_dict(f: Mapping[tuple[int, int], complex], lmax: int | None = None) -> np.ndarray:
    if lmax is None:
        lmax = max((l for l, _ in f), default=0)
    out = np.zeros((lmax + 1) ** 2, dtype=complex)
    for (l, m), c in f.items():
        if abs(m) > l:
            raise ValueError(f"|m| > l in ({l}, {m})")
        if l <= lmax:
            out[coupled_index(l, m)] = c
    return out


def resize(coeffs: np.ndarray, lmax: int) -> np.ndarray:
    """Zero-pad or truncate to ``l <= lmax``."""
    out = np.zeros((lmax + 1) ** 2, dtype=complex)
    n = min(len(coeffs), len(out))
    out[:n] = coeffs[:n]
    return out


@lru_cache(maxsize=None)
def gaunt(l1: int, m1: int, l2: int, m2: int, L: int, M: int) -> float:
    """``int Y_{l1}^{m1} Y_{l2}^{m2} conj(Y_L^M) dOmega``."""
    if m1 + m2 != M or (l1 + l2 + L) % 2 or not abs(l1 - l2) <= L <= l1 + l2:
        return 0.0
    pref = sqrt((2 * l1 + 1) * (2 * l2 + 1) / (4 * pi * (2 * L + 1)))
    return pref * clebsch_gordan(l1, l2, L, 0, 0) * clebsch_gordan(l1, l2, L, m1, m2)


def multiply(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Coefficients of the pointwise product ``f g`` (exact, ``lmax = lf + lg``)."""
    lf, lg = lmax_of(f), lmax_of(g)
    out = np.zeros((lf + lg + 1) ** 2, dtype=complex)
    nz_f = [(l, m, f[coupled_index(l, m)]) for l in range(lf + 1) for m in range(-l, l + 1)]
    nz_g = [(l, m, g[coupled_index(l, m)]) for l in range(lg + 1) for m in range(-l, l + 1)]
    nz_f = [t for t in nz_f if t[2] != 0]
    nz_g = [t for t in nz_g if t[2] != 0]
    for l1, m1, c1 in nz_f:
        for l2, m2, c2 in nz_g:
            M = m1 + m2
            for L in range(max(abs(l1 - l2), abs(M)), l1 + l2 + 1):
                gc = gaunt(l1, m1, l2, m2, L, M)
                if gc:
                    out[coupled_index(L, M)] += c1 * c2 * gc
    return out


def unit_vector_coefficients() -> dict:
    """``x^a / r`` for ``a = +1, 0, -1`` as coefficient arrays (``lmax = 1``)."""
    s = sqrt(4 * pi / 3)
    return {
        1: from_dict({(1, 1): -s}, 1),
        0: from_dict({(1, 0): s}, 1),
        -1: from_dict({(1, -1): s}, 1),
    }


def unit_vector_cartesian() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    v = unit_vector_coefficients()
    s2 = sqrt(2.0)
    return (v[1] + v[-1]) / s2, -1j * (v[1] - v[-1]) / s2, v[0]
