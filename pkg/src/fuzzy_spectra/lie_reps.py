"""su(2) irreps and the spin (Lambda/2, Lambda/2) representation of so(4).

Ladder operators use the Cartan-Weyl normalisation ``[E+, E-] = E0``, i.e.
``E+- = J+- / sqrt(2)`` in terms of the usual physics raising/lowering
operators.  Vector operators are stored by spherical component
``a in {+1, 0, -1}``; :func:`spherical_to_cartesian` converts with the
unitary ``U`` that defines ``v+- = (v1 +- i v2) / sqrt(2)``, ``v0 = v3``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import sqrt

import numpy as np

from .operator_core import identity

COMPONENTS = (1, 0, -1)

# rows: (+, -, 0); columns: (1, 2, 3)
U = np.array(
    [[1, 1j, 0], [1, -1j, 0], [0, 0, np.sqrt(2)]], dtype=complex
) / np.sqrt(2)


def spherical_to_cartesian(v: dict) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s2 = np.sqrt(2.0)
    return ((v[1] + v[-1]) / s2, -1j * (v[1] - v[-1]) / s2, v[0])


def cartesian_to_spherical(v1, v2, v3) -> dict:
    s2 = np.sqrt(2.0)
    return {1: (v1 + 1j * v2) / s2, 0: v3, -1: (v1 - 1j * v2) / s2}


def twice(label) -> int:
    """Return ``2 * label`` as an int, rejecting labels that are not half-integers."""
    try:
        two = 2 * Fraction(label)
    except (TypeError, ValueError):
        raise ValueError(f"invalid su(2) label {label!r}") from None
    if two.denominator != 1 or two < 0:
        raise ValueError(f"invalid su(2) label {label!r}: need 2l a nonnegative integer")
    return int(two)


def raising_coefficient(j: float, m: float) -> float:
    """Matrix element of the physics ``J+`` from ``|j, m>`` to ``|j, m+1>``."""
    return sqrt(max((j - m) * (j + m + 1), 0.0))


def lowering_coefficient(j: float, m: float) -> float:
    return sqrt(max((j + m) * (j - m + 1), 0.0))


@dataclass(frozen=True)
class Su2Irrep:
    l: float
    plus: np.ndarray
    minus: np.ndarray
    zero: np.ndarray

    @property
    def dim(self) -> int:
        return self.zero.shape[0]

    def spherical(self) -> dict:
        return {1: self.plus, 0: self.zero, -1: self.minus}

    def cartesian(self):
        """Standard Hermitian generators ``J1, J2, J3``."""
        return spherical_to_cartesian(self.spherical())

    def casimir(self) -> np.ndarray:
        return self.plus @ self.minus + self.minus @ self.plus + self.zero @ self.zero


def su2_irrep(l) -> Su2Irrep:
    """The ``2l+1``-dimensional irrep, basis ordered by ``m`` ascending."""
    n = twice(l) + 1
    j = (n - 1) / 2
    ms = np.arange(n) - j
    plus = np.zeros((n, n), dtype=complex)
    for i, m in enumerate(ms[:-1]):
        plus[i + 1, i] = raising_coefficient(j, m) / sqrt(2)
    return Su2Irrep(j, plus, plus.conj().T.copy(), np.diag(ms).astype(complex))


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients


@lru_cache(maxsize=None)
def _cg_table(two_j1: int, two_j2: int, two_j: int) -> np.ndarray:
    """Table ``T[m + j, m1 + j1] = <j1 m1; j2 m-m1 | j m>`` (Condon-Shortley).

    Seeded by the highest-weight state, fixed by ``J+|j j> = 0`` and the
    phase convention ``<j1 j1; j2 j-j1 | j j> > 0``, then lowered with
    ``J- = J1- + J2-``.
    """
    j1, j2, j = two_j1 / 2, two_j2 / 2, two_j / 2
    n1, nj = two_j1 + 1, two_j + 1
    m1s = np.arange(n1) - j1
    table = np.zeros((nj, n1))

    top = np.zeros(n1)
    lo = int(round(max(-j1, j - j2) + j1))
    top[lo] = 1.0
    for i in range(lo, n1 - 1):
        m1 = m1s[i]
        top[i + 1] = -top[i] * raising_coefficient(j1, m1) / raising_coefficient(j2, j - m1 - 1)
    top /= np.linalg.norm(top)
    if top[-1] < 0:
        top = -top
    table[nj - 1] = top

    for mi in range(nj - 1, 0, -1):
        m = mi - j
        cur, nxt = table[mi], np.zeros(n1)
        for i, m1 in enumerate(m1s):
            if abs(m - 1 - m1) > j2:
                continue
            acc = 0.0
            if i + 1 < n1:
                acc += cur[i + 1] * lowering_coefficient(j1, m1 + 1)
            if abs(m - m1) <= j2:
                acc += cur[i] * lowering_coefficient(j2, m - m1)
            nxt[i] = acc
        table[mi - 1] = nxt / lowering_coefficient(j, m)
    return table


def clebsch_gordan(j1, j2, j, m1, m2) -> float:
    """``<j1 m1; j2 m2 | j, m1+m2>``; zero for inadmissible quantum numbers."""
    try:
        t1, t2, t = twice(j1), twice(j2), twice(j)
        tm1, tm2 = round(2 * m1), round(2 * m2)
    except ValueError:
        return 0.0
    if not (abs(t1 - t2) <= t <= t1 + t2) or (t1 + t2 + t) % 2:
        return 0.0
    if abs(tm1) > t1 or abs(tm2) > t2 or abs(tm1 + tm2) > t:
        return 0.0
    if (t1 - tm1) % 2 or (t2 - tm2) % 2:
        return 0.0
    table = _cg_table(t1, t2, t)
    return float(table[(tm1 + tm2 + t) // 2, (tm1 + t1) // 2])


# ---------------------------------------------------------------------------
# so(4) = su(2) + su(2) in the coupled basis |l, m>


def coupled_index(l: int, m: int) -> int:
    return l * l + l + m


def coupled_labels(lam: int) -> list[tuple[int, int]]:
    return [(l, m) for l in range(lam + 1) for m in range(-l, l + 1)]


def coeff_A(a: int, l: int, m: int) -> float:
    """Coefficient of ``Y_{l-1}^{m+a}`` in ``(x^a / r) Y_l^m``."""
    if l <= 0 or abs(m) > l or abs(m + a) > l - 1:
        return 0.0
    den = (2 * l + 1) * (2 * l - 1)
    if a == 1:
        return sqrt((l - m) * (l - m - 1) / (2 * den))
    if a == -1:
        return -sqrt((l + m) * (l + m - 1) / (2 * den))
    if a == 0:
        return sqrt((l + m) * (l - m) / den)
    raise ValueError(f"component must be one of {COMPONENTS}, got {a!r}")


def coeff_B(a: int, l: int, m: int) -> float:
    """Coefficient of ``Y_{l+1}^{m+a}`` in ``(x^a / r) Y_l^m``."""
    return coeff_A(-a, l + 1, m + a)


def ladder_vector_operator(lam: int, radial) -> dict:
    """Spherical components of ``v^a |l,m> = radial(l) A |l-1,m+a> + radial(l+1) B |l+1,m+a>``.

    ``radial`` maps ``l`` to the reduced factor multiplying the transition
    between levels ``l-1`` and ``l``; it is only called for ``1 <= l <= lam``.
    """
    n = (lam + 1) ** 2
    out = {a: np.zeros((n, n), dtype=complex) for a in COMPONENTS}
    factors = {l: radial(l) for l in range(1, lam + 1)}
    for l, m in coupled_labels(lam):
        col = coupled_index(l, m)
        for a in COMPONENTS:
            ma = m + a
            if l >= 1 and abs(ma) <= l - 1:
                out[a][coupled_index(l - 1, ma), col] += factors[l] * coeff_A(a, l, m)
            if l + 1 <= lam and abs(ma) <= l + 1:
                out[a][coupled_index(l + 1, ma), col] += factors[l + 1] * coeff_B(a, l, m)
    return out


def angular_momentum(lam: int) -> dict:
    """``L_a`` acting block-diagonally in ``l`` on the coupled basis."""
    n = (lam + 1) ** 2
    plus = np.zeros((n, n), dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    for l, m in coupled_labels(lam):
        i = coupled_index(l, m)
        zero[i, i] = m
        if m < l:
            plus[coupled_index(l, m + 1), i] = raising_coefficient(l, m) / sqrt(2)
    return {1: plus, 0: zero, -1: plus.conj().T.copy()}


@dataclass(frozen=True)
class So4Rep:
    lam: int
    L: dict
    X: dict
    basis_labels: list = field(repr=False)

    @property
    def dim(self) -> int:
        return (self.lam + 1) ** 2

    def square(self, which: str) -> np.ndarray:
        v = self.L if which == "L" else self.X
        return sum(v[a] @ v[-a] for a in COMPONENTS)

    def dot_XL(self) -> np.ndarray:
        return sum(self.X[a] @ self.L[-a] for a in COMPONENTS)

    def dot_LX(self) -> np.ndarray:
        return sum(self.L[a] @ self.X[-a] for a in COMPONENTS)


def d_factor(lam: int, l: int) -> float:
    return sqrt((lam + 1) ** 2 - l * l)


def so4_coupled_rep(lam: int) -> So4Rep:
    if lam < 0:
        raise ValueError("Lambda must be nonnegative")
    X = ladder_vector_operator(lam, lambda l: d_factor(lam, l))
    return So4Rep(lam, angular_momentum(lam), X, coupled_labels(lam))


@lru_cache(maxsize=32)
def coupling_matrix(lam: int) -> np.ndarray:
    """Columns are the coupled vectors ``|l,m>`` expanded in ``|m1> (x) |m2>``.

    Condon-Shortley phases already give ``<l-1, m| X^0 |l, m> > 0``, the
    sign carried by :func:`so4_coupled_rep`, so no extra multiplet phase is
    applied.
    """
    j = lam / 2
    n1 = lam + 1
    C = np.zeros((n1 * n1, n1 * n1))
    for l, m in coupled_labels(lam):
        col = coupled_index(l, m)
        for i1 in range(n1):
            m1 = i1 - j
            m2 = m - m1
            if abs(m2) > j + 1e-9:
                continue
            i2 = int(round(m2 + j))
            C[i1 * n1 + i2, col] = clebsch_gordan(j, j, l, m1, m2)
    C.setflags(write=False)
    return C


def product_generators(lam: int):
    """``(E1, E2)`` as dicts of spherical components on ``V (x) V``."""
    rep = su2_irrep(Fraction(lam, 2))
    eye = identity(rep.dim)
    E1 = {a: np.kron(op, eye) for a, op in rep.spherical().items()}
    E2 = {a: np.kron(eye, op) for a, op in rep.spherical().items()}
    return E1, E2


def so4_product_oracle(lam: int) -> So4Rep:
    """Build ``L = E1 + E2``, ``X = E1 - E2`` on the tensor product and conjugate
    them into the coupled basis with Clebsch-Gordan coefficients."""
    if lam < 0:
        raise ValueError("Lambda must be nonnegative")
    E1, E2 = product_generators(lam)
    C = coupling_matrix(lam)
    to_coupled = lambda op: C.T @ op @ C
    L = {a: to_coupled(E1[a] + E2[a]) for a in COMPONENTS}
    X = {a: to_coupled(E1[a] - E2[a]) for a in COMPONENTS}
    return So4Rep(lam, L, X, coupled_labels(lam))


def factor_swap(lam: int) -> np.ndarray:
    """Exchange of the two tensor factors, expressed in the coupled basis."""
    n1 = lam + 1
    S = np.zeros((n1 * n1, n1 * n1))
    for i1 in range(n1):
        for i2 in range(n1):
            S[i2 * n1 + i1, i1 * n1 + i2] = 1.0
    C = coupling_matrix(lam)
    swap = C.T @ S @ C
    # exactly a signed permutation; snap away the CG rounding
    snapped = np.rint(swap)
    if np.max(np.abs(swap - snapped)) > 1e-8:
        raise ArithmeticError("factor swap is not a signed permutation in the coupled basis")
    return snapped.astype(complex)
