"""The O(2)-covariant fuzzy circle.

``H_Lambda`` has the orthonormal basis ``psi_m``, ``m = -Lambda..Lambda``,
stored in that order.  The coordinates ``xi+-`` shift ``m`` by one with
coefficient ``sqrt(1 + m(m+-1)/k) / sqrt(2)``; the default ``form="exact"``
uses this square root, which is what the su(2) realisation produces and
what makes the commutation relations hold identically.  ``form="linear"``
keeps only the first-order expansion ``(1 + m(m+-1)/(2k)) / sqrt(2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from math import sqrt
from typing import Mapping

import numpy as np
from scipy.linalg import expm

from .lie_reps import su2_irrep
from .operator_core import commutator, identity, product_of_shifts, span_rank, spectral_projectors
from .reports import ConvergenceTable, VerificationReport, k_circle_default, k_prop33, resolve_k, warn_if


class AutomorphismError(RuntimeError):
    pass


AUTOMORPHISM_TOL = 1e-10


@dataclass(frozen=True)
class FuzzyCircle:
    lam: int
    k: float
    xi_plus: np.ndarray
    xi_minus: np.ndarray
    Lbar: np.ndarray
    form: str = "exact"

    @property
    def dim(self) -> int:
        return 2 * self.lam + 1

    def index(self, m: int) -> int:
        return m + self.lam

    def basis_vector(self, m: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(m)] = 1.0
        return v

    def projector(self, m: int) -> np.ndarray:
        """Rank-one projector onto ``psi_m`` (explicit matrix)."""
        P = np.zeros((self.dim, self.dim), dtype=complex)
        P[self.index(m), self.index(m)] = 1.0
        return P

    def cartesian(self) -> tuple[np.ndarray, np.ndarray]:
        s2 = np.sqrt(2.0)
        return (self.xi_plus + self.xi_minus) / s2, -1j * (self.xi_plus - self.xi_minus) / s2

    def square_distance(self) -> np.ndarray:
        return self.xi_plus @ self.xi_minus + self.xi_minus @ self.xi_plus


def band_coefficient(m: int, sign: int, k: float, form: str = "exact") -> float:
    """Coefficient of ``psi_{m+sign}`` in ``xi^{sign} psi_m`` (no truncation)."""
    q = m * (m + sign) / k
    if form == "exact":
        return sqrt(1.0 + q) / sqrt(2.0)
    if form == "linear":
        return (1.0 + q / 2.0) / sqrt(2.0)
    raise ValueError(f"unknown form {form!r}")


def _check_cutoff(lam: int, k: float) -> None:
    warn_if(
        lam**2 >= 2 * sqrt(2 * k) - 2,
        f"Lambda^2 = {lam**2} violates Lambda^2 < 2 sqrt(2k) - 2 = {2 * sqrt(2 * k) - 2:.4g}",
    )


def build_circle(lam: int, k: float, form: str = "exact") -> FuzzyCircle:
    if lam < 1:
        raise ValueError("Lambda must be >= 1")
    if not k > 0:
        raise ValueError("k must be positive")
    _check_cutoff(lam, k)
    n = 2 * lam + 1
    xp = np.zeros((n, n), dtype=complex)
    for m in range(-lam, lam):
        xp[m + 1 + lam, m + lam] = band_coefficient(m, 1, k, form)
    xm = xp.conj().T.copy()
    L = np.diag(np.arange(-lam, lam + 1)).astype(complex)
    return FuzzyCircle(lam, float(k), xp, xm, L, form)


def projector_polynomial(fc: FuzzyCircle, m: int) -> np.ndarray:
    """``P_m`` as the Lagrange interpolation polynomial in ``Lbar``."""
    others = [s for s in range(-fc.lam, fc.lam + 1) if s != m]
    scale = np.prod([float(m - s) for s in others])
    return product_of_shifts(fc.Lbar, others) / scale


def r2_prediction(lam: int, k: float) -> np.ndarray:
    """Closed-form spectrum of ``R^2`` on ``psi_m``, ``m = -Lambda..Lambda``."""
    m = np.arange(-lam, lam + 1, dtype=float)
    out = 1.0 + m**2 / k
    edge = 1.0 + lam**2 / k - (1.0 + lam * (lam + 1) / k) / 2.0
    out[0] = out[-1] = edge
    return out


def verify_circle_algebra(fc: FuzzyCircle, tol: float = 1e-12) -> VerificationReport:
    lam, k = fc.lam, fc.k
    n = fc.dim
    eye = identity(n)
    xp, xm, L = fc.xi_plus, fc.xi_minus, fc.Lbar
    P = spectral_projectors(L, [lam, -lam])
    Ptop, Pbot = P[lam], P[-lam]
    edge = 1.0 + lam * (lam + 1) / k
    nrm = np.linalg.norm

    rep = VerificationReport("circle", lam, k)
    rep.add("snyder_commutator", nrm(commutator(xp, xm) + L / k - edge * (Ptop - Pbot) / 2), tol)
    # relative to the product of factor norms, as for the sphere
    roots = range(-lam, lam + 1)
    scale = float(np.prod([nrm(L - m * eye, 2) for m in roots]))
    rep.add("L_minimal_polynomial", nrm(product_of_shifts(L, roots)) / scale, tol)
    rep.add("L_hermitian", nrm(L - L.conj().T), tol)
    rep.add("xi_adjoint", nrm(xp.conj().T - xm), tol)
    rep.add("L_xi_plus", nrm(commutator(L, xp) - xp), tol)
    rep.add("L_xi_minus", nrm(commutator(L, xm) + xm), tol)
    rep.add("xi_plus_nilpotent", nrm(np.linalg.matrix_power(xp, 2 * lam + 1)), tol)
    rep.add("xi_minus_nilpotent", nrm(np.linalg.matrix_power(xm, 2 * lam + 1)), tol)
    R2 = fc.square_distance()
    rep.add("square_distance", nrm(R2 - (eye + L @ L / k - edge * (Ptop + Pbot) / 2)), tol)
    return rep


def _f_plus(s: np.ndarray, lam: int, k: float) -> np.ndarray:
    # only needed for -Lambda < s <= Lambda; outside that window the value
    # multiplies a zero row of E+- and is set to 0
    num = 1.0 + s * (s - 1) / k
    den = lam * (lam + 1) - s * (s - 1)
    inside = (s > -lam) & (s <= lam)
    if np.any(den[inside] <= 0):
        raise ArithmeticError("f+ denominator vanishes inside the spectrum")
    out = np.zeros_like(s)
    out[inside] = np.sqrt(num[inside] / den[inside])
    return out


def realize_circle_uso3(lam: int, k: float) -> FuzzyCircle:
    """``Lbar = E0``, ``xi+- = f+-(E0) E+-`` in the spin-Lambda irrep."""
    if lam < 1:
        raise ValueError("Lambda must be >= 1")
    _check_cutoff(lam, k)
    E = su2_irrep(lam)
    s = np.real(np.diag(E.zero))
    f_plus = _f_plus(s, lam, k)
    f_minus = _f_plus(s + 1, lam, k)  # f-(s) = f+(s+1)
    xp = np.diag(f_plus) @ E.plus
    xm = np.diag(f_minus) @ E.minus
    return FuzzyCircle(lam, float(k), xp, xm, E.zero.copy(), "exact")


def _conjugate(fc: FuzzyCircle, g: np.ndarray) -> FuzzyCircle:
    gi = g.conj().T
    return replace(
        fc,
        xi_plus=g @ fc.xi_plus @ gi,
        xi_minus=g @ fc.xi_minus @ gi,
        Lbar=g @ fc.Lbar @ gi,
    )


def _require(residual: float, what: str) -> None:
    if residual > AUTOMORPHISM_TOL:
        raise AutomorphismError(f"{what}: residual {residual:.3e}")


def rotation_automorphism(fc: FuzzyCircle, theta: float, check: bool = True) -> FuzzyCircle:
    """Conjugate by ``exp(i theta Lbar)``: ``xi+- -> exp(+-i theta) xi+-``."""
    out = _conjugate(fc, expm(1j * theta * fc.Lbar))
    if check:
        nrm = np.linalg.norm
        _require(nrm(out.Lbar - fc.Lbar), "Lbar not invariant")
        _require(nrm(out.xi_plus - np.exp(1j * theta) * fc.xi_plus), "xi+ phase")
        _require(nrm(out.xi_minus - np.exp(-1j * theta) * fc.xi_minus), "xi- phase")
    return out


def reflection_generator(lam: int) -> np.ndarray:
    """``exp(i alpha)`` with ``alpha = pi (E+ + E-) / sqrt(2)`` in the spin-Lambda irrep."""
    E = su2_irrep(lam)
    return expm(1j * np.pi * (E.plus + E.minus) / np.sqrt(2))


def reflection_automorphism(fc: FuzzyCircle, check: bool = True) -> FuzzyCircle:
    """Orientation-reversing O(2) element: ``Lbar -> -Lbar``, ``xi+- -> xi-+``."""
    out = _conjugate(fc, reflection_generator(fc.lam))
    if check:
        nrm = np.linalg.norm
        _require(nrm(out.Lbar + fc.Lbar), "Lbar -> -Lbar")
        _require(nrm(out.xi_plus - fc.xi_minus), "xi+ -> xi-")
        _require(nrm(out.xi_minus - fc.xi_plus), "xi- -> xi+")
    return out


# ---------------------------------------------------------------------------
# fuzzy functions and strong convergence


def eta_power(fc: FuzzyCircle, h: int) -> np.ndarray:
    base = np.sqrt(2.0) * (fc.xi_plus if h >= 0 else fc.xi_minus)
    return np.linalg.matrix_power(base, abs(h))


def fuzzy_function_1d(fc: FuzzyCircle, coeffs) -> np.ndarray:
    """``sum_h f_h eta^h`` for Fourier coefficients ``f_h``, ``h = -2Lambda..2Lambda``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (4 * fc.lam + 1,):
        raise ValueError(f"need {4 * fc.lam + 1} coefficients, got shape {coeffs.shape}")
    out = np.zeros((fc.dim, fc.dim), dtype=complex)
    for i, c in enumerate(coeffs):
        if c != 0:
            out += c * eta_power(fc, i - 2 * fc.lam)
    return out


def fourier_array(f: Mapping[int, complex], lam: int) -> np.ndarray:
    """Pack ``{h: f_h}`` into the length ``4Lambda+1`` array, dropping ``|h| > 2Lambda``."""
    out = np.zeros(4 * lam + 1, dtype=complex)
    for h, c in f.items():
        if abs(h) <= 2 * lam:
            out[h + 2 * lam] = c
    return out


def _convolve(f: Mapping[int, complex], g: Mapping[int, complex]) -> dict:
    out: dict = {}
    for h1, c1 in f.items():
        for h2, c2 in g.items():
            out[h1 + h2] = out.get(h1 + h2, 0) + c1 * c2
    return out


def circle_convergence_scan(
    f: Mapping[int, complex],
    phi: Mapping[int, complex],
    lams,
    k_rule: str | None = None,
    g: Mapping[int, complex] | None = None,
    k: float | None = None,
) -> ConvergenceTable:
    """Norms ``||(f_hat - f.) phi||`` on L2(S^1) with ``psi_m = u^m``.

    Columns: ``f`` (always), ``fg`` and ``f_g`` (when ``g`` is given, for
    ``(fg)_hat`` and ``f_hat g_hat``) and ``edge`` which applies ``f_hat - f.``
    to ``psi_Lambda``.  The default stiffness is the larger of
    ``Lambda^2 (Lambda+1)^2`` and the strong-convergence bound.
    """
    lams = list(lams)
    fg = _convolve(f, g) if g is not None else None
    cols: dict[str, list[float]] = {"f": [], "edge": []}
    if g is not None:
        cols.update(fg=[], f_g=[])
    ks = []
    for lam in lams:
        kl = k_circle_default(lam) if k_rule is None else resolve_k(k_rule, lam, k)
        warn_if(kl < k_prop33(lam), f"k = {kl:.4g} below the strong-convergence bound at Lambda={lam}")
        ks.append(kl)
        fc = build_circle(lam, kl)
        f_hat = fuzzy_function_1d(fc, fourier_array(f, lam))
        cols["f"].append(_embedded_error(f_hat, f, phi, lam))
        cols["edge"].append(_embedded_error(f_hat, f, {lam: 1.0}, lam))
        if g is not None:
            g_hat = fuzzy_function_1d(fc, fourier_array(g, lam))
            fg_hat = fuzzy_function_1d(fc, fourier_array(fg, lam))
            cols["fg"].append(_embedded_error(fg_hat, fg, phi, lam))
            cols["f_g"].append(_embedded_error(f_hat @ g_hat, fg, phi, lam))
    desc = {
        "f": "||(f_hat - f) phi||",
        "edge": "||(f_hat - f) psi_Lambda||",
        "fg": "||((fg)_hat - fg) phi||",
        "f_g": "||(f_hat g_hat - fg) phi||",
    }
    return ConvergenceTable(lams, ks, cols, {c: desc[c] for c in cols})


def _embedded_error(op: np.ndarray, f: Mapping[int, complex], phi: Mapping[int, complex], lam: int) -> float:
    exact = _convolve(f, phi)
    v = np.array([phi.get(m, 0) for m in range(-lam, lam + 1)], dtype=complex)
    w = op @ v
    diff = dict(exact)
    for i, m in enumerate(range(-lam, lam + 1)):
        diff[m] = diff.get(m, 0) - w[i]
    return float(np.sqrt(sum(abs(c) ** 2 for c in diff.values())))


def ordered_monomials(fc: FuzzyCircle) -> list[np.ndarray]:
    """``(xi+)^h Lbar^l (xi-)^n`` with ``0 <= h, l, n <= 2 Lambda``."""
    n = 2 * fc.lam
    xp = [np.linalg.matrix_power(fc.xi_plus, h) for h in range(n + 1)]
    xm = [np.linalg.matrix_power(fc.xi_minus, h) for h in range(n + 1)]
    Lp = [np.linalg.matrix_power(fc.Lbar, h) for h in range(n + 1)]
    return [a @ b @ c for a in xp for b in Lp for c in xm]


def monomial_rank(fc: FuzzyCircle) -> int:
    return span_rank(ordered_monomials(fc))
