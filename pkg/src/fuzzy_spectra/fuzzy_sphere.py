"""The O(3)-covariant fuzzy sphere and the Madore-Hoppe baseline.

``H_Lambda`` is spanned by ``psi_l^m`` (``0 <= l <= Lambda``, ``|m| <= l``)
ordered by ``(l asc, m asc)``, the same order as the so(4) coupled basis.
Generators are stored by spherical component ``a in {+1, 0, -1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from math import factorial, lgamma, pi, sqrt
from typing import Mapping

import numpy as np
from scipy.linalg import expm
from scipy.spatial.transform import Rotation
from scipy.special import loggamma

from . import harmonics
from .lie_reps import (
    COMPONENTS,
    angular_momentum,
    coupled_index,
    coupled_labels,
    d_factor,
    factor_swap,
    ladder_vector_operator,
    so4_coupled_rep,
    spherical_to_cartesian,
    su2_irrep,
)
from .operator_core import commutator, identity, product_of_shifts, span_rank, spectral_projectors
from .reports import ConvergenceTable, VerificationReport, k_prop43, resolve_k, warn_if

AUTOMORPHISM_TOL = 1e-10

EPS = np.zeros((3, 3, 3))
EPS[0, 1, 2] = EPS[1, 2, 0] = EPS[2, 0, 1] = 1.0
EPS[0, 2, 1] = EPS[2, 1, 0] = EPS[1, 0, 2] = -1.0


class AutomorphismError(RuntimeError):
    pass


@dataclass(frozen=True)
class FuzzySphere:
    lam: int
    k: float
    xbar: dict
    Lbar: dict
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return (self.lam + 1) ** 2

    @property
    def K(self) -> float:
        return 1.0 / self.k + (1.0 + self.lam**2 / self.k) / (2 * self.lam + 1)

    def index(self, l: int, m: int) -> int:
        return coupled_index(l, m)

    def basis_vector(self, l: int, m: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(l, m)] = 1.0
        return v

    def projector(self, l: int) -> np.ndarray:
        """Explicit projector onto the ``L^2 = l(l+1)`` block."""
        d = np.zeros(self.dim)
        d[l * l : (l + 1) ** 2] = 1.0
        return np.diag(d).astype(complex)

    def x_cartesian(self):
        return spherical_to_cartesian(self.xbar)

    def L_cartesian(self):
        return spherical_to_cartesian(self.Lbar)

    def L2(self) -> np.ndarray:
        return sum(self.Lbar[a] @ self.Lbar[-a] for a in COMPONENTS)

    def square_distance(self) -> np.ndarray:
        return sum(x @ x for x in self.x_cartesian())


def radial_factor(l: int, lam: int, k: float) -> float:
    """``c_l = sqrt(1 + l^2/k)`` for ``1 <= l <= Lambda``; zero at ``l = 0`` and ``Lambda + 1``."""
    if l <= 0 or l > lam:
        return 0.0
    return sqrt(1.0 + l * l / k)


def _check_cutoff(lam: int, k: float) -> None:
    warn_if(
        lam * (lam + 1) >= 2 * sqrt(2 * k),
        f"Lambda(Lambda+1) = {lam * (lam + 1)} violates the bound 2 sqrt(2k) = {2 * sqrt(2 * k):.4g}",
    )


def build_sphere(lam: int, k: float) -> FuzzySphere:
    if lam < 1:
        raise ValueError("Lambda must be >= 1")
    if not k > 0:
        raise ValueError("k must be positive")
    _check_cutoff(lam, k)
    x = ladder_vector_operator(lam, lambda l: radial_factor(l, lam, k))
    return FuzzySphere(lam, float(k), x, angular_momentum(lam))


def verify_sphere_algebra(fs: FuzzySphere, tol: float = 1e-12) -> VerificationReport:
    """Residuals of the defining relations (Frobenius norm).

    The two minimal-polynomial residuals are reported relative to the
    product of the factor norms: their absolute values scale like the
    product of the roots times rounding error.
    """
    lam, k, n = fs.lam, fs.k, fs.dim
    eye = identity(n)
    nrm = np.linalg.norm
    X = fs.x_cartesian()
    L = fs.L_cartesian()
    L2 = fs.L2()
    P = spectral_projectors(L2, [l * (l + 1) for l in range(lam + 1)])
    Ptop = P[lam * (lam + 1)]
    rep = VerificationReport("sphere", lam, k)

    factors = [L2 - l * (l + 1) * eye for l in range(lam + 1)]
    prod = eye
    for F in factors:
        prod = prod @ F
    scale = float(np.prod([nrm(F, 2) for F in factors]))
    rep.add("L2_minimal_polynomial", nrm(prod) / scale, tol)
    worst = 0.0
    for l in range(lam + 1):
        roots = range(-l, l + 1)
        scale = float(np.prod([nrm(L[2] - m * eye, 2) for m in roots]))
        worst = max(worst, nrm(product_of_shifts(L[2], roots) @ P[l * (l + 1)]) / scale)
    rep.add("L3_minimal_polynomial", worst, tol)
    rep.add("L_hermitian", max(nrm(Li - Li.conj().T) for Li in L), tol)
    rep.add("x_hermitian", max(nrm(Xi - Xi.conj().T) for Xi in X), tol)

    r_LL = r_Lx = r_xx = 0.0
    snyder = -eye / k + fs.K * Ptop
    for i in range(3):
        for j in range(3):
            eL = sum(1j * EPS[i, j, h] * L[h] for h in range(3))
            ex = sum(1j * EPS[i, j, h] * X[h] for h in range(3))
            r_LL = max(r_LL, nrm(commutator(L[i], L[j]) - eL))
            r_Lx = max(r_Lx, nrm(commutator(L[i], X[j]) - ex))
            r_xx = max(r_xx, nrm(commutator(X[i], X[j]) - snyder @ eL))
    rep.add("L_commutator", r_LL, tol)
    rep.add("L_x_commutator", r_Lx, tol)
    rep.add("snyder_commutator", r_xx, tol)
    rep.add("x_dot_L", nrm(sum(X[i] @ L[i] for i in range(3))), tol)
    rep.add("L_dot_x", nrm(sum(L[i] @ X[i] for i in range(3))), tol)

    R2 = fs.square_distance()
    top = (1.0 + (lam + 1) ** 2 / k) * (lam + 1) / (2 * lam + 1)
    rep.add("square_distance", nrm(R2 - (eye + (L2 + eye) / k - top * Ptop)), tol)
    return rep


def r2_prediction(lam: int, k: float) -> np.ndarray:
    """Closed-form ``R^2`` eigenvalue for each ``l = 0..Lambda``."""
    l = np.arange(lam + 1, dtype=float)
    out = 1.0 + (l * (l + 1) + 1) / k
    out[-1] -= (1.0 + (lam + 1) ** 2 / k) * (lam + 1) / (2 * lam + 1)
    return out


# ---------------------------------------------------------------------------
# realisation inside pi_Lambda[U so(4)]


_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188)


def _log_gamma_half_step(z: complex) -> complex:
    """``log Gamma(z + 1/2) - log Gamma(z)``.

    For large ``|z|`` the two log-Gammas are huge and nearly equal, so the
    leading Stirling terms are subtracted analytically.
    """
    if abs(z) < 20:
        return loggamma(z + 0.5) - loggamma(z)
    w = z + 0.5
    out = z * np.log1p(0.5 / z) + 0.5 * np.log(z) - 0.5
    for n, c in enumerate(_STIRLING):
        out += c * (w ** -(2 * n + 1) - z ** -(2 * n + 1))
    return out


def g_function(l: int, lam: int, k: float, form: str = "product") -> float:
    """Conjugating weight ``g(l)`` with ``xbar = g(lambda) X g(lambda)``.

    ``form="gamma"`` evaluates the closed form in Euler Gamma functions
    (log-Gamma with complex argument, so that ``k ~ 1e20`` does not overflow).
    That closed form agrees with the finite product only up to a relative
    error of order ``exp(-pi sqrt(k))``.
    """
    if not 0 <= l <= lam:
        raise ValueError(f"l = {l} outside 0..{lam}")
    if form == "product":
        num = np.prod([float(lam + l - 2 * h) for h in range(l)])
        den = np.prod([float(lam + l + 1 - 2 * h) for h in range(l + 1)])
        kp = 1.0
        for j in range((l + 1) // 2):
            kp *= (1.0 + (l - 2 * j) ** 2 / k) / (1.0 + (l - 1 - 2 * j) ** 2 / k)
        return sqrt(num / den * kp)
    if form == "gamma":
        y = sqrt(k) / 2
        lg = (
            lgamma((lam + l) / 2 + 1)
            + lgamma((lam - l + 1) / 2)
            - lgamma((lam + 1 + l) / 2 + 1)
            - lgamma((lam - l) / 2 + 1)
        )
        lg += 2 * _log_gamma_half_step((l + 1) / 2 + 1j * y).real
        lg -= 0.5 * np.log(k)
        return float(np.exp(lg / 2))
    raise ValueError(f"unknown form {form!r}")


def lambda_operator(L2: np.ndarray) -> np.ndarray:
    """``(sqrt(4 L^2 + 1) - 1) / 2``, evaluated on the diagonal of ``L^2``."""
    d = np.real(np.diag(L2))
    if np.linalg.norm(L2 - np.diag(np.diag(L2))) > 1e-10 * (1 + np.linalg.norm(L2)):
        raise ValueError("L^2 is not diagonal in this basis")
    return np.diag((np.sqrt(4 * d + 1) - 1) / 2)


def g_operator(lam: int, k: float, L2: np.ndarray, form: str = "product") -> np.ndarray:
    ls = np.rint(np.real(np.diag(lambda_operator(L2)))).astype(int)
    return np.diag([g_function(int(l), lam, k, form) for l in ls]).astype(complex)


def realize_sphere_uso4(lam: int, k: float, form: str = "product") -> FuzzySphere:
    """``Lbar_a = L_a``, ``xbar^a = g(lambda) X^a g(lambda)`` from the so(4) coupled rep."""
    if lam < 1:
        raise ValueError("Lambda must be >= 1")
    _check_cutoff(lam, k)
    rep = so4_coupled_rep(lam)
    G = g_operator(lam, k, rep.square("L"), form)
    x = {a: G @ rep.X[a] @ G for a in COMPONENTS}
    return FuzzySphere(lam, float(k), x, dict(rep.L))


def recover_X(fs: FuzzySphere) -> dict:
    """Inverse of the realisation: ``X^a = g^{-1} xbar^a g^{-1}``."""
    Gi = np.linalg.inv(g_operator(fs.lam, fs.k, fs.L2()))
    return {a: Gi @ fs.xbar[a] @ Gi for a in COMPONENTS}


# ---------------------------------------------------------------------------
# automorphisms


def _conjugate(fs: FuzzySphere, g: np.ndarray) -> FuzzySphere:
    gi = g.conj().T
    return replace(
        fs,
        xbar={a: g @ v @ gi for a, v in fs.xbar.items()},
        Lbar={a: g @ v @ gi for a, v in fs.Lbar.items()},
        _cache={},
    )


def _require(residual: float, what: str) -> None:
    if residual > AUTOMORPHISM_TOL:
        raise AutomorphismError(f"{what}: residual {residual:.3e}")


def parity_automorphism(fs: FuzzySphere, check: bool = True) -> FuzzySphere:
    """Exchange of the two su(2) factors: ``Lbar -> Lbar``, ``xbar -> -xbar``."""
    out = _conjugate(fs, factor_swap(fs.lam))
    if check:
        nrm = np.linalg.norm
        _require(max(nrm(out.Lbar[a] - fs.Lbar[a]) for a in COMPONENTS), "Lbar invariant")
        _require(max(nrm(out.xbar[a] + fs.xbar[a]) for a in COMPONENTS), "xbar -> -xbar")
    return out


def rotation_matrix(alpha) -> np.ndarray:
    """Classical rotation by the rotation vector ``alpha``."""
    return Rotation.from_rotvec(np.asarray(alpha, dtype=float)).as_matrix()


def rotation_automorphism_3d(fs: FuzzySphere, alpha, check: bool = True) -> FuzzySphere:
    """Conjugate by ``exp(i alpha_i Lbar_i)``; coordinates rotate by ``rotation_matrix(alpha)``."""
    L = fs.L_cartesian()
    g = expm(1j * sum(float(al) * Li for al, Li in zip(alpha, L)))
    out = _conjugate(fs, g)
    if check:
        nrm = np.linalg.norm
        R = rotation_matrix(alpha)
        X, Xr = fs.x_cartesian(), out.x_cartesian()
        _require(max(nrm(Xr[j] - sum(R[j, h] * X[h] for h in range(3))) for j in range(3)), "x rotation")
        _require(nrm(out.L2() - fs.L2()), "L^2 invariant")
    return out


# ---------------------------------------------------------------------------
# fuzzy spherical harmonics


def classical_normalization(l: int) -> float:
    """``M_l`` for which the same formula in commuting ``x^a/r`` gives ``Y_l^m`` exactly."""
    return (-1) ** l * sqrt(factorial(2 * l + 1) / (4 * pi)) / (2 ** (l / 2) * factorial(l))


def _raw_harmonic(fs: FuzzySphere, l: int, m: int) -> np.ndarray:
    key = ("raw", l, m)
    if key not in fs._cache:
        if m == l:
            op = np.linalg.matrix_power(fs.xbar[1], l)
        else:
            op = commutator(fs.Lbar[-1], _raw_harmonic(fs, l, m + 1))
        fs._cache[key] = op
    return fs._cache[key]


def hs_norm(A: np.ndarray, lam: int) -> float:
    """Norm for ``<A, B> = tr(A^dagger B) 4 pi / (Lambda+1)^2``."""
    return float(np.sqrt(np.real(np.vdot(A, A)) * 4 * pi / (lam + 1) ** 2))


def fuzzy_harmonic(fs: FuzzySphere, l: int, m: int, normalization: str = "classical") -> np.ndarray:
    """``Y_hat_l^m = M_l sqrt((l+m)! 2^(l-m) / ((2l)! (l-m)!)) ad(Lbar_-)^(l-m) (xbar^+)^l``.

    ``normalization="classical"`` uses the constant that reproduces the
    Condon-Shortley ``Y_l^m`` for commuting coordinates; ``"hs"`` rescales
    to unit normalised Hilbert-Schmidt norm keeping the same sign.
    """
    if not 0 <= l <= 2 * fs.lam or abs(m) > l:
        raise ValueError(f"(l, m) = ({l}, {m}) outside 0 <= l <= {2 * fs.lam}, |m| <= l")
    pref = sqrt(factorial(l + m) * 2 ** (l - m) / (factorial(2 * l) * factorial(l - m)))
    op = pref * _raw_harmonic(fs, l, m)
    if normalization == "classical":
        return classical_normalization(l) * op
    if normalization == "hs":
        top = _raw_harmonic(fs, l, l)
        return np.sign(classical_normalization(l)) * op / hs_norm(top, fs.lam)
    raise ValueError(f"unknown normalization {normalization!r}")


def fuzzy_function_2d(fs: FuzzySphere, coeffs, normalization: str = "classical") -> np.ndarray:
    """``sum_{l <= 2Lambda, |m| <= l} f_l^m Y_hat_l^m``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != ((2 * fs.lam + 1) ** 2,):
        raise ValueError(f"need {(2 * fs.lam + 1) ** 2} coefficients (l <= {2 * fs.lam}), got {coeffs.shape}")
    out = np.zeros((fs.dim, fs.dim), dtype=complex)
    for l in range(2 * fs.lam + 1):
        for m in range(-l, l + 1):
            c = coeffs[coupled_index(l, m)]
            if c != 0:
                out += c * fuzzy_harmonic(fs, l, m, normalization)
    return out


def _as_coeffs(f) -> np.ndarray:
    if isinstance(f, Mapping):
        return harmonics.from_dict(f)
    return np.asarray(f, dtype=complex)


def _embedded_error(op: np.ndarray, f: np.ndarray, phi: np.ndarray, lam: int) -> float:
    exact = harmonics.multiply(f, phi)
    n = (lam + 1) ** 2
    w = op @ harmonics.resize(phi, lam)
    size = max(len(exact), n)
    diff = harmonics.resize(exact, lmax=int(round(sqrt(size))) - 1)
    diff[:n] -= w
    return float(np.linalg.norm(diff))


def sphere_convergence_scan(
    f,
    phi,
    lams,
    k_rule: str = "prop43",
    g=None,
    k: float | None = None,
    normalization: str = "classical",
) -> ConvergenceTable:
    """Norms ``||(f_hat - f.) phi||`` in L2(S^2) with ``psi_l^m = Y_l^m``.

    ``f``, ``phi`` and ``g`` are coefficient arrays or ``{(l, m): c}`` dicts.
    Columns: ``f``; ``fg`` and ``f_g`` when ``g`` is given; ``x1, x2, x3``
    for ``||(xbar^i - x^i/r) phi||``; ``edge`` for
    ``||(xbar^0 - x^0/r) psi_Lambda^0||`` and ``edge_top`` for
    ``||(f_hat - f.) psi_Lambda^Lambda||``.
    """
    f, phi = _as_coeffs(f), _as_coeffs(phi)
    gc = _as_coeffs(g) if g is not None else None
    fg = harmonics.multiply(f, gc) if gc is not None else None
    units = harmonics.unit_vector_cartesian()
    lams = list(lams)
    cols: dict[str, list[float]] = {"f": [], "x1": [], "x2": [], "x3": [], "edge": [], "edge_top": []}
    if gc is not None:
        cols.update(fg=[], f_g=[])
    ks = []
    for lam in lams:
        kl = resolve_k(k_rule, lam, k)
        warn_if(kl < k_prop43(lam), f"k = {kl:.4g} below the strong-convergence bound at Lambda={lam}")
        ks.append(kl)
        fs = build_sphere(lam, kl)
        lf = 2 * lam
        f_hat = fuzzy_function_2d(fs, harmonics.resize(f, lf), normalization)
        cols["f"].append(_embedded_error(f_hat, f, phi, lam))
        for i, (Xi, ui) in enumerate(zip(fs.x_cartesian(), units)):
            cols[f"x{i + 1}"].append(_embedded_error(Xi, ui, phi, lam))
        edge = harmonics.from_dict({(lam, 0): 1.0})
        cols["edge"].append(_embedded_error(fs.xbar[0], units[2], edge, lam))
        top = harmonics.from_dict({(lam, lam): 1.0})
        cols["edge_top"].append(_embedded_error(f_hat, f, top, lam))
        if gc is not None:
            g_hat = fuzzy_function_2d(fs, harmonics.resize(gc, lf), normalization)
            fg_hat = fuzzy_function_2d(fs, harmonics.resize(fg, lf), normalization)
            cols["fg"].append(_embedded_error(fg_hat, fg, phi, lam))
            cols["f_g"].append(_embedded_error(f_hat @ g_hat, fg, phi, lam))
    desc = {
        "f": "||(f_hat - f) phi||",
        "x1": "||(xbar^1 - x^1/r) phi||",
        "x2": "||(xbar^2 - x^2/r) phi||",
        "x3": "||(xbar^3 - x^3/r) phi||",
        "edge": "||(xbar^3 - x^3/r) psi_Lambda^0||",
        "edge_top": "||(f_hat - f) psi_Lambda^Lambda||",
        "fg": "||((fg)_hat - fg) phi||",
        "f_g": "||(f_hat g_hat - fg) phi||",
    }
    return ConvergenceTable(lams, ks, cols, {c: desc[c] for c in cols})


def monomial_rank(fs: FuzzySphere, max_degree: int | None = None) -> int:
    """Dimension of the span of words in ``xbar^a, Lbar_a`` up to ``max_degree``.

    Words are grown one left multiplication at a time.  Each degree only
    keeps an orthonormal basis of the directions it adds, so the count is
    the rank of all monomials of bounded degree without enumerating them.
    """
    if max_degree is None:
        max_degree = 4 * fs.lam + 2
    gens = [fs.xbar[a] for a in COMPONENTS] + [fs.Lbar[a] for a in COMPONENTS]
    n = fs.dim
    basis = np.zeros((0, n * n), dtype=complex)
    frontier = identity(n).reshape(1, -1)
    for _ in range(max_degree + 1):
        W = frontier
        for _ in range(2):
            W = W - (W @ basis.conj().T) @ basis
        _, sv, Vh = np.linalg.svd(W, full_matrices=False)
        keep = sv > 1e-9 * max(1.0, np.linalg.norm(frontier, axis=1).max())
        if not keep.any():
            break
        new = Vh[keep]
        basis = np.vstack([basis, new])
        if len(basis) >= n * n:
            break
        words = new.reshape(-1, n, n)
        frontier = np.concatenate([(G @ words).reshape(len(new), -1) for G in gens])
    return int(span_rank(list(basis.reshape(-1, n, n))))


# ---------------------------------------------------------------------------
# Madore-Hoppe fuzzy sphere


@dataclass(frozen=True)
class MadoreFS:
    n: int
    x: tuple

    @property
    def coupling(self) -> float:
        return 2.0 / sqrt(self.n**2 - 1)


def madore_baseline(n: int, tol: float = 1e-12) -> tuple[MadoreFS, VerificationReport]:
    """Rescaled spin-(n-1)/2 generators ``x^i = 2 J_i / sqrt(n^2 - 1)``.

    The report's ``extra["parity_violation"]`` is the largest Frobenius
    residual of the commutation relation after ``x -> -x``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    J = su2_irrep((n - 1) / 2).cartesian()
    c = 2.0 / sqrt(n * n - 1)
    x = tuple(c * Ji for Ji in J)
    fs = MadoreFS(n, x)
    nrm = np.linalg.norm

    def fs_residual(y):
        r = 0.0
        for i in range(3):
            for j in range(3):
                rhs = sum(1j * c * EPS[i, j, h] * y[h] for h in range(3))
                r = max(r, nrm(commutator(y[i], y[j]) - rhs))
        return r

    rep = VerificationReport("madore", n, None)
    rep.add("fs_commutator", fs_residual(x), tol)
    rep.add("unit_radius", nrm(sum(xi @ xi for xi in x) - identity(n)), tol)
    rep.extra["parity_violation"] = float(fs_residual(tuple(-xi for xi in x)))
    return fs, rep
