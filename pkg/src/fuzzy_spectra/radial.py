"""Finite-difference radial eigensolver for a sharp confining well.

Solves ``[-d^2/dr^2 - (D-1)/r d/dr + j(j+D-2)/r^2 + V(r)] f = E f`` with
``V(r) = V0 + 2k (r-1)^2`` through the substitution ``u = r^((D-1)/2) f``,
which turns it into the symmetric problem

    -u'' + [V(r) + (j(j+D-2) + (D-1)(D-3)/4) / r^2] u = E u

discretised with the three-point stencil and Dirichlet ends.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from math import sqrt

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import curve_fit

from .reports import VerificationReport

WIDTHS = 12
MIN_POINTS_PER_WIDTH = 20
R_FLOOR = 0.02
DEFAULT_N = 4000


class GridTooCoarse(ValueError):
    pass


def oscillator_width(k: float) -> float:
    """``(2k)^(-1/4)``: the ground-state width of ``-u'' + 2k x^2 u``."""
    return (2.0 * k) ** -0.25


@dataclass(frozen=True)
class RadialProblem:
    D: int
    j: int
    k: float
    V0: float
    N: int = DEFAULT_N
    r_min: float | None = None
    r_max: float | None = None

    def __post_init__(self):
        if self.D not in (2, 3):
            raise ValueError("D must be 2 or 3")
        if self.j < 0:
            raise ValueError("angular number must be >= 0")
        if not self.k > 0:
            raise ValueError("k must be positive")
        w = oscillator_width(self.k)
        if self.r_min is None:
            object.__setattr__(self, "r_min", max(1.0 - WIDTHS * w, R_FLOOR))
        if self.r_max is None:
            object.__setattr__(self, "r_max", 1.0 + WIDTHS * w)
        if not 0 < self.r_min < 1 < self.r_max:
            raise ValueError(f"grid [{self.r_min}, {self.r_max}] must satisfy 0 < r_min < 1 < r_max")
        if self.r_min > max(1.0 - WIDTHS * w, R_FLOOR) + 1e-12 or self.r_max < 1.0 + WIDTHS * w - 1e-12:
            raise ValueError(f"grid must cover {WIDTHS} oscillator widths around r = 1")
        if self.spacing * MIN_POINTS_PER_WIDTH > w:
            raise GridTooCoarse(
                f"N = {self.N} gives {w / self.spacing:.1f} points per oscillator width; "
                f"at least {MIN_POINTS_PER_WIDTH} required"
            )

    @property
    def r(self) -> np.ndarray:
        """Interior grid points (the Dirichlet ends are excluded)."""
        return np.linspace(self.r_min, self.r_max, self.N + 2)[1:-1]

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.N + 1)

    def potential(self, r: np.ndarray) -> np.ndarray:
        return self.V0 + 2.0 * self.k * (r - 1.0) ** 2

    def effective_potential(self, r: np.ndarray) -> np.ndarray:
        D, j = self.D, self.j
        c = j * (j + D - 2) + (D - 1) * (D - 3) / 4.0
        return self.potential(r) + c / r**2

    def with_N(self, N: int) -> "RadialProblem":
        return RadialProblem(self.D, self.j, self.k, self.V0, N, self.r_min, self.r_max)

    def with_V0(self, V0: float) -> "RadialProblem":
        return RadialProblem(self.D, self.j, self.k, V0, self.N, self.r_min, self.r_max)


def reduced_operator(problem: RadialProblem) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the discretised ``-d^2/dr^2 + V_eff``."""
    h = problem.spacing
    d = 2.0 / h**2 + problem.effective_potential(problem.r)
    e = np.full(problem.N - 1, -1.0 / h**2)
    return d, e


@dataclass
class RadialSolution:
    problem: RadialProblem
    eigenvalues: np.ndarray
    u: np.ndarray
    refinement: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def r(self) -> np.ndarray:
        return self.problem.r

    @property
    def f(self) -> np.ndarray:
        """Radial functions ``f = u / r^((D-1)/2)``, one column per level."""
        return self.u / self.r[:, None] ** ((self.problem.D - 1) / 2)

    def orthonormality_error(self) -> float:
        G = self.u.T @ self.u * self.problem.spacing
        return float(np.max(np.abs(G - np.eye(G.shape[0]))))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r"] + [f"u_{n}" for n in range(self.u.shape[1])])
            for ri, row in zip(self.r, self.u):
                w.writerow([repr(float(ri))] + [repr(float(x)) for x in row])


def _lowest(problem: RadialProblem, levels: int):
    d, e = reduced_operator(problem)
    w, v = eigh_tridiagonal(d, e, select="i", select_range=(0, levels - 1))
    v = v / sqrt(problem.spacing)
    for n in range(v.shape[1]):
        # positive on the side r < 1 peak: ground state positive, excited states start positive
        i = int(np.argmax(np.abs(v[:, n]) > 1e-3 * np.max(np.abs(v[:, n]))))
        if v[i, n] < 0:
            v[:, n] *= -1
    return w, v


def solve_radial(problem: RadialProblem, levels: int = 3, refine: bool = True) -> RadialSolution:
    """Lowest ``levels`` eigenpairs; ``refinement`` holds ``|E(h) - E(h/2)|``."""
    w, v = _lowest(problem, levels)
    ref = np.zeros(0)
    if refine:
        w2, _ = _lowest(problem.with_N(2 * problem.N + 1), levels)
        ref = np.abs(w - w2)
    return RadialSolution(problem, w, v, ref)


def calibrate_V0(D: int, k: float, refined: bool = False, N: int = DEFAULT_N) -> float:
    """Offset that puts the ground level ``E_{0,0}`` at zero.

    The analytic values are ``-sqrt(2k) + 2`` (D = 2) and ``-sqrt(2k)`` (D = 3).
    ``refined=True`` instead solves with ``V0 = 0`` and shifts by the solved
    ground energy, which is exact for the discrete problem since ``V0`` only
    adds a constant.
    """
    if not k > 0:
        raise ValueError("k must be positive")
    if not refined:
        return -sqrt(2 * k) + (2.0 if D == 2 else 0.0)
    w, _ = _lowest(RadialProblem(D, 0, k, 0.0, N), 1)
    return -float(w[0])


def level_spectrum(D: int, k: float, jmax: int, V0: float | None = None, N: int = DEFAULT_N) -> dict:
    """``{(n, j): E}`` for ``n = 0, 1`` and ``0 <= j <= jmax``."""
    if V0 is None:
        V0 = calibrate_V0(D, k, refined=True, N=N)
    out = {}
    for j in range(jmax + 1):
        sol = solve_radial(RadialProblem(D, j, k, V0, N), levels=2, refine=False)
        out[(0, j)], out[(1, j)] = float(sol.eigenvalues[0]), float(sol.eigenvalues[1])
    return out


def analytic_cutoff_holds(D: int, k: float, lam: int) -> bool:
    if D == 2:
        return lam**2 < 2 * sqrt(2 * k) - 2
    return lam * (lam + 1) < 2 * sqrt(2 * k)


def cutoff_check(D: int, k: float, lam: int, N: int = DEFAULT_N) -> VerificationReport:
    """All ``E_{0,j}`` with ``j <= Lambda`` must lie below ``E_{1,0}``.

    Residuals are ``max(0, E_{0,j} - E_{1,0})``; margins go in ``extra``.
    """
    spec = level_spectrum(D, k, lam, N=N)
    top = spec[(1, 0)]
    rep = VerificationReport(f"radial-D{D}", lam, k)
    margins = {}
    for j in range(lam + 1):
        margins[j] = top - spec[(0, j)]
        rep.add(f"E0_{j}_below_E1_0", max(0.0, -margins[j]), 0.0)
    ok = analytic_cutoff_holds(D, k, lam)
    rep.add("analytic_cutoff", 0.0 if ok else 1.0, 0.0)
    rep.extra.update(
        E1_0=top,
        margins={str(j): m for j, m in margins.items()},
        analytic_bound=(2 * sqrt(2 * k) - 2) if D == 2 else 2 * sqrt(2 * k),
        cutoff_energy=lam**2 if D == 2 else lam * (lam + 1),
    )
    return rep


def a_series(k: float) -> float:
    """``1 + 9/(4 sqrt(2k)) + 137/(64 k)``, truncated after the displayed terms."""
    return 1.0 + 9.0 / (4.0 * sqrt(2 * k)) + 137.0 / (64.0 * k)


def radial_overlap(k: float, m: int, N: int = DEFAULT_N, V0: float | None = None) -> float:
    """``int f_{0,m} r f_{0,m+1} r dr`` for D = 2, i.e. ``sqrt(2) <psi_{m+1}, x^+ psi_m>``."""
    if V0 is None:
        V0 = calibrate_V0(2, k, refined=True, N=N)
    a = solve_radial(RadialProblem(2, m, k, V0, N), levels=1, refine=False)
    b = solve_radial(RadialProblem(2, m + 1, k, V0, N), levels=1, refine=False)
    return float(np.sum(a.u[:, 0] * b.u[:, 0] * a.r) * a.problem.spacing)


def matrix_element_check(k: float, m: int, N: int = DEFAULT_N, lam: int | None = None) -> VerificationReport:
    """Radial overlap against ``a [1 + m(m+1)/(2k)]``.

    ``series`` compares with the displayed three-term ``a`` at tolerance
    ``100 k^(-3/2)``.  ``ratio`` compares ``overlap(m) / overlap(0)`` with
    ``1 + m(m+1)/(2k)``, which is independent of ``a``; tolerance
    ``0.1 / k``.  With ``lam`` given, ``m = lam`` is skipped (no level above).
    """
    rep = VerificationReport("radial-D2", m, k)
    if lam is not None and m >= lam:
        rep.extra["skipped"] = f"m = {m} is the edge of H_Lambda"
        return rep
    V0 = calibrate_V0(2, k, refined=True, N=N)
    ov = radial_overlap(k, m, N, V0)
    pred = a_series(k) * (1 + m * (m + 1) / (2 * k))
    rep.add("series", abs(ov - pred), 100 * k**-1.5)
    ov0 = ov if m == 0 else radial_overlap(k, 0, N, V0)
    rep.add("ratio", abs(ov / ov0 - (1 + m * (m + 1) / (2 * k))), 0.1 / k)
    rep.extra.update(overlap=ov, predicted=pred, a=a_series(k), overlap_m0=ov0)
    return rep


def _gaussian(x, amp, centre, width):
    return amp * np.exp(-((x - centre) ** 2) / (2 * width**2))


def gaussian_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Centre and width of a Gaussian least-squares fit."""
    y = np.abs(y)
    p = y / y.sum()
    c0 = float(np.sum(p * x))
    s0 = float(np.sqrt(np.sum(p * (x - c0) ** 2)))
    mask = y > 1e-6 * y.max()
    (amp, c, s), _ = curve_fit(_gaussian, x[mask], y[mask], p0=(y.max(), c0, s0), maxfev=20000)
    return float(c), float(abs(s))


def predicted_profile(D: int, k: float, j: int, E: float, V0: float) -> tuple[float, float]:
    """Centre and width of the ground radial profile.

    D = 3: ``r_l = (2k + 4L)/(2k + 3L)``, width ``(2k + 3L)^(-1/4)`` with
    ``L = l(l+1)``, for ``u = r f``.  D = 2: ``rho = (E - V0)/k_m``, width
    ``k_m^(-1/4)`` with ``k_m = 2(k - E + V0)``, for ``f`` in ``rho = ln r``.
    """
    if D == 3:
        L = j * (j + 1)
        return (2 * k + 4 * L) / (2 * k + 3 * L), (2 * k + 3 * L) ** -0.25
    km = 2 * (k - E + V0)
    return (E - V0) / km, km**-0.25


def gaussian_profile_check(D: int, k: float, j: int, N: int = DEFAULT_N, rtol: float = 0.01) -> VerificationReport:
    """Fit the ground radial function and compare centre and width.

    Relative errors are reported; for D = 2 the centre is compared as
    ``exp(rho)`` so that the scale is the radius, as for D = 3.
    """
    V0 = calibrate_V0(D, k, refined=True, N=N)
    sol = solve_radial(RadialProblem(D, j, k, V0, N), levels=1, refine=False)
    E = float(sol.eigenvalues[0])
    if D == 3:
        x, y = sol.r, sol.u[:, 0]
    else:
        x, y = np.log(sol.r), sol.f[:, 0]
    rep = VerificationReport(f"radial-D{D}", j, k)
    c_pred, s_pred = predicted_profile(D, k, j, E, V0)
    try:
        c, s = gaussian_fit(x, y)
    except RuntimeError as exc:
        rep.add("fit", float("inf"), 0.0)
        rep.extra["error"] = str(exc)
        return rep
    if D == 2:
        c_cmp, c_ref = np.exp(c), np.exp(c_pred)
    else:
        c_cmp, c_ref = c, c_pred
    rep.add("centre", abs(c_cmp - c_ref) / abs(c_ref), rtol)
    rep.add("width", abs(s - s_pred) / s_pred, rtol)
    rep.extra.update(centre=c, width=s, predicted_centre=c_pred, predicted_width=s_pred, E=E)
    return rep
