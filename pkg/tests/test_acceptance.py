"""Acceptance criteria 1-9, each at its stated tolerance.

Every test prints one ``CRITERION n: PASS|FAIL`` line (also collected into
the terminal summary) and then asserts the verdict.  Run alone with

    pytest tests/test_acceptance.py -v
"""
import time
import warnings
from math import sqrt

import numpy as np
import pytest

from fuzzy_spectra import fuzzy_circle as fc_mod
from fuzzy_spectra import fuzzy_sphere as fs_mod
from fuzzy_spectra import harmonics, radial
from fuzzy_spectra.lie_reps import COMPONENTS, d_factor, so4_coupled_rep, so4_product_oracle
from fuzzy_spectra.operator_core import identity
from fuzzy_spectra.reports import ConsistencyWarning, k_lambda2, k_prop33, k_prop43

from conftest import ACCEPTANCE_LINES

nrm = np.linalg.norm


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConsistencyWarning)
        yield


def verdict(n: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_circle_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for lam in range(1, 21):
        for k in (k_lambda2(lam), k_prop33(lam)):
            rep = fc_mod.verify_circle_algebra(fc_mod.build_circle(lam, k), 1e-12)
            worst = max(worst, rep.max_residual)
    dt = time.perf_counter() - t0
    verdict(1, worst <= 1e-12 and dt < 5, f"max residual {worst:.2e} (tol 1e-12), {dt:.2f} s (limit 5 s)")


def test_criterion_2_sphere_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for lam in range(1, 11):
        for k in (k_lambda2(lam), k_prop43(lam)):
            rep = fs_mod.verify_sphere_algebra(fs_mod.build_sphere(lam, k), 1e-12)
            worst = max(worst, rep.max_residual)
    dt = time.perf_counter() - t0
    verdict(2, worst <= 1e-12 and dt < 30, f"max residual {worst:.2e} (tol 1e-12), {dt:.2f} s (limit 30 s)")


def _sphere_distance(a, b):
    return max(
        max(nrm(a.xbar[c] - b.xbar[c]) for c in COMPONENTS),
        max(nrm(a.Lbar[c] - b.Lbar[c]) for c in COMPONENTS),
    )


def test_criterion_3_realisations():
    circ = 0.0
    for lam in range(1, 21):
        for k in (k_lambda2(lam), k_prop33(lam)):
            a, b = fc_mod.realize_circle_uso3(lam, k), fc_mod.build_circle(lam, k)
            circ = max(circ, nrm(a.xi_plus - b.xi_plus), nrm(a.xi_minus - b.xi_minus), nrm(a.Lbar - b.Lbar))
    sph = rec = gam = 0.0
    gam_fail = []
    for lam in range(1, 9):
        for rule, k in (("lambda2", k_lambda2(lam)), ("prop43", k_prop43(lam))):
            sph = max(sph, _sphere_distance(fs_mod.realize_sphere_uso4(lam, k), fs_mod.build_sphere(lam, k)))
            for l in range(1, lam + 1):
                g = fs_mod.g_function
                lhs = g(l, lam, k) * g(l - 1, lam, k) * d_factor(lam, l)
                rec = max(rec, abs(lhs - fs_mod.radial_factor(l, lam, k)))
            for l in range(lam + 1):
                p, q = fs_mod.g_function(l, lam, k), fs_mod.g_function(l, lam, k, "gamma")
                err = abs(p - q) / p
                gam = max(gam, err)
                if err > 1e-10:
                    gam_fail.append(f"{rule} L={lam} l={l}")
    ok = circ <= 1e-12 and sph <= 1e-10 and rec <= 1e-10 and gam <= 1e-10
    detail = (
        f"circle {circ:.2e} (tol 1e-12), sphere {sph:.2e} (tol 1e-10), "
        f"g recurrence {rec:.2e} (tol 1e-10), product vs Gamma {gam:.2e} rel (tol 1e-10)"
    )
    if gam_fail:
        detail += f"; Gamma form off at {', '.join(sorted(set(gam_fail))[:4])}"
    verdict(3, ok, detail)


def test_criterion_4_representation_oracle():
    gen = cas = 0.0
    for lam in range(0, 9):
        a, b = so4_coupled_rep(lam), so4_product_oracle(lam)
        for c in COMPONENTS:
            gen = max(gen, nrm(a.L[c] - b.L[c]), nrm(a.X[c] - b.X[c]))
        cas = max(cas, nrm(a.square("X") + a.square("L") - lam * (lam + 2) * identity(a.dim)))
    verdict(4, gen <= 1e-9 and cas <= 1e-12, f"generators {gen:.2e} (tol 1e-9), X^2+L^2 {cas:.2e} (tol 1e-12)")


def test_criterion_5_covariance():
    rng = np.random.default_rng(5)
    problems = []
    suite = 0.0
    for lam in range(1, 7):
        for k in (k_lambda2(lam), k_prop43(lam)):
            fs = fs_mod.build_sphere(lam, k)
            try:
                p = fs_mod.parity_automorphism(fs)
                suite = max(suite, fs_mod.verify_sphere_algebra(p).max_residual)
                fs_mod.rotation_automorphism_3d(fs, rng.uniform(-np.pi, np.pi, 3))
            except fs_mod.AutomorphismError as exc:
                problems.append(f"sphere L={lam}: {exc}")
    for lam in range(1, 11):
        fc = fc_mod.build_circle(lam, k_prop33(lam))
        try:
            fc_mod.reflection_automorphism(fc)
            fc_mod.rotation_automorphism(fc, float(rng.uniform(-np.pi, np.pi)))
        except fc_mod.AutomorphismError as exc:
            problems.append(f"circle L={lam}: {exc}")
    _, mad = fs_mod.madore_baseline(3)
    pv = mad.extra["parity_violation"]
    ok = not problems and suite <= 1e-12 and pv > 0.1 and mad.overall_pass
    detail = (
        f"automorphisms within 1e-10: {'yes' if not problems else problems[0]}, "
        f"suite after parity {suite:.2e} (tol 1e-12), Madore n=3 parity violation {pv:.3f} (> 0.1), "
        f"Madore relations {mad.max_residual:.2e} (tol 1e-12)"
    )
    verdict(5, ok, detail)


def _bulk_deviation_circle(lam):
    fc = fc_mod.build_circle(lam, k_lambda2(lam))
    d = np.real(np.diag(fc.square_distance()))
    return float(np.max(np.abs(d[1:-1] - 1)))


def _bulk_deviation_sphere(lam):
    fs = fs_mod.build_sphere(lam, k_lambda2(lam))
    d = np.real(np.diag(fs.square_distance()))
    return float(np.max(np.abs(d[: lam * lam] - 1)))


def test_criterion_6_spectral_collapse():
    circ = [_bulk_deviation_circle(lam) for lam in range(2, 13)]
    sph = [_bulk_deviation_sphere(lam) for lam in range(2, 11)]
    strict = lambda v: all(b < a for a, b in zip(v, v[1:]))
    ok = strict(circ) and circ[-1] <= 1e-3 and strict(sph) and sph[-1] <= 1e-3
    detail = (
        f"circle strictly decreasing: {strict(circ)}, final {circ[-1]:.3e}; "
        f"sphere strictly decreasing: {strict(sph)}, final {sph[-1]:.3e} (tol 1e-3)"
    )
    verdict(6, ok, detail)


def test_criterion_7_strong_convergence():
    lams = list(range(1, 9))
    at6 = lams.index(6)
    circ = fc_mod.circle_convergence_scan({1: 1.0}, {0: 1.0}, lams, k_rule="prop33")
    y10 = harmonics.from_dict({(1, 0): 1.0})
    y00 = harmonics.from_dict({(0, 0): 1.0})
    sph = fs_mod.sphere_convergence_scan(y10, y00, lams, k_rule="prop43")
    norm_cols = [(circ, "f")] + [(sph, c) for c in ("f", "x1", "x2", "x3")]
    mono = all(t.is_nonincreasing(c) for t, c in norm_cols)
    small = max(t.column(c)[at6] for t, c in norm_cols)
    edge = min(circ.column("edge").min(), sph.column("edge").min())
    ok = mono and small < 1e-2 and edge >= 0.5
    detail = (
        f"norm columns nonincreasing: {mono}, largest at Lambda=6 {small:.2e} (tol 1e-2), "
        f"smallest edge norm {edge:.3f} (>= 0.5)"
    )
    verdict(7, ok, detail)


def test_criterion_8_radial():
    t0 = time.perf_counter()
    k, N = 1e6, 4000
    spec3 = radial.level_spectrum(3, k, 5, N=N)
    e0 = max(abs(spec3[(0, l)] - l * (l + 1)) for l in range(6))
    e1 = abs(spec3[(1, 0)] / (2 * sqrt(2 * k)) - 1)
    ov = radial.radial_overlap(k, 0, N)
    a = radial.a_series(k)
    dt = time.perf_counter() - t0
    ok = e0 <= 0.05 and e1 <= 0.01 and abs(ov - a) <= 1e-6 and dt < 60
    detail = (
        f"D=3 max |E0l - l(l+1)| {e0:.3e} (tol 0.05), E10 rel {e1:.2e} (tol 1%); "
        f"D=2 overlap {ov:.9f} vs a {a:.7f}, diff {abs(ov - a):.2e} (tol 1e-6); {dt:.2f} s (limit 60 s)"
    )
    verdict(8, ok, detail)


def test_criterion_9_generation():
    dims = all(fc_mod.build_circle(lam, k_lambda2(lam)).dim == 2 * lam + 1 for lam in range(1, 21))
    dims &= all(fs_mod.build_sphere(lam, k_lambda2(lam)).dim == (lam + 1) ** 2 for lam in range(1, 11))
    bad = []
    for lam in range(1, 7):
        n = 2 * lam + 1
        r = fc_mod.monomial_rank(fc_mod.build_circle(lam, k_lambda2(lam)))
        if r != n * n:
            bad.append(f"circle L={lam}: {r}")
    for lam in range(1, 5):
        n = (lam + 1) ** 2
        r = fs_mod.monomial_rank(fs_mod.build_sphere(lam, k_lambda2(lam)))
        if r != n * n:
            bad.append(f"sphere L={lam}: {r}")
    verdict(9, dims and not bad, f"dimensions ok: {dims}, full monomial rank: {'yes' if not bad else bad}")
