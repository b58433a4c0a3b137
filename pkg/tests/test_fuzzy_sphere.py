import warnings
from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import sph_harm_y

from fuzzy_spectra.fuzzy_sphere import (
    AutomorphismError,
    build_sphere,
    classical_normalization,
    fuzzy_function_2d,
    fuzzy_harmonic,
    g_function,
    hs_norm,
    lambda_operator,
    madore_baseline,
    monomial_rank,
    parity_automorphism,
    r2_prediction,
    radial_factor,
    realize_sphere_uso4,
    recover_X,
    rotation_automorphism_3d,
    rotation_matrix,
    sphere_convergence_scan,
    verify_sphere_algebra,
)
from fuzzy_spectra.lie_reps import COMPONENTS, coupled_index, d_factor, so4_coupled_rep
from fuzzy_spectra.operator_core import commutator, hermitian_eigensystem
from fuzzy_spectra.reports import ConsistencyWarning, k_lambda2, k_prop43

nrm = np.linalg.norm


def quiet(fn, *args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConsistencyWarning)
        return fn(*args, **kw)


def sphere(lam, k=None):
    return quiet(build_sphere, lam, k_lambda2(lam) if k is None else k)


def test_build_examples():
    assert radial_factor(1, 1, 1.0) == pytest.approx(sqrt(2))
    fs = sphere(1, 1.0)
    v = fs.xbar[0] @ fs.basis_vector(0, 0)
    assert v[fs.index(1, 0)] == pytest.approx(sqrt(2) / sqrt(3))
    assert nrm(v) == pytest.approx(sqrt(2) / sqrt(3))
    for m in (-1, 1):
        assert nrm(fs.xbar[0] @ fs.basis_vector(1, m)) == 0


@pytest.mark.parametrize("lam", [1, 3, 6])
def test_top_level_only_steps_down(lam):
    fs = sphere(lam)
    for a in COMPONENTS:
        for m in range(-lam, lam + 1):
            w = fs.xbar[a] @ fs.basis_vector(lam, m)
            assert nrm(w[lam * lam :]) == 0  # nothing left in the top block


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        build_sphere(0, 1.0)
    with pytest.raises(ValueError):
        build_sphere(1, 0.0)
    with pytest.warns(ConsistencyWarning):
        build_sphere(4, 10.0)


@pytest.mark.parametrize("lam, k", [(1, 4.0), (3, 144.0)])
def test_identity_suite_examples(lam, k):
    assert verify_sphere_algebra(sphere(lam, k)).overall_pass


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 7), st.floats(1.0, 1e8))
def test_identity_suite_holds_for_any_stiffness(lam, scale):
    assert verify_sphere_algebra(sphere(lam, k_lambda2(lam) * scale)).overall_pass


def test_hermiticity_of_cartesian_coordinates():
    fs = sphere(3)
    for a in COMPONENTS:
        assert nrm(fs.xbar[a].conj().T - fs.xbar[-a]) == 0
    for X in fs.x_cartesian():
        assert nrm(X - X.conj().T) < 1e-15


def test_casimir_spectrum_example():
    w = hermitian_eigensystem(sphere(2).L2()).eigenvalues
    assert np.allclose(w, [0, 2, 2, 2, 6, 6, 6, 6, 6], atol=1e-12)


@pytest.mark.parametrize("lam, k", [(2, 36.0), (5, 900.0), (3, 1e9)])
def test_square_distance_spectrum(lam, k):
    fs = sphere(lam, k)
    d = np.diag(fs.square_distance()).real
    expected = np.concatenate([np.full(2 * l + 1, r2_prediction(lam, k)[l]) for l in range(lam + 1)])
    assert np.allclose(d, expected, atol=1e-13)
    for l in range(lam):
        assert r2_prediction(lam, k)[l] == pytest.approx(1 + (l * (l + 1) + 1) / k)


def test_g_function_examples():
    for lam in range(1, 8):
        assert g_function(0, lam, 50.0) == pytest.approx(sqrt(1 / (lam + 1)))
    assert g_function(3, 5, 100.0, "gamma") == pytest.approx(g_function(3, 5, 100.0), rel=1e-10)
    with pytest.raises(ValueError):
        g_function(4, 3, 10.0)
    with pytest.raises(ValueError):
        g_function(1, 3, 10.0, "series")


@pytest.mark.parametrize("lam", range(1, 11))
@pytest.mark.parametrize("k", [10.0, 1e3, 1e12])
def test_g_recurrence(lam, k):
    for l in range(1, lam + 1):
        lhs = g_function(l, lam, k) * g_function(l - 1, lam, k) * d_factor(lam, l)
        assert lhs == pytest.approx(radial_factor(l, lam, k), rel=1e-10)


def test_gamma_form_is_stable_at_huge_stiffness():
    for lam in range(1, 11):
        k = k_prop43(lam)
        for l in range(lam + 1):
            assert g_function(l, lam, k, "gamma") == pytest.approx(g_function(l, lam, k), rel=1e-10)


def test_gamma_form_differs_by_hyperbolic_tangent_at_small_stiffness():
    k = 4.0
    ratio = g_function(1, 1, k, "gamma") / g_function(1, 1, k)
    assert ratio == pytest.approx(sqrt(np.tanh(pi * sqrt(k) / 2)), rel=1e-12)


def test_lambda_operator_reads_off_l():
    rep = so4_coupled_rep(3)
    lam_op = np.diag(lambda_operator(rep.square("L"))).real
    assert np.allclose(lam_op, [l for l, m in rep.basis_labels], atol=1e-12)


@pytest.mark.parametrize("lam, k", [(2, 36.0), (5, 1e5), (8, k_prop43(8))])
def test_realisation_matches_construction(lam, k):
    a, b = quiet(realize_sphere_uso4, lam, k), sphere(lam, k)
    for s in COMPONENTS:
        assert nrm(a.xbar[s] - b.xbar[s]) <= 1e-10
        assert nrm(a.Lbar[s] - b.Lbar[s]) <= 1e-10


def test_inverse_realisation_recovers_X():
    fs = quiet(realize_sphere_uso4, 1, 4.0)
    X = recover_X(fs)
    rep = so4_coupled_rep(1)
    for s in COMPONENTS:
        assert nrm(X[s] - rep.X[s]) <= 1e-10


def test_parity_examples():
    fs = quiet(realize_sphere_uso4, 1, 4.0)
    p = parity_automorphism(fs)
    assert nrm(p.xbar[0] + fs.xbar[0]) <= 1e-10
    pp = parity_automorphism(p)
    for s in COMPONENTS:
        assert nrm(pp.xbar[s] - fs.xbar[s]) <= 1e-10
    w0 = hermitian_eigensystem(fs.square_distance()).eigenvalues
    w1 = hermitian_eigensystem(p.square_distance()).eigenvalues
    assert np.allclose(w0, w1, atol=1e-12)


@pytest.mark.parametrize("lam", range(1, 11))
def test_parity_preserves_identity_suite(lam):
    for k in (k_lambda2(lam), k_prop43(lam)):
        p = parity_automorphism(quiet(realize_sphere_uso4, lam, k))
        assert verify_sphere_algebra(p).overall_pass


def _rodrigues(alpha):
    alpha = np.asarray(alpha, float)
    t = nrm(alpha)
    if t == 0:
        return np.eye(3)
    n = alpha / t
    K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + np.sin(t) * K + (1 - np.cos(t)) * K @ K


def test_rotation_examples():
    fs = sphere(3)
    same = rotation_automorphism_3d(fs, [0, 0, 0])
    assert all(nrm(same.xbar[s] - fs.xbar[s]) == 0 for s in COMPONENTS)
    r = rotation_automorphism_3d(fs, [0, 0, pi])
    assert nrm(r.xbar[1] + fs.xbar[1]) < 1e-12
    assert nrm(r.xbar[-1] + fs.xbar[-1]) < 1e-12
    assert nrm(r.xbar[0] - fs.xbar[0]) < 1e-12
    for s in COMPONENTS:
        assert nrm(commutator(fs.Lbar[0], fs.xbar[s]) - s * fs.xbar[s]) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-4, 4), min_size=3, max_size=3), st.integers(1, 5))
def test_rotations_act_by_classical_matrix(alpha, lam):
    fs = sphere(lam)
    assert np.allclose(rotation_matrix(alpha), _rodrigues(alpha), atol=1e-13)
    out = rotation_automorphism_3d(fs, alpha, check=False)
    R = _rodrigues(alpha)
    X, Y = fs.x_cartesian(), out.x_cartesian()
    for j in range(3):
        assert nrm(Y[j] - sum(R[j, h] * X[h] for h in range(3))) <= 1e-10
    assert verify_sphere_algebra(out).overall_pass


def test_rotation_check_detects_wrong_direction(monkeypatch):
    import fuzzy_spectra.fuzzy_sphere as mod

    monkeypatch.setattr(mod, "rotation_matrix", lambda a: _rodrigues(-np.asarray(a, float)))
    with pytest.raises(AutomorphismError):
        mod.rotation_automorphism_3d(sphere(2), [0.0, 0.3, 0.0])


def test_harmonic_examples():
    fs = sphere(3)
    assert nrm(fuzzy_harmonic(fs, 0, 0) - np.eye(16) / sqrt(4 * pi)) < 1e-14
    Y11 = fuzzy_harmonic(fs, 1, 1)
    assert nrm(Y11 + sqrt(3 / (4 * pi)) * fs.xbar[1]) < 1e-14
    assert nrm(fuzzy_harmonic(fs, 1, 0) - sqrt(3 / (4 * pi)) * fs.xbar[0]) < 1e-14
    with pytest.raises(ValueError):
        fuzzy_harmonic(fs, 7, 0)
    with pytest.raises(ValueError):
        fuzzy_harmonic(fs, 2, 3)


@pytest.mark.parametrize("lam", [1, 2, 4])
def test_harmonics_form_adjoint_multiplets(lam):
    fs = sphere(lam)
    for l in range(2 * lam + 1):
        norms = []
        for m in range(-l, l + 1):
            Y = fuzzy_harmonic(fs, l, m)
            assert nrm(commutator(fs.Lbar[0], Y) - m * Y) <= 1e-10 * max(1, nrm(Y))
            norms.append(hs_norm(Y, lam))
        assert np.ptp(norms) <= 1e-10 * max(norms)
        Yhs = fuzzy_harmonic(fs, l, l, "hs")
        assert hs_norm(Yhs, lam) == pytest.approx(1.0)


def test_classical_normalisation_reproduces_spherical_harmonics():
    # on psi_0^0 the fuzzy harmonic must give Y_l^m * Y_0^0 up to O(1/k)
    fs = sphere(6, k_prop43(6))
    v0 = fs.basis_vector(0, 0)
    for l in range(4):
        for m in range(-l, l + 1):
            w = fuzzy_harmonic(fs, l, m) @ v0
            expected = np.zeros_like(w)
            expected[coupled_index(l, m)] = 1 / sqrt(4 * pi)
            assert nrm(w - expected) < 1e-8


def test_classical_normalisation_matches_coordinate_formula():
    # for m = l the prefactor is 1, so Y_l^l = M_l (x^+/r)^l on the unit sphere
    theta, phi = 0.7, 0.3
    xp = np.sin(theta) * np.exp(1j * phi) / sqrt(2)
    for l in range(6):
        assert classical_normalization(l) * xp**l == pytest.approx(complex(sph_harm_y(l, l, theta, phi)))


def test_fuzzy_function_examples():
    fs = sphere(2)
    n = (2 * 2 + 1) ** 2
    c = np.zeros(n, complex)
    c[0] = sqrt(4 * pi)
    assert nrm(fuzzy_function_2d(fs, c) - np.eye(9)) < 1e-13
    c = np.zeros(n, complex)
    c[coupled_index(1, 0)] = 1.0
    assert nrm(fuzzy_function_2d(fs, c) - sqrt(3 / (4 * pi)) * fs.xbar[0]) < 1e-14
    rng = np.random.default_rng(1)
    f, g = rng.normal(size=n) + 0j, rng.normal(size=n) + 1j * rng.normal(size=n)
    assert nrm(fuzzy_function_2d(fs, f + g) - fuzzy_function_2d(fs, f) - fuzzy_function_2d(fs, g)) < 1e-11
    with pytest.raises(ValueError):
        fuzzy_function_2d(fs, np.ones(4))


def test_scan_examples():
    t = sphere_convergence_scan({(0, 0): 1.0}, {(0, 0): 1.0, (1, 1): 0.3}, range(1, 5))
    assert np.all(t.column("f") < 1e-14)
    t = sphere_convergence_scan({(1, 0): 1.0}, {(0, 0): 1.0}, range(1, 7))
    assert t.is_nonincreasing("f")
    assert t.column("f")[3] <= 1e-2
    for name in ("x1", "x2", "x3"):
        assert t.is_nonincreasing(name)


def test_scan_edge_columns():
    lams = list(range(1, 8))
    t = sphere_convergence_scan({(1, 0): 1.0}, {(0, 0): 1.0}, lams)
    assert np.all(t.column("edge") >= 0.5)
    # (x^0/r) psi_Lambda^Lambda lies entirely outside H_Lambda
    expected = [sqrt(3 / (4 * pi)) / sqrt(2 * lam + 3) for lam in lams]
    assert np.allclose(t.column("edge_top"), expected, atol=1e-12)


def test_scan_product_columns():
    phi = {(0, 0): 1.0, (1, -1): 0.5, (2, 1): 0.25}
    t = sphere_convergence_scan({(1, 1): 1.0}, phi, range(2, 6), g={(1, -1): 1.0})
    for col in ("f", "fg", "f_g"):
        assert t.is_nonincreasing(col)
    assert t.column("f_g")[-1] < 1e-2


def test_scan_warns_below_bound():
    with pytest.warns(ConsistencyWarning):
        sphere_convergence_scan({(1, 0): 1.0}, {(0, 0): 1.0}, [2], k_rule="lambda2")


@pytest.mark.parametrize("lam", range(1, 5))
def test_monomials_span_full_matrix_algebra(lam):
    assert monomial_rank(sphere(lam)) == (lam + 1) ** 4


def test_madore_examples():
    fs, rep = madore_baseline(2)
    sigma = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    # spin-1/2 generators are sigma/2 up to the basis ordering (m ascending flips sigma_3)
    assert nrm(fs.x[2] + sigma[2] / sqrt(3)) < 1e-15
    assert nrm(fs.x[0] - sigma[0] / sqrt(3)) < 1e-15
    for n in range(2, 11):
        fs, rep = madore_baseline(n)
        assert rep.overall_pass
        assert rep["unit_radius"].residual <= 1e-12
    assert madore_baseline(3)[1].extra["parity_violation"] > 0.1
    with pytest.raises(ValueError):
        madore_baseline(1)
