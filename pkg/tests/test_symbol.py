import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from blockfd.grid import build_grid
from blockfd.operators import SchemeParams, assemble_bfd, to_dense
from blockfd.symbol import (ModePair, asymptotic_check, build_mode_vectors, cos_theta, decompose,
                            decompose_all, eigen_symbols, expected_series, low_band, mode_pair,
                            mode_pairs, mu_sigma, reduced_residual, stability_scan)

coef = st.floats(-1, 1, allow_nan=False)


@pytest.mark.parametrize("N", [8, 9, 12, 13])
def test_pairs_cover_all_modes_once(N):
    idx = [m for p in mode_pairs(N) for m in (p.omega, p.nu)]
    assert sorted(np.mod(idx, 2 * N)) == list(range(2 * N))


def test_mode_pair_examples():
    assert mode_pair(3, 8).nu == -5
    assert mode_pair(-3, 8).nu == 5
    assert mode_pair(0, 8).nu == 8
    assert np.isclose(mode_pair(2, 8).theta_h, np.pi / 2)
    assert list(low_band(8)) == [-3, -2, -1, 0, 1, 2, 3, 4]


def _pair_matrix(theta, h, params, N=64):
    """2x2 restriction of the dense operator to span{e^{i omega x}, e^{i nu x}}."""
    omega = int(round(theta * N / (2 * np.pi)))
    g = build_grid(N, N * h)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        Q = to_dense(assemble_bfd(g, params))
    p = mode_pair(omega, N)
    V = np.stack([np.exp(1j * g.wavenumber(p.omega) * g.nodes),
                  np.exp(1j * g.wavenumber(p.nu) * g.nodes)], 1)
    return np.linalg.lstsq(V, Q @ V, rcond=None)[0], p


@given(coef, coef, st.integers(-31, 32))
@settings(max_examples=40, deadline=None)
def test_closed_form_eigenvalues_vs_pair_matrix(c1, c2, omega):
    params = SchemeParams(c1, c2)
    h = 1 / 64
    M, p = _pair_matrix(2 * np.pi * omega / 64, h, params)
    ev = np.linalg.eigvals(M)
    d = decompose(p, h, params)
    for q in d.eigenvalues:
        assert np.min(np.abs(ev - q)) <= 1e-9 * (1 + np.abs(ev).max())


@given(coef, coef, st.floats(-np.pi, np.pi).filter(lambda t: abs(t) > 1e-3))
@settings(max_examples=60, deadline=None)
def test_reduced_system_residual(c1, c2, theta):
    d = decompose(ModePair(1 if theta > 0 else -1, 0, theta), 0.5, SchemeParams(c1, c2))
    assert reduced_residual(d) < 1e-12


def test_zero_frequency_pair():
    d = decompose(mode_pair(0, 10), 0.1, SchemeParams(1.0, -0.5))
    assert d.Qhat1 == 0
    assert np.isclose(d.Qhat2, 8 * (-0.5 - 1.0) / (3 * 0.1))
    assert d.cos_theta == 0.0


def test_unit_norm_eigenvectors():
    for d in decompose_all(12, 1 / 12, SchemeParams(1.0, -0.5)):
        assert np.isclose(abs(d.alpha1) ** 2 + abs(d.beta1) ** 2, 1)
        assert np.isclose(abs(d.alpha2) ** 2 + abs(d.beta2) ** 2, 1)
        assert np.isclose(cos_theta(d), d.cos_theta)


def test_c_zero_decouples():
    for d in decompose_all(16, 1 / 16, SchemeParams(0.0, 0.0)):
        assert d.cos_theta < 1e-12
        assert abs(d.beta1) < 1e-12 and abs(d.alpha2) < 1e-12


def test_physical_branch_tends_to_minus_i_omega():
    h = 1 / 400
    for params in [SchemeParams(1, -0.5), SchemeParams(0.5, 0.5), SchemeParams(1, 1)]:
        d = decompose(mode_pair(1, 400), h, params)
        assert abs(d.Qhat1 + 2j * np.pi) < 1e-6
        assert abs(d.Qhat1 + 2j * np.pi) < abs(d.Qhat2 + 2j * np.pi)


def test_alpha2_is_order_h():
    # c1 > c2: the physical mode carries an O(h omega) alias component
    for N in (100, 200, 400):
        d = decompose(mode_pair(1, N), 1 / N, SchemeParams(1.0, -0.5))
        assert abs(abs(d.alpha2) - 2 * np.pi / N / 4) < 1e-3 * (2 * np.pi / N)


@pytest.mark.parametrize("c1,c2", [(0, 0), (1, -0.5), (0.5, 0.5), (1, 1)])
def test_mode_vectors_are_eigenvectors(c1, c2):
    g = build_grid(9, 1.0)
    params = SchemeParams(c1, c2)
    for mode, d in zip(mode_pairs(9), decompose_all(9, g.h, params)):
        build_mode_vectors(g, mode, d, check=True)


def test_mode_vector_check_catches_swapped_labels():
    g = build_grid(8, 1.0)
    mode = mode_pair(2, 8)
    d = decompose(mode, g.h, SchemeParams(1.0, -0.5))
    from dataclasses import replace
    bad = replace(d, Qhat1=d.Qhat2, Qhat2=d.Qhat1)
    with pytest.raises(RuntimeError):
        build_mode_vectors(g, mode, bad)


def test_mu_sigma_c_zero_is_central_symbol():
    t = np.linspace(-3, 3, 11)
    mu1, mu2, s1, s2 = mu_sigma(t, 1.0, SchemeParams(0, 0))
    # five-point central stencil on spacing 1/2 applied to e^{i theta x}
    k = t
    central = -1j * (8 * np.sin(k / 2) - np.sin(k)) / 3
    assert np.allclose(mu1, central) and np.allclose(mu2, central)


def test_eigen_symbols_trace_matches_pair_matrix():
    params = SchemeParams(0.7, -0.2)
    M, p = _pair_matrix(2 * np.pi * 5 / 64, 1 / 64, params)
    q1, q2, _, _ = eigen_symbols(p.theta_h, 1 / 64, params)
    assert np.isclose(q1 + q2, np.trace(M))
    assert np.isclose(q1 * q2, np.linalg.det(M))


@pytest.mark.parametrize("c1,c2,cos_max", [(0, 0, 1e-12), (1, -0.5, 0.4), (0.5, 0.5, 0.4), (1, 1, 0.4)])
def test_stability_scan_stable_examples(c1, c2, cos_max):
    r = stability_scan(SchemeParams(c1, c2))
    assert r.stable and r.max_cos_theta < cos_max


def test_stability_scan_unstable():
    r = stability_scan(SchemeParams(0.0, 0.5))
    assert not r.stable and r.max_re_Q2 == pytest.approx(8 * 0.5 / 3)


@given(coef, coef)
@settings(max_examples=40, deadline=None)
def test_stability_characterization(c1, c2):
    # observed region: c1 >= c2 together with c1 + c2 >= 0 or c1 == c2
    assume(abs(c1 - c2) > 1e-3 and abs(c1 + c2) > 1e-2)
    r = stability_scan(SchemeParams(c1, c2), h=1.0)
    assert r.stable == (c1 > c2 and c1 + c2 > 0)


def test_low_mode_growth_matches_series():
    # c1 > c2 with c1 + c2 < 0: Re Qhat1 h ~ -(c1 + c2) theta^6 / (384 (c1 - c2))
    params = SchemeParams(0.5, -1.0)
    theta = 0.05
    d = decompose(ModePair(1, 0, theta), 1.0, params)
    want = -(params.c1 + params.c2) * theta**6 / (384 * (params.c1 - params.c2))
    assert d.Qhat1.real > 0
    assert d.Qhat1.real == pytest.approx(want, rel=0.02)


@pytest.mark.parametrize("params", [SchemeParams(1, -0.5), SchemeParams(0.5, -0.5), SchemeParams(1, 1)])
def test_asymptotic_leading_terms(params):
    fit = asymptotic_check(params)
    for k, want in fit.expected.items():
        if want:
            assert fit.relative_error(k) < 1e-6
        else:
            assert abs(fit.coefficients[k]) < 1e-6 * abs(fit.expected[0])
    assert fit.leading_power == pytest.approx(4.0, abs=0.05)


def test_sixth_order_coefficient():
    fit = asymptotic_check(SchemeParams(0.5, 0.5))
    # -i (2c^2 - 6c + 1) / (4032 (c + 2)^2) at c = 1/2 is i/16800
    assert fit.coefficients[2] == pytest.approx(1j / 16800, rel=1e-6)
    assert fit.expected[2] == pytest.approx(1j / 16800)


def test_expected_series_rejects_unstable():
    with pytest.raises(ValueError):
        expected_series(SchemeParams(0, 1))
