import math

import numpy as np
import pytest

from hmh.group_models import TorusIrrep
from hmh.harness import RunConfig, lemma_block, make_rng, make_test_function, random_slice
from hmh.numerics import enumerate_indices
from hmh.special_functions import special_hermite
from hmh.spectral_identities import (ComplexGroupPoint, block_support,
                                     complexified_rep_norm, fourier_entry_by_quadrature,
                                     fourier_transform_hm, fourier_transform_slice, gutzmer_check,
                                     gutzmer_lhs, gutzmer_rhs, lemma_display_rhs, metaplectic_check,
                                     paley_wiener_check, paley_wiener_constant, paley_wiener_lhs,
                                     plancherel_check, plancherel_polarization_check,
                                     plancherel_rhs_display, poisson_apply, poisson_identity_check,
                                     poisson_lhs, poisson_multiplier, poisson_rhs, rep_apply,
                                     rho_unitarity_check, sigma_band, twisted_constant)
from hmh.twisted_transforms import BandLimitedFunction, TwistedSlice, heat_multiplier


@pytest.fixture(scope="module")
def cfg():
    return RunConfig(M_trunc=2, lambda_nodes=3).validate()


@pytest.fixture(scope="module")
def band(cfg):
    return make_test_function(cfg, "random_band", 0)


def _one_node(slc):
    return BandLimitedFunction(np.array([slc.lam]), np.array([1.0]), np.array([1.0]), (slc,))


# ---------------------------------------------------------------- Gutzmer

def test_gutzmer_trivial_point_is_l2_norm(rng):
    s = random_slice(1.0, 1, 3, rng)
    assert gutzmer_lhs(s, [0.0], [0.0]) == pytest.approx(s.norm_sq, rel=1e-12)
    assert gutzmer_rhs(s, [0.0], [0.0]) == pytest.approx(s.norm_sq, rel=1e-14)


@pytest.mark.parametrize("lam", [1.0, -1.5])
def test_gutzmer_two_sided(lam, rng):
    for _ in range(3):
        s = random_slice(lam, 1, 3, rng)
        rad, ang = 0.6 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * np.pi)
        rep = gutzmer_check(s, [rad * math.cos(ang)], [rad * math.sin(ang)])
        assert rep.passed and rep.rel_err < 1e-10


def test_gutzmer_in_two_dimensions(rng):
    s = random_slice(-0.8, 2, 2, rng)
    rep = gutzmer_check(s, [0.3, -0.1], [0.2, 0.25])
    assert rep.rel_err < 1e-10


def test_gutzmer_grows_with_imaginary_part(rng):
    s = random_slice(1.2, 1, 2, rng)
    vals = [gutzmer_lhs(s, [r], [0.5 * r]) for r in (0.0, 0.2, 0.4, 0.6)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_gutzmer_needs_k_free_slice():
    s = TwistedSlice.from_coeffs(1.0, 1, 1, {((0,), (0,), (1,)): 1.0})
    with pytest.raises(ValueError):
        gutzmer_lhs(s, [0.1], [0.1])


def test_gutzmer_single_coefficient_closed_form():
    # |phi_ab|^2 integrated over the orbit equals L_b(-2|lam| r^2) exp(|lam| r^2)
    lam, y, v = 0.9, 0.3, -0.2
    s = TwistedSlice.from_coeffs(lam, 1, 0, {((1,), (2,), ()): 1.0})
    r2 = y * y + v * v
    x = -2 * abs(lam) * r2
    L2 = 1 - 2 * x + x * x / 2
    assert gutzmer_lhs(s, [y], [v]) == pytest.approx(L2 * math.exp(abs(lam) * r2), rel=1e-10)


# ---------------------------------------------------------------- Poisson

def test_poisson_multiplier_semigroup(band):
    one = poisson_apply(poisson_apply(band, 0.4), 0.4)
    two = poisson_apply(band, 0.8)
    for a, b in zip(one.slices, two.slices):
        assert np.allclose(a.values, b.values, rtol=1e-14)
    zero = poisson_apply(band, 0.0)
    assert all(np.array_equal(a.values, b.values) for a, b in zip(zero.slices, band.slices))
    with pytest.raises(ValueError):
        poisson_apply(band, -1.0)


def test_poisson_eigenvalue_recovered_from_ratio():
    lam, a, b, m = -1.3, 1, 2, 1
    s = TwistedSlice.from_coeffs(lam, 1, 1, {((a,), (b,), (m,)): 1.0})
    q = 0.7
    ratio = poisson_multiplier(s, q)[0] / poisson_multiplier(s, 2 * q)[0]
    root = math.log(ratio) / q
    assert root == pytest.approx(math.sqrt((2 * b + 1) * abs(lam) + lam * lam + m * m), rel=1e-12)


def test_poisson_dominates_heat_multiplier_for_large_eigenvalues():
    s = TwistedSlice.from_coeffs(1.4, 1, 1, {((0,), (b,), (m,)): 1.0 for b in range(4) for m in (-1, 0, 2)})
    cas = np.sum(s.modes ** 2, axis=1)
    E = (2 * s.betas.sum(1) + 1) * 1.4 + 1.4 ** 2 + cas
    assert np.all(E >= 1)
    q = 0.6
    assert np.all(poisson_multiplier(s, q) >= np.exp(-q * E))


def test_poisson_trivial_point_is_norm(band):
    h = poisson_apply(band, 1.0)
    assert poisson_lhs(h, 0.0, [0.0], 0.0) == pytest.approx(h.norm_sq, rel=1e-10)
    assert poisson_rhs(h, 0.0, [0.0], 0.0) == pytest.approx(h.norm_sq, rel=1e-12)


def test_poisson_single_coefficient_equality(cfg):
    f = make_test_function(cfg, "single_coeff", 3)
    rep = poisson_identity_check(f, 1.0, 0.3, [0.2], 0.1)
    assert rep.passed and rep.rel_err < 1e-8


def test_poisson_random_band_and_scaling(band):
    rep = poisson_identity_check(band, 1.0, 0.25, [-0.25], -0.1)
    assert rep.rel_err < 1e-8
    rep2 = poisson_identity_check(band.scaled(2 - 1j), 1.0, 0.25, [-0.25], -0.1)
    assert rep2.lhs.real == pytest.approx(5 * rep.lhs.real, rel=1e-10)


def test_poisson_reports_signed_lambda_variant(band):
    rep = poisson_identity_check(band, 1.0, 0.3, [0.1], 0.0)
    # the series with signed lambda in L(-2 lam r^2) e^{lam r^2} does not balance
    assert abs(rep.params["ratio_literal_lambda"] - 1) > 1e-3
    assert rep.params["ratio_dim_pma"] == pytest.approx(1.0, rel=1e-8)


def test_poisson_needs_n_one():
    s = TwistedSlice.from_coeffs(1.0, 2, 2, {((0, 0), (0, 0), (0, 0)): 1.0})
    with pytest.raises(ValueError):
        poisson_lhs(_one_node(s), 0.1, [0.0, 0.0], 0.0)


# ---------------------------------------------------------------- Fourier transform

def test_fourier_of_zero_is_zero():
    z = TwistedSlice.zero(1.0, 1, 1)
    assert fourier_transform_slice(z, TorusIrrep((0,))).entries == {}
    assert sigma_band(z) == []


@pytest.mark.parametrize("lam", [1.5, -0.8])
def test_single_coefficient_has_one_entry(lam):
    a, b, m, c = (2,), (1,), (-1,), 0.6 - 0.3j
    s = TwistedSlice.from_coeffs(lam, 1, 1, {(a, b, m): c})
    band = sigma_band(s)
    assert len(band) == 1
    fm = fourier_transform_slice(s, band[0])
    assert list(fm.entries) == [(a, b)]
    assert abs(fm.entries[(a, b)]) == pytest.approx(twisted_constant(lam, 1) * abs(c), rel=1e-14)
    quad = fourier_entry_by_quadrature(s, band[0], a, b)
    assert quad == pytest.approx(fm.entries[(a, b)], rel=1e-10)
    # every other weight gives a vanishing integral
    other = fourier_entry_by_quadrature(s, TorusIrrep((band[0][0] + 1,)), a, b)
    assert abs(other) < 1e-12


def test_fourier_entries_by_quadrature_random(band):
    slc = band.slices[1]
    for sig in sigma_band(slc)[:3]:
        fm = fourier_transform_slice(slc, sig)
        for key in list(fm.entries)[:3]:
            assert fourier_entry_by_quadrature(slc, sig, *key) == pytest.approx(fm.entries[key], rel=1e-9)


def test_fourier_is_linear(cfg):
    f = make_test_function(cfg, "random_band", 1)
    g = make_test_function(cfg, "random_band", 2)
    h = f + g.scaled(2j)
    for s in sigma_band(h.slices[0]):
        A = fourier_transform_hm(f, 0, s).entries
        B = fourier_transform_hm(g, 0, s).entries
        C = fourier_transform_hm(h, 0, s).entries
        for k, v in C.items():
            assert v == pytest.approx(A.get(k, 0) + 2j * B.get(k, 0), abs=1e-13)


def test_fourier_requires_full_torus():
    s = TwistedSlice.from_coeffs(1.0, 2, 1, {((0, 0), (0, 0), (0,)): 1.0})
    with pytest.raises(ValueError):
        sigma_band(s)


def test_plancherel_identity(cfg):
    for i in range(3):
        rep = plancherel_check(make_test_function(cfg, "random_band", i))
        assert rep.passed and rep.rel_err < 1e-12
        assert rep.params["pinned_constant"] == pytest.approx(1 / (2 * math.pi))


def test_plancherel_polarization(cfg):
    f = make_test_function(cfg, "random_band", 4)
    g = make_test_function(cfg, "lemma_block", 1)
    rep = plancherel_polarization_check(f, g)
    assert rep.passed
    assert rep.rhs == pytest.approx(rep.params["inner_direct"], abs=1e-12)


def test_all_fourier_mass_in_band(band):
    for slc in band.slices:
        hs = sum(fourier_transform_slice(slc, s).hs_norm_sq for s in sigma_band(slc))
        assert hs == pytest.approx(twisted_constant(slc.lam, 1) ** 2 * slc.norm_sq, rel=1e-13)
    s0 = band.slices[0]
    outside = max(w[0] for w in sigma_band(s0)) + 1
    assert fourier_transform_slice(s0, (outside,)).entries == {}


def test_checks_invariant_under_character_twist_of_mu(band, monkeypatch, rng):
    # mu -> chi_{m0} mu: phase products are unchanged and the Fourier transform
    # at sigma - m0 takes the old values at sigma, so the sigma-sums agree
    import hmh.spectral_identities as si
    m0 = 2
    plain_phase = si.metaplectic_phase
    slc = band.slices[1]
    sig = sigma_band(slc)[0]
    keys = list(fourier_transform_slice(slc, sig).entries)[:2]
    before = [fourier_entry_by_quadrature(slc, sig, *k) for k in keys]
    monkeypatch.setattr(si, "metaplectic_phase", lambda th, a, lam, H=None:
                        plain_phase(th, a, lam, H) * np.exp(1j * m0 * np.sum(th)))
    assert si.metaplectic_check(1.0, 1, [0.3], [-0.5], [1.1]).passed
    after = [fourier_entry_by_quadrature(slc, (sig[0] - m0,), *k) for k in keys]
    assert after == pytest.approx(before, rel=1e-10)


# ---------------------------------------------------------------- complexified representations

def test_rho_unitary_at_real_points(band, rng):
    slc = band.slices[2]
    for s in sigma_band(slc):
        fm = fourier_transform_slice(slc, s)
        rep = rho_unitarity_check(fm, 1, rng.uniform(-1, 1, 1), rng.uniform(-1, 1, 1), 0.4,
                                  rng.uniform(0, 6, 1))
        assert rep.rel_err < 1e-10


def test_rep_norm_real_point_equals_plancherel(band):
    p = ComplexGroupPoint([0.4], [-0.3], 1.2, [0.5], [0.0])
    val = complexified_rep_norm(band, p)
    assert val == pytest.approx((2 * math.pi) ** -1 * plancherel_rhs_display(band), rel=1e-10)


def test_rep_norm_central_scaling():
    lam, s = 1.3, 0.2
    slc = TwistedSlice.from_coeffs(lam, 1, 1, {((1,), (0,), (1,)): 1.0})
    f = _one_node(slc)
    a = complexified_rep_norm(f, ComplexGroupPoint([0.1], [0.2], 0.5, [0.3], [0.0]))
    b = complexified_rep_norm(f, ComplexGroupPoint([0.1], [0.2], 0.5 + 1j * s, [0.3], [0.0]))
    assert b / a == pytest.approx(math.exp(-2 * lam * s), rel=1e-12)


def test_rep_norm_overflow_guard():
    slc = TwistedSlice.from_coeffs(1.0, 1, 1, {((0,), (0,), (1,)): 1.0})
    with pytest.raises(OverflowError):
        complexified_rep_norm(_one_node(slc), ComplexGroupPoint([0.0], [0.0], 800j, [0.0], [0.0]))


def test_rep_apply_matches_direct_matrix_elements():
    lam = -1.1
    slc = TwistedSlice.from_coeffs(lam, 1, 1, {((1,), (2,), (0,)): 0.5})
    sig = sigma_band(slc)[0]
    fm = fourier_transform_slice(slc, sig)
    p = ComplexGroupPoint([0.2 + 0.1j], [-0.3j], 0.2 + 0.05j, [0.4], [0.15])
    R = rep_apply(fm, 1, p, 10)
    ang = 0.4 + 0.15j
    (row, col), val = next(iter(fm.entries.items()))
    betas = enumerate_indices(1, 10)
    for i, beta in enumerate(betas[:4]):
        C = twisted_constant(lam, 1)
        ref = (np.exp(1j * lam * p.tau) * np.exp(1j * sig[0] * ang)
               * C * special_hermite(row, beta, lam, p.z, p.w) * np.exp(-1j * row[0] * ang) * val)
        assert R[i, 0] == pytest.approx(ref, rel=1e-12)


def test_paley_wiener_identity_point(band):
    p = ComplexGroupPoint.identity(1, 1)
    rep = paley_wiener_check(band, p)
    assert rep.passed
    assert rep.lhs.real == pytest.approx(band.norm_sq, rel=1e-10)
    assert paley_wiener_constant(1) == 1.0


def test_paley_wiener_lemma_block(cfg):
    f = lemma_block(cfg, (1,), (1,), make_rng(7, 1))
    assert len(block_support(f.slices[0])) == 1
    p = ComplexGroupPoint([0.2j], [0.0], 0.3 + 0.1j, [0.7], [0.25])
    rep = paley_wiener_check(f, p)
    assert rep.rel_err < 1e-10
    assert lemma_display_rhs(f, p) == pytest.approx(rep.rhs.real, rel=1e-10)


def test_lemma_display_rejects_mixed_blocks(band):
    with pytest.raises(ValueError):
        lemma_display_rhs(band, ComplexGroupPoint.identity(1, 1))


def test_paley_wiener_random_band_complex_point(band):
    p = ComplexGroupPoint([0.1 + 0.2j], [-0.2 - 0.15j], 0.4 - 0.2j, [1.3], [-0.2])
    assert paley_wiener_check(band, p).rel_err < 1e-10


def test_block_orthogonality(cfg):
    p = ComplexGroupPoint([0.2j], [0.0], 0.3 + 0.1j, [0.7], [0.25])
    f1 = lemma_block(cfg, (1,), (1,), make_rng(7, 2))
    f2 = lemma_block(cfg, (0,), (1,), make_rng(7, 3))
    f3 = lemma_block(cfg, (1,), (0,), make_rng(7, 4))
    L = lambda f, **kw: paley_wiener_lhs(f, p, **kw)
    # different K-weights pi are orthogonal at every g
    assert L(f1 + f2) == pytest.approx(L(f1) + L(f2), rel=1e-10)
    # equal pi, different nu: orthogonal once the torus part of g is averaged
    assert L(f1 + f3, average_k=True) == pytest.approx(L(f1, average_k=True) + L(f3, average_k=True),
                                                       rel=1e-10)
    assert abs(L(f1 + f3) - L(f1) - L(f3)) > 1e-4 * (L(f1) + L(f3))


def test_k_average_matches_averaged_rep_norm(band):
    base = ComplexGroupPoint([0.2 + 0.15j], [-0.1 - 0.2j], 0.3 + 0.1j, [0.0], [0.25])
    ths = 2 * np.pi * np.arange(9) / 9
    avg = np.mean([complexified_rep_norm(band, ComplexGroupPoint(base.z, base.w, base.tau, [t], base.H))
                   for t in ths])
    assert paley_wiener_lhs(band, base, average_k=True) == pytest.approx(avg, rel=1e-10)


# ---------------------------------------------------------------- metaplectic

@pytest.mark.parametrize("lam", [1.0, -2.0])
@pytest.mark.parametrize("n", [1, 2])
def test_metaplectic_intertwining(lam, n, rng):
    rep = metaplectic_check(lam, n, rng.uniform(-1, 1, n), rng.uniform(-1, 1, n), rng.uniform(0, 6, n))
    assert rep.passed and rep.lhs.real < 1e-12


def test_metaplectic_sign_is_forced(monkeypatch, rng):
    import hmh.spectral_identities as si
    flipped = lambda th, a, lam, H=None: np.exp(-1j * math.copysign(1, lam) * (np.asarray(th) @ np.asarray(a)))
    monkeypatch.setattr(si, "metaplectic_phase", flipped)
    rep = si.metaplectic_check(1.0, 1, [0.4], [0.2], [0.9])
    assert not rep.passed and rep.lhs.real > 1e-2


def test_heat_multiplier_helper():
    assert heat_multiplier(2.0, 1, 1, 0.5) == pytest.approx(math.exp(-3.0))
