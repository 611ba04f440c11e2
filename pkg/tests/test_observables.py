import warnings

import numpy as np
import pytest

from sphoton import (
    FockSpace,
    FockState,
    InputError,
    SpatialPoint,
    UndefinedQError,
    apply_creator,
    build_effective_transform,
    coherent_state,
    composite_annihilator,
    expectation,
    fluctuation_matrix,
    mandel_q,
    mode_matrix,
    occupation_projector,
    polarization_matrices,
    stokes_means,
    stokes_operators,
    stokes_variance_report,
    vacuum_state,
    variance,
)

POINT = SpatialPoint(2.1, 0.95, 1.4)


def _transform(kr=2.1, theta=0.95, phi=1.4, parity="electric"):
    return build_effective_transform(mode_matrix(1, parity, SpatialPoint(kr, theta, phi)))


def _effective_coherent(space, T, beta):
    """Coherent state whose effective-mode amplitudes are exactly beta.

    Amplitudes stay small enough for truncation tails to be negligible, so
    the heuristic tail warning is silenced here.
    """
    alpha = T.T.conj().T @ np.asarray(beta, dtype=complex)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return coherent_state(space, alpha), alpha


def _random_beta(rng, scale):
    """Random effective amplitudes with |beta| bounded by scale."""
    mags = rng.uniform(0.3 * scale, scale, size=3)
    phases = np.exp(2j * np.pi * rng.uniform(size=3))
    return mags * phases


def _random_protected_state(space, rng, zero_radial=False):
    occ = np.array(
        np.unravel_index(np.arange(space.dim), space.shape)
    ).T
    mask = occ.max(axis=1) <= space.n_max - 2
    amp = np.zeros(space.dim, dtype=complex)
    amp[mask] = rng.normal(size=mask.sum()) + 1j * rng.normal(size=mask.sum())
    return FockState(space, amp)


# ---------------------------------------------------------------------------
# Mandel Q
# ---------------------------------------------------------------------------

def test_q_vanishes_for_coherent_states():
    space = FockSpace(j=1, n_max=10)
    T = _transform()
    state, _ = _effective_coherent(space, T, [0.25, 0.2j, -0.22])
    for mu in (1, 0, -1):
        assert abs(mandel_q(state, T, mu)) < 1e-10


def test_q_minus_one_for_single_effective_photon():
    space = FockSpace(j=1, n_max=5)
    T = _transform()
    for mu in (1, 0, -1):
        amp = apply_creator(space, vacuum_state(space).amplitudes, T.row(mu))
        state = FockState(space, amp)
        assert mandel_q(state, T, mu) == pytest.approx(-1.0, abs=1e-12)


def test_q_undefined_on_vacuum():
    space = FockSpace(j=1, n_max=4)
    with pytest.raises(UndefinedQError):
        mandel_q(vacuum_state(space), _transform(), 1)


def test_q_invariant_under_gamma_and_global_phase():
    space = FockSpace(j=1, n_max=8)
    t1 = build_effective_transform(mode_matrix(1, "electric", POINT, gamma=1.0))
    t2 = build_effective_transform(mode_matrix(1, "electric", POINT, gamma=-2.7j))
    state, _ = _effective_coherent(space, t1, [0.3, 0.1, 0.2j])
    rotated = FockState(space, np.exp(0.73j) * state.amplitudes)
    for mu in (1, 0, -1):
        q1 = mandel_q(state, t1, mu)
        assert mandel_q(state, t2, mu) == pytest.approx(q1, abs=1e-12)
        assert mandel_q(rotated, t1, mu) == pytest.approx(q1, abs=1e-12)


def test_q_space_mismatch_rejected():
    space = FockSpace(j=2, n_max=3)
    with pytest.raises(InputError):
        mandel_q(vacuum_state(space), _transform(), 1)


# ---------------------------------------------------------------------------
# polarization matrices
# ---------------------------------------------------------------------------

def test_vacuum_polarization_matrices():
    space = FockSpace(j=1, n_max=4)
    V = mode_matrix(1, "electric", POINT)
    pol = polarization_matrices(vacuum_state(space), V)
    g = fluctuation_matrix(V).entries
    assert np.abs(pol.normal).max() < 1e-14 * np.abs(g).max()
    assert np.abs(pol.fluctuation_deviation() - g).max() < 1e-13 * np.abs(g).max()


def test_coherent_normal_matrix_closed_form():
    space = FockSpace(j=1, n_max=10)
    V = mode_matrix(1, "electric", POINT)
    alpha = np.array([0.3, -0.2j, 0.25 + 0.1j])
    state = coherent_state(space, alpha)
    pol = polarization_matrices(state, V)
    f = V.entries @ alpha
    expected = np.conj(f)[:, None] * f[None, :]  # [mu', mu]
    assert np.abs(pol.normal - expected).max() < 1e-9


def test_deviation_identity_for_random_states():
    rng = np.random.default_rng(21)
    space = FockSpace(j=1, n_max=5)
    V = mode_matrix(1, "magnetic", POINT)
    g = fluctuation_matrix(V).entries
    for _ in range(5):
        state = _random_protected_state(space, rng)
        pol = polarization_matrices(state, V)
        assert np.abs(pol.fluctuation_deviation() - g).max() < 1e-10 * max(
            np.abs(g).max(), 1.0
        )


def test_polarization_hermiticity_enforced():
    space = FockSpace(j=1, n_max=5)
    V = mode_matrix(1, "electric", POINT)
    pol = polarization_matrices(vacuum_state(space), V)
    for mat in (pol.normal, pol.antinormal):
        assert np.abs(mat - mat.conj().T).max() <= 1e-12 * max(np.abs(mat).max(), 1e-30)
    # normal matrix is PSD
    assert np.linalg.eigvalsh(pol.antinormal).min() > -1e-12


# ---------------------------------------------------------------------------
# Stokes operators
# ---------------------------------------------------------------------------

def test_stokes_hermitian_and_commuting():
    space = FockSpace(j=1, n_max=5)
    T = _transform()
    s1, s2 = stokes_operators(space, T)
    assert np.abs(s1.matrix - s1.matrix.conj().T).max() < 1e-14 * np.abs(s1.matrix).max()
    assert np.abs(s2.matrix - s2.matrix.conj().T).max() < 1e-14 * np.abs(s2.matrix).max()
    proj = occupation_projector(space, space.n_max - 2).matrix
    comm = (s1.matrix @ s2.matrix - s2.matrix @ s1.matrix) @ proj
    assert np.abs(comm).max() < 1e-10


def test_stokes_vacuum_averages_vanish():
    space = FockSpace(j=1, n_max=4)
    T = _transform()
    s1, s2 = stokes_operators(space, T)
    vac = vacuum_state(space)
    assert abs(expectation(s1, vac)) < 1e-14
    assert abs(expectation(s2, vac)) < 1e-14
    m1, m2 = stokes_means(vac, T)
    assert abs(m1) < 1e-14 and abs(m2) < 1e-14


def test_stokes_means_match_dense_operators():
    rng = np.random.default_rng(3)
    space = FockSpace(j=1, n_max=5)
    T = _transform()
    s1, s2 = stokes_operators(space, T)
    state = _random_protected_state(space, rng)
    m1, m2 = stokes_means(state, T)
    assert m1 == pytest.approx(expectation(s1, state).real, abs=1e-11)
    assert m2 == pytest.approx(expectation(s2, state).real, abs=1e-11)


def test_far_zone_averages_reduce_to_transverse_cross_term():
    # with the radial effective mode in vacuum:
    # <S1> = 2 Re <a+_- a_+>, <S2> = 2 Im <a+_- a_+>
    rng = np.random.default_rng(4)
    space = FockSpace(j=1, n_max=10)
    T = _transform(kr=300.0)
    a_p = composite_annihilator(space, T.row(1, allow_suppressed=True)).matrix
    a_m = composite_annihilator(space, T.row(-1, allow_suppressed=True)).matrix
    cross = a_m.conj().T @ a_p
    for _ in range(5):
        beta = _random_beta(rng, 0.35)
        beta[1] = 0.0  # radial effective mode in vacuum
        state, _ = _effective_coherent(space, T, beta)
        m1, m2 = stokes_means(state, T)
        x = np.vdot(state.amplitudes, cross @ state.amplitudes)
        assert m1 == pytest.approx(2.0 * x.real, abs=1e-10)
        assert m2 == pytest.approx(2.0 * x.imag, abs=1e-10)


# ---------------------------------------------------------------------------
# Stokes variance report
# ---------------------------------------------------------------------------

def test_vacuum_report_all_zero():
    space = FockSpace(j=1, n_max=4)
    rep = stokes_variance_report(vacuum_state(space), _transform())
    for name in (
        "mean_s1",
        "mean_s2",
        "var_s1_oracle",
        "var_s1_paper_formula",
        "var_s1_plane_wave",
        "extra_terms",
        "var_s1_moment_path",
        "mu0_intensity",
    ):
        assert abs(getattr(rep, name)) < 1e-14
    assert rep.mu0_vacuum


def test_report_decomposition_identity():
    rng = np.random.default_rng(5)
    space = FockSpace(j=1, n_max=5)
    T = _transform()
    for _ in range(4):
        state = _random_protected_state(space, rng)
        rep = stokes_variance_report(state, T)
        assert rep.var_s1_paper_formula == pytest.approx(
            rep.var_s1_plane_wave + rep.extra_terms, abs=1e-10
        )


def test_report_self_consistency_two_variance_paths():
    rng = np.random.default_rng(6)
    space = FockSpace(j=1, n_max=6)
    T = _transform()
    for _ in range(4):
        state = _random_protected_state(space, rng)
        rep = stokes_variance_report(state, T)
        scale = 1.0 + abs(rep.var_s1_oracle)
        assert abs(rep.var_s1_oracle - rep.var_s1_moment_path) < 1e-10 * scale


def test_closed_form_exact_for_radial_vacuum_states():
    space = FockSpace(j=1, n_max=10)
    T = _transform()
    rng = np.random.default_rng(7)
    for _ in range(4):
        beta = _random_beta(rng, 0.35)
        beta[1] = 0.0
        state, _ = _effective_coherent(space, T, beta)
        rep = stokes_variance_report(state, T)
        assert rep.mu0_vacuum
        assert abs(rep.var_s1_paper_formula - rep.var_s1_oracle) < 1e-9
        assert rep.var_s1_oracle == pytest.approx(
            variance(stokes_operators(space, T)[0], state), abs=1e-10
        )


def test_closed_form_deviates_when_radial_mode_excited():
    space = FockSpace(j=1, n_max=8)
    T = _transform()
    state, _ = _effective_coherent(space, T, [0.4, 0.5, 0.3])
    rep = stokes_variance_report(state, T)
    assert not rep.mu0_vacuum
    # discrepancy is reported as data, not raised
    assert abs(rep.var_s1_paper_formula - rep.var_s1_oracle) > 1e-3


def test_extra_terms_nonnegative_under_cauchy_schwarz_condition():
    rng = np.random.default_rng(8)
    space = FockSpace(j=1, n_max=6)
    T = _transform()
    checked = 0
    for _ in range(10):
        state = _random_protected_state(space, rng)
        rep = stokes_variance_report(state, T)
        # recompute the premise directly: n_+ + n_- >= 2 |<a+_+ a_->|
        a_p = composite_annihilator(space, T.row(1, allow_suppressed=True)).matrix
        a_m = composite_annihilator(space, T.row(-1, allow_suppressed=True)).matrix
        n_sum = (
            np.vdot(a_p @ state.amplitudes, a_p @ state.amplitudes).real
            + np.vdot(a_m @ state.amplitudes, a_m @ state.amplitudes).real
        )
        x = abs(np.vdot(state.amplitudes, a_p.conj().T @ a_m @ state.amplitudes))
        if n_sum >= 2.0 * x:
            checked += 1
            assert rep.extra_terms >= -1e-12
    assert checked > 0
