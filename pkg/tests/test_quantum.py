import numpy as np
import pytest

from spinchaos import quantum as q

from oracles import (
    dense_floquet,
    dense_rotation,
    jx_matrix,
    jz_matrix,
    wigner_d_formula,
    wigner_d_mp,
)

RNG = np.random.default_rng(20260808)


def random_state(s, l, rng=RNG):
    n = q.dim_of(s) * q.dim_of(l)
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    amps /= np.linalg.norm(amps)
    return q.QuantumState(q.SpinQuantum(s), q.SpinQuantum(l), amps)


# ---------------------------------------------------------------------------
# Wigner d-matrices


def test_wigner_d_spin_half_closed_form():
    for theta in (0.0, 0.3, np.pi / 2, 2.0, np.pi):
        d = q.wigner_d(0.5, theta)
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        assert np.allclose(d, [[c, -s], [s, c]], atol=1e-15)


def test_wigner_d_zero_angle_is_identity():
    for j in (0.5, 1, 7.5, 40):
        assert np.max(np.abs(q.wigner_d(j, 0.0) - np.eye(q.dim_of(j)))) < 1e-14


def test_wigner_d_matches_formula_small_j():
    # every half-integer j up to 25, three angles
    for twoj in range(1, 51):
        j = twoj / 2.0
        for theta in (0.1, np.pi / 2, 2.9):
            diff = np.max(np.abs(q.wigner_d(j, theta) - wigner_d_formula(j, theta)))
            assert diff < 1e-10, f"j={j} theta={theta}: {diff}"


def test_wigner_d_j40_matches_high_precision_formula():
    diff = np.max(np.abs(q.wigner_d(40, np.pi / 2) - wigner_d_mp(40, np.pi / 2)))
    assert diff < 1e-10


@pytest.mark.parametrize("j", [0.5, 2, 11, 55.5, 154, 220])
def test_wigner_d_orthogonality_large_j(j):
    for theta in (0.3, np.pi / 2, 2.8):
        d = q.wigner_d(j, theta)
        defect = np.max(np.abs(d @ d.T - np.eye(d.shape[0])))
        assert defect < 1e-10, f"j={j} theta={theta}: {defect}"


def test_wigner_d_rejects_invalid_j():
    with pytest.raises(ValueError):
        q.wigner_d(1.3, 0.5)
    with pytest.raises(ValueError):
        q.wigner_d(-1, 0.5)


# ---------------------------------------------------------------------------
# rotation matrices and coherent states


def test_rotation_matrix_phi_zero_equals_wigner_d():
    assert np.allclose(q.rotation_matrix(3, 1.1, 0.0), q.wigner_d(3, 1.1), atol=1e-15)


def test_rotation_matrix_spin_half_example():
    r = q.rotation_matrix(0.5, np.pi / 2, np.pi / 2)
    h = np.sqrt(2) / 2
    expected = np.array(
        [
            [np.exp(-1j * np.pi / 4) * h, -np.exp(-1j * np.pi / 4) * h],
            [np.exp(1j * np.pi / 4) * h, np.exp(1j * np.pi / 4) * h],
        ]
    )
    assert np.max(np.abs(r - expected)) < 1e-15


def test_rotation_matrix_unitary_and_matches_dense():
    for j, theta, phi in [(1, 0.7, 1.9), (4.5, 2.2, 0.4), (12, 1.0, 5.0)]:
        r = q.rotation_matrix(j, theta, phi)
        assert np.max(np.abs(r @ r.conj().T - np.eye(r.shape[0]))) < 1e-10
        assert np.max(np.abs(r - dense_rotation(j, theta, phi))) < 1e-10


def test_rotation_composition_about_same_axis():
    for j, theta in [(2, 0.6), (15, 1.2)]:
        r1 = q.rotation_matrix(j, theta, 0.0)
        r2 = q.rotation_matrix(j, 2 * theta, 0.0)
        assert np.max(np.abs(r1 @ r1 - r2)) < 1e-10


def test_coherent_state_pole_is_basis_vector():
    vec = q.coherent_state(7, 0.0, 0.0)
    expected = np.zeros(15)
    expected[0] = 1.0
    assert np.max(np.abs(vec - expected)) < 1e-14


def test_coherent_state_first_moments():
    # <J_z> = j cos(theta), <J_+> = j e^{i phi} sin(theta)
    j, theta, phi = 10, np.pi / 2, 0.0
    vec = q.coherent_state(j, theta, phi)
    assert abs(q.expect_jz(vec, j)) < 1e-10
    assert abs(q.expect_ladder(vec, j).real - 10.0) < 1e-10

    j, theta, phi = 154, np.deg2rad(45.0), np.deg2rad(70.0)
    vec = q.coherent_state(j, theta, phi)
    assert abs(q.expect_jz(vec, j) - 154 * np.cos(theta)) < 1e-8
    jplus = q.expect_ladder(vec, j)
    assert abs(jplus - 154 * np.sin(theta) * np.exp(1j * phi)) < 1e-8


def test_coherent_state_variance_identities():
    for j in (0.5, 3, 22, 154):
        for theta, phi in [(0.0, 0.0), (1.1, 2.0)]:
            vec = q.coherent_state(j, theta, phi)
            jz = q.expect_jz(vec, j)
            jplus = q.expect_ladder(vec, j)
            mean_sq = jz**2 + abs(jplus) ** 2
            var_norm = (j * (j + 1) - mean_sq) / (j * (j + 1))
            assert abs(var_norm - 1.0 / (j + 1)) < 1e-10
    # <J_x^2> = j/2 for the polar state
    for j in (0.5, 4, 37):
        vec = q.coherent_state(j, 0.0, 0.0)
        assert abs(q.expect_jx2(vec, j) - j / 2.0) < 1e-10


# ---------------------------------------------------------------------------
# Floquet operator


def test_floquet_phase_arrays_unimodular():
    f = q.build_floquet(5, 6, 1.7, 0.3)
    assert np.max(np.abs(np.abs(f.interaction_phases) - 1.0)) < 1e-14
    assert np.max(np.abs(np.abs(f.free_phases) - 1.0)) < 1e-14
    for rot, dim in ((f.rot_s, 11), (f.rot_l, 13)):
        assert np.max(np.abs(rot @ rot.T - np.eye(dim))) < 1e-10


def test_floquet_no_interaction_is_pure_z_rotation():
    s, l, a = 1.5, 2, 0.9
    f = q.build_floquet(s, l, a, 0.0)
    ms, ml = q.m_values(s), q.m_values(l)
    for i_s in range(q.dim_of(s)):
        for i_l in range(q.dim_of(l)):
            amps = np.zeros(q.dim_of(s) * q.dim_of(l), dtype=complex)
            amps[i_s * q.dim_of(l) + i_l] = 1.0
            state = q.QuantumState(q.SpinQuantum(s), q.SpinQuantum(l), amps)
            out = q.evolve(state, f, 1).amplitudes
            expected = amps * np.exp(-1j * a * (ms[i_s] + ml[i_l]))
            assert np.max(np.abs(out - expected)) < 1e-12


def test_interaction_factorization_matches_expm():
    # a=0, c=2pi, s=l=1/2: factored kick versus dense expm of -i c Sx (x) Lx
    f = q.build_floquet(0.5, 0.5, 0.0, 2 * np.pi)
    dense = dense_floquet(0.5, 0.5, 0.0, 2 * np.pi)
    prods = np.outer(q.m_values(0.5), q.m_values(0.5))
    assert np.allclose(np.unique(np.abs(prods)), [0.25])
    for k in range(4):
        amps = np.zeros(4, dtype=complex)
        amps[k] = 1.0
        state = q.QuantumState(q.SpinQuantum(0.5), q.SpinQuantum(0.5), amps)
        out = q.evolve(state, f, 1).amplitudes
        assert np.max(np.abs(out - dense @ amps)) < 1e-12


def test_factored_application_matches_dense_operator():
    rng = np.random.default_rng(7)
    cases = [(1.5, 1.5, 0.8, 1.3)]
    for _ in range(10):
        s = rng.choice([0.5, 1.0, 1.5, 2.0])
        l = rng.choice([0.5, 1.0, 1.5, 2.0])
        cases.append((s, l, rng.uniform(0, 2 * np.pi), rng.uniform(-3, 3)))
    for s, l, a, c in cases:
        f = q.build_floquet(s, l, a, c)
        dense = dense_floquet(s, l, a, c)
        state = random_state(s, l, rng)
        out = q.evolve(state, f, 1).amplitudes
        assert np.max(np.abs(out - dense @ state.amplitudes)) < 1e-12


def test_evolve_zero_kicks_is_identity():
    state = random_state(2, 3)
    out = q.evolve(state, q.build_floquet(2, 3, 1.0, 0.5), 0)
    assert np.array_equal(out.amplitudes, state.amplitudes)


def test_evolve_dimension_mismatch():
    state = random_state(1, 1)
    with pytest.raises(ValueError):
        q.evolve(state, q.build_floquet(1, 2, 1.0, 0.5), 1)


def test_unitarity_random_parameters():
    rng = np.random.default_rng(11)
    for _ in range(6):
        s = rng.choice([0.5, 1.5, 4.0, 9.0])
        l = rng.choice([1.0, 2.5, 6.0])
        f = q.build_floquet(s, l, rng.uniform(0, 2 * np.pi), rng.uniform(-4, 4))
        state = random_state(s, l, rng)
        assert abs(q.evolve(state, f, 1).norm() - 1.0) < 1e-12


def test_norm_preserved_200_kicks_production_scale():
    # s=140, l=154, gamma=2.835 scaled to c, a=5: the standard strong-coupling operating point
    s, l, a, gamma = 140, 154, 5.0, 2.835
    c = gamma / np.sqrt(s * (s + 1))
    f = q.build_floquet(s, l, a, c)
    psi_s = q.coherent_state(s, np.deg2rad(45), np.deg2rad(70))
    psi_l = q.coherent_state(l, np.deg2rad(135), np.deg2rad(70))
    state = q.product_state(s, l, psi_s, psi_l)
    out = q.evolve(state, f, 200)
    assert abs(out.norm() - 1.0) < 1e-12
    # raw single-kick application (no renormalization) is unitary to 1e-12
    raw = q.evolve(state, f, 1, renormalize=False)
    assert abs(raw.norm() - 1.0) < 1e-12


def test_casimir_expectation_invariant_under_evolution():
    # <L^2> and <S^2> are kinematic constants of the motion
    state = random_state(2, 2.5)
    f = q.build_floquet(2, 2.5, 5.0, 1.3)
    before = q.observables(state)
    after = q.observables(q.evolve(state, f, 50))
    assert abs(after.l2 - before.l2) < 1e-12
    assert abs(after.s2 - before.s2) < 1e-12


# ---------------------------------------------------------------------------
# observables and marginals


def test_observables_coherent_product():
    s, l = 9, 14
    state = q.product_state(s, l, q.coherent_state(s, 0.0, 0.0), q.coherent_state(l, 0.0, 0.0))
    obs = q.observables(state)
    assert abs(obs.lz - l) < 1e-10
    assert abs(obs.sz - s) < 1e-10
    assert abs(obs.var_norm_l - 1.0 / (l + 1)) < 1e-10
    assert abs(obs.l2 - l * (l + 1)) < 1e-12
    assert abs(obs.lz_norm - l / np.sqrt(l * (l + 1))) < 1e-12


def test_observables_casimir_exact_for_any_state():
    state = random_state(3.5, 5)
    obs = q.observables(state)
    assert abs(obs.l2 / (5 * 6) - 1.0) < 1e-12
    assert abs(obs.s2 / (3.5 * 4.5) - 1.0) < 1e-12


def test_observables_match_dense_small():
    rng = np.random.default_rng(3)
    s, l = 1.5, 2.0
    state = random_state(s, l, rng)
    obs = q.observables(state)
    psi = state.amplitudes
    for op, val in [
        (np.kron(jz_matrix(s), np.eye(q.dim_of(l))), obs.sz),
        (np.kron(np.eye(q.dim_of(s)), jz_matrix(l)), obs.lz),
        (np.kron(jx_matrix(s), np.eye(q.dim_of(l))), obs.sx),
        (np.kron(np.eye(q.dim_of(s)), jx_matrix(l)), obs.lx),
    ]:
        assert abs(np.vdot(psi, op @ psi).real - val) < 1e-12


def test_marginal_pz_product_state_delta():
    s, l = 2, 3
    state = q.product_state(s, l, q.coherent_state(s, 0.0, 0.0), q.coherent_state(l, 0.0, 0.0))
    p = q.marginal_pz(state)
    expected = np.zeros(q.dim_of(l))
    expected[0] = 1.0  # m_l = +l is the first descending entry
    assert np.max(np.abs(p - expected)) < 1e-14


def test_marginal_pz_south_pole_delta():
    l = 6
    state = q.product_state(2, l, q.coherent_state(2, 0.0, 0.0), q.coherent_state(l, np.pi, 0.0))
    p = q.marginal_pz(state)
    assert abs(p[-1] - 1.0) < 1e-12
    assert np.max(p[:-1]) < 1e-12


def test_marginal_pz_normalized_after_evolution():
    f = q.build_floquet(4, 5, 5.0, 0.4)
    state = q.evolve(
        q.product_state(4, 5, q.coherent_state(4, 0.4, 0.2), q.coherent_state(5, 2.0, 1.0)),
        f,
        20,
    )
    p = q.marginal_pz(state)
    assert np.all(p >= -1e-15)
    assert abs(p.sum() - 1.0) < 1e-12


def test_evolve_series_matches_single_shot():
    s, l = 3, 4
    f = q.build_floquet(s, l, 5.0, 0.3)
    state = q.product_state(s, l, q.coherent_state(s, 0.3, 0.1), q.coherent_state(l, 1.9, 2.2))
    series = q.evolve_series(state, f, 7)
    assert series.kicks.shape == (8,)
    final = q.evolve(state, f, 7)
    obs = q.observables(final)
    assert abs(series.l_tilde_mean[-1, 2] * series.mag_l - obs.lz) < 1e-10
    assert abs(series.var_norm_l[-1] - obs.var_norm_l) < 1e-12
