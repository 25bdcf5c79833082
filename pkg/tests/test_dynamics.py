import numpy as np
import pytest

from hartree_dm.dynamics import (
    BlowUpError,
    DysonError,
    PicardDivergence,
    PropagatorConfig,
    cumulative_simpson,
    dyson_order_for_tail,
    dyson_wave_operator,
    identity_wave_operator,
    picard_duhamel_solve,
    propagate,
    reconstruct_from_wave_operator,
    strang_step,
    unitary_exponential,
)
from hartree_dm.lattice import build_grid
from hartree_dm.mean_field import DensityField, PotentialField, gaussian_potential, mean_field_operator, zero_potential
from hartree_dm.operators import free_evolve, random_admissible_perturbation, schatten_norm
from hartree_dm.states import fermi_sea, make_entropy, reference_state

GRID = build_grid(1, 2 * np.pi, 16)
REF = reference_state(GRID, make_entropy("fermion", 1.0, 0.0))
W = gaussian_potential(GRID, 3.0, 1.0)


def perturbation(seed=1, magnitude=0.4):
    return random_admissible_perturbation(GRID, REF, 9.0, magnitude, seed)


def test_config_validation():
    with pytest.raises(ValueError):
        PropagatorConfig(tau=0.0)
    with pytest.raises(ValueError):
        PropagatorConfig(integrator="euler")
    with pytest.raises(ValueError):
        PropagatorConfig(mode="late")
    with pytest.raises(ValueError):
        PropagatorConfig(dyson_n_max=0)
    with pytest.raises(ValueError):
        PropagatorConfig(quadrature_nodes=1)


def test_unitary_exponential():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(5, 5))
    V = A + A.T
    U = unitary_exponential(V, 0.3)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(5), atol=1e-13)
    np.testing.assert_allclose(unitary_exponential(np.zeros((3, 3)), 1.0), np.eye(3))


def test_strang_without_interaction_is_free_flow():
    Q = perturbation()
    out = strang_step(REF, Q, zero_potential(GRID), 0.05)
    np.testing.assert_allclose(out, free_evolve(GRID, Q, 0.05), atol=1e-14)


@pytest.mark.parametrize("mode", ["midpoint", "frozen"])
def test_strang_keeps_reference_stationary(mode):
    out = strang_step(REF, np.zeros((GRID.N, GRID.N), dtype=complex), W, 0.1, mode)
    assert schatten_norm(out, 2) < 1e-14


@pytest.mark.parametrize("mode", ["midpoint", "frozen"])
def test_strang_preserves_spectrum_and_trace(mode):
    Q = perturbation()
    out = strang_step(REF, Q, W, 0.05, mode)
    before = np.linalg.eigvalsh(REF.matrix() + Q)
    after = np.linalg.eigvalsh(REF.matrix() + out)
    np.testing.assert_allclose(after, before, atol=1e-12)
    assert np.trace(out).real == pytest.approx(np.trace(Q).real, abs=1e-13)
    np.testing.assert_array_equal(out, out.conj().T)


def test_strang_gauge_shift_has_no_effect():
    Q = perturbation()
    a = strang_step(REF, Q, W, 0.05)
    b = strang_step(REF, Q, W, 0.05, shift=7.3)
    c = strang_step(REF, Q, W.shifted(7.3), 0.05)
    assert schatten_norm(a - b, 2) < 1e-12
    assert schatten_norm(a - c, 2) < 1e-12


def test_frozen_mode_time_reversal_without_interaction():
    Q = perturbation()
    w0 = zero_potential(GRID)
    back = strang_step(REF, strang_step(REF, Q, w0, 0.05, "frozen"), w0, -0.05, "frozen")
    assert np.max(np.abs(back - Q)) <= 10 * np.finfo(float).eps * GRID.N


def test_midpoint_mode_is_second_order():
    Q0 = perturbation(magnitude=0.3)
    cfg = lambda tau: PropagatorConfig(tau=tau)
    ref_sol = propagate(Q0, REF, W, cfg(1e-3), 0.2, ledger=False, snapshot_stride=None).final
    errs = [
        schatten_norm(propagate(Q0, REF, W, cfg(tau), 0.2, ledger=False, snapshot_stride=None).final - ref_sol, 2)
        for tau in (0.02, 0.01)
    ]
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_propagate_zero_final_time():
    Q0 = perturbation()
    rec = propagate(Q0, REF, W, PropagatorConfig(tau=0.1), 0.0)
    assert rec.times == [0.0]
    np.testing.assert_array_equal(rec.final, Q0)
    assert len(rec.ledger) == 1


def test_propagate_partial_last_step_and_stride():
    rec = propagate(perturbation(), REF, W, PropagatorConfig(tau=0.1), 0.35, stride=2, snapshot_stride=None)
    assert rec.metadata["partial_final_step"]
    assert rec.metadata["steps"] == 4
    assert rec.ledger_times == pytest.approx([0.0, 0.2, 0.35])
    assert rec.times == pytest.approx([0.0, 0.35])


def test_propagate_backward_then_forward():
    Q0 = perturbation()
    cfg = PropagatorConfig(tau=0.01, mode="frozen")
    w0 = zero_potential(GRID)
    back = propagate(Q0, REF, w0, cfg, -0.1, ledger=False)
    assert np.all(np.diff(back.times) < 0)
    fwd = propagate(back.final, REF, w0, cfg, 0.1, ledger=False)
    np.testing.assert_allclose(fwd.final, Q0, atol=1e-12)


def test_propagate_aborts_on_inadmissible_state():
    Q0 = 0.9 * np.eye(GRID.N, dtype=complex)
    with pytest.raises(BlowUpError) as info:
        propagate(Q0, REF, W, PropagatorConfig(tau=0.1), 1.0)
    assert info.value.violation > 0.1
    assert info.value.record is not None


def test_propagate_conserves_free_energy():
    rec = propagate(perturbation(), REF, W, PropagatorConfig(tau=0.01), 0.5, stride=10)
    F = rec.series("relative_free_energy")
    assert np.max(np.abs(F - F[0])) < 1e-5 * (1 + abs(F[0]))
    n = rec.series("relative_particle_number")
    assert np.max(np.abs(n - n[0])) < 1e-12


def test_picard_integrator_in_propagate():
    Q0 = perturbation(magnitude=0.3)
    a = propagate(Q0, REF, W, PropagatorConfig(integrator="picard", tau=0.05, quadrature_nodes=11), 0.1, ledger=False).final
    b = propagate(Q0, REF, W, PropagatorConfig(tau=1e-3), 0.1, ledger=False, snapshot_stride=None).final
    assert schatten_norm(a - b, 2) < 1e-6


def test_cumulative_simpson_exact_for_quadratics():
    for h in (0.1, -0.05):
        t = np.arange(9) * h
        F = 1 + 2 * t - 3 * t**2
        exact = t + t**2 - t**3
        np.testing.assert_allclose(cumulative_simpson(F, h), exact, atol=1e-14)
    np.testing.assert_allclose(cumulative_simpson(np.array([1.0, 3.0]), 0.5), [0.0, 1.0])


def test_cumulative_simpson_fourth_order():
    errs = []
    for n in (21, 41):
        t = np.linspace(0, 1, n)
        errs.append(np.max(np.abs(cumulative_simpson(np.exp(2j * t), t[1]) - (np.exp(2j * t) - 1) / 2j)))
    assert errs[0] / errs[1] > 12


def test_picard_trivial_cases():
    Q0 = perturbation()
    free = picard_duhamel_solve(Q0, REF, zero_potential(GRID), 0.1, 5)
    assert free.metadata["iterations"] == 1
    np.testing.assert_allclose(free.final, free_evolve(GRID, Q0, 0.1), atol=1e-14)
    still = picard_duhamel_solve(np.zeros_like(Q0), REF, W, 0.1, 5)
    assert still.metadata["iterations"] == 1
    assert not np.any(still.final)


def test_picard_matches_strang():
    Q0 = perturbation()
    p = picard_duhamel_solve(Q0, REF, W, 0.1, 41, tol=1e-11)
    s = propagate(Q0, REF, W, PropagatorConfig(tau=1e-3), 0.1, ledger=False, snapshot_stride=None)
    assert schatten_norm(p.final - s.final, 2) < 1e-6
    assert 0 < p.metadata["contraction_factor"] < 1
    assert p.times[-1] == pytest.approx(0.1)


def test_picard_reports_divergence():
    with pytest.raises(PicardDivergence) as info:
        picard_duhamel_solve(perturbation(), REF, gaussian_potential(GRID, 200.0, 1.0), 2.0, 21, tol=1e-12, max_iter=6)
    assert len(info.value.increments) == 6
    assert info.value.last_increment > 1e-12


def test_picard_input_validation():
    with pytest.raises(ValueError):
        picard_duhamel_solve(perturbation(), REF, W, -0.1, 5)
    with pytest.raises(ValueError):
        picard_duhamel_solve(perturbation(), REF, W, 0.1, 1)


def test_dyson_zero_potential_is_identity():
    V = [np.zeros((GRID.N, GRID.N))] * 5
    op = dyson_wave_operator(GRID, V, np.linspace(0, 1, 5), 3)
    np.testing.assert_array_equal(op.value, np.eye(GRID.N))
    assert op.unitarity_defect == 0.0


def test_dyson_scalar_potential_sums_to_exponential():
    c = 0.8
    times = np.linspace(0.2, 1.2, 101)
    V = [c * np.eye(GRID.N)] * len(times)
    op = dyson_wave_operator(GRID, V, times, 20)
    np.testing.assert_allclose(op.value, np.exp(-1j * c) * np.eye(GRID.N), atol=1e-9)
    assert op.unitarity_defect < 1e-8


def test_dyson_terms_obey_factorial_bound():
    Q0 = perturbation()
    rec = propagate(Q0, REF, W, PropagatorConfig(tau=0.01), 0.5, ledger=False, record_potentials=True)
    for n in (1, 2, 4):
        op = dyson_wave_operator(GRID, rec.potentials, rec.potential_times, n)
        # S^2 norm of the last term over the operator-norm bound is at most sqrt(N)
        assert op.last_term_norm <= np.sqrt(GRID.N) * op.tail_bound * (1 + 1e-6)


def test_dyson_accepts_potential_fields_and_errors():
    rho = DensityField(GRID, np.zeros(GRID.diff_shape, dtype=complex))
    V = PotentialField(GRID, rho.coeffs)
    assert dyson_wave_operator(GRID, [V, V], [0.0, 0.1], 1).unitarity_defect == 0.0
    with pytest.raises(DysonError):
        dyson_wave_operator(GRID, [V], [0.0], 1)
    with pytest.raises(ValueError):
        dyson_wave_operator(GRID, [V, V], [0.0, 0.1, 0.2], 1)
    big = [5.0 * np.eye(GRID.N)] * 3
    with pytest.raises(DysonError):
        dyson_wave_operator(GRID, big, [0.0, 0.5, 1.0], 1, tail_tol=1e-3)


def test_dyson_order_selection():
    V = [2.0 * np.eye(4)] * 3
    # int ||V|| = 2: 2^9/9! = 1.4e-3 and 2^10/10! = 2.8e-4
    assert dyson_order_for_tail(build_grid(1, 1.0, 4), V, [0.0, 0.5, 1.0], 1e-3) == 10


def test_reconstruction_identity_cases():
    Q0 = perturbation()
    ident = identity_wave_operator(GRID)
    np.testing.assert_allclose(reconstruct_from_wave_operator(ident, REF, Q0, 0.0), Q0, atol=1e-15)
    np.testing.assert_allclose(reconstruct_from_wave_operator(ident, REF, Q0, 0.3), free_evolve(GRID, Q0, 0.3), atol=1e-15)


def test_dyson_reconstruction_matches_strang():
    Q0 = perturbation()
    rec = propagate(Q0, REF, W, PropagatorConfig(tau=1e-3), 0.1, ledger=False, snapshot_stride=None, record_potentials=True)
    n = dyson_order_for_tail(GRID, rec.potentials, rec.potential_times, 1e-10)
    op = dyson_wave_operator(GRID, rec.potentials, rec.potential_times, n)
    Qd = reconstruct_from_wave_operator(op, REF, Q0)
    assert schatten_norm(Qd - rec.final, 2) < 1e-6
    assert op.unitarity_defect < 1e-8


def test_dyson_check_integrator_records_distance():
    cfg = PropagatorConfig(integrator="dyson-check", tau=1e-3, dyson_n_max=12)
    rec = propagate(perturbation(), REF, W, cfg, 0.05, stride=10, record_potentials=True)
    assert rec.metadata["dyson_distance"] < 1e-6


def test_zero_temperature_energy_conservation():
    grid = build_grid(2, 2 * np.pi, 6)
    ref = fermi_sea(grid, 1.5)
    w = gaussian_potential(grid, 2.0, 1.0)
    Q0 = random_admissible_perturbation(grid, ref, 4.0, 0.5, 3)
    rec = propagate(Q0, ref, w, PropagatorConfig(tau=0.01), 0.3, stride=5)
    E = rec.series("relative_hartree")
    assert np.max(np.abs(E - E[0])) < 1e-5


def test_mean_field_depends_only_on_density():
    Q0 = perturbation()
    V = mean_field_operator(GRID, W, Q0)
    np.testing.assert_allclose(V, V.conj().T, atol=1e-15)
