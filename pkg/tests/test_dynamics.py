"""Propagation engines: spectral closed-system evolution and RK4 Lindblad integration."""

import math

import numpy as np
import pytest

from entswap.closed_form import global_state, unitary_elements
from entswap.dynamics import (
    Method,
    PropagationPlan,
    default_timestep,
    evolve_exact,
    lindblad_rhs,
    propagate_lindblad,
    propagate_state,
)
from entswap.errors import (
    InvalidStateError,
    InvariantViolationError,
    StepTooLargeError,
)
from entswap.linalg import max_abs, partial_trace_to_target
from entswap.model import (
    SystemConfig,
    basis_index,
    build_hamiltonian,
    excitation_number,
    initial_state,
    jump_operators,
)

QUARTER_PI = math.pi / 4


def test_plan_validation():
    PropagationPlan(t_final=1.0, dt=0.01)
    with pytest.raises(ValueError):
        PropagationPlan(t_final=-1.0, dt=0.01)
    with pytest.raises(ValueError):
        PropagationPlan(t_final=1.0, dt=0.0)
    with pytest.raises(ValueError):
        PropagationPlan(t_final=1.0, dt=float("nan"))
    with pytest.raises(ValueError):
        PropagationPlan(t_final=1.0, dt=0.01, record_stride=0)


def test_default_timestep_tracks_fastest_scale():
    assert default_timestep(SystemConfig(theta=0.1)) == pytest.approx(0.01)
    cfg = SystemConfig(theta=0.1, g_aa=4.0, kappa_b=2.0, omega=1.0)
    assert default_timestep(cfg) == pytest.approx(0.01 / 4.0)


# ------------------------------------------------------------- spectral engine


def test_evolve_exact_identity_at_t0():
    cfg = SystemConfig(theta=0.3, g_aa=1.5)
    psi = evolve_exact(build_hamiltonian(cfg), initial_state(cfg), 0.0)
    assert np.allclose(psi, initial_state(cfg), atol=1e-14)


def test_evolve_exact_requires_normalized_input():
    h = build_hamiltonian(SystemConfig(theta=0.3))
    with pytest.raises(InvalidStateError):
        evolve_exact(h, np.ones(16, dtype=complex), 1.0)


def test_evolve_exact_norm_and_energy_conserved():
    cfg = SystemConfig(theta=0.7, g_aa=1.3, g_bb=0.4, omega=2.0)
    h = build_hamiltonian(cfg)
    psi0 = initial_state(cfg)
    e0 = np.vdot(psi0, h @ psi0).real
    times = np.linspace(0.0, 20.0, 101)
    states = evolve_exact(h, psi0, times)
    norms = np.einsum("ij,ij->i", states.conj(), states).real
    assert np.max(np.abs(norms - 1.0)) < 1e-12
    energies = np.einsum("ij,jk,ik->i", states.conj(), h, states).real
    assert np.max(np.abs(energies - e0)) < 1e-10


def test_evolve_exact_scalar_and_array_agree():
    cfg = SystemConfig(theta=0.5, g_aa=0.9)
    h = build_hamiltonian(cfg)
    psi0 = initial_state(cfg)
    batch = evolve_exact(h, psi0, np.array([0.4, 1.7]))
    assert np.allclose(batch[1], evolve_exact(h, psi0, 1.7), atol=1e-14)


@pytest.mark.parametrize("theta,g_aa,g_bb", [(QUARTER_PI, 1.0, 1.0), (0.9, 2.0, 0.7)])
def test_evolve_exact_matches_closed_form_state(theta, g_aa, g_bb):
    """Spectral propagation and the interaction-frame formula differ only by
    the global phase exp(i omega t)."""
    cfg = SystemConfig(theta=theta, g_aa=g_aa, g_bb=g_bb)
    h = build_hamiltonian(cfg)
    psi0 = initial_state(cfg)
    for t in np.linspace(0.0, 11.0, 23):
        numeric = evolve_exact(h, psi0, t)
        reference = global_state(cfg, t)
        fidelity = abs(np.vdot(reference, numeric)) ** 2
        assert fidelity >= 1.0 - 1e-10


def test_propagate_state_spectral_grid():
    cfg = SystemConfig(theta=0.3)
    h = build_hamiltonian(cfg)
    plan = PropagationPlan(t_final=2.0, dt=0.5, method=Method.SPECTRAL_EXACT)
    times, states = propagate_state(h, initial_state(cfg), plan)
    assert np.allclose(times, [0.0, 0.5, 1.0, 1.5, 2.0])
    assert states.shape == (5, 16)


@pytest.mark.parametrize("g_aa,g_bb", [(1.0, 1.0), (2.0, 1.0)])
def test_propagate_state_rk4_vs_spectral(g_aa, g_bb):
    # half the default step keeps the pure-state RK4 under 1e-8 across ten
    # exchange periods, even for the slowest-converging equal-coupling case
    cfg = SystemConfig(theta=QUARTER_PI, g_aa=g_aa, g_bb=g_bb)
    h = build_hamiltonian(cfg)
    psi0 = initial_state(cfg)
    dt = default_timestep(cfg) / 2
    t_final = 20 * math.pi / max(g_aa, g_bb)
    plan = PropagationPlan(t_final=t_final, dt=dt, record_stride=1000)
    times, rk4_states = propagate_state(h, psi0, plan)
    exact_states = evolve_exact(h, psi0, times)
    assert max_abs(rk4_states - exact_states) < 1e-8


def test_propagate_state_step_guard():
    cfg = SystemConfig(theta=0.2, omega=5.0)
    h = build_hamiltonian(cfg)
    plan = PropagationPlan(t_final=1.0, dt=0.5)
    with pytest.raises(StepTooLargeError):
        propagate_state(h, initial_state(cfg), plan)


# ----------------------------------------------------------------- lindblad rhs


def test_lindblad_rhs_ground_state_stationary():
    cfg = SystemConfig(theta=0.2, kappa_a=0.3, kappa_b=0.1)
    rho = np.zeros((16, 16), dtype=complex)
    rho[0, 0] = 1.0
    out = lindblad_rhs(rho, build_hamiltonian(cfg), jump_operators(cfg))
    assert max_abs(out) < 1e-14


def test_lindblad_rhs_decay_rates():
    # |0010><0010| loses population at 2 kappa_a into the ground state
    kappa_a = 0.17
    cfg = SystemConfig(theta=0.2, g_aa=0.0, g_bb=0.0, kappa_a=kappa_a)
    idx = basis_index(0, 0, 1, 0)
    rho = np.zeros((16, 16), dtype=complex)
    rho[idx, idx] = 1.0
    out = lindblad_rhs(rho, build_hamiltonian(cfg), jump_operators(cfg))
    assert out[0, 0].real == pytest.approx(2 * kappa_a, abs=1e-14)
    assert out[idx, idx].real == pytest.approx(-2 * kappa_a, abs=1e-14)


def test_lindblad_rhs_traceless():
    rng = np.random.default_rng(7)
    cfg = SystemConfig(theta=0.6, g_aa=1.1, g_bb=0.4, kappa_a=0.2, kappa_b=0.05)
    h = build_hamiltonian(cfg)
    jumps = jump_operators(cfg)
    for _ in range(20):
        m = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        out = lindblad_rhs(rho, h, jumps)
        assert abs(np.trace(out)) < 1e-12
        assert max_abs(out - out.conj().T) < 1e-12


# ------------------------------------------------------------ lindblad engine


def rk4_reference_step(rho, h, jumps, dt):
    def rhs(r):
        return lindblad_rhs(r, h, jumps)

    k1 = rhs(rho)
    k2 = rhs(rho + 0.5 * dt * k1)
    k3 = rhs(rho + 0.5 * dt * k2)
    k4 = rhs(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def test_propagate_lindblad_single_step_matches_reference():
    """The production right-hand side (precomputed drift) is algebraically the
    textbook dissipator; one RK4 step must agree to rounding."""
    cfg = SystemConfig(theta=0.4, g_aa=1.0, g_bb=0.5, kappa_a=0.12, kappa_b=0.3)
    dt = 0.01
    plan = PropagationPlan(t_final=dt, dt=dt)
    samples = propagate_lindblad(cfg, plan)
    psi0 = initial_state(cfg)
    rho0 = np.outer(psi0, psi0.conj())
    expected = rk4_reference_step(rho0, build_hamiltonian(cfg), jump_operators(cfg), dt)
    assert max_abs(samples[-1][1] - expected) < 1e-15


def test_propagate_lindblad_method_guard():
    plan = PropagationPlan(t_final=1.0, dt=0.01, method=Method.SPECTRAL_EXACT)
    with pytest.raises(ValueError):
        propagate_lindblad(SystemConfig(theta=0.1, kappa_a=0.1), plan)


def test_propagate_lindblad_step_guard():
    cfg = SystemConfig(theta=0.1, kappa_a=1.0)
    with pytest.raises(StepTooLargeError):
        propagate_lindblad(cfg, PropagationPlan(t_final=10.0, dt=0.1))


def test_propagate_lindblad_closed_matches_unitary_elements():
    cfg = SystemConfig(theta=0.9, g_aa=1.0, g_bb=0.5)
    plan = PropagationPlan(t_final=8.0, dt=default_timestep(cfg), record_stride=100)
    for t, rho in propagate_lindblad(cfg, plan):
        red = partial_trace_to_target(rho)
        x = unitary_elements(cfg, t)
        assert abs(red[0, 0].real - x.a) < 1e-8
        assert abs(red[1, 1].real - x.b) < 1e-8
        assert abs(red[2, 2].real - x.c) < 1e-8
        assert abs(red[1, 2] - x.d) < 1e-8


def test_propagate_lindblad_sample_invariants():
    cfg = SystemConfig(theta=QUARTER_PI, g_aa=1.0, g_bb=0.5, kappa_a=0.1, kappa_b=0.1)
    plan = PropagationPlan(t_final=15.0, dt=default_timestep(cfg), record_stride=150)
    for t, rho in propagate_lindblad(cfg, plan):
        assert abs(np.trace(rho).real - 1.0) < 1e-9
        assert max_abs(rho - rho.conj().T) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-8


def test_excitation_count_constant_without_loss():
    cfg = SystemConfig(theta=0.6, g_aa=1.2, g_bb=0.8)
    n_op = excitation_number()
    plan = PropagationPlan(t_final=10.0, dt=default_timestep(cfg), record_stride=100)
    counts = [
        np.trace(n_op @ rho).real for _, rho in propagate_lindblad(cfg, plan)
    ]
    assert max(abs(c - 1.0) for c in counts) < 1e-9


def test_excitation_count_monotone_under_loss():
    cfg = SystemConfig(theta=0.6, g_aa=1.2, g_bb=0.8, kappa_a=0.2, kappa_b=0.1)
    n_op = excitation_number()
    plan = PropagationPlan(t_final=10.0, dt=default_timestep(cfg), record_stride=50)
    counts = [
        np.trace(n_op @ rho).real for _, rho in propagate_lindblad(cfg, plan)
    ]
    assert counts[0] == pytest.approx(1.0, abs=1e-12)
    assert all(b <= a + 1e-12 for a, b in zip(counts, counts[1:]))
    assert counts[-1] < counts[0]


def test_sector_restriction_matches_full_space():
    cfg = SystemConfig(theta=0.8, g_aa=1.0, g_bb=0.4, kappa_a=0.15, kappa_b=0.05)
    plan = PropagationPlan(t_final=5.0, dt=default_timestep(cfg), record_stride=125)
    full = propagate_lindblad(cfg, plan)
    fast = propagate_lindblad(cfg, plan, restrict_to_single_excitation=True)
    assert len(full) == len(fast)
    for (t1, rho1), (t2, rho2) in zip(full, fast):
        assert t1 == t2
        assert max_abs(rho1 - rho2) < 1e-10


def lindblad_error_at(cfg, n_steps, t_final=2.0):
    plan = PropagationPlan(
        t_final=t_final, dt=t_final / n_steps, record_stride=n_steps
    )
    rho = propagate_lindblad(cfg, plan, restrict_to_single_excitation=True)[-1][1]
    # very fine reference in place of the unknown exact solution
    ref_plan = PropagationPlan(
        t_final=t_final, dt=t_final / (n_steps * 64), record_stride=n_steps * 64
    )
    ref = propagate_lindblad(cfg, ref_plan, restrict_to_single_excitation=True)[-1][1]
    return max_abs(rho - ref)


def test_rk4_fourth_order_convergence():
    """Halving the step should cut the global error by about 2^4."""
    cfg = SystemConfig(theta=QUARTER_PI, g_aa=1.0, g_bb=0.7, kappa_a=0.1, kappa_b=0.2)
    errors = [lindblad_error_at(cfg, n) for n in (80, 160, 320)]
    ratios = [errors[i] / errors[i + 1] for i in range(2)]
    for ratio in ratios:
        assert 12.0 <= ratio <= 20.0


def test_long_decay_reaches_ground_state():
    kappa = 0.1
    cfg = SystemConfig(theta=QUARTER_PI, kappa_a=kappa, kappa_b=kappa)
    t_final = 50.0 / kappa
    plan = PropagationPlan(
        t_final=t_final, dt=default_timestep(cfg), record_stride=50000
    )
    _, rho = propagate_lindblad(cfg, plan, restrict_to_single_excitation=True)[-1]
    assert rho[0, 0].real >= 1.0 - 1e-4
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-9)
