"""Propagation engines: spectral evolution for the closed system and classic
fixed-step RK4 for state vectors and for the amplitude-damping master equation.

The integrators never renormalize: trace and norm drift are diagnostics, and
drift beyond tolerance raises instead of being silently corrected.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import InvalidStateError, InvariantViolationError, StepTooLargeError
from .linalg import hermitian_eig, max_abs

# Indices of the states holding at most one excitation; the dissipative
# dynamics never leaves this subspace when started inside it.
_SINGLE_EXCITATION = (0, 1, 2, 4, 8)


class Method(enum.Enum):
    SPECTRAL_EXACT = "exact"
    RK4 = "rk4"


@dataclass(frozen=True)
class PropagationPlan:
    """Time grid and engine choice for a propagation run.

    dt is an upper bound on the step: the actual step shrinks so that an
    integer number of steps lands exactly on t_final.  Samples are recorded
    every record_stride steps, always including t = 0 and t_final.
    """

    t_final: float
    dt: float
    method: Method = Method.RK4
    record_stride: int = 1

    def __post_init__(self) -> None:
        if not (self.t_final >= 0) or not math.isfinite(self.t_final):
            raise ValueError(f"t_final must be finite and >= 0, got {self.t_final}")
        if not (self.dt > 0) or not math.isfinite(self.dt):
            raise ValueError(f"dt must be finite and > 0, got {self.dt}")
        if not isinstance(self.record_stride, int) or self.record_stride < 1:
            raise ValueError(f"record_stride must be a positive integer, got {self.record_stride}")


def default_timestep(cfg: model.SystemConfig) -> float:
    """Step 0.01 / max(omega, couplings, decay rates): resolves the fastest scale."""
    return 0.01 / max(cfg.omega, cfg.g_aa, cfg.g_bb, cfg.kappa_a, cfg.kappa_b)


def _step_grid(plan: PropagationPlan) -> tuple[int, float]:
    """Number of steps and the effective dt whose product is exactly t_final."""
    if plan.t_final == 0.0:
        return 0, plan.dt
    n_steps = max(1, math.ceil(plan.t_final / plan.dt - 1e-12))
    return n_steps, plan.t_final / n_steps


def _record_steps(n_steps: int, stride: int) -> list[int]:
    steps = list(range(0, n_steps + 1, stride))
    if steps[-1] != n_steps:
        steps.append(n_steps)
    return steps


def evolve_exact(h: np.ndarray, psi0: np.ndarray, t) -> np.ndarray:
    """Closed-system state exp(-i H t) psi0 through the eigendecomposition of H.

    t may be a scalar or a 1-d array; the decomposition is reused across all
    requested times.  Norm is conserved to machine precision.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    norm_sq = float(np.vdot(psi0, psi0).real)
    if abs(norm_sq - 1.0) > 1e-10:
        raise InvalidStateError(f"initial norm^2 {norm_sq!r} is not 1 within 1e-10")
    spectrum = hermitian_eig(h)
    amplitudes = spectrum.eigenvectors.conj().T @ psi0
    times = np.atleast_1d(np.asarray(t, dtype=float))
    phases = np.exp(-1j * np.multiply.outer(times, spectrum.eigenvalues))
    states = (phases * amplitudes) @ spectrum.eigenvectors.T
    return states[0] if np.isscalar(t) or np.asarray(t).ndim == 0 else states


def _require_step_ok(dt: float, rate: float) -> None:
    if dt * rate > 0.1:
        raise StepTooLargeError(
            f"dt = {dt:.3e} times fastest rate {rate:.3e} exceeds 0.1; shrink dt"
        )


def _rk4_step(rhs, y, dt: float):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * dt * k1)
    k3 = rhs(y + 0.5 * dt * k2)
    k4 = rhs(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate_state(h: np.ndarray, psi0: np.ndarray, plan: PropagationPlan):
    """Propagate a pure state on the plan's grid; returns (times, states).

    SPECTRAL_EXACT evaluates the propagator at the recorded times only; RK4
    steps d psi/dt = -i H psi and is meant for cross-checking the spectral
    route.
    """
    n_steps, dt = _step_grid(plan)
    record = _record_steps(n_steps, plan.record_stride)
    times = np.array([k * dt for k in record])
    if plan.method is Method.SPECTRAL_EXACT:
        states = evolve_exact(h, psi0, times)
        return times, np.atleast_2d(states)
    _require_step_ok(dt, max_abs(h))
    h = np.asarray(h, dtype=complex)
    rhs = lambda psi: -1j * (h @ psi)
    psi = np.asarray(psi0, dtype=complex).copy()
    states = [psi.copy()]
    wanted = set(record)
    for k in range(1, n_steps + 1):
        psi = _rk4_step(rhs, psi, dt)
        if k in wanted:
            states.append(psi.copy())
    return times, np.array(states)


def lindblad_rhs(rho: np.ndarray, h: np.ndarray, jump_ops) -> np.ndarray:
    """Master-equation right-hand side (hbar = 1):

    -i[H, rho] + sum_i (V_i rho V_i^dag - (1/2){V_i^dag V_i, rho}).

    Traceless for every Hermitian rho, which is what preserves the trace
    during integration.
    """
    rho = np.asarray(rho, dtype=complex)
    h = np.asarray(h, dtype=complex)
    out = -1j * (h @ rho - rho @ h)
    for v in jump_ops:
        v_dag = v.conj().T
        v_dag_v = v_dag @ v
        out = out + v @ rho @ v_dag - 0.5 * (v_dag_v @ rho + rho @ v_dag_v)
    return out


def propagate_lindblad(
    cfg: model.SystemConfig,
    plan: PropagationPlan,
    restrict_to_single_excitation: bool = False,
):
    """Integrate the master equation from the configured start state with RK4.

    Returns a list of (t, rho) pairs on the recording grid, rho always 16x16.
    Raises StepTooLargeError when dt times the fastest rate exceeds 0.1 and
    InvariantViolationError if the trace drifts from 1 by more than 1e-6 at
    any recorded sample.

    restrict_to_single_excitation integrates the closed 5-dimensional
    subspace reachable from the start state instead of the full space; it is
    an optimization only and agrees with the full-space run to 1e-10.
    """
    if plan.method is not Method.RK4:
        raise ValueError("spectral propagation does not apply to dissipative dynamics")
    h = model.build_hamiltonian(cfg)
    jumps = model.jump_operators(cfg)
    rho = np.outer(model.initial_state(cfg), model.initial_state(cfg).conj())

    if restrict_to_single_excitation:
        sector = np.array(_SINGLE_EXCITATION)
        h_work = h[np.ix_(sector, sector)]
        jumps_work = [v[np.ix_(sector, sector)] for v in jumps]
        rho_work = rho[np.ix_(sector, sector)]
    else:
        h_work, jumps_work, rho_work = h, jumps, rho

    n_steps, dt = _step_grid(plan)
    _require_step_ok(dt, max_abs(h) + cfg.kappa_a + cfg.kappa_b)

    # Same right-hand side as lindblad_rhs with the jump contractions
    # precomputed: A = H - (i/2) sum V^dag V gives
    # rhs = -i(A rho - rho A^dag) + sum V rho V^dag.
    drift = h_work - 0.5j * sum(
        (v.conj().T @ v for v in jumps_work), np.zeros_like(h_work)
    )
    drift_dag = drift.conj().T
    jump_pairs = [(v, v.conj().T) for v in jumps_work]

    def rhs(r):
        out = -1j * (drift @ r - r @ drift_dag)
        for v, v_dag in jump_pairs:
            out = out + v @ r @ v_dag
        return out

    def embed(r):
        if not restrict_to_single_excitation:
            return r.copy()
        full = np.zeros((16, 16), dtype=complex)
        full[np.ix_(sector, sector)] = r
        return full

    def check_trace(r, t):
        drift_from_one = abs(complex(np.trace(r)) - 1.0)
        if drift_from_one > 1e-6:
            raise InvariantViolationError(
                f"trace drifted by {drift_from_one:.3e} at t = {t:.6g}"
            )

    record = _record_steps(n_steps, plan.record_stride)
    wanted = set(record)
    samples = []
    check_trace(rho_work, 0.0)
    if 0 in wanted:
        samples.append((0.0, embed(rho_work)))
    for k in range(1, n_steps + 1):
        rho_work = _rk4_step(rhs, rho_work, dt)
        if k in wanted:
            t = k * dt
            check_trace(rho_work, t)
            samples.append((t, embed(rho_work)))
    return samples
