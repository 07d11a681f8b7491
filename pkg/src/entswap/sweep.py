"""Sweep engines behind the command line: time series, phase diagrams,
randomized bound checks, oracle cross-validation, and delimited output.

Output is deterministic: identical specs (including the seed) produce
byte-identical files, and floats are printed with 17 significant digits so
parsing recovers them exactly.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import closed_form, dynamics, linalg, measures, model
from ._version import __version__
from .closed_form import XStateAB
from .dynamics import Method, PropagationPlan
from .errors import BoundViolationError, EngineMismatchError
from .model import SystemConfig
from .rng import SplitMix64


class Mode(enum.Enum):
    TIME_SERIES = "timeseries"
    PHASE_DIAGRAM = "phasediagram"
    BOUND_CHECK = "boundcheck"
    VERIFY = "verify"


class Engine(enum.Enum):
    CLOSED = "closed"
    EXACT = "exact"
    RK4 = "rk4"


@dataclass(frozen=True)
class SweepSpec:
    """One sweep request: what to run, on which system, how densely."""

    mode: Mode
    config: SystemConfig
    t_final: float
    samples: int
    engine: Engine = Engine.CLOSED
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.t_final > 0) or not math.isfinite(self.t_final):
            raise ValueError(f"t_final must be finite and > 0, got {self.t_final}")
        if self.samples < 2:
            raise ValueError(f"samples must be >= 2, got {self.samples}")


@dataclass(frozen=True)
class TrajectoryRecord:
    """One emitted row: time, observables, X-state entries, diagnostics."""

    t: float
    negativity: float
    energy: float
    a: float
    b: float
    c: float
    d_re: float
    d_im: float
    residual: float
    trace_err: float
    min_eig: float
    frontier: int = 0


@dataclass(frozen=True)
class BoundCheckReport:
    samples: int
    violations: int
    min_residual: float
    worst_theta: float
    worst_ratio: float
    worst_kappa: float
    worst_t: float
    equality_points: int
    equality_max_abs_residual: float
    scatter: tuple = ()


@dataclass(frozen=True)
class VerifyRow:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


@dataclass(frozen=True)
class VerifyReport:
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


CSV_COLUMNS = ("t", "N", "U", "a", "b", "c", "d_re", "d_im",
               "residual", "trace_err", "min_eig", "frontier")

_UNITARY_THETAS = (0.0, math.pi / 8, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)
_UNITARY_RATIOS = (1.0, 2.0, 3.0, 7.0, 53.0, math.sqrt(2.0))
_DISSIPATIVE_RATIOS = (1.0, 2.0, 3.0, math.sqrt(2.0))


def _closed_elements(cfg: SystemConfig, t: float) -> XStateAB:
    if cfg.is_closed:
        return closed_form.unitary_elements(cfg, t)
    return closed_form.dissipative_elements(cfg, t, generalized=True)


def _record(cfg: SystemConfig, t: float, rho: np.ndarray,
            trace_err: float, frontier: int = 0) -> TrajectoryRecord:
    n = measures.negativity(rho)
    u = measures.energy(rho, cfg.omega)
    residual = closed_form.bound_residual(n, u)
    if residual < -1e-8:
        raise BoundViolationError(
            f"bound residual {residual:.3e} below -1e-8 at t = {t:.6g}"
        )
    return TrajectoryRecord(
        t=t, negativity=n, energy=u,
        a=float(rho[0, 0].real), b=float(rho[1, 1].real), c=float(rho[2, 2].real),
        d_re=float(rho[1, 2].real), d_im=float(rho[1, 2].imag),
        residual=residual, trace_err=trace_err,
        min_eig=float(np.linalg.eigvalsh(rho)[0]), frontier=frontier,
    )


def _rk4_plan(cfg: SystemConfig, t_final: float, samples: int) -> PropagationPlan:
    """Plan whose recording grid lands exactly on the requested sample times."""
    spacing = t_final / (samples - 1)
    steps_per_sample = max(1, math.ceil(spacing / dynamics.default_timestep(cfg) - 1e-12))
    return PropagationPlan(
        t_final=t_final,
        dt=spacing / steps_per_sample,
        method=Method.RK4,
        record_stride=steps_per_sample,
    )


def run_time_series(spec: SweepSpec) -> list[TrajectoryRecord]:
    """Trajectory records at `samples` uniformly spaced times in [0, t_final]."""
    cfg = spec.config
    spacing = spec.t_final / (spec.samples - 1)

    if spec.engine is Engine.CLOSED:
        records = []
        for i in range(spec.samples):
            t = i * spacing
            x = _closed_elements(cfg, t)
            records.append(_record(cfg, t, x.to_matrix(),
                                   trace_err=abs(x.a + x.b + x.c - 1.0)))
        return records

    if spec.engine is Engine.EXACT:
        if not cfg.is_closed:
            raise EngineMismatchError(
                "the exact engine handles the lossless system only; use rk4 with decay"
            )
        h = model.build_hamiltonian(cfg)
        times = np.array([i * spacing for i in range(spec.samples)])
        states = dynamics.evolve_exact(h, model.initial_state(cfg), times)
        records = []
        for t, psi in zip(times, states):
            trace_err = abs(float(np.vdot(psi, psi).real) - 1.0)
            rho = linalg.partial_trace_to_target(np.outer(psi, psi.conj()))
            records.append(_record(cfg, float(t), rho, trace_err=trace_err))
        return records

    plan = _rk4_plan(cfg, spec.t_final, spec.samples)
    records = []
    for t, rho16 in dynamics.propagate_lindblad(cfg, plan):
        trace_err = abs(complex(np.trace(rho16)) - 1.0)
        rho = linalg.partial_trace_to_target(rho16)
        records.append(_record(cfg, t, rho, trace_err=trace_err))
    return records


def run_phase_diagram(spec: SweepSpec) -> list[TrajectoryRecord]:
    """Time-ordered (U, N) trajectory plus a frontier overlay block.

    Frontier rows carry frontier=1, the saturating balanced X-state entries,
    and nan in the columns that only make sense for trajectory points.
    """
    records = run_time_series(spec)
    for k in range(spec.samples):
        u = -1.0 + k / (spec.samples - 1)
        n = closed_form.frontier_negativity(u)
        pop = 0.5 * (1.0 + u)
        records.append(TrajectoryRecord(
            t=float("nan"), negativity=n, energy=u,
            a=-u, b=pop, c=pop, d_re=pop, d_im=0.0,
            residual=closed_form.bound_residual(n, u),
            trace_err=float("nan"), min_eig=float("nan"), frontier=1,
        ))
    return records


def run_bound_check(spec: SweepSpec, keep_points: int = 0) -> BoundCheckReport:
    """Randomized search for bound violations plus the exact-equality trajectory.

    Samples (theta, coupling ratio, decay fraction, time) tuples from the
    seeded splitmix generator, evaluates the closed-form elements, and checks
    the residual of every sample.  Any residual below -1e-8 raises
    BoundViolationError with the report attached; the balanced equal-coupling
    lossless trajectory must sit on the frontier to 1e-9.
    """
    gen = SplitMix64(spec.seed)
    min_residual = math.inf
    worst = (math.nan, math.nan, math.nan, math.nan)
    violations = 0
    scatter: list[tuple[float, float]] = []

    for _ in range(spec.samples):
        theta = gen.uniform_in(0.0, 2.0 * math.pi)
        ratio = 64.0 ** (2.0 * gen.uniform() - 1.0)   # g_aa/g_bb, log-uniform in [1/64, 64]
        kappa = gen.uniform_in(0.0, 2.0)              # in units of g_aa
        t = gen.uniform_in(0.0, spec.t_final)
        cfg = SystemConfig(theta=theta, g_aa=1.0, g_bb=1.0 / ratio,
                           kappa_a=kappa, kappa_b=kappa, omega=spec.config.omega)
        x = _closed_elements(cfg, t)
        n, u = measures.xstate_observables(x)
        residual = closed_form.bound_residual(n, u)
        if residual < min_residual:
            min_residual = residual
            worst = (theta, ratio, kappa, t)
        if residual < -1e-8:
            violations += 1
        if len(scatter) < keep_points:
            scatter.append((u, n))

    eq_cfg = SystemConfig(theta=math.pi / 4, g_aa=1.0, g_bb=1.0, omega=spec.config.omega)
    eq_points = 1000
    eq_max = 0.0
    for i in range(eq_points):
        t = spec.t_final * i / (eq_points - 1)
        rho = closed_form.unitary_elements(eq_cfg, t).to_matrix()
        n = measures.negativity(rho)
        u = measures.energy(rho, eq_cfg.omega)
        eq_max = max(eq_max, abs(closed_form.bound_residual(n, u)))

    report = BoundCheckReport(
        samples=spec.samples, violations=violations, min_residual=min_residual,
        worst_theta=worst[0], worst_ratio=worst[1], worst_kappa=worst[2], worst_t=worst[3],
        equality_points=eq_points, equality_max_abs_residual=eq_max,
        scatter=tuple(scatter),
    )
    if violations:
        raise BoundViolationError(
            f"{violations} of {spec.samples} samples fell below -1e-8 "
            f"(minimum residual {min_residual:.3e})",
            report=report,
        )
    return report


def _unitary_config_error(cfg: SystemConfig, times: np.ndarray) -> float:
    h = model.build_hamiltonian(cfg)
    states = dynamics.evolve_exact(h, model.initial_state(cfg), times)
    worst = 0.0
    for t, psi in zip(times, states):
        rho = linalg.partial_trace_to_target(np.outer(psi, psi.conj()))
        reference = closed_form.unitary_elements(cfg, float(t)).to_matrix()
        worst = max(worst, linalg.max_abs(rho - reference))
    return worst


def verify_unitary_grid(samples: int = 1000, t_final: float = 4.0 * math.pi,
                        thetas=_UNITARY_THETAS, ratios=_UNITARY_RATIOS) -> float:
    """Max element error between propagated-and-reduced states and the
    lossless closed forms over the theta x ratio x time grid."""
    configs = [SystemConfig(theta=theta, g_aa=ratio, g_bb=1.0)
               for theta in thetas for ratio in ratios]
    times = np.linspace(0.0, t_final, samples)
    with ThreadPoolExecutor() as pool:
        errors = list(pool.map(lambda cfg: _unitary_config_error(cfg, times), configs))
    return max(errors)


def verify_dissipative_grid(samples: int = 500, ratios=_DISSIPATIVE_RATIOS,
                            kappa_fraction: float = 0.1,
                            horizon: float | None = None) -> float:
    """Max element error between the RK4 master-equation run and the damped
    closed forms, balanced angle, decay at kappa_fraction of g_aa."""
    worst = 0.0
    for ratio in ratios:
        kappa = kappa_fraction * 1.0
        cfg = SystemConfig(theta=math.pi / 4, g_aa=1.0, g_bb=ratio,
                           kappa_a=kappa, kappa_b=kappa)
        t_final = horizon if horizon is not None else 40.0 / kappa
        plan = _rk4_plan(cfg, t_final, samples)
        for t, rho16 in dynamics.propagate_lindblad(cfg, plan):
            rho = linalg.partial_trace_to_target(rho16)
            reference = closed_form.dissipative_elements(cfg, t).to_matrix()
            worst = max(worst, linalg.max_abs(rho - reference))
    return worst


def verify_reduction_identity(samples: int = 2000,
                              ratios=(1.0, 2.5, math.sqrt(2.0)),
                              t_final: float = 20.0 * math.pi) -> float:
    """Max entry difference between the damped closed forms at kappa = 0 and
    the lossless closed forms at the balanced angle."""
    worst = 0.0
    for ratio in ratios:
        cfg = SystemConfig(theta=math.pi / 4, g_aa=ratio, g_bb=1.0)
        for t in np.linspace(0.0, t_final, samples):
            damped = closed_form.dissipative_elements(cfg, float(t))
            lossless = closed_form.unitary_elements(cfg, float(t))
            worst = max(worst,
                        abs(damped.a - lossless.a), abs(damped.b - lossless.b),
                        abs(damped.c - lossless.c), abs(damped.d - lossless.d))
    return worst


def verify_negativity_routes(count: int = 10000, seed: int = 20260825) -> float:
    """Max disagreement between the eigensolver negativity and the X-state
    formula over randomly drawn valid X states."""
    gen = SplitMix64(seed)
    worst = 0.0
    for _ in range(count):
        raw = [-math.log1p(-gen.uniform()) for _ in range(3)]
        total = sum(raw)
        assert total > 0.0
        a, b, c = (value / total for value in raw)
        magnitude = gen.uniform() * math.sqrt(b * c)
        phase = gen.uniform_in(0.0, 2.0 * math.pi)
        x = XStateAB(a=a, b=b, c=c,
                     d=magnitude * complex(math.cos(phase), math.sin(phase)))
        from_formula = measures.xstate_observables(x).negativity
        from_eigensolver = measures.negativity(x.to_matrix())
        worst = max(worst, abs(from_formula - from_eigensolver))
    return worst


def run_verify(spec: SweepSpec, quick: bool = False) -> VerifyReport:
    """Cross-validate every engine pair and measure route; report max errors.

    quick shrinks the grids for smoke testing but keeps the tolerances.
    """
    if quick:
        rows = (
            VerifyRow("closed-system oracle grid",
                      verify_unitary_grid(samples=120, ratios=(1.0, 3.0, math.sqrt(2.0))), 1e-8),
            VerifyRow("dissipative oracle grid",
                      verify_dissipative_grid(samples=80, ratios=(1.0,), horizon=40.0), 1e-6),
            VerifyRow("zero-loss reduction", verify_reduction_identity(samples=400), 1e-12),
            VerifyRow("negativity route agreement", verify_negativity_routes(count=1000), 1e-10),
        )
    else:
        rows = (
            VerifyRow("closed-system oracle grid", verify_unitary_grid(samples=spec.samples), 1e-8),
            VerifyRow("dissipative oracle grid", verify_dissipative_grid(), 1e-6),
            VerifyRow("zero-loss reduction", verify_reduction_identity(), 1e-12),
            VerifyRow("negativity route agreement", verify_negativity_routes(), 1e-10),
        )
    return VerifyReport(rows)


def peak_negativity(cfg: SystemConfig, t_final: float, samples: int = 4096) -> float:
    """Largest lossless negativity over [0, t_final]: dense grid, then local
    refinement of every interior maximum so grid aliasing cannot hide a peak."""
    from scipy.optimize import minimize_scalar

    def value(t: float) -> float:
        return measures.xstate_observables(closed_form.unitary_elements(cfg, t)).negativity

    times = np.linspace(0.0, t_final, samples)
    values = np.array([value(t) for t in times])
    best = float(values.max())
    candidates = np.flatnonzero((values > np.roll(values, 1)) & (values >= np.roll(values, -1)))
    for i in candidates:
        low = times[max(i - 1, 0)]
        high = times[min(i + 1, samples - 1)]
        result = minimize_scalar(lambda t: -value(t), bounds=(low, high),
                                 method="bounded", options={"xatol": 1e-12})
        best = max(best, float(-result.fun))
    return best


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_header(fh, spec: SweepSpec) -> None:
    cfg = spec.config
    fh.write(f"# entswap {spec.mode.value} v{__version__}\n")
    for key, value in (("theta", cfg.theta), ("g_aa", cfg.g_aa), ("g_bb", cfg.g_bb),
                       ("kappa_a", cfg.kappa_a), ("kappa_b", cfg.kappa_b),
                       ("omega", cfg.omega), ("t_final", spec.t_final)):
        fh.write(f"# {key}={_fmt(value)}\n")
    fh.write(f"# samples={spec.samples}\n")
    fh.write(f"# engine={spec.engine.value}\n")
    fh.write(f"# seed={spec.seed}\n")


def write_records_csv(spec: SweepSpec, records, fh) -> None:
    """Header block, column names, then one row per record; floats at 17
    significant digits so a reader recovers them bit-exactly."""
    _write_header(fh, spec)
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for r in records:
        fh.write(",".join((
            _fmt(r.t), _fmt(r.negativity), _fmt(r.energy),
            _fmt(r.a), _fmt(r.b), _fmt(r.c), _fmt(r.d_re), _fmt(r.d_im),
            _fmt(r.residual), _fmt(r.trace_err), _fmt(r.min_eig), str(r.frontier),
        )) + "\n")


def write_bound_report(spec: SweepSpec, report: BoundCheckReport, fh) -> None:
    _write_header(fh, spec)
    fh.write("metric,value\n")
    for key, value in (
        ("samples", str(report.samples)),
        ("violations", str(report.violations)),
        ("min_residual", _fmt(report.min_residual)),
        ("worst_theta", _fmt(report.worst_theta)),
        ("worst_ratio", _fmt(report.worst_ratio)),
        ("worst_kappa", _fmt(report.worst_kappa)),
        ("worst_t", _fmt(report.worst_t)),
        ("equality_points", str(report.equality_points)),
        ("equality_max_abs_residual", _fmt(report.equality_max_abs_residual)),
    ):
        fh.write(f"{key},{value}\n")


def write_verify_report(spec: SweepSpec, report: VerifyReport, fh) -> None:
    _write_header(fh, spec)
    fh.write("check,max_error,tolerance,status\n")
    for row in report.rows:
        status = "PASS" if row.passed else "FAIL"
        fh.write(f"{row.name},{_fmt(row.max_error)},{_fmt(row.tolerance)},{status}\n")
