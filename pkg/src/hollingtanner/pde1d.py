"""One-dimensional reaction-diffusion simulator with zero-flux boundaries.

Nodes sit at x_i = i * L / (n - 1), i = 0..n-1, including both walls. The
zero-flux condition uses mirrored ghost nodes (u_{-1} = u_1), and time is
advanced with forward Euler by the stepper in :mod:`hollingtanner.kernels`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import equilibria as eqm
from . import kernels
from .errors import IntegrationError, ParameterError
from .model import Params, reaction

DT_SAFETY = 0.9
ROUNDOFF_NEG = 1e-12
BLOWUP = 10.0
STATIONARY_WINDOW = 1000
STATIONARY_TOL = 1e-8


@dataclass(frozen=True)
class GaussianBumpAtP2:
    """u0 = u2 + amplitude * exp(-width x^2), v0 = u0 + C."""

    amplitude: float = 0.012
    width: float = 7.0
    center: float = 0.0


@dataclass(frozen=True)
class GaussianBumpAt0C:
    """u0 = amplitude * exp(-width x^2), v0 = u0 + C."""

    amplitude: float = 0.012
    width: float = 7.0
    center: float = 0.0


@dataclass(frozen=True)
class UniformAt:
    point: tuple[float, float]


@dataclass(frozen=True)
class StepFront:
    left: tuple[float, float]
    right: tuple[float, float]
    position: Optional[float] = None  # defaults to the domain midpoint


@dataclass(frozen=True)
class Custom:
    u: np.ndarray
    v: np.ndarray


InitialCondition1D = Union[GaussianBumpAtP2, GaussianBumpAt0C, UniformAt, StepFront, Custom]


@dataclass
class Sim1DConfig:
    params: Params
    L: float = 200.0
    n: int = 1500
    t_end: float = 1000.0
    dt: Union[float, str] = "auto"
    ic: InitialCondition1D = field(default_factory=GaussianBumpAtP2)
    snapshot_stride: int = 0  # steps between snapshots; 0 keeps only the final state
    record_stride: int = 0  # steps between rows of the space-time record; 0 disables it
    stop_when_stationary: bool = False
    stationary_window: int = STATIONARY_WINDOW
    stationary_tol: float = STATIONARY_TOL

    @property
    def dx(self) -> float:
        return self.L / (self.n - 1)

    def max_stable_dt(self) -> float:
        return DT_SAFETY * self.dx**2 / (2.0 * max(1.0, self.params.d))

    def validate(self):
        if self.n < 3:
            raise ParameterError("need at least 3 grid points")
        if not self.L > 0.0:
            raise ParameterError("domain length must be positive")
        if not self.t_end >= 0.0:
            raise ParameterError("t_end must be non-negative")
        if self.dt != "auto" and not (isinstance(self.dt, (int, float)) and self.dt > 0):
            raise ParameterError(f"dt must be 'auto' or a positive number, got {self.dt!r}")


@dataclass
class Field1D:
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    time: float
    step: int = 0

    @property
    def L(self) -> float:
        return float(self.x[-1] - self.x[0])


@dataclass
class SpaceTimeRecord:
    """Dense (time, x) samples of both species."""

    times: np.ndarray
    x: np.ndarray
    u: np.ndarray  # (n_times, n_x)
    v: np.ndarray

    def shifted(self, dt: float) -> "SpaceTimeRecord":
        return SpaceTimeRecord(self.times + dt, self.x, self.u, self.v)


@dataclass
class Sim1DResult:
    config: Sim1DConfig
    dt: float
    n_steps: int
    snapshots: list[Field1D]
    stationary_at: Optional[float] = None
    record: Optional[SpaceTimeRecord] = None

    @property
    def final(self) -> Field1D:
        return self.snapshots[-1]


def initial_state(cfg: Sim1DConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p = cfg.params
    x = np.linspace(0.0, cfg.L, cfg.n)
    ic = cfg.ic
    if isinstance(ic, GaussianBumpAtP2):
        base = eqm.p2(p).u
        u = base + ic.amplitude * np.exp(-ic.width * (x - ic.center) ** 2)
        v = u + p.C
    elif isinstance(ic, GaussianBumpAt0C):
        u = ic.amplitude * np.exp(-ic.width * (x - ic.center) ** 2)
        v = u + p.C
    elif isinstance(ic, UniformAt):
        u = np.full(cfg.n, float(ic.point[0]))
        v = np.full(cfg.n, float(ic.point[1]))
    elif isinstance(ic, StepFront):
        x0 = 0.5 * cfg.L if ic.position is None else ic.position
        left = x < x0
        u = np.where(left, ic.left[0], ic.right[0]).astype(float)
        v = np.where(left, ic.left[1], ic.right[1]).astype(float)
    elif isinstance(ic, Custom):
        u = np.array(ic.u, dtype=float)
        v = np.array(ic.v, dtype=float)
        if u.shape != (cfg.n,) or v.shape != (cfg.n,):
            raise ParameterError(f"custom initial condition must have shape ({cfg.n},)")
    else:
        raise ParameterError(f"unknown initial condition {ic!r}")
    if np.any(u < 0.0) or np.any(v < 0.0):
        raise ParameterError("initial densities must be non-negative")
    if p.singular_at_zero_prey and np.any(u == 0.0):
        raise ParameterError("C = 0 requires strictly positive prey everywhere")
    return x, np.ascontiguousarray(u), np.ascontiguousarray(v)


def time_step(cfg: Sim1DConfig) -> tuple[float, int]:
    """(dt, n_steps) landing exactly on t_end."""
    bound = cfg.max_stable_dt()
    if cfg.dt == "auto":
        n_steps = max(1, math.ceil(cfg.t_end / bound)) if cfg.t_end > 0 else 0
        dt = cfg.t_end / n_steps if n_steps else bound
        return dt, n_steps
    dt = float(cfg.dt)
    if dt > bound / DT_SAFETY:
        warnings.warn(f"dt={dt} exceeds the explicit stability limit {bound / DT_SAFETY:.4g}", RuntimeWarning)
    return dt, int(round(cfg.t_end / dt))


def _raise_failure(status, step, index, x, dt, n):
    species = "v" if index >= n else "u"
    i = index - n if index >= n else index
    t = step * dt
    raise IntegrationError(
        f"{kernels.STATUS_NAMES.get(status, status)} in {species} at x={x[i]:.6g}, t={t:.6g}",
        time=t,
        location=float(x[i]),
    )


def simulate1d(cfg: Sim1DConfig, backend: str | None = None) -> Sim1DResult:
    """Run the explicit scheme, returning snapshots (always including the final state)."""
    cfg.validate()
    p = cfg.params
    x, u, v = initial_state(cfg)
    dt, n_steps = time_step(cfg)
    step_fn = kernels.euler1d if backend is None else kernels.backends()[backend][0]

    snapshots: list[Field1D] = []
    rec_t, rec_u, rec_v = [], [], []
    if cfg.snapshot_stride:
        snapshots.append(Field1D(x, u.copy(), v.copy(), 0.0, 0))
    if cfg.record_stride:
        rec_t.append(0.0)
        rec_u.append(u.copy())
        rec_v.append(v.copy())

    marks = [s for s in (cfg.snapshot_stride, cfg.record_stride) if s]
    if cfg.stop_when_stationary:
        marks.append(cfg.stationary_window)
    prev_u, prev_v = u.copy(), v.copy()
    stationary_at = None
    step = 0
    while step < n_steps:
        nxt = n_steps
        for m in marks:
            nxt = min(nxt, (step // m + 1) * m)
        status, done, index = step_fn(u, v, nxt - step, dt, cfg.dx, p.A, p.C, p.Q, p.S, p.d, ROUNDOFF_NEG, BLOWUP)
        if status != kernels.OK:
            _raise_failure(status, step + done, index, x, dt, cfg.n)
        step = nxt
        t = step * dt
        if cfg.snapshot_stride and step % cfg.snapshot_stride == 0 and step != n_steps:
            snapshots.append(Field1D(x, u.copy(), v.copy(), t, step))
        if cfg.record_stride and step % cfg.record_stride == 0:
            rec_t.append(t)
            rec_u.append(u.copy())
            rec_v.append(v.copy())
        if cfg.stop_when_stationary and step % cfg.stationary_window == 0:
            change = max(np.max(np.abs(u - prev_u)), np.max(np.abs(v - prev_v)))
            if change < cfg.stationary_tol:
                stationary_at = t
                break
            prev_u[:] = u
            prev_v[:] = v

    if not snapshots or snapshots[-1].step != step:
        snapshots.append(Field1D(x, u.copy(), v.copy(), step * dt, step))
    record = None
    if cfg.record_stride:
        record = SpaceTimeRecord(np.array(rec_t), x, np.array(rec_u), np.array(rec_v))
    return Sim1DResult(cfg, dt, step, snapshots, stationary_at, record)


FRONT_DEFAULT_L = 800.0
FRONT_DEFAULT_DX = 200.0 / 1499.0


def front_config(
    params: Params,
    left: tuple[float, float],
    right: tuple[float, float],
    t_end: float,
    L: float = FRONT_DEFAULT_L,
    n: int | None = None,
    record_interval: float = 1.0,
    position: float | None = None,
) -> Sim1DConfig:
    """Configuration for a front run with roughly the default grid spacing."""
    if n is None:
        n = int(round(L / FRONT_DEFAULT_DX)) + 1
    cfg = Sim1DConfig(params=params, L=L, n=n, t_end=t_end, ic=StepFront(left, right, position))
    dt, _ = time_step(cfg)
    cfg.record_stride = max(1, int(round(record_interval / dt)))
    return cfg


def run_front(cfg: Sim1DConfig, backend: str | None = None) -> SpaceTimeRecord:
    """Simulate a step initial condition and return the dense space-time record."""
    if not isinstance(cfg.ic, StepFront):
        raise ParameterError("run_front needs a StepFront initial condition")
    for state in (cfg.ic.left, cfg.ic.right):
        du, dv = reaction(state[0], state[1], cfg.params)
        if abs(du) > 1e-10 or abs(dv) > 1e-10:
            raise ParameterError(f"front end state {state} is not an equilibrium")
    if not cfg.record_stride:
        dt, _ = time_step(cfg)
        cfg.record_stride = max(1, int(round(1.0 / dt)))
    return simulate1d(cfg, backend=backend).record
