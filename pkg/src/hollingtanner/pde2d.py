"""Two-dimensional reaction-diffusion simulator on a rectangle with zero-flux edges.

Arrays are stored as (ny, nx); node (j, i) sits at (i * spacing, j * spacing).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import kernels
from .errors import IntegrationError, ParameterError
from .model import Params
from .pde1d import BLOWUP, DT_SAFETY, ROUNDOFF_NEG, STATIONARY_TOL, STATIONARY_WINDOW


@dataclass(frozen=True)
class RandomAround:
    """Uniform perturbations in [-amplitude, amplitude], drawn per node and species.

    The stream comes from numpy's Philox counter-based generator keyed by
    ``seed``: all u perturbations first, then all v perturbations, in C order.
    """

    point: tuple[float, float]
    amplitude: float = 0.01
    seed: Optional[int] = None


@dataclass(frozen=True)
class Uniform:
    point: tuple[float, float]


@dataclass(frozen=True)
class Custom2D:
    u: np.ndarray
    v: np.ndarray


InitialCondition2D = Union[RandomAround, Uniform, Custom2D]


@dataclass
class Sim2DConfig:
    params: Params
    ic: InitialCondition2D
    nx: int = 200
    ny: int = 200
    spacing: float = 1.0
    dt: float = 0.2
    t_end: float = 1000.0
    snapshot_stride: int = 0
    allow_unstable_dt: bool = False
    stop_when_stationary: bool = False
    stationary_window: int = STATIONARY_WINDOW
    stationary_tol: float = STATIONARY_TOL

    def max_stable_dt(self) -> float:
        return DT_SAFETY * self.spacing**2 / (4.0 * max(1.0, self.params.d))

    def validate(self):
        if self.nx < 3 or self.ny < 3:
            raise ParameterError("need at least 3 nodes per axis")
        if not self.spacing > 0.0:
            raise ParameterError("spacing must be positive")
        if not self.dt > 0.0:
            raise ParameterError("dt must be positive")
        if not self.t_end >= 0.0:
            raise ParameterError("t_end must be non-negative")
        if isinstance(self.ic, RandomAround):
            if self.ic.amplitude < 0.0:
                raise ParameterError("perturbation amplitude must be non-negative")
            if self.ic.amplitude > 0.0 and self.ic.seed is None:
                raise ParameterError("a random initial condition needs a seed")


@dataclass
class Field2D:
    nx: int
    ny: int
    spacing: float
    u: np.ndarray
    v: np.ndarray
    time: float
    step: int = 0


@dataclass
class Sim2DResult:
    config: Sim2DConfig
    dt: float
    n_steps: int
    snapshots: list[Field2D]
    stationary_at: Optional[float] = None

    @property
    def final(self) -> Field2D:
        return self.snapshots[-1]


def initial_state(cfg: Sim2DConfig) -> tuple[np.ndarray, np.ndarray]:
    shape = (cfg.ny, cfg.nx)
    ic = cfg.ic
    if isinstance(ic, Uniform):
        u = np.full(shape, float(ic.point[0]))
        v = np.full(shape, float(ic.point[1]))
    elif isinstance(ic, RandomAround):
        u = np.full(shape, float(ic.point[0]))
        v = np.full(shape, float(ic.point[1]))
        if ic.amplitude > 0.0:
            rng = np.random.Generator(np.random.Philox(ic.seed))
            u += rng.uniform(-ic.amplitude, ic.amplitude, size=shape)
            v += rng.uniform(-ic.amplitude, ic.amplitude, size=shape)
    elif isinstance(ic, Custom2D):
        u = np.array(ic.u, dtype=float)
        v = np.array(ic.v, dtype=float)
        if u.shape != shape or v.shape != shape:
            raise ParameterError(f"custom initial condition must have shape {shape}")
    else:
        raise ParameterError(f"unknown initial condition {ic!r}")
    if np.any(u < 0.0) or np.any(v < 0.0):
        raise ParameterError("initial densities must be non-negative")
    if cfg.params.singular_at_zero_prey and np.any(u == 0.0):
        raise ParameterError("C = 0 requires strictly positive prey everywhere")
    return np.ascontiguousarray(u), np.ascontiguousarray(v)


def time_step(cfg: Sim2DConfig) -> tuple[float, int]:
    """Honour cfg.dt when stable; otherwise shrink it (warning) unless overridden."""
    bound = cfg.max_stable_dt()
    dt = float(cfg.dt)
    if dt > bound:
        if cfg.allow_unstable_dt:
            warnings.warn(f"dt={dt} exceeds the stability guard {bound:.4g}; kept by override", RuntimeWarning)
        else:
            warnings.warn(f"dt={dt} exceeds the stability guard {bound:.4g}; reducing", RuntimeWarning)
            n_steps = max(1, math.ceil(cfg.t_end / bound))
            return cfg.t_end / n_steps, n_steps
    return dt, int(round(cfg.t_end / dt))


def simulate2d(cfg: Sim2DConfig, backend: str | None = None) -> Sim2DResult:
    cfg.validate()
    p = cfg.params
    u, v = initial_state(cfg)
    dt, n_steps = time_step(cfg)
    step_fn = kernels.euler2d if backend is None else kernels.backends()[backend][1]

    def snap(t, step):
        return Field2D(cfg.nx, cfg.ny, cfg.spacing, u.copy(), v.copy(), t, step)

    snapshots = [snap(0.0, 0)] if cfg.snapshot_stride else []
    marks = [s for s in (cfg.snapshot_stride,) if s]
    if cfg.stop_when_stationary:
        marks.append(cfg.stationary_window)
    prev_u, prev_v = u.copy(), v.copy()
    stationary_at = None
    step = 0
    size = cfg.nx * cfg.ny
    while step < n_steps:
        nxt = n_steps
        for m in marks:
            nxt = min(nxt, (step // m + 1) * m)
        status, done, index = step_fn(u, v, nxt - step, dt, cfg.spacing, p.A, p.C, p.Q, p.S, p.d, ROUNDOFF_NEG, BLOWUP)
        if status != kernels.OK:
            species = "v" if index >= size else "u"
            j, i = divmod(index % size, cfg.nx)
            t = (step + done) * dt
            raise IntegrationError(
                f"{kernels.STATUS_NAMES.get(status, status)} in {species} at "
                f"(x, y)=({i * cfg.spacing:.6g}, {j * cfg.spacing:.6g}), t={t:.6g}",
                time=t,
                location=(i * cfg.spacing, j * cfg.spacing),
            )
        step = nxt
        t = step * dt
        if cfg.snapshot_stride and step % cfg.snapshot_stride == 0 and step != n_steps:
            snapshots.append(snap(t, step))
        if cfg.stop_when_stationary and step % cfg.stationary_window == 0:
            change = max(np.max(np.abs(u - prev_u)), np.max(np.abs(v - prev_v)))
            if change < cfg.stationary_tol:
                stationary_at = t
                break
            prev_u[:] = u
            prev_v[:] = v

    if not snapshots or snapshots[-1].step != step:
        snapshots.append(snap(step * dt, step))
    return Sim2DResult(cfg, dt, step, snapshots, stationary_at)
