"""Temporal (diffusion-free) dynamics: integration, attractor detection, basins."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import equilibria as eqm
from .errors import IntegrationError, NoEquilibriumError, SingularityError, UndecidedError
from .model import Params

CONVERGENCE_TOL = 1e-6
CONSECUTIVE = 100
N_CROSSINGS = 10
MAX_STEP = 1.0


class AttractorKind(str, enum.Enum):
    PREDATOR_ONLY = "PredatorOnly"
    COEXISTENCE = "Coexistence"
    LIMIT_CYCLE = "LimitCycle"
    UNDECIDED = "undecided"


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n, 2)

    @property
    def u(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.states[:, 1]


@dataclass
class AttractorReport:
    kind: AttractorKind
    period: Optional[float] = None
    amplitude: Optional[tuple[float, float, float, float]] = None


def _rhs(p: Params):
    A, C, Q, S = p.A, p.C, p.Q, p.S

    def f(_t, y):
        u, v = y
        uc = u + C
        if uc == 0.0:
            raise SingularityError("u + C vanishes (C = 0 and u = 0)")
        return [u * ((1.0 - u) - Q * v / (u + A)), S * v * (1.0 - v / uc)]

    return f


def integrate(
    p: Params,
    ic: tuple[float, float],
    t_max: float,
    tol: float = 1e-8,
    sample_dt: float | None = None,
    max_step: float = MAX_STEP,
) -> Trajectory:
    """Adaptive Dormand-Prince 4(5) integration of the temporal system.

    Samples are the accepted steps, or a uniform grid when ``sample_dt`` is set.
    Negative excursions down to ``-10 tol`` are clamped to zero; deeper ones
    mean the scheme failed and raise :class:`IntegrationError`. ``max_step``
    keeps the step inside the stability region of the explicit pair near
    stable equilibria, where the error estimate alone would let it grow.
    """
    u0, v0 = float(ic[0]), float(ic[1])
    if u0 < 0.0 or v0 < 0.0:
        raise ValueError(f"initial condition must be non-negative, got {ic}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    t_eval = None
    if sample_dt is not None:
        n = int(math.floor(t_max / sample_dt)) + 1
        t_eval = np.arange(n) * sample_dt
    sol = solve_ivp(
        _rhs(p), (0.0, t_max), [u0, v0], method="RK45", rtol=tol, atol=tol, t_eval=t_eval, max_step=max_step
    )
    if sol.status != 0:
        raise IntegrationError(f"integration failed: {sol.message}", time=float(sol.t[-1]) if sol.t.size else 0.0)
    states = sol.y.T.copy()
    low = states.min()
    if low < -10.0 * tol:
        i = int(np.argmin(states.min(axis=1)))
        raise IntegrationError(f"negative density {low:.3g} beyond tolerance", time=float(sol.t[i]))
    np.maximum(states, 0.0, out=states)
    return Trajectory(sol.t.copy(), states)


def _targets(p: Params) -> dict[AttractorKind, tuple[float, float]]:
    out = {}
    if not p.singular_at_zero_prey:
        out[AttractorKind.PREDATOR_ONLY] = (0.0, p.C)
    try:
        e = eqm.p2(p)
        out[AttractorKind.COEXISTENCE] = (e.u, e.v)
    except NoEquilibriumError:
        pass
    return out


def section_crossings(traj: Trajectory, C: float) -> np.ndarray:
    """Times at which the orbit crosses v = u + C with du/dt > 0.

    On the predator nullcline dv/dt = 0, so g = v - u - C decreases exactly
    when the prey grows; crossings are located by linear interpolation.
    """
    g = traj.v - traj.u - C
    t = traj.times
    idx = np.nonzero((g[:-1] > 0.0) & (g[1:] <= 0.0))[0]
    return t[idx] + g[idx] * (t[idx + 1] - t[idx]) / (g[idx] - g[idx + 1])


def detect_attractor(
    p: Params,
    ic: tuple[float, float],
    t_max: float = 5000.0,
    tol: float = 1e-8,
    sample_dt: float = 0.5,
) -> AttractorReport:
    traj = integrate(p, ic, t_max, tol=tol, sample_dt=sample_dt)
    keep = traj.times >= 0.5 * t_max
    tail = Trajectory(traj.times[keep], traj.states[keep])

    last = tail.states[-CONSECUTIVE:]
    for kind, (ue, ve) in _targets(p).items():
        dist = np.hypot(last[:, 0] - ue, last[:, 1] - ve)
        if len(last) >= CONSECUTIVE and np.all(dist < CONVERGENCE_TOL):
            return AttractorReport(kind)

    crossings = section_crossings(tail, p.C)
    if len(crossings) >= 3:
        recent = crossings[-(N_CROSSINGS + 1):]
        period = float(np.mean(np.diff(recent)))
        window = tail.times >= recent[0]
        u, v = tail.u[window], tail.v[window]
        amp = (float(u.min()), float(u.max()), float(v.min()), float(v.max()))
        if amp[1] - amp[0] > CONVERGENCE_TOL and not _decaying(tail, crossings):
            return AttractorReport(AttractorKind.LIMIT_CYCLE, period=period, amplitude=amp)
    raise UndecidedError(f"no attractor identified by t = {t_max} for {p} from {ic}")


def _decaying(tail: Trajectory, crossings: np.ndarray) -> bool:
    """True when the oscillation amplitude is still shrinking (a slow focus)."""
    if len(crossings) < 4:
        return False
    amps = []
    for a, b in zip(crossings[:-1], crossings[1:]):
        m = (tail.times >= a) & (tail.times <= b)
        if m.any():
            amps.append(np.ptp(tail.u[m]))
    amps = np.array(amps)
    return bool(amps[-1] < 0.5 * amps[0])


def has_limit_cycle(p: Params, t_max: float = 5000.0, offset: float = 0.01) -> bool:
    """Whether an orbit started next to P2 settles on a periodic orbit."""
    e = eqm.p2(p)
    try:
        report = detect_attractor(p, (e.u + offset, e.v), t_max=t_max)
    except UndecidedError:
        report = detect_attractor(p, (e.u + offset, e.v), t_max=4.0 * t_max)
    return report.kind is AttractorKind.LIMIT_CYCLE


@dataclass
class BasinScan:
    params: Params
    u0: np.ndarray  # cell-centre coordinates, length n_u
    v0: np.ndarray  # length n_v
    classes: np.ndarray  # (n_v, n_u) array of AttractorKind values
    periods: np.ndarray  # (n_v, n_u), NaN unless LimitCycle

    def class_set(self) -> set[str]:
        return set(self.classes.ravel().tolist())


CLASS_CODES = {
    AttractorKind.PREDATOR_ONLY.value: 64,
    AttractorKind.COEXISTENCE.value: 128,
    AttractorKind.LIMIT_CYCLE.value: 192,
    AttractorKind.UNDECIDED.value: 0,
}


def _basin_cell(p, u, v, t_max):
    try:
        rep = detect_attractor(p, (u, v), t_max=t_max)
    except UndecidedError:
        try:
            rep = detect_attractor(p, (u, v), t_max=4.0 * t_max)
        except UndecidedError:
            return AttractorKind.UNDECIDED.value, math.nan
    return rep.kind.value, (rep.period if rep.period is not None else math.nan)


def basin_scan(
    p: Params,
    n_u: int,
    n_v: int | None = None,
    t_max: float = 5000.0,
    threads: int = 1,
) -> BasinScan:
    """Classify cell centres of [0, 1] x [0, 1 + C] by their attractor."""
    n_v = n_u if n_v is None else n_v
    if n_u < 2 or n_v < 2:
        raise ValueError("basin grid needs at least 2 cells per axis")
    u0 = (np.arange(n_u) + 0.5) / n_u
    v0 = (np.arange(n_v) + 0.5) * (1.0 + p.C) / n_v
    jobs = [(float(u), float(v)) for v in v0 for u in u0]
    work = lambda job: _basin_cell(p, job[0], job[1], t_max)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flat = list(pool.map(work, jobs))
    else:
        flat = [work(job) for job in jobs]
    classes = np.array([c for c, _ in flat], dtype=object).reshape(n_v, n_u)
    periods = np.array([t for _, t in flat], dtype=float).reshape(n_v, n_u)
    return BasinScan(p, u0, v0, classes, periods)
