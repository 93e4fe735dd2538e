"""Linear stability of homogeneous states under diffusion.

A mode exp(lambda t + i k x) around an equilibrium with Jacobian J grows at
the roots of lambda^2 - alpha(k^2) lambda + beta(k^2) = 0 where

    alpha(k^2) = tr J - k^2 (1 + d)
    beta(k^2)  = d k^4 - (d J11 + J22) k^2 + det J

In two dimensions k^2 is replaced by m^2 + l^2, so every result here applies
to |k| of a planar wave vector.
"""

from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import equilibria as eqm
from .errors import NotAnEquilibriumError, TemporallyUnstableError
from .model import Params, jacobian, reaction

RESIDUAL_TOL = 1e-10
N_SAMPLES = 2048


class RegionTag(str, enum.Enum):
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"
    V = "v"
    VI = "vi"
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    NO_P2 = "none"


@dataclass
class DispersionCurve:
    k_samples: np.ndarray
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    lambda0: float
    lambda_d: float
    k_d: float
    band: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class TuringResult:
    is_turing: bool
    band: Optional[tuple[float, float]] = None

    def __bool__(self):
        return self.is_turing


def _point(eq) -> tuple[float, float]:
    if isinstance(eq, eqm.Equilibrium):
        return eq.u, eq.v
    u, v = eq
    return float(u), float(v)


def checked_jacobian(p: Params, eq) -> np.ndarray:
    u, v = _point(eq)
    du, dv = reaction(u, v, p)
    if abs(du) >= RESIDUAL_TOL or abs(dv) >= RESIDUAL_TOL:
        raise NotAnEquilibriumError(f"({u}, {v}) has reaction residual ({du:.3g}, {dv:.3g})")
    return jacobian(u, v, p)


def dispersion_from_jacobian(J: np.ndarray, d: float, k):
    """Roots (lambda+, lambda-) for wave number(s) ``k``; lambda+ has the larger real part."""
    k2 = np.asarray(k, dtype=float) ** 2
    tr = J[0, 0] + J[1, 1]
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    alpha = tr - k2 * (1.0 + d)
    beta = d * k2 * k2 - (d * J[0, 0] + J[1, 1]) * k2 + det
    disc = alpha * alpha - 4.0 * beta
    sq = np.sqrt(disc.astype(complex))
    # avoid cancellation on the real branch: big root first, other from the product
    sign = np.where(alpha >= 0.0, 1.0, -1.0)
    big = 0.5 * (alpha + sign * sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        other = np.where(big != 0.0, beta / np.where(big != 0.0, big, 1.0), 0.5 * (alpha - sign * sq))
    plus = np.where(big.real >= other.real, big, other)
    minus = np.where(big.real >= other.real, other, big)
    # complex pairs: report +i first for a stable convention
    swap = (disc < 0.0) & (plus.imag < 0.0)
    plus, minus = np.where(swap, minus, plus), np.where(swap, plus, minus)
    if plus.ndim == 0:
        return complex(plus), complex(minus)
    return plus, minus


def dispersion(p: Params, eq, k):
    """Growth rates (lambda+, lambda-) of wave number ``k`` around equilibrium ``eq``."""
    J = checked_jacobian(p, eq)
    return dispersion_from_jacobian(J, p.d, k)


def _beta_coefficients(J: np.ndarray, d: float):
    b = d * J[0, 0] + J[1, 1]
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    return b, det


def unstable_band(J: np.ndarray, d: float) -> Optional[tuple[float, float]]:
    """Positive roots (k1, k2) of beta(k^2) = 0 when beta dips below zero."""
    b, det = _beta_coefficients(J, d)
    disc = b * b - 4.0 * d * det
    if b <= 0.0 or disc <= 0.0:
        return None
    root = math.sqrt(disc)
    k2_hi = (b + root) / (2.0 * d)
    k2_lo = det / (d * k2_hi)  # product of the k^2 roots is det / d
    if k2_lo <= 0.0:
        return None
    return math.sqrt(k2_lo), math.sqrt(k2_hi)


def turing_test(p: Params, eq) -> TuringResult:
    J = checked_jacobian(p, eq)
    tr = J[0, 0] + J[1, 1]
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    if not (tr < 0.0 and det > 0.0):
        raise TemporallyUnstableError(f"tr J = {tr:.6g}, det J = {det:.6g}: no Turing test possible")
    b, _ = _beta_coefficients(J, p.d)
    if b > 0.0 and b * b - 4.0 * p.d * det > 0.0:
        return TuringResult(True, unstable_band(J, p.d))
    return TuringResult(False, None)


def k_grid(J: np.ndarray, d: float, n: int = N_SAMPLES) -> np.ndarray:
    """Hybrid geometric + linear sampling of [0, k_max]."""
    b, _ = _beta_coefficients(J, d)
    k_max = 4.0 * math.sqrt(max(b, 1.0) / (2.0 * d))
    n_lin = n // 2
    n_geo = n - n_lin - 1
    lin = np.linspace(0.0, k_max, n_lin)
    geo = np.geomspace(k_max * 1e-4, k_max, n_geo)
    return np.unique(np.concatenate([[0.0], lin, geo]))


def _refine_max(J, d, k, re, i):
    lo = k[max(i - 1, 0)]
    hi = k[min(i + 1, len(k) - 1)]
    if hi <= lo:
        return k[i], re[i]
    res = minimize_scalar(
        lambda x: -dispersion_from_jacobian(J, d, x)[0].real,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if -res.fun >= re[i]:
        return float(res.x), float(-res.fun)
    return float(k[i]), float(re[i])


def dispersion_curve(p: Params, eq, n: int = N_SAMPLES) -> DispersionCurve:
    J = checked_jacobian(p, eq)
    k = k_grid(J, p.d, n)
    plus, minus = dispersion_from_jacobian(J, p.d, k)
    re = plus.real
    i = int(np.argmax(re))
    k_d, lam_d = _refine_max(J, p.d, k, re, i)
    return DispersionCurve(
        k_samples=k,
        lambda_plus=plus,
        lambda_minus=minus,
        lambda0=float(re[0]),
        lambda_d=lam_d,
        k_d=k_d,
        band=unstable_band(J, p.d),
    )


def _p1_in_phi(p: Params) -> bool:
    return eqm.find(eqm.classify_equilibria(p), eqm.Kind.COEXIST_P1) is not None


def classify_region_p2(p: Params, limit_cycle: bool, curve: DispersionCurve | None = None) -> RegionTag:
    """Region of the P2 Turing space.

    lambda0 < 0 splits into (i)/(ii) by the sign of lambda_d. With lambda0 > 0
    the global maximum is always positive, so the remaining regions are told apart
    by whether P1 lies in Phi ((iii)/(iv)) or not ((v)/(vi)), and by the
    supplied limit-cycle flag.
    """
    eq = eqm.p2(p)
    if curve is None:
        curve = dispersion_curve(p, eq)
    if curve.lambda0 < 0.0:
        return RegionTag.II if curve.lambda_d > 0.0 else RegionTag.I
    if _p1_in_phi(p):
        return RegionTag.III if limit_cycle else RegionTag.IV
    return RegionTag.V if limit_cycle else RegionTag.VI


def _positive_windows(re: np.ndarray) -> list[tuple[int, int]]:
    pos = re > 0.0
    windows = []
    start = None
    for i, flag in enumerate(pos):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            windows.append((start, i - 1))
            start = None
    if start is not None:
        windows.append((start, len(re) - 1))
    return windows


def classify_region_0c(p: Params, n: int = N_SAMPLES) -> RegionTag:
    """Region of the (0, C) dispersion diagram.

    alpha: unstable at k = 0 and again in a separate window at larger k;
    beta: unstable only in the window touching k = 0; gamma: Re lambda < 0 for all k.
    A positive window away from k = 0 without small-k instability is reported as alpha.
    """
    eq = eqm.predator_only(p)
    J = checked_jacobian(p, eq)
    k = k_grid(J, p.d, n)
    re = dispersion_from_jacobian(J, p.d, k)[0].real
    windows = _positive_windows(re)
    narrow = [w for w in windows if w[1] - w[0] < 2]
    if narrow:
        # refine around thin windows so they are neither missed nor split
        fine = np.unique(np.concatenate([k] + [np.linspace(k[max(a - 2, 0)], k[min(b + 2, len(k) - 1)], 257) for a, b in narrow]))
        k = fine
        re = dispersion_from_jacobian(J, p.d, k)[0].real
        windows = _positive_windows(re)
    if not windows:
        return RegionTag.GAMMA
    touches_zero = windows[0][0] == 0
    if touches_zero and len(windows) == 1:
        return RegionTag.BETA
    return RegionTag.ALPHA


@dataclass
class ScanCell:
    Q: float
    S: float
    tag: RegionTag
    lambda0: float = math.nan
    lambda_d: float = math.nan
    band: Optional[tuple[float, float]] = None
    error: str = ""


@dataclass
class TuringScan:
    A: float
    C: float
    d: float
    Q_values: np.ndarray
    S_values: np.ndarray
    cells: list[list[ScanCell]]  # indexed [i_S][i_Q]
    boundaries: dict[str, np.ndarray] = field(default_factory=dict)

    def tags(self) -> np.ndarray:
        return np.array([[c.tag.value for c in row] for row in self.cells])

    def cell_at(self, Q: float, S: float) -> ScanCell:
        iq = int(np.argmin(np.abs(self.Q_values - Q)))
        js = int(np.argmin(np.abs(self.S_values - S)))
        return self.cells[js][iq]

    def write_csv(self, path, fmt: Callable[[float], str] = repr):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["Q", "S", "tag", "lambda0", "lambda_d", "k1", "k2"])
            for row in self.cells:
                for c in row:
                    k1, k2 = c.band if c.band else ("", "")
                    writer.writerow(
                        [
                            fmt(c.Q),
                            fmt(c.S),
                            c.tag.value,
                            "" if math.isnan(c.lambda0) else fmt(c.lambda0),
                            "" if math.isnan(c.lambda_d) else fmt(c.lambda_d),
                            k1 if k1 == "" else fmt(k1),
                            k2 if k2 == "" else fmt(k2),
                        ]
                    )


def _scan_cell(A, C, d, Q, S, limit_cycle) -> ScanCell:
    try:
        p = Params(A=A, C=C, Q=Q, S=S, d=d)
        eq = eqm.p2(p)
    except Exception as exc:  # recorded per cell
        return ScanCell(Q, S, RegionTag.NO_P2, error=str(exc))
    try:
        curve = dispersion_curve(p, eq)
        cycle = False
        if curve.lambda0 > 0.0:
            cycle = bool(limit_cycle(p))
        tag = classify_region_p2(p, cycle, curve)
        return ScanCell(Q, S, tag, curve.lambda0, curve.lambda_d, curve.band)
    except Exception as exc:
        return ScanCell(Q, S, RegionTag.NO_P2, error=str(exc))


def _lambda0_lambda_d(A, C, d, Q, S):
    try:
        p = Params(A=A, C=C, Q=Q, S=S, d=d)
        curve = dispersion_curve(p, eqm.p2(p))
    except Exception:
        return math.nan, math.nan
    return curve.lambda0, curve.lambda_d


def _bisect(f, a, b, fa, iters=50):
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m)
        if math.isnan(fm):
            return math.nan
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _boundaries(scan: TuringScan, lam0: np.ndarray, lamd: np.ndarray) -> dict[str, np.ndarray]:
    A, C, d = scan.A, scan.C, scan.d
    Qs, Ss = scan.Q_values, scan.S_values
    out: dict[str, list] = {"lambda0": [], "lambda_d": [], "delta": []}
    for name, grid, idx in (("lambda0", lam0, 0), ("lambda_d", lamd, 1)):
        for iq, Q in enumerate(Qs):
            for js in range(len(Ss) - 1):
                f0, f1 = grid[js, iq], grid[js + 1, iq]
                if np.isnan(f0) or np.isnan(f1) or (f0 > 0.0) == (f1 > 0.0):
                    continue
                s = _bisect(lambda S: _lambda0_lambda_d(A, C, d, Q, S)[idx], Ss[js], Ss[js + 1], f0, iters=40)
                if not math.isnan(s):
                    out[name].append((Q, s))
    delta = lambda Q: (1.0 - A - Q) ** 2 + 4.0 * (A - C * Q)
    for S in Ss:
        for iq in range(len(Qs) - 1):
            f0, f1 = delta(Qs[iq]), delta(Qs[iq + 1])
            if (f0 > 0.0) != (f1 > 0.0):
                out["delta"].append((_bisect(delta, Qs[iq], Qs[iq + 1], f0), S))
    result = {}
    for name, pts in out.items():
        arr = np.array(sorted(pts), dtype=float).reshape(-1, 2)
        result[name] = arr
    return result


def turing_scan(
    A: float,
    C: float,
    d: float,
    Q_range: Sequence[float],
    S_range: Sequence[float],
    resolution: int | tuple[int, int],
    limit_cycle: Callable[[Params], bool] | None = None,
    threads: int = 1,
    boundaries: bool = True,
) -> TuringScan:
    """Classify a (Q, S) grid into P2 Turing-space regions.

    ``limit_cycle`` decides cycle existence for cells with lambda0 > 0; it
    defaults to simulation of the temporal system. Cells are independent and
    are evaluated with ``threads`` workers; assembly order is fixed.
    """
    if isinstance(resolution, int):
        nq = ns = resolution
    else:
        nq, ns = resolution
    if nq < 1 or ns < 1:
        raise ValueError("resolution must be positive")
    if limit_cycle is None:
        from .dynamics_ode import has_limit_cycle as limit_cycle
    Qs = np.linspace(Q_range[0], Q_range[1], nq)
    Ss = np.linspace(S_range[0], S_range[1], ns)
    jobs = [(float(Q), float(S)) for S in Ss for Q in Qs]
    work = lambda job: _scan_cell(A, C, d, job[0], job[1], limit_cycle)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flat = list(pool.map(work, jobs))
    else:
        flat = [work(job) for job in jobs]
    cells = [flat[j * nq:(j + 1) * nq] for j in range(ns)]
    scan = TuringScan(A, C, d, Qs, Ss, cells)
    if boundaries:
        lam0 = np.array([[c.lambda0 for c in row] for row in cells])
        lamd = np.array([[c.lambda_d for c in row] for row in cells])
        scan.boundaries = _boundaries(scan, lam0, lamd)
    return scan
