"""Post-processing of simulated fields: wave numbers, periods, morphology and fronts."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence, Union

import numpy as np
from scipy import ndimage
from scipy.signal import find_peaks

from .errors import NoFrontError
from .pde1d import Field1D, SpaceTimeRecord
from .pde2d import Field2D

# a spectral peak must exceed this multiple of the median magnitude
PEAK_OVER_MEDIAN = 10.0
MIN_AMPLITUDE = 1e-6
MIN_EXTREMA = 6
# relative prominence for counting maxima in a time series or profile
PROMINENCE = 0.1

# morphology thresholds, calibrated on synthetic disk and stripe fields
HOMOGENEOUS_FRACTION = 0.01
SPOT_MIN_COMPONENTS = 20
SPOT_MAX_COMPACTNESS = 30.0
LABYRINTH_MAX_COMPONENTS = 5
LABYRINTH_MIN_COMPACTNESS = 60.0


class Morphology(str, enum.Enum):
    COLD_SPOTS = "ColdSpots"
    HOT_SPOTS = "HotSpots"
    MIXED = "Mixed"
    LABYRINTHINE = "Labyrinthine"
    HOMOGENEOUS = "Homogeneous"


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (tuple, list)):
        return ",".join(_fmt(x) for x in value)
    return str(value)


class _KeyValue:
    def as_items(self) -> list[tuple[str, str]]:
        return [(f.name, _fmt(getattr(self, f.name))) for f in fields(self)]

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.as_items())


@dataclass
class PatternReport(_KeyValue):
    dominant_k: float
    k_band_check: Optional[bool] = None
    temporal_period: Optional[float] = None
    amplitude: Optional[tuple[float, float, float, float]] = None
    morphology: Optional[Morphology] = None
    component_count: int = 0
    mean_compactness: float = 0.0


@dataclass
class FrontReport(_KeyValue):
    speed: float
    level: float
    fit_residual: float
    direction: int = 0  # +1 moving towards larger x, -1 towards smaller, 0 static
    found: bool = True


@dataclass
class MorphologyResult:
    morphology: Morphology
    component_count: int
    mean_compactness: float
    below_fraction: float


def write_reports_csv(path, rows: Sequence[tuple[str, _KeyValue]]):
    """Batch output: one row per analysed run, first column the run name."""
    if not rows:
        raise ValueError("no reports to write")
    header = ["run"] + [k for k, _ in rows[0][1].as_items()]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for name, rep in rows:
            w.writerow([name] + [v for _, v in rep.as_items()])


# ---------------------------------------------------------------- spectra


def _parabolic_offset(y0: float, y1: float, y2: float) -> float:
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return 0.0
    return 0.5 * (y0 - y2) / denom


def dominant_wavenumber(field: Union[Field1D, np.ndarray], L: float | None = None) -> float:
    """Wave number of the strongest spatial mode of u.

    ``L`` is the sampled period n * dx of the discrete transform; it is derived
    from the grid when a :class:`Field1D` is given.
    """
    if isinstance(field, Field1D):
        u = np.asarray(field.u, dtype=float)
        dx = float(field.x[1] - field.x[0])
        L = u.size * dx
    else:
        u = np.asarray(field, dtype=float)
        if L is None:
            raise ValueError("L is required for a bare array")
    if u.size < 16:
        raise ValueError("need at least 16 samples")
    mag = np.abs(np.fft.rfft(u - u.mean()))
    mag[0] = 0.0
    peak = int(np.argmax(mag))
    if peak == 0 or mag[peak] <= PEAK_OVER_MEDIAN * np.median(mag[1:]):
        return 0.0
    offset = 0.0
    if 0 < peak < mag.size - 1:
        offset = _parabolic_offset(mag[peak - 1], mag[peak], mag[peak + 1])
    return 2.0 * math.pi * (peak + offset) / L


def dominant_wavenumber2d(field: Field2D) -> float:
    """|k| of the strongest non-constant Fourier mode of a 2D prey field."""
    u = field.u - field.u.mean()
    mag = np.abs(np.fft.rfft2(u))
    mag[0, 0] = 0.0
    j, i = np.unravel_index(int(np.argmax(mag)), mag.shape)
    if mag[j, i] <= PEAK_OVER_MEDIAN * np.median(mag):
        return 0.0
    ky = np.fft.fftfreq(field.ny, d=field.spacing)[j]
    kx = np.fft.rfftfreq(field.nx, d=field.spacing)[i]
    return 2.0 * math.pi * math.hypot(kx, ky)


def wavelength(k: float) -> float:
    return math.inf if k == 0.0 else 2.0 * math.pi / k


# ---------------------------------------------------------------- time series


def _peak_times(t: np.ndarray, y: np.ndarray, idx: np.ndarray) -> np.ndarray:
    out = t[idx].astype(float)
    inner = (idx > 0) & (idx < len(y) - 1)
    for n in np.nonzero(inner)[0]:
        i = idx[n]
        off = _parabolic_offset(y[i - 1], y[i], y[i + 1])
        if off >= 0:
            out[n] = t[i] + off * (t[i + 1] - t[i])
        else:
            out[n] = t[i] + off * (t[i] - t[i - 1])
    return out


def temporal_period(series: np.ndarray, times: np.ndarray | None = None, dt: float = 1.0) -> Optional[float]:
    """Mean spacing of successive maxima over the last half of the series."""
    y = np.asarray(series, dtype=float)
    t = np.arange(y.size) * dt if times is None else np.asarray(times, dtype=float)
    keep = t >= t[0] + 0.5 * (t[-1] - t[0])
    y, t = y[keep], t[keep]
    spread = float(np.ptp(y)) if y.size else 0.0
    if spread < MIN_AMPLITUDE:
        return None
    prom = PROMINENCE * spread
    maxima, _ = find_peaks(y, prominence=prom)
    minima, _ = find_peaks(-y, prominence=prom)
    if len(maxima) + len(minima) < MIN_EXTREMA or len(maxima) < 2:
        return None
    return float(np.mean(np.diff(_peak_times(t, y, maxima))))


# ---------------------------------------------------------------- amplitudes


def amplitude_stats(field: Union[Field1D, Field2D]) -> tuple[float, float, float, float]:
    return (float(field.u.min()), float(field.u.max()), float(field.v.min()), float(field.v.max()))


# ---------------------------------------------------------------- morphology


def component_metrics(mask: np.ndarray) -> tuple[int, float]:
    """(count, mean perimeter^2/area) of 4-connected components of ``mask``.

    Perimeter counts cell edges between a member and a non-member, with the
    domain edge treated as non-member.
    """
    labels, count = ndimage.label(mask)
    if count == 0:
        return 0, 0.0
    padded = np.pad(labels, 1)
    perim = np.zeros(count + 1)
    for a, b in (
        (padded[1:-1, 1:-1], padded[:-2, 1:-1]),
        (padded[1:-1, 1:-1], padded[2:, 1:-1]),
        (padded[1:-1, 1:-1], padded[1:-1, :-2]),
        (padded[1:-1, 1:-1], padded[1:-1, 2:]),
    ):
        exposed = (a > 0) & (a != b)
        perim += np.bincount(a[exposed], minlength=count + 1)
    area = np.bincount(labels.ravel(), minlength=count + 1)
    compact = perim[1:] ** 2 / area[1:]
    return int(count), float(compact.mean())


def classify_pattern2d(field: Union[Field2D, np.ndarray], reference: float) -> MorphologyResult:
    """Morphology of the prey field thresholded at ``reference``."""
    u = field.u if isinstance(field, Field2D) else np.asarray(field, dtype=float)
    below = u < reference
    frac = float(below.mean())
    if frac < HOMOGENEOUS_FRACTION or frac > 1.0 - HOMOGENEOUS_FRACTION:
        return MorphologyResult(Morphology.HOMOGENEOUS, 0, 0.0, frac)
    count, compact = component_metrics(below)
    if count >= SPOT_MIN_COMPONENTS and compact < SPOT_MAX_COMPACTNESS:
        return MorphologyResult(Morphology.COLD_SPOTS, count, compact, frac)
    hot_count, hot_compact = component_metrics(~below)
    if hot_count >= SPOT_MIN_COMPONENTS and hot_compact < SPOT_MAX_COMPACTNESS:
        return MorphologyResult(Morphology.HOT_SPOTS, hot_count, hot_compact, frac)
    if count <= LABYRINTH_MAX_COMPONENTS and compact > LABYRINTH_MIN_COMPACTNESS:
        return MorphologyResult(Morphology.LABYRINTHINE, count, compact, frac)
    return MorphologyResult(Morphology.MIXED, count, compact, frac)


# ---------------------------------------------------------------- fronts


def _crossings(x: np.ndarray, row: np.ndarray, level: float) -> np.ndarray:
    g = row - level
    idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
    exact = np.nonzero(g == 0.0)[0]
    pos = x[idx] + g[idx] * (x[idx + 1] - x[idx]) / (g[idx] - g[idx + 1])
    return np.sort(np.concatenate([pos, x[exact]]))


def _fit(t: np.ndarray, xf: np.ndarray) -> tuple[float, float]:
    A = np.column_stack([t - t.mean(), np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(A, xf, rcond=None)
    resid = xf - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid**2)))


def _default_level(record: SpaceTimeRecord, species: str) -> float:
    row = getattr(record, species)[0]
    return 0.5 * (float(row[0]) + float(row[-1]))


def front_positions(record: SpaceTimeRecord, level: float, species: str = "u", side: str = "left"):
    """Outermost level crossing (``side`` = 'left' or 'right') at each time; NaN when absent."""
    data = getattr(record, species)
    out = np.full(len(record.times), np.nan)
    for n, row in enumerate(data):
        c = _crossings(record.x, row, level)
        if c.size:
            out[n] = c[0] if side == "left" else c[-1]
    return out


def front_speed(
    record: SpaceTimeRecord,
    level: float | None = None,
    species: str = "u",
    side: str = "auto",
    allow_no_front: bool = False,
) -> FrontReport:
    """Front speed from a least-squares line through (t, x_front) over the last half.

    With ``side='auto'`` both the leftmost and the rightmost crossing are
    tracked and the better-fitting line is kept; oscillations behind a front
    make the trailing crossing jump around.
    """
    if level is None:
        level = _default_level(record, species)
    t = np.asarray(record.times, dtype=float)
    keep = t >= t[0] + 0.5 * (t[-1] - t[0])
    sides = ("left", "right") if side == "auto" else (side,)
    best = None
    for s in sides:
        xf = front_positions(record, level, species, s)[keep]
        if np.any(np.isnan(xf)):
            continue
        slope, resid = _fit(t[keep], xf)
        if best is None or resid < best[1]:
            best = (slope, resid)
    if best is None:
        if allow_no_front:
            return FrontReport(0.0, float(level), 0.0, 0, found=False)
        raise NoFrontError(f"level {level:.6g} is not crossed at every time in the analysed window")
    slope, resid = best
    direction = 0 if slope == 0.0 else (1 if slope > 0 else -1)
    return FrontReport(abs(slope), float(level), resid, direction)


def wave_train_count(record: SpaceTimeRecord, level: float | None = None, species: str = "u") -> int:
    """Number of prominent maxima behind the front in the final profile.

    "Behind" is the side the front leaves: to the right of a front moving
    left, and vice versa.
    """
    rep = front_speed(record, level, species)
    row = getattr(record, species)[-1]
    side = "left" if rep.direction < 0 else "right"
    xf = front_positions(record, rep.level, species, side)[-1]
    region = row[record.x > xf] if rep.direction <= 0 else row[record.x < xf]
    if region.size < 3:
        return 0
    spread = float(np.ptp(region))
    if spread < MIN_AMPLITUDE:
        return 0
    peaks, _ = find_peaks(region, prominence=PROMINENCE * spread)
    return int(len(peaks))


def pattern_report(
    field: Union[Field1D, Field2D],
    band: Optional[tuple[float, float]] = None,
    reference: Optional[float] = None,
    series: Optional[tuple[np.ndarray, np.ndarray]] = None,
) -> PatternReport:
    """Collect the metrics that apply to ``field`` into one report."""
    if isinstance(field, Field1D):
        k = dominant_wavenumber(field)
        L = field.L
    else:
        k = dominant_wavenumber2d(field)
        L = field.spacing * (max(field.nx, field.ny) - 1)
    check = None
    if band is not None:
        slack = 2.0 * math.pi / L
        check = bool(band[0] - slack <= k <= band[1] + slack)
    rep = PatternReport(k, check, amplitude=amplitude_stats(field))
    if series is not None:
        rep.temporal_period = temporal_period(series[1], times=series[0])
    if isinstance(field, Field2D) and reference is not None:
        m = classify_pattern2d(field, reference)
        rep.morphology = m.morphology
        rep.component_count = m.component_count
        rep.mean_compactness = m.mean_compactness
    return rep
