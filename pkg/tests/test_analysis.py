import math

import numpy as np
import pytest

from hollingtanner import analysis
from hollingtanner.analysis import Morphology
from hollingtanner.errors import NoFrontError
from hollingtanner.pde1d import Field1D, SpaceTimeRecord
from hollingtanner.pde2d import Field2D

REF = 0.25


def field1d(u, L=200.0):
    x = np.linspace(0.0, L, len(u))
    return Field1D(x, np.asarray(u, float), np.zeros(len(u)), 0.0)


def field2d(u):
    ny, nx = u.shape
    return Field2D(nx, ny, 1.0, u, np.zeros_like(u), 0.0)


def disks(n_side=6, radius=5.0, size=200):
    yy, xx = np.mgrid[0:size, 0:size]
    u = np.full((size, size), REF + 0.1)
    pitch = size / n_side
    for j in range(n_side):
        for i in range(n_side):
            cx, cy = (i + 0.5) * pitch, (j + 0.5) * pitch
            u[(xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2] = REF - 0.1
    return u


def serpentine(size=200, width=6, pitch=20):
    u = np.full((size, size), REF + 0.1)
    rows = list(range(5, size - width, pitch))
    for n, r in enumerate(rows):
        u[r : r + width, 5 : size - 5] = REF - 0.1
        if n + 1 < len(rows):
            col = slice(size - 5 - width, size - 5) if n % 2 == 0 else slice(5, 5 + width)
            u[r : rows[n + 1] + width, col] = REF - 0.1
    return u


def stripes(size=200, period=40, width=10):
    xx = np.arange(size)
    row = np.where((xx % period) < width, REF - 0.1, REF + 0.1)
    return np.tile(row, (size, 1))


# -------------------------------------------------------------- wave number


def test_single_mode_wavenumber():
    x = np.linspace(0, 200, 1500)
    k = analysis.dominant_wavenumber(field1d(np.cos(0.3 * x)))
    assert k == pytest.approx(0.3, abs=2 * math.pi / 200)


def test_constant_field_wavenumber_zero():
    assert analysis.dominant_wavenumber(field1d(np.full(100, 0.3))) == 0.0


def test_noise_has_no_dominant_peak():
    rng = np.random.default_rng(0)
    assert analysis.dominant_wavenumber(field1d(rng.normal(size=4096))) == 0.0


def test_wavenumber_invariances():
    x = np.linspace(0, 200, 1500)
    u = 0.3 + 0.1 * np.cos(0.27 * x + 0.4) + 0.02 * np.cos(0.9 * x)
    k = analysis.dominant_wavenumber(field1d(u))
    assert analysis.dominant_wavenumber(field1d(u + 7.0)) == pytest.approx(k, rel=1e-12)
    assert analysis.dominant_wavenumber(field1d(u[::-1])) == pytest.approx(k, rel=1e-12)


def test_wavenumber_needs_samples():
    with pytest.raises(ValueError):
        analysis.dominant_wavenumber(field1d(np.ones(8)))


def test_wavenumber_2d():
    yy, xx = np.mgrid[0:128, 0:128]
    k = analysis.dominant_wavenumber2d(field2d(np.cos(2 * np.pi * 8 * xx / 128)))
    assert k == pytest.approx(2 * np.pi * 8 / 128)


# -------------------------------------------------------------- period


def test_sine_period():
    t = np.arange(0, 2000, 0.5)
    assert analysis.temporal_period(np.sin(2 * np.pi * t / 100), t) == pytest.approx(100, abs=0.5)


def test_constant_series_has_no_period():
    assert analysis.temporal_period(np.full(1000, 0.2), dt=1.0) is None


def test_too_few_extrema():
    t = np.arange(0, 200, 1.0)
    assert analysis.temporal_period(np.sin(2 * np.pi * t / 150), t) is None


def test_period_scale_invariant():
    t = np.arange(0, 3000, 0.7)
    y = np.sin(2 * np.pi * t / 113.0) + 0.3 * np.sin(4 * np.pi * t / 113.0)
    assert analysis.temporal_period(y * 37.5, t) == analysis.temporal_period(y, t)


# -------------------------------------------------------------- amplitudes


def test_amplitude_uniform():
    f = Field2D(4, 4, 1.0, np.full((4, 4), 0.22), np.full((4, 4), 0.5), 0.0)
    assert analysis.amplitude_stats(f) == (0.22, 0.22, 0.5, 0.5)


# -------------------------------------------------------------- morphology


def test_uniform_is_homogeneous():
    m = analysis.classify_pattern2d(field2d(np.full((50, 50), REF)), REF)
    assert m.morphology is Morphology.HOMOGENEOUS


def test_disks_are_cold_spots():
    m = analysis.classify_pattern2d(field2d(disks()), REF)
    assert m.morphology is Morphology.COLD_SPOTS
    assert m.component_count == 36
    assert 4 * math.pi * 0.8 <= m.mean_compactness < analysis.SPOT_MAX_COMPACTNESS


def test_inverted_disks_are_hot_spots():
    u = 2 * REF - disks()
    assert analysis.classify_pattern2d(field2d(u), REF).morphology is Morphology.HOT_SPOTS


def test_serpentine_is_labyrinthine():
    m = analysis.classify_pattern2d(field2d(serpentine()), REF)
    assert m.morphology is Morphology.LABYRINTHINE
    assert m.component_count == 1


def test_stripes_are_labyrinthine():
    m = analysis.classify_pattern2d(field2d(stripes()), REF)
    assert m.component_count == 5
    assert m.morphology is Morphology.LABYRINTHINE


def test_few_disks_are_mixed():
    assert analysis.classify_pattern2d(field2d(disks(n_side=3)), REF).morphology is Morphology.MIXED


def test_component_metrics_single_cell_and_edge():
    mask = np.zeros((5, 5), bool)
    mask[2, 2] = True
    assert analysis.component_metrics(mask) == (1, 16.0)
    mask = np.zeros((5, 5), bool)
    mask[0, :2] = True  # edge of the domain counts as exposed
    assert analysis.component_metrics(mask) == (1, 18.0)


@pytest.mark.parametrize("op", [np.rot90, np.flipud, np.fliplr, np.transpose])
@pytest.mark.parametrize("maker", [disks, serpentine, stripes])
def test_morphology_symmetry_invariant(op, maker):
    u = maker()
    a = analysis.classify_pattern2d(field2d(u), REF)
    b = analysis.classify_pattern2d(field2d(op(u).copy()), REF)
    assert (a.morphology, a.component_count, a.mean_compactness) == (b.morphology, b.component_count, b.mean_compactness)


# -------------------------------------------------------------- fronts


def tanh_record(speed=0.5, t_end=200.0, x0=100.0, L=400.0, n=2001):
    x = np.linspace(0, L, n)
    t = np.arange(0, t_end + 1e-9, 1.0)
    u = np.tanh(x[None, :] - x0 - speed * t[:, None])
    return SpaceTimeRecord(t, x, u, np.zeros_like(u))


def test_tanh_front_speed():
    rep = analysis.front_speed(tanh_record(), level=0.0)
    assert rep.speed == pytest.approx(0.5, rel=0.01)
    assert rep.direction == 1
    assert rep.fit_residual < 1e-3


def test_static_front_has_zero_speed():
    rec = tanh_record(speed=0.0)
    rep = analysis.front_speed(rec, level=0.0)
    assert rep.speed == pytest.approx(0.0, abs=1e-12)


def test_time_shift_invariance():
    rec = tanh_record(speed=-0.3, x0=300.0)
    a = analysis.front_speed(rec, level=0.0)
    b = analysis.front_speed(rec.shifted(1234.5), level=0.0)
    assert a.speed == pytest.approx(b.speed, rel=1e-9)
    assert a.direction == b.direction == -1


def test_no_front():
    rec = tanh_record()
    flat = SpaceTimeRecord(rec.times, rec.x, np.full_like(rec.u, 0.4), rec.v)
    with pytest.raises(NoFrontError):
        analysis.front_speed(flat, level=0.0)
    rep = analysis.front_speed(flat, level=0.0, allow_no_front=True)
    assert not rep.found and rep.speed == 0.0


def test_wave_trains_counted_behind_front():
    x = np.linspace(0, 400, 4001)
    t = np.arange(0, 100, 1.0)
    front = 300 - 1.0 * t[:, None]
    behind = x[None, :] > front
    u = np.where(behind, 0.5 + 0.3 * np.sin(2 * np.pi * (x[None, :] - front) / 25), 0.0)
    rec = SpaceTimeRecord(t, x, u, np.zeros_like(u))
    assert analysis.wave_train_count(rec, level=0.1) >= 3


def test_report_serialisation(tmp_path):
    rep = analysis.PatternReport(0.27, True, None, (0.0, 0.3, 0.43, 0.55), Morphology.COLD_SPOTS, 40, 21.0)
    text = rep.to_text()
    assert "dominant_k=0.27000000000000002\n" in text
    assert "morphology=ColdSpots\n" in text
    assert "temporal_period=none\n" in text
    path = tmp_path / "batch.csv"
    analysis.write_reports_csv(path, [("a", rep), ("b", rep)])
    lines = path.read_text().splitlines()
    assert lines[0].startswith("run,dominant_k,k_band_check")
    assert len(lines) == 3
