import numpy as np
import pytest

from hollingtanner import dynamics_ode as ode, equilibria as eqm
from hollingtanner.dynamics_ode import AttractorKind
from hollingtanner.errors import SingularityError, UndecidedError
from hollingtanner.model import Params


def P(Q, S, A=0.15, C=0.28):
    return Params(A=A, C=C, Q=Q, S=S)


# representative points of the four temporal regions at (A, C) = (0.15, 0.28)
REGION_I = P(0.575, 0.26)
REGION_II = P(0.575, 0.235)
REGION_III = P(0.575, 0.2)
REGION_IV = P(0.62, 0.26)


def test_fixed_point_stays(region_ii):
    e = eqm.p2(region_ii)
    traj = ode.integrate(region_ii, e.point, 200.0)
    assert np.max(np.abs(traj.states - np.array(e.point))) < 1e-8


def test_prey_free_axis_invariant(region_ii):
    traj = ode.integrate(region_ii, (0.0, 0.5), 200.0)
    assert np.all(traj.u == 0.0)
    assert traj.v[-1] == pytest.approx(region_ii.C, abs=1e-6)


def test_converges_to_p2(region_ii):
    traj = ode.integrate(region_ii, (0.2, 0.5), 3000.0)
    assert traj.states[-1] == pytest.approx((0.22642, 0.50642), abs=1e-5)


def test_rejects_bad_input(region_ii):
    with pytest.raises(ValueError):
        ode.integrate(region_ii, (-0.1, 0.5), 10.0)
    with pytest.raises(ValueError):
        ode.integrate(region_ii, (0.1, 0.5), 10.0, tol=0.0)


def test_singular_origin_signals():
    with pytest.raises(SingularityError):
        ode.integrate(Params(A=0.15, C=0.0, Q=2.0, S=0.28), (0.0, 0.5), 10.0)


def test_absorbing_region():
    rng = np.random.default_rng(7)
    for _ in range(20):
        p = Params(A=rng.uniform(0.05, 0.95), C=rng.uniform(0.01, 1), Q=rng.uniform(0.05, 2), S=rng.uniform(0.05, 2))
        traj = ode.integrate(p, tuple(rng.uniform(0, 2, 2)), 500.0)
        u, v = traj.states[-1]
        assert u <= 1 + 1e-6 and v <= (1 + p.C) * (1 + 1e-6)
        assert traj.states.min() >= -1e-7


def test_detect_coexistence():
    e = eqm.p2(REGION_I)
    assert ode.detect_attractor(REGION_I, (e.u + 0.01, e.v)).kind is AttractorKind.COEXISTENCE


def test_detect_limit_cycle():
    e = eqm.p2(REGION_II)
    rep = ode.detect_attractor(REGION_II, (e.u + 0.01, e.v))
    assert rep.kind is AttractorKind.LIMIT_CYCLE
    assert rep.period > 0
    umin, umax, vmin, vmax = rep.amplitude
    assert umax - umin > ode.CONVERGENCE_TOL


def test_detect_predator_only_region_iii():
    e = eqm.p2(REGION_III)
    assert ode.detect_attractor(REGION_III, (e.u + 0.01, e.v)).kind is AttractorKind.PREDATOR_ONLY


def test_undecided_for_short_horizon():
    e = eqm.p2(REGION_II)
    with pytest.raises(UndecidedError):
        ode.detect_attractor(REGION_II, (e.u + 0.01, e.v), t_max=20.0)


def test_section_crossings_on_synthetic_orbit():
    t = np.linspace(0, 100, 100001)
    C = 0.3
    u = 0.5 + 0.1 * np.cos(2 * np.pi * t / 10)
    v = u + C + 0.1 * np.sin(2 * np.pi * t / 10)
    cross = ode.section_crossings(ode.Trajectory(t, np.column_stack([u, v])), C)
    assert np.diff(cross) == pytest.approx(np.full(len(cross) - 1, 10.0), abs=1e-6)


@pytest.mark.parametrize(
    "params,classes",
    [
        (REGION_I, {"PredatorOnly", "Coexistence"}),
        (REGION_II, {"PredatorOnly", "LimitCycle"}),
        (REGION_IV, {"PredatorOnly"}),
    ],
)
def test_basin_classes(params, classes):
    scan = ode.basin_scan(params, 6, 6, t_max=3000.0)
    assert scan.class_set() == classes
    assert scan.classes.shape == (6, 6)
    assert np.all(np.isnan(scan.periods[scan.classes != "LimitCycle"]))


def test_basin_of_p2_is_one_band_per_column():
    # both branches of the stable manifold of P1 bound the P2 basin, so a
    # column may cross the separatrix twice but the P2 cells stay contiguous
    scan = ode.basin_scan(REGION_I, 12, 12, t_max=3000.0)
    for col in scan.classes.T:
        idx = np.nonzero(col == "Coexistence")[0]
        if idx.size:
            assert idx[-1] - idx[0] + 1 == idx.size


def test_basin_threads_match_serial():
    a = ode.basin_scan(REGION_III, 3, 3, t_max=2000.0)
    b = ode.basin_scan(REGION_III, 3, 3, t_max=2000.0, threads=3)
    assert np.array_equal(a.classes, b.classes)
