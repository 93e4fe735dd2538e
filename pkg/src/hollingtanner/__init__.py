"""Modified Holling-Tanner predator-prey model with alternative food and diffusion.

Equilibria and bifurcation loci, Turing analysis, temporal attractors,
explicit 1D/2D reaction-diffusion simulation and pattern post-processing.
"""

from .errors import (
    HollingTannerError,
    IntegrationError,
    NoEquilibriumError,
    NoFrontError,
    NotAnEquilibriumError,
    ParameterError,
    SingularityError,
    TemporallyUnstableError,
    UndecidedError,
)
from .model import DerivedAlgebra, DimensionalParams, Params, derived, jacobian, nondimensionalize, reaction
from .equilibria import Equilibrium, Kind, Stability, bt_point, classify_equilibria, hopf_threshold, saddle_node_locus
from .turing import dispersion, dispersion_curve, turing_scan, turing_test
from .dynamics_ode import basin_scan, detect_attractor, integrate
from .pde1d import Sim1DConfig, run_front, simulate1d
from .pde2d import Sim2DConfig, simulate2d
from .analysis import (
    amplitude_stats,
    classify_pattern2d,
    dominant_wavenumber,
    front_speed,
    temporal_period,
)
from .kernels import BACKEND

__version__ = "0.1.0"
