"""Dimensionless modified Holling-Tanner model with alternative predator food.

    u_t = u((1 - u) - Q v / (u + A)) + u_xx
    v_t = S v (1 - v / (u + C)) + d v_xx

All functions are pure and accept scalars or numpy arrays for the state.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError, SingularityError


@dataclass(frozen=True)
class DimensionalParams:
    r: float
    s: float
    q: float
    a: float
    h: float
    c: float
    K: float
    D1: float
    D2: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (np.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be strictly positive, got {value!r}")
        if self.a >= self.K:
            raise ParameterError(f"half-saturation a={self.a} must be below K={self.K}")


@dataclass(frozen=True)
class Params:
    """Dimensionless parameters.

    ``C == 0`` is accepted (the original Holling-Tanner model) but the
    predator equation is then singular at ``u == 0``; see :attr:`singular_at_zero_prey`.
    """

    A: float
    C: float
    Q: float
    S: float
    d: float = 1.0

    def __post_init__(self):
        for name in ("A", "C", "Q", "S", "d"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if not 0.0 < self.A < 1.0:
            raise ParameterError(f"A must lie in (0, 1), got {self.A}")
        if self.C < 0.0:
            raise ParameterError(f"C must be non-negative, got {self.C}")
        if self.Q <= 0.0:
            raise ParameterError(f"Q must be positive, got {self.Q}")
        if self.S <= 0.0:
            raise ParameterError(f"S must be positive, got {self.S}")
        if self.d <= 0.0:
            raise ParameterError(f"d must be positive, got {self.d}")

    @property
    def singular_at_zero_prey(self) -> bool:
        return self.C == 0.0

    def replace(self, **changes) -> "Params":
        values = asdict(self)
        values.update(changes)
        return Params(**values)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DerivedAlgebra:
    H1: float
    H2: float
    Delta: float

    @classmethod
    def from_values(cls, A: float, C: float, Q: float) -> "DerivedAlgebra":
        H1 = 1.0 - A - Q
        H2 = A - C * Q
        return cls(H1=H1, H2=H2, Delta=H1 * H1 + 4.0 * H2)

    @classmethod
    def of(cls, p: Params) -> "DerivedAlgebra":
        return cls.from_values(p.A, p.C, p.Q)


def derived(p: Params) -> DerivedAlgebra:
    """H1, H2 and Delta, recomputed from ``p`` on every call."""
    return DerivedAlgebra.of(p)


def nondimensionalize(dim: DimensionalParams) -> Params:
    return Params(
        A=dim.a / dim.K,
        C=dim.c / (dim.h * dim.K),
        Q=dim.q * dim.h / (dim.K * dim.r),
        S=dim.s / dim.r,
        d=dim.D2 / dim.D1,
    )


def _check_denominators(u, p: Params):
    u = np.asarray(u, dtype=float)
    if np.any(u + p.A == 0.0):
        raise SingularityError("u + A vanishes")
    if np.any(u + p.C == 0.0):
        raise SingularityError("u + C vanishes (C = 0 and u = 0)")


def reaction(u, v, p: Params):
    """Reaction rates ``(du, dv)`` at state ``(u, v)``."""
    _check_denominators(u, p)
    du = u * ((1.0 - u) - p.Q * v / (u + p.A))
    dv = p.S * v * (1.0 - v / (u + p.C))
    return du, dv


def jacobian(u: float, v: float, p: Params) -> np.ndarray:
    """Analytic 2x2 Jacobian of the reaction terms."""
    _check_denominators(u, p)
    A, C, Q, S = p.A, p.C, p.Q, p.S
    ua = u + A
    r = v / (u + C)  # ratio form stays finite for tiny C
    return np.array(
        [
            [1.0 - 2.0 * u - Q * A * v / (ua * ua), -Q * u / ua],
            [S * r * r, S - 2.0 * S * r],
        ]
    )

