"""Equilibria of the diffusion-free system, their stability and bifurcation loci."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoEquilibriumError
from .model import DerivedAlgebra, Params, jacobian

# |Delta| below this is treated as a double root
DELTA_TOL = 1e-14
# |S - S_H| (and |tr|, |det|) below this is a bifurcation point, not hyperbolic
TIE_TOL = 1e-12


class Kind(str, enum.Enum):
    ORIGIN = "Origin"
    PREY_ONLY = "PreyOnly"
    PREDATOR_ONLY = "PredatorOnly"
    COEXIST_P1 = "CoexistP1"
    COEXIST_P2 = "CoexistP2"


class Stability(str, enum.Enum):
    STABLE_NODE = "StableNode"
    STABLE_FOCUS = "StableFocus"
    UNSTABLE_NODE = "UnstableNode"
    UNSTABLE_FOCUS = "UnstableFocus"
    SADDLE = "Saddle"
    SADDLE_NODE = "SaddleNode"
    NON_HYPERBOLIC = "NonHyperbolic"

    @property
    def is_stable(self) -> bool:
        return self in (Stability.STABLE_NODE, Stability.STABLE_FOCUS)


@dataclass(frozen=True)
class Equilibrium:
    u: float
    v: float
    kind: Kind
    stability: Stability

    @property
    def point(self) -> tuple[float, float]:
        return (self.u, self.v)


def in_phi(u: float, v: float, C: float) -> bool:
    """Membership in the absorbing box [0, 1] x [0, 1 + C]."""
    return 0.0 <= u <= 1.0 and 0.0 <= v <= 1.0 + C


def coexistence_roots(p: Params) -> list[float]:
    """Real roots of u^2 - H1 u - H2 = 0, ascending (possibly negative)."""
    alg = DerivedAlgebra.of(p)
    H1, H2, delta = alg.H1, alg.H2, alg.Delta
    if abs(delta) <= DELTA_TOL:
        return [0.5 * H1]
    if delta < 0.0:
        return []
    root = math.sqrt(delta)
    if H1 == 0.0:
        return [-0.5 * root, 0.5 * root]
    # the larger-magnitude root first, the other from the product of roots (-H2)
    big = 0.5 * (H1 + math.copysign(root, H1))
    small = -H2 / big
    return sorted([big, small])


def stability_from_jacobian(J: np.ndarray, tol: float = TIE_TOL) -> Stability:
    tr = J[0, 0] + J[1, 1]
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    if abs(det) <= tol:
        return Stability.SADDLE_NODE if abs(tr) > tol else Stability.NON_HYPERBOLIC
    if det < 0.0:
        return Stability.SADDLE
    if abs(tr) <= tol:
        return Stability.NON_HYPERBOLIC
    focus = tr * tr - 4.0 * det < 0.0
    if tr < 0.0:
        return Stability.STABLE_FOCUS if focus else Stability.STABLE_NODE
    return Stability.UNSTABLE_FOCUS if focus else Stability.UNSTABLE_NODE


def hopf_threshold(A: float, C: float, Q: float) -> float:
    """Value of S at which P2 changes stability.

    This is the prey self-interaction entry J11 evaluated at P2:
    (H1 + sqrt(D))(Q - sqrt(D)) / (H1 + 2A + sqrt(D)).
    The special rows (D = 0, H2 = 0, H1 = 0) are limits of this expression.
    """
    alg = DerivedAlgebra.from_values(A, C, Q)
    if alg.Delta < -DELTA_TOL:
        raise NoEquilibriumError(f"Delta = {alg.Delta:.3g} < 0: P2 does not exist")
    root = math.sqrt(max(alg.Delta, 0.0))
    u2 = 0.5 * (alg.H1 + root)
    if not 0.0 < u2 <= 1.0:
        raise NoEquilibriumError(f"P2 prey density {u2:.6g} is outside Phi")
    return (alg.H1 + root) * (Q - root) / (alg.H1 + 2.0 * A + root)


def table_threshold(A: float, C: float, Q: float) -> float:
    """S threshold selected by the sign pattern of (H1, H2, Delta).

    Row-by-row evaluation of the sign-pattern stability table; kept separate from
    :func:`hopf_threshold` so the two can be cross-checked.
    """
    alg = DerivedAlgebra.from_values(A, C, Q)
    H1, H2, delta = alg.H1, alg.H2, alg.Delta
    if abs(delta) <= DELTA_TOL and H1 > 0.0 and H2 < 0.0:
        return Q * H1 / (H1 + 2.0 * A)
    if delta > 0.0 and H2 == 0.0 and H1 > 0.0:
        return H1 * (Q - H1) / (1.0 - Q)
    if delta > 0.0 and H1 == 0.0 and H2 > 0.0:
        sq = math.sqrt(H2)
        return sq * (Q - 2.0 * sq) / (A + sq)
    if delta > 0.0 and ((H1 > 0.0 and H2 < 0.0) or H2 > 0.0):
        root = math.sqrt(delta)
        return (H1 + root) * (Q - root) / (H1 + 2.0 * A + root)
    raise NoEquilibriumError("no coexistence equilibrium in Phi for this sign pattern")


def table_p2_stable(p: Params) -> bool:
    """P2 stability as read off the table (S above the row threshold)."""
    return p.S > table_threshold(p.A, p.C, p.Q)


def saddle_node_locus(A: float, C: float) -> float:
    """Smallest positive Q with Delta(Q) = 0.

    Delta expands to Q^2 - 2(1 - A + 2C) Q + (1 + A)^2.
    """
    b = 1.0 - A + 2.0 * C
    c = (1.0 + A) ** 2
    disc = b * b - c
    if disc < 0.0 or b <= 0.0:
        raise NoEquilibriumError(f"Delta(Q) has no positive real root for A={A}, C={C}")
    big = b + math.sqrt(disc)
    # product of roots is c, so the small root is c / big without cancellation
    return c / big


def bt_point(A: float, C: float) -> tuple[float, float]:
    """Bogdanov-Takens point (Q*, S*) on the saddle-node line."""
    q_star = saddle_node_locus(A, C)
    H1 = 1.0 - A - q_star
    return q_star, q_star * H1 / (H1 + 2.0 * A)


def _classify_coexistence(u: float, p: Params, kind: Kind) -> Equilibrium:
    v = u + p.C
    J = jacobian(u, v, p)
    stab = stability_from_jacobian(J)
    if kind is Kind.COEXIST_P2 and stab not in (Stability.SADDLE, Stability.SADDLE_NODE):
        threshold = hopf_threshold(p.A, p.C, p.Q)
        if abs(p.S - threshold) <= TIE_TOL:
            stab = Stability.NON_HYPERBOLIC
    return Equilibrium(u, v, kind, stab)


def classify_equilibria(p: Params) -> list[Equilibrium]:
    """All equilibria of the temporal system that lie in the first quadrant.

    Coexistence points are reported only when inside Phi. With ``C == 0`` the
    origin and the predator-only point coincide; the merged point is reported
    once as a non-hyperbolic origin.
    """
    out: list[Equilibrium] = []
    if p.singular_at_zero_prey:
        out.append(Equilibrium(0.0, 0.0, Kind.ORIGIN, Stability.NON_HYPERBOLIC))
    else:
        out.append(Equilibrium(0.0, 0.0, Kind.ORIGIN, stability_from_jacobian(jacobian(0.0, 0.0, p))))
    out.append(Equilibrium(1.0, 0.0, Kind.PREY_ONLY, stability_from_jacobian(jacobian(1.0, 0.0, p))))
    if not p.singular_at_zero_prey:
        out.append(
            Equilibrium(0.0, p.C, Kind.PREDATOR_ONLY, stability_from_jacobian(jacobian(0.0, p.C, p)))
        )

    roots = coexistence_roots(p)
    if len(roots) == 1:
        u = roots[0]
        if 0.0 < u <= 1.0:
            out.append(Equilibrium(u, u + p.C, Kind.COEXIST_P2, Stability.SADDLE_NODE))
        return out
    if len(roots) == 2:
        u1, u2 = roots
        # u1 == 0 is the predator-only point itself (H2 == 0)
        if 0.0 < u1 <= 1.0 and abs(u1) > TIE_TOL:
            out.append(_classify_coexistence(u1, p, Kind.COEXIST_P1))
        if 0.0 < u2 <= 1.0:
            out.append(_classify_coexistence(u2, p, Kind.COEXIST_P2))
    return out


def find(equilibria: list[Equilibrium], kind: Kind) -> Equilibrium | None:
    for eq in equilibria:
        if eq.kind is kind:
            return eq
    return None


def p2(p: Params) -> Equilibrium:
    """The coexistence equilibrium P2, raising when it is not in Phi."""
    eq = find(classify_equilibria(p), Kind.COEXIST_P2)
    if eq is None:
        raise NoEquilibriumError(f"P2 does not exist in Phi for {p}")
    return eq


def predator_only(p: Params) -> Equilibrium:
    eq = find(classify_equilibria(p), Kind.PREDATOR_ONLY)
    if eq is None:
        raise NoEquilibriumError("(0, C) coincides with the singular origin when C = 0")
    return eq
