"""Points, potential, and turning-point geometry on the Riemann surface of (ix)^a.

The multivalued power is made single-valued by carrying, next to the
planar position x, the continuously unwrapped argument ``phi`` of (ix).
The branch cut sits on the positive imaginary axis, so phi = 0 on the
negative imaginary axis and sheet k covers phi in ((2k-1)pi, (2k+1)pi].
"""

import cmath
import math
from dataclasses import dataclass, field

__all__ = [
    "OriginError",
    "SurfacePoint",
    "SimulationConfig",
    "TurningPointPair",
    "lift",
    "phase_power",
    "potential",
    "force",
    "turning_point",
    "turning_pair",
    "turning_phase",
    "sheet_of_phase",
    "DEFAULT_ORIGIN_FLOOR",
]

DEFAULT_ORIGIN_FLOOR = 1e-12


class OriginError(ValueError):
    """Operation hit the branch point at x = 0 (or its guard radius)."""


def sheet_of_phase(phi: float) -> int:
    """Sheet index k such that phi lies in ((2k-1)pi, (2k+1)pi]."""
    return math.ceil((phi - math.pi) / (2.0 * math.pi))


@dataclass(frozen=True)
class SurfacePoint:
    """Position on the surface: planar value plus unwrapped argument of (ix)."""

    value: complex
    phi: float

    @property
    def sheet(self) -> int:
        return sheet_of_phase(self.phi)

    def phase_residual(self) -> float:
        """|exp(i phi)|x| - i x| / |x|; zero for a consistent point."""
        if self.value == 0:
            raise OriginError("phase undefined at the origin")
        r = abs(self.value)
        return abs(r * cmath.exp(1j * self.phi) - 1j * self.value) / r


@dataclass(frozen=True)
class SimulationConfig:
    """Deformation parameter of H = p^2 + x^2 (ix)^epsilon at fixed energy 1."""

    epsilon: float
    energy: float = 1.0

    def __post_init__(self):
        if self.energy != 1.0:
            raise ValueError("energy is fixed to 1 (rescale x and t instead)")


@dataclass(frozen=True)
class TurningPointPair:
    """PT-symmetric pair of momentum zeros, indexed by n >= 0."""

    n: int
    plus_point: SurfacePoint
    minus_point: SurfacePoint
    epsilon: float = field(default=0.0)


def lift(x: complex, sheet: int = 0) -> SurfacePoint:
    """Attach an unwrapped phase to a planar point, placing it on `sheet`."""
    x = complex(x)
    if x == 0:
        raise OriginError("cannot lift x = 0: phase undefined at the origin")
    phi = cmath.phase(1j * x) + 2.0 * math.pi * sheet
    return SurfacePoint(x, phi)


def phase_power(pt: SurfacePoint, alpha: float) -> complex:
    """(ix)^alpha continued along the point's own phase history."""
    if pt.value == 0:
        raise OriginError("phase power undefined at the origin")
    mag = abs(pt.value) ** alpha
    ang = alpha * pt.phi
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def potential(pt: SurfacePoint, cfg: SimulationConfig) -> complex:
    """V(x) = x^2 (ix)^eps, evaluated as -(ix)^(2+eps)."""
    if pt.value == 0:
        if cfg.epsilon >= 0:
            return 0j
        raise OriginError("potential singular at x = 0 for epsilon < 0")
    return -phase_power(pt, 2.0 + cfg.epsilon)


def force(pt: SurfacePoint, cfg: SimulationConfig,
          origin_floor: float = DEFAULT_ORIGIN_FLOOR) -> complex:
    """Acceleration d2x/dt2 = 2i(2+eps)(ix)^(1+eps) from Hamilton's equations.

    With the convention dx/dt = 2p forced by the period pi of the
    harmonic limit (epsilon = 0); the momentum equation is
    dp/dt = force/2.
    """
    if abs(pt.value) < origin_floor:
        raise OriginError(
            f"|x|={abs(pt.value):.3e} below origin floor {origin_floor:.1e}")
    return 2j * (2.0 + cfg.epsilon) * phase_power(pt, 1.0 + cfg.epsilon)


def turning_phase(n: int, epsilon: float) -> float:
    """Unwrapped phase of the plus member of pair n: (2n+1)pi/(2+eps)."""
    return (2 * n + 1) * math.pi / (2.0 + epsilon)


def turning_point(solution_index: int, cfg: SimulationConfig) -> SurfacePoint:
    """Solution exp(i pi (4N-4-eps)/(4+2eps)) of 1 + (ix)^(2+eps) = 0.

    The phase is assigned from the solution angle directly, so points
    with large |N| live off the principal sheet.
    """
    if cfg.epsilon < 0:
        raise ValueError("turning points are enumerated for epsilon >= 0 only")
    theta = math.pi * (4 * solution_index - 4 - cfg.epsilon) / (4.0 + 2.0 * cfg.epsilon)
    value = complex(math.cos(theta), math.sin(theta))
    return SurfacePoint(value, theta + math.pi / 2.0)


def turning_pair(n: int, cfg: SimulationConfig) -> TurningPointPair:
    """The nth PT-symmetric pair, from solution indices (n+1, -n)."""
    if n < 0:
        raise ValueError("pair index must be nonnegative")
    plus = turning_point(n + 1, cfg)
    minus = turning_point(-n, cfg)
    return TurningPointPair(n=n, plus_point=plus, minus_point=minus,
                            epsilon=cfg.epsilon)
