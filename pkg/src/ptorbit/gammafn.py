"""Gamma function via the Lanczos approximation.

Self-contained double-precision implementation (g = 7, 9 coefficients)
so the closed-form period expressions do not pull in a special-function
dependency.  Relative error is below 1e-13 for real arguments in the
range exercised here; see the table-driven test against high-precision
reference values.
"""

import math

__all__ = ["gamma"]

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def gamma(z: float) -> float:
    """Gamma(z) for real z, poles excepted."""
    if z != z:
        return z
    if z <= 0.0 and z == math.floor(z):
        raise ValueError(f"gamma pole at z={z}")
    if z < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (math.sin(math.pi * z) * gamma(1.0 - z))
    zm1 = z - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (zm1 + i)
    t = zm1 + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (zm1 + 0.5) * math.exp(-t) * acc
