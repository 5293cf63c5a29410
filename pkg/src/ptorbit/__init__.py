"""Complex classical trajectories of the PT-symmetric oscillator family
H = p^2 + x^2 (ix)^epsilon: simulation on the Riemann surface of (ix)^a,
periodic-orbit detection and topological classification, and critical-
exponent analysis of orbit-size divergences."""

__version__ = "0.1.0"
