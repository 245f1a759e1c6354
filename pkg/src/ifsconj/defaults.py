"""Package-wide numeric defaults.

The real line is sampled on a working interval [-R, R]; R is a knob, not a
mathematical restriction.
"""

DEFAULT_RADIUS = 10.0
DEFAULT_ANCHOR = 1.0

HYPERBOLIC_TOL = 1e-6
BORDERLINE_TOL = 1e-3

FATE_MARGIN = 0.01
