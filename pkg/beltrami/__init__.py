"""
Beltrami package constants.
"""

import math

# The flat torus is (R / 2 pi Z)^3 throughout.
TORUS_PERIOD = 2.0 * math.pi
DEFAULT_BASE_POINT = (0.0, 0.0, 0.0, 1.0)
