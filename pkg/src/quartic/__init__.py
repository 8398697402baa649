"""Plane quartics: bitangents, determinantal representations, octads and sums of squares."""

import mpmath

from .kernel.tolerance import DEFAULT_PROFILE

# Values created outside an explicit working-precision block still get the default precision.
mpmath.mp.prec = DEFAULT_PROFILE.precision_bits
