"""Camera-style observables taken from a strip shape."""
import numpy as np

from .elastica import material_point

# tracked point sits 1 cm from the tip along the strip
REFERENCE_OFFSET = 0.01


def _displacement(shape, rest, s, signed):
    x, z = material_point(shape, s)
    x0, z0 = material_point(rest, s)
    d = np.hypot(x - x0, z - z0) * 1e3
    if signed and z < z0:
        d = -d
    return float(d)


def reference_displacement(shape, rest, offset=REFERENCE_OFFSET, signed=False):
    """Displacement (mm) of the material point at arc length L - offset.

    Euclidean by default; `signed` gives it the sign of the transverse motion.
    """
    return _displacement(shape, rest, shape.length - offset, signed)


def tip_displacement(shape, rest, signed=False):
    return _displacement(shape, rest, shape.length, signed)


def tip_deflection(shape, rest):
    """Transverse (Z) tip motion, mm."""
    return float((shape.Z[-1] - rest.Z[-1]) * 1e3)


def circumcircle_curvature(p1, p2, p3):
    """Signed curvature of the circle through three points, positive for a left turn."""
    (x1, z1), (x2, z2), (x3, z3) = p1, p2, p3
    cross = (x2 - x1) * (z3 - z1) - (z2 - z1) * (x3 - x1)
    a = np.hypot(x2 - x1, z2 - z1)
    b = np.hypot(x3 - x2, z3 - z2)
    c = np.hypot(x3 - x1, z3 - z1)
    if a * b * c == 0.0 or abs(cross) <= 1e-14 * a * c:
        return 0.0
    return float(2.0 * cross / (a * b * c))


def three_point_curvature(shape):
    """Circle fit through the points at a quarter, half and three quarters of the length, 1/m."""
    L = shape.length
    return circumcircle_curvature(*(material_point(shape, f * L) for f in (0.25, 0.5, 0.75)))
