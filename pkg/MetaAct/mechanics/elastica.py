from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Shape:
    """Centerline polyline of the strip, root clamped at the origin along +X."""
    s: np.ndarray        # arc length of the nodes, m
    X: np.ndarray
    Z: np.ndarray
    theta: np.ndarray    # tangent angle at the nodes, rad

    @property
    def length(self):
        return float(self.s[-1])

    @property
    def tip(self):
        return float(self.X[-1]), float(self.Z[-1])

    @property
    def cell_theta(self):
        return 0.5 * (self.theta[1:] + self.theta[:-1])

    def arc_length(self):
        return float(np.sum(np.hypot(np.diff(self.X), np.diff(self.Z))))


def shape_from_curvature(kappa, length, s_edges=None, clamp=0.0):
    """Integrate a per-cell curvature field into the strip centerline.

    The tangent angle is exact for piecewise-constant curvature; positions use
    the midpoint angle of each cell, so every segment keeps its cell length.
    The first `clamp` metres are held straight, a cell cut by the clamp edge
    bends over its free part only.
    """
    kappa = np.asarray(kappa, dtype=float)
    if s_edges is None:
        s_edges = np.linspace(0.0, length, len(kappa) + 1)
    ds = np.diff(s_edges)
    if clamp > 0.0:
        kappa = kappa * np.clip((s_edges[1:] - clamp) / ds, 0.0, 1.0)
    theta = np.concatenate([[0.0], np.cumsum(kappa * ds)])
    mid = 0.5 * (theta[1:] + theta[:-1])
    X = np.concatenate([[0.0], np.cumsum(ds * np.cos(mid))])
    Z = np.concatenate([[0.0], np.cumsum(ds * np.sin(mid))])
    return Shape(s=s_edges, X=X, Z=Z, theta=theta)


def straight_shape(length, n_cells):
    return shape_from_curvature(np.zeros(n_cells), length)


def material_point(shape, s):
    return float(np.interp(s, shape.s, shape.X)), float(np.interp(s, shape.s, shape.Z))
