"""Strain-mismatch bending of a layered strip.

Strain through the thickness is eps0 + chi*z with z measured from the
substrate mid-plane toward the top face. Force and moment balance give a
2x2 system in (eps0, chi) whose coefficients are exact polynomial integrals
over each ply. The reported curvature is kappa = -chi: a positive kappa bends
the tip toward +z, so a heated top face that expands more than the bottom
curls the strip away from itself (kappa < 0).
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..utils.exceptions import NumericalError


@dataclass(frozen=True)
class Ply:
    E: float
    alpha: float
    z0: float
    z1: float
    b: float = 1.0
    name: str = ''

    @property
    def h(self):
        return self.z1 - self.z0


@dataclass(frozen=True)
class CrossSection:
    """Plies ordered from bottom to top, z-origin at the substrate mid-plane."""
    plies: Tuple[Ply, ...]

    @classmethod
    def from_stack(cls, substrate, top=(), bottom=(), b_top=1.0, b_bottom=1.0):
        """Substrate plus layers on each face, each face listed from the substrate outward."""
        half = 0.5 * substrate.thickness
        plies = []
        z = -half
        for mat in bottom:
            plies.append(Ply(mat.E, mat.alpha_eff, z - mat.thickness, z, b_bottom, mat.name))
            z -= mat.thickness
        plies.reverse()
        plies.append(Ply(substrate.E, substrate.alpha_eff, -half, half, 1.0, substrate.name))
        z = half
        for mat in top:
            plies.append(Ply(mat.E, mat.alpha_eff, z, z + mat.thickness, b_top, mat.name))
            z += mat.thickness
        return cls(tuple(plies))

    def flipped(self):
        return CrossSection(tuple(Ply(p.E, p.alpha, -p.z1, -p.z0, p.b, p.name) for p in reversed(self.plies)))

    @property
    def thickness(self):
        return self.plies[-1].z1 - self.plies[0].z0

    def stiffness(self):
        E = np.array([p.E * p.b for p in self.plies])
        z0 = np.array([p.z0 for p in self.plies])
        z1 = np.array([p.z1 for p in self.plies])
        A = np.sum(E * (z1 - z0))
        B = np.sum(E * (z1 ** 2 - z0 ** 2)) / 2.0
        D = np.sum(E * (z1 ** 3 - z0 ** 3)) / 3.0
        return A, B, D

    def thermal_loads(self, dT):
        """Thermal force and moment; dT is a scalar or one value per ply."""
        dT = np.broadcast_to(np.asarray(dT, dtype=float), (len(self.plies),))
        Ea = np.array([p.E * p.b * p.alpha for p in self.plies]) * dT
        z0 = np.array([p.z0 for p in self.plies])
        z1 = np.array([p.z1 for p in self.plies])
        return np.sum(Ea * (z1 - z0)), np.sum(Ea * (z1 ** 2 - z0 ** 2)) / 2.0


def _solve(A, B, D, N, M):
    det = A * D - B * B
    if not np.all(np.isfinite(det)) or np.any(det <= 1e-12 * np.abs(A * D)) or np.any(A <= 0):
        raise NumericalError('singular cross-section (no bending stiffness)')
    eps0 = (D * N - B * M) / det
    chi = (A * M - B * N) / det
    return eps0, chi


def solve_section(section, dT):
    """Mid-plane strain and strain gradient (eps0, chi) of a free strip."""
    A, B, D = section.stiffness()
    N, M = section.thermal_loads(dT)
    return _solve(A, B, D, N, M)


def cell_curvature(section, dT):
    _, chi = solve_section(section, dT)
    return -chi


def bimorph_curvature(alpha_bottom, alpha_top, dT, h_tot):
    """Equal-thickness, equal-modulus two-layer strip."""
    return 1.5 * (alpha_bottom - alpha_top) * dT / h_tot


def _stack_integrals(layers, half, upward):
    """Per-unit-width integrals of a face stack starting at |z| = half."""
    a = bb = d = n = m = 0.0
    z = half
    for mat in layers:
        z0, z1 = (z, z + mat.thickness) if upward else (-z - mat.thickness, -z)
        z += mat.thickness
        a += mat.E * (z1 - z0)
        bb += mat.E * (z1 ** 2 - z0 ** 2) / 2.0
        d += mat.E * (z1 ** 3 - z0 ** 3) / 3.0
        n += mat.E * mat.alpha_eff * (z1 - z0)
        m += mat.E * mat.alpha_eff * (z1 ** 2 - z0 ** 2) / 2.0
    return a, bb, d, n, m


class CurvatureModel(object):
    """Per-cell laminate coefficients of a discretized actuator.

    Every (cell, lane) block contributes a substrate ply of width fraction
    b_j/W and, on each covered face, the face stack scaled by the lane's
    coverage. Each block carries its own temperature rise, so the thermal
    force and moment are linear maps of the (cell, lane) temperature field.
    """

    def __init__(self, actuator):
        self.actuator = actuator
        sub = actuator.spec.substrate
        half = 0.5 * sub.thickness
        frac = actuator.grid.lane_widths / actuator.grid.width

        n_cells = actuator.n_cells
        A = np.full(n_cells, sub.E * sub.thickness)
        B = np.zeros(n_cells)
        D = np.full(n_cells, sub.E * sub.thickness ** 3 / 12.0)
        self.n_coef = np.tile(frac * sub.E * sub.alpha_eff * sub.thickness, (n_cells, 1))
        self.m_coef = np.zeros((n_cells, actuator.n_lanes))

        for side, upward in (('top', True), ('bottom', False)):
            layers = actuator.stacks[side]
            if not layers:
                continue
            a, bb, d, n, m = _stack_integrals(layers, half, upward)
            w = actuator.lane_cover[side] * frac[None, :]
            wsum = w.sum(axis=1)
            A += a * wsum
            B += bb * wsum
            D += d * wsum
            self.n_coef += n * w
            self.m_coef += m * w
        self.A, self.B, self.D = A, B, D

    def strain(self, dT):
        """(eps0, chi) per cell for a (cell, lane) temperature-rise field."""
        dT = np.asarray(dT, dtype=float)
        if dT.ndim == 0:
            dT = np.full(self.n_coef.shape, float(dT))
        N = np.sum(self.n_coef * dT, axis=1)
        M = np.sum(self.m_coef * dT, axis=1)
        return _solve(self.A, self.B, self.D, N, M)

    def curvature(self, dT):
        return -self.strain(dT)[1]


def curvature_field(actuator, state, dT_amb=0.0, curvature_model=None):
    """Per-cell curvature from the Joule field plus a uniform ambient rise.

    dT_amb is the ambient offset from the stress-free reference temperature.
    """
    cm = curvature_model if curvature_model is not None else CurvatureModel(actuator)
    return cm.curvature(state.theta + dT_amb)
