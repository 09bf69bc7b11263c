"""Reduction of the plan-view actuator to length-wise cells.

Every cell is further split across the width into lanes whose edges are the
y-edges of all heater rectangles. A lane is either fully inside or fully
outside each rectangle in y, so coverage inside a (cell, lane) block only
varies along x and the overlap arithmetic stays exact.
"""
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..utils.common_utils import interval_overlap
from .actuator import SIDES, validate_spec
from .materials import stack_heat_capacity


@dataclass(frozen=True, eq=False)
class Grid:
    length: float
    width: float
    x_edges: np.ndarray
    y_edges: np.ndarray

    @property
    def n_cells(self):
        return len(self.x_edges) - 1

    @property
    def n_lanes(self):
        return len(self.y_edges) - 1

    @property
    def dx(self):
        return np.diff(self.x_edges)

    @property
    def x_centers(self):
        return 0.5 * (self.x_edges[1:] + self.x_edges[:-1])

    @property
    def lane_widths(self):
        return np.diff(self.y_edges)

    @property
    def lane_centers(self):
        return 0.5 * (self.y_edges[1:] + self.y_edges[:-1])


@dataclass(frozen=True, eq=False)
class DiscretizedActuator:
    spec: object
    grid: Grid
    # (cell, lane) footprint area of each loop, m^2
    loop_area: Dict[str, np.ndarray]
    # (cell, lane) coverage fraction per face
    lane_cover: Dict[str, np.ndarray]
    # per-cell plan coverage per face, fraction of the cell area
    f_top: np.ndarray
    f_bot: np.ndarray
    # layers deposited on each face (empty when the face has no loop)
    stacks: Dict[str, Tuple]
    heat_capacity: np.ndarray       # (cell, lane), J/K
    conv_area: np.ndarray           # (cell, lane), m^2, both faces
    gx: np.ndarray                  # (cell-1, lane), W/K, along the length
    gy: np.ndarray                  # (cell, lane-1), W/K, across the width

    @property
    def n_cells(self):
        return self.grid.n_cells

    @property
    def n_lanes(self):
        return self.grid.n_lanes

    @property
    def loop_names(self):
        return tuple(self.loop_area.keys())

    def lane_weights(self, loop_name):
        """(cell, lane) fraction of the loop power deposited in each block."""
        area = self.loop_area[loop_name]
        return area / area.sum()

    def q(self, loop_name):
        """Per-cell power apportionment weights of a loop, summing to 1."""
        return self.lane_weights(loop_name).sum(axis=1)

    @property
    def C(self):
        return self.heat_capacity.sum(axis=1)

    @property
    def A(self):
        return self.conv_area.sum(axis=1)

    @property
    def G(self):
        """In-plane substrate conductance between neighbouring cells."""
        sub = self.spec.substrate
        return sub.k * sub.thickness * self.grid.width / self.grid.dx[0]

    def footprint_area(self, loop_name):
        return float(self.loop_area[loop_name].sum())


def _lane_edges(spec):
    W = spec.width
    edges = [0.0, W]
    for loop in spec.loops:
        for _, _, y0, y1 in loop.rects:
            edges.extend([min(max(y0, 0.0), W), min(max(y1, 0.0), W)])
    edges = np.sort(np.asarray(edges, dtype=float))
    tol = 1e-12 * W
    kept = [edges[0]]
    for y in edges[1:]:
        if y - kept[-1] > tol:
            kept.append(y)
    kept[-1] = W
    kept = np.asarray(kept)
    refine = int(spec.lane_refine)
    if refine > 1:
        parts = [np.linspace(a, b, refine + 1)[:-1] for a, b in zip(kept[:-1], kept[1:])]
        kept = np.concatenate(parts + [[W]])
    return kept


def build_grid(spec, n_cells=None):
    n = spec.n_cells if n_cells is None else int(n_cells)
    x_edges = np.linspace(0.0, spec.length, n + 1)
    return Grid(length=spec.length, width=spec.width, x_edges=x_edges, y_edges=_lane_edges(spec))


def loop_lane_area(loop, grid):
    """(cell, lane) overlap area of a loop's rectangles with the grid blocks."""
    x0, x1 = grid.x_edges[:-1], grid.x_edges[1:]
    y0, y1 = grid.y_edges[:-1], grid.y_edges[1:]
    area = np.zeros((grid.n_cells, grid.n_lanes))
    for rx0, rx1, ry0, ry1 in loop.rects:
        ox = interval_overlap(x0, x1, rx0, rx1)
        oy = interval_overlap(y0, y1, ry0, ry1)
        area += np.outer(ox, oy)
    return area


def coverage_profile(loop, grid):
    """Per-cell fraction of the cell's plan area covered by the loop."""
    x0, x1 = grid.x_edges[:-1], grid.x_edges[1:]
    covered = np.zeros(grid.n_cells)
    for rx0, rx1, ry0, ry1 in loop.rects:
        covered += interval_overlap(x0, x1, rx0, rx1) * (min(ry1, grid.width) - max(ry0, 0.0))
    return np.clip(covered / (grid.dx * grid.width), 0.0, 1.0)


def discretize(spec, check=True):
    if check:
        validate_spec(spec)
    grid = build_grid(spec)
    dx = grid.dx[:, None]
    b = grid.lane_widths[None, :]
    block_area = dx * b
    sub = spec.substrate

    loop_area = {}
    lane_cover = {side: np.zeros((grid.n_cells, grid.n_lanes)) for side in SIDES}
    face_cover = {side: np.zeros(grid.n_cells) for side in SIDES}
    stacks = {side: () for side in SIDES}
    for loop in spec.loops:
        area = loop_lane_area(loop, grid)
        loop_area[loop.name] = area
        lane_cover[loop.side] += area / block_area
        face_cover[loop.side] += coverage_profile(loop, grid)
        stacks[loop.side] = tuple(loop.layers)
    for side in SIDES:
        lane_cover[side] = np.clip(lane_cover[side], 0.0, 1.0)
        face_cover[side] = np.clip(face_cover[side], 0.0, 1.0)

    areal_c = sub.areal_heat_capacity + sum(lane_cover[side] * stack_heat_capacity(stacks[side])
                                            for side in SIDES)
    heat_capacity = block_area * areal_c
    conv_area = 2.0 * block_area

    kt = sub.k * sub.thickness
    gx = np.tile(kt * grid.lane_widths / grid.dx[0], (grid.n_cells - 1, 1))
    gy = kt * dx / np.diff(grid.lane_centers)[None, :]

    return DiscretizedActuator(
        spec=spec, grid=grid, loop_area=loop_area, lane_cover=lane_cover,
        f_top=face_cover['top'], f_bot=face_cover['bottom'], stacks=stacks,
        heat_capacity=heat_capacity, conv_area=conv_area, gx=gx, gy=gy,
    )
