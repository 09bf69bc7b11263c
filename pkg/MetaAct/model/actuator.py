import logging
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from ..utils.exceptions import SpecError
from .materials import Material, check_material

logger = logging.getLogger(__name__)

SIDES = ('top', 'bottom')
# schedules, observers and the heat source address loops by these names
LOOP_NAMES = ('outer', 'inner')
RESISTANCE_RANGE = (1.0e2, 1.0e5)
# quoted cross-talk figure, used to back out the center distance the authors implied
QUOTED_CROSSTALK = 123.0

Rect = Tuple[float, float, float, float]  # x0, x1, y0, y1 in m


@dataclass(frozen=True)
class HeaterLoopSpec:
    name: str
    side: str
    rects: Tuple[Rect, ...]
    width: float
    resistance: float = 1500.0
    # deposited on the substrate in this order, outermost last (heater, adhesive, cover strip)
    layers: Tuple[Material, ...] = ()

    @property
    def area(self):
        return float(sum((x1 - x0) * (y1 - y0) for x0, x1, y0, y1 in self.rects))

    @property
    def rails(self):
        """Longitudinal rectangles (longer in x than in y)."""
        return tuple(r for r in self.rects if (r[1] - r[0]) > (r[3] - r[2]))

    def drive_voltage(self, power):
        return float(np.sqrt(power * self.resistance))

    def drive_current(self, power):
        return float(np.sqrt(power / self.resistance))


@dataclass(frozen=True)
class ActuatorSpec:
    length: float
    width: float
    substrate: Material
    loops: Tuple[HeaterLoopSpec, ...] = ()
    n_cells: int = 200
    lane_refine: int = 1
    name: str = 'meta'
    # rigidly held root length (electrode clamp), m; heats but does not bend
    clamp: float = 0.0

    def loop(self, name):
        for loop in self.loops:
            if loop.name == name:
                return loop
        return None

    def loop_on(self, side):
        for loop in self.loops:
            if loop.side == side:
                return loop
        return None

    @property
    def loop_names(self):
        return tuple(loop.name for loop in self.loops)

    @property
    def center_distance(self):
        """Smallest y distance between rail centerlines of loops on opposite faces."""
        top, bottom = self.loop_on('top'), self.loop_on('bottom')
        if top is None or bottom is None or not top.rails or not bottom.rails:
            return None
        yc_top = [0.5 * (r[2] + r[3]) for r in top.rails]
        yc_bot = [0.5 * (r[2] + r[3]) for r in bottom.rails]
        return float(min(abs(a - b) for a in yc_top for b in yc_bot))

    def without_side(self, side):
        return replace(self, loops=tuple(lp for lp in self.loops if lp.side != side))


def rectangular_loop(name, side, bounds, width, rung=None, resistance=1500.0, layers=()):
    """Rectangular heater loop: two rails along x and two rungs across y.

    bounds is the outer (x0, x1, y0, y1) of the loop, rails are `width` wide,
    rungs are `rung` long in x and span the full loop height.
    """
    x0, x1, y0, y1 = bounds
    rung = width if rung is None else rung
    rects = (
        (x0 + rung, x1 - rung, y0, y0 + width),
        (x0 + rung, x1 - rung, y1 - width, y1),
        (x0, x0 + rung, y0, y1),
        (x1 - rung, x1, y0, y1),
    )
    return HeaterLoopSpec(name=name, side=side, rects=rects, width=width,
                          resistance=resistance, layers=tuple(layers))


def _overlap_area(a, b):
    dx = min(a[1], b[1]) - max(a[0], b[0])
    dy = min(a[3], b[3]) - max(a[2], b[2])
    return max(dx, 0.0) * max(dy, 0.0)


def validate_spec(spec):
    """Check every ActuatorSpec / HeaterLoopSpec invariant, return the spec."""
    for key in ('length', 'width'):
        value = getattr(spec, key)
        if not np.isfinite(value) or value <= 0:
            raise SpecError('%s must be > 0, got %r' % (key, value), field='actuator.%s' % key,
                            kind='dimension')
    if int(spec.n_cells) < 10:
        raise SpecError('need at least 10 cells, got %d' % spec.n_cells, field='actuator.n_cells',
                        kind='count')
    if int(spec.lane_refine) < 1:
        raise SpecError('lane_refine must be >= 1', field='actuator.lane_refine', kind='count')
    if not np.isfinite(spec.clamp) or not 0.0 <= spec.clamp < spec.length:
        raise SpecError('clamp %r m outside [0, length)' % (spec.clamp,), field='actuator.clamp_mm',
                        kind='range')
    check_material(spec.substrate)

    tol = 1e-12 * max(spec.length, spec.width)
    seen_sides = {}
    for loop in spec.loops:
        prefix = 'loops.%s' % loop.name
        if loop.name not in LOOP_NAMES:
            raise SpecError('loop name must be one of %s, got %r' % (LOOP_NAMES, loop.name),
                            field=prefix, kind='name')
        if loop.side not in SIDES:
            raise SpecError('side must be top or bottom, got %r' % loop.side, field=prefix + '.side',
                            kind='range')
        if loop.side in seen_sides:
            raise SpecError('loops %s and %s are both on the %s face'
                            % (seen_sides[loop.side], loop.name, loop.side),
                            field=prefix + '.side', kind='count')
        seen_sides[loop.side] = loop.name
        if not np.isfinite(loop.width) or loop.width <= 0:
            raise SpecError('width must be > 0', field=prefix + '.width_mm', kind='dimension')
        if not RESISTANCE_RANGE[0] <= loop.resistance <= RESISTANCE_RANGE[1]:
            raise SpecError('resistance %g ohm outside [%g, %g]' % ((loop.resistance,) + RESISTANCE_RANGE),
                            field=prefix + '.resistance_ohm', kind='range')
        for layer in loop.layers:
            check_material(layer)
        for k, (x0, x1, y0, y1) in enumerate(loop.rects):
            if not (x1 > x0 and y1 > y0):
                raise SpecError('rectangle %d is empty or inverted' % k, field=prefix + '.rects',
                                kind='dimension')
            if x0 < -tol or y0 < -tol or x1 > spec.length + tol or y1 > spec.width + tol:
                raise SpecError('rectangle %d (%g, %g, %g, %g) m outside the %g x %g m plan'
                                % (k, x0, x1, y0, y1, spec.length, spec.width),
                                field=prefix + '.rects', kind='bounds')

    for side in SIDES:
        rects = [(lp.name, k, r) for lp in spec.loops if lp.side == side for k, r in enumerate(lp.rects)]
        for a in range(len(rects)):
            for b in range(a + 1, len(rects)):
                if _overlap_area(rects[a][2], rects[b][2]) > tol * tol:
                    raise SpecError('rectangles %s[%d] and %s[%d] overlap on the %s face'
                                    % (rects[a][0], rects[a][1], rects[b][0], rects[b][1], side),
                                    field='loops.%s.rects' % rects[b][0], kind='overlap')
    spec_diagnostics(spec)
    return spec


def spec_diagnostics(spec, h=10.0):
    """Derived numbers worth logging next to a validated spec."""
    k, t = spec.substrate.k, spec.substrate.thickness
    diag = {'center_distance_mm': None, 'crosstalk_ratio': None,
            'quoted_center_distance_mm': None}
    delta_d = spec.center_distance
    widths = [lp.width for lp in spec.loops]
    if delta_d is not None and widths:
        w = min(widths)
        diag['center_distance_mm'] = delta_d * 1e3
        diag['crosstalk_ratio'] = h * w * delta_d / (k * t)
        diag['quoted_center_distance_mm'] = QUOTED_CROSSTALK * k * t / (h * w) * 1e3
    for loop in spec.loops:
        diag['%s_area_mm2' % loop.name] = loop.area * 1e6
    if spec.loop('outer') is not None and spec.loop('inner') is not None:
        diag['area_ratio_outer_inner'] = spec.loop('outer').area / spec.loop('inner').area
    logger.debug('spec diagnostics %s' % diag)
    return diag
