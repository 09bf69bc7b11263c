from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..utils.exceptions import ConfigError

GRASP_MODES = ('close_grip', 'wall_press', 'pre_open_grip', 'insert_expand', 'infeasible')
KINDS = ('solid', 'hollow')
CONTEXTS = ('free', 'tube')


@dataclass(frozen=True)
class ObjectSpec:
    name: str
    kind: str = 'solid'
    outer_mm: float = 16.0
    cavity_mm: Optional[float] = None
    context: str = 'free'
    tube_mm: Optional[float] = None

    def __post_init__(self):
        key = 'object.%s' % self.name
        if self.kind not in KINDS:
            raise ConfigError('kind must be one of %s' % (KINDS,), key=key)
        if self.context not in CONTEXTS:
            raise ConfigError('context must be one of %s' % (CONTEXTS,), key=key)
        if not np.isfinite(self.outer_mm) or self.outer_mm <= 0:
            raise ConfigError('outer_mm must be > 0', key=key)
        if self.kind == 'hollow' and (self.cavity_mm is None or not 0 < self.cavity_mm < self.outer_mm):
            raise ConfigError('hollow object needs 0 < cavity_mm < outer_mm', key=key)
        if self.context == 'tube' and (self.tube_mm is None or not self.tube_mm > self.outer_mm):
            raise ConfigError('tube context needs tube_mm > outer_mm', key=key)

    def scaled(self, factor):
        def scale(v):
            return None if v is None else v * factor
        return ObjectSpec(self.name, self.kind, self.outer_mm * factor, scale(self.cavity_mm), self.context,
                          scale(self.tube_mm))


def grasp_mode(trajectory, obj):
    """Manipulation mode the jaw range allows for an object; pure geometry.

    Rules are tried in order: pressing against a surrounding tube wall,
    expanding inside a cavity, closing on the object, opening over it.
    """
    lo, rest, hi = trajectory.min_mm, trajectory.rest_mm, trajectory.max_mm
    # context rules first: a block in a tube also fits close_grip, a ring also fits pre_open_grip
    if obj.context == 'tube' and rest < obj.tube_mm <= hi + obj.outer_mm:
        return 'wall_press'
    if obj.kind == 'hollow' and rest < obj.cavity_mm < hi:
        return 'insert_expand'
    if lo < obj.outer_mm < rest:
        return 'close_grip'
    if rest < obj.outer_mm <= hi:
        return 'pre_open_grip'
    return 'infeasible'


def object_from_cfg(obj_cfg):
    def opt(key):
        value = obj_cfg.get(key)
        return None if value is None else float(value)
    return ObjectSpec(name=str(obj_cfg.name), kind=obj_cfg.kind, outer_mm=float(obj_cfg.outer_mm),
                      cavity_mm=opt('cavity_mm'), context=obj_cfg.context, tube_mm=opt('tube_mm'))
