import logging

from ..utils.exceptions import ConfigError
from .actuator import (LOOP_NAMES, ActuatorSpec, HeaterLoopSpec, rectangular_loop, spec_diagnostics,
                       validate_spec)
from .discretize import DiscretizedActuator, Grid, coverage_profile, discretize
from .materials import Material, material_from_cfg

logger = logging.getLogger(__name__)


def _materials(cfg):
    mats = {name: material_from_cfg(name, mat_cfg) for name, mat_cfg in cfg.materials.items()}
    act = cfg.actuator
    for role in ('substrate', 'heater', 'adhesive', 'cover'):
        if act[role] not in mats:
            raise ConfigError('no material named %r' % act[role], key='actuator.%s' % role)
    cover = mats[act.cover]
    if act.get('bopp_thickness_um') is not None:
        thickness = float(act.bopp_thickness_um) * 1e-6
        if abs(thickness - cover.thickness) > 1e-12:
            logger.warning('actuator.bopp_thickness_um=%g overrides materials.%s.thickness_um=%g'
                           % (thickness * 1e6, act.cover, cover.thickness * 1e6))
        cover = cover.with_thickness(thickness)
    mats[act.cover] = cover
    return mats


def _loop_from_cfg(name, loop_cfg, layers):
    if name not in LOOP_NAMES:
        raise ConfigError('unknown loop %r, expected one of %s' % (name, LOOP_NAMES), key='loops.%s' % name)
    mm = 1e-3
    if loop_cfg.get('rects_mm'):
        rects = tuple(tuple(float(v) * mm for v in rect) for rect in loop_cfg.rects_mm)
        return HeaterLoopSpec(name=name, side=loop_cfg.side, rects=rects,
                              width=float(loop_cfg.width_mm) * mm,
                              resistance=float(loop_cfg.resistance_ohm), layers=layers)
    return rectangular_loop(
        name, loop_cfg.side,
        bounds=tuple(float(v) * mm for v in loop_cfg.bounds_mm),
        width=float(loop_cfg.width_mm) * mm,
        rung=float(loop_cfg.rung_mm) * mm,
        resistance=float(loop_cfg.resistance_ohm),
        layers=layers,
    )


def build_meta_spec(cfg):
    act = cfg.actuator
    mats = _materials(cfg)
    layers = (mats[act.heater], mats[act.adhesive], mats[act.cover])
    loops = tuple(_loop_from_cfg(name, loop_cfg, layers) for name, loop_cfg in cfg.loops.items()
                  if loop_cfg.get('enabled', True))
    return ActuatorSpec(
        length=float(act.length_mm) * 1e-3,
        width=float(act.width_mm) * 1e-3,
        substrate=mats[act.substrate],
        loops=loops,
        n_cells=int(act.n_cells),
        lane_refine=int(act.lane_refine),
        name='meta',
        clamp=float(act.get('clamp_mm', 0.0)) * 1e-3,
    )


def build_conventional_spec(cfg):
    """Single-sided baseline: the meta device with its bottom loop removed."""
    spec = build_meta_spec(cfg).without_side('bottom')
    return ActuatorSpec(length=spec.length, width=spec.width, substrate=spec.substrate,
                        loops=spec.loops, n_cells=spec.n_cells, lane_refine=spec.lane_refine,
                        name='conventional', clamp=spec.clamp)


__all__ = {
    'meta': build_meta_spec,
    'conventional': build_conventional_spec,
}


def build_actuator(cfg):
    kind = cfg.actuator.kind
    if kind not in __all__:
        raise ConfigError('unknown actuator kind %r, expected one of %s' % (kind, sorted(__all__)),
                          key='actuator.kind')
    return validate_spec(__all__[kind](cfg))
