import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from ..control import ForcedReturnController, ForcedReturnPolicy, PowerSchedule, power_at, schedule_from_cfg
from ..mechanics import (CurvatureModel, MechParams, effective_curvature, mech_lag, reference_displacement,
                         shape_from_curvature, straight_shape, three_point_curvature, tip_displacement)
from ..model import ActuatorSpec, build_actuator, discretize
from ..thermal import ThermalParams, ThermalState, get_solver, heater_mean_temps
from ..utils.exceptions import ConfigError

logger = logging.getLogger(__name__)

MODES = ('transient', 'steady')


class TimeSeriesRecord(NamedTuple):
    t_s: float
    dT_outer_K: float
    dT_inner_K: float
    tip_disp_mm: float
    ref_disp_mm: float
    kappa_fit_per_cm: float
    P_outer_W: float
    P_inner_W: float


@dataclass(frozen=True)
class ScenarioConfig:
    spec: ActuatorSpec
    thermal: ThermalParams = field(default_factory=ThermalParams)
    mech: MechParams = field(default_factory=MechParams)
    schedule: PowerSchedule = field(default_factory=PowerSchedule)
    policy: Optional[ForcedReturnPolicy] = None
    T_amb: float = 23.0
    duration: float = 1200.0
    stride: int = 10
    mode: str = 'transient'
    name: str = 'scenario'

    def __post_init__(self):
        if not np.isfinite(self.duration) or self.duration <= 0:
            raise ConfigError('must be > 0, got %r' % self.duration, key='run.duration')
        if int(self.stride) < 1:
            raise ConfigError('must be >= 1, got %r' % self.stride, key='run.stride')
        if self.mode not in MODES:
            raise ConfigError('must be one of %s, got %r' % (MODES, self.mode), key='run.mode')
        if not np.isfinite(self.T_amb):
            raise ConfigError('must be finite', key='run.T_amb')

    @property
    def n_steps(self):
        return int(round(self.duration / self.thermal.dt))

    @property
    def dT_amb(self):
        """Ambient offset from the stress-free reference temperature."""
        return self.T_amb - self.mech.T_ref

    def replace(self, **changes):
        return replace(self, **changes)


def build_scenario(cfg):
    """ScenarioConfig from a resolved config tree."""
    spec = build_actuator(cfg)
    thermal = ThermalParams(h=float(cfg.thermal.h), dt=float(cfg.thermal.dt), scheme=cfg.thermal.scheme)
    mech = MechParams(tau_mech=float(cfg.mechanics.tau_mech), T_ref=float(cfg.mechanics.T_ref),
                      lag_fraction=float(cfg.mechanics.lag_fraction))
    policy = None
    if cfg['return'].enabled:
        ret = cfg['return']
        policy = ForcedReturnPolicy(drive_loop=ret.drive_loop, drive_power=float(ret.drive_power),
                                    return_power=float(ret.return_power), t_act=float(ret.t_act),
                                    tol_mm=float(ret.tol_mm), max_return=float(ret.max_return))
    return ScenarioConfig(
        spec=spec, thermal=thermal, mech=mech, schedule=schedule_from_cfg(cfg.schedule), policy=policy,
        T_amb=float(cfg.run.T_amb), duration=float(cfg.run.duration), stride=int(cfg.run.stride),
        mode=cfg.run.mode, name=str(cfg.run.name),
    )


@lru_cache(maxsize=8)
def discretized(spec):
    return discretize(spec)


@lru_cache(maxsize=8)
def curvature_model(actuator):
    return CurvatureModel(actuator)


def _clean(value):
    # -0.0 and 0.0 must print the same
    return float(value) + 0.0


class Observer(object):
    """Turns a thermal state and curvature field into a TimeSeriesRecord."""

    def __init__(self, actuator):
        self.actuator = actuator
        self.length = actuator.spec.length
        self.rest = straight_shape(self.length, actuator.n_cells)

    def shape(self, kappa):
        return shape_from_curvature(kappa, self.length, self.actuator.grid.x_edges, clamp=self.actuator.spec.clamp)

    def ref_disp(self, shape):
        return reference_displacement(shape, self.rest, signed=True)

    def __call__(self, t, state, shape, P_outer, P_inner):
        dT = heater_mean_temps(state, self.actuator)
        return TimeSeriesRecord(
            t_s=_clean(t),
            dT_outer_K=_clean(dT.get('outer', 0.0)),
            dT_inner_K=_clean(dT.get('inner', 0.0)),
            tip_disp_mm=_clean(tip_displacement(shape, self.rest, signed=True)),
            ref_disp_mm=_clean(self.ref_disp(shape)),
            kappa_fit_per_cm=_clean(three_point_curvature(shape) / 100.0),
            P_outer_W=_clean(P_outer),
            P_inner_W=_clean(P_inner),
        )


def _steady(config):
    act = discretized(config.spec)
    cm = curvature_model(act)
    if config.policy is not None:
        P = (config.policy.drive_power, 0.0) if config.policy.drive_loop == 'outer' \
            else (0.0, config.policy.drive_power)
    else:
        P = next(((s.P_outer, s.P_inner) for s in config.schedule.segments), (0.0, 0.0))
    solver = get_solver(act, config.thermal)
    state = solver.steady(P[0], P[1], T_amb=config.T_amb)
    kappa = cm.curvature(state.theta + config.dT_amb)
    observer = Observer(act)
    shape = observer.shape(kappa)
    return [observer(config.duration, state, shape, *P)], shape


def _simulate(config):
    if config.mode == 'steady':
        return _steady(config)

    act = discretized(config.spec)
    cm = curvature_model(act)
    solver = get_solver(act, config.thermal)
    observer = Observer(act)
    dt, tau, beta = config.thermal.dt, config.mech.tau_mech, config.mech.lag_fraction
    dT_amb = config.dT_amb

    state = ThermalState.ambient(act, config.T_amb)
    kappa_lag = cm.curvature(state.theta + dT_amb)
    shape = observer.shape(kappa_lag)
    records = [observer(0.0, state, shape, 0.0, 0.0)]
    controller = ForcedReturnController(config.policy) if config.policy is not None else None
    displacement = records[0].ref_disp_mm

    n_steps = config.n_steps
    for n in range(1, n_steps + 1):
        t_mid = (n - 0.5) * dt
        if controller is not None:
            P_outer, P_inner = controller(t_mid, displacement)
        else:
            P_outer, P_inner = power_at(config.schedule, t_mid)
        state = solver.step(state, P_outer, P_inner)
        kappa_qs = cm.curvature(state.theta + dT_amb)
        kappa_lag = mech_lag(kappa_lag, kappa_qs, dt, tau)
        record_now = n % config.stride == 0
        if controller is None and not record_now and n < n_steps:
            continue
        shape = observer.shape(effective_curvature(kappa_qs, kappa_lag, beta))
        if controller is not None:
            displacement = observer.ref_disp(shape)
        if record_now:
            records.append(observer(n * dt, state, shape, P_outer, P_inner))

    logger.debug('scenario %s: %d steps, %d records' % (config.name, n_steps, len(records)))
    return records, shape


def run_steady(config):
    """Saturated state of the first powered interval: steady heat balance, lag settled."""
    return _steady(config)[0]


def run_scenario(config):
    """Step the coupled model; one record at t = 0 and one every `stride` steps."""
    return _simulate(config)[0]


def final_shape(config):
    """Strip shape at the end of the scenario."""
    return _simulate(config)[1]
