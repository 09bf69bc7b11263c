import copy
import logging
from dataclasses import asdict, dataclass
from functools import partial

import numpy as np
import pandas as pd

from ..engine import build_scenario, rise_time, run_scenario, value_at
from ..utils.exceptions import ConfigError
from .simplex import nelder_mead

logger = logging.getLogger(__name__)

PARAM_NAMES = ('h', 'alpha_eff_paper', 'tau_mech')
BOUNDS = {
    'h': (5.0, 30.0),
    'alpha_eff_paper': (-200e-6, 4e-6),
    'tau_mech': (0.0, 200.0),
}
OBSERVABLES = (
    'outer_sat_ref_disp_mm',
    'inner_sat_ref_disp_mm',
    'dT_ratio_inner_outer',
    'outer_rise_time_s',
    'inner_rise_time_s',
    'outer_sat_dT_K',
    'inner_sat_dT_K',
)
TARGET_COLUMNS = ('name', 'value', 'unit', 'weight')
# objective above this sends the fitted model back for review instead of being accepted
REVIEW_GATE = 0.04


@dataclass(frozen=True)
class ParameterSet:
    h: float = 10.0
    alpha_eff_paper: float = -30e-6
    tau_mech: float = 40.0

    def as_array(self):
        return np.array([self.h, self.alpha_eff_paper, self.tau_mech], dtype=float)

    @classmethod
    def from_array(cls, x):
        return cls(*(float(v) for v in x))

    def check(self, bounds=None):
        bounds = BOUNDS if bounds is None else bounds
        for name in PARAM_NAMES:
            lo, hi = bounds[name]
            value = getattr(self, name)
            if not lo <= value <= hi:
                raise ConfigError('%g outside [%g, %g]' % (value, lo, hi), key='params.%s' % name)
        return self


@dataclass(frozen=True)
class CalibrationTarget:
    name: str
    value: float
    unit: str = ''
    weight: float = 1.0

    def __post_init__(self):
        if self.name not in OBSERVABLES:
            raise ConfigError('unknown observable %r, expected one of %s' % (self.name, ', '.join(OBSERVABLES)),
                              key='targets.name')
        if not np.isfinite(self.value) or self.value == 0:
            raise ConfigError('target value must be finite and non-zero', key='targets.%s' % self.name)
        if not self.weight > 0:
            raise ConfigError('weight must be > 0, got %r' % self.weight, key='targets.%s' % self.name)


@dataclass(frozen=True)
class CalibrationSettings:
    """Discretization used inside the objective (coarser than production runs)."""
    n_cells: int = 100
    dt: float = 0.5
    stride: int = 2
    power: float = 0.75
    t_sat: float = 300.0


def load_targets(path):
    try:
        table = pd.read_csv(path, comment='#', skipinitialspace=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise ConfigError('cannot read targets: %s' % err, key=str(path))
    missing = [c for c in TARGET_COLUMNS if c not in table.columns]
    if missing:
        raise ConfigError('targets file lacks columns %s' % missing, key=str(path))
    table['unit'] = table['unit'].fillna('')
    return [CalibrationTarget(str(row.name), float(row.value), str(row.unit), float(row.weight))
            for row in table.itertuples(index=False)]


def apply_params(params, cfg):
    """Copy of the config tree with the fitted parameters written into it."""
    new = copy.deepcopy(cfg)
    new.thermal.h = float(params.h)
    new.materials[new.actuator.substrate].alpha_eff = float(params.alpha_eff_paper)
    new.mechanics.tau_mech = float(params.tau_mech)
    return new


def params_fragment(params, cfg):
    """Partial config holding only the fitted values, mergeable via --params."""
    return {
        'thermal': {'h': float(params.h)},
        'materials': {str(cfg.actuator.substrate): {'alpha_eff': float(params.alpha_eff_paper)}},
        'mechanics': {'tau_mech': float(params.tau_mech)},
    }


def simulate_observables(params, cfg, settings=None):
    """Run the outer and inner step protocols and extract every calibration observable."""
    settings = CalibrationSettings() if settings is None else settings
    base = apply_params(params, cfg)
    base.actuator.kind = 'meta'
    base.actuator.n_cells = settings.n_cells
    base.thermal.dt = settings.dt
    base['return'].enabled = False
    base.run.update(dict(mode='transient', duration=settings.t_sat, stride=settings.stride))

    out = {}
    for loop in ('outer', 'inner'):
        run_cfg = copy.deepcopy(base)
        run_cfg.schedule.update(dict(kind='step', loop=loop, power=settings.power, t_on=settings.t_sat))
        run_cfg.run.name = 'calibrate_%s' % loop
        series = run_scenario(build_scenario(run_cfg))
        out['%s_sat_ref_disp_mm' % loop] = abs(value_at(series, settings.t_sat))
        out['%s_sat_dT_K' % loop] = value_at(series, settings.t_sat, 'dT_%s_K' % loop)
        out['%s_rise_time_s' % loop] = rise_time(series, 0.9, settings.t_sat)
    out['dT_ratio_inner_outer'] = out['inner_sat_dT_K'] / out['outer_sat_dT_K']
    return out


def passes_review_gate(value, gate=REVIEW_GATE):
    return bool(np.isfinite(value) and value <= gate)


def score(simulated, targets):
    return float(sum(t.weight * ((simulated[t.name] - t.value) / t.value) ** 2 for t in targets))


def objective(params, targets, cfg, settings=None):
    """Weighted squared relative misfit of the simulated observables."""
    return score(simulate_observables(params, cfg, settings), targets)


def _objective_at(x, targets, cfg, settings):
    return objective(ParameterSet.from_array(x), targets, cfg, settings)


def fit(targets, init, cfg, bounds=None, settings=None, xtol=1e-4, max_iter=500,
        map_fn=map, tb_log=None, progress=False):
    """Bounded Nelder-Mead fit of (h, alpha_eff_paper, tau_mech).

    Returns the best ParameterSet and the best-objective trace (one value per
    iteration, non-increasing). A final objective above REVIEW_GATE is logged
    as a warning; check it with passes_review_gate.
    """
    bounds = BOUNDS if bounds is None else bounds
    init.check(bounds)
    lower = np.array([bounds[name][0] for name in PARAM_NAMES])
    upper = np.array([bounds[name][1] for name in PARAM_NAMES])
    func = partial(_objective_at, targets=list(targets), cfg=cfg, settings=settings)

    def callback(it, x, value):
        logger.debug('iter %d: objective %.6g at %s' % (it, value, x))
        if tb_log is not None:
            tb_log.add_scalar('calibrate/objective', value, it)
            for name, v in zip(PARAM_NAMES, x):
                tb_log.add_scalar('calibrate/%s' % name, v, it)

    result = nelder_mead(func, init.as_array(), lower, upper, step=0.05, xtol=xtol, max_iter=max_iter,
                         map_fn=map_fn, stop_value=0.0, callback=callback, progress=progress)
    best = ParameterSet.from_array(result.x)
    logger.info('fitted %s, objective %.6g' % (asdict(best), result.fun))
    if not passes_review_gate(result.fun):
        logger.warning('objective %.4g is above the review gate %.2g: the model does not reproduce the targets, '
                       'review it before using these parameters' % (result.fun, REVIEW_GATE))
    return best, result.trace
