import numpy as np

from ..utils.exceptions import ConfigError, NumericalError
from .solver import HeatNetwork


def _positive(**kwargs):
    for name, value in kwargs.items():
        if not np.isfinite(value) or value <= 0:
            raise ConfigError('must be > 0, got %r' % value, key=name)


def crosstalk_ratio(h, w, delta_d, k, t):
    """Convective over in-plane conductive exchange, h*w*Δd/(k*t).

    Loops work independently when this is much larger than one.
    """
    _positive(h=h, w=w, delta_d=delta_d, k=k, t=t)
    return h * w * delta_d / (k * t)


def biot_number(h, t, k):
    _positive(h=h, t=t, k=k)
    return h * t / k


def lumped_saturation(P, h, A_conv):
    """Steady temperature rise of a single lumped body, P/(h*A)."""
    _positive(h=h, A_conv=A_conv)
    if not np.isfinite(P) or P < 0:
        raise ConfigError('must be >= 0, got %r' % P, key='P')
    return P / (h * A_conv)


def _loop_area(actuator, loop):
    name = loop if isinstance(loop, str) else loop.name
    if name not in actuator.loop_area:
        raise ConfigError('actuator has no loop named %r' % name, key='loop')
    area = actuator.loop_area[name]
    if area.sum() <= 0:
        raise NumericalError('loop %s has an empty footprint' % name)
    return area


def out_of_plane_ratio(actuator, delta_d, loop=None):
    """Through-thickness conductance under one loop footprint over the
    in-plane substrate conductance across the gap between loops.

    G_z = k*A_fp/t and G_x = k*W*t/Δd, so the ratio is A_fp*Δd/(W*t^2).
    """
    _positive(delta_d=delta_d)
    loop = actuator.loop_names[0] if loop is None else loop
    footprint = float(_loop_area(actuator, loop).sum())
    sub = actuator.spec.substrate
    g_z = sub.k * footprint / sub.thickness
    g_x = sub.k * actuator.grid.width * sub.thickness / delta_d
    return g_z / g_x


def heater_mean_temp(state, loop, actuator):
    """Footprint-weighted mean temperature rise of a loop (thermal camera average)."""
    area = _loop_area(actuator, loop)
    return float(np.sum(area * state.theta) / np.sum(area))


def heater_mean_temps(state, actuator):
    return {name: heater_mean_temp(state, name, actuator) for name in actuator.loop_names}


def thermal_time_constant(actuator, h):
    """Slowest single-block time constant C/(hA), s."""
    return float(np.max(actuator.heat_capacity / (h * actuator.conv_area)))


def explicit_stability_limit(actuator, h):
    return HeatNetwork(actuator, h).stability_limit


def loop_crosstalk(actuator, h, drive_loop='outer'):
    """Leakage of a driven loop into the other loop's footprint at steady state.

    Returns the hottest block under the idle loop over the driven loop's mean
    temperature rise; the value is independent of the drive power.
    """
    others = [name for name in actuator.loop_names if name != drive_loop]
    if not others:
        raise ConfigError('need a second loop to measure cross-talk', key='loop')
    net = HeatNetwork(actuator, h)
    powers = {'outer': 0.0, 'inner': 0.0}
    powers[drive_loop] = 1.0
    theta = net.steady(powers['outer'], powers['inner'])
    driven = _loop_area(actuator, drive_loop)
    driven_mean = float(np.sum(driven * theta) / np.sum(driven))
    idle = _loop_area(actuator, others[0]) > 0
    return float(np.max(theta[idle]) / driven_mean)
