import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..model.actuator import LOOP_NAMES
from ..utils.common_utils import check_finite
from ..utils.exceptions import ConfigError, NumericalError

logger = logging.getLogger(__name__)

SCHEMES = ('implicit', 'explicit')


@dataclass(frozen=True)
class ThermalParams:
    h: float = 10.0
    dt: float = 0.1
    scheme: str = 'implicit'

    def __post_init__(self):
        if not np.isfinite(self.h) or self.h <= 0:
            raise ConfigError('must be > 0, got %r' % self.h, key='thermal.h')
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ConfigError('must be > 0, got %r' % self.dt, key='thermal.dt')
        if self.scheme not in SCHEMES:
            raise ConfigError('must be one of %s, got %r' % (SCHEMES, self.scheme), key='thermal.scheme')


@dataclass(frozen=True)
class ThermalState:
    """Temperature field over (cell, lane) blocks.

    The field is stored as the excess over ambient, so the unpowered state
    is exactly zero and stays there.
    """
    theta: np.ndarray
    T_amb: float = 23.0
    t: float = 0.0

    @classmethod
    def ambient(cls, actuator, T_amb=23.0):
        return cls(theta=np.zeros((actuator.n_cells, actuator.n_lanes)), T_amb=float(T_amb), t=0.0)

    @property
    def T(self):
        return self.T_amb + self.theta

    def cell_theta(self, actuator):
        """Per-cell width-averaged excess temperature."""
        b = actuator.grid.lane_widths
        return self.theta @ b / b.sum()

    def cell_T(self, actuator):
        return self.T_amb + self.cell_theta(actuator)


class HeatNetwork(object):
    """Lumped (cell, lane) network: C dθ/dt = -K θ + Q, K = conduction + convection."""

    def __init__(self, actuator, h):
        self.actuator = actuator
        self.h = float(h)
        n, m = actuator.n_cells, actuator.n_lanes
        self.shape = (n, m)
        self.size = n * m
        self.C = actuator.heat_capacity.ravel()
        self.hA = self.h * actuator.conv_area.ravel()

        index = np.arange(self.size).reshape(n, m)
        rows, cols, vals = [], [], []
        for a, b, g in ((index[:-1, :], index[1:, :], actuator.gx),
                        (index[:, :-1], index[:, 1:], actuator.gy)):
            a, b, g = a.ravel(), b.ravel(), g.ravel()
            rows += [a, b, a, b]
            cols += [b, a, a, b]
            vals += [-g, -g, g, g]
        rows.append(np.arange(self.size))
        cols.append(np.arange(self.size))
        vals.append(self.hA)
        self.K = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                               shape=(self.size, self.size))

        self.weights = {name: actuator.lane_weights(name).ravel() for name in actuator.loop_names}

    def source(self, P_outer, P_inner):
        Q = np.zeros(self.size)
        for name, power in zip(LOOP_NAMES, (P_outer, P_inner)):
            if power < 0 or not np.isfinite(power):
                raise ConfigError('loop power must be finite and >= 0, got %r' % power, key=name)
            if power == 0:
                continue
            if name not in self.weights:
                raise ConfigError('actuator has no %s loop to power' % name, key=name)
            Q += power * self.weights[name]
        return Q

    @property
    def stability_limit(self):
        """Largest explicit dt that keeps the update monotone (diagonal dominance)."""
        return float(np.min(self.C / self.K.diagonal()))

    def steady(self, P_outer, P_inner):
        theta = splu(self.K).solve(self.source(P_outer, P_inner))
        return check_finite('steady temperature', theta).reshape(self.shape)


class ThermalSolver(object):
    def __init__(self, actuator, params):
        self.actuator = actuator
        self.params = params
        self.network = HeatNetwork(actuator, params.h)
        dt = params.dt
        logger.debug('heat network %d x %d blocks, h = %g, dt = %g s (%s)'
                     % (actuator.n_cells, actuator.n_lanes, params.h, dt, params.scheme))
        if params.scheme == 'explicit':
            limit = self.network.stability_limit
            if dt > limit:
                raise NumericalError('explicit scheme unstable: dt = %g s exceeds the %g s limit'
                                     % (dt, limit))
            self._lu = None
        else:
            system = sp.diags(self.network.C / dt, format='csc') + self.network.K
            self._lu = splu(system.tocsc())

    def step(self, state, P_outer, P_inner):
        net, dt = self.network, self.params.dt
        Q = net.source(P_outer, P_inner)
        theta = state.theta.ravel()
        if self._lu is None:
            theta = theta + dt / net.C * (Q - net.K @ theta)
        else:
            theta = self._lu.solve(net.C / dt * theta + Q)
        check_finite('temperature at t = %g s' % (state.t + dt), theta)
        return ThermalState(theta=theta.reshape(net.shape), T_amb=state.T_amb, t=state.t + dt)

    def rate(self, state, P_outer, P_inner):
        """dθ/dt of the continuous network at the given state, K/s."""
        net = self.network
        dtheta = (net.source(P_outer, P_inner) - net.K @ state.theta.ravel()) / net.C
        return dtheta.reshape(net.shape)

    def steady(self, P_outer, P_inner, T_amb=23.0):
        return ThermalState(theta=self.network.steady(P_outer, P_inner), T_amb=T_amb, t=0.0)

    def run_to_steady(self, state, P_outer, P_inner, tol=1e-9, max_steps=200000):
        for _ in range(max_steps):
            state = self.step(state, P_outer, P_inner)
            if np.max(np.abs(self.rate(state, P_outer, P_inner))) < tol:
                return state
        raise NumericalError('no steady state within %d steps (tol %g K/s)' % (max_steps, tol))


@lru_cache(maxsize=16)
def get_solver(actuator, params):
    return ThermalSolver(actuator, params)


def step_thermal(state, P_outer, P_inner, params, actuator):
    """Advance the temperature field by one params.dt."""
    return get_solver(actuator, params).step(state, P_outer, P_inner)


def steady_state(actuator, params, P_outer, P_inner, T_amb=23.0):
    return ThermalState(theta=HeatNetwork(actuator, params.h).steady(P_outer, P_inner), T_amb=T_amb)
