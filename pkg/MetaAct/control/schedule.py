from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..model.actuator import LOOP_NAMES
from ..utils.exceptions import ConfigError

LOOPS = LOOP_NAMES


@dataclass(frozen=True)
class Segment:
    t_start: float
    t_end: float
    P_outer: float = 0.0
    P_inner: float = 0.0

    @property
    def duration(self):
        return self.t_end - self.t_start


@dataclass(frozen=True)
class PowerSchedule:
    """Piecewise-constant loop powers; time not covered by a segment is unpowered."""
    segments: Tuple[Segment, ...] = ()

    def __post_init__(self):
        prev_end = -np.inf
        for k, seg in enumerate(self.segments):
            if not seg.t_end > seg.t_start:
                raise ConfigError('segment %d ends before it starts' % k, key='schedule.segments')
            if seg.t_start < prev_end:
                raise ConfigError('segment %d overlaps or precedes segment %d' % (k, k - 1),
                                  key='schedule.segments')
            if min(seg.P_outer, seg.P_inner) < 0:
                raise ConfigError('segment %d has negative power' % k, key='schedule.segments')
            prev_end = seg.t_end
        starts = np.array([seg.t_start for seg in self.segments])
        object.__setattr__(self, '_starts', starts)

    @property
    def end(self):
        return self.segments[-1].t_end if self.segments else 0.0

    def __len__(self):
        return len(self.segments)


def power_at(schedule, t):
    """(P_outer, P_inner) at time t, segments are closed on the left and open on the right."""
    if not schedule.segments:
        return 0.0, 0.0
    k = int(np.searchsorted(schedule._starts, t, side='right')) - 1
    if k < 0:
        return 0.0, 0.0
    seg = schedule.segments[k]
    if t < seg.t_end:
        return seg.P_outer, seg.P_inner
    return 0.0, 0.0


def schedule_energy(schedule):
    """Electrical energy per loop, J."""
    return (sum(s.P_outer * s.duration for s in schedule.segments),
            sum(s.P_inner * s.duration for s in schedule.segments))


def _loop_powers(loop, power):
    if loop not in LOOPS:
        raise ConfigError('loop must be one of %s, got %r' % (LOOPS, loop), key='schedule.loop')
    return (power, 0.0) if loop == 'outer' else (0.0, power)


def step_schedule(loop, power, t_on):
    return PowerSchedule((Segment(0.0, float(t_on), *_loop_powers(loop, power)),))


def cyclic_schedule(loop, power, t_on, t_off, cycles):
    """`cycles` repetitions of t_on powered followed by t_off unpowered."""
    if t_on <= 0 or t_off <= 0:
        raise ConfigError('t_on and t_off must be > 0', key='schedule')
    powers = _loop_powers(loop, power)
    period = t_on + t_off
    return PowerSchedule(tuple(Segment(c * period, c * period + t_on, *powers) for c in range(int(cycles))))


def alternating_schedule(power, t_outer=50.0, t_inner=30.0, cycles=5, t_rest=0.0):
    """Outer loop for t_outer, then inner loop for t_inner, repeated; optional rest after each."""
    segments = []
    t = 0.0
    for _ in range(int(cycles)):
        segments.append(Segment(t, t + t_outer, power, 0.0))
        t += t_outer
        segments.append(Segment(t, t + t_inner, 0.0, power))
        t += t_inner + t_rest
    return PowerSchedule(tuple(segments))


def schedule_from_cfg(sched_cfg):
    kind = sched_cfg.kind
    if kind == 'none':
        return PowerSchedule()
    if kind == 'step':
        return step_schedule(sched_cfg.loop, float(sched_cfg.power), float(sched_cfg.t_on))
    if kind == 'cyclic':
        return cyclic_schedule(sched_cfg.loop, float(sched_cfg.power), float(sched_cfg.t_on),
                               float(sched_cfg.t_off), int(sched_cfg.cycles))
    if kind == 'alternating':
        return alternating_schedule(float(sched_cfg.power), float(sched_cfg.t_outer), float(sched_cfg.t_inner),
                                    int(sched_cfg.cycles), float(sched_cfg.t_rest))
    if kind == 'segments':
        return PowerSchedule(tuple(Segment(*map(float, seg)) for seg in sched_cfg.segments))
    raise ConfigError('unknown schedule kind %r' % kind, key='schedule.kind')
