"""Figure metrics derived from stored time series (never computed while stepping)."""
import numpy as np
import pandas as pd

from ..utils.exceptions import NumericalError
from .scenario import TimeSeriesRecord

COLUMNS = list(TimeSeriesRecord._fields)

# rest curvature slope is fitted over this ambient window, K
SENSITIVITY_WINDOW = 10.0


def to_frame(records):
    return pd.DataFrame.from_records(records, columns=COLUMNS)


def _column(series, key):
    if isinstance(series, pd.DataFrame):
        return series['t_s'].to_numpy(dtype=float), series[key].to_numpy(dtype=float)
    t = np.array([r.t_s for r in series], dtype=float)
    v = np.array([getattr(r, key) for r in series], dtype=float)
    return t, v


def value_at(series, t, key='ref_disp_mm'):
    """Linear interpolation of a column at time t; t must lie inside the series."""
    ts, vs = _column(series, key)
    if len(ts) == 0 or t < ts[0] - 1e-9 or t > ts[-1] + 1e-9:
        raise NumericalError('series does not cover t = %g s' % t)
    return float(np.interp(t, ts, vs))


def saturation_value(series, t_sat=300.0, key='ref_disp_mm'):
    """Displacement after t_sat seconds of activation."""
    return value_at(series, t_sat, key)


def normalize_displacement(series, t_norm=300.0, key='ref_disp_mm'):
    """Every displacement divided by the value at t_norm."""
    norm = value_at(series, t_norm, key)
    if norm == 0.0:
        raise NumericalError('displacement at t = %g s is zero, cannot normalize' % t_norm)
    return _column(series, key)[1] / norm


def _first_crossing(t, v, level, rising):
    hit = v >= level if rising else v <= level
    idx = np.flatnonzero(hit)
    if len(idx) == 0:
        return np.inf
    k = idx[0]
    if k == 0:
        return float(t[0])
    # linear interpolation inside the bracketing interval
    t0, t1, v0, v1 = t[k - 1], t[k], v[k - 1], v[k]
    return float(t0 + (level - v0) * (t1 - t0) / (v1 - v0))


def rise_time(series, frac=0.9, t_end=300.0, t_start=0.0, key='ref_disp_mm'):
    """Time from t_start until |d| first reaches frac * |d(t_end)|."""
    target = abs(value_at(series, t_end, key))
    if target == 0.0:
        raise NumericalError('no displacement at t = %g s, rise time undefined' % t_end)
    t, v = _column(series, key)
    keep = (t >= t_start) & (t <= t_end + 1e-9)
    return _first_crossing(t[keep], np.abs(v[keep]), frac * target, rising=True) - t_start


def time_to_fraction(series, frac=0.1, t_from=300.0, key='ref_disp_mm'):
    """Time after t_from until |d| first falls to frac * |d(t_from)|; inf if it never does."""
    start = abs(value_at(series, t_from, key))
    if start == 0.0:
        raise NumericalError('no displacement at t = %g s to decay from' % t_from)
    t, v = _column(series, key)
    keep = t >= t_from - 1e-9
    return _first_crossing(t[keep], np.abs(v[keep]), frac * start, rising=False) - t_from


def cycle_peak_to_peak(series, period, cycles, t0=0.0, key='ref_disp_mm'):
    """max - min of a column inside each period-long window."""
    t, v = _column(series, key)
    out = []
    for c in range(int(cycles)):
        lo, hi = t0 + c * period, t0 + (c + 1) * period
        window = v[(t >= lo - 1e-9) & (t <= hi + 1e-9)]
        if len(window) == 0:
            raise NumericalError('no samples in cycle %d' % c)
        out.append(float(window.max() - window.min()))
    return np.array(out)


def sensitivity_fit(points, window=SENSITIVITY_WINDOW):
    """Thermal sensitivity c (1/cm/K) from (dT_amb, kappa_fit) pairs.

    Signed least-squares slope through the origin of kappa_fit against the
    ambient rise, using the points with dT_amb <= window. The sign follows
    kappa_fit: positive when the strip curls toward its top face.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    pts = pts[pts[:, 0] <= window + 1e-9]
    if len(pts) < 3:
        raise NumericalError('need >= 3 points with dT_amb <= %g K, got %d' % (window, len(pts)))
    x, y = pts[:, 0], pts[:, 1]
    sxx = float(np.dot(x, x))
    if sxx == 0.0:
        raise NumericalError('all points at dT_amb = 0')
    return float(np.dot(x, y) / sxx)


def linear_r2(x, y):
    """Coefficient of determination of a straight-line fit."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        raise NumericalError('need >= 3 points for a linear fit')
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot
