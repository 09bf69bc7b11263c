import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
import tqdm

from ..utils.exceptions import NumericalError

logger = logging.getLogger(__name__)


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    trace: List[float] = field(default_factory=list)
    n_iter: int = 0
    n_eval: int = 0
    converged: bool = False


def nelder_mead(func, x_start, lower, upper, step=0.05, xtol=1e-4, max_iter=500,
                alpha=1.0, gamma=2.0, rho=0.5, sigma=0.5, map_fn=map, stop_value=None,
                callback=None, progress=False):
    """Bounded Nelder-Mead minimisation.

    Works in coordinates scaled to the box [lower, upper]; every trial point is
    projected back into the box. The initial simplex offsets each coordinate by
    `step` of its range. Stops when the simplex diameter (scaled units) drops
    below `xtol`, when the best value reaches `stop_value`, or after `max_iter`
    iterations. `trace` holds the best value after every iteration.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    span = upper - lower
    if np.any(span <= 0):
        raise ValueError('empty parameter box')
    dim = len(lower)
    n_eval = [0]

    def to_x(u):
        return lower + np.clip(u, 0.0, 1.0) * span

    def evaluate_many(points):
        values = list(map_fn(func, [to_x(u) for u in points]))
        n_eval[0] += len(points)
        for u, v in zip(points, values):
            if not np.isfinite(v):
                raise NumericalError('non-finite objective %r at %s' % (v, to_x(u)))
        return [float(v) for v in values]

    def evaluate(u):
        return evaluate_many([u])[0]

    x_start = np.asarray(x_start, dtype=float)
    u0 = np.clip((x_start - lower) / span, 0.0, 1.0)
    vertices = [u0]
    for i in range(dim):
        u = u0.copy()
        u[i] = u[i] + step if u[i] + step <= 1.0 else u[i] - step
        vertices.append(u)
    values = evaluate_many(vertices)
    simplex = sorted(zip(values, range(len(vertices)), vertices), key=lambda item: (item[0], item[1]))
    simplex = [(v, u) for v, _, u in simplex]

    trace = [simplex[0][0]]
    converged = False
    it = 0
    pbar = tqdm.tqdm(total=max_iter, desc='simplex', dynamic_ncols=True, leave=False) if progress else None
    while it < max_iter:
        best_val = simplex[0][0]
        diameter = max(np.max(np.abs(u - simplex[0][1])) for _, u in simplex[1:])
        if diameter < xtol or (stop_value is not None and best_val <= stop_value):
            converged = True
            break
        it += 1

        centroid = np.mean([u for _, u in simplex[:-1]], axis=0)
        worst_val, worst = simplex[-1]
        second_val = simplex[-2][0]

        ur = np.clip(centroid + alpha * (centroid - worst), 0.0, 1.0)
        fr = evaluate(ur)
        if best_val <= fr < second_val:
            simplex[-1] = (fr, ur)
        elif fr < best_val:
            ue = np.clip(centroid + gamma * (centroid - worst), 0.0, 1.0)
            fe = evaluate(ue)
            simplex[-1] = (fe, ue) if fe < fr else (fr, ur)
        else:
            if fr < worst_val:
                uc = np.clip(centroid + rho * (ur - centroid), 0.0, 1.0)
            else:
                uc = np.clip(centroid + rho * (worst - centroid), 0.0, 1.0)
            fc = evaluate(uc)
            if fc < min(fr, worst_val):
                simplex[-1] = (fc, uc)
            else:
                ub = simplex[0][1]
                shrunk = [ub + sigma * (u - ub) for _, u in simplex[1:]]
                simplex = [simplex[0]] + list(zip(evaluate_many(shrunk), shrunk))
        # stable sort keeps the incumbent ahead of ties
        simplex.sort(key=lambda item: item[0])
        trace.append(simplex[0][0])
        if callback is not None:
            callback(it, to_x(simplex[0][1]), simplex[0][0])
        if pbar is not None:
            pbar.update()
            pbar.set_postfix(dict(best='%.4g' % simplex[0][0]))
    if pbar is not None:
        pbar.close()

    logger.info('simplex stopped after %d iterations, %d evaluations, best %.6g%s'
                % (it, n_eval[0], simplex[0][0], '' if converged else ' (iteration limit)'))
    best_u = simplex[0][1]
    inside = np.all((x_start >= lower) & (x_start <= upper))
    x_best = x_start.copy() if (best_u is u0 and inside) else to_x(best_u)
    return SimplexResult(x=x_best, fun=simplex[0][0], trace=trace,
                         n_iter=it, n_eval=n_eval[0], converged=converged)
