"""Exponential smoothing with a smoothing factor chosen by trading noise
rejection against ramp tracking error."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trajectory import Trajectory, TrajectoryError

_INVPHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class FilterParams:
    lam: float = 0.75
    sigma: float = 0.1
    delta: float = 0.1
    alpha_min: float = 0.01
    alpha_max: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        if not 0.0 < self.alpha_min < self.alpha_max <= 1.0:
            raise ValueError("need 0 < alpha_min < alpha_max <= 1")
        if self.sigma < 0 or self.delta < 0:
            raise ValueError("sigma and delta must be non-negative")


def alpha_objective(alpha, lam, sigma, delta):
    """Noise term lam*sigma*sqrt(a/(2-a)) plus tracking term (1-lam)*(1-a)*delta/a."""
    alpha = np.asarray(alpha, dtype=float)
    return lam * sigma * np.sqrt(alpha / (2.0 - alpha)) + (1.0 - lam) * (1.0 - alpha) * delta / alpha


def optimize_alpha(params: FilterParams, tol: float = 1e-12) -> float:
    """Golden-section minimisation of :func:`alpha_objective` on [alpha_min, alpha_max]."""
    p = params
    lam, sigma, delta = p.lam, p.sigma, p.delta

    def f(a):
        return lam * sigma * math.sqrt(a / (2.0 - a)) + (1.0 - lam) * (1.0 - a) * delta / a

    lo, hi = p.alpha_min, p.alpha_max
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    best = (lo + hi) / 2
    # monotone objectives (sigma=0 or delta=0) sit on a bound
    cands = [(f(best), best), (f(p.alpha_min), p.alpha_min), (f(p.alpha_max), p.alpha_max)]
    return min(cands)[1]


def smooth(traj: Trajectory, alpha: float) -> Trajectory:
    """out[0] = in[0]; out[k] = out[k-1] + alpha*(in[k] - out[k-1]), per coordinate."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if len(traj) == 0:
        raise TrajectoryError("cannot smooth an empty trajectory")
    if alpha == 1.0:
        return traj
    return traj.with_xy(_ema(traj.xy, np.full(len(traj), alpha)))


def _ema(xy, alphas):
    out = np.empty_like(xy)
    out[0] = xy[0]
    for k in range(1, len(xy)):
        out[k] = out[k - 1] + alphas[k] * (xy[k] - out[k - 1])
    return out


def estimate_velocity(xy, window: int = 15) -> np.ndarray:
    """Per-sample speed estimate: median step length over the trailing ``window`` steps."""
    steps = np.hypot(*np.diff(np.asarray(xy, dtype=float), axis=0).T)
    est = np.zeros(len(xy))
    for k in range(1, len(xy)):
        est[k] = np.median(steps[max(0, k - window):k])
    if len(xy) > 1:
        est[0] = est[1]
    return est


def adaptive_smooth(traj: Trajectory, params: FilterParams, window: int = 15) -> Trajectory:
    """Exponential smoothing whose factor is re-optimised at every sample from a trailing speed estimate."""
    if len(traj) == 0:
        raise TrajectoryError("cannot smooth an empty trajectory")
    if len(traj) == 1:
        return traj
    deltas = estimate_velocity(traj.xy, window)
    cache = {}
    alphas = np.empty(len(traj))
    for k, d in enumerate(deltas):
        key = round(float(d), 6)
        if key not in cache:
            cache[key] = optimize_alpha(FilterParams(params.lam, params.sigma, key, params.alpha_min, params.alpha_max))
        alphas[k] = cache[key]
    return traj.with_xy(_ema(traj.xy, alphas))
