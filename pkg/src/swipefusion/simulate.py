"""Synthetic word-gesture trajectories and the Study-1 style pseudo-decoder."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .layout import KeyboardLayout, LayoutError
from .trajectory import Trajectory

CD_GAIN = 1.8


@dataclass(frozen=True)
class SimConfig:
    """Trajectory synthesis settings.

    Lengths are layout units (key widths).  ``motor_speed`` is hand speed in
    motor units per second; the cursor moves ``cd_gain`` times faster.
    """

    cd_gain: float = CD_GAIN
    noise_std: float = 0.0
    drift_rate: float = 0.0
    pinch_impulse: float = 0.0
    sample_rate: float = 60.0
    motor_speed: float = 3.5
    min_duration: float = 0.15
    pinch_samples: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if min(self.noise_std, self.drift_rate, self.pinch_impulse) < 0:
            raise ValueError("noise magnitudes must be non-negative")
        if self.cd_gain <= 0 or self.motor_speed <= 0:
            raise ValueError("cd_gain and motor_speed must be positive")


NOISE_PROFILES = {
    "none": dict(noise_std=0.0, drift_rate=0.0, pinch_impulse=0.0),
    "low": dict(noise_std=0.05, drift_rate=0.01, pinch_impulse=0.3),
    "medium": dict(noise_std=0.15, drift_rate=0.02, pinch_impulse=0.6),
    "high": dict(noise_std=0.25, drift_rate=0.03, pinch_impulse=0.9),
}


def profile(name: str, **overrides) -> SimConfig:
    try:
        base = NOISE_PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown noise profile {name!r}; choose from {sorted(NOISE_PROFILES)}") from None
    return replace(SimConfig(**base), **overrides)


def key_path(word: str, layout: KeyboardLayout) -> np.ndarray:
    for ch in word:
        if ch not in layout:
            raise LayoutError(f"character {ch!r} in {word!r} has no key on layout {layout.name!r}")
    return np.array([layout[ch].center for ch in word], dtype=float).reshape(-1, 2)


def ideal_path(word: str, layout: KeyboardLayout, cfg: SimConfig):
    """Noise-free (t, xy) sampled at ``cfg.sample_rate`` along the key-center polyline."""
    pts = key_path(word, layout)
    seg = np.hypot(*np.diff(pts, axis=0).T) if len(pts) > 1 else np.zeros(0)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    speed = cfg.cd_gain * cfg.motor_speed
    duration = max(cum[-1] / speed, cfg.min_duration)
    n = max(2, int(np.ceil(duration * cfg.sample_rate)) + 1)
    t = np.arange(n) / cfg.sample_rate
    s = np.minimum(t * speed, cum[-1]) if cum[-1] > 0 else np.zeros(n)
    if cum[-1] > 0:
        s[-1] = cum[-1]
        xy = np.column_stack([np.interp(s, cum, pts[:, 0]), np.interp(s, cum, pts[:, 1])])
    else:
        xy = np.repeat(pts[:1], n, axis=0)
    return t, xy


def synthesize(word: str, layout: KeyboardLayout, cfg: SimConfig, rng=None) -> Trajectory:
    """Ideal key-center path plus white noise, random-walk drift and a pinch displacement at the end."""
    t, xy = ideal_path(word, layout, cfg)
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    n = len(t)
    noise = rng.normal(0.0, 1.0, size=(n, 2))
    walk = np.cumsum(rng.normal(0.0, 1.0, size=(n, 2)), axis=0)
    theta = rng.uniform(0.0, 2 * np.pi)
    xy = xy + cfg.noise_std * noise + cfg.drift_rate * walk
    if cfg.pinch_impulse > 0:
        k = min(cfg.pinch_samples, n)
        xy[-k:] += cfg.pinch_impulse * np.array([np.cos(theta), np.sin(theta)])
    return Trajectory(t, xy, word)


def tolerance_rects(word: str, layout: KeyboardLayout, scale: float = 2.0) -> np.ndarray:
    """(m, 4) boxes x0, y0, x1, y1: each key rectangle scaled by ``scale`` per axis about its center."""
    rects = []
    for ch in dict.fromkeys(word):
        k = layout[ch]
        hw, hh = scale * k.w / 2, scale * k.h / 2
        rects.append((k.cx - hw, k.cy - hh, k.cx + hw, k.cy + hh))
    return np.array(rects, dtype=float).reshape(-1, 4)


def containment_fraction(xy, word, layout, scale=2.0):
    inside = _inside_count(np.asarray(xy, dtype=float), tolerance_rects(word, layout, scale))
    return inside, len(xy)


def _inside_count(xy, rects):
    x, y = xy[:, :1], xy[:, 1:]
    hit = (x >= rects[:, 0]) & (x <= rects[:, 2]) & (y >= rects[:, 1]) & (y <= rects[:, 3])
    return int(hit.any(axis=1).sum())


def pseudo_decode(traj: Trajectory, word: str, layout: KeyboardLayout, scale: float = 2.0,
                  threshold: float = 0.7) -> bool:
    """Accept iff at least ``threshold`` of the samples fall inside the word's enlarged key regions."""
    if len(traj) == 0 or not word:
        return False
    inside, n = containment_fraction(traj.xy, word, layout, scale)
    # integer comparison keeps the 70% boundary exact
    num, den = _as_ratio(threshold)
    return inside * den >= num * n


def _as_ratio(x):
    from fractions import Fraction

    f = Fraction(x).limit_denominator(10**6)
    return f.numerator, f.denominator
