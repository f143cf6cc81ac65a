"""Timestamped 2-D cursor paths and their JSON Lines file format."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np


class TrajectoryError(ValueError):
    pass


class CursorSample(NamedTuple):
    t: float
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Cursor samples ``xy`` (n, 2) at times ``t`` (n,), optionally labelled with a word."""

    t: np.ndarray
    xy: np.ndarray
    word: Optional[str] = None

    def __post_init__(self):
        t = np.array(self.t, dtype=float).reshape(-1)
        xy = np.array(self.xy, dtype=float).reshape(-1, 2)
        if len(t) != len(xy):
            raise TrajectoryError("t and xy must have the same length")
        if len(t) and (t[0] < 0 or np.any(np.diff(t) <= 0)):
            raise TrajectoryError("timestamps must be non-negative and strictly increasing")
        t.flags.writeable = False
        xy.flags.writeable = False
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "xy", xy)

    def __len__(self):
        return len(self.t)

    @property
    def samples(self) -> list[CursorSample]:
        return [CursorSample(float(t), float(x), float(y)) for t, (x, y) in zip(self.t, self.xy)]

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0]) if len(self) else 0.0

    def with_xy(self, xy) -> "Trajectory":
        return Trajectory(self.t, xy, self.word)

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (self.word == other.word and np.array_equal(self.t, other.t)
                and np.array_equal(self.xy, other.xy))

    @classmethod
    def from_samples(cls, samples, word=None) -> "Trajectory":
        arr = np.asarray(samples, dtype=float).reshape(-1, 3)
        return cls(arr[:, 0], arr[:, 1:], word)

    def to_json(self) -> dict:
        return {"word": self.word,
                "samples": [[float(t), float(x), float(y)] for t, (x, y) in zip(self.t, self.xy)]}

    @classmethod
    def from_json(cls, obj) -> "Trajectory":
        return cls.from_samples(obj["samples"], obj.get("word"))


def read_trajectories(path) -> list[Trajectory]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(Trajectory.from_json(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise TrajectoryError(f"{path}:{lineno}: {e}") from None
    return out


def write_trajectories(trajs, path):
    with open(Path(path), "w") as fh:
        for tr in trajs:
            fh.write(json.dumps(tr.to_json()) + "\n")


def arc_length_resample(xy, n: int) -> np.ndarray:
    """Resample a polyline to ``n`` points equally spaced by arc length."""
    xy = np.asarray(xy, dtype=float)
    if n < 2:
        raise ValueError("need at least two resampled points")
    seg = np.hypot(*np.diff(xy, axis=0).T)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    if total <= 0.0:
        return np.repeat(xy[:1], n, axis=0)
    target = np.linspace(0.0, total, n)
    return np.column_stack([np.interp(target, cum, xy[:, 0]), np.interp(target, cum, xy[:, 1])])
