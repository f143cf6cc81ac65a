"""Trajectory decoders producing ranked (word, log10-score) lists.

Two decoders implement :class:`DecoderContract`:

* :class:`ShapeDecoder` scores every vocabulary word by the mean squared
  distance between the resampled trajectory and the word's ideal template.
* :class:`KeyPathDecoder` is lexicon-free: it fits polylines through key
  centers and returns the best distinct letter strings, which may be
  misspelled or non-words.  It plays the role of a character-level neural
  decoder whose raw output still needs spelling correction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Protocol

import numpy as np

from . import kernels
from .kernels.keypath import decode_hash
from .layout import ALPHABET, KeyboardLayout
from .simulate import key_path
from .trajectory import Trajectory, TrajectoryError, arc_length_resample
from .vocab import Vocabulary, VocabError

LN10 = math.log(10.0)


class ScoredCandidate(NamedTuple):
    word: str
    log_score: float


class DecoderContract(Protocol):
    def decode(self, traj: Trajectory, vocab: Vocabulary, beam: int) -> list[ScoredCandidate]:
        ...


def log10_normalize(scores) -> np.ndarray:
    s = np.asarray(scores, dtype=float)
    if not len(s):
        return s
    m = s.max()
    return s - (m + np.log10(np.sum(10.0 ** (s - m))))


def rank(words, scores, beam=None) -> list[ScoredCandidate]:
    """Sort descending by score, ties lexicographic; keep ``beam`` and log10-normalise over the kept set."""
    order = sorted(range(len(words)), key=lambda i: (-scores[i], words[i]))
    if beam is not None:
        order = order[:beam]
    kept = log10_normalize([scores[i] for i in order])
    return [ScoredCandidate(words[i], float(s)) for i, s in zip(order, kept)]


def ideal_template(word: str, layout: KeyboardLayout, n: int = 64) -> np.ndarray:
    """``n`` points equally spaced by arc length along the word's key-center polyline."""
    if n < 2:
        raise ValueError("template needs n >= 2")
    return arc_length_resample(key_path(word, layout), n)


@dataclass
class ShapeDecoder:
    layout: KeyboardLayout
    n: int = 64
    channel_sigma: float = 0.2
    prior_weight: float = 0.1
    endpoint_radius: float = 2.5

    def __post_init__(self):
        self._cache = {}

    def templates(self, vocab: Vocabulary) -> np.ndarray:
        key = id(vocab)
        hit = self._cache.get(key)
        if hit is None or hit[0] is not vocab:
            T = np.stack([ideal_template(w, self.layout, self.n) for w in vocab.words])
            hit = (vocab, T)
            self._cache[key] = hit
        return hit[1]

    def distances(self, traj: Trajectory, vocab: Vocabulary) -> np.ndarray:
        """Mean squared point distance of the resampled trajectory to every template."""
        if len(traj) < 2:
            raise TrajectoryError("decoding needs at least two samples")
        p = arc_length_resample(traj.xy, self.n)
        T = self.templates(vocab)
        return ((T - p) ** 2).sum(axis=2).mean(axis=1)

    def decode(self, traj: Trajectory, vocab: Vocabulary, beam: int = 10) -> list[ScoredCandidate]:
        if len(vocab) == 0:
            raise VocabError("empty vocabulary")
        D = self.distances(traj, vocab)
        T = self.templates(vocab)
        r = self.endpoint_radius
        keep = ((np.hypot(*(T[:, 0] - traj.xy[0]).T) <= r) & (np.hypot(*(T[:, -1] - traj.xy[-1]).T) <= r))
        if not keep.any():
            keep[:] = True
        scores = -D / (2 * self.channel_sigma ** 2) / LN10 + self.prior_weight * vocab.log10_prior
        idx = np.flatnonzero(keep)
        return rank([vocab.words[i] for i in idx], scores[idx].tolist(), beam)


def shape_decode(traj, vocab, layout, beam=10, channel_sigma=0.2, **kw) -> list[ScoredCandidate]:
    return ShapeDecoder(layout, channel_sigma=channel_sigma, **kw).decode(traj, vocab, beam)


@dataclass
class KeyPathDecoder:
    """Lexicon-free N-best letter strings from a trajectory.

    The path is resampled every ``step`` key widths (between ``n_min`` and
    ``n_max`` points).  ``channel_sigma`` scales residuals, ``letter_penalty``
    is the natural-log cost of each emitted letter, and a vertex may sit on
    a key only if the key center is within ``vertex_radius`` of its sample
    (the two nearest keys are always allowed).
    """

    layout: KeyboardLayout
    step: float = 0.4
    n_min: int = 8
    n_max: int = 48
    channel_sigma: float = 0.3
    letter_penalty: float = 2.0
    vertex_radius: float = 1.0

    def __post_init__(self):
        self._labels = [c for c in ALPHABET if c in self.layout]
        self._centers = self.layout.centers(self._labels)
        self._codes = np.array([ALPHABET.index(c) for c in self._labels])

    def sample_count(self, xy) -> int:
        length = float(np.hypot(*np.diff(xy, axis=0).T).sum())
        return int(np.clip(np.ceil(length / self.step) + 1, self.n_min, self.n_max))

    def decode(self, traj: Trajectory, vocab: Vocabulary | None = None, beam: int = 8) -> list[ScoredCandidate]:
        if len(traj) < 2:
            raise TrajectoryError("decoding needs at least two samples")
        p = arc_length_resample(traj.xy, self.sample_count(traj.xy))
        dist = np.sqrt(((p[:, None, :] - self._centers[None]) ** 2).sum(-1))
        allowed = dist <= self.vertex_radius
        nearest = np.argsort(dist, axis=1, kind="stable")[:, :2]
        np.put_along_axis(allowed, nearest, True, axis=1)
        st_i, st_k = np.nonzero(allowed)
        scale = 1.0 / (2 * self.channel_sigma ** 2)
        seg = kernels.segment_costs(p, self._centers, st_i, st_k) * scale
        start = np.where(st_i == 0, ((p[0] - self._centers[st_k]) ** 2).sum(axis=1) * scale, np.inf)
        costs, hashes = kernels.keypath_nbest(seg, start, self._codes[st_k], st_i == len(p) - 1,
                                              self.letter_penalty, beam)
        words = [decode_hash(h, ALPHABET) for h in hashes]
        return rank(words, list(-costs / LN10), beam)
