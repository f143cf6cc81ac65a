"""Score Fusion and the sequential Naive Correction baseline."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .decoder import DecoderContract, ScoredCandidate
from .kernels import levenshtein_batch
from .lm import ContextualScorer, NGramModel, PhraseRecord
from .spell import EditCostModel, correction_logprobs
from .trajectory import Trajectory
from .vocab import Vocabulary, encode

NAIVE_FANOUT = 5


class FusionError(ValueError):
    pass


@dataclass(frozen=True)
class FusionConfig:
    swipe_correction_coeff: float = 0.3
    lm_coeff: float = 0.3
    num_suggestions: int = 5
    beam: int = 8
    length_cap: int | None = 3

    def __post_init__(self):
        for name in ("swipe_correction_coeff", "lm_coeff"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise FusionError(f"{name} must lie in [0, 1], got {v}")
        if self.swipe_correction_coeff + self.lm_coeff > 1.0 + 1e-12:
            raise FusionError("swipe_correction_coeff + lm_coeff must not exceed 1")
        if self.num_suggestions < 1 or self.beam < 1:
            raise FusionError("num_suggestions and beam must be positive")

    @property
    def raw_coeff(self) -> float:
        return 1.0 - self.swipe_correction_coeff - self.lm_coeff

    def with_overrides(self, section: dict) -> "FusionConfig":
        allowed = {"swipe_correction_coeff", "lm_coeff", "num_suggestions", "beam", "length_cap"}
        unknown = set(section) - allowed
        if unknown:
            raise FusionError(f"unknown fusion keys: {sorted(unknown)}")
        return replace(self, **section)


def blend(raw: list[ScoredCandidate], typo_rows, lm_scores, words, cfg: FusionConfig,
          tiebreak=None) -> list[ScoredCandidate]:
    """Blend per raw decoding, max-merge per vocabulary word, sort and truncate.

    ``typo_rows[i]`` holds log P_ED of every vocabulary word against
    ``raw[i].word`` (``-inf`` for pruned words) and ``lm_scores`` is aligned
    with ``words``.  ``tiebreak`` ranks equal scores (default: list order).
    With a zero correction coefficient the correction term cannot tell
    candidates apart, so each raw decoding proposes only itself.
    """
    lm_scores = np.asarray(lm_scores, dtype=float)
    best = np.full(len(words), -np.inf)
    c_sc, c_lm = cfg.swipe_correction_coeff, cfg.lm_coeff
    if c_sc == 0.0:
        index = {w: i for i, w in enumerate(words)}
        for cand in raw:
            i = index.get(cand.word)
            if i is not None:
                b = cfg.raw_coeff * cand.log_score + c_lm * lm_scores[i]
                best[i] = max(best[i], b)
    else:
        for cand, typo in zip(raw, typo_rows):
            b = cfg.raw_coeff * cand.log_score + c_lm * lm_scores + c_sc * np.asarray(typo)
            np.maximum(best, b, out=best)
    return top_k(best, words, cfg.num_suggestions, tiebreak)


def top_k(scores, words, k, tiebreak=None) -> list[ScoredCandidate]:
    """Finite scores sorted descending; ties by ``tiebreak`` rank, else list order."""
    idx = np.flatnonzero(np.isfinite(scores))
    if len(idx) > k:
        # partition first, then widen to include anything tied with the k-th score
        kth = np.partition(scores[idx], len(idx) - k)[len(idx) - k]
        idx = idx[scores[idx] >= kth]
    tb = idx if tiebreak is None else np.asarray(tiebreak)[idx]
    order = idx[np.lexsort((tb, -scores[idx]))][:k]
    return [ScoredCandidate(words[i], float(scores[i])) for i in order]


def score_fusion(traj: Trajectory, decoder: DecoderContract, costs: EditCostModel, scorer: ContextualScorer,
                 record: PhraseRecord | None, cfg: FusionConfig, vocab: Vocabulary, prev_tokens=(),
                 raw: list[ScoredCandidate] | None = None) -> list[ScoredCandidate]:
    """Suggestions for one word trajectory.

    ``raw`` may carry a precomputed decoder output; the trajectory is then not decoded again.
    """
    if raw is None:
        raw = decoder.decode(traj, vocab, cfg.beam)
    raw = list(raw)[:cfg.beam]
    lm_scores = scorer.vocab_log10(vocab.words, prev_tokens, record) if cfg.lm_coeff else np.zeros(len(vocab))
    typo = ([correction_logprobs(c.word, vocab, costs, cfg.length_cap) for c in raw]
            if cfg.swipe_correction_coeff else [None] * len(raw))
    return blend(raw, typo, lm_scores, vocab.words, cfg, vocab.tiebreak)


def nearest_words(raw: str, vocab: Vocabulary, k: int = NAIVE_FANOUT) -> list[tuple[str, int]]:
    """The ``k`` vocabulary words closest to ``raw`` in unit Levenshtein distance; ties by frequency, then spelling."""
    codes, lens = vocab.codes()
    inp = encode(raw)
    # distance >= |length difference|, so every word within distance w lies in
    # the length band of width w; once k such words exist the top k is exact
    width = 2
    while True:
        d = levenshtein_batch(codes, lens, inp, len(raw) - width, len(raw) + width)
        sel = np.flatnonzero(d <= width)
        order = sel[np.lexsort((vocab.tiebreak[sel], d[sel]))][:k]
        if len(order) == k or len(order) == len(vocab):
            return [(vocab.words[i], int(d[i])) for i in order]
        width *= 2


def naive_correction(traj: Trajectory, decoder: DecoderContract, ngram: NGramModel, prev_tokens,
                     cfg: FusionConfig, vocab: Vocabulary, k: int = NAIVE_FANOUT,
                     raw: list[ScoredCandidate] | None = None) -> list[ScoredCandidate]:
    """Decode, correct each raw decoding to its ``k`` nearest words, re-rank the pool by the n-gram alone."""
    if raw is None:
        raw = decoder.decode(traj, vocab, cfg.beam)
    pool: dict[str, int] = {}
    for cand in list(raw)[:cfg.beam]:
        for w, d in nearest_words(cand.word, vocab, k):
            pool[w] = min(d, pool.get(w, d))
    if not pool:
        return []
    p = ngram.distribution(prev_tokens)
    scored = sorted((-float(np.log10(p[ngram.token_id(w)])), d, vocab.tiebreak[vocab.index[w]], w)
                    for w, d in pool.items())
    return [ScoredCandidate(w, -s) for s, _, _, w in scored[:cfg.num_suggestions]]
