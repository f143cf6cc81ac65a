"""N-gram language model with interpolated absolute discounting, a
context-pooling interpolation layer and perplexity evaluation.

All log-probabilities are base 10.
"""
from __future__ import annotations

import json
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

BOS, EOS, UNK = "<s>", "</s>", "<unk>"
FORMAT = "swipefusion-ngram"
FORMAT_VERSION = 1

_TOKEN = re.compile(r"[a-z]+")


class LMError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


@dataclass
class PhraseRecord:
    stimulus: str
    history: list = field(default_factory=list)
    tags: list = field(default_factory=list)

    def __post_init__(self):
        if not self.stimulus.strip():
            raise LMError("stimulus must be non-empty")

    @property
    def words(self) -> list[str]:
        return tokenize(self.stimulus)

    def context_tokens(self) -> list[str]:
        toks = []
        for utt in self.history:
            toks += tokenize(utt)
        for tag in self.tags:
            toks += tokenize(tag.split(":", 1)[-1])
        return toks

    def to_json(self):
        return {"stimulus": self.stimulus, "history": list(self.history), "tags": list(self.tags)}

    @classmethod
    def from_json(cls, d):
        return cls(d["stimulus"], list(d.get("history", [])), list(d.get("tags", [])))


def read_phrases(path) -> list[PhraseRecord]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(PhraseRecord.from_json(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, LMError) as e:
                raise LMError(f"{path}:{lineno}: {e}") from None
    return out


def write_phrases(records, path):
    with open(path, "w") as fh:
        for r in records:
            fh.write(json.dumps(r.to_json()) + "\n")


class NGramModel:
    """Closed-vocabulary n-gram model; every word gets non-zero probability in every context."""

    def __init__(self, words, order, discount, counts):
        self.words = tuple(words)
        self.index = {w: i for i, w in enumerate(self.words)}
        self.order = order
        self.discount = discount
        self.counts = counts  # counts[k][context tuple] -> Counter(word -> count), k = context length
        self._tables = {k: {ctx: (np.array([self.index[w] for w in c]), np.array(list(c.values()), dtype=float))
                            for ctx, c in counts[k].items()}
                        for k in range(order)}
        uni_idx, uni_cnt = self._tables[0].get((), (np.zeros(0, dtype=int), np.zeros(0)))
        V = len(self.words)
        total = uni_cnt.sum()
        p = np.full(V, 1.0 / V)
        if total > 0:
            p *= discount * len(uni_cnt) / total
            np.add.at(p, uni_idx, np.maximum(uni_cnt - discount, 0.0) / total)
        self._unigram = p

    def __len__(self):
        return len(self.words)

    def token_id(self, w) -> int:
        return self.index.get(w, self.index[UNK])

    def _history(self, prev_tokens):
        k = self.order - 1
        hist = [w if w in self.index else UNK for w in prev_tokens][-k:] if k else []
        return tuple([BOS] * (k - len(hist)) + hist)

    def distribution(self, prev_tokens=()) -> np.ndarray:
        """P(. | history) over ``self.words``."""
        hist = self._history(list(prev_tokens))
        p = self._unigram
        for k in range(1, self.order):
            ctx = hist[len(hist) - k:]
            hit = self._tables[k].get(ctx)
            if hit is None:
                continue
            idx, cnt = hit
            total = cnt.sum()
            q = p * (self.discount * len(cnt) / total)
            np.add.at(q, idx, np.maximum(cnt - self.discount, 0.0) / total)
            p = q
        return p

    def prob(self, word, prev_tokens=()) -> float:
        return float(self.distribution(prev_tokens)[self.token_id(word)])

    def logprob(self, word, prev_tokens=(), record=None) -> float:
        return float(np.log10(self.prob(word, prev_tokens)))

    def to_json(self) -> dict:
        return {
            "format": FORMAT, "version": FORMAT_VERSION,
            "order": self.order, "discount": self.discount, "words": list(self.words),
            "counts": {str(k): [[list(ctx), dict(c)] for ctx, c in self.counts[k].items()] for k in range(self.order)},
        }

    @classmethod
    def from_json(cls, d) -> "NGramModel":
        if d.get("format") != FORMAT or d.get("version") != FORMAT_VERSION:
            raise LMError("not a version-1 swipefusion n-gram dump")
        counts = {int(k): {tuple(ctx): Counter(c) for ctx, c in rows} for k, rows in d["counts"].items()}
        return cls(d["words"], d["order"], d["discount"], counts)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "NGramModel":
        return cls.from_json(json.loads(Path(path).read_text()))


def train_ngram(corpus, order: int = 3, discount: float = 0.75, vocab=None) -> NGramModel:
    """Count n-grams over token sequences (sentences); tokens outside ``vocab`` become ``<unk>``."""
    if order not in (1, 2, 3):
        raise LMError("order must be 1, 2 or 3")
    if not 0.0 < discount < 1.0:
        raise LMError("discount must lie in (0, 1)")
    sents = [list(s) for s in corpus if len(s)]
    if not sents:
        raise LMError("empty training corpus")
    if vocab is None:
        words = list(dict.fromkeys(w for s in sents for w in s))
    else:
        words = list(vocab)
    words = [w for w in words if w not in (EOS, UNK, BOS)] + [EOS, UNK]
    known = set(words)
    counts = {k: defaultdict(Counter) for k in range(order)}
    pad = [BOS] * (order - 1)
    for s in sents:
        toks = pad + [w if w in known else UNK for w in s] + [EOS]
        for i in range(order - 1, len(toks)):
            for k in range(order):
                counts[k][tuple(toks[i - k:i])][toks[i]] += 1
    return NGramModel(words, order, discount, {k: dict(v) for k, v in counts.items()})


@dataclass
class ContextProfile:
    """Pooled context weights (word -> share of in-vocabulary context tokens)."""

    weights: dict
    n_tokens: int = 0

    @classmethod
    def from_record(cls, record: PhraseRecord | None, known) -> "ContextProfile":
        if record is None:
            return cls({}, 0)
        toks = [t for t in record.context_tokens() if t in known]
        c = Counter(toks)
        n = len(toks)
        return cls({w: k / n for w, k in c.items()}, n)

    @property
    def empty(self) -> bool:
        return self.n_tokens == 0


class ContextualScorer:
    """(1 - gamma) * P_ngram + gamma * P_context, with P_context the pooled
    context counts smoothed by ``smoothing`` pseudo-counts per word."""

    def __init__(self, ngram: NGramModel, gamma: float = 0.2, smoothing: float = 1e-4):
        if not 0.0 <= gamma < 1.0:
            raise LMError("gamma must lie in [0, 1)")
        if smoothing <= 0:
            raise LMError("smoothing must be positive")
        self.ngram = ngram
        self.gamma = gamma
        self.smoothing = smoothing
        self._profiles = {}

    @property
    def words(self):
        return self.ngram.words

    def profile(self, record) -> ContextProfile:
        key = id(record)
        hit = self._profiles.get(key)
        if hit is None or hit[0] is not record:
            hit = (record, ContextProfile.from_record(record, self.ngram.index))
            self._profiles[key] = hit
        return hit[1]

    def context_distribution(self, profile: ContextProfile) -> np.ndarray:
        V = len(self.ngram)
        p = np.full(V, self.smoothing)
        for w, share in profile.weights.items():
            p[self.ngram.index[w]] += share * profile.n_tokens
        return p / (profile.n_tokens + self.smoothing * V)

    def distribution(self, prev_tokens=(), record=None) -> np.ndarray:
        p = self.ngram.distribution(prev_tokens)
        prof = self.profile(record)
        if self.gamma == 0.0 or prof.empty:
            return p
        return (1.0 - self.gamma) * p + self.gamma * self.context_distribution(prof)

    def logprob(self, word, prev_tokens=(), record=None) -> float:
        if word not in self.ngram.index:
            raise LMError(f"{word!r} is not in the language model vocabulary")
        return float(np.log10(self.distribution(prev_tokens, record)[self.ngram.index[word]]))

    def vocab_log10(self, vocab_words, prev_tokens=(), record=None) -> np.ndarray:
        """log10 probabilities aligned to ``vocab_words`` (unknown words read the ``<unk>`` entry)."""
        p = self.distribution(prev_tokens, record)
        ids = self._ids(vocab_words)
        return np.log10(p[ids])

    def _ids(self, vocab_words):
        key = ("ids", id(vocab_words))
        hit = self._profiles.get(key)
        if hit is None or hit[0] is not vocab_words:
            hit = (vocab_words, np.array([self.ngram.token_id(w) for w in vocab_words]))
            self._profiles[key] = hit
        return hit[1]


def perplexity(scorer, records) -> float:
    """10 ** (-mean log10 P) over every stimulus word, each conditioned on the words before it.

    ``scorer`` needs ``logprob(word, prev_tokens, record)``.
    """
    total, n = 0.0, 0
    for rec in records:
        words = rec.words
        for i, w in enumerate(words):
            total += scorer.logprob(w, words[:i], rec)
            n += 1
    if n == 0:
        raise LMError("empty test set")
    return float(10.0 ** (-total / n))
