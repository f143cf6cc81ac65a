"""Word lists with frequencies (``word<TAB>count`` text files)."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .layout import ALPHABET


class VocabError(ValueError):
    pass


class Vocabulary:
    """Immutable ordered word list; ``index`` maps word -> position."""

    def __init__(self, entries):
        words, freqs = [], []
        seen = set()
        for w, f in entries:
            if w in seen:
                raise VocabError(f"duplicate word {w!r}")
            f = float(f)
            if not np.isfinite(f) or f < 0:
                raise VocabError(f"bad frequency for {w!r}: {f}")
            seen.add(w)
            words.append(w)
            freqs.append(f)
        if not words:
            raise VocabError("empty vocabulary")
        self.words = tuple(words)
        self.freqs = np.array(freqs)
        self.freqs.flags.writeable = False
        self.index = {w: i for i, w in enumerate(words)}
        self._codes = None
        order = sorted(range(len(words)), key=lambda i: (-freqs[i], words[i]))
        self.tiebreak = np.empty(len(words), dtype=np.int64)
        self.tiebreak[order] = np.arange(len(words))
        self.tiebreak.flags.writeable = False

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return w in self.index

    def __iter__(self):
        return iter(self.words)

    def freq(self, w) -> float:
        return float(self.freqs[self.index[w]])

    @property
    def log10_prior(self) -> np.ndarray:
        """log10 relative frequency; zero counts get half the smallest positive count."""
        f = self.freqs.copy()
        pos = f[f > 0]
        f[f <= 0] = pos.min() / 2 if len(pos) else 1.0
        return np.log10(f / f.sum())

    def codes(self):
        """(V, L) int8 character codes padded with -1, and (V,) lengths."""
        if self._codes is None:
            self._codes = encode_words(self.words)
        return self._codes

    def subset(self, words) -> "Vocabulary":
        return Vocabulary((w, self.freq(w)) for w in words)

    @classmethod
    def from_words(cls, words, freq=1.0):
        return cls((w, freq) for w in dict.fromkeys(words))


def encode(word: str) -> np.ndarray:
    try:
        return np.array([ALPHABET.index(c) for c in word], dtype=np.int8)
    except ValueError:
        bad = next(c for c in word if c not in ALPHABET)
        raise VocabError(f"character {bad!r} in {word!r} is outside the keyboard alphabet") from None


def encode_words(words):
    lens = np.array([len(w) for w in words], dtype=np.int64)
    codes = np.full((len(words), max(1, lens.max(initial=1))), -1, dtype=np.int8)
    for i, w in enumerate(words):
        codes[i, :len(w)] = encode(w)
    return codes, lens


def load_vocab(path) -> Vocabulary:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            try:
                word = parts[0].strip()
                freq = float(parts[1]) if len(parts) > 1 else 1.0
                if not word:
                    raise ValueError("empty word")
                encode(word)
            except (ValueError, VocabError) as e:
                raise VocabError(f"{path}:{lineno}: {e}") from None
            entries.append((word, freq))
    return Vocabulary(entries)


def default_vocab() -> Vocabulary:
    """The shipped 10,000-word English list."""
    with resources.as_file(resources.files("swipefusion") / "data" / "vocab.tsv") as p:
        return load_vocab(p)


def save_vocab(vocab: Vocabulary, path):
    with open(Path(path), "w", encoding="utf-8") as fh:
        for w, f in zip(vocab.words, vocab.freqs):
            fh.write(f"{w}\t{f:g}\n")
