"""Synthetic conversational phrase sets whose stimuli reuse words from their
history and tags, plus a topic-mixed training corpus for the n-gram model.

Each topic owns a handful of nouns, verbs and adjectives.  A phrase record
draws one topic and a few focus words from it, mentions the focus words in
two history utterances and a persona tag, and then fills a stimulus template
mostly with those same words.  The
training corpus uses the same templates but a fresh topic per sentence, so
the n-gram learns phrase structure while only the context reveals the topic.
"""
from __future__ import annotations

from importlib import resources

import numpy as np

from .lm import PhraseRecord, read_phrases, tokenize

TOPICS = {
    "cooking": (["dinner", "soup", "kitchen", "recipe", "pasta", "chicken"], ["cook", "bake", "taste", "eat"], ["hot", "fresh", "spicy"]),
    "music": (["song", "guitar", "concert", "band", "album", "piano"], ["play", "sing", "hear", "practice"], ["loud", "quiet", "new"]),
    "travel": (["trip", "flight", "hotel", "beach", "city", "train"], ["visit", "book", "pack", "fly"], ["long", "sunny", "cheap"]),
    "sports": (["game", "team", "match", "ball", "coach", "score"], ["win", "watch", "kick", "practice"], ["fast", "tough", "final"]),
    "reading": (["book", "story", "novel", "library", "author", "chapter"], ["read", "finish", "write", "borrow"], ["good", "short", "boring"]),
    "work": (["meeting", "project", "office", "email", "report", "boss"], ["send", "finish", "review", "schedule"], ["busy", "late", "urgent"]),
    "garden": (["flowers", "garden", "tree", "seeds", "soil", "roses"], ["plant", "water", "grow", "dig"], ["green", "wet", "pretty"]),
    "weather": (["rain", "snow", "storm", "wind", "sun", "cloud"], ["wait", "stay", "walk", "drive"], ["cold", "warm", "dark"]),
    "movies": (["movie", "film", "actor", "theater", "ticket", "show"], ["watch", "see", "rent", "stream"], ["funny", "scary", "great"]),
    "family": (["mom", "dad", "sister", "brother", "baby", "family"], ["call", "visit", "meet", "help"], ["happy", "tired", "proud"]),
    "health": (["doctor", "medicine", "hospital", "pain", "sleep", "exercise"], ["rest", "run", "stretch", "recover"], ["sick", "healthy", "better"]),
    "shopping": (["store", "shoes", "dress", "gift", "price", "sale"], ["buy", "shop", "return", "pay"], ["expensive", "cheap", "nice"]),
    "pets": (["dog", "cat", "puppy", "vet", "toy", "food"], ["feed", "walk", "pet", "adopt"], ["cute", "small", "hungry"]),
    "school": (["class", "teacher", "homework", "exam", "school", "lesson"], ["study", "learn", "pass", "teach"], ["hard", "easy", "smart"]),
    "tech": (["phone", "computer", "laptop", "screen", "battery", "app"], ["charge", "fix", "update", "download"], ["slow", "broken", "smart"]),
}

# N = noun, V = verb, A = adjective
TEMPLATES = [
    "i want to V the N", "the N was really A", "we should V the N tomorrow", "did you V the N",
    "my N is so A", "let us V the N", "i think the N is A", "can we V the N later",
    "the A N is here", "i love the N and the N", "have you seen my N", "please V the N now",
    "that N looks A", "do not forget the N", "she said the N was A", "i need a A N",
    "we can V after the N", "how was the N", "the N and the N are A", "when will you V the N",
]

HISTORY_TEMPLATES = [
    "i was thinking about the N", "the N was A yesterday", "we might V the N this week",
    "my N is A", "do you want to V the N", "the N and the N were A",
]

_SLOTS = {"N": 0, "V": 1, "A": 2}


def all_words() -> list[str]:
    words = {w for t in TEMPLATES + HISTORY_TEMPLATES for w in t.split() if w not in _SLOTS}
    for groups in TOPICS.values():
        for g in groups:
            words.update(g)
    return sorted(words)


def _fill(template: str, pools, rng: np.random.Generator) -> str:
    """Replace slots with draws from ``pools(slot)``."""
    out = []
    for tok in template.split():
        slot = _SLOTS.get(tok)
        if slot is None:
            out.append(tok)
        else:
            pool = pools(slot)
            out.append(pool[rng.integers(len(pool))])
    return " ".join(out)


def _pick(rng, seq):
    return seq[rng.integers(len(seq))]


def make_phrases(n: int, seed: int, p_reuse: float = 0.8, p_offtopic: float = 0.1,
                 n_history: int = 2) -> list[PhraseRecord]:
    """Records whose stimulus slots reuse a focus word with probability ``p_reuse``,
    fall back to the wider topic, or (``p_offtopic``) to a random topic."""
    rng = np.random.default_rng([seed, 1])
    names = list(TOPICS)
    out = []
    for _ in range(n):
        topic = TOPICS[_pick(rng, names)]
        focus = tuple(list(rng.choice(g, size=min(k, len(g)), replace=False))
                      for g, k in zip(topic, (2, 1, 1)))
        history = [_fill(_pick(rng, HISTORY_TEMPLATES), lambda s: focus[s], rng) for _ in range(n_history)]
        tags = [f"persona:likes {' and '.join(focus[0])}"]

        def pools(slot):
            u = rng.random()
            if u < p_reuse:
                return focus[slot]
            if u < 1.0 - p_offtopic:
                return topic[slot]
            return TOPICS[_pick(rng, names)][slot]

        out.append(PhraseRecord(_fill(_pick(rng, TEMPLATES), pools, rng), history, tags))
    return out


def make_training_corpus(n: int, seed: int) -> list[list[str]]:
    """Token sequences with a fresh random topic per sentence."""
    rng = np.random.default_rng([seed, 2])
    names = list(TOPICS)
    templates = TEMPLATES + HISTORY_TEMPLATES
    out = []
    for _ in range(n):
        topic = TOPICS[_pick(rng, names)]
        out.append(tokenize(_fill(_pick(rng, templates), lambda s: topic[s], rng)))
    return out


def read_corpus(path) -> list[list[str]]:
    with open(path) as fh:
        return [tokenize(line) for line in fh if line.strip()]


def write_corpus(sentences, path):
    with open(path, "w") as fh:
        for s in sentences:
            fh.write(" ".join(s) + "\n")


PACKAGED = {"dev": ("phrases_dev.jsonl", 100, 101), "test": ("phrases_test.jsonl", 500, 202)}
CORPUS_FILE, CORPUS_SIZE, CORPUS_SEED = "corpus.txt", 5000, 303


def packaged_path(name: str):
    return resources.files("swipefusion") / "data" / name


def default_phrases(split: str = "test") -> list[PhraseRecord]:
    with resources.as_file(packaged_path(PACKAGED[split][0])) as p:
        return read_phrases(p)


def default_corpus() -> list[list[str]]:
    with resources.as_file(packaged_path(CORPUS_FILE)) as p:
        return read_corpus(p)
