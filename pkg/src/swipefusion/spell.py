"""Keyboard-aware probabilistic edit distance (base-10 log-probabilities).

Convention: *intent* is the word the user meant, *input* is what was
decoded.  An insertion is an intent character missing from the input (an
omission, free when it happens after the last input character); a deletion
is a stray input character; substitutions cost more between keys that are
not adjacent.

The free end-of-input insertion makes any prefix of a word a perfect match
for it (``"hell"`` scores 0 against ``"hello"``), so this is not a metric.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .decoder import ScoredCandidate
from .layout import ALPHABET, DEFAULT_ADJACENCY_RADIUS, KeyboardLayout, adjacency
from .vocab import Vocabulary, VocabError, encode

LOG_P_OMIT = -1.22
LOG_P_STRAY = -1.22
LOG_P_SUB_ADJACENT = -0.77
LOG_P_SUB_FAR = -2.0


@dataclass(frozen=True)
class EditCostModel:
    adjacency: frozenset
    log_p_omit: float = LOG_P_OMIT
    log_p_stray: float = LOG_P_STRAY
    log_p_sub_adjacent: float = LOG_P_SUB_ADJACENT
    log_p_sub_far: float = LOG_P_SUB_FAR
    free_end_insertion: bool = True
    _sub: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        costs = (self.log_p_omit, self.log_p_stray, self.log_p_sub_adjacent, self.log_p_sub_far)
        if any(c > 0 for c in costs):
            raise ValueError("log-probability costs must be <= 0")
        if not self.log_p_sub_adjacent > self.log_p_sub_far:
            raise ValueError("adjacent substitutions must be more probable than far ones")
        A = len(ALPHABET)
        sub = np.full((A, A), self.log_p_sub_far)
        for pair in self.adjacency:
            a, b = tuple(pair)
            i, j = ALPHABET.index(a), ALPHABET.index(b)
            sub[i, j] = sub[j, i] = self.log_p_sub_adjacent
        np.fill_diagonal(sub, 0.0)
        sub.flags.writeable = False
        object.__setattr__(self, "_sub", sub)

    @classmethod
    def for_layout(cls, layout: KeyboardLayout, radius: float = DEFAULT_ADJACENCY_RADIUS, **kw):
        return cls(adjacency(layout, radius), **kw)

    def with_overrides(self, section: dict) -> "EditCostModel":
        """Apply a config ``edit_costs`` section: keys omit, stray, sub_adjacent, sub_far."""
        names = {"omit": "log_p_omit", "stray": "log_p_stray",
                 "sub_adjacent": "log_p_sub_adjacent", "sub_far": "log_p_sub_far"}
        unknown = set(section) - set(names) - {"free_end_insertion"}
        if unknown:
            raise ValueError(f"unknown edit_costs keys: {sorted(unknown)}")
        kw = {names[k]: float(v) for k, v in section.items() if k in names}
        if "free_end_insertion" in section:
            kw["free_end_insertion"] = bool(section["free_end_insertion"])
        return replace(self, **kw)

    @property
    def sub_matrix(self) -> np.ndarray:
        return self._sub

    def sub(self, a: str, b: str) -> float:
        return float(self._sub[ALPHABET.index(a), ALPHABET.index(b)])

    def insertion(self, j: int, m: int) -> float:
        """Cost of an omitted intent character placed after ``j`` of ``m`` input characters."""
        return 0.0 if (self.free_end_insertion and j == m) else self.log_p_omit


@dataclass
class Alignment:
    n_ins: int = 0
    n_free_ins: int = 0
    n_del: int = 0
    substitutions: list = field(default_factory=list)
    log_p_ed: float = 0.0


def spatial_edit_logprob(intent: str, input: str, costs: EditCostModel) -> tuple[float, Alignment]:
    """Maximum log10-probability alignment of ``input`` (typed) to ``intent`` (meant)."""
    a, b = encode(intent), encode(input)
    n, m = len(a), len(b)
    sub = costs.sub_matrix
    D = np.full((n + 1, m + 1), -np.inf)
    D[0, 0] = 0.0
    for j in range(1, m + 1):
        D[0, j] = D[0, j - 1] + costs.log_p_stray
    for i in range(1, n + 1):
        D[i, 0] = D[i - 1, 0] + costs.insertion(0, m)
        for j in range(1, m + 1):
            D[i, j] = max(D[i - 1, j] + costs.insertion(j, m),
                          D[i, j - 1] + costs.log_p_stray,
                          D[i - 1, j - 1] + sub[a[i - 1], b[j - 1]])

    al = Alignment(log_p_ed=float(D[n, m]))
    i, j = n, m
    while i or j:
        if i and j and D[i, j] == D[i - 1, j - 1] + sub[a[i - 1], b[j - 1]]:
            if a[i - 1] != b[j - 1]:
                al.substitutions.append((intent[i - 1], input[j - 1]))
            i, j = i - 1, j - 1
        elif i and D[i, j] == D[i - 1, j] + costs.insertion(j, m):
            if costs.insertion(j, m) == 0.0:
                al.n_free_ins += 1
            else:
                al.n_ins += 1
            i -= 1
        else:
            al.n_del += 1
            j -= 1
    al.substitutions.reverse()
    return al.log_p_ed, al


def correction_logprobs(raw: str, vocab: Vocabulary, costs: EditCostModel, cap: int | None = None) -> np.ndarray:
    """log P_ED of ``raw`` against every vocabulary word; words pruned by ``cap`` get -inf.

    ``cap`` drops words whose length differs from ``raw`` by more than ``cap``
    characters.  Longer words always survive while the trailing omission is
    free, since their extra suffix may cost nothing.
    """
    codes, lens = vocab.codes()
    lo, hi = 0, None
    if cap is not None:
        lo = len(raw) - cap
        hi = None if costs.free_end_insertion else len(raw) + cap
    return kernels.spatial_logprob_batch(codes, lens, encode(raw), costs.sub_matrix, costs.log_p_omit,
                                         costs.log_p_stray, costs.free_end_insertion, lo, hi)


def correction_scores(raw: str, vocab: Vocabulary, costs: EditCostModel, cap: int | None = None,
                      limit: int | None = None) -> list[ScoredCandidate]:
    """Vocabulary words ranked by log P_ED against ``raw``; ties by frequency then spelling."""
    if not raw:
        raise VocabError("cannot correct an empty string")
    lp = correction_logprobs(raw, vocab, costs, cap)
    idx = np.flatnonzero(np.isfinite(lp))
    order = sorted(idx, key=lambda i: (-lp[i], -vocab.freqs[i], vocab.words[i]))
    if limit is not None:
        order = order[:limit]
    return [ScoredCandidate(vocab.words[i], float(lp[i])) for i in order]
