"""Text-entry measures: words per minute and character error rates."""
from __future__ import annotations

import statistics
from dataclasses import dataclass

CHARS_PER_WORD = 5


class MetricsError(ValueError):
    pass


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class TranscriptionEvent:
    stimulus: str
    committed_initial: str
    committed_final: str
    elapsed: float
    corrections: int = 0

    def __post_init__(self):
        if not self.elapsed > 0:
            raise MetricsError(f"elapsed must be positive, got {self.elapsed}")
        if self.corrections < 0:
            raise MetricsError("corrections must be non-negative")


def wpm(event: TranscriptionEvent) -> float:
    return (len(event.committed_final) / CHARS_PER_WORD) / (event.elapsed / 60.0)


def cer(event: TranscriptionEvent) -> tuple[float, float]:
    """(uncorrected, corrected) character error rate; spaces count as characters."""
    n = len(event.stimulus)
    if n == 0:
        raise MetricsError("stimulus must be non-empty")
    return (levenshtein(event.stimulus, event.committed_initial) / n,
            levenshtein(event.stimulus, event.committed_final) / n)


def mean_sd(values) -> tuple[float, float]:
    values = list(values)
    if not values:
        return float("nan"), float("nan")
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return statistics.fmean(values), sd
