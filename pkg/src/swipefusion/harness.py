"""End-to-end benchmark: synthesize word gestures for each phrase, decode,
run the configured suggestion pipelines, simulate commits and corrections,
and report text-entry measures.

Times are simulated: a word costs its gesture duration plus a fixed
delimiting overhead, and a correction adds a deletion overhead plus a second
gesture.  The resulting WPM describes pipeline throughput, not people.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .config import STAGES, RunConfig
from .corpus import default_corpus, default_phrases, read_corpus
from .decoder import KeyPathDecoder, ScoredCandidate
from .filtering import adaptive_smooth
from .fusion import FusionConfig, FusionError, blend, naive_correction
from .layout import default_layout, load_layout
from .lm import ContextualScorer, LMError, PhraseRecord, read_phrases, train_ngram
from .metrics import TranscriptionEvent, cer, mean_sd, wpm
from .simulate import synthesize
from .spell import EditCostModel, correction_logprobs
from .vocab import default_vocab, load_vocab

WORD_OVERHEAD = 0.4
CORRECTION_OVERHEAD = 1.0
REPORT_COLUMNS = ("condition", "block", "phrase_id", "wpm", "ucer", "ccer", "n_corrections")


class HarnessError(ValueError):
    pass


@dataclass
class ReportRow:
    condition: str
    block: int
    phrase_id: int
    wpm: float
    ucer: float
    ccer: float
    n_corrections: int
    event: TranscriptionEvent | None = field(default=None, compare=False)

    def cells(self):
        return [self.condition, self.block, self.phrase_id, f"{self.wpm:.6f}", f"{self.ucer:.6f}",
                f"{self.ccer:.6f}", self.n_corrections]


class _Evidence:
    """One gesture attempt: trajectory, decoder output and lazily computed correction rows."""

    def __init__(self, engine, traj):
        self.engine = engine
        self.traj = traj
        smoothed = adaptive_smooth(traj, engine.cfg.filter)
        self.raw = engine.decoder.decode(smoothed, engine.vocab, engine.beam)
        self._typo = None

    @property
    def typo(self):
        if self._typo is None:
            e = self.engine
            self._typo = [correction_logprobs(c.word, e.vocab, e.costs, e.cfg.fusion.length_cap) for c in self.raw]
        return self._typo


class Engine:
    """Loaded models plus the per-condition top-1 policies."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.layout = load_layout(cfg.layout) if cfg.layout else default_layout()
        self.vocab = load_vocab(cfg.vocab) if cfg.vocab else default_vocab()
        self.costs = EditCostModel.for_layout(self.layout).with_overrides(cfg.edit_costs)
        d = cfg.decoder
        self.decoder = KeyPathDecoder(self.layout, d.step, d.n_min, d.n_max, d.channel_sigma,
                                      d.letter_penalty, d.vertex_radius)
        corpus = read_corpus(cfg.corpus) if cfg.corpus else default_corpus()
        self.ngram = train_ngram(corpus, cfg.lm.order, cfg.lm.discount, vocab=self.vocab.words)
        self.scorer = ContextualScorer(self.ngram, cfg.lm.gamma, cfg.lm.smoothing)
        self.beam = cfg.fusion.beam
        self._lm_cache = {}

    def trajectory(self, word, phrase_id, word_idx, attempt):
        rng = np.random.default_rng([self.cfg.seed, phrase_id, word_idx, attempt])
        return synthesize(word, self.layout, self.cfg.sim, rng)

    def evidence(self, word, phrase_id, word_idx, attempt) -> _Evidence:
        return _Evidence(self, self.trajectory(word, phrase_id, word_idx, attempt))

    def lm_scores(self, record, prev):
        key = (id(record), tuple(prev))
        hit = self._lm_cache.get(key)
        if hit is None or hit[0] is not record:
            hit = (record, self.scorer.vocab_log10(self.vocab.words, prev, record))
            self._lm_cache[key] = hit
        return hit[1]

    def clear_cache(self):
        self._lm_cache.clear()

    def policy(self, condition: str, fusion: FusionConfig | None = None):
        """Return ``pick(evidence, record, prev) -> word`` for a condition or ablation stage."""
        fusion = fusion or self.cfg.fusion
        if condition == "GDM":
            return lambda ev, rec, prev: ev.raw[0].word
        if condition == "GDM+SSCM":
            fusion = replace(fusion, lm_coeff=0.0)
        if condition in ("fusion", "GDM+SSCM", "GDM+SSCM+CLM"):
            return lambda ev, rec, prev: self._fused(ev, rec, prev, fusion)
        if condition == "naive":
            def pick(ev, rec, prev):
                out = naive_correction(None, None, self.ngram, prev, fusion, self.vocab, raw=ev.raw)
                return out[0].word if out else ev.raw[0].word
            return pick
        raise HarnessError(f"unknown condition {condition!r}")

    def fused(self, ev, record, prev, fusion: FusionConfig) -> list[ScoredCandidate]:
        lm = self.lm_scores(record, prev) if fusion.lm_coeff else np.zeros(len(self.vocab))
        typo = ev.typo if fusion.swipe_correction_coeff else [None] * len(ev.raw)
        return blend(ev.raw[:fusion.beam], typo[:fusion.beam], lm, self.vocab.words, fusion, self.vocab.tiebreak)

    def _fused(self, ev, record, prev, fusion):
        out = self.fused(ev, record, prev, fusion)
        return out[0].word if out else ev.raw[0].word


def load_records(path, n=None, split="test") -> list[PhraseRecord]:
    records = read_phrases(path) if path else default_phrases(split)
    if n is not None:
        records = records[:n]
    if not records:
        raise HarnessError(f"no phrases in {path or split + ' set'}")
    return records


def transcribe(engine: Engine, records, policies: dict, retry: bool = True) -> dict:
    """Run every policy over the same per-word evidence; returns condition -> list of events."""
    events = {name: [] for name in policies}
    for pid, rec in enumerate(records):
        words = rec.words
        if not words:
            raise HarnessError(f"phrase {pid} has no typeable words")
        state = {name: ([], [], 0.0, 0) for name in policies}
        for i, w in enumerate(words):
            attempts = {}

            def get(a, w=w, i=i):
                if a not in attempts:
                    attempts[a] = engine.evidence(w, pid, i, a)
                return attempts[a]

            for name, pick in policies.items():
                initial, final, elapsed, ncorr = state[name]
                ev = get(0)
                s = pick(ev, rec, final)
                elapsed += ev.traj.duration + WORD_OVERHEAD
                initial.append(s)
                if retry and s != w:
                    ev = get(1)
                    s = pick(ev, rec, final)
                    elapsed += CORRECTION_OVERHEAD + ev.traj.duration + WORD_OVERHEAD
                    ncorr += 1
                final.append(s)
                state[name] = (initial, final, elapsed, ncorr)
        engine.clear_cache()
        for name, (initial, final, elapsed, ncorr) in state.items():
            events[name].append(TranscriptionEvent(" ".join(words), " ".join(initial), " ".join(final),
                                                   elapsed, ncorr))
    return events


def _rows(events: dict, block_size: int) -> list[ReportRow]:
    rows = []
    for name, evs in events.items():
        for pid, ev in enumerate(evs):
            u, c = cer(ev)
            rows.append(ReportRow(name, pid // block_size, pid, wpm(ev), u, c, ev.corrections, ev))
    return rows


def run_benchmark(cfg: RunConfig, conditions=None, engine: Engine | None = None) -> list[ReportRow]:
    conditions = tuple(conditions or cfg.conditions)
    if not conditions:
        raise HarnessError("no conditions selected")
    records = load_records(cfg.phrases, cfg.n_phrases)
    engine = engine or Engine(cfg)
    events = transcribe(engine, records, {c: engine.policy(c, cfg.fusion) for c in conditions})
    return _rows(events, cfg.block_size)


def run_ablation(cfg: RunConfig, engine: Engine | None = None) -> list[ReportRow]:
    stages = [s for s in STAGES if s in cfg.ablation]
    if not stages:
        raise HarnessError("no ablation stages selected")
    return run_benchmark(cfg, stages, engine)


def tune(cfg: RunConfig, grid: dict | None = None, engine: Engine | None = None):
    """Grid-search both coefficients for the lowest mean top-1 uncorrected CER on the dev split.

    Ties go to the smaller coefficient sum, then the smaller correction coefficient.
    Returns ``(best FusionConfig, [(c_sc, c_lm, cer), ...])``.
    """
    grid = grid or cfg.tune_grid
    try:
        sc = sorted({float(x) for x in grid["swipe_correction_coeff"]})
        lm = sorted({float(x) for x in grid["lm_coeff"]})
    except (KeyError, TypeError) as e:
        raise HarnessError(f"bad tune grid: {e}") from None
    points = [(a, b) for a, b in itertools.product(sc, lm) if a + b <= 1.0 + 1e-12 and 0 <= a and 0 <= b]
    if not points:
        raise HarnessError("tune grid has no feasible point (need coefficients in [0, 1] summing to at most 1)")
    records = load_records(cfg.dev_phrases, cfg.n_phrases, split="dev")
    engine = engine or Engine(cfg)
    configs = {p: replace(cfg.fusion, swipe_correction_coeff=p[0], lm_coeff=p[1]) for p in points}
    policies = {p: engine.policy("fusion", f) for p, f in configs.items()}
    events = transcribe(engine, records, policies, retry=False)
    results = [(p[0], p[1], float(np.mean([cer(e)[0] for e in events[p]]))) for p in points]
    best = min(results, key=lambda r: (r[2], r[0] + r[1], r[0], r[1]))
    return configs[(best[0], best[1])], results


def report_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        w.writerow(r.cells())
    return buf.getvalue()


def summarize(rows) -> dict:
    out = {}
    for name in dict.fromkeys(r.condition for r in rows):
        sel = [r for r in rows if r.condition == name]
        out[name] = {
            "n": len(sel),
            "wpm": mean_sd(r.wpm for r in sel),
            "ucer": mean_sd(r.ucer for r in sel),
            "ccer": mean_sd(r.ccer for r in sel),
            "corrections": sum(r.n_corrections for r in sel),
        }
    return out


def summary_text(rows) -> str:
    lines = ["condition        n   sim_wpm (sd)      ucer (sd)         ccer (sd)         corrections",
             "(sim_wpm is simulated pipeline throughput, not a human typing rate)"]
    for name, s in summarize(rows).items():
        lines.append(f"{name:<14} {s['n']:>3}   {s['wpm'][0]:6.2f} ({s['wpm'][1]:5.2f})   "
                     f"{s['ucer'][0]:.4f} ({s['ucer'][1]:.4f})   {s['ccer'][0]:.4f} ({s['ccer'][1]:.4f})   "
                     f"{s['corrections']}")
    return "\n".join(lines) + "\n"


def write_report(rows, out_dir, stem="report") -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, txt_path = out / f"{stem}.csv", out / f"{stem}_summary.txt"
    csv_path.write_text(report_csv(rows))
    txt_path.write_text(summary_text(rows))
    if all(r.event is not None for r in rows):
        write_event_log(rows, out / f"{stem}_events.jsonl")
    return csv_path, txt_path


def write_event_log(rows, path):
    """One JSON object per row: condition, phrase_id and the raw transcription event."""
    with open(path, "w") as fh:
        for r in rows:
            e = r.event
            fh.write(json.dumps({"condition": r.condition, "phrase_id": r.phrase_id, "stimulus": e.stimulus,
                                 "initial": e.committed_initial, "final": e.committed_final,
                                 "elapsed": e.elapsed, "corrections": e.corrections}) + "\n")


def replay_event_log(path, block_size: int = 10) -> list[ReportRow]:
    """Recompute report rows from a logged run without decoding anything."""
    events: dict[str, list] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                o = json.loads(line)
                ev = TranscriptionEvent(o["stimulus"], o["initial"], o["final"], float(o["elapsed"]),
                                        int(o["corrections"]))
                evs = events.setdefault(o["condition"], [])
                if o["phrase_id"] != len(evs):
                    raise HarnessError(f"phrase_id {o['phrase_id']} out of order")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise HarnessError(f"{path}:{lineno}: {e}") from None
            evs.append(ev)
    return _rows(events, block_size)


__all__ = ["Engine", "HarnessError", "ReportRow", "run_benchmark", "run_ablation", "tune", "report_csv",
           "summarize", "summary_text", "write_report", "write_event_log",
           "replay_event_log", "transcribe", "load_records", "FusionError", "LMError"]
