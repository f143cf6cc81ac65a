import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import algorithm1, levenshtein_recursive
from swipefusion.decoder import ScoredCandidate
from swipefusion.fusion import FusionConfig, FusionError, blend, naive_correction, nearest_words, score_fusion
from swipefusion.lm import train_ngram
from swipefusion.spell import spatial_edit_logprob
from swipefusion.vocab import Vocabulary

WORDS = ["cat", "car", "cart", "bat", "care"]


class FixedDecoder:
    def __init__(self, out):
        self.out = [ScoredCandidate(w, s) for w, s in out]

    def decode(self, traj, vocab, beam):
        return self.out[:beam]


class FixedLM:
    def __init__(self, table):
        self.table = np.asarray(table, dtype=float)

    def vocab_log10(self, words, prev=(), record=None):
        return self.table


def hand_instance():
    raw = [("cat", -0.1), ("cst", -0.9)]
    typo = {"cat": [0.0, -0.77, -1.22, -2.0, -1.99], "cst": [-0.77, -2.0, -2.5, -2.77, -np.inf]}
    lm = [-1.0, -0.5, -2.0, -1.5, -3.0]
    return raw, typo, lm


def run_blend(raw, typo, lm, cfg, words=WORDS):
    return blend([ScoredCandidate(*r) for r in raw], [np.array(typo[w]) for w, _ in raw], np.array(lm), words, cfg)


@pytest.mark.parametrize("c_sc,c_lm", [(0.3, 0.3), (0.5, 0.0), (0.2, 0.7), (1.0, 0.0), (0.1, 0.1)])
def test_algorithm1_micro_oracle(c_sc, c_lm):
    raw, typo, lm = hand_instance()
    cfg = FusionConfig(c_sc, c_lm, num_suggestions=3, beam=2)
    got = [(c.word, c.log_score) for c in run_blend(raw, typo, lm, cfg)]
    want = algorithm1(raw, typo, lm, WORDS, c_sc, c_lm, 3)
    assert [w for w, _ in got] == [w for w, _ in want]
    assert np.allclose([s for _, s in got], [s for _, s in want], rtol=0, atol=1e-12)


def test_spreadsheet_values():
    # c_sc = c_lm = 0.3, raw weight 0.4; "car": max(0.4*-0.1 + 0.3*-0.5 + 0.3*-0.77, 0.4*-0.9 + 0.3*-0.5 + 0.3*-2.0)
    raw, typo, lm = hand_instance()
    out = dict(run_blend(raw, typo, lm, FusionConfig(0.3, 0.3, num_suggestions=5, beam=2)))
    assert out["car"] == pytest.approx(-0.04 - 0.15 - 0.231, abs=1e-12)
    assert out["cat"] == pytest.approx(-0.04 - 0.3, abs=1e-12)
    assert out["care"] == pytest.approx(-0.04 - 0.9 - 0.597, abs=1e-12)


def test_score_fusion_end_to_end_matches_oracle(costs):
    vocab = Vocabulary([(w, 10.0 - i) for i, w in enumerate(WORDS)])
    raw = [("cat", -0.2), ("czt", -0.6), ("bst", -1.1)]
    lm = [-1.0, -0.5, -2.0, -1.5, -3.0]
    cfg = FusionConfig(0.4, 0.2, num_suggestions=4, beam=2, length_cap=None)
    got = score_fusion(None, FixedDecoder(raw), costs, FixedLM(lm), None, cfg, vocab)
    typo = {r: [spatial_edit_logprob(w, r, costs)[0] for w in WORDS] for r, _ in raw}
    want = algorithm1(raw[:2], typo, lm, WORDS, 0.4, 0.2, 4)
    assert [c.word for c in got] == [w for w, _ in want]
    assert np.allclose([c.log_score for c in got], [s for _, s in want], atol=1e-12)


def test_zero_coefficients_keep_raw_ranking(costs):
    vocab = Vocabulary.from_words(WORDS)
    raw = [("cst", -0.1), ("car", -0.3), ("bat", -0.5), ("xyz", -0.6), ("cat", -0.9)]
    cfg = FusionConfig(0.0, 0.0, num_suggestions=5, beam=5)
    got = score_fusion(None, FixedDecoder(raw), costs, FixedLM(np.zeros(5)), None, cfg, vocab)
    assert got == [ScoredCandidate(w, s) for w, s in raw if w in vocab]


def test_beam_one_single_vocab_word(costs):
    vocab = Vocabulary.from_words(WORDS)
    cfg = FusionConfig(0.0, 0.0, num_suggestions=5, beam=1)
    got = score_fusion(None, FixedDecoder([("bat", -0.25), ("cat", -0.5)]), costs, FixedLM(np.zeros(5)), None, cfg,
                       vocab)
    assert got == [ScoredCandidate("bat", -0.25)]


def instances():
    score = st.floats(-5, 0, allow_nan=False)
    typo_row = st.lists(st.one_of(score, st.just(-math.inf)), min_size=5, max_size=5)
    raw = st.lists(st.tuples(st.sampled_from(["r1", "r2", "r3", "r4"]), score), min_size=1, max_size=4,
                   unique_by=lambda r: r[0])
    coeffs = st.tuples(st.floats(0.01, 1.0), st.floats(0, 1.0)).filter(lambda c: c[0] + c[1] <= 1.0)
    return st.tuples(raw, st.fixed_dictionaries({k: typo_row for k in ["r1", "r2", "r3", "r4"]}),
                     st.lists(score, min_size=5, max_size=5), coeffs, st.integers(1, 6))


@settings(max_examples=300, deadline=None)
@given(inst=instances())
def test_blend_matches_algorithm1(inst):
    raw, typo, lm, (c_sc, c_lm), k = inst
    cfg = FusionConfig(c_sc, c_lm, num_suggestions=k, beam=8)
    got = run_blend(raw, typo, lm, cfg)
    want = algorithm1(raw, typo, lm, WORDS, c_sc, c_lm, k)
    assert len(got) == len({c.word for c in got}) <= k
    assert [c.word for c in got] == [w for w, _ in want]
    assert np.allclose([c.log_score for c in got], [s for _, s in want], rtol=0, atol=1e-12)
    # max-merge: each score is the best over the raw decodings that proposed the word
    for c in got:
        i = WORDS.index(c.word)
        best = max((1 - c_sc - c_lm) * s + c_lm * lm[i] + c_sc * typo[w][i] for w, s in raw if typo[w][i] > -math.inf)
        assert c.log_score == pytest.approx(best, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(inst=instances(), shift=st.floats(-10, 10))
def test_truncation_prefix_and_lm_shift(inst, shift):
    raw, typo, lm, (c_sc, c_lm), k = inst
    full = run_blend(raw, typo, lm, FusionConfig(c_sc, c_lm, num_suggestions=5, beam=8))
    part = run_blend(raw, typo, lm, FusionConfig(c_sc, c_lm, num_suggestions=k, beam=8))
    assert part == full[:k]
    moved = run_blend(raw, typo, np.array(lm) + shift, FusionConfig(c_sc, c_lm, num_suggestions=5, beam=8))
    assert [c.word for c in moved] == [c.word for c in full]
    assert np.allclose([c.log_score for c in moved], [c.log_score + c_lm * shift for c in full], atol=1e-9)


@settings(max_examples=150, deadline=None)
@given(raw=st.lists(st.tuples(st.sampled_from(WORDS + ["zz", "qq"]), st.floats(-5, 0)), min_size=1, max_size=5,
                    unique_by=lambda r: r[0]))
def test_zero_coefficient_argmax_is_decoder_argmax(raw):
    raw = sorted(raw, key=lambda r: -r[1])
    out = blend([ScoredCandidate(*r) for r in raw], [None] * len(raw), np.zeros(5), WORDS, FusionConfig(0.0, 0.0))
    in_vocab = [(w, x) for w, x in raw if w in WORDS]
    if not in_vocab:
        assert out == []
        return
    top = max(x for _, x in in_vocab)
    # equal raw scores are all valid argmaxes
    assert out[0].log_score == top and out[0].word in {w for w, x in in_vocab if x == top}


def test_config_validation():
    with pytest.raises(FusionError):
        FusionConfig(0.7, 0.5)
    with pytest.raises(FusionError):
        FusionConfig(-0.1, 0.0)
    with pytest.raises(FusionError):
        FusionConfig(num_suggestions=0)
    cfg = FusionConfig().with_overrides({"lm_coeff": 0.1})
    assert cfg.lm_coeff == 0.1 and cfg.raw_coeff == pytest.approx(0.6)
    with pytest.raises(FusionError, match="unknown"):
        FusionConfig().with_overrides({"gamma": 1})


def test_nearest_words_bruteforce(vocab):
    for raw in ["helo", "wrold", "x", "qqqqqqqqqqqqqqq", "teh"]:
        got = nearest_words(raw, vocab, 5)
        d = {w: levenshtein_recursive(raw, w) for w in vocab.words}
        want = sorted(vocab.words, key=lambda w: (d[w], -vocab.freq(w), w))[:5]
        assert [w for w, _ in got] == want
        assert [k for _, k in got] == [d[w] for w in want]


def test_nearest_words_small_vocab():
    v = Vocabulary.from_words(["ab", "cd"])
    assert [w for w, _ in nearest_words("zzzzzz", v, 5)] == ["ab", "cd"]


def test_naive_examples():
    vocab = Vocabulary([("cat", 5.0), ("cut", 4.0), ("car", 3.0), ("dog", 2.0)])
    lm = train_ngram([["the", "cat"], ["the", "cut"], ["the", "cut"]], 2, 0.75, vocab=vocab.words)
    cfg = FusionConfig(num_suggestions=5, beam=1)
    out = naive_correction(None, FixedDecoder([("cat", 0.0)]), lm, ["the"], cfg, vocab, k=2)
    words = [c.word for c in out]
    assert "cat" in words
    # "cat" and "cut" are both one edit from "cot": the likelier word after "the" leads
    out = naive_correction(None, FixedDecoder([("cot", 0.0)]), lm, ["the"], cfg, vocab, k=2)
    assert [c.word for c in out][:2] == ["cut", "cat"]
    assert out[0].log_score == pytest.approx(lm.logprob("cut", ["the"]))
