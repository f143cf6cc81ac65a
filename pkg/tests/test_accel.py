import json
import os
import subprocess
import sys

import numpy as np
import pytest

from swipefusion import kernels
from swipefusion._accel import HAS_NUMBA
from swipefusion.decoder import KeyPathDecoder
from swipefusion.kernels.editdist import _lev_numba, _lev_numpy, _spatial_numba, _spatial_numpy
from swipefusion.kernels.keypath import _nbest_numba, _nbest_numpy
from swipefusion.simulate import profile, synthesize
from swipefusion.trajectory import arc_length_resample
from swipefusion.vocab import encode

BIG = np.iinfo(np.int64).max


@pytest.mark.parametrize("raw", ["a", "thw", "helo", "wprld", "qqqqqqqq"])
@pytest.mark.parametrize("log_end", [0.0, -1.22])
def test_spatial_kernels_agree(vocab, costs, raw, log_end):
    codes, lens = vocab.codes()
    args = (codes, lens.astype(np.int64), encode(raw), costs.sub_matrix, -1.22, -1.22, log_end)
    for lo, hi in ((0, BIG), (len(raw) - 2, len(raw) + 2)):
        a = _spatial_numba(*args, lo, hi)
        b = _spatial_numpy(*args, lo, hi)
        assert np.array_equal(a, b)


@pytest.mark.parametrize("raw", ["a", "thw", "helo", "wprld", "qqqqqqqq"])
def test_levenshtein_kernels_agree(vocab, raw):
    codes, lens = vocab.codes()
    for lo, hi in ((0, BIG), (len(raw) - 1, len(raw) + 1)):
        a = _lev_numba(codes, lens.astype(np.int64), encode(raw), lo, hi)
        b = _lev_numpy(codes, lens.astype(np.int64), encode(raw), lo, hi)
        assert np.array_equal(a, b)


def test_nbest_kernels_agree_on_real_gestures(layout):
    dec = KeyPathDecoder(layout)
    rng = np.random.default_rng(21)
    for w in ["about", "people", "quickly", "zone", "information"]:
        tr = synthesize(w, layout, profile("medium"), rng)
        p = arc_length_resample(tr.xy, dec.sample_count(tr.xy))
        dist = np.sqrt(((p[:, None, :] - dec._centers[None]) ** 2).sum(-1))
        allowed = dist <= dec.vertex_radius
        st_i, st_k = np.nonzero(allowed)
        seg = kernels.segment_costs(p, dec._centers, st_i, st_k)
        start = np.where(st_i == 0, ((p[0] - dec._centers[st_k]) ** 2).sum(axis=1), np.inf)
        args = (seg, start, dec._codes[st_k].astype(np.int64), st_i == len(p) - 1, 2.0, 8)
        ca, ha = _nbest_numba(*args)
        cb, hb = _nbest_numpy(*args)
        assert np.array_equal(ha, hb)
        assert np.allclose(ca, cb, rtol=0, atol=1e-9)


SCRIPT = """
import json
from swipefusion import kernels
from swipefusion.layout import default_layout
from swipefusion.simulate import profile, synthesize
from swipefusion.spell import EditCostModel, correction_scores
from swipefusion.decoder import KeyPathDecoder
from swipefusion.vocab import default_vocab
import numpy as np
L, V = default_layout(), default_vocab()
c = EditCostModel.for_layout(L)
tr = synthesize("people", L, profile("medium"), np.random.default_rng(0))
print(json.dumps({"numba": kernels.USE_NUMBA,
                  "spell": [list(x) for x in correction_scores("pepole", V, c, limit=5)],
                  "decode": [list(x) for x in KeyPathDecoder(L).decode(tr)]}))
"""


def _run(flag):
    env = dict(os.environ, SWIPEFUSION_NUMBA=flag)
    r = subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, env=env, check=True)
    return json.loads(r.stdout)


def test_env_flag_selects_fallback_with_same_results():
    fast, slow = _run("1"), _run("0")
    assert fast["numba"] == HAS_NUMBA and slow["numba"] is False
    assert fast["spell"] == slow["spell"]
    assert [w for w, _ in fast["decode"]] == [w for w, _ in slow["decode"]]
    assert np.allclose([s for _, s in fast["decode"]], [s for _, s in slow["decode"]], atol=1e-9)
