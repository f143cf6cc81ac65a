"""Time the numba kernels against their numpy twins.

Kernel pairs are called directly in this process.  The end-to-end pass
(smooth, key-path decode, correction against the full vocabulary) runs in
two child processes with ``SWIPEFUSION_NUMBA`` set to 1 and 0.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--words 50]
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _best_of(fn, repeat):
    fn()  # warm up (and compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _keypath_inputs(word):
    """The (seg, start, codes, final) arrays the decoder builds for a noiseless gesture of ``word``."""
    from swipefusion.decoder import KeyPathDecoder
    from swipefusion.trajectory import arc_length_resample
    from swipefusion.kernels import segment_costs
    from swipefusion.layout import default_layout
    from swipefusion.simulate import SimConfig, synthesize

    layout = default_layout()
    dec = KeyPathDecoder(layout)
    xy = synthesize(word, layout, SimConfig()).xy
    p = arc_length_resample(xy, dec.sample_count(xy))
    dist = np.sqrt(((p[:, None, :] - dec._centers[None]) ** 2).sum(-1))
    allowed = dist <= dec.vertex_radius
    np.put_along_axis(allowed, np.argsort(dist, axis=1, kind="stable")[:, :2], True, axis=1)
    st_i, st_k = np.nonzero(allowed)
    scale = 1.0 / (2 * dec.channel_sigma ** 2)
    seg = segment_costs(p, dec._centers, st_i, st_k) * scale
    start = np.where(st_i == 0, ((p[0] - dec._centers[st_k]) ** 2).sum(axis=1) * scale, np.inf)
    return seg, start, dec._codes[st_k].astype(np.int64), st_i == len(p) - 1


def kernel_table(repeat):
    from swipefusion._accel import HAS_NUMBA
    from swipefusion.kernels import editdist as ed
    from swipefusion.kernels import keypath as kp
    from swipefusion.layout import default_layout
    from swipefusion.spell import EditCostModel
    from swipefusion.vocab import default_vocab, encode

    if not HAS_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    vocab, costs = default_vocab(), EditCostModel.for_layout(default_layout())
    codes, lens = vocab.codes()
    codes = np.ascontiguousarray(codes, dtype=np.int8)
    lens = np.asarray(lens, dtype=np.int64)
    inp = encode("helo")
    big = np.iinfo(np.int64).max
    args = (codes, lens, inp, costs.sub_matrix, costs.log_p_omit, costs.log_p_stray, 0.0, 0, big)

    seg, start, kcodes, final = _keypath_inputs("international")
    B = 8

    rows = [("spatial edit DP, 10k words", ed._spatial_numba, ed._spatial_numpy, args),
            ("unit Levenshtein, 10k words", ed._lev_numba, ed._lev_numpy, (codes, lens, inp, 0, big)),
            (f"key-path N-best, {len(kcodes)} states", kp._nbest_numba, kp._nbest_numpy,
             (seg, start, kcodes, final, 2.0, B))]
    out = []
    for name, fast, slow, a in rows:
        tf = _best_of(lambda: fast(*a), repeat)
        ts = _best_of(lambda: slow(*a), repeat)
        out.append((name, tf, ts))
    return out


def end_to_end(n_words):
    from swipefusion.config import RunConfig
    from swipefusion.corpus import default_phrases
    from swipefusion.filtering import adaptive_smooth
    from swipefusion.harness import Engine
    from swipefusion.simulate import synthesize
    from swipefusion.spell import correction_logprobs

    cfg = RunConfig()
    eng = Engine(cfg)
    words = [w for r in default_phrases("test") for w in r.words][:n_words]
    rng = np.random.default_rng(3)
    trajs = [synthesize(w, eng.layout, cfg.sim, rng) for w in words]

    def run(batch):
        for tr in batch:
            raw = eng.decoder.decode(adaptive_smooth(tr, cfg.filter), eng.vocab, cfg.fusion.beam)
            for c in raw:
                correction_logprobs(c.word, eng.vocab, eng.costs, cfg.fusion.length_cap)

    run(trajs[:2])
    t0 = time.perf_counter()
    run(trajs)
    return (time.perf_counter() - t0) / len(trajs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--words", type=int, default=50)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(end_to_end(args.words)))
        return

    print(f"{'kernel':38s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, tf, ts in kernel_table(args.repeat):
        print(f"{name:38s} {tf * 1e3:8.2f}ms {ts * 1e3:8.2f}ms {ts / tf:7.1f}x")

    per_word = {}
    for flag in ("1", "0"):
        env = dict(os.environ, SWIPEFUSION_NUMBA=flag)
        res = subprocess.run([sys.executable, __file__, "--child", "--words", str(args.words)],
                             env=env, capture_output=True, text=True, check=True)
        per_word[flag] = json.loads(res.stdout.strip().splitlines()[-1])
    print(f"\nend to end per word ({args.words} words): numba {per_word['1'] * 1e3:.1f} ms, "
          f"numpy {per_word['0'] * 1e3:.1f} ms ({per_word['0'] / per_word['1']:.1f}x)")


if __name__ == "__main__":
    main()
