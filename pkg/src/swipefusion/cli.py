"""Command-line entry point: ``swipefusion <subcommand> [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config
from .filtering import adaptive_smooth
from .fusion import naive_correction, score_fusion
from .harness import Engine, run_ablation, run_benchmark, summary_text, tune, write_report
from .layout import default_layout, load_layout
from .lm import read_phrases
from .simulate import NOISE_PROFILES, synthesize
from .trajectory import read_trajectories, write_trajectories
from .warp import build_anchor_set, warp_trajectory


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.noise_profile:
        cfg = cfg.with_noise_profile(args.noise_profile)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _emit(lines, args, name):
    text = "".join(json.dumps(x) + "\n" for x in lines)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
        print(f"wrote {out / name}")
    else:
        sys.stdout.write(text)


def cmd_synth(args):
    cfg = _config(args)
    path = args.layout or cfg.layout
    layout = load_layout(path) if path else default_layout()
    if args.phrases:
        items = [(pid, i, w) for pid, rec in enumerate(read_phrases(args.phrases)) for i, w in enumerate(rec.words)]
    elif args.words:
        items = [(0, i, w) for i, w in enumerate(args.words)]
    else:
        raise ValueError("synth needs --words or --phrases")
    trajs = [synthesize(w, layout, cfg.sim, np.random.default_rng([cfg.seed, pid, i, 0]))
             for pid, i, w in items]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_trajectories(trajs, out / "trajectories.jsonl")
        print(f"wrote {len(trajs)} trajectories to {out / 'trajectories.jsonl'}")
    else:
        for t in trajs:
            sys.stdout.write(json.dumps(t.to_json()) + "\n")


def cmd_transform(args):
    anchors = build_anchor_set(load_layout(args.source), load_layout(args.dest))
    trajs = [warp_trajectory(t, anchors) for t in read_trajectories(args.input)]
    _emit([t.to_json() for t in trajs], args, "warped.jsonl")


def _decoded(engine, traj, smooth):
    return engine.decoder.decode(adaptive_smooth(traj, engine.cfg.filter) if smooth else traj,
                                 engine.vocab, engine.beam)


def cmd_decode(args):
    cfg = _config(args)
    cfg = replace(cfg, layout=Path(args.layout) if args.layout else cfg.layout,
                  vocab=Path(args.vocab) if args.vocab else cfg.vocab,
                  fusion=replace(cfg.fusion, beam=args.beam) if args.beam else cfg.fusion)
    engine = Engine(cfg)
    lines = []
    for t in read_trajectories(args.input):
        raw = _decoded(engine, t, not args.no_smooth)
        lines.append({"word": t.word, "candidates": [[c.word, round(c.log_score, 6)] for c in raw]})
    _emit(lines, args, "decodings.jsonl")


def cmd_suggest(args):
    cfg = _config(args)
    engine = Engine(cfg)
    records = read_phrases(args.context) if args.context else [None]
    if not records:
        raise ValueError(f"no context records in {args.context}")
    record = records[0]
    prev, lines = [], []
    for t in read_trajectories(args.traj):
        raw = _decoded(engine, t, not args.no_smooth)
        if args.mode == "fusion":
            out = score_fusion(t, engine.decoder, engine.costs, engine.scorer, record, cfg.fusion,
                               engine.vocab, prev, raw=raw)
        else:
            out = naive_correction(t, engine.decoder, engine.ngram, prev, cfg.fusion, engine.vocab, raw=raw)
        top = out[0].word if out else raw[0].word
        lines.append({"word": t.word, "suggestions": [[c.word, round(c.log_score, 6)] for c in out]})
        prev.append(top)
    _emit(lines, args, "suggestions.jsonl")


def _report(rows, args, stem):
    out = args.out or "results"
    csv_path, _ = write_report(rows, out, stem)
    sys.stdout.write(summary_text(rows))
    print(f"wrote {csv_path}")


def cmd_bench(args):
    cfg = _config(args)
    if args.phrases:
        cfg = replace(cfg, phrases=Path(args.phrases))
    _report(run_benchmark(cfg), args, "report")


def cmd_ablate(args):
    cfg = _config(args)
    if args.phrases:
        cfg = replace(cfg, phrases=Path(args.phrases))
    _report(run_ablation(cfg), args, "ablation")


def cmd_tune(args):
    cfg = _config(args)
    if args.phrases:
        cfg = replace(cfg, dev_phrases=Path(args.phrases))
    grid = None
    if args.grid:
        vals = [float(x) for x in args.grid.split(",")]
        grid = {"swipe_correction_coeff": vals, "lm_coeff": vals}
    best, results = tune(cfg, grid)
    out = Path(args.out or "results")
    out.mkdir(parents=True, exist_ok=True)
    lines = ["swipe_correction_coeff,lm_coeff,ucer"] + [f"{a:.6f},{b:.6f},{c:.6f}" for a, b, c in results]
    (out / "tune.csv").write_text("\n".join(lines) + "\n")
    fusion = {"swipe_correction_coeff": best.swipe_correction_coeff, "lm_coeff": best.lm_coeff,
              "num_suggestions": best.num_suggestions}
    (out / "best_fusion.json").write_text(json.dumps({"fusion": fusion}, indent=2) + "\n")
    print(json.dumps(fusion))
    print(f"wrote {out / 'tune.csv'} and {out / 'best_fusion.json'}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int, help="master seed (overrides the config)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--noise-profile", choices=[p for p in NOISE_PROFILES if p != "none"] + ["none"])

    p = argparse.ArgumentParser(prog="swipefusion", description="Word-gesture decoding with score fusion.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="synthesize word-gesture trajectories")
    s.add_argument("--words", nargs="+")
    s.add_argument("--phrases", help="phrase JSONL; every word of every phrase is synthesized")
    s.add_argument("--layout")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("transform-layout", parents=[common], help="warp trajectories between layouts")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--source", required=True, help="layout the trajectories were recorded on")
    s.add_argument("--dest", required=True, help="layout to map them onto")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("decode", parents=[common], help="raw decoder N-best lists")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--layout")
    s.add_argument("--vocab")
    s.add_argument("--beam", type=int)
    s.add_argument("--no-smooth", action="store_true")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("suggest", parents=[common], help="ranked suggestions for consecutive word gestures")
    s.add_argument("--traj", required=True)
    s.add_argument("--context", help="phrase JSONL; the first record supplies history and tags")
    s.add_argument("--mode", choices=["fusion", "naive"], default="fusion")
    s.add_argument("--no-smooth", action="store_true")
    s.set_defaults(func=cmd_suggest)

    for name, func, helptext in (("bench", cmd_bench, "fusion vs naive benchmark"),
                                 ("ablate", cmd_ablate, "component ablation"),
                                 ("tune", cmd_tune, "grid-search fusion coefficients on the dev split")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--phrases", help="phrase JSONL (default: packaged set)")
        if name == "tune":
            s.add_argument("--grid", help="comma-separated values used for both coefficients")
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError, KeyError) as e:
        print(f"swipefusion: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
