import json
import subprocess
import sys
from pathlib import Path

import pytest

from swipefusion.cli import main
from swipefusion.corpus import default_phrases
from swipefusion.lm import write_phrases

DATA = Path(__file__).resolve().parents[1] / "src" / "swipefusion" / "data"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(path):
    return [json.loads(l) for l in Path(path).read_text().splitlines() if l.strip()]


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    write_phrases(default_phrases("dev")[:3], d / "phrases.jsonl")
    return d


def test_synth_decode_suggest(workdir, capsys):
    out = workdir / "s"
    code, text, _ = run(["synth", "--words", "the", "music", "--seed", "4", "--noise-profile", "low", "--out", out],
                        capsys)
    assert code == 0 and "2 trajectories" in text
    trajs = jsonl(out / "trajectories.jsonl")
    assert [t["word"] for t in trajs] == ["the", "music"]

    code, text, _ = run(["decode", "--in", out / "trajectories.jsonl", "--beam", "4"], capsys)
    lines = [json.loads(l) for l in text.splitlines()]
    assert code == 0 and len(lines) == 2 and all(1 <= len(l["candidates"]) <= 4 for l in lines)

    for mode in ("fusion", "naive"):
        code, text, _ = run(["suggest", "--traj", out / "trajectories.jsonl", "--context", workdir / "phrases.jsonl",
                             "--mode", mode], capsys)
        lines = [json.loads(l) for l in text.splitlines()]
        assert code == 0 and len(lines) == 2 and lines[0]["suggestions"][0][0] == "the"


def test_synth_phrases_deterministic(workdir, capsys):
    a = run(["synth", "--phrases", workdir / "phrases.jsonl", "--seed", "1"], capsys)[1]
    b = run(["synth", "--phrases", workdir / "phrases.jsonl", "--seed", "1"], capsys)[1]
    assert a == b and len(a.splitlines()) == sum(len(r.words) for r in default_phrases("dev")[:3])


def test_transform_layout(workdir, capsys):
    src = workdir / "t.jsonl"
    src.write_text(run(["synth", "--words", "hello", "--noise-profile", "none"], capsys)[1])
    code, _, _ = run(["transform-layout", "--in", src, "--source", DATA / "qwerty.json", "--dest",
                      DATA / "mobile.json", "--out", workdir / "w"], capsys)
    assert code == 0
    warped = jsonl(workdir / "w" / "warped.jsonl")
    assert len(warped) == 1 and len(warped[0]["samples"]) == len(jsonl(src)[0]["samples"])
    code, text, _ = run(["transform-layout", "--in", src, "--source", DATA / "qwerty.json", "--dest",
                         DATA / "qwerty.json"], capsys)
    assert json.loads(text) == jsonl(src)[0]


def test_bench_ablate_tune(workdir, capsys):
    out = workdir / "r"
    code, text, _ = run(["bench", "--phrases", workdir / "phrases.jsonl", "--seed", "2", "--out", out], capsys)
    assert code == 0 and "fusion" in text and "naive" in text
    rows = (out / "report.csv").read_text().splitlines()
    assert rows[0] == "condition,block,phrase_id,wpm,ucer,ccer,n_corrections" and len(rows) == 7
    assert (out / "report_summary.txt").exists() and (out / "report_events.jsonl").exists()

    code, text, _ = run(["ablate", "--phrases", workdir / "phrases.jsonl", "--out", out], capsys)
    assert code == 0 and len((out / "ablation.csv").read_text().splitlines()) == 10

    code, text, _ = run(["tune", "--phrases", workdir / "phrases.jsonl", "--grid", "0,0.3", "--out", out], capsys)
    assert code == 0
    best = json.loads((out / "best_fusion.json").read_text())["fusion"]
    assert {best["swipe_correction_coeff"], best["lm_coeff"]} <= {0.0, 0.3}
    assert len((out / "tune.csv").read_text().splitlines()) == 1 + 4


def test_config_file_is_used(workdir, capsys):
    cfg = workdir / "run.json"
    cfg.write_text(json.dumps({"version": 1, "phrases": "phrases.jsonl", "conditions": ["naive"], "seed": 5}))
    code, _, _ = run(["bench", "--config", cfg, "--out", workdir / "c"], capsys)
    assert code == 0
    rows = (workdir / "c" / "report.csv").read_text().splitlines()[1:]
    assert len(rows) == 3 and all(r.startswith("naive,") for r in rows)


@pytest.mark.parametrize("argv,msg", [
    (["decode", "--in", "/nonexistent.jsonl"], "nonexistent"),
    (["synth"], "--words or --phrases"),
    (["bench", "--config", "/nonexistent.json"], "nonexistent"),
    (["synth", "--words", "a#b"], "'#'"),
])
def test_errors_exit_nonzero(argv, msg, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1 and err.startswith("swipefusion: error:") and msg in err


def test_bad_inputs_report_location(workdir, capsys):
    bad = workdir / "bad.json"
    bad.write_text('{"seed": 1,,}')
    code, _, err = run(["bench", "--config", bad], capsys)
    assert code == 1 and "bad.json:1" in err
    empty = workdir / "empty.jsonl"
    empty.write_text("")
    code, _, err = run(["bench", "--phrases", empty, "--out", workdir / "e"], capsys)
    assert code == 1 and "no phrases" in err and not (workdir / "e" / "report.csv").exists()


def test_argparse_rejects_unknown_profile(capsys):
    with pytest.raises(SystemExit) as e:
        main(["bench", "--noise-profile", "loud"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "swipefusion", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for sub in ("synth", "transform-layout", "decode", "suggest", "bench", "ablate", "tune"):
        assert sub in r.stdout
