import json
from dataclasses import replace

import pytest

from swipefusion.config import ConfigError, RunConfig, load_config, parse_config
from swipefusion.corpus import default_phrases, make_phrases, make_training_corpus
from swipefusion.harness import (REPORT_COLUMNS, Engine, HarnessError, load_records, replay_event_log, report_csv,
                                 run_ablation, run_benchmark, summarize, summary_text, transcribe, tune, write_report)
from swipefusion.lm import write_phrases


@pytest.fixture(scope="module")
def cfg():
    return replace(RunConfig(), n_phrases=10, seed=3)


@pytest.fixture(scope="module")
def engine(cfg):
    return Engine(cfg)


@pytest.fixture(scope="module")
def quiet(cfg):
    c = cfg.with_noise_profile("none")
    return c, Engine(c)


def by_condition(rows):
    out = {}
    for r in rows:
        out.setdefault(r.condition, []).append(r)
    return out


def test_report_columns_and_blocks(cfg, engine):
    rows = run_benchmark(replace(cfg, block_size=4), engine=engine)
    text = report_csv(rows)
    assert text.splitlines()[0] == ",".join(REPORT_COLUMNS)
    assert len(text.splitlines()) == 1 + 2 * 10
    assert [r.block for r in rows[:10]] == [0, 0, 0, 0, 1, 1, 1, 1, 2, 2]
    assert set(summarize(rows)) == {"fusion", "naive"}
    assert "simulated" in summary_text(rows)


def test_deterministic_csv(cfg):
    a = report_csv(run_benchmark(cfg, engine=Engine(cfg)))
    b = report_csv(run_benchmark(cfg, engine=Engine(cfg)))
    assert a == b


def test_naive_not_better_than_fusion(cfg, engine):
    s = summarize(run_benchmark(cfg, engine=engine))
    assert s["naive"]["ucer"][0] >= s["fusion"]["ucer"][0]


def test_conditions_share_trajectories(cfg, engine):
    calls = []
    real = engine.evidence

    def counting(word, pid, i, attempt):
        calls.append((word, pid, i, attempt))
        return real(word, pid, i, attempt)

    engine.evidence = counting
    try:
        recs = load_records(None, 3)
        transcribe(engine, recs, {"fusion": engine.policy("fusion"), "naive": engine.policy("naive")})
    finally:
        del engine.evidence
    assert len(calls) == len(set(calls))
    assert {c[3] for c in calls} <= {0, 1}
    assert sum(1 for c in calls if c[3] == 0) == sum(len(r.words) for r in recs)


def test_ablation_coherence(cfg, engine):
    abl = by_condition(run_ablation(cfg, engine=engine))
    no_lm = replace(cfg, fusion=replace(cfg.fusion, lm_coeff=0.0))
    plain = by_condition(run_benchmark(no_lm, ["fusion"], engine=engine))["fusion"]
    full = by_condition(run_benchmark(cfg, ["fusion"], engine=engine))["fusion"]
    strip = lambda rows: [r.cells()[1:] for r in rows]
    assert strip(abl["GDM+SSCM"]) == strip(plain)
    assert strip(abl["GDM+SSCM+CLM"]) == strip(full)


def test_zero_noise(quiet):
    c, eng = quiet
    abl = summarize(run_ablation(c, engine=eng))
    # double letters and collinear keys are invisible to the lexicon-free decoder; only full fusion gets close to 0
    assert abl["GDM+SSCM+CLM"]["ucer"][0] < min(abl["GDM"]["ucer"][0], abl["GDM+SSCM"]["ucer"][0])
    assert abl["GDM+SSCM+CLM"]["ucer"][0] <= 0.01


def test_single_phrase_zero_noise(tmp_path, quiet):
    c, eng = quiet
    p = tmp_path / "one.jsonl"
    write_phrases(default_phrases("dev")[:1], p)
    rows = run_benchmark(replace(c, phrases=p, n_phrases=None), ["fusion"], engine=eng)
    assert len(rows) == 1 and rows[0].ucer == 0.0


def test_all_stages_exact_without_repeats(tmp_path, quiet):
    c, eng = quiet
    p = tmp_path / "g.jsonl"
    p.write_text(json.dumps({"stimulus": "she said the soup was hot",
                             "history": ["we might taste the chicken this week", "i was thinking about the chicken"],
                             "tags": ["persona:likes chicken and soup"]}) + "\n")
    rows = run_ablation(replace(c, phrases=p, n_phrases=None), engine=eng)
    assert [r.ucer for r in rows] == [0.0, 0.0, 0.0]


def test_empty_phrase_file(tmp_path, cfg):
    p = tmp_path / "empty.jsonl"
    p.write_text("")
    with pytest.raises(HarnessError, match="no phrases"):
        run_benchmark(replace(cfg, phrases=p))


def test_tune(cfg, engine):
    best, results = tune(replace(cfg, n_phrases=5), {"swipe_correction_coeff": [0], "lm_coeff": [0]}, engine=engine)
    assert (best.swipe_correction_coeff, best.lm_coeff) == (0.0, 0.0) and len(results) == 1
    best, results = tune(replace(cfg, n_phrases=8), {"swipe_correction_coeff": [0, 0.3], "lm_coeff": [0, 0.3]},
                         engine=engine)
    table = {(a, b): e for a, b, e in results}
    assert table[(best.swipe_correction_coeff, best.lm_coeff)] <= table[(0.0, 0.0)]
    with pytest.raises(HarnessError):
        tune(cfg, {"swipe_correction_coeff": [0.8], "lm_coeff": [0.8]}, engine=engine)


def test_report_files_replay(tmp_path, cfg, engine):
    rows = run_benchmark(replace(cfg, n_phrases=4), engine=engine)
    csv_path, txt_path = write_report(rows, tmp_path, "r")
    assert txt_path.read_text() == summary_text(rows)
    assert report_csv(replay_event_log(tmp_path / "r_events.jsonl", cfg.block_size)) == csv_path.read_text()


def test_unknown_condition(engine):
    with pytest.raises(HarnessError):
        engine.policy("oracle")


def test_config_parsing(tmp_path):
    (tmp_path / "p.jsonl").write_text(json.dumps({"stimulus": "hi there"}) + "\n")
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"version": 1, "phrases": "p.jsonl", "noise_profile": "low", "sim": {"noise_std": 0.07},
                                "fusion": {"lm_coeff": 0.2}, "conditions": ["fusion"], "seed": 9,
                                "edit_costs": {"omit": -1.0}}))
    c = load_config(path)
    assert c.phrases == tmp_path / "p.jsonl" and c.seed == 9 and c.conditions == ("fusion",)
    assert c.sim.noise_std == 0.07 and c.sim.drift_rate == 0.01
    assert c.fusion.lm_coeff == 0.2 and c.edit_costs == {"free_end_insertion": False, "omit": -1.0}
    assert c.with_noise_profile("high").sim.noise_std == 0.25


@pytest.mark.parametrize("data,msg", [
    ({"version": 2}, "version"),
    ({"colour": 1}, "unknown config keys"),
    ({"noise_profile": "loud"}, "noise profile"),
    ({"phrases": "/nonexistent/p.jsonl"}, "not found"),
    ({"conditions": ["magic"]}, "unknown conditions"),
    ({"conditions": [], "ablation": []}, "at least one"),
    ({"lm": {"beta": 1}}, "unknown keys"),
    ({"fusion": {"swipe_correction_coeff": 0.9}}, "fusion"),
])
def test_config_errors(data, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(data)


def test_config_bad_json_line(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{\n "seed": 1,\n }')
    with pytest.raises(ConfigError, match=r"c\.json:3"):
        load_config(p)


def test_corpus_generators_deterministic():
    assert make_phrases(5, 1) == make_phrases(5, 1)
    assert make_training_corpus(5, 1) == make_training_corpus(5, 1)
    rec = make_phrases(1, 4)[0]
    assert rec.tags[0].startswith("persona:likes") and len(rec.history) == 2
