import csv
import io
import json
import logging
import random
import statistics
import sys
from pathlib import Path

import pytest

from keybasket.cli import main
from keybasket.config import CACHE_ENV, ConfigError, PipelineConfig, read_config_file
from keybasket.miner import AssociationRule, MiningConfig, sort_rules
from keybasket.pipeline import (
    Pipeline,
    PipelineError,
    SegmentReport,
    compare_segments,
    emit_rule_table,
    run_pipeline,
)
from keybasket.keyness import TransactionSummary
from synth import FUNCTION_WORDS, seeded_segment, reference_documents, two_segment_inputs, write_jsonl, write_vertical

OUTPUTS = ("rules_CR.csv", "rules_ANTS.csv", "rules_CR.json", "rules_ANTS.json", "summary.json", "boxplot.csv", "comparison.json")


@pytest.fixture(scope="module")
def inputs(tmp_path_factory):
    return two_segment_inputs(tmp_path_factory.mktemp("inputs"))


def run_args(inputs, out, *extra):
    return [
        "run", "--reference", inputs["reference"],
        "--segment", f"CR={inputs['CR']}", "--segment", f"ANTS={inputs['ANTS']}",
        "--min-support", "0.02", "--seed-keyword", "migrant", "--out", str(out), *extra,
    ]


def config(inputs, out, **kw):
    kw.setdefault("mining", MiningConfig(0.02, 0.4, 4))
    kw.setdefault("seed_keyword", "migrant")
    return PipelineConfig(inputs["reference"], {"CR": inputs["CR"], "ANTS": inputs["ANTS"]}, out=str(out), **kw)


def test_run_writes_every_output(inputs, tmp_path, capsys):
    assert main(run_args(inputs, tmp_path / "out")) == 0
    for name in OUTPUTS:
        assert (tmp_path / "out" / name).exists(), name
    assert (tmp_path / "out" / ".cache" / "keywords_CR.jsonl").exists()


def test_run_is_byte_identical(inputs, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(run_args(inputs, a)) == 0
    assert main(run_args(inputs, b)) == 0
    for name in OUTPUTS:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_warm_cache_gives_same_bytes(inputs, tmp_path):
    out = tmp_path / "out"
    assert main(run_args(inputs, out)) == 0
    cold = {n: (out / n).read_bytes() for n in OUTPUTS}
    assert main(run_args(inputs, out)) == 0
    assert cold == {n: (out / n).read_bytes() for n in OUTPUTS}


def test_summary_recomputable_from_rule_table(inputs, tmp_path):
    out = tmp_path / "out"
    run_pipeline(config(inputs, out))
    summary = json.loads((out / "summary.json").read_text())
    for seg in ("CR", "ANTS"):
        rows = json.loads((out / f"rules_{seg}.json").read_text())
        focus = [r for r in rows if "migrant" in r["lhs"] or r["rhs"] == "migrant"]
        s = summary["segments"][seg]
        assert s["rule_count"] == len(rows)
        assert s["seed"]["rule_count"] == len(focus)
        assert s["median_lift"] == statistics.median(r["lift"] for r in focus)
        assert s["median_support"] == statistics.median(r["support"] for r in focus)
        assert [r["rank"] for r in rows] == list(range(1, len(rows) + 1))
        lifts = [r["lift"] for r in rows]
        assert lifts == sorted(lifts, reverse=True)


def test_segments_with_more_topics_have_higher_lift(inputs, tmp_path):
    bundle = run_pipeline(config(inputs, tmp_path))
    cr, ants = bundle.segments["CR"], bundle.segments["ANTS"]
    assert ants.lift.median > cr.lift.median
    cmp = bundle.comparisons[0]
    assert cmp["segments"] == ["ANTS", "CR"]
    assert cmp["rank_sum_lift"]["p_two_sided"] < 0.001


def test_summary_seed_shares(inputs, tmp_path):
    bundle = run_pipeline(config(inputs, tmp_path))
    d = bundle.segments["CR"].to_dict()
    seed = d["seed"]
    assert seed["share_of_all_documents"] == seed["doc_count"] / d["n_documents"]
    assert seed["share_of_retained_documents"] == seed["doc_count"] / d["retained_count"]


def test_cache_env_and_fingerprint_rebuild(inputs, tmp_path, monkeypatch, caplog):
    cache = tmp_path / "cache"
    monkeypatch.setenv(CACHE_ENV, str(cache))
    cfg = config(inputs, tmp_path / "out")
    assert cfg.cache_dir == cache
    run_pipeline(cfg)
    assert (cache / "keywords_CR.jsonl.meta.json").exists()
    assert not (tmp_path / "out" / ".cache").exists()

    # same inputs: reused without warnings
    with caplog.at_level(logging.WARNING):
        run_pipeline(cfg)
    assert "stale" not in caplog.text

    # a keyness change invalidates keyword lists but not the profiles
    caplog.clear()
    cfg2 = config(inputs, tmp_path / "out", keyness=type(cfg.keyness)(min_keywords_per_text=16))
    with caplog.at_level(logging.WARNING):
        run_pipeline(cfg2)
    assert "keywords_CR.jsonl is stale" in caplog.text
    assert "profile_CR.json" not in caplog.text


def test_cache_entry_tampering_rebuilds(inputs, tmp_path):
    cfg = config(inputs, tmp_path / "out")
    first = run_pipeline(cfg).segments["CR"].rules
    meta = cfg.cache_dir / "keywords_CR.jsonl.meta.json"
    meta.write_text('{"fingerprint": "bogus"}')
    (cfg.cache_dir / "keywords_CR.jsonl").write_text("")
    assert run_pipeline(cfg).segments["CR"].rules == first


def test_single_segment_without_seed(inputs, tmp_path):
    cfg = PipelineConfig(inputs["reference"], {"CR": inputs["CR"]}, mining=MiningConfig(0.02, 0.4, 4), out=str(tmp_path))
    bundle = run_pipeline(cfg)
    rep = bundle.segments["CR"]
    assert rep.focus_rules == rep.rules and rep.seed_doc_count is None
    assert bundle.comparisons == []
    assert json.loads((tmp_path / "comparison.json").read_text()) == {"comparisons": []}
    assert "seed" not in rep.to_dict()


def test_degenerate_segment(inputs, tmp_path):
    cfg = config(inputs, tmp_path, keyness=type(PipelineConfig("r", {"x": "y"}).keyness)(min_keywords_per_text=500))
    bundle = run_pipeline(cfg)
    for rep in bundle.segments.values():
        assert rep.degenerate and rep.rules == [] and rep.lift is None
    lines = (tmp_path / "rules_CR.csv").read_text().splitlines()
    assert lines == ["rank,lhs,rhs,count,support,confidence,lift"]
    cmp = bundle.comparisons[0]
    assert cmp["rank_sum_lift"] is None


def test_self_comparison_is_reflexive(inputs, tmp_path):
    rep = Pipeline(config(inputs, tmp_path)).segment_report("ANTS")
    cmp = compare_segments(rep, rep)
    assert cmp["rank_sum_lift"]["p_two_sided"] == 1.0
    assert cmp["rank_sum_support"]["p_two_sided"] == 1.0
    assert all(v == [] for v in cmp["unique_items_rules"].values())


def test_compare_rejects_mismatched_settings():
    a = SegmentReport("A", {"mining": 1}, 1, TransactionSummary(1, 0))
    b = SegmentReport("B", {"mining": 2}, 1, TransactionSummary(1, 0))
    with pytest.raises(PipelineError):
        compare_segments(a, b)


# -- rule tables -----------------------------------------------------------


def test_worked_example_row(tmp_path):
    n = 12110
    rule = AssociationRule(("migrant",), "EU", 110, 259, 568, n, 110 / n, 110 / 259, 110 * n / (259 * 568))
    emit_rule_table([rule], "csv", tmp_path / "r.csv")
    assert (tmp_path / "r.csv").read_text().splitlines() == [
        "rank,lhs,rhs,count,support,confidence,lift",
        "1,migrant,EU,110,0.009083,0.424710,9.055006",
    ]
    emit_rule_table([rule], "json", tmp_path / "r.json")
    row = json.loads((tmp_path / "r.json").read_text())[0]
    assert row["rank"] == 1 and row["lhs"] == ["migrant"]


def test_rule_table_quotes_multi_item_antecedents(tmp_path):
    rule = AssociationRule(("legal", "Africa"), "migrant", 3, 3, 10, 100, 0.03, 1.0, 10.0)
    emit_rule_table([rule], "csv", tmp_path / "r.csv")
    rows = list(csv.reader(io.StringIO((tmp_path / "r.csv").read_text())))
    assert rows[1][:3] == ["1", "Africa, legal", "migrant"]


def test_rule_table_tie_order_is_deterministic(tmp_path):
    rules = [AssociationRule((a,), b, 2, 2, 2, 10, 0.2, 1.0, 5.0) for a, b in [("x", "y"), ("a", "z"), ("a", "b")]]
    for seed in range(3):
        shuffled = random.Random(seed).sample(rules, 3)
        emit_rule_table(sort_rules(shuffled), "csv", tmp_path / f"{seed}.csv")
    texts = {(tmp_path / f"{s}.csv").read_text() for s in range(3)}
    assert len(texts) == 1
    assert [ln.split(",")[1:3] for ln in texts.pop().splitlines()[1:]] == [["a", "b"], ["a", "z"], ["x", "y"]]


def test_unknown_table_format(tmp_path):
    with pytest.raises(ValueError):
        emit_rule_table([], "xml", tmp_path / "r.xml")


# -- CLI and config -------------------------------------------------------


def test_config_file_with_flags_overriding(inputs, tmp_path, capsys):
    cfg_file = tmp_path / "kb.conf"
    cfg_file.write_text(
        "# demo\n"
        f"reference = {inputs['reference']}\n"
        f"segment.CR = {inputs['CR']}\n"
        "mining.min_support = 0.5\n"
        "keyness.min-freq = 3\n"
        "seed-keyword = migrant\n"
        f"out = {tmp_path / 'from-file'}\n"
    )
    options, segments = read_config_file(cfg_file)
    assert options["min-support"] == "0.5" and segments == {"CR": inputs["CR"]}
    assert main(["stats", "--config", str(cfg_file), "--min-support", "0.02"]) == 0
    out = capsys.readouterr().out.splitlines()
    header, row = out[0].split("\t"), out[1].split("\t")
    assert header[:2] == ["segment", "n_documents"]
    assert row[0] == "CR" and int(row[header.index("rules")]) > 0
    # without the flag the file's 0.5 support leaves nothing
    assert main(["stats", "--config", str(cfg_file)]) == 0
    row = capsys.readouterr().out.splitlines()[1].split("\t")
    assert row[header.index("rules")] == "0" and row[header.index("median_lift")] == "NA"


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text("colour = blue\n")
    with pytest.raises(ConfigError, match="unknown key"):
        read_config_file(bad)
    bad.write_text("just words\n")
    with pytest.raises(ConfigError, match=":1:"):
        read_config_file(bad)


def test_stage_verbs(inputs, tmp_path, capsys):
    base = ["--reference", inputs["reference"], "--segment", f"CR={inputs['CR']}", "--segment",
            f"ANTS={inputs['ANTS']}", "--min-support", "0.02", "--seed-keyword", "migrant", "--out", str(tmp_path)]
    assert main(["ingest", *base]) == 0
    assert "CR\t120 documents" in capsys.readouterr().out
    assert main(["keywords", *base]) == 0
    assert "retained 120" in capsys.readouterr().out
    assert main(["mine", *base]) == 0
    assert (tmp_path / "rules_ANTS.csv").exists()
    assert main(["report", *base]) == 0
    assert (tmp_path / "summary.json").exists() and (tmp_path / "boxplot.csv").exists()
    assert main(["compare", *base]) == 0
    assert (tmp_path / "comparison.json").exists()
    box = (tmp_path / "boxplot.csv").read_text().splitlines()
    assert box[0] == "segment,metric,min,q1,median,q3,max,upper_fence,n_outliers"
    assert [ln.split(",")[:2] for ln in box[1:]] == [["ANTS", "lift"], ["ANTS", "support"], ["CR", "lift"], ["CR", "support"]]


def test_cli_errors(inputs, tmp_path, capsys):
    assert main(["run", "--segment", f"CR={inputs['CR']}", "--out", str(tmp_path)]) == 2
    assert "reference" in capsys.readouterr().err
    assert main(["run", "--reference", str(tmp_path / "missing"), "--segment", f"CR={inputs['CR']}",
                 "--out", str(tmp_path)]) == 2
    assert main(["compare", "--reference", inputs["reference"], "--segment", f"CR={inputs['CR']}",
                 "--out", str(tmp_path)]) == 2
    with pytest.raises(SystemExit):
        main(["run", "--segment", "no-equals-sign"])


def test_reference_from_stdin(inputs, tmp_path, monkeypatch):
    data = Path(inputs["reference"]).read_bytes()
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))
    cfg = PipelineConfig("-", {"CR": inputs["CR"]}, mining=MiningConfig(0.02, 0.4, 4), out=str(tmp_path))
    from_stdin = run_pipeline(cfg).segments["CR"].rules
    cfg = PipelineConfig(inputs["reference"], {"CR": inputs["CR"]}, mining=MiningConfig(0.02, 0.4, 4), out=str(tmp_path / "b"))
    assert run_pipeline(cfg).segments["CR"].rules == from_stdin


def test_vertical_input_with_tags_gives_tc(tmp_path):
    docs, _ = seeded_segment("CR", 60, 3, seed=4)
    ref = reference_documents(["migrant"], n_docs=20, doc_len=1000)
    tag = lambda lemma: "PD" if lemma in FUNCTION_WORDS else "NNIS1"
    write_vertical(docs, tmp_path / "cr.vert", tag)
    write_vertical(ref, tmp_path / "ref.vert", tag)
    cfg = PipelineConfig(str(tmp_path / "ref.vert"), {"CR": str(tmp_path / "cr.vert")}, format="vertical",
                         mining=MiningConfig(0.05, 0.4, 3), out=str(tmp_path / "out"))
    rep = run_pipeline(cfg).segments["CR"]
    assert rep.rules and rep.tc is not None
    assert 0 < rep.tc.tc <= 1
    pos = Pipeline(cfg).segment_profile("CR").pos
    assert all(pos[c[0]].startswith("N") for c in rep.tc.contributing)

    # same texts through jsonl: no tags, no stoplist, tc is skipped
    write_jsonl(docs, tmp_path / "cr.jsonl")
    write_jsonl(ref, tmp_path / "ref.jsonl")
    cfg = PipelineConfig(str(tmp_path / "ref.jsonl"), {"CR": str(tmp_path / "cr.jsonl")},
                         mining=MiningConfig(0.05, 0.4, 3), out=str(tmp_path / "out2"))
    again = run_pipeline(cfg).segments["CR"]
    assert again.tc is None
    assert [(r.lhs, r.rhs, r.count) for r in again.rules] == [(r.lhs, r.rhs, r.count) for r in rep.rules]


def test_stoplist_tc(inputs, tmp_path):
    stop = tmp_path / "stop.txt"
    stop.write_text("# function words\n" + "\n".join(FUNCTION_WORDS[:5]) + "\n")
    rep = run_pipeline(config(inputs, tmp_path, stoplist=str(stop))).segments["CR"]
    assert rep.tc is not None and 0 < rep.tc.tc <= 1
    contributing = {c[0] for c in rep.tc.contributing}
    assert not contributing & set(FUNCTION_WORDS[:5])
    assert contributing & set(FUNCTION_WORDS[5:])
