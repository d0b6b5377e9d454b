"""End-to-end orchestration: ingest, keywords, mining, statistics, reports.

Intermediates live in a cache directory.  Every cached file has a sidecar
``<name>.meta.json`` holding the fingerprint of everything it was derived
from (input bytes and the config sections that affect it); a mismatch
triggers a rebuild.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable

from .config import PipelineConfig
from .corpus import PARSERS, Corpus, Document, FrequencyProfile, profile_from_corpus
from .keyness import KeywordList, TransactionSummary, build_transactions, read_keyword_lists, write_keyword_lists
from .miner import (
    AssociationRule,
    TransactionSet,
    contains_item,
    filter_rules,
    mine_rules,
    sort_rules,
    unique_items,
)
from .stats import (
    BoxplotSummary,
    ThematicConcentration,
    boxplot_summary,
    stoplist_predicate,
    tag_predicate,
    thematic_concentration,
    wilcoxon_rank_sum,
)

__all__ = [
    "PipelineError",
    "Pipeline",
    "SegmentReport",
    "ReportBundle",
    "run_pipeline",
    "compare_segments",
    "emit_rule_table",
    "write_boxplot_csv",
    "dump_json",
]

log = logging.getLogger(__name__)

RULE_TABLE_HEADER = ("rank", "lhs", "rhs", "count", "support", "confidence", "lift")
BOXPLOT_HEADER = ("segment", "metric", "min", "q1", "median", "q3", "max", "upper_fence", "n_outliers")


class PipelineError(RuntimeError):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _sha256(*parts: bytes | str) -> str:
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, str):
            part = part.encode("utf-8")
        h.update(len(part).to_bytes(8, "little"))
        h.update(part)
    return h.hexdigest()


class Cache:
    def __init__(self, root: Path):
        self.root = Path(root)

    def _meta_path(self, name: str) -> Path:
        return self.root / f"{name}.meta.json"

    def lookup(self, name: str, fingerprint: str) -> dict | None:
        """Metadata of a valid cached entry, else None."""
        path, meta_path = self.root / name, self._meta_path(name)
        if not (path.exists() and meta_path.exists()):
            return None
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            meta = {}
        if meta.get("fingerprint") != fingerprint:
            log.warning("cache entry %s is stale (input or config changed); rebuilding", name)
            return None
        return meta

    def path(self, name: str) -> Path:
        return self.root / name

    def store(self, name: str, fingerprint: str, text: str, **meta) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / name).write_text(text, encoding="utf-8")
        meta["fingerprint"] = fingerprint
        self._meta_path(name).write_text(dump_json(meta), encoding="utf-8")


@dataclass
class SegmentReport:
    """Everything reported for one segment."""

    segment: str
    settings: dict
    n_documents: int
    summary: TransactionSummary
    rules: list[AssociationRule] = field(repr=False, default_factory=list)
    seed_keyword: str | None = None
    seed_doc_count: int | None = None
    focus_rules: list[AssociationRule] = field(repr=False, default_factory=list)
    lift: BoxplotSummary | None = None
    support: BoxplotSummary | None = None
    tc: ThematicConcentration | None = None
    outliers: list[AssociationRule] = field(repr=False, default_factory=list)

    @property
    def degenerate(self) -> bool:
        return self.summary.retained_count == 0

    def to_dict(self) -> dict:
        out = {
            "segment": self.segment,
            "n_documents": self.n_documents,
            "retained_count": self.summary.retained_count,
            "dropped_count": self.summary.dropped_count,
            "retention_ratio": self.summary.retention_ratio,
            "degenerate": self.degenerate,
            "rule_count": len(self.rules),
            "seed_keyword": self.seed_keyword,
        }
        if self.seed_keyword is not None:
            out["seed"] = {
                "doc_count": self.seed_doc_count,
                "share_of_all_documents": self.seed_doc_count / self.n_documents if self.n_documents else None,
                "share_of_retained_documents": (
                    self.seed_doc_count / self.summary.retained_count if self.summary.retained_count else None
                ),
                "rule_count": len(self.focus_rules),
            }
        out["lift"] = self.lift.to_dict() if self.lift else None
        out["support"] = self.support.to_dict() if self.support else None
        out["median_lift"] = self.lift.median if self.lift else None
        out["median_support"] = self.support.median if self.support else None
        out["thematic_concentration"] = self.tc.to_dict() if self.tc else None
        out["outlier_rules"] = [_ranked_dict(i, r) for i, r in enumerate(self.outliers, start=1)]
        return out


@dataclass
class ReportBundle:
    config: PipelineConfig
    segments: dict[str, SegmentReport]
    comparisons: list[dict] = field(default_factory=list)

    def summary_dict(self) -> dict:
        return {
            "settings": self.config.analysis_settings(),
            "segments": {name: rep.to_dict() for name, rep in sorted(self.segments.items())},
        }


def _ranked_dict(rank: int, rule: AssociationRule) -> dict:
    d = {"rank": rank}
    d.update(rule.to_dict())
    return d


class Pipeline:
    """Stage-wise access to every intermediate, cached by fingerprint."""

    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        self.cache = Cache(cfg.cache_dir)
        self._bytes: dict[str, bytes] = {}
        self._memo: dict[tuple, object] = {}

    # -- inputs --------------------------------------------------------------

    def input_bytes(self, path: str) -> bytes:
        if path not in self._bytes:
            try:
                if path == "-":
                    self._bytes[path] = sys.stdin.buffer.read()
                else:
                    self._bytes[path] = Path(path).read_bytes()
            except OSError as exc:
                raise PipelineError(f"cannot read input {path}: {exc}") from exc
        return self._bytes[path]

    def input_digest(self, path: str) -> str:
        return _sha256(self.input_bytes(path))

    def _parse(self, path: str) -> Corpus:
        return PARSERS[self.cfg.format](io.BytesIO(self.input_bytes(path)))

    def corpus(self, segment: str) -> Corpus:
        key = ("corpus", segment)
        if key not in self._memo:
            parsed = self._parse(self.cfg.segments[segment])
            self._memo[key] = Corpus(tuple(Document(d.id, segment, d.lemmas, d.tags) for d in parsed))
        return self._memo[key]

    # -- cached stages -------------------------------------------------------

    def _reference_fp(self) -> str:
        return _sha256("reference", self.cfg.format, self.input_digest(self.cfg.reference))

    def reference_profile(self) -> FrequencyProfile:
        if "ref" in self._memo:
            return self._memo["ref"]
        fp = self._reference_fp()
        name = "reference_profile.json"
        if self.cache.lookup(name, fp) is not None:
            profile = FrequencyProfile.from_dict(json.loads(self.cache.path(name).read_text(encoding="utf-8")))
        else:
            profile = profile_from_corpus(self._parse(self.cfg.reference))
            if profile.total_tokens == 0:
                raise PipelineError("reference corpus is empty")
            self.cache.store(name, fp, json.dumps(profile.to_dict(), ensure_ascii=False, sort_keys=True))
        self._memo["ref"] = profile
        return profile

    def segment_profile(self, segment: str) -> FrequencyProfile:
        key = ("profile", segment)
        if key in self._memo:
            return self._memo[key]
        fp = _sha256("profile", self.cfg.format, self.input_digest(self.cfg.segments[segment]))
        name = f"profile_{segment}.json"
        meta = self.cache.lookup(name, fp)
        if meta is not None:
            profile = FrequencyProfile.from_dict(json.loads(self.cache.path(name).read_text(encoding="utf-8")))
        else:
            corpus = self.corpus(segment)
            profile = profile_from_corpus(corpus)
            self.cache.store(name, fp, json.dumps(profile.to_dict(), ensure_ascii=False, sort_keys=True),
                             n_documents=len(corpus))
            meta = {"n_documents": len(corpus)}
        self._memo[key] = profile
        self._memo[("n_docs", segment)] = meta["n_documents"]
        return profile

    def n_documents(self, segment: str) -> int:
        if ("n_docs", segment) not in self._memo:
            self.segment_profile(segment)
        return self._memo[("n_docs", segment)]

    def keyword_lists(self, segment: str) -> tuple[list[KeywordList], TransactionSummary]:
        key = ("kw", segment)
        if key in self._memo:
            return self._memo[key]
        fp = _sha256(
            "keywords", self.cfg.format,
            self.input_digest(self.cfg.segments[segment]),
            self._reference_fp(),
            json.dumps(asdict(self.cfg.keyness), sort_keys=True),
        )
        name = f"keywords_{segment}.jsonl"
        meta = self.cache.lookup(name, fp)
        if meta is not None:
            with open(self.cache.path(name), encoding="utf-8") as fh:
                lists = read_keyword_lists(fh)
            summary = TransactionSummary(meta["retained_count"], meta["dropped_count"])
        else:
            lists, summary = build_transactions(self.corpus(segment), self.reference_profile(), self.cfg.keyness)
            buf = io.StringIO()
            write_keyword_lists(lists, buf)
            self.cache.store(name, fp, buf.getvalue(),
                             retained_count=summary.retained_count, dropped_count=summary.dropped_count)
        self._memo[key] = (lists, summary)
        return lists, summary

    def rules(self, segment: str) -> list[AssociationRule]:
        key = ("rules", segment)
        if key not in self._memo:
            lists, _ = self.keyword_lists(segment)
            if not lists:
                log.warning("segment %s: no keyword list survived filtering; nothing to mine", segment)
                self._memo[key] = []
            else:
                self._memo[key] = mine_rules(TransactionSet.from_keyword_lists(lists), self.cfg.mining)
        return self._memo[key]

    # -- statistics ----------------------------------------------------------

    def autosemantic(self, profile: FrequencyProfile) -> Callable[[str], bool] | None:
        if self.cfg.stoplist:
            with open(self.cfg.stoplist, encoding="utf-8") as fh:
                words = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
            return stoplist_predicate(words)
        if profile.pos is not None:
            return tag_predicate(profile.pos, self.cfg.tag_prefixes)
        return None

    def segment_report(self, segment: str) -> SegmentReport:
        key = ("report", segment)
        if key in self._memo:
            return self._memo[key]
        lists, summary = self.keyword_lists(segment)
        rules = self.rules(segment)
        seed = self.cfg.seed_keyword
        rep = SegmentReport(
            segment=segment,
            settings=self.cfg.analysis_settings(),
            n_documents=self.n_documents(segment),
            summary=summary,
            rules=rules,
            seed_keyword=seed,
        )
        if seed is not None:
            rep.seed_doc_count = sum(1 for kw in lists if seed in kw.keywords)
            rep.focus_rules = filter_rules(rules, contains_item(seed))
        else:
            rep.focus_rules = list(rules)

        if rep.focus_rules:
            rep.lift = boxplot_summary(r.lift for r in rep.focus_rules)
            rep.support = boxplot_summary(r.support for r in rep.focus_rules)
            rep.outliers = sort_rules(r for r in rep.focus_rules if r.lift > rep.lift.upper_fence)

        profile = self.segment_profile(segment)
        predicate = self.autosemantic(profile)
        if predicate is None:
            log.info("segment %s: no tags and no stoplist; thematic concentration skipped", segment)
        elif profile.counts:
            rep.tc = thematic_concentration(profile, predicate)
        self._memo[key] = rep
        return rep

    def bundle(self) -> ReportBundle:
        reports = {seg: self.segment_report(seg) for seg in self.cfg.segments}
        comparisons = [compare_segments(reports[a], reports[b]) for a, b in combinations(sorted(reports), 2)]
        return ReportBundle(self.cfg, reports, comparisons)

    # -- writers -------------------------------------------------------------

    def write_rules(self) -> list[Path]:
        out = Path(self.cfg.out)
        written = []
        for seg in self.cfg.segments:
            rules = self.rules(seg)
            for fmt in ("csv", "json"):
                path = out / f"rules_{seg}.{fmt}"
                emit_rule_table(rules, fmt, path)
                written.append(path)
        return written

    def write_report(self, bundle: ReportBundle | None = None) -> list[Path]:
        bundle = bundle or self.bundle()
        out = Path(self.cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(dump_json(bundle.summary_dict()), encoding="utf-8")
        write_boxplot_csv(bundle.segments.values(), out / "boxplot.csv")
        return [out / "summary.json", out / "boxplot.csv"]

    def write_comparison(self, bundle: ReportBundle | None = None) -> Path:
        bundle = bundle or self.bundle()
        out = Path(self.cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "comparison.json"
        path.write_text(dump_json({"comparisons": bundle.comparisons}), encoding="utf-8")
        return path


def run_pipeline(cfg: PipelineConfig) -> ReportBundle:
    """Full run; writes rules_<segment>.csv/json, summary.json, boxplot.csv, comparison.json."""
    pipe = Pipeline(cfg)
    pipe.reference_profile()
    pipe.write_rules()
    bundle = pipe.bundle()
    pipe.write_report(bundle)
    pipe.write_comparison(bundle)
    return bundle


def compare_segments(a: SegmentReport, b: SegmentReport) -> dict:
    """Side-by-side statistics of two segment reports built with identical settings."""
    if a.settings != b.settings:
        raise PipelineError(f"segments {a.segment!r} and {b.segment!r} were built with different settings")

    def side(fn):
        return {a.segment: fn(a), b.segment: fn(b)}

    out = {
        "segments": [a.segment, b.segment],
        "seed_keyword": a.seed_keyword,
        "n_documents": side(lambda r: r.n_documents),
        "retained_count": side(lambda r: r.summary.retained_count),
        "rule_count": side(lambda r: len(r.rules)),
        "focus_rule_count": side(lambda r: len(r.focus_rules)),
        "seed_doc_count": side(lambda r: r.seed_doc_count),
        "median_lift": side(lambda r: r.lift.median if r.lift else None),
        "median_support": side(lambda r: r.support.median if r.support else None),
        "lift_upper_fence": side(lambda r: r.lift.upper_fence if r.lift else None),
        "outlier_count": side(lambda r: len(r.outliers)),
        "thematic_concentration": side(lambda r: r.tc.tc if r.tc else None),
        "outlier_rules": side(lambda r: [_ranked_dict(i, x) for i, x in enumerate(r.outliers, start=1)]),
    }
    for metric in ("lift", "support"):
        xs = [getattr(r, metric) for r in a.focus_rules]
        ys = [getattr(r, metric) for r in b.focus_rules]
        out[f"rank_sum_{metric}"] = wilcoxon_rank_sum(xs, ys).to_dict() if xs and ys else None
    ua, ub = unique_items(a.outliers, b.outliers)
    out["unique_items_outliers"] = {a.segment: sorted(ua), b.segment: sorted(ub)}
    ua, ub = unique_items(a.focus_rules, b.focus_rules)
    out["unique_items_rules"] = {a.segment: sorted(ua), b.segment: sorted(ub)}
    return out


def emit_rule_table(rules: list[AssociationRule], fmt: str, path: str | Path) -> Path:
    """Ranked rule table; CSV antecedents are ``", "``-joined, reals to 6 decimals."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(RULE_TABLE_HEADER)
                for rank, r in enumerate(rules, start=1):
                    writer.writerow([
                        rank, ", ".join(sorted(r.lhs)), r.rhs, r.count,
                        f"{r.support:.6f}", f"{r.confidence:.6f}", f"{r.lift:.6f}",
                    ])
        elif fmt == "json":
            rows = [_ranked_dict(rank, r) for rank, r in enumerate(rules, start=1)]
            path.write_text(json.dumps(rows, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        else:
            raise ValueError(f"unknown rule table format {fmt!r}")
    except OSError as exc:
        raise PipelineError(f"cannot write {path}: {exc}") from exc
    return path


def write_boxplot_csv(reports, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BOXPLOT_HEADER)
        for rep in sorted(reports, key=lambda r: r.segment):
            for metric in ("lift", "support"):
                box = getattr(rep, metric)
                if box is None:
                    continue
                writer.writerow([
                    rep.segment, metric,
                    *(f"{getattr(box, k):.6g}" for k in ("min", "q1", "median", "q3", "max", "upper_fence")),
                    len(box.outliers),
                ])
