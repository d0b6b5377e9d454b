"""Command-line interface.

    keybasket run --reference ref.jsonl --segment CR=cr.jsonl --segment ANTS=ants.jsonl \\
        --seed-keyword migrant --out results/

Verbs ``ingest``, ``keywords``, ``mine``, ``stats``, ``report`` and
``compare`` run single stages on top of the cache; ``run`` does everything.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, PipelineConfig, read_config_file
from .corpus import CorpusError
from .pipeline import Pipeline, PipelineError, run_pipeline

log = logging.getLogger("keybasket")

VERBS = ("ingest", "keywords", "mine", "stats", "report", "compare", "run")


def _segment(text: str) -> tuple[str, str]:
    name, sep, path = text.partition("=")
    if not sep or not name or not path:
        raise argparse.ArgumentTypeError(f"expected NAME=PATH, got {text!r}")
    return name, path


def _add_common(p: argparse.ArgumentParser) -> None:
    # every default is None so that config-file values survive unless a flag is given
    p.add_argument("--config", help="flat key = value config file; flags override it")
    p.add_argument("--format", choices=("vertical", "jsonl"))
    p.add_argument("--reference", help="reference corpus file ('-' for stdin)")
    p.add_argument("--segment", action="append", type=_segment, metavar="NAME=PATH",
                   help="target corpus segment (repeatable)")
    g = p.add_argument_group("keyness")
    g.add_argument("--min-freq", type=int, help="minimum lemma frequency in the text (default 3)")
    g.add_argument("--ll-threshold", type=float, help="minimum log-likelihood G2 (default 10.83)")
    g.add_argument("--din-threshold", type=float, help="DIN must exceed this (default 70)")
    g.add_argument("--min-keywords", type=int, help="keywords a text needs to be mined (default 15)")
    g.add_argument("--alphabetic-only", choices=("yes", "no"), help="only purely alphabetic lemmas (default yes)")
    g = p.add_argument_group("mining")
    g.add_argument("--min-support", type=float, help="default 0.003")
    g.add_argument("--min-confidence", type=float, help="default 0.4")
    g.add_argument("--max-len", type=int, help="maximum items per rule (default 4)")
    g = p.add_argument_group("report")
    g.add_argument("--seed-keyword", help="restrict statistics to rules mentioning this lemma")
    g.add_argument("--stoplist", help="function-word list for thematic concentration")
    g.add_argument("--tag-prefixes", help="comma-separated content-word tag prefixes (default N,A,V,D)")
    g.add_argument("--out", help="output directory")
    g.add_argument("--cache", help="cache directory (default $KEYBASKET_CACHE or OUT/.cache)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="keybasket", description="Keyword extraction and keyword market-basket analysis.")
    sub = parser.add_subparsers(dest="verb", required=True)
    helps = {
        "ingest": "parse inputs and cache the reference and segment frequency profiles",
        "keywords": "extract per-document keyword lists",
        "mine": "mine association rules; writes rules_<segment>.csv/json",
        "stats": "print per-segment statistics as tab-separated rows",
        "report": "write rules, summary.json and boxplot.csv",
        "compare": "write comparison.json for every pair of segments",
        "run": "the full pipeline",
    }
    for verb in VERBS:
        _add_common(sub.add_parser(verb, help=helps[verb]))
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    options, segments = {}, {}
    if args.config:
        options, segments = read_config_file(args.config)
    for name in ("format", "reference", "min-freq", "ll-threshold", "din-threshold", "min-keywords",
                 "alphabetic-only", "min-support", "min-confidence", "max-len", "seed-keyword",
                 "stoplist", "tag-prefixes", "out", "cache"):
        value = getattr(args, name.replace("-", "_"))
        if value is not None:
            options[name] = value
    if args.segment:
        # flags replace the config file's segment list wholesale
        segments = dict(args.segment)
    return PipelineConfig.from_options(options, segments)


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def print_stats(pipe: Pipeline, stream=None) -> None:
    stream = stream or sys.stdout
    cols = ("segment", "n_documents", "retained", "dropped", "rules", "focus_rules",
            "median_lift", "median_support", "lift_upper_fence", "outliers", "h_point", "tc")
    stream.write("\t".join(cols) + "\n")
    for seg in pipe.cfg.segments:
        rep = pipe.segment_report(seg)
        row = (
            seg, rep.n_documents, rep.summary.retained_count, rep.summary.dropped_count,
            len(rep.rules), len(rep.focus_rules),
            rep.lift.median if rep.lift else None,
            rep.support.median if rep.support else None,
            rep.lift.upper_fence if rep.lift else None,
            len(rep.outliers),
            rep.tc.h if rep.tc else None,
            rep.tc.tc if rep.tc else None,
        )
        stream.write("\t".join(_fmt(v) for v in row) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        pipe = Pipeline(cfg)
        if args.verb == "ingest":
            ref = pipe.reference_profile()
            print(f"reference\t{ref.total_tokens} tokens\t{len(ref)} lemmas")
            for seg in cfg.segments:
                prof = pipe.segment_profile(seg)
                print(f"{seg}\t{pipe.n_documents(seg)} documents\t{prof.total_tokens} tokens")
        elif args.verb == "keywords":
            for seg in cfg.segments:
                _, s = pipe.keyword_lists(seg)
                print(f"{seg}\tretained {s.retained_count}\tdropped {s.dropped_count}\t"
                      f"ratio {s.retention_ratio:.4f}")
        elif args.verb == "mine":
            for path in pipe.write_rules():
                print(path)
        elif args.verb == "stats":
            print_stats(pipe)
        elif args.verb == "report":
            for path in pipe.write_rules() + pipe.write_report():
                print(path)
        elif args.verb == "compare":
            if len(cfg.segments) < 2:
                raise PipelineError("compare needs at least two segments")
            print(pipe.write_comparison())
        elif args.verb == "run":
            run_pipeline(cfg)
            print(cfg.out)
    except (ConfigError, CorpusError, PipelineError, OSError, ValueError) as exc:
        print(f"keybasket: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
