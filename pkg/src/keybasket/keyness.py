"""Per-document keyword extraction against a reference corpus.

A lemma is a keyword of a document when it is frequent enough in the
document, is significantly overrepresented relative to the reference
corpus (log-likelihood G2) and has a large effect size (DIN).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import IO, Iterable

from .corpus import Corpus, Document, FrequencyProfile, is_alphabetic

__all__ = [
    "KeynessError",
    "KeynessConfig",
    "KeywordRecord",
    "KeywordList",
    "TransactionSummary",
    "log_likelihood",
    "din",
    "ipm",
    "extract_keywords",
    "build_transactions",
    "write_keyword_lists",
    "read_keyword_lists",
]


class KeynessError(ValueError):
    pass


@dataclass(frozen=True)
class KeynessConfig:
    min_target_freq: int = 3
    ll_threshold: float = 10.83
    din_threshold: float = 70.0
    min_keywords_per_text: int = 15
    alphabetic_only: bool = True

    def __post_init__(self):
        for name in ("min_target_freq", "ll_threshold", "din_threshold"):
            if getattr(self, name) < 0:
                raise KeynessError(f"{name} must be >= 0")
        if self.min_keywords_per_text < 1:
            raise KeynessError("min_keywords_per_text must be >= 1")


@dataclass(frozen=True)
class KeywordRecord:
    lemma: str
    freq_target: int
    freq_ref: int
    rel_freq_target: float
    rel_freq_ref: float
    ll: float
    din: float


@dataclass
class KeywordList:
    doc_id: str
    segment: str
    records: list[KeywordRecord] = field(default_factory=list)

    @property
    def keywords(self) -> frozenset[str]:
        return frozenset(r.lemma for r in self.records)

    def __len__(self) -> int:
        return len(self.records)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "segment": self.segment,
            "keywords": sorted(r.lemma for r in self.records),
            "records": [asdict(r) for r in self.records],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KeywordList":
        records = [KeywordRecord(**r) for r in data.get("records", [])]
        if not records:
            # a bare transaction without scores
            records = [KeywordRecord(k, 0, 0, 0.0, 0.0, 0.0, 0.0) for k in data["keywords"]]
        return cls(data["doc_id"], data.get("segment", "default"), records)


@dataclass(frozen=True)
class TransactionSummary:
    retained_count: int
    dropped_count: int

    @property
    def total(self) -> int:
        return self.retained_count + self.dropped_count

    @property
    def retention_ratio(self) -> float:
        return self.retained_count / self.total if self.total else 0.0


def ipm(count: int, total: int) -> float:
    """Instances per million."""
    return 1e6 * count / total


def log_likelihood(k_t: int, n_t: int, k_r: int, n_r: int) -> float:
    """Dunning's G2 for a 2x2 table (target vs reference, word vs rest).

    Each cell contributes ``O * ln(O / E)`` with ``0 * ln 0 = 0``.  The
    ratio is evaluated as ``log1p((O*N - R*C) / (R*C))`` with the
    numerator in exact integer arithmetic, so the large "rest" cells of a
    big reference corpus do not lose precision.
    """
    if n_t <= 0 or n_r <= 0:
        raise KeynessError("corpus totals must be positive")
    if not (0 <= k_t <= n_t and 0 <= k_r <= n_r):
        raise KeynessError("counts must lie within [0, total]")
    if k_t + k_r == 0:
        raise KeynessError("word absent from both corpora")
    if k_t * n_r == k_r * n_t:
        return 0.0

    n = n_t + n_r
    word = k_t + k_r
    rest = n - word
    cells = (
        (k_t, n_t, word),
        (n_t - k_t, n_t, rest),
        (k_r, n_r, word),
        (n_r - k_r, n_r, rest),
    )
    g2 = 0.0
    for observed, row, col in cells:
        if observed == 0:
            continue
        expected_num = row * col  # E = row * col / n
        g2 += observed * math.log1p((observed * n - expected_num) / expected_num)
    return max(0.0, 2.0 * g2)


def din(rel_t: float, rel_r: float) -> float:
    """Difference index, 100 * (t - r) / (t + r); ranges over [-100, 100]."""
    if rel_t < 0 or rel_r < 0:
        raise KeynessError("relative frequencies must be non-negative")
    if rel_t + rel_r <= 0:
        raise KeynessError("DIN undefined when both relative frequencies are zero")
    # divide first: the ratio stays within [-1, 1] after rounding
    return 100.0 * ((rel_t - rel_r) / (rel_t + rel_r))


def score(lemma: str, k_t: int, n_t: int, ref: FrequencyProfile) -> KeywordRecord:
    k_r = ref.get(lemma)
    rel_t = ipm(k_t, n_t)
    rel_r = ipm(k_r, ref.total_tokens)
    return KeywordRecord(
        lemma=lemma,
        freq_target=k_t,
        freq_ref=k_r,
        rel_freq_target=rel_t,
        rel_freq_ref=rel_r,
        ll=log_likelihood(k_t, n_t, k_r, ref.total_tokens),
        din=din(rel_t, rel_r),
    )


def passes(record: KeywordRecord, cfg: KeynessConfig) -> bool:
    """All keyword predicates; ll is inclusive, DIN strict."""
    return (
        record.freq_target >= cfg.min_target_freq
        and (not cfg.alphabetic_only or is_alphabetic(record.lemma))
        and record.ll >= cfg.ll_threshold
        and record.din > cfg.din_threshold
    )


def extract_keywords(doc: Document, ref: FrequencyProfile, cfg: KeynessConfig = KeynessConfig()) -> KeywordList:
    if doc.token_count == 0:
        raise KeynessError(f"document {doc.id!r} is empty")
    if ref.total_tokens <= 0:
        raise KeynessError("reference profile is empty")

    n_t = doc.token_count
    records = []
    for lemma, k_t in sorted(Counter(doc.lemmas).items()):
        # cheap filters first; they never touch the totals
        if k_t < cfg.min_target_freq:
            continue
        if cfg.alphabetic_only and not is_alphabetic(lemma):
            continue
        rec = score(lemma, k_t, n_t, ref)
        if passes(rec, cfg):
            records.append(rec)
    return KeywordList(doc.id, doc.segment, records)


def build_transactions(
    corpus: Corpus | Iterable[Document],
    ref: FrequencyProfile,
    cfg: KeynessConfig = KeynessConfig(),
) -> tuple[list[KeywordList], TransactionSummary]:
    """Keyword lists for every document long enough to be a transaction.

    Lists shorter than ``cfg.min_keywords_per_text`` are dropped.  The
    retained lists come back ordered by document id.
    """
    kept: list[KeywordList] = []
    dropped = 0
    for doc in corpus:
        kw = extract_keywords(doc, ref, cfg)
        if len(kw) >= cfg.min_keywords_per_text:
            kept.append(kw)
        else:
            dropped += 1
    kept.sort(key=lambda k: k.doc_id)
    return kept, TransactionSummary(len(kept), dropped)


def write_keyword_lists(lists: Iterable[KeywordList], stream: IO[str]) -> None:
    for kw in lists:
        stream.write(json.dumps(kw.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def read_keyword_lists(stream: IO[str]) -> list[KeywordList]:
    out = []
    for line in stream:
        if line.strip():
            out.append(KeywordList.from_dict(json.loads(line)))
    return out
