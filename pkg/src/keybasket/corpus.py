"""Lemmatized corpus readers and frequency profiles.

Two input formats are understood:

* vertical: ``<doc id="..." segment="...">`` blocks with one token per line,
  ``form<TAB>lemma[<TAB>tag]``; any other ``<...>`` line is structural markup
  and is skipped.
* JSON Lines: ``{"id": ..., "lemmas": [...], "segment": ...}`` per line.
"""

from __future__ import annotations

import io
import json
import re
import sys
import unicodedata
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

__all__ = [
    "CorpusError",
    "Document",
    "Corpus",
    "FrequencyProfile",
    "parse_vertical",
    "parse_jsonl",
    "load_corpus",
    "write_jsonl",
    "build_profile",
    "profile_from_corpus",
    "is_alphabetic",
]

DEFAULT_SEGMENT = "default"

_DOC_OPEN = re.compile(r"^<doc(\s[^>]*)?>\s*$")
_DOC_CLOSE = re.compile(r"^</doc>\s*$")
_ATTR = re.compile(r'([\w:-]+)="([^"]*)"')


class CorpusError(ValueError):
    """Raised for malformed corpus input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Document:
    id: str
    segment: str
    lemmas: tuple[str, ...]
    # lemma -> first tag seen; None when the source carried no tag column
    tags: Mapping[str, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be non-empty")
        if not isinstance(self.lemmas, tuple):
            object.__setattr__(self, "lemmas", tuple(self.lemmas))

    @property
    def token_count(self) -> int:
        return len(self.lemmas)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = ()

    def __post_init__(self):
        if not isinstance(self.documents, tuple):
            object.__setattr__(self, "documents", tuple(self.documents))
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def segments(self) -> list[str]:
        return sorted({doc.segment for doc in self.documents})

    def by_segment(self, segment: str) -> "Corpus":
        return Corpus(tuple(d for d in self.documents if d.segment == segment))

    @property
    def has_tags(self) -> bool:
        return bool(self.documents) and all(d.tags is not None for d in self.documents)


@dataclass
class FrequencyProfile:
    """Lemma counts plus the token total they were drawn from."""

    counts: dict[str, int] = field(default_factory=dict)
    total_tokens: int = 0
    pos: dict[str, str] | None = None

    def __len__(self) -> int:
        return len(self.counts)

    def get(self, lemma: str) -> int:
        return self.counts.get(lemma, 0)

    def ranked(self) -> list[tuple[str, int]]:
        """Lemmas by descending frequency; ties broken lexicographically."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def to_dict(self) -> dict:
        out = {"total_tokens": self.total_tokens, "counts": dict(sorted(self.counts.items()))}
        if self.pos is not None:
            out["pos"] = dict(sorted(self.pos.items()))
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "FrequencyProfile":
        pos = data.get("pos")
        return cls(
            counts={k: int(v) for k, v in data["counts"].items()},
            total_tokens=int(data["total_tokens"]),
            pos=dict(pos) if pos is not None else None,
        )


def _lines(stream: IO) -> Iterable[str]:
    for raw in stream:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw.rstrip("\r\n")


def parse_vertical(stream: IO) -> Corpus:
    """Parse a vertical-format stream (bytes or text) into a Corpus."""
    docs: list[Document] = []
    seen: set[str] = set()
    current: dict | None = None

    for lineno, line in enumerate(_lines(stream), start=1):
        if not line.strip():
            continue
        if line.startswith("<"):
            if _DOC_OPEN.match(line):
                if current is not None:
                    raise CorpusError("nested <doc> tag", lineno)
                attrs = dict(_ATTR.findall(line))
                doc_id = attrs.get("id")
                if not doc_id:
                    raise CorpusError("<doc> tag without id attribute", lineno)
                if doc_id in seen:
                    raise CorpusError(f"duplicate document id {doc_id!r}", lineno)
                seen.add(doc_id)
                current = {
                    "id": doc_id,
                    "segment": attrs.get("segment", DEFAULT_SEGMENT),
                    "lemmas": [],
                    "tags": {},
                    "tagged": None,
                }
            elif _DOC_CLOSE.match(line):
                if current is None:
                    raise CorpusError("</doc> without matching <doc>", lineno)
                docs.append(_finish(current))
                current = None
            # any other markup (<s>, <p>, <g/>...) is ignored
            continue

        fields = line.split("\t")
        if len(fields) < 2:
            raise CorpusError("token line needs at least form and lemma columns", lineno)
        if current is None:
            raise CorpusError("token line outside of <doc>", lineno)
        lemma = fields[1]
        if not lemma:
            raise CorpusError("empty lemma", lineno)
        has_tag = len(fields) >= 3 and fields[2] != ""
        if current["tagged"] is None:
            current["tagged"] = has_tag
        elif current["tagged"] != has_tag:
            current["tagged"] = False
        current["lemmas"].append(lemma)
        if has_tag:
            current["tags"].setdefault(lemma, fields[2])

    if current is not None:
        raise CorpusError(f"unterminated <doc id={current['id']!r}> at end of input")
    return Corpus(tuple(docs))


def _finish(state: dict) -> Document:
    tags = state["tags"] if state["tagged"] else None
    return Document(state["id"], state["segment"], tuple(state["lemmas"]), tags)


def parse_jsonl(stream: IO) -> Corpus:
    """Parse one JSON document object per line."""
    docs: list[Document] = []
    seen: set[str] = set()
    for lineno, line in enumerate(_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict):
            raise CorpusError("expected a JSON object", lineno)
        for key in ("id", "lemmas"):
            if key not in obj:
                raise CorpusError(f"missing required key {key!r}", lineno)
        doc_id, lemmas = obj["id"], obj["lemmas"]
        if not isinstance(doc_id, str) or not doc_id:
            raise CorpusError("'id' must be a non-empty string", lineno)
        if not isinstance(lemmas, list) or not all(isinstance(x, str) for x in lemmas):
            raise CorpusError("'lemmas' must be an array of strings", lineno)
        segment = obj.get("segment", DEFAULT_SEGMENT)
        if not isinstance(segment, str):
            raise CorpusError("'segment' must be a string", lineno)
        if doc_id in seen:
            raise CorpusError(f"duplicate document id {doc_id!r}", lineno)
        seen.add(doc_id)
        tags = obj.get("tags")
        docs.append(Document(doc_id, segment, tuple(lemmas), dict(tags) if tags else None))
    return Corpus(tuple(docs))


PARSERS = {"vertical": parse_vertical, "jsonl": parse_jsonl}


def load_corpus(path: str | Path, fmt: str, segment: str | None = None) -> Corpus:
    """Read a corpus file ("-" for stdin).

    If ``segment`` is given it overrides whatever segment labels the file
    carries, which is how ``--segment NAME=PATH`` inputs are labelled.
    """
    try:
        parser = PARSERS[fmt]
    except KeyError:
        raise ValueError(f"unknown corpus format {fmt!r}") from None
    if str(path) == "-":
        corpus = parser(sys.stdin.buffer)
    else:
        with open(path, "rb") as fh:
            corpus = parser(fh)
    if segment is not None:
        corpus = Corpus(tuple(Document(d.id, segment, d.lemmas, d.tags) for d in corpus))
    return corpus


def write_jsonl(corpus: Corpus, stream: IO[str]) -> None:
    for doc in corpus:
        obj = {"id": doc.id, "segment": doc.segment, "lemmas": list(doc.lemmas)}
        if doc.tags is not None:
            obj["tags"] = dict(doc.tags)
        stream.write(json.dumps(obj, ensure_ascii=False) + "\n")


def corpus_to_jsonl(corpus: Corpus) -> str:
    buf = io.StringIO()
    write_jsonl(corpus, buf)
    return buf.getvalue()


def build_profile(lemma_sequences: Iterable[Iterable[str]]) -> FrequencyProfile:
    counts: Counter[str] = Counter()
    for seq in lemma_sequences:
        counts.update(seq)
    return FrequencyProfile(dict(counts), sum(counts.values()))


def profile_from_corpus(corpus: Corpus) -> FrequencyProfile:
    """Profile over every lemma of the corpus, with POS tags when all docs carry them."""
    profile = build_profile(doc.lemmas for doc in corpus)
    if corpus.has_tags:
        pos: dict[str, str] = {}
        for doc in corpus:
            for lemma, tag in doc.tags.items():
                pos.setdefault(lemma, tag)
        profile.pos = pos
    return profile


def is_alphabetic(lemma: str) -> bool:
    """True iff every character is a Unicode letter (category L*).

    The check runs on the NFC form so that decomposed diacritics
    (``z`` + combining caron) count as the letter they compose to.
    """
    composed = unicodedata.normalize("NFC", lemma)
    return bool(composed) and all(unicodedata.category(ch).startswith("L") for ch in composed)
