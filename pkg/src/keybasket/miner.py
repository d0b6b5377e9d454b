"""Apriori frequent-itemset mining and single-consequent association rules.

Transactions are keyword sets, one per document.  Item occurrence is kept
as an inverted index (item -> sorted transaction ids); for counting, each
posting list is packed into an integer bitmask so that the support of a
candidate is the popcount of an AND over its members.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import IO

__all__ = [
    "MinerError",
    "MiningConfig",
    "TransactionSet",
    "AssociationRule",
    "frequent_itemsets",
    "generate_rules",
    "mine_rules",
    "rule_measures",
    "filter_rules",
    "contains_item",
    "min_lift",
    "min_support",
    "min_count",
    "sort_rules",
    "rule_sort_key",
    "unique_items",
    "rules_to_csv",
    "rules_to_json",
    "rules_from_json",
]

Itemset = tuple[str, ...]


class MinerError(ValueError):
    pass


@dataclass(frozen=True)
class MiningConfig:
    min_support: float = 0.003
    min_confidence: float = 0.4
    max_rule_len: int = 4

    def __post_init__(self):
        if not 0 < self.min_support <= 1:
            raise MinerError("min_support must lie in (0, 1]")
        if not 0 < self.min_confidence <= 1:
            raise MinerError("min_confidence must lie in (0, 1]")
        if self.max_rule_len < 2:
            raise MinerError("max_rule_len must be >= 2")


@dataclass
class TransactionSet:
    doc_ids: list[str]
    transactions: list[frozenset[str]]
    item_index: dict[str, list[int]] = field(init=False, repr=False)
    _bits: dict[str, int] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        if len(self.doc_ids) != len(self.transactions):
            raise MinerError("doc_ids and transactions differ in length")
        self.transactions = [frozenset(t) for t in self.transactions]
        index: dict[str, list[int]] = defaultdict(list)
        for tid, items in enumerate(self.transactions):
            for item in items:
                index[item].append(tid)
        self.item_index = dict(index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Iterable[str]]]) -> "TransactionSet":
        doc_ids, transactions = [], []
        for doc_id, items in pairs:
            doc_ids.append(doc_id)
            transactions.append(frozenset(items))
        return cls(doc_ids, transactions)

    @classmethod
    def from_itemsets(cls, itemsets: Iterable[Iterable[str]]) -> "TransactionSet":
        return cls.from_pairs((str(i), items) for i, items in enumerate(itemsets))

    @classmethod
    def from_keyword_lists(cls, lists) -> "TransactionSet":
        return cls.from_pairs((kw.doc_id, kw.keywords) for kw in lists)

    @property
    def n_docs(self) -> int:
        return len(self.transactions)

    def count(self, itemset: Iterable[str]) -> int:
        """Transactions containing every item, by posting-list intersection."""
        items = sorted(set(itemset), key=lambda i: len(self.item_index.get(i, ())))
        if not items:
            return self.n_docs
        acc = set(self.item_index.get(items[0], ()))
        for item in items[1:]:
            if not acc:
                break
            acc.intersection_update(self.item_index.get(item, ()))
        return len(acc)

    def bits(self, item: str) -> int:
        mask = self._bits.get(item)
        if mask is None:
            buf = bytearray((self.n_docs + 7) // 8)
            for tid in self.item_index.get(item, ()):
                buf[tid >> 3] |= 1 << (tid & 7)
            mask = int.from_bytes(buf, "little")
            self._bits[item] = mask
        return mask


@dataclass(frozen=True)
class AssociationRule:
    lhs: Itemset
    rhs: str
    count: int
    lhs_count: int
    rhs_count: int
    n_docs: int
    support: float
    confidence: float
    lift: float

    @property
    def items(self) -> frozenset[str]:
        return frozenset(self.lhs) | {self.rhs}

    def to_dict(self) -> dict:
        return {
            "lhs": list(self.lhs),
            "rhs": self.rhs,
            "count": self.count,
            "lhs_count": self.lhs_count,
            "rhs_count": self.rhs_count,
            "n_docs": self.n_docs,
            "support": self.support,
            "confidence": self.confidence,
            "lift": self.lift,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AssociationRule":
        return cls(
            tuple(d["lhs"]), d["rhs"], int(d["count"]), int(d["lhs_count"]),
            int(d["rhs_count"]), int(d["n_docs"]),
            float(d["support"]), float(d["confidence"]), float(d["lift"]),
        )


def _min_count(min_sup: float, n: int) -> int:
    """Smallest count c >= 1 with c / n >= min_sup (same float test as support)."""
    c = max(1, math.ceil(min_sup * n))
    while c > 1 and (c - 1) / n >= min_sup:
        c -= 1
    while c / n < min_sup:
        c += 1
    return c


def frequent_itemsets(ts: TransactionSet, min_support: float, max_len: int) -> dict[Itemset, int]:
    """All itemsets of size 1..max_len whose support is at least ``min_support``.

    Level-wise Apriori: k-candidates are joined from frequent (k-1)-itemsets
    sharing a (k-2)-prefix and discarded unless every (k-1)-subset is
    frequent.  Keys are lexicographically sorted tuples.
    """
    if ts.n_docs == 0:
        raise MinerError("empty transaction set")
    if not 0 < min_support <= 1:
        raise MinerError("min_support must lie in (0, 1]")
    if max_len < 1:
        raise MinerError("max_len must be >= 1")

    n = ts.n_docs
    threshold = _min_count(min_support, n)
    result: dict[Itemset, int] = {}

    level: dict[Itemset, int] = {}
    for item in sorted(ts.item_index):
        c = len(ts.item_index[item])
        if c >= threshold:
            level[(item,)] = c
    result.update(level)
    masks: dict[Itemset, int] = {s: ts.bits(s[0]) for s in level}

    k = 2
    while level and k <= max_len:
        by_prefix: dict[Itemset, list[str]] = defaultdict(list)
        for itemset in level:  # already sorted
            by_prefix[itemset[:-1]].append(itemset[-1])

        next_level: dict[Itemset, int] = {}
        next_masks: dict[Itemset, int] = {}
        keep_masks = k < max_len
        for prefix, tails in by_prefix.items():
            for i, a in enumerate(tails):
                base = prefix + (a,)
                base_mask = masks[base]
                for b in tails[i + 1:]:
                    cand = base + (b,)
                    # the two subsets that drop a or b are base and prefix+(b,),
                    # both frequent by construction; check the rest
                    if k > 2 and not all(
                        cand[:j] + cand[j + 1:] in level for j in range(k - 2)
                    ):
                        continue
                    mask = base_mask & ts.bits(b)
                    c = mask.bit_count()
                    if c >= threshold:
                        next_level[cand] = c
                        if keep_masks:
                            next_masks[cand] = mask
        result.update(next_level)
        level, masks = next_level, next_masks
        k += 1
    return result


def rule_measures(joint_count: int, lhs_count: int, rhs_count: int, n_docs: int) -> tuple[float, float, float]:
    """(support, confidence, lift) from document counts."""
    if not (0 <= joint_count <= lhs_count <= n_docs and joint_count <= rhs_count <= n_docs):
        raise MinerError(
            f"inconsistent counts joint={joint_count} lhs={lhs_count} rhs={rhs_count} n={n_docs}"
        )
    if lhs_count == 0 or rhs_count == 0:
        raise MinerError("antecedent and consequent counts must be positive")
    support = joint_count / n_docs
    confidence = joint_count / lhs_count
    # integer numerator and denominator: equal ratios give identical floats
    lift = (joint_count * n_docs) / (lhs_count * rhs_count)
    return support, confidence, lift


def generate_rules(
    frequent: dict[Itemset, int],
    ts: TransactionSet | int,
    cfg: MiningConfig = MiningConfig(),
) -> list[AssociationRule]:
    """Every rule S - {r} -> r over frequent S (|S| >= 2) meeting min_confidence."""
    n = ts if isinstance(ts, int) else ts.n_docs
    rules = []
    for itemset, joint in frequent.items():
        size = len(itemset)
        if size < 2 or size > cfg.max_rule_len:
            continue
        for j, rhs in enumerate(itemset):
            lhs = itemset[:j] + itemset[j + 1:]
            try:
                lhs_count = frequent[lhs]
                rhs_count = frequent[(rhs,)]
            except KeyError as exc:
                raise MinerError(f"subset {exc.args[0]!r} of frequent itemset {itemset!r} missing") from None
            if joint / lhs_count < cfg.min_confidence:
                continue
            support, confidence, lift = rule_measures(joint, lhs_count, rhs_count, n)
            rules.append(AssociationRule(lhs, rhs, joint, lhs_count, rhs_count, n, support, confidence, lift))
    return sort_rules(rules)


def mine_rules(ts: TransactionSet, cfg: MiningConfig = MiningConfig()) -> list[AssociationRule]:
    frequent = frequent_itemsets(ts, cfg.min_support, cfg.max_rule_len)
    return generate_rules(frequent, ts, cfg)


# -- filtering and ordering -------------------------------------------------

RulePredicate = Callable[[AssociationRule], bool]


def contains_item(lemma: str) -> RulePredicate:
    return lambda r: r.rhs == lemma or lemma in r.lhs


def min_lift(x: float) -> RulePredicate:
    return lambda r: r.lift >= x


def min_support(x: float) -> RulePredicate:
    return lambda r: r.support >= x


def min_count(x: float) -> RulePredicate:
    return lambda r: r.count >= x


def filter_rules(rules: Iterable[AssociationRule], predicate: RulePredicate) -> list[AssociationRule]:
    return [r for r in rules if predicate(r)]


def rule_sort_key(rule: AssociationRule):
    return (-rule.lift, -rule.support, -rule.count, "+".join(rule.lhs), rule.rhs)


def sort_rules(rules: Iterable[AssociationRule]) -> list[AssociationRule]:
    """Descending lift, then support, then count, then lhs/rhs text."""
    return sorted(rules, key=rule_sort_key)


def rule_items(rules: Iterable[AssociationRule]) -> set[str]:
    items: set[str] = set()
    for r in rules:
        items.update(r.lhs)
        items.add(r.rhs)
    return items


def unique_items(rules_a: Iterable[AssociationRule], rules_b: Iterable[AssociationRule]) -> tuple[set[str], set[str]]:
    a, b = rule_items(rules_a), rule_items(rules_b)
    return a - b, b - a


# -- serialization ----------------------------------------------------------

CSV_HEADER = ("lhs", "rhs", "count", "support", "confidence", "lift")


def rules_to_csv(rules: Sequence[AssociationRule], stream: IO[str] | None = None) -> str:
    """CSV with ``+``-joined antecedents and 6 significant digits."""
    buf = stream if stream is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rules:
        writer.writerow([
            "+".join(sorted(r.lhs)), r.rhs, r.count,
            f"{r.support:.6g}", f"{r.confidence:.6g}", f"{r.lift:.6g}",
        ])
    return buf.getvalue() if stream is None else ""


def rules_to_json(rules: Sequence[AssociationRule]) -> str:
    return json.dumps([r.to_dict() for r in rules], ensure_ascii=False, indent=1)


def rules_from_json(text: str) -> list[AssociationRule]:
    return [AssociationRule.from_dict(d) for d in json.loads(text)]
