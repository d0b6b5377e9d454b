"""Keyword extraction against a reference corpus and market-basket mining of keyword lists."""

from .corpus import Corpus, Document, FrequencyProfile, build_profile, is_alphabetic, parse_jsonl, parse_vertical
from .keyness import KeynessConfig, KeywordList, build_transactions, din, extract_keywords, log_likelihood
from .miner import (
    AssociationRule,
    MiningConfig,
    TransactionSet,
    filter_rules,
    frequent_itemsets,
    generate_rules,
    mine_rules,
    rule_measures,
    sort_rules,
    unique_items,
)
from .stats import boxplot_summary, h_point, thematic_concentration, wilcoxon_rank_sum

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Document", "FrequencyProfile", "build_profile", "is_alphabetic", "parse_jsonl", "parse_vertical",
    "KeynessConfig", "KeywordList", "build_transactions", "din", "extract_keywords", "log_likelihood",
    "AssociationRule", "MiningConfig", "TransactionSet", "filter_rules", "frequent_itemsets", "generate_rules",
    "mine_rules", "rule_measures", "sort_rules", "unique_items",
    "boxplot_summary", "h_point", "thematic_concentration", "wilcoxon_rank_sum",
]
