"""Pipeline configuration and the flat ``key = value`` config file format.

Keys may carry dotted section prefixes (``keyness.min-freq = 3``); only the
last component matters and it must equal a command-line flag name without
the leading dashes.  ``segment.NAME = PATH`` declares a segment.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .keyness import KeynessConfig
from .miner import MiningConfig
from .stats import DEFAULT_CONTENT_TAG_PREFIXES

__all__ = ["ConfigError", "PipelineConfig", "read_config_file", "CACHE_ENV", "OPTION_NAMES"]

CACHE_ENV = "KEYBASKET_CACHE"

# flag name -> value parser
OPTION_NAMES = {
    "format": str,
    "reference": str,
    "min-freq": int,
    "ll-threshold": float,
    "din-threshold": float,
    "min-keywords": int,
    "alphabetic-only": "bool",
    "min-support": float,
    "min-confidence": float,
    "max-len": int,
    "seed-keyword": str,
    "stoplist": str,
    "tag-prefixes": str,
    "out": str,
    "cache": str,
}


class ConfigError(ValueError):
    pass


def parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def read_config_file(path: str | Path) -> tuple[dict[str, str], dict[str, str]]:
    """Return (options, segments) from a config file; values stay strings."""
    options: dict[str, str] = {}
    segments: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(("#", ";")):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            parts = key.split(".")
            if parts[0] == "segment" and len(parts) == 2:
                segments[parts[1]] = value
                continue
            name = parts[-1].replace("_", "-")
            if name not in OPTION_NAMES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            options[name] = value
    return options, segments


@dataclass
class PipelineConfig:
    reference: str
    segments: dict[str, str]
    format: str = "jsonl"
    keyness: KeynessConfig = field(default_factory=KeynessConfig)
    mining: MiningConfig = field(default_factory=MiningConfig)
    seed_keyword: str | None = None
    stoplist: str | None = None
    tag_prefixes: tuple[str, ...] = DEFAULT_CONTENT_TAG_PREFIXES
    out: str = "keybasket-out"
    cache: str | None = None

    def __post_init__(self):
        if self.format not in ("vertical", "jsonl"):
            raise ConfigError(f"unknown format {self.format!r}")
        for name in self.segments:
            if not name or any(c in name for c in "/\\="):
                raise ConfigError(f"invalid segment name {name!r}")

    @property
    def cache_dir(self) -> Path:
        if self.cache:
            return Path(self.cache)
        env = os.environ.get(CACHE_ENV)
        if env:
            return Path(env)
        return Path(self.out) / ".cache"

    def analysis_settings(self) -> dict:
        """Settings that change reported numbers; used for comparability checks."""
        return {
            "keyness": asdict(self.keyness),
            "mining": asdict(self.mining),
            "seed_keyword": self.seed_keyword,
        }

    @classmethod
    def from_options(cls, options: dict, segments: dict[str, str]) -> "PipelineConfig":
        """Build from flag-name keyed options (strings or already typed values)."""
        def get(name, default=None):
            value = options.get(name)
            if value is None:
                return default
            kind = OPTION_NAMES[name]
            if kind == "bool":
                return value if isinstance(value, bool) else parse_bool(value)
            try:
                return kind(value)
            except ValueError:
                raise ConfigError(f"bad value for {name}: {value!r}") from None

        if not get("reference"):
            raise ConfigError("a reference corpus is required (--reference)")
        if not segments:
            raise ConfigError("at least one --segment NAME=PATH is required")
        base_k, base_m = KeynessConfig(), MiningConfig()
        keyness = KeynessConfig(
            min_target_freq=get("min-freq", base_k.min_target_freq),
            ll_threshold=get("ll-threshold", base_k.ll_threshold),
            din_threshold=get("din-threshold", base_k.din_threshold),
            min_keywords_per_text=get("min-keywords", base_k.min_keywords_per_text),
            alphabetic_only=get("alphabetic-only", base_k.alphabetic_only),
        )
        mining = MiningConfig(
            min_support=get("min-support", base_m.min_support),
            min_confidence=get("min-confidence", base_m.min_confidence),
            max_rule_len=get("max-len", base_m.max_rule_len),
        )
        prefixes = get("tag-prefixes")
        return cls(
            reference=get("reference"),
            segments=dict(segments),
            format=get("format", "jsonl"),
            keyness=keyness,
            mining=mining,
            seed_keyword=get("seed-keyword") or None,
            stoplist=get("stoplist") or None,
            tag_prefixes=tuple(p.strip() for p in prefixes.split(",") if p.strip()) if prefixes else DEFAULT_CONTENT_TAG_PREFIXES,
            out=get("out", "keybasket-out"),
            cache=get("cache"),
        )
