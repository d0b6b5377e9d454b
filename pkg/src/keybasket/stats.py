"""Summary statistics used to compare rule sets and corpora."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .corpus import FrequencyProfile

__all__ = [
    "StatsError",
    "BoxplotSummary",
    "ThematicConcentration",
    "RankSumResult",
    "quantile",
    "boxplot_summary",
    "h_point",
    "thematic_concentration",
    "tag_predicate",
    "stoplist_predicate",
    "DEFAULT_CONTENT_TAG_PREFIXES",
    "midranks",
    "wilcoxon_rank_sum",
    "EXACT_MAX_N",
]

# nouns, adjectives, verbs, adverbs in the positional tagset of Czech corpora
DEFAULT_CONTENT_TAG_PREFIXES = ("N", "A", "V", "D")
EXACT_MAX_N = 16


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class BoxplotSummary:
    n: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    iqr: float
    upper_fence: float
    lower_fence: float
    outliers: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("n", "min", "q1", "median", "q3", "max", "iqr", "upper_fence", "lower_fence")}
        d["n_outliers"] = len(self.outliers)
        d["outliers"] = list(self.outliers)
        return d


def quantile(sorted_values: Sequence[float], q: float) -> float:
    """Linear interpolation between order statistics at position (n - 1) * q."""
    pos = (len(sorted_values) - 1) * q
    lo = math.floor(pos)
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = pos - lo
    a, b = sorted_values[lo], sorted_values[hi]
    return a + (b - a) * frac if frac else float(a)


def boxplot_summary(values: Iterable[float]) -> BoxplotSummary:
    v = sorted(float(x) for x in values)
    if not v:
        raise StatsError("boxplot of an empty sample")
    q1, med, q3 = quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75)
    iqr = q3 - q1
    upper, lower = q3 + 1.5 * iqr, q1 - 1.5 * iqr
    outliers = tuple(x for x in v if x > upper or x < lower)
    return BoxplotSummary(len(v), v[0], q1, med, q3, v[-1], iqr, upper, lower, outliers)


def h_point(freqs: Sequence[int]) -> float:
    """Rank at which frequency meets rank in a descending frequency list.

    Returns r when f(r) == r.  Otherwise the crossing between the last
    rank i with f(i) > i and j = i + 1 (f(j) < j) is interpolated as
    (f(i)*j - f(j)*i) / (j - i + f(i) - f(j)).  A list that never reaches
    the diagonal gives its own length.
    """
    if not freqs:
        raise StatsError("h-point of an empty frequency list")
    for a, b in zip(freqs, freqs[1:]):
        if b > a:
            raise StatsError("frequency list must be sorted in descending order")
    if freqs[-1] < 1:
        raise StatsError("frequencies must be >= 1")

    for idx, f in enumerate(freqs):
        r = idx + 1
        if f == r:
            return float(r)
        if f < r:
            # idx >= 1 here because f(1) >= 1
            i, fi = r - 1, freqs[idx - 1]
            j, fj = r, f
            return (fi * j - fj * i) / (j - i + fi - fj)
    return float(len(freqs))


@dataclass(frozen=True)
class ThematicConcentration:
    h: float
    tc: float
    contributing: tuple[tuple[str, int, int], ...] = ()
    # uncapped sum; exceeds 1 only when the top ranks tie and h is fractional
    raw: float | None = None

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "tc": self.tc,
            "tc_raw": self.tc if self.raw is None else self.raw,
            "contributing": [list(c) for c in self.contributing],
        }


def thematic_concentration(profile: FrequencyProfile, autosemantic: Callable[[str], bool]) -> ThematicConcentration:
    """Thematic concentration from content words ranked above the h-point.

    tc = sum over content words with rank r < h of
    2 * (h - r) * f(r) / (h * (h - 1) * f(1)); zero when h <= 1.

    With a fractional h the sum can pass 1 by at most d(1 - d) / (h(h - 1)),
    d = h - floor(h), if every rank above h ties with f(1) (e.g. [2, 1]);
    ``tc`` is capped at 1 and the uncapped value kept in ``raw``.
    """
    if not profile.counts:
        raise StatsError("thematic concentration of an empty profile")
    ranked = profile.ranked()
    freqs = [f for _, f in ranked]
    h = h_point(freqs)
    if h <= 1:
        return ThematicConcentration(h, 0.0, (), 0.0)

    f1 = freqs[0]
    norm = h * (h - 1) * f1
    total = 0.0
    contributing = []
    for r, (lemma, f) in enumerate(ranked[: math.floor(h)], start=1):
        if r >= h or not autosemantic(lemma):
            continue
        total += 2 * (h - r) * f / norm
        contributing.append((lemma, r, f))
    return ThematicConcentration(h, min(1.0, total), tuple(contributing), total)


def tag_predicate(pos: Mapping[str, str], prefixes: Iterable[str] = DEFAULT_CONTENT_TAG_PREFIXES) -> Callable[[str], bool]:
    prefixes = tuple(prefixes)

    def is_content(lemma: str) -> bool:
        tag = pos.get(lemma)
        return tag is not None and tag.startswith(prefixes)

    return is_content


def stoplist_predicate(stopwords: Iterable[str]) -> Callable[[str], bool]:
    stop = frozenset(stopwords)
    return lambda lemma: lemma not in stop


# -- rank-sum test ----------------------------------------------------------


@dataclass(frozen=True)
class RankSumResult:
    u: float
    p_two_sided: float
    n1: int
    n2: int
    method: str

    def to_dict(self) -> dict:
        return {"u": self.u, "p_two_sided": self.p_two_sided, "n1": self.n1, "n2": self.n2, "method": self.method}


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with tied values sharing the mean of their positions."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _u_frequencies(n1: int, n2: int) -> tuple[int, ...]:
    """Number of rank arrangements giving each U = 0..n1*n2 (no ties)."""
    if n1 == 0 or n2 == 0:
        return (1,)
    # U counts pairs (x, y) with x > y; the largest pooled value is either
    # an x (adds n2 to U) or a y (adds nothing)
    with_x = _u_frequencies(n1 - 1, n2)
    with_y = _u_frequencies(n1, n2 - 1)
    out = [0] * (n1 * n2 + 1)
    for u, c in enumerate(with_x):
        out[u + n2] += c
    for u, c in enumerate(with_y):
        out[u] += c
    return tuple(out)


def _exact_p(u: int, n1: int, n2: int) -> float:
    freq = _u_frequencies(n1, n2)
    total = math.comb(n1 + n2, n1)
    lower = sum(freq[: u + 1])
    upper = sum(freq[u:])
    return min(1.0, 2 * min(lower, upper) / total)


def _normal_p(u: float, n1: int, n2: int, pooled: Sequence[float]) -> float:
    n = n1 + n2
    tie_term = sum(t**3 - t for t in Counter(pooled).values())
    var = n1 * n2 / 12 * ((n + 1) - (tie_term / (n * (n - 1)) if n > 1 else 0.0))
    if var <= 0:
        return 1.0
    z = max(0.0, abs(u - n1 * n2 / 2) - 0.5) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2)))


def wilcoxon_rank_sum(xs: Sequence[float], ys: Sequence[float], method: str = "auto") -> RankSumResult:
    """Wilcoxon rank-sum (Mann-Whitney) test, two-sided.

    ``u`` is the statistic of the first sample: R1 - n1(n1 + 1)/2 over
    midranks.  ``method="auto"`` picks the exact null distribution for
    tie-free samples with n1 + n2 <= 16 and the tie- and
    continuity-corrected normal approximation otherwise.
    """
    xs, ys = list(xs), list(ys)
    n1, n2 = len(xs), len(ys)
    if n1 == 0 or n2 == 0:
        raise StatsError("rank-sum test needs two non-empty samples")
    pooled = xs + ys
    ranks = midranks(pooled)
    u = sum(ranks[:n1]) - n1 * (n1 + 1) / 2
    has_ties = len(set(pooled)) < len(pooled)

    if method == "auto":
        method = "exact" if (n1 + n2 <= EXACT_MAX_N and not has_ties) else "normal"
    if method == "exact":
        if has_ties:
            raise StatsError("exact p-values are only available for tie-free samples")
        p = _exact_p(round(u), n1, n2)
        label = "exact"
    elif method == "normal":
        p = _normal_p(u, n1, n2, pooled)
        label = "normal-approximation"
    else:
        raise StatsError(f"unknown method {method!r}")
    return RankSumResult(u, p, n1, n2, label)
