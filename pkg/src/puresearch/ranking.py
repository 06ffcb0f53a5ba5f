"""Policy-driven score adjustment and re-ranking of upstream search results.

The user's policy marks labels as favored or disfavored.  For each policy
label the item's expectation is turned into a favorability q (negated for
disfavored labels) and folded into a running factor r: a favorable
assessment multiplies by 1 + q, an unfavorable one by 1 + q/(1 - q), so an
unfavorable assessment exactly cancels a favorable one of equal magnitude.
Each label contributes a factor in [1/2, 2]; r scales the upstream
relevance score and the adjusted score is the re-ranking key.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gateway import UpstreamResult
from .labels import canonicalize_url, LabelError, validate_label_name
from .trust import TrustModel

FAVORED = "favored"
DISFAVORED = "disfavored"
STANCES = frozenset((FAVORED, DISFAVORED))


@dataclass(frozen=True)
class Policy:
    """Ordered per-label stances; iteration follows insertion order."""

    entries: dict[str, str]

    def __post_init__(self) -> None:
        for label, stance in self.entries.items():
            validate_label_name(label)
            if stance not in STANCES:
                raise ValueError(f"stance for {label!r} must be favored or disfavored, got {stance!r}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.entries)


@dataclass(frozen=True)
class ScoredResult:
    """An upstream result with its adjustment factor and adjusted score."""

    item: str  # canonical URL (or the raw URL when it cannot be canonicalized)
    title: str
    snippet: str
    upstream_score: float
    adjustment_factor: float
    adjusted_score: float


def label_multiplier(q: float) -> float:
    """Factor contributed by one policy label at favorability q in [-1, 1].

    1 + q for a favorable assessment; 1 + q/(1 - q) = 1/(1 - q) for an
    unfavorable one.  Monotone in q, equal to 1 at q = 0, and bounded to
    [1/2, 2] over the favorability range.
    """
    if q >= 0:
        return 1.0 + q
    return 1.0 + q / (1.0 - q)


def adjustment_factor(item: str, policy: Policy, model: TrustModel) -> float:
    """Multiplicative score correction for ``item`` under ``policy``.

    ``item`` must be a canonical URL; expectations are read at the model's
    lowest tier.  Empty policy gives 1.
    """
    r = 1.0
    for label, stance in policy.entries.items():
        e = model.expectation_at(item, label)
        q = e if stance == FAVORED else -e
        r *= label_multiplier(q)
    return r


def rerank(results: list[UpstreamResult], policy: Policy, model: TrustModel) -> list[ScoredResult]:
    """Order upstream results by adjusted score, descending.

    The output is a permutation of the input.  Ties keep upstream order
    (the upstream engine's relevance judgment is the only remaining
    signal), so an empty policy returns the input order unchanged.
    Results missing a score inherit the score of the last scored result
    above them (1.0 if none), which keeps an unscored tail in relative
    order.
    """
    scored: list[ScoredResult] = []
    carry = 1.0
    for res in results:
        if res.score is not None:
            carry = res.score
        try:
            item = canonicalize_url(res.url)
        except LabelError:
            item = res.url  # unkeyable URL: no expectations can match, factor stays 1
        factor = adjustment_factor(item, policy, model)
        scored.append(
            ScoredResult(
                item=item,
                title=res.title,
                snippet=res.snippet,
                upstream_score=carry,
                adjustment_factor=factor,
                adjusted_score=carry * factor,
            )
        )
    return sorted(scored, key=lambda s: s.adjusted_score, reverse=True)
