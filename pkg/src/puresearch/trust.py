"""Reputation and expectation over tiered, partially-trusted label sources.

Sources sit in tiers: tier 0 is the highest (the local user lives there) and
larger numbers are more subordinate.  A source's reputation in [0, 1] is its
rate of agreement with the consensus of the tiers above it; the expectation
of a (item, label) pair in [-1, 1] is the reputation-weighted average of the
values asserted at a tier, with any nonzero expectation from a higher tier
overriding everything below it.  The two definitions are mutually recursive
but well-founded: the reputation of a tier-t source consults expectations at
tier t-1 only, so tiers strictly decrease along any recursion path.

``reputation``/``expectation``/``build_trust_model`` memoize; the
``naive_*`` twins are deliberately unmemoized transcriptions of the same
definitions, kept as test oracles.  Both use the same summation order
(ascending source, item, label) and the same zero threshold, so a memoized
value equals its naive counterpart bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Expectations this close to zero are treated as zero in the "nonzero
# expectation" tests of both algorithms.  Equal-weight cancellations are
# exact in binary floating point; the epsilon only guards near-zero residue
# from unequal reputations, which must not trigger tier override.
EXPECTATION_ZERO_EPS = 1e-12


class UnknownSourceError(KeyError):
    """Reputation was asked for a source that has no tier."""


def _consensus_sign(e: float) -> int:
    if e > EXPECTATION_ZERO_EPS:
        return 1
    if e < -EXPECTATION_ZERO_EPS:
        return -1
    return 0


class AssertionSet:
    """All assertions under consideration, with each source's tier.

    ``assertions`` maps (source, item, label) to +1/-1; ``tiers`` maps every
    source (including ones with no assertions) to its tier.  Instances are
    immutable once built; derived indexes are precomputed here so that both
    the memoized engine and the naive oracles iterate in the same fixed
    order.
    """

    __slots__ = ("assertions", "tiers", "t_max", "item_label_pairs", "_by_source", "_at_tier")

    def __init__(self, assertions: dict[tuple[str, str, str], int], tiers: dict[str, int]):
        for (source, _, _), value in assertions.items():
            if value not in (1, -1):
                raise ValueError(f"assertion value must be 1 or -1, got {value!r}")
            if source not in tiers:
                raise ValueError(f"source {source!r} asserts but has no tier")
        for source, tier in tiers.items():
            if tier < 0:
                raise ValueError(f"source {source!r} has negative tier {tier}")
        self.assertions = dict(assertions)
        self.tiers = dict(tiers)
        self.t_max = max(tiers.values(), default=0)
        self.item_label_pairs: tuple[tuple[str, str], ...] = tuple(
            sorted({(item, label) for (_, item, label) in assertions})
        )

        by_source: dict[str, list[tuple[str, str, int]]] = {}
        at_tier: dict[tuple[int, str, str], list[tuple[str, int]]] = {}
        for (source, item, label) in sorted(assertions):
            value = assertions[(source, item, label)]
            by_source.setdefault(source, []).append((item, label, value))
            at_tier.setdefault((tiers[source], item, label), []).append((source, value))
        # (item, label) ascending within a source; source ascending within a tier cell
        self._by_source = {j: tuple(sorted(rows)) for j, rows in by_source.items()}
        self._at_tier = {k: tuple(sorted(rows)) for k, rows in at_tier.items()}

    def asserted_by(self, source: str) -> tuple[tuple[str, str, int], ...]:
        """(item, label, value) rows asserted by ``source``, ascending."""
        return self._by_source.get(source, ())

    def asserters_at(self, tier: int, item: str, label: str) -> tuple[tuple[str, int], ...]:
        """(source, value) rows for (item, label) from tier-``tier`` sources, ascending."""
        return self._at_tier.get((tier, item, label), ())


@dataclass(frozen=True)
class TrustModel:
    """Materialized reputation and expectation tables over one AssertionSet.

    Immutable; rebuild and swap wholesale after new assertions arrive.
    ``expectations`` holds every (item, label) pair present in the data at
    every tier 0..t_max; pairs nobody asserted are absent and read as 0.
    """

    reputations: dict[str, float] = field(default_factory=dict)
    expectations: dict[tuple[str, str, int], float] = field(default_factory=dict)
    t_max: int = 0

    def expectation_at(self, item: str, label: str, tier: int | None = None) -> float:
        """Expectation for (item, label) at ``tier`` (default: the lowest tier)."""
        if tier is None:
            tier = self.t_max
        return self.expectations.get((item, label, tier), 0.0)

    def reputation_of(self, source: str) -> float:
        return self.reputations.get(source, 0.0)


class _Engine:
    """Memoized evaluator; one instance per AssertionSet build."""

    def __init__(self, data: AssertionSet):
        self.data = data
        self._rep: dict[str, float] = {}
        self._exp: dict[tuple[str, str, int], float] = {}

    def reputation(self, j: str) -> float:
        got = self._rep.get(j)
        if got is not None:
            return got
        if j not in self.data.tiers:
            raise UnknownSourceError(j)
        t = self.data.tiers[j]
        if t == 0:
            r = 1.0
        else:
            n = 0  # accumulates |v - consensus|: 0 on agreement, 2 on disagreement
            d = 0
            for item, label, value in self.data.asserted_by(j):
                x = _consensus_sign(self.expectation(item, label, t - 1))
                if x == 0:
                    continue  # higher tiers are silent or deadlocked on this pair
                n += abs(value - x)
                d += 1
            r = 0.0 if d == 0 else max(1.0 - n / d, 0.0)
        self._rep[j] = r
        return r

    def expectation(self, item: str, label: str, t: int) -> float:
        if t < 0:
            return 0.0
        key = (item, label, t)
        got = self._exp.get(key)
        if got is not None:
            return got
        prev = self.expectation(item, label, t - 1)
        if abs(prev) > EXPECTATION_ZERO_EPS:
            e = prev  # a nonzero higher-tier expectation supersedes this tier
        else:
            n = 0.0
            d = 0.0
            for j, value in self.data.asserters_at(t, item, label):
                r = self.reputation(j)
                n += r * value
                d += r
            e = 0.0 if d == 0.0 else n / d
        self._exp[key] = e
        return e


def reputation(j: str, data: AssertionSet) -> float:
    """Trustworthiness of source ``j`` in [0, 1].

    Tier-0 sources are ground truth and score exactly 1.  Otherwise the
    score is max(1 - n/d, 0) where n/d is double the fraction of j's
    assertions that disagree with the sign of the next-higher-tier
    expectation; pairs where that expectation is zero are excluded.  A
    source with no includable pairs scores 0.
    """
    return _Engine(data).reputation(j)


def expectation(item: str, label: str, t: int, data: AssertionSet) -> float:
    """Expected applicability of ``label`` to ``item`` in [-1, 1], using tiers 0..t.

    1 means certainty the label applies, -1 certainty it does not, 0 no
    information (or an even deadlock, which is treated the same).
    """
    return _Engine(data).expectation(item, label, t)


def build_trust_model(data: AssertionSet) -> TrustModel:
    """Materialize reputations for all sources and expectations for all pairs.

    Iteration order is fixed (ascending ids) so the floating-point tables
    are bit-identical across runs on equal input.
    """
    eng = _Engine(data)
    reps = {j: eng.reputation(j) for j in sorted(data.tiers)}
    exps: dict[tuple[str, str, int], float] = {}
    for item, label in data.item_label_pairs:
        for t in range(data.t_max + 1):
            exps[(item, label, t)] = eng.expectation(item, label, t)
    return TrustModel(reputations=reps, expectations=exps, t_max=data.t_max)


# --- naive transcriptions (test oracles; exponential time, oracle scale only) ---


def naive_reputation(j: str, data: AssertionSet) -> float:
    """Unmemoized twin of :func:`reputation`; identical contract and values."""
    if j not in data.tiers:
        raise UnknownSourceError(j)
    t = data.tiers[j]
    if t == 0:
        return 1.0
    n = 0
    d = 0
    for item, label, value in data.asserted_by(j):
        x = _consensus_sign(naive_expectation(item, label, t - 1, data))
        if x == 0:
            continue
        n += abs(value - x)
        d += 1
    if d == 0:
        return 0.0
    return max(1.0 - n / d, 0.0)


def naive_expectation(item: str, label: str, t: int, data: AssertionSet) -> float:
    """Unmemoized twin of :func:`expectation`; identical contract and values."""
    if t < 0:
        return 0.0
    prev = naive_expectation(item, label, t - 1, data)
    if abs(prev) > EXPECTATION_ZERO_EPS:
        return prev
    n = 0.0
    d = 0.0
    for j, value in data.asserters_at(t, item, label):
        r = naive_reputation(j, data)
        n += r * value
        d += r
    if d == 0.0:
        return 0.0
    return n / d
