"""Shared generators and oracle helpers for the test suite."""

from __future__ import annotations

import random

from puresearch.trust import (
    AssertionSet,
    naive_expectation,
    naive_reputation,
)

# Fuzz-corpus caps: up to 4 tiers, 8 sources, 10 items, 5 labels,
# each (source, item, label) cell asserted with probability 0.3.
MAX_TIERS = 4
MAX_SOURCES = 8
MAX_ITEMS = 10
MAX_LABELS = 5
DENSITY = 0.3


def random_assertion_set(
    rng: random.Random,
    max_tiers: int = MAX_TIERS,
    max_sources: int = MAX_SOURCES,
    max_items: int = MAX_ITEMS,
    max_labels: int = MAX_LABELS,
    density: float = DENSITY,
) -> AssertionSet:
    """One random instance; tier-0 coverage is not guaranteed (cold start is legal)."""
    n_tiers = rng.randint(1, max_tiers)
    n_sources = rng.randint(1, max_sources)
    n_items = rng.randint(1, max_items)
    n_labels = rng.randint(1, max_labels)
    tiers = {f"s{n:02d}": rng.randrange(n_tiers) for n in range(n_sources)}
    items = [f"https://site{n}.example/" for n in range(n_items)]
    labels = [f"k{n}" for n in range(n_labels)]
    assertions: dict[tuple[str, str, str], int] = {}
    for source in tiers:
        for item in items:
            for label in labels:
                if rng.random() < density:
                    assertions[(source, item, label)] = rng.choice((1, -1))
    return AssertionSet(assertions, tiers)


def naive_tables(data: AssertionSet) -> tuple[dict[str, float], dict[tuple[str, str, int], float]]:
    """Full reputation/expectation tables from the unmemoized oracles."""
    reps = {j: naive_reputation(j, data) for j in sorted(data.tiers)}
    exps = {
        (item, label, t): naive_expectation(item, label, t, data)
        for item, label in data.item_label_pairs
        for t in range(data.t_max + 1)
    }
    return reps, exps


def without_source(data: AssertionSet, source: str) -> AssertionSet:
    """Copy of ``data`` with one source (and its assertions) removed."""
    return AssertionSet(
        {key: v for key, v in data.assertions.items() if key[0] != source},
        {j: t for j, t in data.tiers.items() if j != source},
    )
