"""Sampling strategies: random subsets of events, objects, or object types,
and partitioning the log into connected-event components.

Two events are connected when their omaps share an object; the partition is
the set of equivalence classes of the transitive closure of that relation.
Events without objects form singleton blocks so the blocks always cover the
whole event set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from sklearn.base import BaseEstimator, TransformerMixin

from .model import OcelLog, check_log, project_events, project_object_types, project_objects


class Strategy(str, Enum):
    EVENTS = "events"
    OBJECTS = "objects"
    OBJECT_TYPES = "types"
    CONNECTED = "connected"


@dataclass(frozen=True)
class SampleSpec:
    """A sampling request: strategy plus size and seed for the random ones."""

    strategy: Strategy
    k: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.strategy is not Strategy.CONNECTED and self.k is None:
            raise ValueError(f"strategy {self.strategy.value!r} requires a sample size k")


def _draw(population: list[str], k: int, seed: int, what: str) -> set[str]:
    """Uniform sample without replacement, deterministic for a seed.

    Uses a Mersenne Twister stream seeded with the given 64-bit integer; the
    population is sorted first so the draw does not depend on set ordering.
    """
    if not 0 <= k <= len(population):
        raise ValueError(f"sample size {k} out of range for {len(population)} {what}")
    rng = random.Random(seed)
    return set(rng.sample(sorted(population), k))


def sample_events(log: OcelLog, k: int, seed: int = 0) -> OcelLog:
    """Keep a uniform random subset of k events."""
    check_log(log)
    kept = _draw([e.id for e in log.events], k, seed, "events")
    return project_events(log, kept)


def sample_objects(log: OcelLog, k: int, seed: int = 0) -> OcelLog:
    """Keep a uniform random subset of k objects."""
    check_log(log)
    kept = _draw(list(log.objects), k, seed, "objects")
    return project_objects(log, kept)


def sample_object_types(log: OcelLog, k: int, seed: int = 0) -> OcelLog:
    """Keep a uniform random subset of k object types."""
    check_log(log)
    kept = _draw(list(log.object_types), k, seed, "object types")
    return project_object_types(log, kept)


class _UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass(frozen=True)
class SamplePartition:
    """A partition of a log's events into connected blocks.

    Blocks are ordered by their first event; sub-logs are materialized on
    demand through :meth:`block_log`.
    """

    log: OcelLog
    blocks: tuple[tuple[str, ...], ...]
    _materialized: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    def block_log(self, index: int) -> OcelLog:
        if index not in self._materialized:
            self._materialized[index] = project_events(self.log, set(self.blocks[index]))
        return self._materialized[index]

    def __len__(self) -> int:
        return len(self.blocks)


def connected_event_samples(log: OcelLog) -> SamplePartition:
    """Partition the events into maximal groups connected via shared objects.

    Runs union-find over each object's lifecycle chain (consecutive events of
    one object are unioned), so the shared-object relation never needs to be
    materialized.
    """
    check_log(log)
    n = len(log.events)
    dsu = _UnionFind(n)
    for positions in log._positions_by_object.values():
        for earlier, later in zip(positions, positions[1:]):
            dsu.union(earlier, later)

    groups: dict[int, list[str]] = {}
    for pos, event in enumerate(log.events):
        groups.setdefault(dsu.find(pos), []).append(event.id)
    blocks = tuple(tuple(block) for block in groups.values())

    assert sum(len(b) for b in blocks) == n, "blocks must cover every event"
    assert all(blocks), "blocks must be nonempty"
    return SamplePartition(log=log, blocks=blocks)


def sample(log: OcelLog, spec: SampleSpec) -> OcelLog | SamplePartition:
    """Run the sampling described by a spec."""
    if spec.strategy is Strategy.EVENTS:
        return sample_events(log, spec.k, spec.seed)
    if spec.strategy is Strategy.OBJECTS:
        return sample_objects(log, spec.k, spec.seed)
    if spec.strategy is Strategy.OBJECT_TYPES:
        return sample_object_types(log, spec.k, spec.seed)
    return connected_event_samples(log)


class RandomSampler(TransformerMixin, BaseEstimator):
    """Estimator-style wrapper around the random sampling strategies.

    ``transform`` draws the sample; there is nothing to learn in ``fit``.
    """

    def __init__(self, strategy: str = "events", k: int = 0, seed: int = 0):
        self.strategy = strategy
        self.k = k
        self.seed = seed

    def fit(self, log: OcelLog, y=None):
        check_log(log)
        strategy = Strategy(self.strategy)
        if strategy is Strategy.CONNECTED:
            raise ValueError("RandomSampler handles the random strategies only")
        return self

    def transform(self, log: OcelLog) -> OcelLog:
        self.fit(log)
        return sample(log, SampleSpec(Strategy(self.strategy), self.k, self.seed))
