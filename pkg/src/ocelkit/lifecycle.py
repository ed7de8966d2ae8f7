"""Object lifecycles, pairwise interaction lifecycles, and essential events.

An event is *essential* when it opens or closes some object's lifecycle
(rules EE1/EE2), opens or closes the shared lifecycle of an object pair
(EE3/EE4), or sits strictly between two shared events of a pair without being
shared itself while belonging to either lifecycle (EE5, the synchronization
rule).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterator, Mapping

from .model import OcelLog, check_log

RULES = ("EE1", "EE2", "EE3", "EE4", "EE5")


@dataclass(frozen=True)
class EssentialTag:
    """Why one event is essential: the rules that fired, with one witness each.

    Witnesses are object-id tuples: a single object for EE1/EE2, the object
    pair for EE3-EE5.
    """

    event_id: str
    rules: frozenset[str]
    witnesses: Mapping[str, tuple[str, ...]]


class LifecycleIndex:
    """Per-object lifecycles plus the shared-event table of co-occurring pairs.

    Positions refer to the log's event order; pairs that never co-occur are
    absent from the table.
    """

    def __init__(self, log: OcelLog):
        check_log(log)
        self.log = log
        self._lifecycles: dict[str, tuple[int, ...]] = {
            oid: tuple(log._positions_by_object.get(oid, ())) for oid in log.objects
        }
        pair_table: dict[tuple[str, str], list[int]] = {}
        for pos, event in enumerate(log.events):
            members = sorted(o for o in event.omap if o in log.objects)
            for i, first in enumerate(members):
                for second in members[i + 1:]:
                    pair_table.setdefault((first, second), []).append(pos)
        self._shared_events = {pair: tuple(shared) for pair, shared in pair_table.items()}

    def lifecycle_positions(self, object_id: str) -> tuple[int, ...]:
        try:
            return self._lifecycles[object_id]
        except KeyError:
            raise ValueError(f"unknown object id {object_id!r}") from None

    def interaction_positions(self, o1: str, o2: str) -> tuple[int, ...]:
        if o1 == o2:
            raise ValueError("interaction lifecycle needs two distinct objects")
        for oid in (o1, o2):
            if oid not in self._lifecycles:
                raise ValueError(f"unknown object id {oid!r}")
        key = (o1, o2) if o1 < o2 else (o2, o1)
        return self._shared_events.get(key, ())

    def pairs(self) -> Iterator[tuple[tuple[str, str], tuple[int, ...]]]:
        """All co-occurring object pairs with their shared event positions."""
        return iter(self._shared_events.items())


def lifecycle(log: OcelLog, object_id: str) -> tuple[str, ...]:
    """The ordered events containing the object; empty if it occurs nowhere."""
    check_log(log)
    return tuple(log.events[p].id for p in log.object_positions(object_id))


def interaction_lifecycle(log: OcelLog, o1: str, o2: str) -> tuple[str, ...]:
    """The ordered events containing both objects."""
    check_log(log)
    if o1 == o2:
        raise ValueError("interaction lifecycle needs two distinct objects")
    first = set(log.object_positions(o1))
    shared = [p for p in log.object_positions(o2) if p in first]
    return tuple(log.events[p].id for p in shared)


def essential_events(log: OcelLog, index: LifecycleIndex | None = None) -> dict[str, EssentialTag]:
    """Tag every essential event of the log, keyed by event id.

    EE5 is evaluated with a sweep over each object's lifecycle: a pair's
    shared events open an interval, and any event of either lifecycle that
    falls strictly inside an interval of a partner absent from its omap is a
    synchronization point. This keeps the cost near the size of the pair
    table instead of quadratic in lifecycle lengths.
    """
    check_log(log)
    if index is None:
        index = LifecycleIndex(log)

    rules_by_pos: dict[int, set[str]] = {}
    witness_by_pos: dict[int, dict[str, tuple[str, ...]]] = {}

    def tag(pos: int, rule: str, witness: tuple[str, ...]) -> None:
        rules_by_pos.setdefault(pos, set()).add(rule)
        witness_by_pos.setdefault(pos, {}).setdefault(rule, witness)

    for oid in log.objects:
        positions = index.lifecycle_positions(oid)
        if positions:
            tag(positions[0], "EE1", (oid,))
            tag(positions[-1], "EE2", (oid,))

    spans_by_object: dict[str, list[tuple[int, int, str]]] = {}
    for (o1, o2), shared in index.pairs():
        tag(shared[0], "EE3", (o1, o2))
        tag(shared[-1], "EE4", (o1, o2))
        if shared[-1] - shared[0] >= 2:
            spans_by_object.setdefault(o1, []).append((shared[0], shared[-1], o2))
            spans_by_object.setdefault(o2, []).append((shared[0], shared[-1], o1))

    events = log.events
    for oid, spans in spans_by_object.items():
        spans.sort()
        active: dict[str, int] = {}
        expiring: list[tuple[int, str]] = []
        cursor = 0
        for pos in index.lifecycle_positions(oid):
            while cursor < len(spans) and spans[cursor][0] < pos:
                start, end, partner = spans[cursor]
                cursor += 1
                if end > pos:
                    active[partner] = end
                    heapq.heappush(expiring, (end, partner))
            while expiring and expiring[0][0] <= pos:
                _, partner = heapq.heappop(expiring)
                if active.get(partner, -1) <= pos:
                    active.pop(partner, None)
            if not active:
                continue
            omap = events[pos].omap
            for partner in active:
                if partner not in omap:
                    tag(pos, "EE5", (oid, partner) if oid < partner else (partner, oid))
                    break

    tags: dict[str, EssentialTag] = {}
    for pos in sorted(rules_by_pos):
        event_id = events[pos].id
        tags[event_id] = EssentialTag(
            event_id=event_id,
            rules=frozenset(rules_by_pos[pos]),
            witnesses=witness_by_pos[pos],
        )
    return tags
