"""Shared test helpers: independent oracles and random log builders.

The oracles here are deliberately naive translations of the definitions the
library implements with indices, so agreement between the two is meaningful.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from ocelkit import Event, ObjectRecord, OcelLog

BASE = datetime(2020, 1, 1, tzinfo=timezone.utc)


def naive_lifecycle(log: OcelLog, oid: str) -> list[int]:
    return [pos for pos, event in enumerate(log.events) if oid in event.omap]


def naive_interaction(log: OcelLog, o1: str, o2: str) -> list[int]:
    return [
        pos
        for pos, event in enumerate(log.events)
        if o1 in event.omap and o2 in event.omap
    ]


def naive_essential_events(log: OcelLog) -> set[str]:
    """Literal evaluation of the five essentiality rules, cubic and slow."""
    objects = sorted(log.objects)
    essential: set[int] = set()

    for oid in objects:
        lif = naive_lifecycle(log, oid)
        if lif:
            essential.add(lif[0])
            essential.add(lif[-1])

    for i, o1 in enumerate(objects):
        for o2 in objects[i + 1:]:
            shared_seq = naive_interaction(log, o1, o2)
            if not shared_seq:
                continue
            essential.add(shared_seq[0])
            essential.add(shared_seq[-1])
            shared = set(shared_seq)
            union = set(naive_lifecycle(log, o1)) | set(naive_lifecycle(log, o2))
            for e1 in shared_seq:
                for e3 in shared_seq:
                    for e2 in range(e1, e3 + 1):
                        if e2 not in shared and e2 in union:
                            essential.add(e2)
    return {log.events[pos].id for pos in sorted(essential)}


def bfs_connected_blocks(log: OcelLog) -> set[frozenset[str]]:
    """Connected components by BFS over the explicitly materialized
    shared-object relation (quadratic in the event count)."""
    n = len(log.events)
    neighbors: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if log.events[i].omap & log.events[j].omap:
                neighbors[i].append(j)
                neighbors[j].append(i)
    seen = [False] * n
    blocks: set[frozenset[str]] = set()
    for start in range(n):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        component = []
        while queue:
            node = queue.pop()
            component.append(log.events[node].id)
            for other in neighbors[node]:
                if not seen[other]:
                    seen[other] = True
                    queue.append(other)
        blocks.add(frozenset(component))
    return blocks


def random_log(
    rng: random.Random,
    max_events: int = 30,
    max_objects: int = 12,
    max_types: int = 4,
    with_attributes: bool = False,
    allow_ties: bool = True,
) -> OcelLog:
    """A structurally valid log with uniformly random omaps."""
    type_count = rng.randint(1, max_types)
    types = [f"T{t}" for t in range(type_count)]
    object_count = rng.randint(0, max_objects)
    objects = []
    for index in range(object_count):
        ovmap = {}
        if with_attributes and rng.random() < 0.5:
            ovmap = {"weight": rng.random()}
        objects.append(
            ObjectRecord(id=f"obj{index}", otype=rng.choice(types), ovmap=ovmap)
        )
    activities = ["create", "update", "close", "review", "ship"]
    events = []
    minutes = 0
    for index in range(rng.randint(0, max_events)):
        if not allow_ties or rng.random() < 0.8:
            minutes += rng.randint(1, 30)
        omap_size = rng.randint(0, min(4, object_count)) if object_count else 0
        omap = frozenset(o.id for o in rng.sample(objects, omap_size))
        vmap = {}
        if with_attributes:
            if rng.random() < 0.5:
                vmap["resource"] = f"user{rng.randint(1, 3)}"
            if rng.random() < 0.3:
                vmap["amount"] = rng.randint(0, 100)
            if rng.random() < 0.2:
                vmap["valid"] = rng.random() < 0.5
            if rng.random() < 0.2:
                vmap["due"] = BASE + timedelta(days=rng.randint(1, 99))
        events.append(
            Event(
                id=f"ev{index:04d}",
                activity=rng.choice(activities),
                timestamp=BASE + timedelta(minutes=minutes),
                omap=omap,
                vmap=vmap,
            )
        )
    return OcelLog.build(events=events, objects=objects)


def logs_equal(a: OcelLog, b: OcelLog) -> bool:
    return (
        a.events == b.events
        and dict(a.objects) == dict(b.objects)
        and a.object_types == b.object_types
        and a.schema == b.schema
    )
