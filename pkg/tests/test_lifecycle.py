from __future__ import annotations

import random
from datetime import datetime, timezone

import pytest

from ocelkit import (
    Event,
    LifecycleIndex,
    ObjectRecord,
    OcelLog,
    essential_events,
    interaction_lifecycle,
    lifecycle,
)

from helpers import naive_essential_events, random_log

ESSENTIAL_16 = {
    "e1", "e3", "e5", "e6", "e7", "e8", "e10", "e14", "e16", "e17",
    "e18", "e19", "e20", "e22", "e23", "e24",
}


class TestLifecycle:
    def test_order_o1(self, o2c_log):
        assert lifecycle(o2c_log, "o1") == ("e1", "e2", "e4", "e7")

    def test_goods_issue_r1(self, o2c_log):
        assert lifecycle(o2c_log, "r1") == ("e12",)

    def test_object_in_no_event(self):
        log = OcelLog.build(events=[], objects=[ObjectRecord(id="lonely", otype="T")])
        assert lifecycle(log, "lonely") == ()

    def test_unknown_object(self, o2c_log):
        with pytest.raises(ValueError, match="unknown object"):
            lifecycle(o2c_log, "zz")


class TestInteractionLifecycle:
    def test_order_and_item(self, o2c_log):
        assert interaction_lifecycle(o2c_log, "o1", "i1") == ("e1", "e2")

    def test_item_and_delivery(self, o2c_log):
        assert interaction_lifecycle(o2c_log, "i1", "d1") == ("e3",)

    def test_order_and_delivery_never_interact(self, o2c_log):
        assert interaction_lifecycle(o2c_log, "o1", "d1") == ()

    def test_same_object_rejected(self, o2c_log):
        with pytest.raises(ValueError, match="distinct"):
            interaction_lifecycle(o2c_log, "o1", "o1")

    def test_symmetry(self, o2c_log):
        objects = sorted(o2c_log.objects)
        for o1 in objects[:6]:
            for o2 in objects[6:]:
                assert interaction_lifecycle(o2c_log, o1, o2) == interaction_lifecycle(
                    o2c_log, o2, o1
                )


class TestEssentialEvents:
    def test_core_log_bold_events(self, pruned_log):
        tags = essential_events(pruned_log)
        assert set(tags) == ESSENTIAL_16

    def test_single_event_log(self):
        ts = datetime(2020, 1, 1, tzinfo=timezone.utc)
        log = OcelLog.build(
            events=[Event(id="only", activity="a", timestamp=ts, omap=frozenset({"x"}))],
            objects=[ObjectRecord(id="x", otype="T")],
        )
        tags = essential_events(log)
        assert set(tags) == {"only"}
        assert tags["only"].rules == frozenset({"EE1", "EE2"})

    def test_raw_o2c_log_all_essential(self, o2c_log):
        tags = essential_events(o2c_log)
        assert len(tags) == 24
        assert set(tags) == naive_essential_events(o2c_log)

    def test_rules_recorded_with_witnesses(self, pruned_log):
        tags = essential_events(pruned_log)
        # e1 opens the lifecycles of o1, i1 and i2
        assert "EE1" in tags["e1"].rules
        assert tags["e1"].witnesses["EE1"][0] in {"o1", "i1", "i2"}
        # e7 closes o1's lifecycle
        assert "EE2" in tags["e7"].rules

    def test_ee5_fires_between_shared_events(self):
        ts = datetime(2020, 1, 1, tzinfo=timezone.utc)

        def at(minute):
            return ts.replace(minute=minute)

        log = OcelLog.build(
            events=[
                Event(id="e1", activity="open", timestamp=at(0), omap=frozenset({"a", "b"})),
                Event(id="e2", activity="work", timestamp=at(1), omap=frozenset({"a"})),
                Event(id="e3", activity="close", timestamp=at(2), omap=frozenset({"a", "b"})),
            ],
            objects=[ObjectRecord(id="a", otype="T"), ObjectRecord(id="b", otype="T")],
        )
        tags = essential_events(log)
        assert "EE5" in tags["e2"].rules
        assert tags["e2"].witnesses["EE5"] == ("a", "b")

    def test_oracle_equivalence_on_small_random_logs(self):
        rng = random.Random(99)
        for _ in range(120):
            log = random_log(rng, max_events=12, max_objects=10)
            assert set(essential_events(log)) == naive_essential_events(log)

    def test_first_and_last_of_every_lifecycle_tagged(self):
        rng = random.Random(5)
        for _ in range(30):
            log = random_log(rng)
            tags = essential_events(log)
            for oid in log.objects:
                ids = lifecycle(log, oid)
                if ids:
                    assert "EE1" in tags[ids[0]].rules
                    assert "EE2" in tags[ids[-1]].rules

    def test_ee5_witnesses_check_out(self):
        rng = random.Random(17)
        checked = 0
        for _ in range(60):
            log = random_log(rng)
            for event_id, tag in essential_events(log).items():
                if "EE5" not in tag.rules:
                    continue
                o1, o2 = tag.witnesses["EE5"]
                shared = interaction_lifecycle(log, o1, o2)
                assert len(shared) >= 2
                pos = log.event_position(event_id)
                first = log.event_position(shared[0])
                last = log.event_position(shared[-1])
                assert first < pos < last
                assert event_id not in shared
                assert event_id in lifecycle(log, o1) + lifecycle(log, o2)
                checked += 1
        assert checked > 5


class TestLifecycleIndex:
    def test_pairs_match_interactions(self, o2c_log):
        index = LifecycleIndex(o2c_log)
        for (o1, o2), shared in index.pairs():
            ids = tuple(o2c_log.events[p].id for p in shared)
            assert ids == interaction_lifecycle(o2c_log, o1, o2)
            assert ids  # co-occurring pairs only

    def test_interaction_positions_symmetric(self, o2c_log):
        index = LifecycleIndex(o2c_log)
        assert index.interaction_positions("o1", "i1") == index.interaction_positions("i1", "o1")
