"""Synthetic order-to-cash style logs for benchmarks and property tests.

The generator reproduces the data-quality artifacts the filters exist for:
order references on every pick event (convergence), a log-wide dummy object
shared by all events, and rare one-off activities carried by single-use
objects. Output is deterministic for a given parameter set and seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from .model import Event, ObjectRecord, OcelLog

_BASE_TIME = datetime(2007, 4, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class GenParams:
    """Knobs for the synthetic order-to-cash generator."""

    orders: int = 10
    items_per_order: tuple[int, int] = (1, 3)
    deliveries_per_order: tuple[int, int] = (1, 2)
    global_object_rate: float = 1.0
    singleton_rate: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.orders < 0:
            raise ValueError("orders must be nonnegative")
        for name, (low, high) in (
            ("items_per_order", self.items_per_order),
            ("deliveries_per_order", self.deliveries_per_order),
        ):
            if low < 1 or high < low:
                raise ValueError(f"{name} range {low}:{high} is empty or below 1")
        for name, rate in (
            ("global_object_rate", self.global_object_rate),
            ("singleton_rate", self.singleton_rate),
        ):
            if not 0 <= rate <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {rate}")


def generate_log(params: GenParams) -> OcelLog:
    """Build a valid synthetic log; see :class:`GenParams` for the knobs."""
    rng = random.Random(params.seed)
    events: list[Event] = []
    objects: list[ObjectRecord] = []

    use_global = params.global_object_rate > 0
    if use_global:
        objects.append(ObjectRecord(id="Normal", otype="Weight Classes"))

    event_counter = 0
    item_counter = 0
    delivery_counter = 0
    singleton_counter = 0

    def emit(activity: str, offset_minutes: float, omap: set[str], vmap=None) -> None:
        nonlocal event_counter
        event_counter += 1
        if use_global and rng.random() < params.global_object_rate:
            omap = omap | {"Normal"}
        events.append(
            Event(
                id=f"e{event_counter:07d}",
                activity=activity,
                timestamp=_BASE_TIME + timedelta(minutes=offset_minutes),
                omap=frozenset(omap),
                vmap=vmap or {},
            )
        )

    for order_index in range(params.orders):
        order_id = f"o{order_index + 1}"
        objects.append(
            ObjectRecord(
                id=order_id,
                otype="Orders",
                ovmap={"priority": rng.randint(1, 3)},
            )
        )
        # Orders start every 5 minutes and run for a couple of hours, so
        # neighboring orders interleave in the global event order.
        clock = order_index * 5 + rng.uniform(0, 4)

        item_count = rng.randint(*params.items_per_order)
        item_ids = []
        for _ in range(item_count):
            item_counter += 1
            item_id = f"i{item_counter}"
            item_ids.append(item_id)
            objects.append(ObjectRecord(id=item_id, otype="Items"))

        delivery_count = min(item_count, rng.randint(*params.deliveries_per_order))
        delivery_ids = []
        for _ in range(delivery_count):
            delivery_counter += 1
            delivery_id = f"d{delivery_counter}"
            delivery_ids.append(delivery_id)
            objects.append(ObjectRecord(id=delivery_id, otype="Deliveries"))

        emit("Create Order", clock, {order_id, *item_ids},
             vmap={"resource": f"user{rng.randint(1, 5)}"})

        for item_id in item_ids:
            clock += rng.uniform(1, 10)
            # The order reference here is deliberate noise: one object of the
            # type per event, repeated for every item of the order.
            emit("Pick Item", clock, {order_id, item_id})
            clock += rng.uniform(1, 10)
            emit("Pack Item", clock, {item_id, rng.choice(delivery_ids)})

        if rng.random() < params.singleton_rate:
            singleton_counter += 1
            record_id = f"g{singleton_counter}"
            objects.append(ObjectRecord(id=record_id, otype="Goods Issues"))
            clock += rng.uniform(1, 5)
            emit(f"Stock Correction {singleton_counter}", clock,
                 {record_id, rng.choice(item_ids)})

        for delivery_id in delivery_ids:
            clock += rng.uniform(5, 30)
            emit("Delivery Successful", clock, {delivery_id})

        clock += rng.uniform(5, 60)
        emit("Pay Order", clock, {order_id})

    return OcelLog.build(events=events, objects=objects)
