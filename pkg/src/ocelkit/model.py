"""In-memory model for object-centric event logs.

An :class:`OcelLog` holds a totally ordered sequence of events, a table of
objects with their types, and an attribute schema. All structures are
immutable after construction; the projection functions at the bottom of this
module return new logs that share event/object records with their input.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Iterable, Mapping

ATTRIBUTE_TYPES = ("string", "integer", "float", "boolean", "timestamp")

_PYTHON_TO_ATTRIBUTE_TYPE = (
    (bool, "boolean"),  # bool first: bool is a subclass of int
    (int, "integer"),
    (float, "float"),
    (str, "string"),
    (datetime, "timestamp"),
)


class OcelError(Exception):
    """Base class for errors raised by this package."""


def attribute_type_of(value) -> str:
    """Return the schema type name for a scalar attribute value."""
    for pytype, name in _PYTHON_TO_ATTRIBUTE_TYPE:
        if isinstance(value, pytype):
            return name
    raise TypeError(f"unsupported attribute value type: {type(value).__name__!r}")


@dataclass(frozen=True)
class AttributeSchema:
    """Attribute names and their scalar types.

    ``value_types`` maps a name to one of :data:`ATTRIBUTE_TYPES`. Names
    without an observed value may appear in ``names`` only.
    """

    names: frozenset[str] = frozenset()
    value_types: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        bad = set(self.value_types) - set(self.names)
        if bad:
            raise ValueError(f"typed attributes not declared as names: {sorted(bad)}")
        for name, vtype in self.value_types.items():
            if vtype not in ATTRIBUTE_TYPES:
                raise ValueError(f"unknown attribute type {vtype!r} for {name!r}")

    @classmethod
    def infer(cls, value_maps: Iterable[Mapping[str, object]], declared: Iterable[str] = ()) -> "AttributeSchema":
        """Build a schema from attribute maps, typing each name by first occurrence.

        Raises ValueError when the same name appears with two different types.
        """
        names = {sys.intern(n) for n in declared}
        value_types: dict[str, str] = {}
        for vmap in value_maps:
            for name, value in vmap.items():
                vtype = attribute_type_of(value)
                seen = value_types.get(name)
                if seen is None:
                    name = sys.intern(name)
                    names.add(name)
                    value_types[name] = vtype
                elif seen != vtype:
                    raise ValueError(
                        f"attribute {name!r} used with conflicting types {seen!r} and {vtype!r}"
                    )
        return cls(names=frozenset(names), value_types=value_types)

    def check_value(self, name: str, value) -> str | None:
        """Return a violation message if (name, value) breaks the schema, else None."""
        if name not in self.names:
            return f"attribute {name!r} not declared in schema"
        vtype = attribute_type_of(value)
        expected = self.value_types.get(name)
        if expected is not None and vtype != expected:
            return f"attribute {name!r} has type {vtype}, schema says {expected}"
        return None


@dataclass(frozen=True, slots=True)
class Event:
    """One event: identity, activity, instant, attributes and related objects."""

    id: str
    activity: str
    timestamp: datetime
    omap: frozenset[str] = frozenset()
    vmap: Mapping[str, object] = field(default_factory=dict)

    def order_key(self):
        return (self.timestamp, self.id)


@dataclass(frozen=True, slots=True)
class ObjectRecord:
    """One object: identity, its single type, and object-level attributes."""

    id: str
    otype: str
    ovmap: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class RelationSet:
    """A set of allowed (object type, activity) pairs for relation filtering."""

    allowed: frozenset[tuple[str, str]]

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, str]]) -> "RelationSet":
        return cls(frozenset((t, a) for t, a in pairs))

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self.allowed

    def __len__(self) -> int:
        return len(self.allowed)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


@dataclass(frozen=True)
class OcelLog:
    """An object-centric event log.

    Events are kept in total order: ascending timestamp, ties broken by the
    lexicographic event identifier. Construction sorts the given events and
    builds inverted indices; it does not reject inconsistent data, use
    :func:`validate` to obtain a violation report.
    """

    events: tuple[Event, ...]
    objects: Mapping[str, ObjectRecord]
    object_types: frozenset[str]
    schema: AttributeSchema
    # Derived indices; rebuilt on construction, excluded from equality.
    _pos_by_event_id: dict = field(init=False, repr=False, compare=False)
    _positions_by_object: dict = field(init=False, repr=False, compare=False)
    _positions_by_activity: dict = field(init=False, repr=False, compare=False)
    _objects_by_type: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        events = tuple(sorted(self.events, key=Event.order_key))
        object.__setattr__(self, "events", events)
        pos_by_id: dict[str, int] = {}
        by_object: dict[str, list[int]] = {}
        by_activity: dict[str, list[int]] = {}
        for pos, event in enumerate(events):
            pos_by_id.setdefault(event.id, pos)
            by_activity.setdefault(event.activity, []).append(pos)
            for oid in event.omap:
                by_object.setdefault(oid, []).append(pos)
        for positions in by_object.values():
            positions.sort()
        by_type: dict[str, list[str]] = {t: [] for t in self.object_types}
        for oid, record in self.objects.items():
            by_type.setdefault(record.otype, []).append(oid)
        object.__setattr__(self, "_pos_by_event_id", pos_by_id)
        object.__setattr__(self, "_positions_by_object", by_object)
        object.__setattr__(self, "_positions_by_activity", by_activity)
        object.__setattr__(self, "_objects_by_type", by_type)

    # -- construction -----------------------------------------------------

    @classmethod
    def build(
        cls,
        events: Iterable[Event],
        objects: Iterable[ObjectRecord],
        object_types: Iterable[str] | None = None,
        schema: AttributeSchema | None = None,
    ) -> "OcelLog":
        """Assemble a log, defaulting object types and schema from the data."""
        events = tuple(events)
        object_map = {record.id: record for record in objects}
        if object_types is None:
            object_types = {record.otype for record in object_map.values()}
        if schema is None:
            value_maps = [e.vmap for e in events if e.vmap]
            value_maps += [r.ovmap for r in object_map.values() if r.ovmap]
            schema = AttributeSchema.infer(value_maps)
        return cls(
            events=events,
            objects=object_map,
            object_types=frozenset(object_types),
            schema=schema,
        )

    @classmethod
    def empty(cls) -> "OcelLog":
        return cls.build(events=(), objects=())

    # -- queries ----------------------------------------------------------

    @property
    def event_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.events)

    def event_position(self, event_id: str) -> int:
        try:
            return self._pos_by_event_id[event_id]
        except KeyError:
            raise ValueError(f"unknown event id {event_id!r}") from None

    def object_positions(self, object_id: str) -> tuple[int, ...]:
        """Positions of the events whose omap contains the object, in order."""
        if object_id not in self.objects:
            raise ValueError(f"unknown object id {object_id!r}")
        return tuple(self._positions_by_object.get(object_id, ()))

    def activity_positions(self, activity: str) -> tuple[int, ...]:
        return tuple(self._positions_by_activity.get(activity, ()))

    def activity_count(self, activity: str) -> int:
        return len(self._positions_by_activity.get(activity, ()))

    @property
    def activities(self) -> frozenset[str]:
        return frozenset(self._positions_by_activity)

    def objects_of_type(self, otype: str) -> tuple[str, ...]:
        if otype not in self.object_types:
            raise ValueError(f"unknown object type {otype!r}")
        return tuple(self._objects_by_type.get(otype, ()))

    def total_relations(self) -> int:
        """Total number of (event, object) incidences."""
        return sum(len(e.omap) for e in self.events)

    def activity_ratio(self, otype: str) -> Fraction:
        """Unique-activity ratio of a type: summed unique activities over
        summed lifecycle lengths of its objects. Event-less types rate 1."""
        numerator = 0
        denominator = 0
        for oid in self.objects_of_type(otype):
            positions = self._positions_by_object.get(oid)
            if not positions:
                continue
            numerator += len({self.events[p].activity for p in positions})
            denominator += len(positions)
        if denominator == 0:
            return Fraction(1)
        return Fraction(numerator, denominator)


def check_log(log) -> OcelLog:
    """Validation helper: raise TypeError unless ``log`` is an OcelLog."""
    if not isinstance(log, OcelLog):
        raise TypeError(f"expected an OcelLog, got {type(log).__name__!r}")
    return log


def validate(log: OcelLog) -> ValidationReport:
    """Check every structural invariant of a log; violations are data, not errors."""
    check_log(log)
    violations: list[Violation] = []

    seen_ids: set[str] = set()
    for event in log.events:
        if event.id in seen_ids:
            violations.append(
                Violation("duplicate-event-id", f"event id {event.id!r} occurs more than once")
            )
        seen_ids.add(event.id)
        for oid in event.omap:
            if oid not in log.objects:
                violations.append(
                    Violation(
                        "dangling-object-reference",
                        f"event {event.id!r} references unknown object {oid!r}",
                    )
                )
        for name, value in event.vmap.items():
            problem = log.schema.check_value(name, value)
            if problem:
                violations.append(Violation("event-attribute", f"event {event.id!r}: {problem}"))

    for record in log.objects.values():
        if record.otype not in log.object_types:
            violations.append(
                Violation(
                    "undeclared-object-type",
                    f"object {record.id!r} has type {record.otype!r} not in the log's object types",
                )
            )
        for name, value in record.ovmap.items():
            problem = log.schema.check_value(name, value)
            if problem:
                violations.append(Violation("object-attribute", f"object {record.id!r}: {problem}"))

    for earlier, later in zip(log.events, log.events[1:]):
        if later.order_key() < earlier.order_key():
            violations.append(
                Violation("event-order", f"events {earlier.id!r} and {later.id!r} out of order")
            )

    # Index consistency pass: the derived indices must agree with the data.
    for oid, positions in log._positions_by_object.items():
        for pos in positions:
            if oid not in log.events[pos].omap:
                violations.append(
                    Violation("index-inconsistency", f"object index wrong for {oid!r} at {pos}")
                )
    for activity, positions in log._positions_by_activity.items():
        for pos in positions:
            if log.events[pos].activity != activity:
                violations.append(
                    Violation("index-inconsistency", f"activity index wrong for {activity!r} at {pos}")
                )

    return ValidationReport(tuple(violations))


# -- projections ----------------------------------------------------------


def project_object_types(log: OcelLog, kept: Iterable[str]) -> OcelLog:
    """Keep only objects of the given types; omaps shrink accordingly.

    Events, their order, and the schema are unchanged. ``kept`` must be a
    subset of the log's object types.
    """
    check_log(log)
    kept = frozenset(kept)
    unknown = kept - log.object_types
    if unknown:
        raise ValueError(f"unknown object types: {sorted(unknown)}")
    surviving = {
        oid: record for oid, record in log.objects.items() if record.otype in kept
    }
    events = tuple(
        _with_omap(e, frozenset(o for o in e.omap if o in surviving)) for e in log.events
    )
    return OcelLog(events=events, objects=surviving, object_types=kept, schema=log.schema)


def project_events(log: OcelLog, kept: Iterable[str]) -> OcelLog:
    """Keep only the given events, preserving order; objects are untouched."""
    check_log(log)
    kept = set(kept)
    unknown = kept - set(log._pos_by_event_id)
    if unknown:
        raise ValueError(f"unknown event ids: {sorted(unknown)}")
    events = tuple(e for e in log.events if e.id in kept)
    return OcelLog(
        events=events,
        objects=log.objects,
        object_types=log.object_types,
        schema=log.schema,
    )


def project_objects(log: OcelLog, kept: Iterable[str]) -> OcelLog:
    """Keep only the given objects; omaps shrink, the type set does not."""
    check_log(log)
    kept = frozenset(kept)
    unknown = kept - set(log.objects)
    if unknown:
        raise ValueError(f"unknown object ids: {sorted(unknown)}")
    surviving = {oid: record for oid, record in log.objects.items() if oid in kept}
    events = tuple(_with_omap(e, e.omap & kept) for e in log.events)
    return OcelLog(
        events=events,
        objects=surviving,
        object_types=log.object_types,
        schema=log.schema,
    )


def restrict_relations(log: OcelLog, allowed: RelationSet) -> OcelLog:
    """Keep an event-object relation only if its (type, activity) pair is allowed."""
    check_log(log)
    if not isinstance(allowed, RelationSet):
        raise TypeError("allowed must be a RelationSet")
    pairs = allowed.allowed
    records = log.objects
    events = []
    for event in log.events:
        activity = event.activity
        kept = frozenset(
            oid
            for oid in event.omap
            if oid in records and (records[oid].otype, activity) in pairs
        )
        events.append(_with_omap(event, kept))
    return OcelLog(
        events=tuple(events),
        objects=log.objects,
        object_types=log.object_types,
        schema=log.schema,
    )


def _with_omap(event: Event, omap: frozenset[str]) -> Event:
    if omap == event.omap:
        return event
    return Event(
        id=event.id,
        activity=event.activity,
        timestamp=event.timestamp,
        omap=omap,
        vmap=event.vmap,
    )
