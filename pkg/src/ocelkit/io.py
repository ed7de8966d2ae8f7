"""Reading and writing OCEL files, plus flattening to case-based logs.

Supports the JSON and XML serializations of the OCEL standard. Timestamps are
parsed from ISO-8601 (a missing offset means UTC) and always written back with
an explicit UTC offset. Unknown document keys are skipped with a logged
warning so files carrying extensions still load.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import logging
import sys
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Mapping, NamedTuple

from .model import (
    AttributeSchema,
    Event,
    ObjectRecord,
    OcelError,
    OcelLog,
    attribute_type_of,
    check_log,
)

log_ = logging.getLogger(__name__)

GLOBAL_LOG = "ocel:global-log"
EVENTS = "ocel:events"
OBJECTS = "ocel:objects"
# Writer extension: records attribute types so a JSON round trip restores
# timestamp-valued attributes (plain JSON cannot distinguish them from strings).
ATTRIBUTE_TYPES_KEY = "ocelkit:attribute-types"

_KNOWN_TOP_KEYS = {GLOBAL_LOG, EVENTS, OBJECTS, "ocel:global-event", "ocel:global-object"}
_KNOWN_EVENT_KEYS = {"ocel:activity", "ocel:timestamp", "ocel:omap", "ocel:vmap"}
_KNOWN_OBJECT_KEYS = {"ocel:type", "ocel:ovmap"}


class OcelParseError(OcelError):
    """A document could not be understood; the message names the location."""


def parse_timestamp(text: str, where: str) -> datetime:
    if not isinstance(text, str):
        raise OcelParseError(f"{where}: timestamp must be a string, got {type(text).__name__}")
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(raw)
    except ValueError:
        raise OcelParseError(f"{where}: unparseable timestamp {text!r}") from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp


def format_timestamp(stamp: datetime) -> str:
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.isoformat()


# -- JSON-OCEL --------------------------------------------------------------


def parse_json_ocel(data: bytes | str) -> OcelLog:
    """Parse a JSON-OCEL document into a validated, ordered log."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise OcelParseError(f"malformed JSON document: {exc}") from None
    if not isinstance(doc, dict):
        raise OcelParseError("top level of a JSON-OCEL document must be an object")
    _warn_unknown(doc, _KNOWN_TOP_KEYS | {ATTRIBUTE_TYPES_KEY}, "document")

    meta = _require(doc, GLOBAL_LOG, "document")
    if not isinstance(meta, dict):
        raise OcelParseError(f"{GLOBAL_LOG} must be an object")
    declared_types = _require(meta, "ocel:object-types", GLOBAL_LOG)
    declared_names = _require(meta, "ocel:attribute-names", GLOBAL_LOG)
    _require(meta, "ocel:version", GLOBAL_LOG)
    type_hints = meta.get(ATTRIBUTE_TYPES_KEY, {})
    if not isinstance(type_hints, dict):
        raise OcelParseError(f"{ATTRIBUTE_TYPES_KEY} must be a map")

    raw_objects = _require(doc, OBJECTS, "document")
    if not isinstance(raw_objects, dict):
        raise OcelParseError(f"{OBJECTS} must be a map of object id to object body")
    objects: list[ObjectRecord] = []
    for oid, body in raw_objects.items():
        where = f"object {oid!r}"
        if not isinstance(body, dict):
            raise OcelParseError(f"{where}: body must be an object")
        _warn_unknown(body, _KNOWN_OBJECT_KEYS, where)
        otype = _require(body, "ocel:type", where)
        ovmap = _require(body, "ocel:ovmap", where)
        objects.append(
            ObjectRecord(
                id=sys.intern(str(oid)),
                otype=sys.intern(str(otype)),
                ovmap=_parse_value_map(ovmap, type_hints, where),
            )
        )
    known_ids = {record.id for record in objects}

    raw_events = _require(doc, EVENTS, "document")
    if not isinstance(raw_events, dict):
        raise OcelParseError(f"{EVENTS} must be a map of event id to event body")
    events: list[Event] = []
    for eid, body in raw_events.items():
        where = f"event {eid!r}"
        if not isinstance(body, dict):
            raise OcelParseError(f"{where}: body must be an object")
        _warn_unknown(body, _KNOWN_EVENT_KEYS, where)
        activity = _require(body, "ocel:activity", where)
        stamp = parse_timestamp(_require(body, "ocel:timestamp", where), where)
        omap = _require(body, "ocel:omap", where)
        vmap = _require(body, "ocel:vmap", where)
        if not isinstance(omap, list):
            raise OcelParseError(f"{where}: ocel:omap must be a list")
        for oid in omap:
            if oid not in known_ids:
                raise OcelParseError(f"{where}: omap references undeclared object {oid!r}")
        events.append(
            Event(
                id=sys.intern(str(eid)),
                activity=sys.intern(str(activity)),
                timestamp=stamp,
                omap=frozenset(sys.intern(str(o)) for o in omap),
                vmap=_parse_value_map(vmap, type_hints, where),
            )
        )

    declared = {sys.intern(str(t)) for t in declared_types}
    object_types = declared | {record.otype for record in objects}
    if object_types - declared:
        log_.warning("objects use types missing from ocel:object-types: %s",
                     sorted(object_types - declared))
    try:
        schema = AttributeSchema.infer(
            [e.vmap for e in events] + [r.ovmap for r in objects],
            declared=[str(n) for n in declared_names],
        )
    except ValueError as exc:
        raise OcelParseError(str(exc)) from None
    return OcelLog(
        events=tuple(events),
        objects={record.id: record for record in objects},
        object_types=frozenset(object_types),
        schema=schema,
    )


def write_json_ocel(log: OcelLog) -> bytes:
    """Serialize a log as JSON-OCEL, deterministically for a given log."""
    check_log(log)
    type_hints = dict(sorted(log.schema.value_types.items()))
    doc = {
        GLOBAL_LOG: {
            "ocel:version": "1.0",
            "ocel:ordering": "timestamp",
            "ocel:attribute-names": sorted(log.schema.names),
            "ocel:object-types": sorted(log.object_types),
            ATTRIBUTE_TYPES_KEY: type_hints,
        },
        EVENTS: {
            event.id: {
                "ocel:activity": event.activity,
                "ocel:timestamp": format_timestamp(event.timestamp),
                "ocel:omap": sorted(event.omap),
                "ocel:vmap": {k: _plain_value(v) for k, v in event.vmap.items()},
            }
            for event in log.events
        },
        OBJECTS: {
            record.id: {
                "ocel:type": record.otype,
                "ocel:ovmap": {k: _plain_value(v) for k, v in record.ovmap.items()},
            }
            for record in log.objects.values()
        },
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def _plain_value(value):
    if isinstance(value, datetime):
        return format_timestamp(value)
    return value


def _parse_value_map(raw, type_hints: Mapping[str, str], where: str) -> dict[str, object]:
    if not isinstance(raw, dict):
        raise OcelParseError(f"{where}: attribute map must be an object")
    values: dict[str, object] = {}
    for name, value in raw.items():
        name = sys.intern(str(name))
        if isinstance(value, (list, dict)):
            raise OcelParseError(f"{where}: attribute {name!r} has a nested value")
        if value is None:
            raise OcelParseError(f"{where}: attribute {name!r} is null")
        if type_hints.get(name) == "timestamp" and isinstance(value, str):
            value = parse_timestamp(value, f"{where}, attribute {name!r}")
        values[name] = value
    return values


def _require(mapping, key: str, where: str):
    if key not in mapping:
        raise OcelParseError(f"{where}: missing mandatory key {key!r}")
    return mapping[key]


def _warn_unknown(mapping, known: set[str], where: str) -> None:
    extra = [k for k in mapping if k not in known]
    if extra:
        log_.warning("%s: ignoring unknown keys %s", where, sorted(extra))


# -- XML-OCEL ---------------------------------------------------------------

_XML_WRITERS = {
    "string": ("string", str),
    "integer": ("int", str),
    "float": ("float", repr),
    "boolean": ("boolean", lambda v: "true" if v else "false"),
    "timestamp": ("date", format_timestamp),
}


def parse_xml_ocel(data: bytes | str) -> OcelLog:
    """Parse an XML-OCEL document; value elements carry their own types."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise OcelParseError(f"malformed XML document: {exc}") from None
    if root.tag != "log":
        raise OcelParseError(f"expected <log> root element, found <{root.tag}>")

    declared_types: list[str] = []
    declared_names: list[str] = []
    for child in root.findall("global"):
        if child.get("scope") != "log":
            continue
        for entry in child:
            if entry.get("key") == "object-types":
                declared_types = [sys.intern(e.get("value", "")) for e in entry]
            elif entry.get("key") == "attribute-names":
                declared_names = [e.get("value", "") for e in entry]

    objects: list[ObjectRecord] = []
    objects_el = root.find("objects")
    for entry in objects_el if objects_el is not None else ():
        fields = _xml_fields(entry)
        oid = fields.get("id")
        if oid is None:
            raise OcelParseError("object element without an <string key='id'> child")
        where = f"object {oid!r}"
        if "type" not in fields:
            raise OcelParseError(f"{where}: missing mandatory key 'type'")
        objects.append(
            ObjectRecord(
                id=sys.intern(str(oid)),
                otype=sys.intern(str(fields["type"])),
                ovmap=_xml_value_map(entry, "ovmap", where),
            )
        )
    known_ids = {record.id for record in objects}

    events: list[Event] = []
    events_el = root.find("events")
    for entry in events_el if events_el is not None else ():
        fields = _xml_fields(entry)
        eid = fields.get("id")
        if eid is None:
            raise OcelParseError("event element without an <string key='id'> child")
        where = f"event {eid!r}"
        for needed in ("activity", "timestamp"):
            if needed not in fields:
                raise OcelParseError(f"{where}: missing mandatory key {needed!r}")
        omap = []
        for lst in entry.findall("list"):
            if lst.get("key") == "omap":
                omap = [e.get("value", "") for e in lst]
        for oid in omap:
            if oid not in known_ids:
                raise OcelParseError(f"{where}: omap references undeclared object {oid!r}")
        stamp = fields["timestamp"]
        if not isinstance(stamp, datetime):
            stamp = parse_timestamp(str(stamp), where)
        events.append(
            Event(
                id=sys.intern(str(eid)),
                activity=sys.intern(str(fields["activity"])),
                timestamp=stamp,
                omap=frozenset(sys.intern(str(o)) for o in omap),
                vmap=_xml_value_map(entry, "vmap", where),
            )
        )

    object_types = set(declared_types) | {record.otype for record in objects}
    try:
        schema = AttributeSchema.infer(
            [e.vmap for e in events] + [r.ovmap for r in objects],
            declared=declared_names,
        )
    except ValueError as exc:
        raise OcelParseError(str(exc)) from None
    return OcelLog(
        events=tuple(events),
        objects={record.id: record for record in objects},
        object_types=frozenset(object_types),
        schema=schema,
    )


def write_xml_ocel(log: OcelLog) -> bytes:
    check_log(log)
    root = ET.Element("log")
    meta = ET.SubElement(root, "global", scope="log")
    ET.SubElement(meta, "string", key="version", value="1.0")
    ET.SubElement(meta, "string", key="ordering", value="timestamp")
    names = ET.SubElement(meta, "list", key="attribute-names")
    for name in sorted(log.schema.names):
        ET.SubElement(names, "string", key="attribute-name", value=name)
    types = ET.SubElement(meta, "list", key="object-types")
    for otype in sorted(log.object_types):
        ET.SubElement(types, "string", key="object-type", value=otype)

    events_el = ET.SubElement(root, "events")
    for event in log.events:
        entry = ET.SubElement(events_el, "event")
        ET.SubElement(entry, "string", key="id", value=event.id)
        ET.SubElement(entry, "string", key="activity", value=event.activity)
        ET.SubElement(entry, "date", key="timestamp", value=format_timestamp(event.timestamp))
        omap = ET.SubElement(entry, "list", key="omap")
        for oid in sorted(event.omap):
            ET.SubElement(omap, "string", key="object-id", value=oid)
        _write_xml_values(entry, "vmap", event.vmap)

    objects_el = ET.SubElement(root, "objects")
    for record in log.objects.values():
        entry = ET.SubElement(objects_el, "object")
        ET.SubElement(entry, "string", key="id", value=record.id)
        ET.SubElement(entry, "string", key="type", value=record.otype)
        _write_xml_values(entry, "ovmap", record.ovmap)

    ET.indent(root)
    buffer = _stdio.BytesIO()
    ET.ElementTree(root).write(buffer, encoding="utf-8", xml_declaration=True)
    buffer.write(b"\n")
    return buffer.getvalue()


def _write_xml_values(parent, key: str, vmap: Mapping[str, object]) -> None:
    holder = ET.SubElement(parent, "list", key=key)
    for name, value in vmap.items():
        tag, render = _XML_WRITERS[attribute_type_of(value)]
        ET.SubElement(holder, tag, key=name, value=render(value))


def _xml_scalar(element, where: str):
    value = element.get("value", "")
    tag = element.tag
    try:
        if tag == "string":
            return value
        if tag == "int":
            return int(value)
        if tag == "float":
            return float(value)
        if tag == "boolean":
            return value == "true"
        if tag == "date":
            return parse_timestamp(value, where)
    except ValueError:
        raise OcelParseError(f"{where}: bad {tag} value {value!r}") from None
    raise OcelParseError(f"{where}: unsupported value element <{tag}>")


def _xml_fields(entry) -> dict[str, object]:
    fields: dict[str, object] = {}
    for child in entry:
        if child.tag == "list":
            continue
        key = child.get("key")
        if key:
            fields[key] = _xml_scalar(child, f"<{entry.tag}> field {key!r}")
    return fields


def _xml_value_map(entry, key: str, where: str) -> dict[str, object]:
    values: dict[str, object] = {}
    for lst in entry.findall("list"):
        if lst.get("key") != key:
            continue
        for child in lst:
            name = child.get("key")
            if not name:
                raise OcelParseError(f"{where}: {key} entry without a key")
            values[sys.intern(name)] = _xml_scalar(child, f"{where}, attribute {name!r}")
    return values


# -- file helpers -----------------------------------------------------------


def read_ocel_file(path) -> OcelLog:
    """Load a log from a path, dispatching on extension (.xml*: XML, else JSON)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if str(path).lower().endswith((".xml", ".xmlocel")):
        return parse_xml_ocel(data)
    return parse_json_ocel(data)


def write_ocel_file(log: OcelLog, path) -> None:
    data = write_xml_ocel(log) if str(path).lower().endswith((".xml", ".xmlocel")) else write_json_ocel(log)
    with open(path, "wb") as fh:
        fh.write(data)


# -- flattening -------------------------------------------------------------


class FlatRow(NamedTuple):
    event_id: str
    activity: str
    timestamp: datetime
    vmap: Mapping[str, object]


@dataclass(frozen=True)
class FlatLog:
    """A traditional case-based view: one case per object of the chosen type."""

    case_notion: str
    cases: Mapping[str, tuple[FlatRow, ...]]
    attribute_names: tuple[str, ...] = ()

    def case_count(self) -> int:
        return len(self.cases)

    def total_rows(self) -> int:
        return sum(len(rows) for rows in self.cases.values())


def flatten(log: OcelLog, otype: str) -> FlatLog:
    """Flatten on one object type: each object becomes a case holding its
    lifecycle; an event related to k case objects is duplicated k times."""
    check_log(log)
    if otype not in log.object_types:
        raise ValueError(
            f"unknown object type {otype!r}; log has {sorted(log.object_types)}"
        )
    cases: dict[str, tuple[FlatRow, ...]] = {}
    for oid in log.objects_of_type(otype):
        rows = []
        for pos in log.object_positions(oid):
            event = log.events[pos]
            rows.append(FlatRow(event.id, event.activity, event.timestamp, event.vmap))
        cases[oid] = tuple(rows)
    return FlatLog(
        case_notion=otype,
        cases=cases,
        attribute_names=tuple(sorted(log.schema.names)),
    )


def write_flat_csv(flat: FlatLog) -> bytes:
    """Render a FlatLog as CSV: case_id, event_id, activity, timestamp, then
    one column per attribute name."""
    buffer = _stdio.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["case_id", "event_id", "activity", "timestamp", *flat.attribute_names])
    for case_id, rows in flat.cases.items():
        for row in rows:
            rendered = [_csv_value(row.vmap.get(name)) for name in flat.attribute_names]
            writer.writerow([case_id, row.event_id, row.activity,
                             format_timestamp(row.timestamp), *rendered])
    return buffer.getvalue().encode("utf-8")


def write_flat_json(flat: FlatLog) -> bytes:
    doc = {
        "case_notion": flat.case_notion,
        "cases": {
            case_id: [
                {
                    "id": row.event_id,
                    "activity": row.activity,
                    "timestamp": format_timestamp(row.timestamp),
                    "vmap": {k: _plain_value(v) for k, v in row.vmap.items()},
                }
                for row in rows
            ]
            for case_id, rows in flat.cases.items()
        },
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, datetime):
        return format_timestamp(value)
    return str(value)
