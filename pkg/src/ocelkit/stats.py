"""Summary statistics, the activity/object-type relation matrix, and
before/after reduction reports.

Retention ratios are kept as exact fractions; the display form truncates to a
whole percent (24 -> 16 events reads as 66%).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .model import OcelError, OcelLog, check_log

DIMENSIONS = ("events", "objects", "object_types", "relations")


class InconsistentDiffError(OcelError):
    """A dimension grew from zero, which no filter pipeline can produce."""


@dataclass(frozen=True)
class LogSummary:
    """Exact counts describing one log."""

    event_count: int
    object_count: int
    objects_per_type: Mapping[str, int]
    events_per_type: Mapping[str, int]
    events_per_activity: Mapping[str, int]
    activity_ratio_per_type: Mapping[str, Fraction]
    relation_count: int

    @property
    def type_count(self) -> int:
        return len(self.objects_per_type)

    def dimension(self, name: str) -> int:
        return {
            "events": self.event_count,
            "objects": self.object_count,
            "object_types": self.type_count,
            "relations": self.relation_count,
        }[name]

    def to_dict(self) -> dict:
        return {
            "events": self.event_count,
            "objects": self.object_count,
            "object_types": self.type_count,
            "relations": self.relation_count,
            "objects_per_type": dict(sorted(self.objects_per_type.items())),
            "events_per_type": dict(sorted(self.events_per_type.items())),
            "events_per_activity": dict(sorted(self.events_per_activity.items())),
            "activity_ratio_per_type": {
                t: float(r) for t, r in sorted(self.activity_ratio_per_type.items())
            },
        }


def summarize(log: OcelLog) -> LogSummary:
    check_log(log)
    objects_per_type = {t: 0 for t in log.object_types}
    for record in log.objects.values():
        objects_per_type[record.otype] = objects_per_type.get(record.otype, 0) + 1

    events_per_type = {t: 0 for t in log.object_types}
    relation_count = 0
    for event in log.events:
        relation_count += len(event.omap)
        touched = set()
        for oid in event.omap:
            record = log.objects.get(oid)
            if record is not None:
                touched.add(record.otype)
        for otype in touched:
            events_per_type[otype] = events_per_type.get(otype, 0) + 1

    ratios = {t: log.activity_ratio(t) for t in log.object_types}
    return LogSummary(
        event_count=len(log.events),
        object_count=len(log.objects),
        objects_per_type=objects_per_type,
        events_per_type=events_per_type,
        events_per_activity={a: log.activity_count(a) for a in log.activities},
        activity_ratio_per_type=ratios,
        relation_count=relation_count,
    )


@dataclass(frozen=True)
class MatrixCell:
    """One (object type, activity) pair: how many object references events of
    the activity carry, how many distinct objects that is, and their ratio."""

    object_type: str
    activity: str
    incidences: int
    unique_objects: int
    cooccurring: bool

    @property
    def ratio(self) -> Fraction:
        if self.incidences == 0:
            return Fraction(1)
        return Fraction(self.unique_objects, self.incidences)


@dataclass(frozen=True)
class RelationMatrix:
    object_types: tuple[str, ...]
    activities: tuple[str, ...]
    cells: Mapping[tuple[str, str], MatrixCell]

    def cell(self, object_type: str, activity: str) -> MatrixCell:
        return self.cells[(object_type, activity)]

    def to_dict(self) -> dict:
        return {
            "object_types": list(self.object_types),
            "activities": list(self.activities),
            "cells": [
                {
                    "object_type": cell.object_type,
                    "activity": cell.activity,
                    "incidences": cell.incidences,
                    "unique_objects": cell.unique_objects,
                    "ratio": float(cell.ratio),
                    "cooccurring": cell.cooccurring,
                }
                for _, cell in sorted(self.cells.items())
            ],
        }


def relation_matrix(log: OcelLog) -> RelationMatrix:
    """Tally the full object-type x activity grid of the log."""
    check_log(log)
    incidences: dict[tuple[str, str], int] = {}
    uniques: dict[tuple[str, str], set[str]] = {}
    for event in log.events:
        for oid in event.omap:
            record = log.objects.get(oid)
            if record is None:
                continue
            key = (record.otype, event.activity)
            incidences[key] = incidences.get(key, 0) + 1
            uniques.setdefault(key, set()).add(oid)

    object_types = tuple(sorted(log.object_types))
    activities = tuple(sorted(log.activities))
    cells = {}
    for otype in object_types:
        for activity in activities:
            key = (otype, activity)
            count = incidences.get(key, 0)
            cells[key] = MatrixCell(
                object_type=otype,
                activity=activity,
                incidences=count,
                unique_objects=len(uniques.get(key, ())),
                cooccurring=count > 0,
            )
    return RelationMatrix(object_types=object_types, activities=activities, cells=cells)


@dataclass(frozen=True)
class DiffEntry:
    """Before/after of one reduction step."""

    label: str
    before: LogSummary
    after: LogSummary

    def removed(self, dimension: str) -> int:
        return self.before.dimension(dimension) - self.after.dimension(dimension)

    def retention(self, dimension: str) -> Fraction:
        before = self.before.dimension(dimension)
        after = self.after.dimension(dimension)
        if before == 0:
            if after != 0:
                raise InconsistentDiffError(
                    f"{self.label}: dimension {dimension!r} grew from zero to {after}"
                )
            return Fraction(1)
        return Fraction(after, before)

    def retention_percent(self, dimension: str) -> int:
        """Whole-percent retention for display, truncated (16/24 -> 66)."""
        return int(100 * self.retention(dimension))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "before": self.before.to_dict(),
            "after": self.after.to_dict(),
            "removed": {d: self.removed(d) for d in DIMENSIONS},
            "retention_percent": {d: self.retention_percent(d) for d in DIMENSIONS},
            "retention_exact": {
                d: [self.retention(d).numerator, self.retention(d).denominator]
                for d in DIMENSIONS
            },
        }


@dataclass(frozen=True)
class DiffReport:
    entries: tuple[DiffEntry, ...] = ()

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def overall(self) -> DiffEntry | None:
        if not self.entries:
            return None
        return DiffEntry(
            label="overall", before=self.entries[0].before, after=self.entries[-1].after
        )

    def to_dict(self) -> dict:
        overall = self.overall()
        return {
            "steps": [entry.to_dict() for entry in self.entries],
            "overall": overall.to_dict() if overall else None,
        }


def diff(before: LogSummary, after: LogSummary, label: str = "diff") -> DiffReport:
    """Single-entry reduction report between two summaries."""
    entry = DiffEntry(label=label, before=before, after=after)
    for dimension in DIMENSIONS:
        entry.retention(dimension)  # surfaces inconsistency eagerly
    return DiffReport(entries=(entry,))
