"""Outlier selectors and the filter pipeline.

Each selector computes a kept-set from the log (object types, events, or
relation pairs); the matching projection from :mod:`ocelkit.model` applies
it. The transformer classes wrap a selector + projection pair behind the
scikit-learn estimator API so steps can be cloned, inspected via
``get_params``, and composed - both in :class:`FilterPipeline` (which also
reports per-step reductions) and in a plain ``sklearn.pipeline.Pipeline``.

Thresholds compare with ``>=`` and ratios are exact fractions, so a type
whose ratio is 1/4 survives a threshold of 0.25 but not 0.2500001.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .lifecycle import essential_events
from .model import (
    OcelError,
    OcelLog,
    RelationSet,
    check_log,
    project_events,
    project_object_types,
    project_objects,
    restrict_relations,
)
from .stats import DiffEntry, DiffReport, summarize

PIPELINE_SCHEMA = "ocelkit-pipeline/1"


class PipelineError(OcelError):
    """A pipeline descriptor or step parameter is invalid."""


# -- selectors ---------------------------------------------------------------


def select_types_min_objects(log: OcelLog, n: int) -> set[str]:
    """Object types with at least n distinct objects."""
    check_log(log)
    _check_count(n)
    return {t for t in log.object_types if len(log.objects_of_type(t)) >= n}


def select_types_min_events(log: OcelLog, n: int) -> set[str]:
    """Object types related to at least n events."""
    check_log(log)
    _check_count(n)
    counts = {t: 0 for t in log.object_types}
    for event in log.events:
        touched = set()
        for oid in event.omap:
            record = log.objects.get(oid)
            if record is not None:
                touched.add(record.otype)
        for otype in touched:
            counts[otype] += 1
    return {t for t, c in counts.items() if c >= n}


def select_types_min_activity_ratio(log: OcelLog, r) -> set[str]:
    """Object types whose unique-activity ratio is at least r.

    The ratio sums, over the type's objects, the number of distinct
    activities in each lifecycle, divided by the summed lifecycle lengths; a
    heavily repeated activity pushes it down. Types whose objects occur in no
    event rate 1 and are never removed here.
    """
    check_log(log)
    _check_ratio(r)
    return {t for t in log.object_types if log.activity_ratio(t) >= r}


def select_events_min_activity_count(log: OcelLog, n: int) -> set[str]:
    """Events whose activity occurs at least n times in the log."""
    check_log(log)
    _check_count(n)
    return {e.id for e in log.events if log.activity_count(e.activity) >= n}


def select_events_essential(log: OcelLog) -> set[str]:
    """Events tagged essential (lifecycle or interaction boundaries, or
    synchronization points)."""
    check_log(log)
    return set(essential_events(log))


def select_events_essential_or_frequent(log: OcelLog, n: int) -> set[str]:
    """Union of the essential events and the frequent-activity events."""
    return select_events_min_activity_count(log, n) | select_events_essential(log)


def select_relations_min_unique_ratio(log: OcelLog, r) -> RelationSet:
    """Allowed (object type, activity) pairs by unique-object ratio.

    For a pair, the ratio divides the number of distinct objects of the type
    seen on events of the activity by the total number of such object
    references; many references to few objects signal a divergence-prone
    relation. Pairs without any reference are vacuously allowed.
    """
    check_log(log)
    _check_ratio(r)
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
    allowed = set()
    for otype in log.object_types:
        for activity in log.activities:
            key = (otype, activity)
            count = incidences.get(key, 0)
            if count == 0 or Fraction(len(uniques[key]), count) >= r:
                allowed.add(key)
    return RelationSet.of(allowed)


def _check_count(n) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"threshold must be a nonnegative integer, got {n!r}")


def _check_ratio(r) -> None:
    if isinstance(r, bool) or not isinstance(r, (int, float, Fraction)) or not 0 <= r <= 1:
        raise ValueError(f"ratio must lie in [0, 1], got {r!r}")


# -- filter steps ------------------------------------------------------------


class LogFilterStep(TransformerMixin, BaseEstimator):
    """Base class: fit computes the kept-set, transform projects the log."""

    kind: str = ""

    def fit(self, log: OcelLog, y=None):
        check_log(log)
        self._validate_params()
        self.selection_ = self._select(log)
        return self

    def transform(self, log: OcelLog) -> OcelLog:
        check_log(log)
        if not hasattr(self, "selection_"):
            raise RuntimeError(f"{type(self).__name__} is not fitted")
        return self._apply(log, self.selection_)

    def _validate_params(self) -> None:
        pass

    def _select(self, log: OcelLog):
        raise NotImplementedError

    def _apply(self, log: OcelLog, selection) -> OcelLog:
        raise NotImplementedError

    def descriptor_params(self) -> dict:
        return {k: v for k, v in self.get_params().items()}

    def label(self) -> str:
        params = self.descriptor_params()
        if not params:
            return self.kind
        rendered = ", ".join(f"{k}={_short(v)}" for k, v in sorted(params.items()))
        return f"{self.kind}({rendered})"


def _short(value) -> str:
    if isinstance(value, (list, tuple, set, frozenset)):
        return f"[{len(value)} items]"
    return repr(value)


class _TypeSelectionStep(LogFilterStep):
    def _apply(self, log: OcelLog, selection) -> OcelLog:
        return project_object_types(log, selection & log.object_types)


class _EventSelectionStep(LogFilterStep):
    def _apply(self, log: OcelLog, selection) -> OcelLog:
        return project_events(log, selection & set(log.event_ids))


class MinObjectsPerTypeFilter(_TypeSelectionStep):
    """Keep object types with at least ``n`` distinct objects."""

    kind = "OTF1"

    def __init__(self, n: int = 1):
        self.n = n

    def _validate_params(self):
        _check_count(self.n)

    def _select(self, log):
        return select_types_min_objects(log, self.n)


class MinEventsPerTypeFilter(_TypeSelectionStep):
    """Keep object types related to at least ``n`` events."""

    kind = "OTF2"

    def __init__(self, n: int = 1):
        self.n = n

    def _validate_params(self):
        _check_count(self.n)

    def _select(self, log):
        return select_types_min_events(log, self.n)


class MinActivityRatioPerTypeFilter(_TypeSelectionStep):
    """Keep object types whose unique-activity ratio is at least ``r``."""

    kind = "OTF3"

    def __init__(self, r: float = 0.0):
        self.r = r

    def _validate_params(self):
        _check_ratio(self.r)

    def _select(self, log):
        return select_types_min_activity_ratio(log, self.r)


class MinActivityCountEventFilter(_EventSelectionStep):
    """Keep events whose activity occurs at least ``n`` times."""

    kind = "OE1"

    def __init__(self, n: int = 0):
        self.n = n

    def _validate_params(self):
        _check_count(self.n)

    def _select(self, log):
        return select_events_min_activity_count(log, self.n)


class EssentialEventFilter(_EventSelectionStep):
    """Keep only essential events."""

    kind = "OE2"

    def _select(self, log):
        return select_events_essential(log)


class EssentialOrFrequentEventFilter(_EventSelectionStep):
    """Keep events that are essential or whose activity occurs >= ``n`` times."""

    kind = "OE3"

    def __init__(self, n: int = 0):
        self.n = n

    def _validate_params(self):
        _check_count(self.n)

    def _select(self, log):
        return select_events_essential_or_frequent(log, self.n)


class RelationRatioFilter(LogFilterStep):
    """Drop event-object relations whose unique-object ratio is below ``r``."""

    kind = "OA_RATIO"

    def __init__(self, r: float = 0.0):
        self.r = r

    def _validate_params(self):
        _check_ratio(self.r)

    def _select(self, log):
        return select_relations_min_unique_ratio(log, self.r)

    def _apply(self, log, selection):
        return restrict_relations(log, selection)


class ExplicitRelationFilter(LogFilterStep):
    """Keep only explicitly allowed (object type, activity) relations.

    Pairs naming a type or activity absent from the log are vacuous: they
    allow nothing that exists, so they have no effect. This lets a selection
    made against one snapshot ride along behind type/event filters in the
    same pipeline.
    """

    kind = "OA_EXPLICIT"

    def __init__(self, pairs: Sequence[tuple[str, str]] = ()):
        self.pairs = pairs

    def _select(self, log):
        return RelationSet.of((str(t), str(a)) for t, a in self.pairs)

    def _apply(self, log, selection):
        return restrict_relations(log, selection)


class ExplicitTypeFilter(LogFilterStep):
    """Project onto an explicit set of object types."""

    kind = "OT_EXPLICIT"

    def __init__(self, types: Sequence[str] = ()):
        self.types = types

    def _select(self, log):
        return {str(t) for t in self.types}

    def _apply(self, log, selection):
        return project_object_types(log, selection)


class ExplicitEventFilter(LogFilterStep):
    """Project onto an explicit set of events."""

    kind = "E_EXPLICIT"

    def __init__(self, ids: Sequence[str] = ()):
        self.ids = ids

    def _select(self, log):
        return {str(i) for i in self.ids}

    def _apply(self, log, selection):
        return project_events(log, selection)


class ExplicitObjectFilter(LogFilterStep):
    """Project onto an explicit set of objects."""

    kind = "O_EXPLICIT"

    def __init__(self, ids: Sequence[str] = ()):
        self.ids = ids

    def _select(self, log):
        return {str(i) for i in self.ids}

    def _apply(self, log, selection):
        return project_objects(log, selection)


class DropEmptyEventsFilter(_EventSelectionStep):
    """Cleanup: drop events whose omap became empty."""

    kind = "DROP_EMPTY_EVENTS"

    def _select(self, log):
        return {e.id for e in log.events if e.omap}


class DropOrphanObjectsFilter(LogFilterStep):
    """Cleanup: drop objects that appear in no event."""

    kind = "DROP_ORPHAN_OBJECTS"

    def _select(self, log):
        return {oid for oid in log.objects if log.object_positions(oid)}

    def _apply(self, log, selection):
        return project_objects(log, selection & set(log.objects))


STEP_CLASSES: dict[str, type[LogFilterStep]] = {
    cls.kind: cls
    for cls in (
        MinObjectsPerTypeFilter,
        MinEventsPerTypeFilter,
        MinActivityRatioPerTypeFilter,
        MinActivityCountEventFilter,
        EssentialEventFilter,
        EssentialOrFrequentEventFilter,
        RelationRatioFilter,
        ExplicitRelationFilter,
        ExplicitTypeFilter,
        ExplicitEventFilter,
        ExplicitObjectFilter,
        DropEmptyEventsFilter,
        DropOrphanObjectsFilter,
    )
}


# -- pipeline ----------------------------------------------------------------


class FilterPipeline:
    """An ordered list of filter steps, serializable to a descriptor file."""

    def __init__(self, steps: Iterable[LogFilterStep] = ()):
        self.steps = list(steps)
        for step in self.steps:
            if not isinstance(step, LogFilterStep):
                raise PipelineError(f"not a filter step: {step!r}")

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def apply(self, log: OcelLog) -> tuple[OcelLog, DiffReport]:
        """Run every step in order, recording counts before and after each."""
        check_log(log)
        entries = []
        current = log
        current_summary = summarize(current) if self.steps else None
        for step in self.steps:
            before = current_summary
            try:
                current = step.fit_transform(current)
            except ValueError as exc:
                raise PipelineError(f"step {step.label()}: {exc}") from exc
            current_summary = summarize(current)
            entries.append(DiffEntry(label=step.label(), before=before, after=current_summary))
        return current, DiffReport(entries=tuple(entries))

    # serialization

    def to_descriptor(self) -> dict:
        return {
            "schema": PIPELINE_SCHEMA,
            "steps": [
                {"kind": step.kind, "params": _plain_params(step.descriptor_params())}
                for step in self.steps
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_descriptor(), indent=1)

    @classmethod
    def from_descriptor(cls, descriptor: dict) -> "FilterPipeline":
        if not isinstance(descriptor, dict):
            raise PipelineError("pipeline descriptor must be a map")
        schema = descriptor.get("schema")
        if schema != PIPELINE_SCHEMA:
            raise PipelineError(f"unsupported pipeline schema {schema!r}")
        raw_steps = descriptor.get("steps")
        if not isinstance(raw_steps, list):
            raise PipelineError("pipeline descriptor needs a 'steps' list")
        steps = []
        for position, raw in enumerate(raw_steps):
            if not isinstance(raw, dict) or "kind" not in raw:
                raise PipelineError(f"step {position}: each step needs a 'kind'")
            kind = raw["kind"]
            params = raw.get("params", {})
            if kind not in STEP_CLASSES:
                raise PipelineError(f"step {position}: unknown step kind {kind!r}")
            if not isinstance(params, dict):
                raise PipelineError(f"step {position}: 'params' must be a map")
            step_cls = STEP_CLASSES[kind]
            try:
                step = step_cls(**_revive_params(kind, params))
                step._validate_params()
            except (TypeError, ValueError) as exc:
                raise PipelineError(f"step {position} ({kind}): {exc}") from None
            steps.append(step)
        return cls(steps)

    @classmethod
    def from_json(cls, text: str | bytes) -> "FilterPipeline":
        try:
            descriptor = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PipelineError(f"malformed pipeline descriptor: {exc}") from None
        return cls.from_descriptor(descriptor)

    def __repr__(self) -> str:
        inner = ", ".join(step.label() for step in self.steps)
        return f"FilterPipeline([{inner}])"


def _plain_params(params: dict) -> dict:
    plain = {}
    for key, value in params.items():
        if isinstance(value, (set, frozenset)):
            value = sorted(value)
        if isinstance(value, (list, tuple)):
            value = [list(v) if isinstance(v, (tuple, list)) else v for v in value]
        plain[key] = value
    return plain


def _revive_params(kind: str, params: dict) -> dict:
    revived = dict(params)
    if kind == "OA_EXPLICIT" and "pairs" in revived:
        pairs = revived["pairs"]
        if not isinstance(pairs, list) or not all(
            isinstance(p, (list, tuple)) and len(p) == 2 for p in pairs
        ):
            raise ValueError("'pairs' must be a list of [object_type, activity] pairs")
        revived["pairs"] = [tuple(p) for p in pairs]
    return revived


def apply_pipeline(log: OcelLog, pipeline: FilterPipeline) -> tuple[OcelLog, DiffReport]:
    """Apply all steps of a pipeline in order; see :meth:`FilterPipeline.apply`."""
    if not isinstance(pipeline, FilterPipeline):
        pipeline = FilterPipeline(pipeline)
    return pipeline.apply(log)
