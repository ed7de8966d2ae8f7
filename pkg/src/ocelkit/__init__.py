"""ocelkit: filtering, sampling and statistics for object-centric event logs."""

from .model import (
    AttributeSchema,
    Event,
    ObjectRecord,
    OcelError,
    OcelLog,
    RelationSet,
    ValidationReport,
    Violation,
    project_events,
    project_object_types,
    project_objects,
    restrict_relations,
    validate,
)
from .io import (
    FlatLog,
    OcelParseError,
    flatten,
    parse_json_ocel,
    parse_xml_ocel,
    read_ocel_file,
    write_flat_csv,
    write_flat_json,
    write_json_ocel,
    write_ocel_file,
    write_xml_ocel,
)
from .lifecycle import (
    EssentialTag,
    LifecycleIndex,
    essential_events,
    interaction_lifecycle,
    lifecycle,
)
from .filters import (
    DropEmptyEventsFilter,
    DropOrphanObjectsFilter,
    EssentialEventFilter,
    EssentialOrFrequentEventFilter,
    ExplicitEventFilter,
    ExplicitObjectFilter,
    ExplicitRelationFilter,
    ExplicitTypeFilter,
    FilterPipeline,
    MinActivityCountEventFilter,
    MinActivityRatioPerTypeFilter,
    MinEventsPerTypeFilter,
    MinObjectsPerTypeFilter,
    PipelineError,
    RelationRatioFilter,
    apply_pipeline,
    select_events_essential,
    select_events_essential_or_frequent,
    select_events_min_activity_count,
    select_relations_min_unique_ratio,
    select_types_min_activity_ratio,
    select_types_min_events,
    select_types_min_objects,
)
from .sampling import (
    RandomSampler,
    SamplePartition,
    SampleSpec,
    Strategy,
    connected_event_samples,
    sample,
    sample_events,
    sample_object_types,
    sample_objects,
)
from .stats import (
    DiffEntry,
    DiffReport,
    InconsistentDiffError,
    LogSummary,
    RelationMatrix,
    diff,
    relation_matrix,
    summarize,
)
from .generate import GenParams, generate_log

__version__ = "0.1.0"

__all__ = [
    "AttributeSchema",
    "DiffEntry",
    "DiffReport",
    "DropEmptyEventsFilter",
    "DropOrphanObjectsFilter",
    "EssentialEventFilter",
    "EssentialOrFrequentEventFilter",
    "EssentialTag",
    "Event",
    "ExplicitEventFilter",
    "ExplicitObjectFilter",
    "ExplicitRelationFilter",
    "ExplicitTypeFilter",
    "FilterPipeline",
    "FlatLog",
    "GenParams",
    "InconsistentDiffError",
    "LifecycleIndex",
    "LogSummary",
    "MinActivityCountEventFilter",
    "MinActivityRatioPerTypeFilter",
    "MinEventsPerTypeFilter",
    "MinObjectsPerTypeFilter",
    "ObjectRecord",
    "OcelError",
    "OcelLog",
    "OcelParseError",
    "PipelineError",
    "RandomSampler",
    "RelationMatrix",
    "RelationRatioFilter",
    "RelationSet",
    "SamplePartition",
    "SampleSpec",
    "Strategy",
    "ValidationReport",
    "Violation",
    "apply_pipeline",
    "connected_event_samples",
    "diff",
    "essential_events",
    "flatten",
    "generate_log",
    "interaction_lifecycle",
    "lifecycle",
    "parse_json_ocel",
    "parse_xml_ocel",
    "project_events",
    "project_object_types",
    "project_objects",
    "read_ocel_file",
    "relation_matrix",
    "restrict_relations",
    "sample",
    "sample_events",
    "sample_object_types",
    "sample_objects",
    "select_events_essential",
    "select_events_essential_or_frequent",
    "select_events_min_activity_count",
    "select_relations_min_unique_ratio",
    "select_types_min_activity_ratio",
    "select_types_min_events",
    "select_types_min_objects",
    "summarize",
    "validate",
    "write_flat_csv",
    "write_flat_json",
    "write_json_ocel",
    "write_ocel_file",
    "write_xml_ocel",
]
