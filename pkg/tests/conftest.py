from __future__ import annotations

from pathlib import Path

import pytest

from ocelkit import (
    OcelLog,
    project_object_types,
    read_ocel_file,
    restrict_relations,
    select_relations_min_unique_ratio,
)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def o2c_path() -> Path:
    return DATA_DIR / "o2c_sample.jsonocel"


@pytest.fixture(scope="session")
def o2c_log(o2c_path) -> OcelLog:
    return read_ocel_file(o2c_path)


@pytest.fixture(scope="session")
def core_log(o2c_log) -> OcelLog:
    """The sample log projected onto its three high-signal object types."""
    return project_object_types(o2c_log, {"Orders", "Items", "Deliveries"})


@pytest.fixture(scope="session")
def pruned_log(core_log) -> OcelLog:
    """The type-filtered log with divergence-prone relations pruned."""
    return restrict_relations(core_log, select_relations_min_unique_ratio(core_log, 0.5))
