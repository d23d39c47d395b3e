"""Pipelines, persistent store and reports."""

from .catalog import GroupCatalog, g_count, generated_by_involutions, small_group_catalog
from .pipelines import CycleSpace, achievable_orders, five_arc_pipeline, grr_lower_pipeline
from .records import CensusRecord, PipelineConfig, dedup_records
from .store import CensusStore, census_report, ingest_census_crosscheck, store_records

__all__ = [
    "CensusRecord",
    "CensusStore",
    "CycleSpace",
    "GroupCatalog",
    "PipelineConfig",
    "achievable_orders",
    "census_report",
    "dedup_records",
    "five_arc_pipeline",
    "g_count",
    "generated_by_involutions",
    "grr_lower_pipeline",
    "ingest_census_crosscheck",
    "small_group_catalog",
    "store_records",
]
