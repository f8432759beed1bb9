from .fixtures import fixture_probability, has_fixture, identical_k_win_fixture
from .regions import (
    OracleEstimate,
    PointClassification,
    RegionPredicate,
    classify_points,
    oracle_probability,
    oracle_table,
    region_predicate,
)

__all__ = [
    "OracleEstimate",
    "PointClassification",
    "RegionPredicate",
    "classify_points",
    "fixture_probability",
    "has_fixture",
    "identical_k_win_fixture",
    "oracle_probability",
    "oracle_table",
    "region_predicate",
]
