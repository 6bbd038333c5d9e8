import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rumix import (DatasetSchema, FeatureDescriptor, RawColumn, RawTable,
                   build_schema, encode_dataset)

DATASETS = Path(__file__).parent.parent / "datasets"


def dataset_path(name: str) -> Path:
    path = DATASETS / f"{name}.arff"
    if not path.exists():
        pytest.skip(f"benchmark dataset missing: {path} "
                    f"(run scripts/fetch_datasets.py)")
    return path


@pytest.fixture
def worked_schema():
    """The 12-bit walkthrough layout: five binary features plus a binary
    class, 2 bits each."""
    names_domains = [
        ("F1", ("morning", "evening")),
        ("F2", ("clear", "cloudy")),
        ("F3", ("excellent", "poor")),
        ("F4", ("warm", "cool")),
        ("F5", ("medium", "high")),
    ]
    features = []
    offset = 0
    for name, domain in names_domains:
        features.append(FeatureDescriptor(name, "categorical", domain,
                                          offset, len(domain)))
        offset += len(domain)
    return DatasetSchema(tuple(features), ("yes", "no"), offset + 2)


def make_table(rows, labels, feature_names=None, name="toy") -> RawTable:
    n = len(rows[0])
    feature_names = feature_names or [f"f{j}" for j in range(n)]
    columns = [RawColumn(feature_names[j], "categorical",
                         [r[j] for r in rows]) for j in range(n)]
    return RawTable(name, columns,
                    RawColumn("class", "categorical", list(labels)))


def make_dataset(rows, labels):
    table = make_table(rows, labels)
    schema = build_schema(table, [])
    return encode_dataset(table, schema)
