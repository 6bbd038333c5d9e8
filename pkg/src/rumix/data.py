"""Dataset loading, bit layout, and record encoding.

A schema assigns every feature a contiguous bit segment (one bit per
category) followed by a one-hot class segment, so each training record
becomes a fixed-width bit vector with exactly one set bit per segment.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from pathlib import Path

# Missing cells become a first-class category per affected feature.
MISSING_LABEL = "␀missing"

CATEGORICAL = "categorical"
NUMERIC = "numeric"

_MISSING_MARKERS = {"", "?"}


class DataFormatError(ValueError):
    """Raised for unreadable or malformed dataset files."""


class SchemaMismatchError(ValueError):
    """Raised when a table does not match the schema it is encoded with."""


# ---------------------------------------------------------------------------
# Raw (pre-encoding) tables
# ---------------------------------------------------------------------------

@dataclass
class RawColumn:
    """One loaded column: categorical cells are str|None, numeric float|None."""
    name: str
    kind: str                           # CATEGORICAL or NUMERIC
    values: list
    declared_domain: tuple | None = None  # ARFF nominal declaration, if any

    @property
    def has_missing(self) -> bool:
        return any(v is None for v in self.values)


@dataclass
class RawTable:
    """Typed columns plus the class column, before bit encoding."""
    name: str
    columns: list[RawColumn]
    class_column: RawColumn
    dropped_rows: int = 0               # rows rejected for a missing class value

    @property
    def n_rows(self) -> int:
        return len(self.class_column.values)

    @property
    def feature_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def row(self, i: int) -> list:
        return [c.values[i] for c in self.columns]

    def subset(self, indices) -> RawTable:
        """New table with the given rows, preserving column typing."""
        idx = list(indices)
        cols = [RawColumn(c.name, c.kind, [c.values[i] for i in idx],
                          c.declared_domain) for c in self.columns]
        cls = RawColumn(self.class_column.name, CATEGORICAL,
                        [self.class_column.values[i] for i in idx],
                        self.class_column.declared_domain)
        return RawTable(self.name, cols, cls, dropped_rows=0)


@dataclass(frozen=True)
class LoaderOptions:
    """Loader tweaks: class column by name, and per-column type overrides."""
    class_column: str | None = None
    categorical: frozenset = frozenset()   # force these columns categorical
    numeric: frozenset = frozenset()       # force these columns numeric


def _parse_number(token: str) -> float | None:
    try:
        x = float(token)
    except ValueError:
        return None
    return x if math.isfinite(x) else None


# ---------------------------------------------------------------------------
# ARFF loading (subset: @relation, @attribute nominal/numeric, @data, ?, %)
# ---------------------------------------------------------------------------

_ATTR_RE = re.compile(r"@attribute\s+(?:'([^']+)'|\"([^\"]+)\"|(\S+))\s+(.+)",
                      re.IGNORECASE)
_NUMERIC_TYPES = {"numeric", "real", "integer"}


def _split_arff_values(line: str) -> list[str]:
    """Split a comma-separated ARFF line, honoring single/double quotes."""
    out, buf, quote = [], [], None
    for ch in line:
        if quote:
            if ch == quote:
                quote = None
            else:
                buf.append(ch)
        elif ch in "'\"":
            quote = ch
        elif ch == ",":
            out.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    if quote:
        raise DataFormatError(f"unterminated quote in ARFF row: {line!r}")
    out.append("".join(buf).strip())
    return out


def _load_arff(text: str, name: str, options: LoaderOptions) -> RawTable:
    attr_names: list[str] = []
    attr_types: list = []               # tuple domain, or NUMERIC
    data_lines: list[str] = []
    in_data = False
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("%"):
            continue
        if in_data:
            data_lines.append(line)
            continue
        lowered = line.lower()
        if lowered.startswith("@relation"):
            continue
        if lowered.startswith("@attribute"):
            m = _ATTR_RE.match(line)
            if not m:
                raise DataFormatError(f"bad @attribute line: {line!r}")
            attr_name = next(g for g in m.groups()[:3] if g is not None)
            type_spec = m.group(4).strip()
            if type_spec.startswith("{"):
                if not type_spec.endswith("}"):
                    raise DataFormatError(f"bad nominal spec: {line!r}")
                domain = tuple(_split_arff_values(type_spec[1:-1]))
                attr_types.append(domain)
            elif type_spec.lower().split()[0] in _NUMERIC_TYPES:
                attr_types.append(NUMERIC)
            else:
                raise DataFormatError(
                    f"unsupported ARFF attribute type {type_spec!r} "
                    f"for {attr_name!r}")
            attr_names.append(attr_name)
        elif lowered.startswith("@data"):
            in_data = True
        else:
            raise DataFormatError(f"unrecognized ARFF directive: {line!r}")
    if not attr_names:
        raise DataFormatError("ARFF file declares no attributes")
    if not data_lines:
        raise DataFormatError("empty dataset: no data rows")

    rows = []
    for line in data_lines:
        if line.startswith("{"):
            raise DataFormatError("sparse ARFF data is not supported")
        values = _split_arff_values(line)
        if len(values) != len(attr_names):
            raise DataFormatError(
                f"ragged row: expected {len(attr_names)} values, "
                f"got {len(values)}: {line!r}")
        rows.append(values)

    return _assemble_table(name, attr_names, attr_types, rows, options,
                           validate_nominal=True)


# ---------------------------------------------------------------------------
# CSV loading (RFC-4180 quoting, header row required)
# ---------------------------------------------------------------------------

def _load_csv(text: str, name: str, options: LoaderOptions) -> RawTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("empty dataset: no header row") from None
    rows = [r for r in reader if r]
    if not rows:
        raise DataFormatError("empty dataset: no data rows")
    for r in rows:
        if len(r) != len(header):
            raise DataFormatError(
                f"ragged row: expected {len(header)} values, got {len(r)}")

    # A column is numeric iff every non-missing cell parses as a finite
    # number; explicit overrides win.
    attr_types = []
    for j, col_name in enumerate(header):
        if col_name in options.categorical:
            attr_types.append(None)     # categorical, observed domain
            continue
        cells = [r[j].strip() for r in rows]
        non_missing = [c for c in cells if c not in _MISSING_MARKERS]
        numeric = all(_parse_number(c) is not None for c in non_missing)
        if col_name in options.numeric and not numeric:
            raise DataFormatError(
                f"column {col_name!r} forced numeric but has "
                f"non-numeric cells")
        attr_types.append(NUMERIC if numeric else None)

    return _assemble_table(name, list(header), attr_types, rows, options,
                           validate_nominal=False)


def _assemble_table(name, attr_names, attr_types, rows, options,
                    validate_nominal) -> RawTable:
    if options.class_column is not None:
        if options.class_column not in attr_names:
            raise DataFormatError(
                f"class column {options.class_column!r} missing")
        class_idx = attr_names.index(options.class_column)
    else:
        class_idx = len(attr_names) - 1

    # Rows with a missing class value are unusable for supervised fitness.
    kept, dropped = [], 0
    for r in rows:
        if r[class_idx].strip() in _MISSING_MARKERS:
            dropped += 1
        else:
            kept.append(r)
    if not kept:
        raise DataFormatError("empty dataset: every row lacks a class value")

    columns: list[RawColumn] = []
    class_column = None
    for j, attr_name in enumerate(attr_names):
        declared = attr_types[j] if isinstance(attr_types[j], tuple) else None
        if j == class_idx:
            values = []
            for r in kept:
                cell = r[j].strip()
                if declared is not None and validate_nominal \
                        and cell not in declared:
                    raise DataFormatError(
                        f"value {cell!r} not in declared domain of "
                        f"class {attr_name!r}")
                values.append(cell)
            class_column = RawColumn(attr_name, CATEGORICAL, values, declared)
            continue
        force_cat = attr_name in options.categorical
        is_numeric = attr_types[j] == NUMERIC and not force_cat
        values = []
        for r in kept:
            cell = r[j].strip()
            if cell in _MISSING_MARKERS:
                values.append(None)
            elif is_numeric:
                x = _parse_number(cell)
                if x is None:
                    raise DataFormatError(
                        f"non-numeric cell {cell!r} in numeric column "
                        f"{attr_name!r}")
                values.append(x)
            else:
                if declared is not None and validate_nominal \
                        and cell not in declared:
                    raise DataFormatError(
                        f"value {cell!r} not in declared domain of "
                        f"{attr_name!r}")
                values.append(cell)
        columns.append(RawColumn(attr_name, NUMERIC if is_numeric
                                 else CATEGORICAL, values, declared))

    return RawTable(name, columns, class_column, dropped_rows=dropped)


def load_dataset(source, format: str | None = None,
                 options: LoaderOptions | None = None) -> RawTable:
    """Load an ARFF or CSV dataset into a typed raw table.

    ``source`` is a path or an open text/binary stream.  ``format`` is
    "arff" or "csv"; when omitted it is inferred from the file suffix.
    """
    options = options or LoaderOptions()
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise FileNotFoundError(f"dataset not found: {path}")
        text = path.read_text(encoding="utf-8-sig")
        name = path.stem
        if format is None:
            format = "arff" if path.suffix.lower() == ".arff" else "csv"
    else:
        data = source.read()
        text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
        name = getattr(source, "name", "<stream>")
        if format is None:
            raise DataFormatError("format required when loading a stream")
    if not text.strip():
        raise DataFormatError("empty file")
    if format == "arff":
        return _load_arff(text, name, options)
    if format == "csv":
        return _load_csv(text, name, options)
    raise DataFormatError(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# Schema: bit layout over feature segments plus the class segment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureDescriptor:
    """Bit segment of one feature: one bit per category label."""
    name: str
    kind: str
    domain: tuple
    bit_offset: int
    width: int
    cut: float | None = None            # split threshold for numeric features

    def __post_init__(self):
        if self.width < 1 or self.width != len(self.domain):
            raise ValueError(f"feature {self.name!r}: bad width")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"feature {self.name!r}: duplicate labels")


@dataclass(frozen=True)
class DatasetSchema:
    """Ordered feature segments plus class labels; defines total rule width."""
    features: tuple
    class_labels: tuple
    total_width: int

    def __post_init__(self):
        offset = 0
        for f in self.features:
            if f.bit_offset != offset:
                raise ValueError(f"feature {f.name!r}: offset gap")
            offset += f.width
        if len(self.class_labels) < 2:
            raise ValueError("schema needs at least two class labels")
        if self.total_width != offset + len(self.class_labels):
            raise ValueError("total_width does not match segment widths")

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    @property
    def class_offset(self) -> int:
        return self.total_width - len(self.class_labels)

    def feature_segments(self) -> list[tuple[int, int]]:
        return [(f.bit_offset, f.width) for f in self.features]


def _numeric_domain(cut: float | None) -> tuple:
    if cut is None:
        return ("*",)                   # constant feature: one catch-all bin
    return (f"≤{cut!r}", f">{cut!r}")


def build_schema(table: RawTable, cuts) -> DatasetSchema:
    """Derive the bit layout from a training table and its discretizer cuts.

    Categorical domains keep first-appearance order; numeric features get
    the two bins of their cut.  Any column with missing cells gains an
    extra missing-value category.
    """
    if table.n_rows == 0:
        raise ValueError("cannot build a schema from zero rows")
    cut_by_name = {c.feature: c.cut_value for c in cuts}

    features = []
    offset = 0
    for col in table.columns:
        if col.kind == NUMERIC:
            # absent cut = no valid split: the feature collapses to one bin
            cut = cut_by_name.get(col.name)
            domain = list(_numeric_domain(cut))
        else:
            cut = None
            domain = []
            seen = {}
            for v in col.values:
                if v is not None and v not in seen:
                    seen[v] = True
                    domain.append(v)
        if col.has_missing or not domain:
            domain.append(MISSING_LABEL)
        features.append(FeatureDescriptor(col.name, col.kind, tuple(domain),
                                          offset, len(domain), cut))
        offset += len(domain)

    class_domain = []
    seen = {}
    for v in table.class_column.values:
        if v not in seen:
            seen[v] = True
            class_domain.append(v)
    return DatasetSchema(tuple(features), tuple(class_domain),
                         offset + len(class_domain))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EncodedInstance:
    """Bit vector of schema width; class_index is -1 for labels unseen
    in training (possible at predict time only)."""
    bits: int
    class_index: int


def _feature_bit(value, feat: FeatureDescriptor, train: bool) -> int | None:
    """Local bit index for a cell value, or None for an all-zero segment."""
    if value is None:
        if MISSING_LABEL in feat.domain:
            return feat.domain.index(MISSING_LABEL)
        if train:
            raise SchemaMismatchError(
                f"missing value in {feat.name!r} but schema has no "
                f"missing category")
        return None
    if feat.kind == NUMERIC:
        if feat.cut is None:
            return 0
        return 0 if value <= feat.cut else 1
    try:
        return feat.domain.index(value)
    except ValueError:
        if train:
            raise SchemaMismatchError(
                f"value {value!r} of {feat.name!r} not in schema "
                f"domain") from None
        if MISSING_LABEL in feat.domain:
            return feat.domain.index(MISSING_LABEL)
        return None                     # unseen category: zero segment


def encode_instance(row, class_value, schema: DatasetSchema,
                    train: bool = True) -> EncodedInstance:
    """Encode one raw row (cells aligned with schema.features)."""
    if len(row) != len(schema.features):
        raise SchemaMismatchError(
            f"row arity {len(row)} != schema arity {len(schema.features)}")
    bits = 0
    for value, feat in zip(row, schema.features):
        local = _feature_bit(value, feat, train)
        if local is not None:
            bits |= 1 << (feat.bit_offset + local)
    if class_value is None:
        class_index = -1
    else:
        try:
            class_index = schema.class_labels.index(class_value)
        except ValueError:
            if train:
                raise SchemaMismatchError(
                    f"class {class_value!r} not in schema") from None
            class_index = -1
    if class_index >= 0:
        bits |= 1 << (schema.class_offset + class_index)
    return EncodedInstance(bits, class_index)


def decode_instance(instance: EncodedInstance, schema: DatasetSchema):
    """Recover (feature labels, class label) from an encoded instance."""
    labels = []
    for feat in schema.features:
        seg = (instance.bits >> feat.bit_offset) & ((1 << feat.width) - 1)
        if seg == 0:
            labels.append(None)
        else:
            labels.append(feat.domain[seg.bit_length() - 1]
                          if seg & (seg - 1) == 0 else None)
    cls = (schema.class_labels[instance.class_index]
           if instance.class_index >= 0 else None)
    return labels, cls


class Dataset:
    """Immutable encoded instance table bound to a schema."""

    def __init__(self, schema: DatasetSchema, instances):
        instances = tuple(instances)
        if not instances:
            raise ValueError("dataset has no instances")
        for inst in instances:
            if inst.bits >> schema.total_width:
                raise ValueError("instance wider than schema")
        self.schema = schema
        self.instances = instances
        counts = [0] * schema.n_classes
        for inst in instances:
            if inst.class_index >= 0:
                counts[inst.class_index] += 1
        # ties broken toward the lowest class index
        self.majority_class = max(range(schema.n_classes),
                                  key=lambda c: (counts[c], -c))
        self.class_counts = tuple(counts)

    def __len__(self) -> int:
        return len(self.instances)


def encode_dataset(table: RawTable, schema: DatasetSchema,
                   train: bool = True) -> Dataset:
    """Encode every row of a raw table against a schema."""
    instances = [
        encode_instance(table.row(i), table.class_column.values[i],
                        schema, train=train)
        for i in range(table.n_rows)
    ]
    return Dataset(schema, instances)
