"""Supervised binary discretization by the information-gain split criterion.

Each numeric feature gets at most one cut: the midpoint between adjacent
distinct sorted values that minimizes the class-weighted entropy of the
two induced halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SplitCut:
    """A binary threshold on one numeric feature."""
    feature: str
    cut_value: float

    @property
    def bins(self) -> tuple[str, str]:
        return (f"≤{self.cut_value!r}", f">{self.cut_value!r}")


def candidate_midpoints(values) -> list[float]:
    """Midpoints of adjacent distinct values of an ascending-sorted list."""
    out = []
    prev = None
    for v in values:
        if prev is not None and v != prev:
            out.append((prev + v) / 2.0)
        prev = v
    return out


def entropy(class_counts) -> float:
    """Shannon entropy (bits) of a class count vector; 0*log0 taken as 0."""
    total = sum(class_counts)
    if total <= 0:
        raise ValueError("entropy of an empty distribution")
    acc = 0.0
    for c in class_counts:
        if c:
            p = c / total
            acc -= p * math.log2(p)
    return acc


def weighted_split_entropy(values, labels, cut: float) -> float:
    """Size-weighted entropy of the two halves induced by ``cut``."""
    if len(values) != len(labels):
        raise ValueError("values and labels differ in length")
    left: dict = {}
    right: dict = {}
    for v, y in zip(values, labels):
        side = left if v <= cut else right
        side[y] = side.get(y, 0) + 1
    n = len(values)
    acc = 0.0
    for side in (left, right):
        if side:
            m = sum(side.values())
            acc += (m / n) * entropy(list(side.values()))
    return acc


def best_split(feature: str, values, labels) -> SplitCut | None:
    """Lowest-weighted-entropy midpoint; ties go to the smallest cut.

    Returns None when the feature has fewer than two distinct values.
    Cells with a missing value must be filtered out by the caller.
    """
    order = sorted(range(len(values)), key=lambda i: values[i])
    sorted_values = [values[i] for i in order]
    sorted_labels = [labels[i] for i in order]

    class_ids: dict = {}
    for y in sorted_labels:
        if y not in class_ids:
            class_ids[y] = len(class_ids)
    n_classes = len(class_ids)
    total = [0] * n_classes
    for y in sorted_labels:
        total[class_ids[y]] += 1

    n = len(sorted_values)
    left = [0] * n_classes
    best_cut = None
    best_info = math.inf
    i = 0
    while i < n - 1:
        left[class_ids[sorted_labels[i]]] += 1
        if sorted_values[i] != sorted_values[i + 1]:
            cut = (sorted_values[i] + sorted_values[i + 1]) / 2.0
            n_left = i + 1
            right = [t - l for t, l in zip(total, left)]
            info = ((n_left / n) * entropy(left)
                    + ((n - n_left) / n) * entropy(right))
            if info < best_info:
                best_info = info
                best_cut = cut
        i += 1
    if best_cut is None:
        return None
    return SplitCut(feature, best_cut)


def cuts_for_table(table) -> list[SplitCut]:
    """Best split per numeric column of a raw table, skipping missing cells.

    Columns with no valid split still yield entries so build_schema can
    see them; those entries carry a None cut via omission — the feature
    then becomes a single catch-all bin.
    """
    cuts = []
    for col in table.columns:
        if col.kind != "numeric":
            continue
        pairs = [(v, y) for v, y in zip(col.values, table.class_column.values)
                 if v is not None]
        if not pairs:
            continue
        cut = best_split(col.name, [p[0] for p in pairs],
                         [p[1] for p in pairs])
        if cut is not None:
            cuts.append(cut)
    return cuts
