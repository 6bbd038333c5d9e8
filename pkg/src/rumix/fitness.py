"""Rule fitness: weighted blend of accuracy over covered records and
coverage of the training set.

Evaluation runs on a column-transposed view of the dataset: one
instance-bitmap per bit position.  A rule's cover set is then the AND
over its feature segments of the OR of the accepted positions' bitmaps,
which makes single-bit-flip re-evaluation two int ops plus popcounts and
stays bit-identical to a per-instance recount.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import Dataset
from .rules import Rule


@dataclass(frozen=True)
class WeightProfile:
    """Fitness weights: accuracy weight alpha, coverage weight beta.

    The main profile keeps alpha + beta = 1 so fitness stays in [0, 1].
    The composition profile reuses the accuracy weight but swaps in a
    much larger coverage weight; its sum is deliberately not normalized
    (re-normalizing makes coverage dominate accuracy, and every class
    group then collapses into a single accept-everything rule).
    """
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("weights must be positive")


MAIN_PROFILE = WeightProfile(0.99, 0.01)
COMPOSITION_PROFILE = WeightProfile(0.99, 0.6)


@dataclass(frozen=True)
class FitnessBreakdown:
    n_covers: int
    n_correct: int
    accuracy: float
    coverage: float
    fitness: float


def fitness_value(n_correct: int, n_covers: int, n_total: int,
                  profile: WeightProfile) -> float:
    """The scalar objective; a rule covering nothing scores 0."""
    if n_covers == 0:
        return 0.0
    return (profile.alpha * (n_correct / n_covers)
            + profile.beta * (n_covers / n_total))


def breakdown(n_correct: int, n_covers: int, n_total: int,
              profile: WeightProfile) -> FitnessBreakdown:
    accuracy = n_correct / n_covers if n_covers else 0.0
    coverage = n_covers / n_total
    return FitnessBreakdown(n_covers, n_correct, accuracy, coverage,
                            fitness_value(n_correct, n_covers, n_total,
                                          profile))


class DatasetIndex:
    """Column bitmaps over instances, for bulk rule evaluation.

    ``columns[b]`` has instance-bit ``i`` set iff instance ``i`` has rule
    bit ``b`` set.  Class columns double as per-class instance masks.
    """

    def __init__(self, schema, instances):
        instances = list(instances)
        self.schema = schema
        self.n = len(instances)
        self.all_mask = (1 << self.n) - 1
        self.segments = schema.feature_segments()
        columns = [0] * schema.total_width
        for i, inst in enumerate(instances):
            bits = inst.bits
            ibit = 1 << i
            while bits:
                low = bits & -bits
                columns[low.bit_length() - 1] |= ibit
                bits ^= low
        self.columns = columns
        off = schema.class_offset
        self.class_masks = [columns[off + c]
                            for c in range(schema.n_classes)]

    def segment_or(self, bits: int, offset: int, width: int) -> int:
        """Instances whose value in this segment is accepted by ``bits``."""
        seg = (bits >> offset) & ((1 << width) - 1)
        acc = 0
        columns = self.columns
        while seg:
            low = seg & -seg
            acc |= columns[offset + low.bit_length() - 1]
            seg ^= low
        return acc

    def segment_ors(self, bits: int) -> list[int]:
        return [self.segment_or(bits, off, w) for off, w in self.segments]

    def cover_bitmap(self, bits: int) -> int:
        """Instances covered by a rule's bits (class segment ignored)."""
        acc = self.all_mask
        for off, w in self.segments:
            acc &= self.segment_or(bits, off, w)
            if not acc:
                return 0
        return acc

    def counts(self, bits: int, class_index: int) -> tuple[int, int]:
        """(n_covers, n_correct) for a rule against this dataset."""
        cover = self.cover_bitmap(bits)
        return cover.bit_count(), \
            (cover & self.class_masks[class_index]).bit_count()


def index_for(data: Dataset) -> DatasetIndex:
    """Build (or reuse) the transposed index of a dataset."""
    cached = getattr(data, "_index", None)
    if cached is None:
        cached = DatasetIndex(data.schema, data.instances)
        data._index = cached
    return cached


def evaluate(rule: Rule, data: Dataset,
             profile: WeightProfile) -> FitnessBreakdown:
    """Full fitness breakdown of one rule against a training dataset."""
    if not data.instances:
        raise ValueError("cannot evaluate against an empty dataset")
    idx = index_for(data)
    n_covers, n_correct = idx.counts(rule.bits, rule.class_index)
    return breakdown(n_correct, n_covers, idx.n, profile)
