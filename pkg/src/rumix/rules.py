"""Fixed-width bit-vector rules and their primitive algebra.

A rule is a plain Python int used as a packed bit vector: one segment per
feature (a set bit accepts that category) plus a one-hot class segment.
Python ints give word-packed storage and hardware popcount via
``int.bit_count``, so rules of any width stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .data import DatasetSchema, EncodedInstance


@dataclass(frozen=True)
class Rule:
    """Immutable rule: bits, predicted class, cached fitness, creation seq."""
    bits: int
    class_index: int
    fitness: float
    seq: int


@lru_cache(maxsize=None)
def _masks(schema: DatasetSchema):
    """(per-feature segment masks, full feature-area mask, class mask)."""
    seg_masks = tuple(((1 << w) - 1) << off
                      for off, w in schema.feature_segments())
    feature_mask = (1 << schema.class_offset) - 1
    class_mask = ((1 << schema.n_classes) - 1) << schema.class_offset
    return seg_masks, feature_mask, class_mask


def initial_rule(instance: EncodedInstance, schema: DatasetSchema,
                 seq: int, fitness: float = 0.0) -> Rule:
    """Rule that is the bit-exact encoding of one training record."""
    if instance.class_index < 0:
        raise ValueError("cannot build a rule from an unlabeled instance")
    return Rule(instance.bits, instance.class_index, fitness, seq)


def covers(rule: Rule, instance: EncodedInstance,
           schema: DatasetSchema) -> bool:
    """True iff every feature segment of the rule accepts the instance.

    The class segment is ignored; an all-zero instance segment (unseen
    category at predict time) matches no rule.
    """
    seg_masks, _, _ = _masks(schema)
    joint = rule.bits & instance.bits
    for m in seg_masks:
        if not joint & m:
            return False
    return True


def compose(a: Rule, b: Rule, seq: int) -> Rule:
    """Bitwise-OR merge of two same-class rules; fitness left for re-eval."""
    if a.class_index != b.class_index:
        raise ValueError("composition requires matching classes")
    return Rule(a.bits | b.bits, a.class_index, 0.0, seq)


def flip_zero_bit(rule: Rule, bit_index: int,
                  schema: DatasetSchema) -> Rule:
    """Copy of the rule with one feature bit set; class bits never flip."""
    if bit_index >= schema.class_offset or bit_index < 0:
        raise ValueError("class conflict: refusing to flip a class bit")
    if (rule.bits >> bit_index) & 1:
        raise ValueError(f"bit {bit_index} is already set")
    return Rule(rule.bits | (1 << bit_index), rule.class_index,
                rule.fitness, rule.seq)


def subsumes(general: Rule, specific: Rule) -> bool:
    """True iff every set bit of ``specific`` is set in ``general``."""
    if general.class_index != specific.class_index:
        return False
    return (general.bits | specific.bits) == general.bits


def render(rule: Rule, schema: DatasetSchema) -> str:
    """Human-readable "if ... then class" form, omitting all-ones segments."""
    parts = []
    for feat in schema.features:
        seg = (rule.bits >> feat.bit_offset) & ((1 << feat.width) - 1)
        if seg == (1 << feat.width) - 1:
            continue                    # non-informative: accepts everything
        labels = [feat.domain[i] for i in range(feat.width)
                  if (seg >> i) & 1]
        if len(labels) == 1:
            parts.append(f"{feat.name}={labels[0]}")
        else:
            parts.append(f"{feat.name}=({' or '.join(labels)})")
    cls = schema.class_labels[rule.class_index]
    cond = " and ".join(parts) if parts else "true"
    return f"if {cond} then {cls}"


def bits_from_string(pattern: str) -> int:
    """Parse "10 01 11" into an int; leftmost character is bit 0.

    Mirrors the left-to-right reading of segment diagrams, so a schema's
    first domain value maps to the first character.
    """
    bits = 0
    pos = 0
    for ch in pattern:
        if ch in "01":
            if ch == "1":
                bits |= 1 << pos
            pos += 1
        elif not ch.isspace():
            raise ValueError(f"bad pattern character {ch!r}")
    return bits


def bits_to_string(bits: int, schema: DatasetSchema) -> str:
    """Render bits as space-separated segments, first domain value first."""
    segs = []
    for off, w in schema.feature_segments() + [
            (schema.class_offset, schema.n_classes)]:
        seg = (bits >> off) & ((1 << w) - 1)
        segs.append("".join("1" if (seg >> i) & 1 else "0"
                            for i in range(w)))
    return " ".join(segs)
