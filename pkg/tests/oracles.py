"""Independent reference implementations used to cross-check the library.

Everything here recomputes results from first principles (per-instance
loops, exhaustive scans) and deliberately avoids the library's
column-bitmap evaluation path.
"""

from __future__ import annotations

import math
import random
from collections import Counter

from rumix import Rule, WeightProfile


def segment_value(bits: int, offset: int, width: int) -> int:
    return (bits >> offset) & ((1 << width) - 1)


def oracle_covers(rule_bits: int, inst_bits: int, schema) -> bool:
    """Per-segment recheck: every feature segment must share a set bit."""
    for feat in schema.features:
        r = segment_value(rule_bits, feat.bit_offset, feat.width)
        x = segment_value(inst_bits, feat.bit_offset, feat.width)
        if r & x == 0:
            return False
    return True


def oracle_counts(rule: Rule, data) -> tuple[int, int]:
    """(n_covers, n_correct) by plain iteration."""
    n_covers = 0
    n_correct = 0
    for inst in data.instances:
        if oracle_covers(rule.bits, inst.bits, data.schema):
            n_covers += 1
            if inst.class_index == rule.class_index:
                n_correct += 1
    return n_covers, n_correct


def oracle_fitness(rule: Rule, data, profile: WeightProfile) -> float:
    n_covers, n_correct = oracle_counts(rule, data)
    if n_covers == 0:
        return 0.0
    return (profile.alpha * (n_correct / n_covers)
            + profile.beta * (n_covers / len(data.instances)))


def zero_feature_bits(bits: int, schema) -> list[int]:
    """Global indices of unset bits within feature segments, ascending."""
    out = []
    for feat in schema.features:
        for d in range(feat.width):
            pos = feat.bit_offset + d
            if not (bits >> pos) & 1:
                out.append(pos)
    return out


def oracle_sequential_scan(rule: Rule, data,
                           profile: WeightProfile) -> Rule:
    """Replay of the greedy flip scan: zero bits fixed at start, visited
    ascending, each strict improvement immediately adopted."""
    bits = rule.bits
    fit = oracle_fitness(rule, data, profile)
    for pos in zero_feature_bits(rule.bits, data.schema):
        cand = Rule(bits | (1 << pos), rule.class_index, 0.0, rule.seq)
        cand_fit = oracle_fitness(cand, data, profile)
        if cand_fit > fit:
            bits = cand.bits
            fit = cand_fit
    return Rule(bits, rule.class_index, fit, rule.seq)


def oracle_best_single_flip(rule: Rule, data,
                            profile: WeightProfile) -> Rule:
    """All one-flip copies of the original; best one adopted if better,
    ties to the lowest bit index."""
    base_fit = oracle_fitness(rule, data, profile)
    best_fit, best_bits = base_fit, None
    for pos in zero_feature_bits(rule.bits, data.schema):
        cand = Rule(rule.bits | (1 << pos), rule.class_index, 0.0, rule.seq)
        cand_fit = oracle_fitness(cand, data, profile)
        if cand_fit > best_fit:
            best_fit, best_bits = cand_fit, cand.bits
    if best_bits is None:
        return Rule(rule.bits, rule.class_index, base_fit, rule.seq)
    return Rule(best_bits, rule.class_index, best_fit, rule.seq)


def oracle_entropy(counts) -> float:
    total = sum(counts)
    return -sum((c / total) * math.log2(c / total) for c in counts if c)


def oracle_weighted_entropy(values, labels, cut: float) -> float:
    left = Counter(y for v, y in zip(values, labels) if v <= cut)
    right = Counter(y for v, y in zip(values, labels) if v > cut)
    n = len(values)
    acc = 0.0
    for side in (left, right):
        if side:
            m = sum(side.values())
            acc += (m / n) * oracle_entropy(list(side.values()))
    return acc


def oracle_best_split(values, labels) -> float | None:
    """Exhaustive scan over distinct-pair midpoints, smallest cut wins."""
    distinct = sorted(set(values))
    if len(distinct) < 2:
        return None
    best_cut, best_info = None, math.inf
    for a, b in zip(distinct, distinct[1:]):
        cut = (a + b) / 2.0
        info = oracle_weighted_entropy(values, labels, cut)
        if info < best_info:
            best_info, best_cut = info, cut
    return best_cut


def oracle_accuracy(predictions, truths) -> float:
    """Trace of the confusion matrix over its total."""
    matrix: Counter = Counter()
    for p, y in zip(predictions, truths):
        matrix[(p, y)] += 1
    diagonal = sum(c for (p, y), c in matrix.items() if p == y)
    return diagonal / sum(matrix.values())


def oracle_compose_phase(rules, data, comp_profile, main_profile, rng,
                         max_passes, seq_start):
    """Naive replay of the composition loop with no memoization.

    Groups by class, shuffles each group once, then repeatedly scans all
    ordered pairs; a merge strictly better than both parents under both
    profiles replaces them, subsumed group members are dropped, and the
    scan resumes after the replacement.
    """
    def fitness_pair(rule_bits, cls):
        probe = Rule(rule_bits, cls, 0.0, -1)
        return (oracle_fitness(probe, data, comp_profile),
                oracle_fitness(probe, data, main_profile))

    groups: dict = {}
    for r in rules:
        groups.setdefault(r.class_index, []).append(r)
    seq = seq_start
    out = []
    for cls in sorted(groups):
        group = groups[cls]
        rng.shuffle(group)
        passes = 0
        while passes < max_passes:
            passes += 1
            accepted = False
            i = 0
            while i < len(group) - 1:
                j = i + 1
                while j < len(group):
                    a, b = group[i], group[j]
                    composed_bits = a.bits | b.bits
                    if composed_bits in (a.bits, b.bits):
                        j += 1
                        continue
                    fa = fitness_pair(a.bits, cls)
                    fb = fitness_pair(b.bits, cls)
                    fc = fitness_pair(composed_bits, cls)
                    if fc[0] > fa[0] and fc[0] > fb[0] \
                            and fc[1] > fa[1] and fc[1] > fb[1]:
                        composed = Rule(composed_bits, cls, 0.0, seq)
                        seq += 1
                        keep = []
                        pos = 0
                        for k, r in enumerate(group):
                            if k == i:
                                pos = len(keep)
                                keep.append(composed)
                            elif k == j:
                                continue
                            elif (composed_bits | r.bits) == composed_bits:
                                continue
                            else:
                                keep.append(r)
                        group = keep
                        i = pos
                        j = i + 1
                        accepted = True
                        continue
                    j += 1
                i += 1
            if not accepted:
                break
        out.extend(group)
    return out


# ---------------------------------------------------------------------------
# Random data for property tests (criterion-style shapes)
# ---------------------------------------------------------------------------

def random_raw_rows(rng: random.Random, max_rows=30, max_features=4,
                    max_values=3, max_classes=3):
    n_features = rng.randint(1, max_features)
    n_classes = rng.randint(2, max_classes)
    n_rows = rng.randint(n_classes, max_rows)
    widths = [rng.randint(1, max_values) for _ in range(n_features)]
    rows = []
    for _ in range(n_rows):
        rows.append([f"v{rng.randrange(widths[j])}"
                     for j in range(n_features)])
    labels = [f"c{rng.randrange(n_classes)}" for _ in range(n_rows)]
    # every class label must appear at least once
    for c in range(n_classes):
        labels[c] = f"c{c}"
    return rows, labels, widths


def build_encoded_dataset(rows, labels):
    """Raw rows straight into an encoded Dataset via the library loaders."""
    from rumix import (Dataset, RawColumn, RawTable, build_schema,
                       encode_dataset)
    n_features = len(rows[0])
    columns = [RawColumn(f"f{j}", "categorical", [r[j] for r in rows])
               for j in range(n_features)]
    table = RawTable("random", columns,
                     RawColumn("class", "categorical", list(labels)))
    schema = build_schema(table, [])
    return encode_dataset(table, schema)


def random_rule(rng: random.Random, schema, seq: int = 0) -> Rule:
    """Random rule with at least one set bit per feature segment."""
    bits = 0
    for feat in schema.features:
        seg = rng.randrange(1, 1 << feat.width)
        bits |= seg << feat.bit_offset
    cls = rng.randrange(schema.n_classes)
    bits |= 1 << (schema.class_offset + cls)
    return Rule(bits, cls, 0.0, seq)
