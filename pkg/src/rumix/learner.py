"""The rule-induction pipeline: initial rules from training records, a
greedy bit-flip mutation pass, generalization, OR-composition with
subsumption removal, a second generalization pass, and a fitness-sorted
first-match classifier.

Two modes share the pipeline: "rumc" runs the mutation pass, "racer"
skips it.  All acceptance decisions require a strict fitness increase,
which both guarantees termination and keeps per-rule fitness monotone.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import count
from pathlib import Path

from ._version import __version__
from .data import Dataset, DatasetSchema, EncodedInstance, FeatureDescriptor
from .discretize import SplitCut
from .fitness import (COMPOSITION_PROFILE, MAIN_PROFILE, DatasetIndex,
                      WeightProfile, fitness_value, index_for)
from .rules import Rule, covers

MODES = ("rumc", "racer")


@dataclass(frozen=True)
class LearnerConfig:
    """Pipeline knobs; defaults reproduce the standard benchmark setup."""
    mode: str = "rumc"
    main_profile: WeightProfile = MAIN_PROFILE
    composition_profile: WeightProfile = COMPOSITION_PROFILE
    rng_seed: int = 1
    max_composition_passes: int = 10
    # Alternative mutation: score every single-flip copy of the original
    # rule and adopt only the best one.  Off by default; the sequential
    # accept-each-improvement scan is the reference behavior.
    best_copy_mutation: bool = False
    audit: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.max_composition_passes < 1:
            raise ValueError("max_composition_passes must be >= 1")


@dataclass
class FitAudit:
    """Debug counters collected when LearnerConfig.audit is set.

    Every acceptance is asserted to be a strict fitness improvement at
    the moment it happens; these fields summarize what fired.
    """
    flip_accepts: int = 0
    compose_accepts: int = 0
    subsumption_removals: int = 0
    max_compose_passes: int = 0
    per_rule_flip_trace: dict = field(default_factory=dict)
    compose_log: list = field(default_factory=list)
    removal_log: list = field(default_factory=list)
    final_min_cover: int | None = None


# ---------------------------------------------------------------------------
# Phase 1: initial rules
# ---------------------------------------------------------------------------

def initial_rules(data: Dataset,
                  profile: WeightProfile = MAIN_PROFILE) -> list[Rule]:
    """One rule per distinct encoded training record, in file order.

    Duplicates (same feature bits and class) collapse onto the first
    occurrence; identical feature vectors with different classes are
    distinct records and both survive.
    """
    if not data.instances:
        raise ValueError("cannot learn from an empty dataset")
    idx = index_for(data)
    seen = set()
    rules = []
    seq = 0
    for inst in data.instances:
        if inst.class_index < 0:
            raise ValueError("training instances must carry a class")
        if inst.bits in seen:
            continue
        seen.add(inst.bits)
        nc, ncc = idx.counts(inst.bits, inst.class_index)
        rules.append(Rule(inst.bits, inst.class_index,
                          fitness_value(ncc, nc, idx.n, profile), seq))
        seq += 1
    return rules


# ---------------------------------------------------------------------------
# Phases 2/3/5: greedy single-bit-flip scans
# ---------------------------------------------------------------------------

def _scan_rule(rule: Rule, idx: DatasetIndex, profile: WeightProfile,
               audit: FitAudit | None) -> Rule:
    """Sequential greedy scan of one rule's zero feature bits.

    Zero positions are fixed at scan start and visited in ascending
    order; each accepted flip immediately becomes the base for the rest
    of the scan.  Acceptance needs a strictly higher fitness.
    """
    segments = idx.segments
    cols = idx.columns
    n = idx.n
    alpha, beta = profile.alpha, profile.beta
    clsmask = idx.class_masks[rule.class_index]
    all_mask = idx.all_mask

    nseg = len(segments)
    segors = idx.segment_ors(rule.bits)
    # suffix[t] = AND of segment covers after t; those never change while
    # the scan is inside segment t
    suffix = [all_mask] * nseg
    acc = all_mask
    for t in range(nseg - 1, -1, -1):
        suffix[t] = acc
        acc &= segors[t]
    cover = acc
    nc = cover.bit_count()
    ncc = (cover & clsmask).bit_count()
    fit = fitness_value(ncc, nc, n, profile)

    orig_bits = rule.bits
    bits = orig_bits
    changed = False
    trace = [fit] if audit is not None else None
    prefix = all_mask
    for t in range(nseg):
        off, w = segments[t]
        rest = prefix & suffix[t]
        segor = segors[t]
        oseg = (orig_bits >> off) & ((1 << w) - 1)
        for d in range(w):
            if (oseg >> d) & 1:
                continue
            new_segor = segor | cols[off + d]
            if new_segor == segor:
                continue        # bin holds no training instance: no gain
            cand_cover = rest & new_segor
            cand_nc = cand_cover.bit_count()
            if cand_nc:
                cand_ncc = (cand_cover & clsmask).bit_count()
                cand_fit = (alpha * (cand_ncc / cand_nc)
                            + beta * (cand_nc / n))
            else:
                cand_fit = 0.0
            if cand_fit > fit:
                bits |= 1 << (off + d)
                segor = new_segor
                fit = cand_fit
                changed = True
                if audit is not None:
                    assert cand_fit > trace[-1], "non-monotone flip accept"
                    audit.flip_accepts += 1
                    trace.append(cand_fit)
        prefix &= segor
    if audit is not None and len(trace) > 1:
        audit.per_rule_flip_trace.setdefault(rule.seq, []).extend(trace)
    if changed or rule.fitness != fit:
        return Rule(bits, rule.class_index, fit, rule.seq)
    return rule


def _best_copy_rule(rule: Rule, idx: DatasetIndex, profile: WeightProfile,
                    audit: FitAudit | None) -> Rule:
    """Score all single-flip copies of the original; adopt the best one
    if it strictly beats the original.  Ties go to the lowest bit index."""
    segments = idx.segments
    cols = idx.columns
    n = idx.n
    clsmask = idx.class_masks[rule.class_index]
    all_mask = idx.all_mask

    nseg = len(segments)
    segors = idx.segment_ors(rule.bits)
    suffix = [all_mask] * nseg
    acc = all_mask
    for t in range(nseg - 1, -1, -1):
        suffix[t] = acc
        acc &= segors[t]
    nc = acc.bit_count()
    ncc = (acc & clsmask).bit_count()
    base_fit = fitness_value(ncc, nc, n, profile)

    best_fit = base_fit
    best_bit = None
    prefix = all_mask
    for t in range(nseg):
        off, w = segments[t]
        rest = prefix & suffix[t]
        segor = segors[t]
        oseg = (rule.bits >> off) & ((1 << w) - 1)
        for d in range(w):
            if (oseg >> d) & 1:
                continue
            cand_cover = rest & (segor | cols[off + d])
            cand_nc = cand_cover.bit_count()
            cand_ncc = (cand_cover & clsmask).bit_count()
            cand_fit = fitness_value(cand_ncc, cand_nc, n, profile)
            if cand_fit > best_fit:
                best_fit = cand_fit
                best_bit = off + d
        prefix &= segor
    if best_bit is None:
        if rule.fitness != base_fit:
            return Rule(rule.bits, rule.class_index, base_fit, rule.seq)
        return rule
    if audit is not None:
        audit.flip_accepts += 1
    return Rule(rule.bits | (1 << best_bit), rule.class_index, best_fit,
                rule.seq)


def mutate_rules(rules, data: Dataset,
                 profile: WeightProfile = MAIN_PROFILE,
                 best_copy: bool = False,
                 audit: FitAudit | None = None) -> list[Rule]:
    """Mutation pass: per-rule greedy flip scan over zero feature bits."""
    idx = index_for(data)
    scan = _best_copy_rule if best_copy else _scan_rule
    return [scan(r, idx, profile, audit) for r in rules]


def generalize(rules, data: Dataset,
               profile: WeightProfile = MAIN_PROFILE,
               audit: FitAudit | None = None) -> list[Rule]:
    """Generalization pass; identical control flow to the mutation scan."""
    idx = index_for(data)
    return [_scan_rule(r, idx, profile, audit) for r in rules]


# ---------------------------------------------------------------------------
# Phase 4: composition
# ---------------------------------------------------------------------------

def compose_phase(rules, data: Dataset,
                  profile: WeightProfile = COMPOSITION_PROFILE,
                  rng: random.Random | None = None,
                  max_passes: int = 10,
                  next_seq=None,
                  audit: FitAudit | None = None,
                  main_profile: WeightProfile = MAIN_PROFILE) -> list[Rule]:
    """OR-merge same-class rules while the merge beats both parents.

    Rules are grouped by class and each group is shuffled once with the
    seeded rng.  A merge is accepted when it strictly improves on both
    parents under the composition profile and under the main profile.
    Because an OR-merge can only grow a rule's cover set, the main
    profile is the binding test whenever the composition profile weights
    coverage at least as heavily; without it, coverage-heavy weights let
    every class group collapse into one accept-everything rule.

    The pairwise scan replaces both parents of an accepted merge with
    the composed rule, drops every group member the composed rule
    subsumes, and resumes pairing from the replacement.  Passes repeat
    until one is clean or ``max_passes`` is hit.

    Returned fitness values are not refreshed here; callers re-evaluate
    under their own profile.
    """
    idx = index_for(data)
    n = idx.n
    if rng is None:
        rng = random.Random(0)
    if next_seq is None:
        counter = count(max((r.seq for r in rules), default=-1) + 1)
        next_seq = lambda: next(counter)

    groups: dict[int, list[Rule]] = {}
    for r in rules:
        groups.setdefault(r.class_index, []).append(r)

    out: list[Rule] = []
    for cls in sorted(groups):
        group = groups[cls]
        rng.shuffle(group)
        clsmask = idx.class_masks[cls]

        # Pair verdicts are pure functions of the two bit patterns, so
        # rejected pairs and completed clean scans can be memoized without
        # changing the trajectory of the naive nested loop.  Groups often
        # hold many duplicate patterns after generalization; this turns
        # the quadratic verification pass into near-linear work.
        state: dict = {}                # bits -> (segment covers, fitnesses)
        rejected: set = set()           # unordered rejected pattern pairs
        # bits -> (group version, start position) of a completed clean scan;
        # a later scan may be skipped only if the remembered scan ran on the
        # identical group over a superset of the pair range
        scanned_clean: dict = {}
        version = 0

        def eval_bits(bits):
            st = state.get(bits)
            if st is None:
                segs = idx.segment_ors(bits)
                acc = idx.all_mask
                for s in segs:
                    acc &= s
                nc = acc.bit_count()
                ncc = (acc & clsmask).bit_count()
                st = (segs, (fitness_value(ncc, nc, n, profile),
                             fitness_value(ncc, nc, n, main_profile)))
                state[bits] = st
            return st

        passes = 0
        while passes < max_passes:
            passes += 1
            accepted_in_pass = False
            i = 0
            while i < len(group) - 1:
                bits_i = group[i].bits
                memo = scanned_clean.get(bits_i)
                if memo is not None and memo[0] == version \
                        and memo[1] <= i:
                    i += 1
                    continue
                seen_j: set = set()
                j = i + 1
                while j < len(group):
                    bits_j = group[j].bits
                    if bits_j in seen_j:
                        j += 1
                        continue
                    composed_bits = bits_i | bits_j
                    # a merge equal to a parent cannot strictly beat it
                    if composed_bits == bits_i or composed_bits == bits_j:
                        seen_j.add(bits_j)
                        j += 1
                        continue
                    key = (bits_i, bits_j) if bits_i <= bits_j \
                        else (bits_j, bits_i)
                    if key in rejected:
                        seen_j.add(bits_j)
                        j += 1
                        continue
                    seg_i, fit_i = eval_bits(bits_i)
                    seg_j, fit_j = eval_bits(bits_j)
                    comp_segs = [a | b for a, b in zip(seg_i, seg_j)]
                    acc = idx.all_mask
                    for s in comp_segs:
                        acc &= s
                    cnc = acc.bit_count()
                    cncc = (acc & clsmask).bit_count()
                    cfit = (fitness_value(cncc, cnc, n, profile),
                            fitness_value(cncc, cnc, n, main_profile))
                    if cfit[0] > fit_i[0] and cfit[0] > fit_j[0] \
                            and cfit[1] > fit_i[1] and cfit[1] > fit_j[1]:
                        composed = Rule(composed_bits, cls, 0.0, next_seq())
                        state[composed_bits] = (comp_segs, cfit)
                        if audit is not None:
                            audit.compose_accepts += 1
                            audit.compose_log.append(
                                (composed_bits, bits_i, bits_j, cls))
                        keep = []
                        new_pos = 0
                        for k in range(len(group)):
                            if k == i:
                                new_pos = len(keep)
                                keep.append(composed)
                                continue
                            if k == j:
                                continue
                            if (composed_bits | group[k].bits) \
                                    == composed_bits:
                                if audit is not None:
                                    audit.subsumption_removals += 1
                                    audit.removal_log.append(
                                        (group[k].bits, composed_bits, cls))
                                continue
                            keep.append(group[k])
                        group = keep
                        version += 1
                        i = new_pos
                        bits_i = composed_bits
                        seen_j = set()
                        j = i + 1
                        accepted_in_pass = True
                        continue
                    rejected.add(key)
                    seen_j.add(bits_j)
                    j += 1
                scanned_clean[bits_i] = (version, i)
                i += 1
            if not accepted_in_pass:
                break
        if audit is not None:
            audit.max_compose_passes = max(audit.max_compose_passes, passes)
        out.extend(group)
    return out


# ---------------------------------------------------------------------------
# Classifier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classifier:
    """Fitness-descending rule list plus everything needed to encode and
    score unseen records."""
    rules: tuple
    default_class: int
    schema: DatasetSchema
    config: LearnerConfig
    audit: FitAudit | None = None

    @property
    def cuts(self) -> tuple[SplitCut, ...]:
        return tuple(SplitCut(f.name, f.cut) for f in self.schema.features
                     if f.cut is not None)


def fit(data: Dataset, config: LearnerConfig | None = None) -> Classifier:
    """Run the full pipeline on an encoded training dataset."""
    config = config or LearnerConfig()
    idx = index_for(data)
    audit = FitAudit() if config.audit else None

    rules = initial_rules(data, config.main_profile)
    seq_counter = count(len(rules))

    if config.mode == "rumc":
        rules = mutate_rules(rules, data, config.main_profile,
                             best_copy=config.best_copy_mutation,
                             audit=audit)
    rules = generalize(rules, data, config.main_profile, audit=audit)

    rng = random.Random(config.rng_seed)
    rules = compose_phase(rules, data, config.composition_profile, rng,
                          config.max_composition_passes,
                          next_seq=lambda: next(seq_counter), audit=audit,
                          main_profile=config.main_profile)

    # secondary pass re-evaluates under the main profile as it scans
    rules.sort(key=lambda r: r.seq)
    rules = generalize(rules, data, config.main_profile, audit=audit)

    rules.sort(key=lambda r: (-r.fitness, r.seq))
    if audit is not None:
        min_cover = min((idx.counts(r.bits, r.class_index)[0]
                         for r in rules), default=0)
        assert min_cover >= 1, "a surviving rule covers no training instance"
        audit.final_min_cover = min_cover
        for a, b in zip(rules, rules[1:]):
            assert a.fitness > b.fitness or \
                (a.fitness == b.fitness and a.seq < b.seq), \
                "classifier ordering invariant violated"
    return Classifier(tuple(rules), data.majority_class, data.schema,
                      config, audit)


def predict(classifier: Classifier, instance: EncodedInstance) -> int:
    """Class of the first covering rule, else the default class."""
    return predict_detail(classifier, instance)[0]


def predict_detail(classifier: Classifier,
                   instance: EncodedInstance) -> tuple[int, Rule | None]:
    """(class index, matching rule) with rule None on default fallback."""
    schema = classifier.schema
    for r in classifier.rules:
        if covers(r, instance, schema):
            return r.class_index, r
    return classifier.default_class, None


def predict_bulk(classifier: Classifier, instances) -> list[int]:
    """First-match prediction for many instances via column bitmaps.

    Equivalent to mapping ``predict`` over the instances, but evaluates
    each rule against all still-unassigned instances at once.
    """
    instances = list(instances)
    if not instances:
        return []
    idx = DatasetIndex(classifier.schema, instances)
    preds = [classifier.default_class] * len(instances)
    unassigned = idx.all_mask
    for r in classifier.rules:
        if not unassigned:
            break
        matched = idx.cover_bitmap(r.bits) & unassigned
        unassigned &= ~matched
        cls = r.class_index
        while matched:
            low = matched & -matched
            preds[low.bit_length() - 1] = cls
            matched ^= low
    return preds


# ---------------------------------------------------------------------------
# Persistence (versioned JSON; round-trip preserves predictions)
# ---------------------------------------------------------------------------

_FORMAT = "rumix-classifier"
_FORMAT_VERSION = 1


def classifier_to_dict(clf: Classifier) -> dict:
    schema = clf.schema
    return {
        "format": _FORMAT,
        "version": _FORMAT_VERSION,
        "library_version": __version__,
        "schema": {
            "features": [
                {"name": f.name, "kind": f.kind, "domain": list(f.domain),
                 "cut": f.cut}
                for f in schema.features
            ],
            "class_labels": list(schema.class_labels),
        },
        "cuts": [[c.feature, c.cut_value] for c in clf.cuts],
        "rules": [
            {"class": schema.class_labels[r.class_index],
             "bits": format(r.bits, "x"),
             "fitness": r.fitness,
             "seq": r.seq}
            for r in clf.rules
        ],
        "default_class": schema.class_labels[clf.default_class],
        "config": {
            "mode": clf.config.mode,
            "alpha": clf.config.main_profile.alpha,
            "beta": clf.config.main_profile.beta,
            "composition_alpha": clf.config.composition_profile.alpha,
            "composition_beta": clf.config.composition_profile.beta,
            "rng_seed": clf.config.rng_seed,
            "max_composition_passes": clf.config.max_composition_passes,
            "best_copy_mutation": clf.config.best_copy_mutation,
        },
    }


def classifier_from_dict(doc: dict) -> Classifier:
    if doc.get("format") != _FORMAT:
        raise ValueError("not a classifier document")
    if doc.get("version") != _FORMAT_VERSION:
        raise ValueError(f"unsupported classifier version "
                         f"{doc.get('version')!r}")
    features = []
    offset = 0
    for f in doc["schema"]["features"]:
        width = len(f["domain"])
        features.append(FeatureDescriptor(
            f["name"], f["kind"], tuple(f["domain"]), offset, width,
            f.get("cut")))
        offset += width
    class_labels = tuple(doc["schema"]["class_labels"])
    schema = DatasetSchema(tuple(features), class_labels,
                           offset + len(class_labels))
    cfg = doc["config"]
    config = LearnerConfig(
        mode=cfg["mode"],
        main_profile=WeightProfile(cfg["alpha"], cfg["beta"]),
        composition_profile=WeightProfile(cfg["composition_alpha"],
                                          cfg["composition_beta"]),
        rng_seed=cfg["rng_seed"],
        max_composition_passes=cfg["max_composition_passes"],
        best_copy_mutation=cfg.get("best_copy_mutation", False),
    )
    rules = tuple(
        Rule(int(r["bits"], 16), class_labels.index(r["class"]),
             r["fitness"], r["seq"])
        for r in doc["rules"]
    )
    return Classifier(rules, class_labels.index(doc["default_class"]),
                      schema, config)


def save_classifier(clf: Classifier, path) -> None:
    Path(path).write_text(json.dumps(classifier_to_dict(clf), indent=1),
                          encoding="utf-8")


def load_classifier(path) -> Classifier:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return classifier_from_dict(doc)
