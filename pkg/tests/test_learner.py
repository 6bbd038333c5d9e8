import json
import random

import pytest

from conftest import make_dataset
from oracles import (build_encoded_dataset, oracle_best_single_flip,
                     oracle_sequential_scan,
                     random_raw_rows)
from rumix import (MAIN_PROFILE, Classifier, LearnerConfig, Rule, compose,
                   compose_phase, encode_instance, fit, generalize,
                   initial_rules, load_classifier, mutate_rules, predict,
                   predict_bulk, predict_detail, save_classifier, subsumes)
from rumix.fitness import index_for
from rumix.learner import classifier_to_dict


def test_initial_rules_one_per_distinct_record():
    data = make_dataset([["a"], ["b"]], ["p", "q"])
    rules = initial_rules(data)
    assert len(rules) == 2
    # each rule covers exactly its own record, purely
    assert rules[0].fitness == pytest.approx(
        MAIN_PROFILE.alpha + MAIN_PROFILE.beta * 0.5)


def test_initial_rules_dedup_keeps_first_seq():
    data = make_dataset([["a"], ["a"], ["b"]], ["p", "p", "q"])
    rules = initial_rules(data)
    assert len(rules) == 2
    assert [r.seq for r in rules] == [0, 1]


def test_initial_rules_conflicting_classes_both_kept():
    data = make_dataset([["a"], ["a"]], ["p", "q"])
    rules = initial_rules(data)
    assert len(rules) == 2
    assert {r.class_index for r in rules} == {0, 1}
    # both rules cover both records, so accuracy is halved
    assert all(r.fitness == pytest.approx(0.99 * 0.5 + 0.01 * 1.0)
               for r in rules)


def test_initial_rules_cover_their_records():
    from rumix import covers
    rng = random.Random(2)
    rows, labels, _ = random_raw_rows(rng)
    data = build_encoded_dataset(rows, labels)
    rules = initial_rules(data)
    by_bits = {r.bits: r for r in rules}
    for inst in data.instances:
        assert covers(by_bits[inst.bits], inst, data.schema)


# ---------------------------------------------------------------------------
# Flip scans against the independent replay
# ---------------------------------------------------------------------------

def test_scan_matches_sequential_oracle():
    rng = random.Random(31)
    for _ in range(120):
        rows, labels, _ = random_raw_rows(rng)
        data = build_encoded_dataset(rows, labels)
        rules = initial_rules(data)
        got = generalize(rules, data, MAIN_PROFILE)
        for before, after in zip(rules, got):
            want = oracle_sequential_scan(before, data, MAIN_PROFILE)
            assert after.bits == want.bits
            assert after.fitness == want.fitness
            assert after.seq == before.seq


def test_mutate_matches_oracle_and_preserves_order():
    rng = random.Random(33)
    for _ in range(60):
        rows, labels, _ = random_raw_rows(rng)
        data = build_encoded_dataset(rows, labels)
        rules = initial_rules(data)
        got = mutate_rules(rules, data, MAIN_PROFILE)
        assert [r.seq for r in got] == [r.seq for r in rules]
        for before, after in zip(rules, got):
            want = oracle_sequential_scan(before, data, MAIN_PROFILE)
            assert (after.bits, after.fitness) == (want.bits, want.fitness)


def test_best_copy_mutation_matches_oracle():
    rng = random.Random(35)
    for _ in range(60):
        rows, labels, _ = random_raw_rows(rng)
        data = build_encoded_dataset(rows, labels)
        rules = initial_rules(data)
        got = mutate_rules(rules, data, MAIN_PROFILE, best_copy=True)
        for before, after in zip(rules, got):
            want = oracle_best_single_flip(before, data, MAIN_PROFILE)
            assert (after.bits, after.fitness) == (want.bits, want.fitness)


def test_scan_leaves_unimprovable_rule_unchanged():
    # an all-ones rule has no zero feature bits left to flip
    data = make_dataset([["a"], ["b"], ["c"]], ["p", "p", "q"])
    full = Rule((1 << data.schema.class_offset) - 1
                | 1 << data.schema.class_offset, 0, 0.0, 0)
    out = generalize([full], data, MAIN_PROFILE)
    assert out[0].bits == full.bits


def test_scan_fitness_never_decreases():
    rng = random.Random(39)
    for _ in range(60):
        rows, labels, _ = random_raw_rows(rng)
        data = build_encoded_dataset(rows, labels)
        rules = initial_rules(data)
        for before, after in zip(rules, generalize(rules, data,
                                                   MAIN_PROFILE)):
            assert after.fitness >= before.fitness


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def test_compose_phase_merges_improving_pair():
    # two single-value rules of the same class whose union stays pure
    rows = [["a", "x"], ["b", "x"], ["c", "y"]]
    labels = ["p", "p", "q"]
    data = make_dataset(rows, labels)
    rules = initial_rules(data)
    out = compose_phase(rules, data, rng=random.Random(1))
    p_rules = [r for r in out if r.class_index == 0]
    assert len(p_rules) == 1            # merged, list shrank
    assert p_rules[0].seq == 3          # fresh seq after 3 initial rules


def test_compose_phase_single_rule_group_unchanged():
    data = make_dataset([["a"], ["b"]], ["p", "q"])
    rules = initial_rules(data)
    out = compose_phase(rules, data, rng=random.Random(1))
    assert sorted(r.bits for r in out) == sorted(r.bits for r in rules)


def test_compose_phase_deterministic_and_audited():
    rng_rows = random.Random(43)
    for _ in range(40):
        rows, labels, _ = random_raw_rows(rng_rows)
        data = build_encoded_dataset(rows, labels)
        rules = initial_rules(data)
        a = compose_phase(list(rules), data, rng=random.Random(7))
        b = compose_phase(list(rules), data, rng=random.Random(7))
        assert [(r.bits, r.class_index, r.seq) for r in a] == \
            [(r.bits, r.class_index, r.seq) for r in b]
        assert len(a) <= len(rules)
        # every dropped rule is bitwise-subsumed by a surviving same-class
        # rule (its merged descendant)
        survivors = {(r.bits, r.class_index) for r in a}
        surviving = [r for r in a]
        for r in rules:
            if (r.bits, r.class_index) in survivors:
                continue
            assert any(subsumes(s, r) for s in surviving
                       if s.class_index == r.class_index)


def test_compose_phase_matches_naive_replay():
    from rumix import COMPOSITION_PROFILE
    from oracles import oracle_compose_phase
    rng_rows = random.Random(67)
    for _ in range(50):
        rows, labels, _ = random_raw_rows(rng_rows)
        data = build_encoded_dataset(rows, labels)
        rules = initial_rules(data)
        rules = generalize(rules, data, MAIN_PROFILE)
        got = compose_phase(list(rules), data, rng=random.Random(3))
        want = oracle_compose_phase(list(rules), data, COMPOSITION_PROFILE,
                                    MAIN_PROFILE, random.Random(3), 10,
                                    seq_start=len(rows))
        assert [(r.bits, r.class_index) for r in got] == \
            [(r.bits, r.class_index) for r in want]


def test_compose_phase_acceptance_beats_both_parents():
    # audited directly in compose_phase; assert the audit counters move
    from rumix import FitAudit
    rows = [["a", "x"], ["b", "x"], ["c", "y"]]
    data = make_dataset(rows, ["p", "p", "q"])
    rules = initial_rules(data)
    audit = FitAudit()
    compose_phase(rules, data, rng=random.Random(1), audit=audit)
    assert audit.compose_accepts >= 1


# ---------------------------------------------------------------------------
# fit / predict
# ---------------------------------------------------------------------------

def test_fit_single_class_training_data():
    # both classes exist in the schema but training rows are all class p
    from conftest import make_table
    from rumix import Dataset, build_schema
    table = make_table([["a"], ["b"]], ["p", "q"])
    schema = build_schema(table, [])
    rows = [encode_instance([v], "p", schema) for v in ("a", "b")]
    data = Dataset(schema, rows)
    clf = fit(data, LearnerConfig(audit=True))
    top = clf.rules[0]
    assert top.fitness == pytest.approx(1.0)
    for value in ("a", "b"):
        inst = encode_instance([value], None, schema, train=False)
        assert predict(clf, inst) == 0


def test_fit_sorts_by_fitness_then_seq():
    rng = random.Random(47)
    for _ in range(30):
        rows, labels, _ = random_raw_rows(rng)
        data = build_encoded_dataset(rows, labels)
        clf = fit(data, LearnerConfig(audit=True))
        for a, b in zip(clf.rules, clf.rules[1:]):
            assert a.fitness > b.fitness or (a.fitness == b.fitness
                                             and a.seq < b.seq)


def test_fit_is_deterministic():
    rng = random.Random(51)
    rows, labels, _ = random_raw_rows(rng, max_rows=25)
    data1 = build_encoded_dataset(rows, labels)
    data2 = build_encoded_dataset(rows, labels)
    d1 = classifier_to_dict(fit(data1, LearnerConfig()))
    d2 = classifier_to_dict(fit(data2, LearnerConfig()))
    assert d1 == d2


def test_fit_rejects_bad_mode():
    with pytest.raises(ValueError, match="mode"):
        LearnerConfig(mode="other")


def test_predict_first_match_and_default(worked_schema):
    from rumix import bits_from_string
    rules = (
        Rule(bits_from_string("10 10 01 10 11 10"), 0, 0.9, 0),
        Rule(bits_from_string("11 11 11 10 11 01"), 1, 0.5, 1),
    )
    clf = Classifier(rules, default_class=1, schema=worked_schema,
                     config=LearnerConfig())
    matching = encode_instance(["morning", "clear", "poor", "warm", "high"],
                               None, worked_schema, train=False)
    assert predict(clf, matching) == 0
    second = encode_instance(["evening", "cloudy", "excellent", "warm",
                              "medium"], None, worked_schema, train=False)
    cls, rule = predict_detail(clf, second)
    assert (cls, rule.seq) == (1, 1)
    fallthrough = encode_instance(["evening", "cloudy", "excellent", "cool",
                                   "medium"], None, worked_schema,
                                  train=False)
    cls, rule = predict_detail(clf, fallthrough)
    assert cls == 1 and rule is None


def test_predict_bulk_equals_predict_loop():
    rng = random.Random(57)
    for _ in range(40):
        rows, labels, _ = random_raw_rows(rng)
        data = build_encoded_dataset(rows, labels)
        clf = fit(data, LearnerConfig())
        instances = list(data.instances)
        # add an unseen-value instance to exercise the default path
        instances.append(encode_instance(
            ["never-seen"] * len(data.schema.features), None, data.schema,
            train=False))
        assert predict_bulk(clf, instances) == \
            [predict(clf, x) for x in instances]


def test_every_final_rule_covers_training_data():
    rng = random.Random(61)
    for _ in range(30):
        rows, labels, _ = random_raw_rows(rng)
        data = build_encoded_dataset(rows, labels)
        clf = fit(data, LearnerConfig(audit=True))
        assert clf.audit.final_min_cover >= 1
        idx = index_for(data)
        for r in clf.rules:
            assert idx.counts(r.bits, r.class_index)[0] >= 1


def test_save_load_round_trip(tmp_path):
    rng = random.Random(63)
    rows, labels, _ = random_raw_rows(rng)
    data = build_encoded_dataset(rows, labels)
    clf = fit(data, LearnerConfig())
    path = tmp_path / "model.json"
    save_classifier(clf, path)
    loaded = load_classifier(path)
    assert classifier_to_dict(loaded) == classifier_to_dict(clf)
    for inst in data.instances:
        assert predict(loaded, inst) == predict(clf, inst)
    doc = json.loads(path.read_text())
    assert doc["format"] == "rumix-classifier"
    assert doc["version"] == 1


def test_load_rejects_foreign_document(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"format": "other", "version": 1}))
    with pytest.raises(ValueError, match="not a classifier"):
        load_classifier(path)


def test_racer_mode_skips_mutation_but_matches_otherwise():
    # on data where mutation cannot improve anything, modes coincide
    data = make_dataset([["a"], ["b"]], ["p", "q"])
    rumc = fit(data, LearnerConfig(mode="rumc"))
    racer = fit(data, LearnerConfig(mode="racer"))
    assert classifier_to_dict(rumc)["rules"] == \
        classifier_to_dict(racer)["rules"]
