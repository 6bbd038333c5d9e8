"""rumix: rule-induction classification over fixed-width bit-vector rules.

The library learns ordered lists of human-readable if-then rules.  Each
rule is a packed bit vector (one bit per feature value plus a one-hot
class segment); learning is greedy local search: per-rule zero-bit flips
accepted on strict fitness improvement, OR-composition of same-class
rules, and a final fitness sort with first-match prediction.
"""

from ._version import __version__
from .data import (CATEGORICAL, MISSING_LABEL, NUMERIC, DataFormatError,
                   Dataset, DatasetSchema, EncodedInstance,
                   FeatureDescriptor, LoaderOptions, RawColumn, RawTable,
                   SchemaMismatchError, build_schema, decode_instance,
                   encode_dataset, encode_instance, load_dataset)
from .discretize import (SplitCut, best_split, candidate_midpoints,
                         cuts_for_table, entropy, weighted_split_entropy)
from .evaluate import (BenchmarkEntry, BenchmarkTable, EvalReport, FoldPlan,
                       accuracy, benchmark, cross_validate,
                       load_published_accuracies, make_folds,
                       make_stratified_folds, resolve_workers)
from .fitness import (COMPOSITION_PROFILE, MAIN_PROFILE, DatasetIndex,
                      FitnessBreakdown, WeightProfile, evaluate,
                      fitness_value)
from .learner import (Classifier, FitAudit, LearnerConfig, compose_phase,
                      fit, generalize, initial_rules, load_classifier,
                      mutate_rules, predict, predict_bulk, predict_detail,
                      save_classifier)
from .rules import (Rule, bits_from_string, bits_to_string, compose, covers,
                    flip_zero_bit, initial_rule, render, subsumes)

__all__ = [
    "__version__",
    # data
    "CATEGORICAL", "MISSING_LABEL", "NUMERIC", "DataFormatError", "Dataset",
    "DatasetSchema", "EncodedInstance", "FeatureDescriptor", "LoaderOptions",
    "RawColumn", "RawTable", "SchemaMismatchError", "build_schema",
    "decode_instance", "encode_dataset", "encode_instance", "load_dataset",
    # discretize
    "SplitCut", "best_split", "candidate_midpoints", "cuts_for_table",
    "entropy", "weighted_split_entropy",
    # rules
    "Rule", "bits_from_string", "bits_to_string", "compose", "covers",
    "flip_zero_bit", "initial_rule", "render", "subsumes",
    # fitness
    "COMPOSITION_PROFILE", "MAIN_PROFILE", "DatasetIndex",
    "FitnessBreakdown", "WeightProfile", "evaluate", "fitness_value",
    # learner
    "Classifier", "FitAudit", "LearnerConfig", "compose_phase", "fit",
    "generalize", "initial_rules", "load_classifier", "mutate_rules",
    "predict", "predict_bulk", "predict_detail", "save_classifier",
    # evaluate
    "BenchmarkEntry", "BenchmarkTable", "EvalReport", "FoldPlan", "accuracy",
    "benchmark", "cross_validate", "load_published_accuracies", "make_folds",
    "make_stratified_folds", "resolve_workers",
]
