"""Seeded k-fold cross-validation and multi-dataset benchmark tables.

Discretizer cuts and the bit schema are always rebuilt from the training
partition of each fold and applied frozen to the held-out rows, so test
data can never leak into the layout.
"""

from __future__ import annotations

import csv
import io
import os
import random
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .data import LoaderOptions, RawTable, build_schema, encode_dataset, \
    encode_instance, load_dataset
from .discretize import cuts_for_table
from .learner import Classifier, LearnerConfig, fit, predict_bulk


@dataclass(frozen=True)
class FoldPlan:
    """Deterministic fold assignment for every instance."""
    k: int
    seed: int
    assignments: tuple

    def split(self, fold: int) -> tuple[list[int], list[int]]:
        train = [i for i, f in enumerate(self.assignments) if f != fold]
        test = [i for i, f in enumerate(self.assignments) if f == fold]
        return train, test


def make_folds(n_instances: int, k: int, seed: int) -> FoldPlan:
    """Shuffle indices with the seed, then cut into k contiguous chunks."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if n_instances < k:
        raise ValueError(f"cannot make {k} folds from {n_instances} rows")
    rng = random.Random(seed)
    order = list(range(n_instances))
    rng.shuffle(order)
    assignments = [0] * n_instances
    base, extra = divmod(n_instances, k)
    pos = 0
    for f in range(k):
        size = base + (1 if f < extra else 0)
        for idx in order[pos:pos + size]:
            assignments[idx] = f
        pos += size
    return FoldPlan(k, seed, tuple(assignments))


def make_stratified_folds(labels, k: int, seed: int) -> FoldPlan:
    """Folds that spread each class as evenly as possible.

    Indices are shuffled with the seed, grouped by class (classes in
    first-appearance order), then dealt round-robin to folds.
    """
    n = len(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < k:
        raise ValueError(f"cannot make {k} folds from {n} rows")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    buckets: dict = {}
    for y in labels:
        buckets.setdefault(y, [])
    for i in order:
        buckets[labels[i]].append(i)
    assignments = [0] * n
    t = 0
    for bucket in buckets.values():
        for i in bucket:
            assignments[i] = t % k
            t += 1
    return FoldPlan(k, seed, tuple(assignments))


def accuracy(predictions, truths) -> float:
    """Fraction of positions where prediction equals truth."""
    if len(predictions) != len(truths):
        raise ValueError("predictions and truths differ in length")
    if not truths:
        raise ValueError("accuracy of empty input")
    correct = sum(1 for p, y in zip(predictions, truths) if p == y)
    return correct / len(truths)


def resolve_workers(explicit: int | None = None) -> int:
    """Worker cap: explicit argument, else RUMIX_THREADS, else 1."""
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("RUMIX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            warnings.warn(f"ignoring bad RUMIX_THREADS value {env!r}")
    return 1


@dataclass
class EvalReport:
    """Cross-validation result for one dataset and one mode."""
    dataset: str
    mode: str
    k: int
    seed: int
    stratified: bool
    fold_accuracies: list
    rule_counts: list
    wall_time: float
    config: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> float:
        return sum(self.fold_accuracies) / len(self.fold_accuracies)

    @property
    def mean_accuracy_pct(self) -> float:
        return round(self.mean_accuracy * 100, 2)

    def to_dict(self) -> dict:
        # wall time stays out: file outputs must be run-to-run identical
        return {
            "dataset": self.dataset,
            "mode": self.mode,
            "k": self.k,
            "seed": self.seed,
            "stratified": self.stratified,
            "fold_accuracies": self.fold_accuracies,
            "rule_counts": self.rule_counts,
            "mean_accuracy_pct": self.mean_accuracy_pct,
            "config": self.config,
        }


def evaluate_fold(table: RawTable, train_idx, test_idx,
                  config: LearnerConfig) -> tuple[float, Classifier]:
    """Train on one partition, score the other; no layout leakage."""
    train_tab = table.subset(train_idx)
    test_tab = table.subset(test_idx)
    cuts = cuts_for_table(train_tab)
    schema = build_schema(train_tab, cuts)
    train_ds = encode_dataset(train_tab, schema, train=True)
    clf = fit(train_ds, config)
    test_instances = [
        encode_instance(test_tab.row(i), None, schema, train=False)
        for i in range(test_tab.n_rows)
    ]
    preds = predict_bulk(clf, test_instances)
    pred_labels = [schema.class_labels[p] for p in preds]
    return accuracy(pred_labels, test_tab.class_column.values), clf


def cross_validate(table: RawTable, config: LearnerConfig | None = None,
                   k: int = 10, seed: int = 1, stratified: bool = True,
                   workers: int | None = None) -> EvalReport:
    """Seeded k-fold cross-validation of one raw table."""
    config = config or LearnerConfig()
    labels = table.class_column.values
    if stratified:
        plan = make_stratified_folds(labels, k, seed)
    else:
        plan = make_folds(table.n_rows, k, seed)

    all_classes = set(labels)

    def run_fold(f: int):
        train_idx, test_idx = plan.split(f)
        lost = all_classes - {labels[i] for i in train_idx}
        if lost:
            warnings.warn(
                f"fold {f}: classes {sorted(lost)} absent from the "
                f"training partition; they will never be predicted")
        acc, clf = evaluate_fold(table, train_idx, test_idx, config)
        return acc, len(clf.rules)

    start = time.perf_counter()
    n_workers = resolve_workers(workers)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(run_fold, range(k)))
    else:
        results = [run_fold(f) for f in range(k)]
    elapsed = time.perf_counter() - start

    return EvalReport(
        dataset=table.name,
        mode=config.mode,
        k=k,
        seed=seed,
        stratified=stratified,
        fold_accuracies=[acc for acc, _ in results],
        rule_counts=[rc for _, rc in results],
        wall_time=elapsed,
        config={
            "alpha": config.main_profile.alpha,
            "beta": config.main_profile.beta,
            "composition_beta": config.composition_profile.beta,
            "rng_seed": config.rng_seed,
        },
    )


# ---------------------------------------------------------------------------
# Benchmarks across datasets and modes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkEntry:
    """One dataset to benchmark: a file plus its loader options."""
    name: str
    path: str
    format: str | None = None
    class_column: str | None = None
    categorical: tuple = ()
    numeric: tuple = ()

    def load(self) -> RawTable:
        options = LoaderOptions(class_column=self.class_column,
                                categorical=frozenset(self.categorical),
                                numeric=frozenset(self.numeric))
        table = load_dataset(self.path, format=self.format, options=options)
        table.name = self.name
        return table


@dataclass
class BenchmarkRow:
    dataset: str
    results: dict                      # mode -> EvalReport
    error: str | None = None


@dataclass
class BenchmarkTable:
    modes: list
    rows: list
    published_columns: list = field(default_factory=list)
    published: dict = field(default_factory=dict)

    def _cell(self, row: BenchmarkRow, mode: str) -> float | None:
        report = row.results.get(mode)
        return None if report is None else report.mean_accuracy_pct

    def _column_average(self, values) -> float | None:
        present = [v for v in values if v is not None]
        if not present:
            return None
        return round(sum(present) / len(present), 2)

    def _matrix(self):
        """(header, data rows, average row) with None for missing cells."""
        header = ["dataset"] + list(self.modes) + [
            f"{c} (published)" for c in self.published_columns]
        body = []
        for row in self.rows:
            cells = [self._cell(row, m) for m in self.modes]
            pub = self.published.get(row.dataset, {})
            cells += [pub.get(c) for c in self.published_columns]
            body.append((row.dataset, cells, row.error))
        n_cols = len(self.modes) + len(self.published_columns)
        avg = [self._column_average([b[1][j] for b in body if b[2] is None])
               for j in range(n_cols)]
        return header, body, avg

    def to_csv(self) -> str:
        header, body, avg = self._matrix()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for dataset, cells, error in body:
            if error is not None:
                writer.writerow([dataset] + ["FAILED"] * len(cells))
            else:
                writer.writerow([dataset] + [
                    "" if v is None else f"{v:.2f}" for v in cells])
        writer.writerow(["AVERAGE"] + [
            "" if v is None else f"{v:.2f}" for v in avg])
        return buf.getvalue()

    def to_json(self) -> str:
        import json
        header, body, avg = self._matrix()
        doc = {
            "columns": header,
            "rows": [
                {"dataset": dataset,
                 "error": error,
                 "values": dict(zip(header[1:], cells))}
                for dataset, cells, error in body
            ],
            "average": dict(zip(header[1:], avg)),
        }
        return json.dumps(doc, indent=1) + "\n"

    def to_markdown(self) -> str:
        header, body, avg = self._matrix()
        n_computed = len(self.modes)
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "---|" * len(header)]

        def fmt(cells):
            computed = [v for v in cells[:n_computed] if v is not None]
            best = max(computed) if computed else None
            out = []
            for j, v in enumerate(cells):
                if v is None:
                    out.append("")
                elif j < n_computed and v == best:
                    out.append(f"**{v:.2f}**")
                else:
                    out.append(f"{v:.2f}")
            return out

        for dataset, cells, error in body:
            if error is not None:
                row = [dataset] + [f"FAILED: {error}"] + \
                    [""] * (len(cells) - 1)
            else:
                row = [dataset] + fmt(cells)
            lines.append("| " + " | ".join(row) + " |")
        lines.append("| AVERAGE | " + " | ".join(
            "" if v is None else f"{v:.2f}" for v in avg) + " |")
        return "\n".join(lines) + "\n"


def load_published_accuracies():
    """Published reference accuracies shipped with the package.

    These are reported results from the literature, not computed by this
    library; they exist for side-by-side benchmark tables only.
    Returns (column names, {dataset: {column: value}}).
    """
    text = resources.files("rumix").joinpath(
        "published_accuracies.csv").read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    columns = header[1:]
    table = {}
    for row in reader:
        table[row[0]] = {c: float(v) for c, v in zip(columns, row[1:])}
    return columns, table


def benchmark(entries, modes=("rumc", "racer"), k: int = 10, seed: int = 1,
              stratified: bool = True, workers: int | None = None,
              published_columns=(), base_config: LearnerConfig | None = None,
              progress=None) -> BenchmarkTable:
    """Cross-validate every dataset under every mode; failures become
    FAILED rows instead of aborting the run."""
    if not entries:
        raise ValueError("benchmark needs at least one dataset")
    base = base_config or LearnerConfig()
    published = {}
    published_columns = list(published_columns)
    if published_columns:
        available, table = load_published_accuracies()
        missing = [c for c in published_columns if c not in available]
        if missing:
            raise ValueError(f"unknown published columns: {missing}")
        published = table

    rows = []
    for entry in entries:
        row = BenchmarkRow(entry.name, {})
        try:
            table = entry.load()
            for mode in modes:
                config = LearnerConfig(
                    mode=mode,
                    main_profile=base.main_profile,
                    composition_profile=base.composition_profile,
                    rng_seed=base.rng_seed,
                    max_composition_passes=base.max_composition_passes,
                    best_copy_mutation=base.best_copy_mutation,
                    audit=base.audit,
                )
                report = cross_validate(table, config, k=k, seed=seed,
                                        stratified=stratified,
                                        workers=workers)
                row.results[mode] = report
                if progress is not None:
                    progress(entry.name, mode, report)
        except Exception as exc:          # keep the run going per dataset
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return BenchmarkTable(list(modes), rows, published_columns, published)
