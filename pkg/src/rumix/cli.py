"""Command-line front end: fit, predict, eval, and bench subcommands.

Option precedence is CLI flag > config file > built-in default.  The
config file is a flat key=value document ("#" starts a comment); known
keys are mode, alpha, beta, gamma, k, seed, stratified,
max_composition_passes, best_copy_mutation.

Exit codes: 0 ok, 2 input error, 3 schema mismatch, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from ._version import __version__
from .data import (DataFormatError, LoaderOptions, SchemaMismatchError,
                   build_schema, encode_dataset, encode_instance,
                   load_dataset)
from .discretize import cuts_for_table
from .evaluate import (BenchmarkEntry, benchmark, cross_validate,
                       resolve_workers)
from .fitness import WeightProfile
from .learner import (LearnerConfig, fit, load_classifier, predict_detail,
                      save_classifier)
from .rules import render

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SCHEMA = 3
EXIT_INTERNAL = 4

_DEFAULTS = {
    "mode": "rumc",
    "alpha": 0.99,
    "beta": 0.01,
    "gamma": 0.6,
    "k": 10,
    "seed": 1,
    "stratified": True,
    "max_composition_passes": 10,
    "best_copy_mutation": False,
}

_BOOL_STRINGS = {"true": True, "false": False, "1": True, "0": False,
                 "yes": True, "no": False}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL_STRINGS[text.strip().lower()]
    except KeyError:
        raise ValueError(f"expected true/false, got {text!r}") from None


def read_config_file(path) -> dict:
    """Parse the key=value config document."""
    values = {}
    for lineno, raw in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataFormatError(
                f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _DEFAULTS:
            raise DataFormatError(f"{path}:{lineno}: unknown key {key!r}")
        kind = type(_DEFAULTS[key])
        try:
            if kind is bool:
                values[key] = _parse_bool(value)
            elif kind is int:
                values[key] = int(value)
            elif kind is float:
                values[key] = float(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise DataFormatError(f"{path}:{lineno}: {exc}") from None
    return values


def effective_settings(args) -> dict:
    """Merge CLI flags over config-file values over defaults."""
    settings = dict(_DEFAULTS)
    if getattr(args, "config", None):
        settings.update(read_config_file(args.config))
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def learner_config(settings, audit: bool = False) -> LearnerConfig:
    alpha, beta, gamma = settings["alpha"], settings["beta"], settings["gamma"]
    if abs(alpha + beta - 1.0) > 1e-9:
        raise ValueError(f"alpha + beta must equal 1, got {alpha + beta}")
    return LearnerConfig(
        mode=settings["mode"],
        main_profile=WeightProfile(alpha, beta),
        composition_profile=WeightProfile(alpha, gamma),
        rng_seed=settings["seed"],
        max_composition_passes=settings["max_composition_passes"],
        best_copy_mutation=settings["best_copy_mutation"],
        audit=audit,
    )


def _loader_options(args) -> LoaderOptions:
    return LoaderOptions(
        class_column=getattr(args, "class_column", None),
        categorical=frozenset(getattr(args, "categorical", None) or ()),
    )


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--mode", choices=["rumc", "racer"])
    p.add_argument("--alpha", type=float, help="accuracy weight")
    p.add_argument("--beta", type=float, help="coverage weight")
    p.add_argument("--gamma", type=float,
                   help="coverage weight during rule composition")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-composition-passes", type=int,
                   dest="max_composition_passes")
    p.add_argument("--best-copy-mutation", type=_parse_bool,
                   dest="best_copy_mutation", metavar="BOOL")


def _add_loader_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--class-column", dest="class_column",
                   help="class column name (default: last column)")
    p.add_argument("--categorical", action="append", metavar="COLUMN",
                   help="force a column categorical (repeatable)")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_fit(args) -> int:
    settings = effective_settings(args)
    table = load_dataset(args.data, options=_loader_options(args))
    cuts = cuts_for_table(table)
    schema = build_schema(table, cuts)
    dataset = encode_dataset(table, schema)
    clf = fit(dataset, learner_config(settings))
    save_classifier(clf, args.out)
    print(f"trained {clf.config.mode} classifier: {len(clf.rules)} rules "
          f"over {len(dataset)} records -> {args.out}")
    for rule in clf.rules[:5]:
        print(f"  [fitness {rule.fitness:.4f}] {render(rule, schema)}")
    return EXIT_OK


def cmd_predict(args) -> int:
    clf = load_classifier(args.model)
    table = load_dataset(args.data, options=_loader_options(args))
    schema = clf.schema
    names = {f.name for f in schema.features}
    present = set(table.feature_names) | {table.class_column.name}
    missing = names - present
    if missing:
        raise SchemaMismatchError(
            f"data lacks model features: {sorted(missing)}")
    col_by_name = {c.name: c for c in table.columns}
    col_by_name[table.class_column.name] = table.class_column

    rows = []
    for i in range(table.n_rows):
        row = [col_by_name[f.name].values[i] for f in schema.features]
        inst = encode_instance(row, None, schema, train=False)
        cls, rule = predict_detail(clf, inst)
        rows.append([i, schema.class_labels[cls],
                     "default" if rule is None else rule.seq])

    with open(args.out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["row_id", "predicted", "matched_rule_seq"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} predictions -> {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    settings = effective_settings(args)
    table = load_dataset(args.data, options=_loader_options(args))
    report = cross_validate(table, learner_config(settings),
                            k=settings["k"], seed=settings["seed"],
                            stratified=settings["stratified"],
                            workers=resolve_workers())
    print(f"{report.dataset} [{report.mode}] {report.k}-fold "
          f"(seed {report.seed}, "
          f"{'stratified' if report.stratified else 'shuffled'}): "
          f"mean accuracy {report.mean_accuracy_pct:.2f}")
    print("  folds: " + " ".join(f"{a * 100:.2f}"
                                 for a in report.fold_accuracies))
    print(f"  timing: {report.wall_time:.2f}s", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(
            json.dumps(report.to_dict(), indent=1) + "\n", encoding="utf-8")
        print(f"wrote report -> {args.out}")
    return EXIT_OK


def _load_manifest(path) -> tuple[list[BenchmarkEntry], list[str]]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    base = Path(path).parent
    entries = []
    for item in doc.get("datasets", []):
        entries.append(BenchmarkEntry(
            name=item["name"],
            path=str((base / item["path"]).resolve()),
            format=item.get("format"),
            class_column=item.get("class_column"),
            categorical=tuple(item.get("categorical", ())),
            numeric=tuple(item.get("numeric", ())),
        ))
    return entries, list(doc.get("published", []))


def cmd_bench(args) -> int:
    settings = effective_settings(args)
    entries, published = _load_manifest(args.manifest)
    if not entries:
        raise DataFormatError("manifest lists no datasets")
    modes = args.modes.split(",") if args.modes else ["rumc", "racer"]
    formats = (args.format or "csv,md").split(",")

    def progress(name, mode, report):
        print(f"  {name} [{mode}]: {report.mean_accuracy_pct:.2f} "
              f"({report.wall_time:.1f}s)", file=sys.stderr)

    start = time.perf_counter()
    table = benchmark(entries, modes=modes, k=settings["k"],
                      seed=settings["seed"],
                      stratified=settings["stratified"],
                      workers=resolve_workers(),
                      published_columns=published,
                      base_config=learner_config(settings),
                      progress=progress)
    print(f"benchmark finished in {time.perf_counter() - start:.1f}s",
          file=sys.stderr)

    out_dir = Path(args.out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    if "csv" in formats:
        (out_dir / "benchmark.csv").write_text(table.to_csv(),
                                               encoding="utf-8")
        print(f"wrote {out_dir / 'benchmark.csv'}")
    if "md" in formats:
        (out_dir / "benchmark.md").write_text(table.to_markdown(),
                                              encoding="utf-8")
        print(f"wrote {out_dir / 'benchmark.md'}")
    if "json" in formats:
        (out_dir / "benchmark.json").write_text(table.to_json(),
                                                encoding="utf-8")
        print(f"wrote {out_dir / 'benchmark.json'}")

    failures = [r for r in table.rows if r.error is not None]
    for row in failures:
        print(f"FAILED {row.dataset}: {row.error}", file=sys.stderr)
    return EXIT_OK if len(failures) < len(table.rows) else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rumix",
        description="Bit-vector rule induction: train, predict, "
                    "cross-validate, benchmark.")
    parser.add_argument("--version", action="version",
                        version=f"rumix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="train on a dataset, write model JSON")
    p.add_argument("data", help="ARFF or CSV dataset")
    p.add_argument("--out", required=True, help="model output path")
    _add_common_flags(p)
    _add_loader_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="label a dataset with a saved model")
    p.add_argument("model", help="model JSON from fit")
    p.add_argument("data", help="ARFF or CSV dataset")
    p.add_argument("--out", required=True, help="predictions CSV path")
    _add_loader_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="k-fold cross-validation on a dataset")
    p.add_argument("data", help="ARFF or CSV dataset")
    p.add_argument("--k", type=int)
    p.add_argument("--stratified", type=_parse_bool, metavar="BOOL")
    p.add_argument("--out", help="write the report as JSON")
    _add_common_flags(p)
    _add_loader_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="benchmark a manifest of datasets")
    p.add_argument("manifest", help="JSON manifest of datasets")
    p.add_argument("--modes", help="comma-separated modes (default both)")
    p.add_argument("--k", type=int)
    p.add_argument("--stratified", type=_parse_bool, metavar="BOOL")
    p.add_argument("--out-dir", dest="out_dir", help="output directory")
    p.add_argument("--format", help="comma-separated: csv,md,json")
    _add_common_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (FileNotFoundError, DataFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
