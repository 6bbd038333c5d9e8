#!/usr/bin/env python3
"""Fetch the benchmark datasets into datasets/ (network required).

This script documents where the committed ARFF files came from; the test
suite never needs the network because the files are checked in.  Sources:

* PMLB (github.com/EpistasisLab/pmlb) for the boolean-function and
  integer-coded categorical datasets.  The tsv.gz files are converted to
  nominal ARFF (every column categorical) because these datasets are
  categorical by nature and PMLB stores them as integer codes.
* The classic UCI-in-ARFF collection mirrored at
  github.com/renatopp/arff-datasets for the datasets that need declared
  nominal domains, numeric attributes, or "?" missing markers.

Note: PMLB's nursery variant drops the two-instance "recommend" class
(12958 rows), so nursery comes from the ARFF collection (12960 rows, five
classes).
"""

import gzip
import io
import re
import sys
import urllib.request
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "datasets"

PMLB = ("https://github.com/EpistasisLab/pmlb/raw/master/datasets/"
        "{name}/{name}.tsv.gz")
PMLB_DATASETS = {
    # pmlb name -> local name
    "mux6": "mux6",
    "threeOf9": "threeOf9",
    "xd6": "xd6",
    "parity5+5": "parity5_plus_5",
    "monk2": "monks-problems-2",
    "led7": "led7",
}

ARFF_PACK = ("https://github.com/renatopp/arff-datasets/raw/master/"
             "classification/{name}.arff")
ARFF_DATASETS = {
    # upstream name -> local name
    "vote": "vote",
    "kr.vs.kp": "kr-vs-kp",
    "diabetes": "diabetes",
    "heart.statlog": "heart-statlog",
    "heart.h": "heart-h",
    "nursery": "nursery",
}


def fetch(url: str) -> bytes:
    print(f"  GET {url}")
    with urllib.request.urlopen(url) as response:
        return response.read()


def sanitize(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_]", "_", name.strip())


def tsv_to_nominal_arff(raw: bytes, relation: str) -> str:
    with gzip.open(io.BytesIO(raw), "rt") as f:
        header = f.readline().rstrip("\n").split("\t")
        rows = [line.rstrip("\n").split("\t") for line in f if line.strip()]
    domains = [[] for _ in header]
    for row in rows:
        for j, value in enumerate(row):
            if value not in domains[j]:
                domains[j].append(value)
    names = [sanitize(h) for h in header]
    names[-1] = "class"
    out = [f"@relation {relation}", ""]
    out += [f"@attribute {n} {{{','.join(d)}}}"
            for n, d in zip(names, domains)]
    out += ["", "@data"]
    out += [",".join(row) for row in rows]
    return "\n".join(out) + "\n"


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    for pmlb_name, local in PMLB_DATASETS.items():
        target = OUT / f"{local}.arff"
        if target.exists():
            print(f"{target.name} already present")
            continue
        raw = fetch(PMLB.format(name=pmlb_name))
        target.write_text(tsv_to_nominal_arff(raw, local), encoding="utf-8")
        print(f"  wrote {target}")
    for upstream, local in ARFF_DATASETS.items():
        target = OUT / f"{local}.arff"
        if target.exists():
            print(f"{target.name} already present")
            continue
        raw = fetch(ARFF_PACK.format(name=upstream))
        target.write_bytes(raw)
        print(f"  wrote {target}")
    print("done")
    return 0


if __name__ == "__main__":
    sys.exit(main())
