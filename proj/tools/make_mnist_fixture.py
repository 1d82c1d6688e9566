#!/usr/bin/env python3
# Copyright 2026 The torus_secagg Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds the bundled MNIST subset fixture as IDX files.

Source: the 5,000-sample MNIST CSV shipped with mlxtend
(mlxtend/data/data/mnist_5k.csv.gz; 785 columns, label last, 500 samples
per class, sorted by label). The fixture takes a class-balanced, shuffled
split of 1,000 training and 1,000 test images.

  python3 tools/make_mnist_fixture.py path/to/mnist_5k.csv.gz data/mnist_subset
"""

import argparse
import gzip
import pathlib
import random
import struct


def write_idx(path, dims, payload):
    header = bytes([0, 0, 0x08, len(dims)]) + b"".join(
        struct.pack(">I", d) for d in dims)
    path.write_bytes(header + bytes(payload))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("out_dir")
    ap.add_argument("--per-class-train", type=int, default=100)
    ap.add_argument("--per-class-test", type=int, default=100)
    ap.add_argument("--seed", type=int, default=20240531)
    args = ap.parse_args()

    opener = gzip.open if args.csv.endswith(".gz") else open
    by_class = {}
    with opener(args.csv, "rt") as f:
        for line in f:
            cols = line.strip().split(",")
            if len(cols) != 785:
                continue
            pixels = [int(float(v)) for v in cols[:-1]]
            label = int(float(cols[-1]))
            by_class.setdefault(label, []).append(pixels)

    rng = random.Random(args.seed)
    train, test = [], []
    for label in sorted(by_class):
        rows = by_class[label]
        rng.shuffle(rows)
        ntr, nte = args.per_class_train, args.per_class_test
        train += [(label, r) for r in rows[:ntr]]
        test += [(label, r) for r in rows[ntr:ntr + nte]]
    rng.shuffle(train)
    rng.shuffle(test)

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for prefix, rows in (("train", train), ("t10k", test)):
        write_idx(out / f"{prefix}-images-idx3-ubyte", [len(rows), 28, 28],
                  [p for _, r in rows for p in r])
        write_idx(out / f"{prefix}-labels-idx1-ubyte", [len(rows)],
                  [label for label, _ in rows])
    print(f"wrote {len(train)} train / {len(test)} test samples to {out}")


if __name__ == "__main__":
    main()
