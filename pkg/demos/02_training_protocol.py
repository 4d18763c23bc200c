#!/usr/bin/env python3
"""Train and evaluate the block classifier on the synthetic corpus.

Reproduces the evaluation protocol end to end at small scale:

1. generate the bundled 10-document corpus and show its class mix,
2. one stratified 90/10 split, train, score the held-out rows,
3. repeat the split/train/score cycle 10 times with fresh seeds and
   report mean and spread per label.

The full protocol (100 runs) lives in the eval-runs CLI subcommand and
the acceptance suite; 10 runs keeps this demo under half a minute.
"""

from collections import Counter

from tbrf.classifier import (
    LabeledDataset,
    SvmHyperparams,
    repeated_eval,
    split_dataset,
    train,
)
from tbrf.evaluation import classification_report, format_classification_table
from tbrf.synth import corpus_feature_rows, generate_corpus

HP = SvmHyperparams(c=100.0, gamma=0.1)


def main():
    docs = generate_corpus(10, seed=0)
    rows = corpus_feature_rows(docs)
    dataset = LabeledDataset.from_rows(rows)

    counts = Counter(dataset.labels)
    total = len(dataset.labels)
    print(f"corpus: {len(docs)} documents, {total} labeled text blocks")
    for name in dataset.classes:
        print(f"  {name:<12} {counts[name]:>5}  ({counts[name] / total:.1%})")
    print()

    train_part, test_part = split_dataset(dataset, ratio=0.9, seed=42)
    clf = train(train_part, HP, seed=42)
    pred = clf.predict(test_part.x)
    report = classification_report(pred, list(test_part.labels))
    print(f"single split (seed 42): {len(train_part.labels)} train rows, "
          f"{len(test_part.labels)} test rows")
    print(format_classification_table(report))
    print()

    runs = 10
    print(f"repeated protocol: {runs} randomized 90/10 splits, C={HP.c}, "
          f"gamma={HP.gamma}")
    result = repeated_eval(dataset, runs=runs, ratio=0.9, base_seed=0, hyperparams=HP)
    header = f"{'Label':<12} {'F1 mean':>8} {'F1 std':>8}"
    print(header)
    print("-" * len(header))
    for name, metrics in result["summary"].items():
        display = "All label" if name == "macro" else name
        f1 = metrics["f1"]
        print(f"{display:<12} {f1['mean']:>8.4f} {f1['std']:>8.4f}")


if __name__ == "__main__":
    main()
