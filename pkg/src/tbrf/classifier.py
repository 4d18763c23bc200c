"""RBF-kernel SVM with a hand-written sequential dual optimizer.

The binary solver maximizes the usual dual

    W(a) = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
    s.t.  0 <= a_i <= C,  sum_i a_i y_i = 0

by repeatedly updating the maximal violating pair: with f_i the margin
sum and v = y - f, candidates that may move up are
I_up = {y>0, a<C} u {y<0, a>0} and down I_low = {y>0, a>0} u {y<0, a<C}.
The solver stops when max(v[I_up]) - min(v[I_low]) <= tol, which bounds
every KKT violation by tol/2 once the bias is set to the interval
midpoint. No randomness is involved; ties resolve to the first index,
so training is bit-reproducible.

Multiclass uses one machine per unordered class pair (one-vs-one) with
majority voting, or optionally one-vs-rest. Class order is canonical:
the three layout labels sort BodyText, Supplement, Accessory; anything
else sorts lexicographically after them.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .blocks import LABEL_ORDER, BlockLabel
from .encoder import N_FEATURES, FeatureRow, feature_rows
from .errors import (
    ClassTooSmallError,
    DatasetError,
    DimensionMismatchError,
    SchemaError,
    SingleClassError,
)

logger = logging.getLogger(__name__)

MODEL_FORMAT_VERSION = 1

_LABEL_RANK = {lbl.value: i for i, lbl in enumerate(LABEL_ORDER)}


def canonical_classes(labels: Iterable[str]) -> tuple[str, ...]:
    """Deterministic class order: layout labels first, then lexicographic."""
    return tuple(
        sorted(set(labels), key=lambda s: (_LABEL_RANK.get(s, len(_LABEL_RANK)), s))
    )


@dataclass(frozen=True, slots=True)
class SvmHyperparams:
    c: float = 100.0
    gamma: float = 0.1
    tol: float = 1e-3
    kernel: str = "rbf"
    max_pair_updates: int = 1_000_000

    def __post_init__(self) -> None:
        if self.kernel != "rbf":
            raise SchemaError(f"unsupported kernel {self.kernel!r}")
        if self.c <= 0 or self.gamma <= 0 or self.tol <= 0:
            raise SchemaError("c, gamma, and tol must be positive")


DEFAULT_HYPERPARAMS = SvmHyperparams()


def rbf_kernel(xa: np.ndarray, xb: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise exp(-gamma * ||a - b||^2), shape (len(xa), len(xb))."""
    sq_a = np.sum(xa * xa, axis=1)[:, None]
    sq_b = np.sum(xb * xb, axis=1)[None, :]
    d2 = sq_a + sq_b - 2.0 * (xa @ xb.T)
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


@dataclass(slots=True)
class SmoSolution:
    alpha: np.ndarray
    bias: float
    pair_updates: int
    converged: bool

    def dual_objective(self, kernel: np.ndarray, y: np.ndarray) -> float:
        coef = self.alpha * y
        return float(np.sum(self.alpha) - 0.5 * coef @ kernel @ coef)


def smo_solve(
    kernel: np.ndarray,
    y: np.ndarray,
    c: float,
    tol: float = 1e-3,
    max_pair_updates: int = 1_000_000,
) -> SmoSolution:
    """Solve the binary dual for a precomputed kernel matrix."""
    n = y.shape[0]
    if kernel.shape != (n, n):
        raise DimensionMismatchError(
            f"kernel is {kernel.shape}, expected ({n}, {n})"
        )
    alpha = np.zeros(n)
    f = np.zeros(n)  # f_i = sum_j a_j y_j K_ij, bias excluded
    pos = y > 0
    neg = ~pos

    updates = 0
    converged = False
    while True:
        v = y - f
        up = (pos & (alpha < c)) | (neg & (alpha > 0.0))
        low = (pos & (alpha > 0.0)) | (neg & (alpha < c))
        m, i = _masked_argmax(v, up)
        mm, j = _masked_argmin(v, low)
        if i < 0 or j < 0 or m - mm <= tol:
            converged = True
            break
        if updates >= max_pair_updates:
            logger.warning(
                "pair-update cap %d reached with gap %.3g; returning current iterate",
                max_pair_updates,
                m - mm,
            )
            break

        a_i, a_j = alpha[i], alpha[j]
        y_i, y_j = y[i], y[j]
        s = y_i * y_j
        e_i = f[i] - y_i
        e_j = f[j] - y_j
        if s < 0:
            lo_b = max(0.0, a_j - a_i)
            hi_b = min(c, c + a_j - a_i)
        else:
            lo_b = max(0.0, a_i + a_j - c)
            hi_b = min(c, a_i + a_j)

        eta = kernel[i, i] + kernel[j, j] - 2.0 * kernel[i, j]
        if eta > 1e-12:
            a_j_new = a_j + y_j * (e_i - e_j) / eta
            a_j_new = min(max(a_j_new, lo_b), hi_b)
        else:
            # Degenerate direction (duplicate points): the restricted
            # objective is linear in a_j, so the optimum sits at a bound.
            slope = y_j * (e_i - e_j)
            a_j_new = hi_b if slope > 0.0 else lo_b

        if abs(a_j_new - a_j) < 1e-14 * (abs(a_j_new) + abs(a_j) + 1.0):
            logger.warning("no numeric progress on pair (%d, %d); stopping", i, j)
            break
        a_j_new = _snap_to_bounds(a_j_new, c)
        a_i_new = _snap_to_bounds(min(max(a_i + s * (a_j - a_j_new), 0.0), c), c)

        f += (a_i_new - a_i) * y_i * kernel[:, i]
        f += (a_j_new - a_j) * y_j * kernel[:, j]
        alpha[i] = a_i_new
        alpha[j] = a_j_new
        updates += 1

    v = y - f
    up = (pos & (alpha < c)) | (neg & (alpha > 0.0))
    low = (pos & (alpha > 0.0)) | (neg & (alpha < c))
    m = float(np.max(v[up])) if np.any(up) else None
    mm = float(np.min(v[low])) if np.any(low) else None
    if m is None and mm is None:
        bias = 0.0
    elif m is None:
        bias = mm
    elif mm is None:
        bias = m
    else:
        bias = 0.5 * (m + mm)
    return SmoSolution(alpha=alpha, bias=float(bias), pair_updates=updates, converged=converged)


def _snap_to_bounds(value: float, c: float) -> float:
    """Collapse float residue at the box edges.

    Pair updates that clip one variable leave the other a few ulps off
    its bound; such ghosts stay in the candidate sets with no room to
    move and can deadlock the violating-pair selection.
    """
    if value <= 1e-12 * c:
        return 0.0
    if value >= c * (1.0 - 1e-12):
        return c
    return value


def _masked_argmax(values: np.ndarray, mask: np.ndarray) -> tuple[float, int]:
    if not np.any(mask):
        return -math.inf, -1
    masked = np.where(mask, values, -np.inf)
    idx = int(np.argmax(masked))
    return float(masked[idx]), idx


def _masked_argmin(values: np.ndarray, mask: np.ndarray) -> tuple[float, int]:
    if not np.any(mask):
        return math.inf, -1
    masked = np.where(mask, values, np.inf)
    idx = int(np.argmin(masked))
    return float(masked[idx]), idx


# ---------------------------------------------------------------------------
# Multiclass wrapper
# ---------------------------------------------------------------------------

REST_CLASS = "__rest__"


@dataclass(slots=True)
class BinaryMachine:
    """One trained binary machine: class_a maps to +1, class_b to -1."""

    class_a: str
    class_b: str
    support_vectors: np.ndarray
    coefficients: np.ndarray  # alpha_i * y_i at the support vectors
    bias: float

    def decision(self, x: np.ndarray, gamma: float) -> np.ndarray:
        if self.support_vectors.size == 0:
            return np.full(x.shape[0], self.bias)
        k = rbf_kernel(x, self.support_vectors, gamma)
        return k @ self.coefficients + self.bias


SUPPORT_EPS = 1e-10


class SvmClassifier:
    """One-vs-one (default) or one-vs-rest multiclass RBF SVM."""

    def __init__(
        self,
        hyperparams: SvmHyperparams = DEFAULT_HYPERPARAMS,
        strategy: str = "ovo",
    ) -> None:
        if strategy not in ("ovo", "ovr"):
            raise SchemaError(f"strategy must be 'ovo' or 'ovr', got {strategy!r}")
        self.hyperparams = hyperparams
        self.strategy = strategy
        self.classes: tuple[str, ...] = ()
        self.machines: list[BinaryMachine] = []
        self.n_features: int | None = None
        self.metadata: dict = {}

    # -- training -----------------------------------------------------

    def fit(self, x: np.ndarray, labels: Sequence[str]) -> "SvmClassifier":
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2:
            raise DimensionMismatchError(f"x must be 2-d, got shape {x.shape}")
        if x.shape[0] != len(labels):
            raise DimensionMismatchError(
                f"{x.shape[0]} feature rows vs {len(labels)} labels"
            )
        self.classes = canonical_classes(labels)
        if len(self.classes) < 2:
            raise SingleClassError(
                f"need at least 2 classes, got {list(self.classes)}"
            )
        self.n_features = x.shape[1]
        label_arr = np.asarray(labels, dtype=object)
        self.machines = []
        if self.strategy == "ovo":
            for ai in range(len(self.classes)):
                for bi in range(ai + 1, len(self.classes)):
                    a, b = self.classes[ai], self.classes[bi]
                    mask = (label_arr == a) | (label_arr == b)
                    sub_x = x[mask]
                    sub_y = np.where(label_arr[mask] == a, 1.0, -1.0)
                    self.machines.append(self._train_machine(a, b, sub_x, sub_y))
        else:
            for a in self.classes:
                sub_y = np.where(label_arr == a, 1.0, -1.0)
                self.machines.append(self._train_machine(a, REST_CLASS, x, sub_y))
        return self

    def _train_machine(
        self, class_a: str, class_b: str, x: np.ndarray, y: np.ndarray
    ) -> BinaryMachine:
        hp = self.hyperparams
        kernel = rbf_kernel(x, x, hp.gamma)
        sol = smo_solve(kernel, y, hp.c, hp.tol, hp.max_pair_updates)
        keep = sol.alpha > SUPPORT_EPS
        return BinaryMachine(
            class_a=class_a,
            class_b=class_b,
            support_vectors=x[keep].copy(),
            coefficients=(sol.alpha * y)[keep],
            bias=sol.bias,
        )

    # -- inference ----------------------------------------------------

    def predict(self, x: np.ndarray) -> list[str]:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or (self.n_features is not None and x.shape[1] != self.n_features):
            raise DimensionMismatchError(
                f"expected (n, {self.n_features}) features, got {x.shape}"
            )
        if not self.machines:
            raise SingleClassError("classifier is not trained")
        n = x.shape[0]
        k = len(self.classes)
        index = {c: i for i, c in enumerate(self.classes)}
        if self.strategy == "ovr":
            scores = np.empty((n, k))
            for machine in self.machines:
                scores[:, index[machine.class_a]] = machine.decision(
                    x, self.hyperparams.gamma
                )
            # argmax takes the first (earlier class) on exact ties
            return [self.classes[i] for i in np.argmax(scores, axis=1)]

        votes = np.zeros((n, k), dtype=np.int64)
        scores = np.zeros((n, k))
        for machine in self.machines:
            d = machine.decision(x, self.hyperparams.gamma)
            a, b = index[machine.class_a], index[machine.class_b]
            wins_a = d > 0.0
            votes[wins_a, a] += 1
            votes[~wins_a, b] += 1
            scores[:, a] += d
            scores[:, b] -= d
        out = []
        for r in range(n):
            best = max(
                range(k), key=lambda ci: (votes[r, ci], scores[r, ci], -ci)
            )
            out.append(self.classes[best])
        return out

    def predict_one(self, features: Sequence[float]) -> str:
        return self.predict(np.asarray(features, dtype=np.float64)[None, :])[0]

    # -- persistence ----------------------------------------------------

    def to_json_dict(self) -> dict:
        hp = self.hyperparams
        return {
            "version": MODEL_FORMAT_VERSION,
            "strategy": self.strategy,
            "classes": list(self.classes),
            "hyperparams": {
                "c": hp.c,
                "gamma": hp.gamma,
                "tol": hp.tol,
                "kernel": hp.kernel,
            },
            "machines": [
                {
                    "class_a": m.class_a,
                    "class_b": m.class_b,
                    "support_vectors": [list(map(float, row)) for row in m.support_vectors],
                    "coefficients": [float(v) for v in m.coefficients],
                    "bias": m.bias,
                }
                for m in self.machines
            ],
            "metadata": self.metadata,
        }

    def save(self, fp: IO[str]) -> None:
        json.dump(self.to_json_dict(), fp, ensure_ascii=False, indent=2)
        fp.write("\n")

    @classmethod
    def from_json_dict(cls, data: dict) -> "SvmClassifier":
        if not isinstance(data, dict):
            raise SchemaError("model root must be an object")
        version = data.get("version")
        if version != MODEL_FORMAT_VERSION:
            raise SchemaError(f"unsupported model version {version!r}")
        hp_raw = data.get("hyperparams")
        if not isinstance(hp_raw, dict):
            raise SchemaError("model hyperparams must be an object")
        try:
            hp = SvmHyperparams(
                c=float(hp_raw["c"]),
                gamma=float(hp_raw["gamma"]),
                tol=float(hp_raw["tol"]),
                kernel=str(hp_raw.get("kernel", "rbf")),
            )
        except KeyError as exc:
            raise SchemaError(f"model hyperparams missing {exc}")
        clf = cls(hyperparams=hp, strategy=str(data.get("strategy", "ovo")))
        classes = data.get("classes")
        machines = data.get("machines")
        if not isinstance(classes, list) or not all(isinstance(c, str) for c in classes):
            raise SchemaError("model classes must be a list of strings")
        if not isinstance(machines, list):
            raise SchemaError("model machines must be a list")
        clf.classes = tuple(classes)
        for m_idx, m_raw in enumerate(machines):
            if not isinstance(m_raw, dict):
                raise SchemaError(f"machines[{m_idx}] must be an object")
            try:
                sv = np.asarray(m_raw["support_vectors"], dtype=np.float64)
                coef = np.asarray(m_raw["coefficients"], dtype=np.float64)
                machine = BinaryMachine(
                    class_a=str(m_raw["class_a"]),
                    class_b=str(m_raw["class_b"]),
                    support_vectors=sv if sv.size else sv.reshape(0, N_FEATURES),
                    coefficients=coef,
                    bias=float(m_raw["bias"]),
                )
            except (KeyError, ValueError) as exc:
                raise SchemaError(f"machines[{m_idx}] is malformed: {exc}")
            if machine.support_vectors.shape[0] != machine.coefficients.shape[0]:
                raise SchemaError(
                    f"machines[{m_idx}]: support vector and coefficient counts differ"
                )
            clf.machines.append(machine)
        if clf.machines:
            widths = {m.support_vectors.shape[1] for m in clf.machines if m.support_vectors.size}
            if len(widths) > 1:
                raise SchemaError("machines disagree on feature width")
            clf.n_features = widths.pop() if widths else None
        metadata = data.get("metadata", {})
        if not isinstance(metadata, dict):
            raise SchemaError("model metadata must be an object")
        clf.metadata = metadata
        return clf

    @classmethod
    def load(cls, fp: IO[str]) -> "SvmClassifier":
        try:
            data = json.load(fp)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"model file is not valid JSON: {exc}")
        return cls.from_json_dict(data)


# ---------------------------------------------------------------------------
# Labeled datasets and the split/evaluate protocol
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class LabeledDataset:
    """Feature matrix with aligned labels and row provenance."""

    x: np.ndarray
    labels: tuple[str, ...]
    block_ids: tuple[int, ...]
    doc_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        n = self.x.shape[0]
        if not (len(self.labels) == len(self.block_ids) == len(self.doc_ids) == n):
            raise DatasetError("dataset columns have mismatched lengths")
        keys = set(zip(self.doc_ids, self.block_ids))
        if len(keys) != n:
            raise DatasetError("duplicate (doc_id, block_id) rows in dataset")

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def classes(self) -> tuple[str, ...]:
        return canonical_classes(self.labels)

    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {c: 0 for c in self.classes}
        for lbl in self.labels:
            counts[lbl] += 1
        return counts

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        idx = list(indices)
        return LabeledDataset(
            x=self.x[idx],
            labels=tuple(self.labels[i] for i in idx),
            block_ids=tuple(self.block_ids[i] for i in idx),
            doc_ids=tuple(self.doc_ids[i] for i in idx),
        )

    @classmethod
    def from_rows(cls, rows: Iterable[FeatureRow]) -> "LabeledDataset":
        rows = list(rows)
        unlabeled = [r.block_id for r in rows if r.label is None]
        if unlabeled:
            raise DatasetError(
                f"{len(unlabeled)} rows have no label (first block_id {unlabeled[0]})"
            )
        if not rows:
            raise DatasetError("no feature rows")
        return cls(
            x=np.asarray([r.features for r in rows], dtype=np.float64),
            labels=tuple(r.label for r in rows),
            block_ids=tuple(r.block_id for r in rows),
            doc_ids=tuple(r.doc_id for r in rows),
        )


def train(
    data: LabeledDataset,
    hyperparams: SvmHyperparams = DEFAULT_HYPERPARAMS,
    seed: int = 0,
    strategy: str = "ovo",
) -> SvmClassifier:
    """Train a classifier on a full labeled dataset.

    Training itself is deterministic; the seed is recorded in the model
    metadata so downstream artifacts can state their provenance.
    """
    clf = SvmClassifier(hyperparams=hyperparams, strategy=strategy)
    clf.fit(data.x, list(data.labels))
    clf.metadata = {"seed": seed, "rows": len(data)}
    return clf


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def split_dataset(
    dataset: LabeledDataset, ratio: float, seed: int
) -> tuple[LabeledDataset, LabeledDataset]:
    """Stratified train/validation split.

    Each class contributes round(ratio * count) training rows, then a
    largest-remainder pass nudges per-class counts so the train total
    equals round(ratio * len(dataset)). Every class must keep at least
    one row on each side.
    """
    if not (0.0 < ratio < 1.0):
        raise DatasetError(f"ratio must be in (0, 1), got {ratio}")
    classes = dataset.classes
    label_arr = np.asarray(dataset.labels, dtype=object)
    per_class_idx = {c: np.flatnonzero(label_arr == c) for c in classes}

    counts = {c: len(per_class_idx[c]) for c in classes}
    target_total = _round_half_up(ratio * len(dataset))
    take = {c: _round_half_up(ratio * counts[c]) for c in classes}
    remainder = {c: ratio * counts[c] - take[c] for c in classes}

    delta = target_total - sum(take.values())
    while delta != 0:
        if delta > 0:
            movable = [c for c in classes if take[c] < counts[c]]
            if not movable:
                break
            pick = max(movable, key=lambda c: (remainder[c], -classes.index(c)))
            take[pick] += 1
            delta -= 1
        else:
            movable = [c for c in classes if take[c] > 0]
            if not movable:
                break
            pick = min(movable, key=lambda c: (remainder[c], classes.index(c)))
            take[pick] -= 1
            delta += 1

    for c in classes:
        if take[c] == 0 or take[c] == counts[c]:
            side = "training" if take[c] == 0 else "validation"
            raise ClassTooSmallError(
                f"class {c!r} has {counts[c]} rows; split leaves its {side} side empty",
                class_name=c,
                count=counts[c],
            )

    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    val_idx: list[int] = []
    for c in classes:
        idx = per_class_idx[c]
        perm = rng.permutation(len(idx))
        chosen = idx[perm[: take[c]]]
        rest = idx[perm[take[c] :]]
        train_idx.extend(int(i) for i in chosen)
        val_idx.extend(int(i) for i in rest)
    train_idx.sort()
    val_idx.sort()
    return dataset.subset(train_idx), dataset.subset(val_idx)


def repeated_eval(
    dataset: LabeledDataset,
    runs: int,
    ratio: float = 0.9,
    base_seed: int = 0,
    hyperparams: SvmHyperparams = DEFAULT_HYPERPARAMS,
    strategy: str = "ovo",
    jobs: int = 1,
) -> dict:
    """Repeat split/train/evaluate and aggregate per-class metrics.

    Run r uses seed base_seed + r for its split. The summary holds the
    mean and population standard deviation of precision/recall/f1 per
    class and for the macro row across all runs.
    """
    if runs < 1:
        raise DatasetError(f"runs must be >= 1, got {runs}")
    args = [
        (dataset, ratio, base_seed + r, hyperparams, strategy) for r in range(runs)
    ]
    if jobs > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_one_eval_run, args))
    else:
        reports = [_one_eval_run(a) for a in args]

    row_names = list(reports[0].keys())
    summary: dict[str, dict[str, dict[str, float]]] = {}
    for row in row_names:
        summary[row] = {}
        for metric in ("precision", "recall", "f1"):
            values = np.asarray([rep[row][metric] for rep in reports])
            summary[row][metric] = {
                "mean": float(np.mean(values)),
                "std": float(np.std(values)),
            }
    return {
        "runs": runs,
        "ratio": ratio,
        "base_seed": base_seed,
        "per_run": reports,
        "summary": summary,
    }


def _one_eval_run(args: tuple) -> dict:
    from .evaluation import classification_report

    dataset, ratio, seed, hyperparams, strategy = args
    train_set, val = split_dataset(dataset, ratio, seed)
    clf = SvmClassifier(hyperparams=hyperparams, strategy=strategy)
    clf.fit(train_set.x, list(train_set.labels))
    pred = clf.predict(val.x)
    return classification_report(pred, list(val.labels))


def classify_document(doc, classifier: SvmClassifier) -> dict[int, str]:
    """Label every block of a document.

    Text blocks go through the classifier; image blocks are labeled
    Supplement directly, matching how they are excluded from training.
    """
    rows = feature_rows(doc)
    labels: dict[int, str] = {}
    text_rows = []
    for row in rows:
        if doc.block_by_id(row.block_id).is_text:
            text_rows.append(row)
        else:
            labels[row.block_id] = BlockLabel.SUPPLEMENT.value
    if text_rows:
        x = np.asarray([row.features for row in text_rows], dtype=np.float64)
        for row, label in zip(text_rows, classifier.predict(x)):
            labels[row.block_id] = label
    return labels
