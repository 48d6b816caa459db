"""Handwritten-digit experiment: one-vs-all indicator regression with a
shared design across the ten digit tasks.

The dataset is the six-view numeral collection: 2000 rows (200 per digit,
class-ordered) split over six space-separated files, one per feature family.
Views are concatenated to 649 columns and standardized per column before
fitting.  The user supplies the files; nothing is downloaded.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import MultiTaskProblem, Task

# (file suffix, column count), concatenated in this order.
FEATURE_FILES = (
    ("fac", 216),
    ("fou", 76),
    ("kar", 64),
    ("mor", 6),
    ("pix", 240),
    ("zer", 47),
)
N_SAMPLES = 2000
N_CLASSES = 10
PER_CLASS = 200
N_FEATURES = sum(c for _, c in FEATURE_FILES)


@dataclass(frozen=True)
class DigitDataset:
    features: np.ndarray       # (2000, 649), standardized
    labels: np.ndarray         # (2000,), ints 0..9


@dataclass(frozen=True)
class EvalSplit:
    features: np.ndarray
    labels: np.ndarray


@dataclass(frozen=True)
class ClassificationReport:
    avg_error: float
    error_variance: float
    avg_row_support: float
    avg_support: float
    per_digit_errors: tuple


def expected_files(directory):
    return [str(Path(directory) / f"mfeat-{name}") for name, _ in FEATURE_FILES]


def load_mfeat(directory):
    """Load and standardize the six-view digit dataset from a directory.

    Raises FileNotFoundError listing the expected files when any is missing,
    and ValueError naming the offending file and line on malformed content.
    """
    directory = Path(directory)
    missing = [p for p in expected_files(directory) if not Path(p).is_file()]
    if missing:
        raise FileNotFoundError(
            "digit dataset incomplete; missing: " + ", ".join(missing))
    blocks = []
    for name, ncols in FEATURE_FILES:
        path = directory / f"mfeat-{name}"
        rows = []
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                if len(parts) != ncols:
                    raise ValueError(
                        f"{path}:{lineno}: expected {ncols} columns, found {len(parts)}")
                try:
                    rows.append([float(v) for v in parts])
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: non-numeric value") from exc
        if len(rows) != N_SAMPLES:
            raise ValueError(f"{path}: expected {N_SAMPLES} rows, found {len(rows)}")
        blocks.append(np.asarray(rows, dtype=float))
    features = np.hstack(blocks)
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    std_safe = np.where(std > 0.0, std, 1.0)
    features = (features - mean) / std_safe
    features[:, std == 0.0] = 0.0
    labels = np.repeat(np.arange(N_CLASSES), PER_CLASS)
    return DigitDataset(features=features, labels=labels)


def build_tasks(dataset, n_per_class, seed):
    """Sample a class-balanced training split and build the ten-task problem.

    Every task shares the same training design; task i's response is the 0/1
    indicator of digit i.  Rows not drawn form the test split.
    """
    if not (1 <= n_per_class <= PER_CLASS):
        raise ValueError(f"n_per_class must lie in [1, {PER_CLASS}], got {n_per_class}")
    rng = np.random.default_rng(seed)
    train_idx = []
    for c in range(N_CLASSES):
        block = np.flatnonzero(dataset.labels == c)
        take = rng.choice(block, size=n_per_class, replace=False)
        train_idx.extend(sorted(int(i) for i in take))
    train_idx = np.asarray(train_idx)
    mask = np.zeros(dataset.features.shape[0], dtype=bool)
    mask[train_idx] = True
    X = dataset.features[train_idx]
    train_labels = dataset.labels[train_idx]
    tasks = tuple(
        Task(X, (train_labels == i).astype(float)) for i in range(N_CLASSES))
    problem = MultiTaskProblem(p=dataset.features.shape[1], r=N_CLASSES, tasks=tasks)
    test = EvalSplit(features=dataset.features[~mask], labels=dataset.labels[~mask])
    return problem, test


def classify_and_report(fit_report, test):
    """Score one-vs-all predictions on a test split.

    Predicted class is the argmax over task scores (ties to the lower class
    id).  Row support counts features nonzero in any task; support counts all
    nonzero coefficients.
    """
    beta = fit_report.coefficients
    if beta.shape[1] != N_CLASSES:
        raise ValueError(f"expected {N_CLASSES} task columns, got {beta.shape[1]}")
    scores = test.features @ beta
    pred = np.argmax(scores, axis=1)
    per_digit = []
    for c in range(N_CLASSES):
        mine = test.labels == c
        if not np.any(mine):
            per_digit.append(0.0)
            continue
        per_digit.append(float(np.mean(pred[mine] != c)))
    per_digit = tuple(per_digit)
    errs = np.asarray(per_digit)
    return ClassificationReport(
        avg_error=float(errs.mean()),
        error_variance=float(errs.var()),
        avg_row_support=float(np.count_nonzero(np.any(beta != 0.0, axis=1))),
        avg_support=float(np.count_nonzero(beta)),
        per_digit_errors=per_digit,
    )


def split_for_validation(problem, train_labels=None):
    """Halve a digit training problem per class for holdout tuning.

    Tasks share the design, so the split is computed once on the indicator
    responses and applied to every task.  Returns (train, holdout) problems.
    """
    X = problem.tasks[0].X
    labels = np.full(X.shape[0], -1, dtype=int)
    for i in range(problem.r):
        labels[problem.tasks[i].y > 0.5] = i
    first, second = [], []
    for c in range(problem.r):
        block = np.flatnonzero(labels == c)
        half = max(1, block.size // 2)
        first.extend(block[:half])
        second.extend(block[half:] if block.size > half else block[:half])
    first = np.asarray(first)
    second = np.asarray(second)
    sub_a = tuple(Task(X[first], t.y[first]) for t in problem.tasks)
    sub_b = tuple(Task(X[second], t.y[second]) for t in problem.tasks)
    return (MultiTaskProblem(p=problem.p, r=problem.r, tasks=sub_a),
            MultiTaskProblem(p=problem.p, r=problem.r, tasks=sub_b))
