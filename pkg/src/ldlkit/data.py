"""Dataset ingestion, synthetic generation, standardization and CV splitting.

Two on-disk formats are supported:

* ``MatrixText`` -- a header line ``n d m`` followed by n whitespace-separated
  feature rows (d values each) and n distribution rows (m values each).
  Written with 17 significant digits so round-trips are bit-exact.
* ``Csv`` -- a header row ``f1..fd,y1..ym`` and one instance per row.

Relative dataset paths that do not exist are also searched under the
``LDL_DATA_DIR`` environment variable.
"""
from __future__ import annotations

import csv
import enum
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ParseError, ShapeMismatch
from .types import (
    FeatureMatrix,
    LabelDistributionMatrix,
    Standardizer,
    validate_distribution_matrix,
)

DATA_DIR_ENV = "LDL_DATA_DIR"


class FileFormat(enum.Enum):
    MATRIX_TEXT = "matrixtext"
    CSV = "csv"


@dataclass(frozen=True)
class Dataset:
    name: str
    X: FeatureMatrix
    D: LabelDistributionMatrix
    label_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.X.n != self.D.n:
            raise ShapeMismatch(
                f"feature matrix has {self.X.n} instances but distribution matrix has {self.D.n}"
            )

    @property
    def n(self) -> int:
        return self.X.n

    @property
    def d(self) -> int:
        return self.X.d

    @property
    def m(self) -> int:
        return self.D.m


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of each instance to one of ``k`` folds, balanced to within one."""

    k: int
    seed: int
    assignments: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "assignments", np.asarray(self.assignments, dtype=np.int64))

    def split(self, fold: int) -> Tuple[np.ndarray, np.ndarray]:
        """Return (train_indices, test_indices) for one fold."""
        test = np.flatnonzero(self.assignments == fold)
        train = np.flatnonzero(self.assignments != fold)
        return train, test


def resolve_data_path(path) -> Path:
    """Return ``path`` if it exists, else look under ``$LDL_DATA_DIR``."""
    p = Path(path)
    if p.exists():
        return p
    root = os.environ.get(DATA_DIR_ENV)
    if root:
        candidate = Path(root) / p
        if candidate.exists():
            return candidate
    return p


def infer_format(path) -> FileFormat:
    return FileFormat.CSV if Path(path).suffix.lower() == ".csv" else FileFormat.MATRIX_TEXT


def load_dataset(path, fmt: Optional[FileFormat] = None, name: Optional[str] = None) -> Dataset:
    """Load a dataset, validating and (within tolerance) renormalizing the
    distribution columns."""
    path = resolve_data_path(path)
    if fmt is None:
        fmt = infer_format(path)
    if name is None:
        name = Path(path).stem
    if fmt is FileFormat.MATRIX_TEXT:
        X, D, labels = _load_matrix_text(path)
    else:
        X, D, labels = _load_csv(path)
    return Dataset(name, FeatureMatrix(X), validate_distribution_matrix(D), labels)


def _load_matrix_text(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            rows.append((lineno, line))
    if not rows:
        raise ParseError(1, "empty file")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 3:
        raise ParseError(lineno, f"header must be 'n d m', got {header!r}")
    try:
        n, d, m = (int(p) for p in parts)
    except ValueError:
        raise ParseError(lineno, f"header values must be integers, got {header!r}") from None
    if n < 1 or d < 1 or m < 1:
        raise ParseError(lineno, f"header values must be positive, got {header!r}")
    body = rows[1:]
    if len(body) != 2 * n:
        last = body[-1][0] if body else lineno
        raise ParseError(last, f"expected {2 * n} data lines, found {len(body)}")

    def parse_block(block, width, what):
        out = np.empty((len(block), width))
        for i, (ln, line) in enumerate(block):
            vals = line.split()
            if len(vals) != width:
                raise ParseError(ln, f"expected {width} {what} values, got {len(vals)}")
            try:
                out[i] = [float(v) for v in vals]
            except ValueError:
                raise ParseError(ln, f"non-numeric {what} value") from None
        return out

    X = parse_block(body[:n], d, "feature")
    Drows = parse_block(body[n:], m, "distribution")
    return X, Drows.T, None


def _load_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, "empty file") from None
        names = [h.strip() for h in header]
        d = 0
        while d < len(names) and re.fullmatch(r"f\d+", names[d]):
            d += 1
        m = len(names) - d
        if d < 1 or m < 1:
            raise ParseError(1, f"header must name f1..fd then y1..ym columns, got {header!r}")
        feats, dists = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != d + m:
                raise ParseError(lineno, f"expected {d + m} columns, got {len(row)}")
            try:
                vals = [float(c) for c in row]
            except ValueError:
                raise ParseError(lineno, "non-numeric value") from None
            feats.append(vals[:d])
            dists.append(vals[d:])
    if not feats:
        raise ParseError(2, "no data rows")
    labels = tuple(h.strip() for h in header[d:])
    return np.asarray(feats), np.asarray(dists).T, labels


def save_dataset(ds: Dataset, path, fmt: Optional[FileFormat] = None) -> None:
    """Write a dataset; MatrixText uses 17 significant digits (lossless)."""
    path = Path(path)
    if fmt is None:
        fmt = infer_format(path)
    X = ds.X.data
    Drows = ds.D.data.T
    if fmt is FileFormat.MATRIX_TEXT:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{ds.n} {ds.d} {ds.m}\n")
            for row in X:
                fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
            for row in Drows:
                fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
    else:
        labels = ds.label_names or tuple(f"y{j + 1}" for j in range(ds.m))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"f{j + 1}" for j in range(ds.d)] + list(labels))
            for xrow, drow in zip(X, Drows):
                writer.writerow([f"{v:.17g}" for v in xrow] + [f"{v:.17g}" for v in drow])


def synth_lowrank(
    n: int, d: int, m: int, r: int, noise: float = 0.1, seed: int = 0
) -> Dataset:
    """Generate a synthetic dataset whose label structure has rank ``r``.

    Draws a rank-``r`` coefficient matrix, standard-normal features, adds
    Gaussian score noise and softmax-normalizes columns.  The softmax keeps the
    distribution matrix numerically full-rank even when ``r < m``, while the
    degraded multi-label matrix inherits the low-rank pattern structure.
    Deterministic in ``seed``.
    """
    if r > min(m, n):
        raise ValueError(f"r={r} must not exceed min(m, n)={min(m, n)}")
    if noise < 0:
        raise ValueError(f"noise must be nonnegative, got {noise}")
    if n < 1 or d < 1 or m < 1 or r < 1:
        raise ValueError("n, d, m, r must be positive")
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal((m, r)) @ rng.standard_normal((r, d))
    X = rng.standard_normal((n, d))
    raw = coeff @ X.T + noise * rng.standard_normal((m, n))
    raw -= raw.max(axis=0, keepdims=True)
    D = np.exp(raw)
    D /= D.sum(axis=0, keepdims=True)
    name = f"synth-n{n}-d{d}-m{m}-r{r}-noise{noise:g}-seed{seed}"
    return Dataset(name, FeatureMatrix(X), LabelDistributionMatrix(D))


def kfold(n: int, k: int = 10, seed: int = 42) -> FoldPlan:
    """Uniformly shuffled fold assignment with sizes balanced to within one."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if n < k:
        raise ValueError(f"cannot split {n} instances into {k} folds")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    assignments = np.empty(n, dtype=np.int64)
    base, extra = divmod(n, k)
    start = 0
    for fold in range(k):
        size = base + (1 if fold < extra else 0)
        assignments[order[start:start + size]] = fold
        start += size
    return FoldPlan(k=k, seed=seed, assignments=assignments)


def standardize(
    X_train: np.ndarray, X_test: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, Optional[np.ndarray], Standardizer]:
    """Z-score features using train statistics only; constant features map to 0."""
    X_train = np.asarray(X_train, dtype=np.float64)
    mean = X_train.mean(axis=0)
    std = X_train.std(axis=0)
    scaler = Standardizer(mean=mean, std=std)
    out_train = scaler.transform(X_train)
    out_test = scaler.transform(np.asarray(X_test, dtype=np.float64)) if X_test is not None else None
    return out_train, out_test, scaler


def subset(ds: Dataset, idx: Sequence[int], name: Optional[str] = None) -> Dataset:
    """Dataset restricted to the given instance indices."""
    idx = np.asarray(idx, dtype=np.int64)
    return Dataset(
        name or ds.name,
        FeatureMatrix(ds.X.data[idx]),
        LabelDistributionMatrix(ds.D.data[:, idx]),
        ds.label_names,
    )
