"""Dataset containers, CSV / IDX readers, and synthetic generators."""

import gzip
import struct
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray                # (n, dim) float64
    labels: np.ndarray | None = None  # (n,) int64 or None
    source: str = ""

    def __post_init__(self):
        if self.labels is not None and self.labels.shape[0] != self.points.shape[0]:
            raise ValueError(
                f"labels length {self.labels.shape[0]} != point count {self.points.shape[0]}"
            )

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def load_csv(path, has_header=False):
    """Numeric CSV -> Dataset; ``has_header`` skips the first line.

    Ragged rows and unparseable cells raise ValueError naming the 1-based
    row and column.
    """
    rows = []
    width = None
    with open(path, "r", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            if has_header and lineno == 1:
                continue
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ValueError(
                    f"row {lineno}: expected {width} columns, found {len(cells)}"
                )
            parsed = np.empty(width, dtype=np.float64)
            for col, cell in enumerate(cells, start=1):
                try:
                    parsed[col - 1] = float(cell)
                except ValueError:
                    raise ValueError(
                        f"row {lineno}, column {col}: could not parse {cell.strip()!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return Dataset(points=np.vstack(rows), source=str(path))


def save_csv(path, points):
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("expected a 2-D array")
    np.savetxt(path, points, fmt="%.17g", delimiter=",")


_IDX_IMAGES = 0x00000803
_IDX_LABELS = 0x00000801


def _open_maybe_gzip(path):
    with open(path, "rb") as fh:
        head = fh.read(2)
    if head == b"\x1f\x8b":
        return gzip.open(path, "rb")
    return open(path, "rb")


def load_idx_images(path):
    """IDX u8 image file -> (n, rows*cols) float64 scaled to [0, 1]."""
    with _open_maybe_gzip(path) as fh:
        header = fh.read(16)
        if len(header) != 16:
            raise ValueError(f"{path}: truncated IDX header")
        magic, count, rows, cols = struct.unpack(">IIII", header)
        if magic != _IDX_IMAGES:
            raise ValueError(f"{path}: bad IDX image magic {magic:#010x}")
        raw = fh.read(count * rows * cols)
    if len(raw) != count * rows * cols:
        raise ValueError(
            f"{path}: expected {count * rows * cols} pixel bytes, found {len(raw)}"
        )
    pixels = np.frombuffer(raw, dtype=np.uint8).astype(np.float64) / 255.0
    return pixels.reshape(count, rows * cols)


def load_idx_labels(path):
    with _open_maybe_gzip(path) as fh:
        header = fh.read(8)
        if len(header) != 8:
            raise ValueError(f"{path}: truncated IDX header")
        magic, count = struct.unpack(">II", header)
        if magic != _IDX_LABELS:
            raise ValueError(f"{path}: bad IDX label magic {magic:#010x}")
        raw = fh.read(count)
    if len(raw) != count:
        raise ValueError(f"{path}: expected {count} label bytes, found {len(raw)}")
    return np.frombuffer(raw, dtype=np.uint8).astype(np.int64)


def load_idx(images_path, labels_path=None):
    points = load_idx_images(images_path)
    labels = None
    if labels_path is not None:
        labels = load_idx_labels(labels_path)
        if labels.shape[0] != points.shape[0]:
            raise ValueError(
                f"image/label count mismatch: {points.shape[0]} images, "
                f"{labels.shape[0]} labels"
            )
    return Dataset(points=points, labels=labels, source=str(images_path))


GAUSSIAN_MIXTURE = "gaussian_mixture"
UNIFORM_CUBE = "uniform_cube"


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str                  # GAUSSIAN_MIXTURE or UNIFORM_CUBE
    dim: int
    count: int
    seed: int = 0
    means: tuple = ()          # per component, length-dim each (mixture only)
    variances: tuple = ()      # per component (mixture only)
    weights: tuple = ()        # per component, positive, sum to 1 (mixture only)


def generate(spec):
    """Seeded synthetic Dataset from a SyntheticSpec.

    Gaussian mixtures draw a component per point, then the point; labels
    carry the component index.  The uniform cube fills [-1, 1]^dim.
    """
    if spec.count < 1:
        raise ValueError(f"count must be >= 1, got {spec.count}")
    if spec.kind == UNIFORM_CUBE:
        rng = np.random.default_rng(spec.seed)
        points = rng.uniform(-1.0, 1.0, size=(spec.count, spec.dim))
        return Dataset(points=points, source=f"{spec.kind}(dim={spec.dim})")
    if spec.kind != GAUSSIAN_MIXTURE:
        raise ValueError(f"unknown synthetic kind {spec.kind!r}")
    means = np.asarray(spec.means, dtype=np.float64)
    variances = np.asarray(spec.variances, dtype=np.float64)
    weights = np.asarray(spec.weights, dtype=np.float64)
    if means.ndim != 2 or means.shape[1] != spec.dim:
        raise ValueError("means must be a (components, dim) array")
    if variances.shape != (means.shape[0],) or weights.shape != (means.shape[0],):
        raise ValueError("variances and weights must have one entry per component")
    if np.any(variances <= 0):
        raise ValueError("variances must be positive")
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be positive and sum to 1")
    rng = np.random.default_rng(spec.seed)
    which = rng.choice(means.shape[0], size=spec.count, p=weights)
    noise = rng.standard_normal((spec.count, spec.dim))
    points = means[which] + np.sqrt(variances)[which, None] * noise
    return Dataset(
        points=points,
        labels=which.astype(np.int64),
        source=f"{spec.kind}(components={means.shape[0]}, dim={spec.dim})",
    )


def train_valid_split(dataset, valid_fraction=0.1, seed=0):
    """Shuffled split into (train, valid) Datasets; valid gets the tail."""
    if not 0.0 < valid_fraction < 1.0:
        raise ValueError("valid_fraction must lie strictly between 0 and 1")
    n = dataset.n
    n_valid = max(1, int(round(n * valid_fraction)))
    if n_valid >= n:
        raise ValueError("split leaves no training rows")
    perm = np.random.default_rng(seed).permutation(n)
    tr, va = perm[:-n_valid], perm[-n_valid:]
    labels = dataset.labels
    return (
        Dataset(points=dataset.points[tr],
                labels=None if labels is None else labels[tr],
                source=dataset.source),
        Dataset(points=dataset.points[va],
                labels=None if labels is None else labels[va],
                source=dataset.source),
    )
