"""The 19 geometric features and their z-score normalization.

Features (1-based): f1 = d(9,18)/d(1,17) face height to width, f2 =
d(5,13)/d(1,17) jaw width to face width, f3 = d(9,19)/d(5,13) chin-to-mouth
to jaw width; f4..f11 and f12..f19 are the angles the chin-to-jaw-point
lines make with the vertical, atan((x(p)-x(9))/(y(p)-y(9))) for p = 1..8
and p = 10..17 respectively.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLandmarks, InvalidInput
from .landmarks import CHIN, HAIRLINE, MOUTH, LandmarkSet

N_FEATURES = 19

_COINCIDENT_EPS = 1e-9

# Jaw points feeding the angle features, in feature order f4..f19.
_ANGLE_POINTS = list(range(1, 9)) + list(range(10, 18))


def _vertical_angle(dx: float, dy: float) -> float:
    # Angle from the vertical; near-horizontal chin-to-point lines fold to
    # +-pi/2 by the sign of dx.
    if abs(dy) < _COINCIDENT_EPS:
        return math.pi / 2 if dx >= 0 else -math.pi / 2
    return math.atan(dx / dy)


def extract_features(lm: LandmarkSet) -> np.ndarray:
    """Compute the 19-feature vector for one landmark set.

    Raises DegenerateLandmarks when a jaw point or the mouth point
    coincides with the chin (the formulas are undefined there).
    """
    cx, cy = lm.coords[CHIN - 1]
    for p in _ANGLE_POINTS + [MOUTH]:
        if math.hypot(lm.coords[p - 1, 0] - cx, lm.coords[p - 1, 1] - cy) < _COINCIDENT_EPS:
            raise DegenerateLandmarks(f"point {p} coincides with the chin")

    f = np.empty(N_FEATURES, dtype=float)
    f[0] = lm.distance(CHIN, HAIRLINE) / lm.distance(1, 17)
    f[1] = lm.distance(5, 13) / lm.distance(1, 17)
    f[2] = lm.distance(CHIN, MOUTH) / lm.distance(5, 13)
    for k, p in enumerate(_ANGLE_POINTS):
        dx = lm.coords[p - 1, 0] - cx
        dy = lm.coords[p - 1, 1] - cy
        f[3 + k] = _vertical_angle(dx, dy)
    return f


@dataclass(frozen=True)
class NormalizationStats:
    """Per-feature mean and population std fit on a training set."""

    mean: np.ndarray
    std: np.ndarray
    degenerate: tuple[int, ...]       # 0-based indices where std == 0

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        std = np.asarray(self.std, dtype=float)
        if mean.shape != std.shape or mean.ndim != 1:
            raise ValueError("mean/std must be 1-D arrays of equal length")
        if (std < 0).any():
            raise ValueError("std entries must be >= 0")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)
        object.__setattr__(self, "degenerate", tuple(int(i) for i in self.degenerate))


def fit_normalizer(X) -> NormalizationStats:
    """Fit per-column mean and population (divide-by-N) std on a feature matrix."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.size == 0:
        raise InvalidInput("cannot fit normalization stats on an empty matrix")
    mean = X.mean(axis=0)
    std = X.std(axis=0)                      # population convention
    degenerate = tuple(int(i) for i in np.flatnonzero(std == 0.0))
    return NormalizationStats(mean, std, degenerate)


def apply_normalizer(stats: NormalizationStats, x: np.ndarray) -> np.ndarray:
    """Z-score a feature vector or matrix; degenerate columns map to 0."""
    x = np.asarray(x, dtype=float)
    safe_std = np.where(stats.std == 0.0, 1.0, stats.std)
    z = (x - stats.mean) / safe_std
    if stats.degenerate:
        z[..., list(stats.degenerate)] = 0.0
    return z


def write_feature_file(path, ids, X, labels=None) -> None:
    """Write `id,f1..f19,label` rows (label column may be empty)."""
    X = np.asarray(X, dtype=float)
    if labels is None:
        labels = [None] * len(ids)
    with open(path, "w", encoding="utf-8") as fh:
        header = ["id"] + [f"f{i}" for i in range(1, N_FEATURES + 1)] + ["label"]
        fh.write(",".join(header) + "\n")
        for sid, row, lab in zip(ids, X, labels):
            nums = ",".join(repr(float(v)) for v in row)
            fh.write(f"{sid},{nums},{lab.label if lab is not None else ''}\n")


def read_feature_file(path):
    """Parse a feature file; returns (ids, X, labels) with labels possibly None."""
    from .errors import ParseError
    from .landmarks import FaceShape

    ids, rows, labels = [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line_no == 1 or not line.strip():
                continue
            fields = line.split(",")
            if len(fields) not in (N_FEATURES + 1, N_FEATURES + 2):
                raise ParseError(f"expected {N_FEATURES + 1} or {N_FEATURES + 2} fields, "
                                 f"got {len(fields)}", line=line_no)
            ids.append(fields[0])
            try:
                rows.append([float(v) for v in fields[1:N_FEATURES + 1]])
            except ValueError:
                raise ParseError("non-numeric feature value", line=line_no) from None
            label_text = fields[N_FEATURES + 1].strip() if len(fields) == N_FEATURES + 2 else ""
            if label_text:
                try:
                    labels.append(FaceShape.from_name(label_text))
                except ValueError as exc:
                    raise ParseError(str(exc), line=line_no) from None
            else:
                labels.append(None)
    X = np.array(rows, dtype=float) if rows else np.empty((0, N_FEATURES))
    if all(l is None for l in labels):
        return ids, X, None
    return ids, X, labels
