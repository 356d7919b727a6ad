"""Landmark data model: the 19 named facial points, file ingestion, validation.

Point numbering (1-based): 1..17 trace the jaw contour left to right, 9 is
the chin, 18 is the hairline top, 19 is the mouth reference point on the
chin-mouth axis. Image convention: y grows downward.
"""

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import ParseError, ValidationError

N_LANDMARKS = 19
CHIN = 9
HAIRLINE = 18
MOUTH = 19

# Mapping from a 68-point jaw-detector output to our model points.
# Detector jaw indices 0..16 become model points 1..17 (detector 8 is the
# chin and lands on model point 9); detector 57 (lower-lip bottom) is the
# closest detector landmark to the mouth reference and becomes point 19.
# The hairline has no detector index and is supplied separately as point 18.
DETECTOR_JAW_RANGE = range(0, 17)
DETECTOR_MOUTH_INDEX = 57


class FaceShape(IntEnum):
    """The five face-shape classes, encoded 0..4 in alphabetical order."""

    HEART = 0
    OBLONG = 1
    OVAL = 2
    ROUND = 3
    SQUARE = 4

    @classmethod
    def from_name(cls, name: str) -> "FaceShape":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown face shape label {name!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


N_CLASSES = len(FaceShape)


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


@dataclass(frozen=True)
class LandmarkSet:
    """The 19 model points of one face, in image pixel coordinates.

    Stored as a (19, 2) float array; `point(i)` uses the 1-based numbering
    above. Construction does not validate, so invalid sets can be built and
    then reported by `check()` / `validate_dataset`.
    """

    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=float)
        if arr.shape != (N_LANDMARKS, 2):
            raise ValueError(f"expected ({N_LANDMARKS}, 2) coordinates, got {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @classmethod
    def from_points(cls, points: list[Point2D]) -> "LandmarkSet":
        return cls(np.array([[p.x, p.y] for p in points], dtype=float))

    def point(self, i: int) -> Point2D:
        """Return model point i (1-based, 1..19)."""
        if not 1 <= i <= N_LANDMARKS:
            raise IndexError(f"landmark index {i} out of range 1..{N_LANDMARKS}")
        x, y = self.coords[i - 1]
        return Point2D(float(x), float(y))

    def distance(self, i: int, j: int) -> float:
        """Euclidean distance between model points i and j (1-based)."""
        return float(np.hypot(*(self.coords[i - 1] - self.coords[j - 1])))

    def check(self) -> list[str]:
        """Return invariant violations (empty list when the set is valid)."""
        problems = []
        if not np.isfinite(self.coords).all():
            problems.append("non-finite coordinate")
            return problems
        if not self.coords[HAIRLINE - 1, 1] < self.coords[CHIN - 1, 1]:
            problems.append("hairline (point 18) not above chin (point 9)")
        if not self.distance(1, 17) > 0:
            problems.append("zero face width d(1,17)")
        if not self.distance(5, 13) > 0:
            problems.append("zero jaw width d(5,13)")
        return problems


@dataclass(frozen=True)
class Sample:
    id: str
    landmarks: LandmarkSet
    label: FaceShape | None = None


@dataclass(frozen=True)
class Dataset:
    """An ordered, id-unique collection of samples."""

    samples: tuple[Sample, ...]
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def labeled(self) -> bool:
        return all(s.label is not None for s in self.samples)


NATIVE_FORMAT = "native-19"
DETECTOR_FORMAT = "detector-68+hairline"

_NATIVE_COLS = 2 + 2 * N_LANDMARKS          # id,label,x1,y1..x19,y19
_DETECTOR_COLS = 2 + 2 + 2 * 68             # id,label,hx,hy,x0,y0..x67,y67


def _native_header() -> str:
    cols = ["id", "label"]
    for i in range(1, N_LANDMARKS + 1):
        cols += [f"x{i}", f"y{i}"]
    return ",".join(cols)


def _parse_label(text: str, line_no: int) -> FaceShape | None:
    text = text.strip()
    if not text:
        return None
    try:
        return FaceShape.from_name(text)
    except ValueError as exc:
        raise ParseError(str(exc), line=line_no) from None


def _parse_floats(fields: list[str], line_no: int) -> list[float]:
    out = []
    for f in fields:
        try:
            out.append(float(f))
        except ValueError:
            raise ParseError(f"not a number: {f!r}", line=line_no) from None
    return out


def _native_row(fields: list[str], line_no: int) -> Sample:
    vals = _parse_floats(fields[2:], line_no)
    coords = np.array(vals, dtype=float).reshape(N_LANDMARKS, 2)
    return Sample(fields[0], LandmarkSet(coords), _parse_label(fields[1], line_no))


def _detector_row(fields: list[str], line_no: int) -> Sample:
    vals = _parse_floats(fields[2:], line_no)
    hx, hy = vals[0], vals[1]
    det = np.array(vals[2:], dtype=float).reshape(68, 2)
    coords = np.empty((N_LANDMARKS, 2), dtype=float)
    for d in DETECTOR_JAW_RANGE:                 # jaw 0..16 -> points 1..17
        coords[d] = det[d]
    coords[HAIRLINE - 1] = (hx, hy)
    coords[MOUTH - 1] = det[DETECTOR_MOUTH_INDEX]
    return Sample(fields[0], LandmarkSet(coords), _parse_label(fields[1], line_no))


def parse_landmark_file(path, format: str = NATIVE_FORMAT) -> Dataset:
    """Parse a landmark file into a Dataset.

    Formats: "native-19" (`id,label,x1,y1,...,x19,y19`) or
    "detector-68+hairline" (`id,label,hx,hy,x0,y0,...,x67,y67`).
    One header line is expected and skipped. Raises ParseError for malformed
    rows (naming the line number) and ValidationError for invariant
    violations or duplicate ids (naming the sample id).
    """
    if format == NATIVE_FORMAT:
        ncols, make = _NATIVE_COLS, _native_row
    elif format == DETECTOR_FORMAT:
        ncols, make = _DETECTOR_COLS, _detector_row
    else:
        raise ValueError(f"unknown landmark format {format!r}")

    samples = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line_no == 1 or not line.strip():
                continue
            fields = line.split(",")
            if len(fields) != ncols:
                raise ParseError(f"expected {ncols} fields, got {len(fields)}", line=line_no)
            if not fields[0].strip():
                raise ParseError("empty sample id", line=line_no)
            sample = make(fields, line_no)
            if sample.id in seen:
                raise ValidationError("duplicate id", sample_id=sample.id)
            problems = sample.landmarks.check()
            if problems:
                raise ValidationError("; ".join(problems), sample_id=sample.id)
            seen.add(sample.id)
            samples.append(sample)
    return Dataset(tuple(samples), provenance=str(path))


def write_landmark_file(ds: Dataset, path) -> None:
    """Write a Dataset in the native-19 format (round-trips exactly)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_native_header() + "\n")
        for s in ds.samples:
            label = s.label.label if s.label is not None else ""
            nums = ",".join(repr(float(v)) for v in s.landmarks.coords.ravel())
            fh.write(f"{s.id},{label},{nums}\n")


@dataclass(frozen=True)
class Violation:
    sample_id: str
    message: str


def roll_angle_deg(lm: LandmarkSet) -> float:
    """Inclination of the face-width segment (1 -> 17) from horizontal, in degrees."""
    dx = lm.coords[16, 0] - lm.coords[0, 0]
    dy = lm.coords[16, 1] - lm.coords[0, 1]
    ang = abs(math.degrees(math.atan2(dy, dx)))
    return min(ang, 180.0 - ang)


def validate_dataset(ds: Dataset, roll_limit_deg: float = 15.0) -> list[Violation]:
    """Report per-sample invariant and roll-angle violations (pure, never raises)."""
    report = []
    seen = set()
    for s in ds.samples:
        if s.id in seen:
            report.append(Violation(s.id, "duplicate id"))
        seen.add(s.id)
        problems = s.landmarks.check()
        for p in problems:
            report.append(Violation(s.id, p))
        if not problems and roll_angle_deg(s.landmarks) > roll_limit_deg:
            report.append(Violation(
                s.id, f"roll angle {roll_angle_deg(s.landmarks):.1f} deg exceeds "
                      f"limit {roll_limit_deg:.1f} deg"))
    return report
