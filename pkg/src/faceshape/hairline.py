"""Hairline detection by upward pixel scan from the nose.

A reference color is sampled a few rows above the nose; the scan walks up
one row at a time and stops at the first row whose (window-averaged) color
differs from the reference by more than a Euclidean RGB threshold. That row
is the hairline (model point 18).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NoHairlineFound, ParseError
from .landmarks import Point2D


@dataclass(frozen=True)
class RasterImage:
    """RGB raster, pixels[y, x] = (r, g, b), channels 0..255."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels, dtype=np.uint8)
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        if arr.shape != (self.height, self.width, 3):
            raise ValueError(f"expected pixel array ({self.height}, {self.width}, 3), got {arr.shape}")
        object.__setattr__(self, "pixels", arr)


@dataclass(frozen=True)
class HairlineConfig:
    threshold: float = 60.0      # Euclidean RGB distance that triggers
    window: int = 3              # odd side of the averaging window
    start_offset: int = 5        # rows above the nose for the reference sample

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError("window must be an odd integer >= 1")
        if not np.isfinite(self.threshold) or self.threshold < 0:
            raise ValueError("threshold must be finite and >= 0")
        if self.start_offset < 0:
            raise ValueError("start_offset must be >= 0")


def _window_mean(img: RasterImage, y: int, x: int, window: int) -> np.ndarray:
    r = window // 2
    y0, y1 = max(0, y - r), min(img.height, y + r + 1)   # clamped at borders
    x0, x1 = max(0, x - r), min(img.width, x + r + 1)
    return img.pixels[y0:y1, x0:x1].reshape(-1, 3).mean(axis=0)


def detect_hairline(img: RasterImage, nose: Point2D,
                    cfg: HairlineConfig = HairlineConfig()) -> Point2D:
    """Scan upward from the nose and return the hairline point (model point 18).

    The reference color is the window average at `start_offset` rows above
    the nose, in the nose's column. The returned y is the first row above
    the reference whose window-averaged color is farther than `threshold`
    from the reference (always strictly above the nose). Raises
    NoHairlineFound if the scan reaches row 0 without a crossing, and
    InvalidInput if the nose is outside the image or too close to the top.
    """
    cx, cy = int(round(nose.x)), int(round(nose.y))
    if not (0 <= cx < img.width and 0 <= cy < img.height):
        raise InvalidInput(f"nose ({nose.x}, {nose.y}) outside {img.width}x{img.height} image")
    ref_row = cy - cfg.start_offset
    if ref_row < 0:
        raise InvalidInput("nose too close to the top for the reference offset")

    reference = _window_mean(img, ref_row, cx, cfg.window)
    for y in range(ref_row - 1, -1, -1):
        color = _window_mean(img, y, cx, cfg.window)
        if float(np.linalg.norm(color - reference)) > cfg.threshold:
            return Point2D(nose.x, float(y))
    raise NoHairlineFound(
        f"no color difference > {cfg.threshold} found above ({cx}, {cy})")


def read_ppm(path) -> RasterImage:
    """Read a binary PPM (P6, maxval <= 255). The only codec this package ships."""
    with open(path, "rb") as fh:
        data = fh.read()

    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            if data[pos:pos + 1].isspace():
                pos += 1
            elif data[pos:pos + 1] == b"#":          # comment to end of line
                while pos < len(data) and data[pos] not in b"\r\n":
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ParseError("unexpected end of PPM header")
        return data[start:pos]

    magic = token()
    if magic != b"P6":
        raise ParseError(f"not a binary PPM (P6) file: magic {magic!r}")
    try:
        width, height, maxval = int(token()), int(token()), int(token())
    except ValueError:
        raise ParseError("malformed PPM header") from None
    if maxval != 255:
        raise ParseError(f"unsupported PPM maxval {maxval} (only 255)")
    pos += 1                                          # single whitespace after maxval
    expected = width * height * 3
    raster = data[pos:pos + expected]
    if len(raster) != expected:
        raise ParseError(f"truncated PPM pixel data: expected {expected} bytes, got {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return RasterImage(width, height, pixels)


def write_ppm(img: RasterImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (img.width, img.height))
        fh.write(img.pixels.tobytes())
