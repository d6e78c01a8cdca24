"""Voxel recognition in multiview images.

Two detectors share one correlation core:

* thresholded correlation with the reference patterns, evaluated at cell
  anchors, which recovers voxel positions and a depth map;
* the continuous wavelet transform, i.e. correlation with the plane-``n``
  multiview wavelet at every pixel translation.

Scores are exact integers. A lone full-scale voxel correlated with its own
unit-amplitude pattern scores ``(gray_levels - 1) * cell_pitch**2`` for
every plane, and that value is the reference for detection thresholds.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ArgumentError
from .reffun import DisplayConfig, check_plane, pulse_width, raster_1d
from .scene import VoxelSet
from .synth import MultiviewImage
from .wavelet import wavelet_1d

__all__ = [
    "ResponseMap",
    "Detection",
    "DepthMap",
    "kernel_runs",
    "correlate_separable",
    "correlate_direct",
    "threshold_value",
    "paper_units",
    "detect_plane",
    "detect_all",
    "detect_all_detections",
    "depth_map",
    "depth_legend",
    "cwt_plane",
    "cwt_argmax",
    "cwt_cell",
]

SCORE_DTYPE = np.int64


@dataclass(frozen=True)
class ResponseMap:
    """Correlation scores for every anchor whose kernel support fits the image.

    ``scores[v - v0, u - u0]`` is the score at anchor pixel ``(u, v)``, where
    ``valid_region = (u0, v0, u1, v1)`` is half-open.
    """

    scores: np.ndarray
    plane: int | None
    valid_region: tuple[int, int, int, int]

    def at(self, u: int, v: int) -> int:
        u0, v0, u1, v1 = self.valid_region
        if not (u0 <= u < u1 and v0 <= v < v1):
            raise ArgumentError(f"anchor {(u, v)} outside valid region {self.valid_region}")
        return int(self.scores[v - v0, u - u0])


@dataclass(frozen=True, order=True)
class Detection:
    cy: int
    cx: int
    k: int
    score: int

    @property
    def voxel(self):
        return self.cx, self.cy, self.k


@dataclass(frozen=True)
class DepthMap:
    """One gray level per cell; ``legend`` maps plane index to level."""

    pixels: np.ndarray
    legend: dict[int, int]
    background: int = 0


def kernel_runs(kernel) -> list[tuple[int, int, int]]:
    """Split a 1-D kernel into ``(start, stop, value)`` runs of equal nonzero value."""
    values = np.asarray(getattr(kernel, "values", kernel), dtype=np.int64)
    runs = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] != values[start]:
            if values[start] != 0:
                runs.append((start, i, int(values[start])))
            start = i
    return runs


def _correlate_axis(a: np.ndarray, kernel, axis: int) -> np.ndarray:
    """Valid-mode correlation of ``a`` with a 1-D kernel along ``axis``.

    Each run of constant value costs two slices of a prefix sum, so
    rectangular-pulse kernels are cheap regardless of their length.
    """
    values = np.asarray(getattr(kernel, "values", kernel))
    n_out = a.shape[axis] - len(values) + 1
    prefix = np.cumsum(a, axis=axis, dtype=SCORE_DTYPE)
    pad = [(0, 0)] * a.ndim
    pad[axis] = (1, 0)
    prefix = np.pad(prefix, pad)
    out_shape = list(a.shape)
    out_shape[axis] = n_out
    out = np.zeros(out_shape, dtype=SCORE_DTYPE)
    for start, stop, value in kernel_runs(values):
        hi = np.take(prefix, np.arange(stop, stop + n_out), axis=axis)
        lo = np.take(prefix, np.arange(start, start + n_out), axis=axis)
        out += value * (hi - lo)
    return out


def _pixels(img):
    return np.asarray(getattr(img, "pixels", img))


def correlate_separable(img, kx, ky, plane: int | None = None) -> ResponseMap:
    """Cross-correlate with the outer product ``ky x kx``: row pass, then column pass."""
    px = _pixels(img)
    kx_len = len(np.asarray(getattr(kx, "values", kx)))
    ky_len = len(np.asarray(getattr(ky, "values", ky)))
    h, w = px.shape
    if kx_len > w or ky_len > h or kx_len == 0 or ky_len == 0:
        raise ArgumentError(f"kernel {kx_len}x{ky_len} does not fit image {w}x{h}")
    rows = _correlate_axis(px, kx, axis=1)
    scores = _correlate_axis(rows, ky, axis=0)
    if plane is None:
        plane = getattr(kx, "plane", None)
    return ResponseMap(scores, plane, (0, 0, w - kx_len + 1, h - ky_len + 1))


def correlate_direct(img, kernel2d) -> np.ndarray:
    """Valid-mode 2-D cross-correlation as a plain double sum over kernel taps.

    Independent of any separability; used to check :func:`correlate_separable`.
    """
    px = _pixels(img).astype(SCORE_DTYPE)
    k = np.asarray(getattr(kernel2d, "values", kernel2d), dtype=SCORE_DTYPE)
    kh, kw = k.shape
    h, w = px.shape
    out = np.zeros((h - kh + 1, w - kw + 1), dtype=SCORE_DTYPE)
    for y in range(kh):
        for x in range(kw):
            if k[y, x]:
                out += k[y, x] * px[y:y + h - kh + 1, x:x + w - kw + 1]
    return out


def threshold_value(cfg: DisplayConfig) -> int:
    """Peak score of a lone full-scale voxel against its unit-amplitude pattern.

    Only ``cfg.cell_pitch`` and ``cfg.gray_levels`` are read.
    """
    return (cfg.gray_levels - 1) * cfg.cell_pitch ** 2


def paper_units(cfg: DisplayConfig) -> Fraction:
    """Cell area times squared gray-level count, in units of 1e8."""
    return Fraction(cfg.cell_pitch ** 2 * cfg.gray_levels ** 2, 10 ** 8)


def _as_fraction(fraction) -> Fraction:
    if isinstance(fraction, float):
        fraction = Fraction(repr(fraction))
    f = Fraction(fraction)
    if not 0 < f <= 1:
        raise ArgumentError(f"threshold fraction must lie in (0, 1], got {fraction!r}")
    return f


DEFAULT_FRACTION = Fraction(7, 10)


def detect_plane(img: MultiviewImage, k: int, cfg: DisplayConfig | None = None,
                 fraction=DEFAULT_FRACTION) -> list[Detection]:
    """Cell anchors whose plane-``k`` correlation reaches ``fraction`` of the peak."""
    cfg = cfg or img.cfg
    k = check_plane(k, cfg)
    f = _as_fraction(fraction)
    kernel = raster_1d(k, cfg)
    p = cfg.cell_pitch
    if len(kernel) > min(_pixels(img).shape):
        return []
    # only cell-aligned anchors are needed: thin the columns before the column pass
    rows = _correlate_axis(_pixels(img), kernel, axis=1)[:, ::p]
    cell_scores = _correlate_axis(rows, kernel, axis=0)[::p]
    # score >= f * T, kept in integers
    hits = np.argwhere(cell_scores * f.denominator >= f.numerator * threshold_value(cfg))
    return [Detection(int(cy), int(cx), k, int(cell_scores[cy, cx])) for cy, cx in hits]


def depth_legend(cfg: DisplayConfig) -> dict[int, int]:
    """Evenly spaced gray levels, increasing with the plane index; 0 is background."""
    planes = cfg.planes()
    n = len(planes)
    return {k: (i + 1) * 255 // n for i, k in enumerate(planes)}


def _preference(det: Detection):
    # highest score, then larger |k|, then negative k
    return det.score, abs(det.k), det.k < 0


def detect_all_detections(img: MultiviewImage, cfg: DisplayConfig | None = None,
                          fraction=DEFAULT_FRACTION, workers: int = 1) -> list[Detection]:
    """Per-plane detections over the whole plane ladder, sorted by ``(cy, cx, k)``."""
    cfg = cfg or img.cfg
    _as_fraction(fraction)
    planes = cfg.planes()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            per_plane = list(pool.map(lambda k: detect_plane(img, k, cfg, fraction), planes))
    else:
        per_plane = [detect_plane(img, k, cfg, fraction) for k in planes]
    return sorted(d for dets in per_plane for d in dets)


def depth_map(detections, cells: tuple[int, int], cfg: DisplayConfig) -> DepthMap:
    """Depth map with one plane per cell.

    Conflicts within a cell go to the highest score, then the larger
    ``|k|``, then the negative plane.
    """
    best: dict[tuple[int, int], Detection] = {}
    for d in detections:
        cur = best.get((d.cx, d.cy))
        if cur is None or _preference(d) > _preference(cur):
            best[(d.cx, d.cy)] = d
    legend = depth_legend(cfg)
    nx, ny = cells
    pixels = np.zeros((ny, nx), dtype=np.uint8)
    for (cx, cy), d in best.items():
        pixels[cy, cx] = legend[d.k]
    return DepthMap(pixels, legend)


def detect_all(img: MultiviewImage, cfg: DisplayConfig | None = None,
               fraction=DEFAULT_FRACTION, workers: int = 1) -> tuple[VoxelSet, DepthMap]:
    """Detect on every plane; returns all detections and a one-plane-per-cell depth map.

    A lateral cell may hold voxels in several planes (the cube diagonals
    project pairwise onto the same cells), so the voxel set keeps every
    detection and only the depth map resolves conflicts.
    """
    cfg = cfg or img.cfg
    detections = detect_all_detections(img, cfg, fraction, workers)
    p = cfg.cell_pitch
    h, w = _pixels(img).shape
    cells = (w // p, h // p)
    voxels = VoxelSet(frozenset(d.voxel for d in detections), cells)
    return voxels, depth_map(detections, cells, cfg)


def cwt_plane(img: MultiviewImage, n: int, cfg: DisplayConfig | None = None) -> ResponseMap:
    """Correlate with the plane-``n`` 2-D multiview wavelet at every pixel anchor."""
    cfg = cfg or img.cfg
    w = wavelet_1d(n, cfg)
    return correlate_separable(img, w, w, plane=n)


def cwt_argmax(r: ResponseMap) -> tuple[int, int, int]:
    """``(u, v, score)`` of the largest score; ties go to the smallest ``(v, u)``."""
    if r.scores.size == 0:
        raise ArgumentError("response map has an empty valid region")
    flat = int(np.argmax(r.scores))
    dv, du = divmod(flat, r.scores.shape[1])
    u0, v0 = r.valid_region[:2]
    return u0 + du, v0 + dv, int(r.scores[dv, du])


def cwt_cell(u: int, v: int, n: int, cfg: DisplayConfig) -> tuple[int, int]:
    """Cell of the voxel recognized by a wavelet peak at anchor ``(u, v)``.

    A zero-mean wavelet gives no response over the flat interior of a pulse;
    a lone voxel peaks where the wavelet's negative-negative quadrant covers
    the first half of each pulse, i.e. ``ceil(w / 2)`` pixels before the
    voxel anchor on both axes (``w`` the pulse width).
    """
    half = -(-pulse_width(n, cfg) // 2)
    p = cfg.cell_pitch
    return (u + half) // p, (v + half) // p
