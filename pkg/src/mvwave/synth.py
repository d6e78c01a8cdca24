"""Computer-generated multiview images of voxel sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ConfigurationError, FormatError
from .reffun import DisplayConfig, check_plane, raster_2d
from .scene import VoxelSet

__all__ = ["MultiviewImage", "render", "add_noise", "canvas_cells"]


def _pixel_dtype(cfg: DisplayConfig):
    return np.uint8 if cfg.gray_levels <= 256 else np.uint16


@dataclass(frozen=True)
class MultiviewImage:
    """Grid of intensities whose sides are whole numbers of cells.

    ``manifest`` carries bookkeeping produced by :func:`render` (planes
    used, margin cells) and is not part of the pixel contract.
    """

    pixels: np.ndarray
    cfg: DisplayConfig = field(default_factory=DisplayConfig)
    manifest: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise FormatError(f"image must be 2-D, got shape {px.shape}")
        p = self.cfg.cell_pitch
        h, w = px.shape
        if h % p or w % p:
            raise FormatError(f"image {w}x{h} is not a whole number of {p}-pixel cells")
        if px.size and (px.min() < 0 or px.max() > self.cfg.full_scale):
            raise FormatError(f"pixel values outside [0, {self.cfg.full_scale}]")
        px = np.ascontiguousarray(px, dtype=_pixel_dtype(self.cfg))
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width_px(self) -> int:
        return self.pixels.shape[1]

    @property
    def height_px(self) -> int:
        return self.pixels.shape[0]

    @property
    def cells(self) -> tuple[int, int]:
        p = self.cfg.cell_pitch
        return self.width_px // p, self.height_px // p

    def __eq__(self, other):
        if not isinstance(other, MultiviewImage):
            return NotImplemented
        return self.cfg == other.cfg and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


def canvas_cells(v: VoxelSet) -> tuple[int, int]:
    margin = max((abs(k) for k in v.planes()), default=0)
    nx, ny = v.lateral_cells
    return nx + margin, ny + margin


def render(v: VoxelSet, cfg: DisplayConfig | None = None) -> MultiviewImage:
    """Stamp every voxel's 2-D reference pattern at full scale.

    Patterns are composed with a saturating maximum, so overlapping voxels
    never exceed full scale and every voxel's own pattern stays intact. The
    canvas gets ``max |k|`` spare cells on the right and bottom so no
    pattern is clipped.
    """
    cfg = cfg or DisplayConfig()
    p = cfg.cell_pitch
    planes = v.planes()
    for k in planes:
        check_plane(k, cfg)
    cx, cy = canvas_cells(v)
    img = np.zeros((cy * p, cx * p), dtype=_pixel_dtype(cfg))
    stamps = {k: (raster_2d(k, cfg).values * cfg.full_scale).astype(img.dtype) for k in planes}
    for x, y, k in sorted(v.voxels):
        stamp = stamps[k]
        h, w = stamp.shape
        region = img[y * p:y * p + h, x * p:x * p + w]
        if region.shape != stamp.shape:
            raise ConfigurationError(f"pattern of voxel {(x, y, k)} leaves the canvas")
        np.maximum(region, stamp, out=region)
    manifest = {
        "planes_used": planes,
        "margin_cells": cx - v.lateral_cells[0],
        "lateral_cells": list(v.lateral_cells),
        "canvas_cells": [cx, cy],
        "voxel_count": len(v),
        "composition": "saturating-max",
    }
    return MultiviewImage(img, cfg, manifest)


def add_noise(img: MultiviewImage, amplitude: int, seed: int) -> MultiviewImage:
    """Add uniform integer noise in ``[0, amplitude]`` per pixel, clamped at full scale."""
    full = img.cfg.full_scale
    if int(amplitude) != amplitude or not 0 <= amplitude < img.cfg.gray_levels:
        raise ArgumentError(f"noise amplitude must be an integer in [0, {full}], got {amplitude!r}")
    if amplitude == 0:
        return MultiviewImage(img.pixels, img.cfg, dict(img.manifest))
    rng = np.random.default_rng(seed)
    bump = rng.integers(0, amplitude, size=img.pixels.shape, endpoint=True, dtype=np.int64)
    noisy = np.minimum(img.pixels.astype(np.int64) + bump, full)
    manifest = dict(img.manifest, noise={"model": "uniform-additive", "amplitude": int(amplitude), "seed": int(seed)})
    return MultiviewImage(noisy, img.cfg, manifest)
