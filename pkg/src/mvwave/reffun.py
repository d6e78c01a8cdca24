"""Multiview reference functions rasterized on the pixel grid.

A voxel in depth plane ``k`` imprints ``|k|`` rectangular pulses on a
multiview image, one pulse per consecutive cell starting at the voxel's
anchor cell. Every pulse is ``cell_pitch // |k|`` pixels wide and the
pulse offset inside its cell advances by one pulse width per cell
(ascending for ``k > 0``, descending for ``k < 0``). With this layout all
reference functions carry the same area and their cell-shifted copies
tile the line exactly, which is what makes a single detection threshold
valid for every plane.

All rasters are integer numpy arrays and are read-only once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, InvalidPlaneError

__all__ = [
    "DisplayConfig",
    "PulseSpec",
    "Kernel1D",
    "Kernel2D",
    "check_plane",
    "pulse_width",
    "pulse_layout",
    "raster_1d",
    "raster_1d_haar_form",
    "raster_2d",
    "haar_box",
    "plane_ladder",
]

KERNEL_DTYPE = np.int32


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=KERNEL_DTYPE)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DisplayConfig:
    """Geometry of the multiview display.

    Parameters
    ----------
    cell_pitch : int
        Pixels per side of one elemental image (cell).
    gray_levels : int
        Number of representable intensities; full scale is ``gray_levels - 1``.
    max_abs_plane : int
        Largest ``|k|`` handled by synthesis and analysis.
    """

    cell_pitch: int = 60
    gray_levels: int = 256
    max_abs_plane: int = 6

    def __post_init__(self):
        if int(self.cell_pitch) != self.cell_pitch or self.cell_pitch < 2:
            raise ConfigurationError(f"cell_pitch must be an integer >= 2, got {self.cell_pitch!r}")
        if int(self.gray_levels) != self.gray_levels or self.gray_levels < 2:
            raise ConfigurationError(f"gray_levels must be an integer >= 2, got {self.gray_levels!r}")
        if int(self.max_abs_plane) != self.max_abs_plane or self.max_abs_plane < 1:
            raise ConfigurationError(f"max_abs_plane must be an integer >= 1, got {self.max_abs_plane!r}")

    @property
    def full_scale(self) -> int:
        return self.gray_levels - 1

    def planes(self) -> list[int]:
        """All supported plane indices in ascending order (zero excluded)."""
        return plane_ladder(self.max_abs_plane)

    def as_dict(self) -> dict:
        return {
            "cell_pitch": self.cell_pitch,
            "gray_levels": self.gray_levels,
            "max_abs_plane": self.max_abs_plane,
        }


def plane_ladder(max_abs_plane: int) -> list[int]:
    return [k for k in range(-max_abs_plane, max_abs_plane + 1) if k != 0]


def check_plane(k: int, cfg: DisplayConfig) -> int:
    if isinstance(k, bool) or int(k) != k:
        raise InvalidPlaneError(f"plane index must be an integer, got {k!r}")
    k = int(k)
    if k == 0:
        raise InvalidPlaneError("plane index 0 has no reference pattern")
    if abs(k) > cfg.max_abs_plane:
        raise InvalidPlaneError(f"|k|={abs(k)} exceeds max_abs_plane={cfg.max_abs_plane}")
    return k


def pulse_width(k: int, cfg: DisplayConfig) -> int:
    k = check_plane(k, cfg)
    if cfg.cell_pitch % abs(k):
        raise ConfigurationError(
            f"cell_pitch={cfg.cell_pitch} is not divisible by |k|={abs(k)}"
        )
    return cfg.cell_pitch // abs(k)


@dataclass(frozen=True)
class PulseSpec:
    """One rectangular pulse of a reference function.

    ``center`` is measured in pixels from the anchor (left edge of cell 0)
    and may be a half-integer when the width is odd.
    """

    cell_offset: int
    left_edge: int
    width: int
    center: Fraction


@dataclass(frozen=True)
class Kernel1D:
    values: np.ndarray
    support_cells: int
    plane: int

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    def __len__(self):
        return len(self.values)

    def sum(self) -> int:
        return int(self.values.sum(dtype=np.int64))


@dataclass(frozen=True)
class Kernel2D:
    values: np.ndarray
    side_cells: int
    plane: int

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def shape(self):
        return self.values.shape

    def sum(self) -> int:
        return int(self.values.sum(dtype=np.int64))


def pulse_layout(k: int, cfg: DisplayConfig) -> list[PulseSpec]:
    """Return the ``|k|`` pulses of the plane-``k`` reference function."""
    w = pulse_width(k, cfg)
    n = abs(k)
    pulses = []
    for i in range(n):
        left = i * w if k > 0 else (n - 1 - i) * w
        center = Fraction(i * cfg.cell_pitch + left) + Fraction(w, 2)
        pulses.append(PulseSpec(cell_offset=i, left_edge=left, width=w, center=center))
    return pulses


def raster_1d(k: int, cfg: DisplayConfig) -> Kernel1D:
    pulses = pulse_layout(k, cfg)
    out = np.zeros(abs(k) * cfg.cell_pitch, dtype=KERNEL_DTYPE)
    for pulse in pulses:
        s = pulse.cell_offset * cfg.cell_pitch + pulse.left_edge
        out[s:s + pulse.width] = 1
    return Kernel1D(out, abs(k), k)


def haar_box(t):
    """Haar scaling function: 1 on ``[0, 1)`` and 0 elsewhere."""
    t = np.asarray(t)
    return ((t >= 0) & (t < 1)).astype(KERNEL_DTYPE)


def raster_1d_haar_form(k: int, cfg: DisplayConfig) -> Kernel1D:
    """Build the same raster as :func:`raster_1d` from shifted Haar boxes.

    Each pulse is ``haar_box((x - center) / width + 1/2)``. The argument is
    evaluated from integers, so odd widths with half-integer centers need no
    rounding.
    """
    pulses = pulse_layout(k, cfg)
    x = np.arange(abs(k) * cfg.cell_pitch, dtype=np.int64)
    out = np.zeros_like(x, dtype=KERNEL_DTYPE)
    for pulse in pulses:
        # (x - c)/w + 1/2 == (2x - 2c + w) / (2w); 2c is an integer, and the
        # quotient is exact at both box edges (0 and 1)
        two_c = int(2 * pulse.center)
        out += haar_box((2 * x - two_c + pulse.width) / (2 * pulse.width))
    return Kernel1D(out, abs(k), k)


def raster_2d(k: int, cfg: DisplayConfig) -> Kernel2D:
    row = raster_1d(k, cfg).values
    return Kernel2D(np.outer(row, row), abs(k), k)
