"""Multiview wavelets derived from the reference functions.

Every pulse of a reference function is a shifted Haar box, so replacing
each box by a Haar wavelet on the same support yields a zero-mean kernel
that lives exactly on the reference function's footprint. The two-scale
coefficients are taken as ``(+1, -1)`` without the sqrt(2) factor, which
keeps every kernel integer valued.

Pulses of odd width cannot be split into equal halves; they get
``(w - 1) // 2`` positive samples, a single zero in the middle and
``(w - 1) // 2`` negative samples. The mean stays exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError
from .reffun import KERNEL_DTYPE, DisplayConfig, Kernel1D, Kernel2D, pulse_layout

__all__ = [
    "HaarCoefficients",
    "WaveletKernel1D",
    "WaveletKernel2D",
    "HAAR",
    "haar_mother",
    "haar_split",
    "wavelet_1d",
    "wavelet_2d",
    "admissibility",
    "has_center_zero",
]


@dataclass(frozen=True)
class HaarCoefficients:
    beta: tuple[Fraction, Fraction] = (Fraction(1), Fraction(-1))

    def __post_init__(self):
        b0, b1 = (Fraction(b) for b in self.beta)
        if b0 != -b1:
            raise ConfigurationError(f"two-scale coefficients must cancel, got {self.beta}")
        object.__setattr__(self, "beta", (b0, b1))


HAAR = HaarCoefficients()


class WaveletKernel1D(Kernel1D):
    pass


class WaveletKernel2D(Kernel2D):
    pass


def haar_mother(width: int) -> Kernel1D:
    """Haar wavelet sampled on ``width`` pixels: +1 then -1 halves."""
    if int(width) != width or width < 2 or width % 2:
        raise ConfigurationError(f"Haar wavelet width must be even and >= 2, got {width!r}")
    half = width // 2
    values = np.concatenate([np.ones(half, KERNEL_DTYPE), -np.ones(half, KERNEL_DTYPE)])
    return Kernel1D(values, 1, 1)


def haar_split(width: int) -> np.ndarray:
    """Zero-mean Haar-like pulse of any width >= 2.

    Even widths give the plain Haar wavelet; odd widths put a single zero
    sample between the two lobes.
    """
    if int(width) != width or width < 2:
        raise ConfigurationError(f"pulse width must be >= 2 to carry a wavelet, got {width!r}")
    if width % 2 == 0:
        return np.array(haar_mother(width).values)
    half = (width - 1) // 2
    return np.concatenate(
        [np.ones(half, KERNEL_DTYPE), np.zeros(1, KERNEL_DTYPE), -np.ones(half, KERNEL_DTYPE)]
    )


def has_center_zero(k: int, cfg: DisplayConfig) -> bool:
    """True when the plane-``k`` wavelet uses the odd-width split."""
    return pulse_layout(k, cfg)[0].width % 2 == 1


def wavelet_1d(k: int, cfg: DisplayConfig) -> WaveletKernel1D:
    pulses = pulse_layout(k, cfg)
    out = np.zeros(abs(k) * cfg.cell_pitch, dtype=KERNEL_DTYPE)
    lobe = haar_split(pulses[0].width)
    for pulse in pulses:
        s = pulse.cell_offset * cfg.cell_pitch + pulse.left_edge
        out[s:s + pulse.width] = lobe
    return WaveletKernel1D(out, abs(k), k)


def wavelet_2d(k: int, cfg: DisplayConfig) -> WaveletKernel2D:
    row = wavelet_1d(k, cfg).values
    return WaveletKernel2D(np.outer(row, row), abs(k), k)


def admissibility(w) -> int:
    """Exact sum of the kernel samples; zero for a valid wavelet."""
    values = getattr(w, "values", w)
    return int(np.asarray(values).sum(dtype=np.int64))
