"""Synthesis and wavelet analysis of autostereoscopic multiview images."""

__version__ = "0.1.0"

from .errors import ArgumentError, ConfigurationError, FormatError, InvalidPlaneError, MvwaveError
from .reffun import DisplayConfig, Kernel1D, Kernel2D, pulse_layout, raster_1d, raster_1d_haar_form, raster_2d
from .wavelet import admissibility, haar_mother, wavelet_1d, wavelet_2d
from .scene import VoxelSet, cube_diagonals, from_edge_list, rasterize_segment_3d, tetrahedron_edges
from .synth import MultiviewImage, add_noise, render
from .analysis import (
    correlate_separable,
    cwt_argmax,
    cwt_plane,
    detect_all,
    detect_plane,
    paper_units,
    threshold_value,
)
from .pgm import read_pgm, write_pgm
