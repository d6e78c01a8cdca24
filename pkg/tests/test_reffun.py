from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mvwave.errors import ConfigurationError, InvalidPlaneError
from mvwave.reffun import (
    DisplayConfig,
    pulse_layout,
    raster_1d,
    raster_1d_haar_form,
    raster_2d,
)

from oracles import tile_line

ALL_PLANES = [k for k in range(-6, 7) if k]


def divisible_configs():
    """(pitch, k) pairs with pitch divisible by |k|."""
    return st.integers(1, 6).flatmap(
        lambda n: st.tuples(st.integers(1, 12).map(lambda m: m * n), st.sampled_from([n, -n]))
    ).filter(lambda pk: pk[0] >= 2)


class TestDisplayConfig:
    def test_defaults(self):
        cfg = DisplayConfig()
        assert (cfg.cell_pitch, cfg.gray_levels, cfg.max_abs_plane) == (60, 256, 6)
        assert cfg.full_scale == 255
        assert cfg.planes() == ALL_PLANES

    @pytest.mark.parametrize("kwargs", [{"cell_pitch": 1}, {"gray_levels": 1}, {"max_abs_plane": 0}])
    def test_rejects_degenerate(self, kwargs):
        with pytest.raises(ConfigurationError):
            DisplayConfig(**kwargs)


class TestPulseLayout:
    def test_single_pulse(self, cfg):
        (pulse,) = pulse_layout(1, cfg)
        assert (pulse.cell_offset, pulse.left_edge, pulse.width) == (0, 0, 60)
        assert pulse.center == 30

    def test_k3_ascending(self, cfg):
        pulses = pulse_layout(3, cfg)
        assert [(p.cell_offset, p.left_edge, p.width) for p in pulses] == [(0, 0, 20), (1, 20, 20), (2, 40, 20)]

    def test_k3_mirror(self, cfg):
        pulses = pulse_layout(-3, cfg)
        assert [(p.cell_offset, p.left_edge, p.width) for p in pulses] == [(0, 40, 20), (1, 20, 20), (2, 0, 20)]

    def test_odd_width_center_is_half_integer(self, cfg):
        assert pulse_layout(4, cfg)[0].center == Fraction(15, 2)

    def test_plane_zero(self, cfg):
        with pytest.raises(InvalidPlaneError):
            pulse_layout(0, cfg)

    def test_beyond_max_plane(self, cfg):
        with pytest.raises(InvalidPlaneError):
            pulse_layout(7, cfg)

    def test_divisibility(self):
        with pytest.raises(ConfigurationError):
            pulse_layout(7, DisplayConfig(cell_pitch=60, max_abs_plane=7))

    @given(divisible_configs())
    def test_pulses_stay_inside_their_cell(self, pk):
        p, k = pk
        cfg = DisplayConfig(cell_pitch=p, max_abs_plane=6)
        pulses = pulse_layout(k, cfg)
        assert len(pulses) == abs(k)
        for i, pulse in enumerate(pulses):
            assert pulse.cell_offset == i
            assert pulse.width * abs(k) == p
            assert 0 <= pulse.left_edge and pulse.left_edge + pulse.width <= p


class TestRaster1D:
    def test_k1(self, cfg):
        assert raster_1d(1, cfg).values.tolist() == [1] * 60

    def test_k2(self, cfg):
        expected = np.zeros(120, dtype=int)
        expected[0:30] = 1
        expected[90:120] = 1
        assert np.array_equal(raster_1d(2, cfg).values, expected)

    @pytest.mark.parametrize("k", ALL_PLANES)
    def test_constant_area(self, cfg, k):
        r = raster_1d(k, cfg)
        assert len(r) == abs(k) * 60
        assert r.sum() == 60
        assert set(np.unique(r.values)) <= {0, 1}

    def test_read_only(self, cfg):
        with pytest.raises(ValueError):
            raster_1d(2, cfg).values[0] = 5

    @pytest.mark.parametrize("k", ALL_PLANES)
    def test_partition_of_unity(self, cfg, k):
        n = 3 * abs(k)
        line = tile_line(raster_1d(k, cfg).values.tolist(), 60, n)
        assert line[(abs(k) - 1) * 60:n * 60] == [1] * ((n - abs(k) + 1) * 60)

    @given(divisible_configs())
    def test_partition_of_unity_any_pitch(self, pk):
        p, k = pk
        cfg = DisplayConfig(cell_pitch=p)
        n = 3 * abs(k)
        line = tile_line(raster_1d(k, cfg).values.tolist(), p, n)
        assert set(line[(abs(k) - 1) * p:n * p]) == {1}

    @pytest.mark.parametrize("k", range(1, 7))
    def test_mirror_symmetry(self, cfg, k):
        # -k is +k with its per-cell blocks in reverse order
        pos = raster_1d(k, cfg).values.reshape(k, 60)
        neg = raster_1d(-k, cfg).values.reshape(k, 60)
        assert np.array_equal(neg, pos[::-1])


class TestHaarForm:
    @pytest.mark.parametrize("k", ALL_PLANES)
    def test_equals_pulse_raster(self, cfg, k):
        assert np.array_equal(raster_1d_haar_form(k, cfg).values, raster_1d(k, cfg).values)

    def test_k1_ones(self, cfg):
        assert raster_1d_haar_form(1, cfg).values.tolist() == [1] * 60

    @given(divisible_configs())
    def test_equals_pulse_raster_any_pitch(self, pk):
        p, k = pk
        cfg = DisplayConfig(cell_pitch=p)
        assert np.array_equal(raster_1d_haar_form(k, cfg).values, raster_1d(k, cfg).values)


class TestRaster2D:
    def test_k1_all_ones(self, cfg):
        r = raster_2d(1, cfg)
        assert r.shape == (60, 60) and r.values.min() == 1

    def test_k2_samples(self, cfg):
        r = raster_2d(2, cfg).values
        assert r[0, 0] == 1
        assert r[0, 40] == 0

    @pytest.mark.parametrize("k", ALL_PLANES)
    def test_area_and_separability(self, cfg, k):
        row = raster_1d(k, cfg).values
        r = raster_2d(k, cfg)
        assert r.sum() == 3600
        assert r.side_cells == abs(k)
        for y in range(0, len(row), 7):
            for x in range(0, len(row), 5):
                assert r.values[y, x] == row[y] * row[x]
