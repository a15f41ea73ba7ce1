import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaostex import LbpParams, code_pixel, lbp_histogram
from chaostex.errors import DataError


def oracle_code(bits):
    """Independent uniformity check: walk the circular bit sequence."""
    n = len(bits)
    transitions = sum(bits[p] != bits[(p - 1) % n] for p in range(n))
    return sum(bits) if transitions <= 2 else n + 1


def oracle_bilinear(img, r, c):
    """Textbook four-corner bilinear interpolation, written independently."""
    r0, c0 = math.floor(r), math.floor(c)
    fr, fc = r - r0, c - c0
    h, w = img.shape
    r1, c1 = min(r0 + 1, h - 1), min(c0 + 1, w - 1)
    return (
        img[r0, c0] * (1 - fr) * (1 - fc)
        + img[r1, c0] * fr * (1 - fc)
        + img[r0, c1] * (1 - fr) * fc
        + img[r1, c1] * fr * fc
    )


def oracle_histogram(img, params):
    """Per-pixel coding loop used as the independent dual of lbp_histogram."""
    h, w = img.shape
    margin = math.ceil(params.radius)
    counts = np.zeros(params.points + 2)
    for r in range(margin, h - margin):
        for c in range(margin, w - margin):
            samples = []
            for p in range(params.points):
                theta = 2 * math.pi * p / params.points
                dr = -params.radius * math.sin(theta)
                dc = params.radius * math.cos(theta)
                if abs(dr - round(dr)) < 1e-9:
                    dr = round(dr)
                if abs(dc - round(dc)) < 1e-9:
                    dc = round(dc)
                samples.append(oracle_bilinear(img, r + dr, c + dc))
            bits = [1 if s >= img[r, c] else 0 for s in samples]
            counts[oracle_code(bits)] += 1
    return counts / counts.sum()


class TestCodePixel:
    def test_all_equal_neighbors(self):
        assert code_pixel([0.5] * 8, 0.5) == 8

    def test_all_below_center(self):
        assert code_pixel([0.1] * 8, 0.5) == 0

    def test_alternating_pattern_is_nonuniform(self):
        neighborhood = [1.0, 0.0] * 4
        assert code_pixel(neighborhood, 0.5) == 9

    def test_exhaustive_256_patterns_match_oracle(self):
        for pattern in range(256):
            bits = [(pattern >> p) & 1 for p in range(8)]
            neighborhood = [1.0 if b else 0.0 for b in bits]
            assert code_pixel(neighborhood, 0.5) == oracle_code(bits), pattern

    def test_rotation_invariance_exhaustive(self):
        for pattern in range(256):
            bits = [(pattern >> p) & 1 for p in range(8)]
            codes = set()
            for shift in range(8):
                rotated = bits[shift:] + bits[:shift]
                codes.add(code_pixel([float(b) for b in rotated], 0.5))
            assert len(codes) == 1, pattern

    def test_ties_count_as_greater_or_equal(self):
        # one exact tie among below-center neighbors: a single 1-bit
        neighborhood = [0.2, 0.2, 0.2, 0.5, 0.2, 0.2, 0.2, 0.2]
        assert code_pixel(neighborhood, 0.5) == 1

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            code_pixel([0.1, 0.2, 0.3], 0.5)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=16),
           st.floats(0.0, 1.0))
    def test_code_range(self, neighborhood, center):
        code = code_pixel(neighborhood, center)
        assert 0 <= code <= len(neighborhood) + 1


class TestHistogram:
    def test_constant_image_codes_to_all_ones_bin(self):
        hist = lbp_histogram(np.full((16, 16), 0.5))
        expected = np.zeros(10)
        expected[8] = 1.0
        assert np.array_equal(hist, expected)

    def test_step_edge_populates_only_uniform_codes(self):
        img = np.zeros((16, 16))
        img[:, 8:] = 1.0
        hist = lbp_histogram(img)
        assert hist[9] == 0.0
        assert np.array_equal(hist, oracle_histogram(img, LbpParams()))

    def test_matches_bruteforce_oracle_on_random_images(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            img = rng.random((12, 14))
            assert np.array_equal(lbp_histogram(img), oracle_histogram(img, LbpParams()))

    def test_matches_oracle_with_larger_radius(self):
        rng = np.random.default_rng(22)
        img = rng.random((15, 15))
        params = LbpParams(points=12, radius=2.0)
        assert np.array_equal(lbp_histogram(img, params), oracle_histogram(img, params))

    def test_normalization(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            hist = lbp_histogram(rng.random((9, 9)))
            assert hist.sum() == pytest.approx(1.0, abs=1e-9)
            assert np.all(hist >= 0.0)

    def test_histogram_length(self):
        for points in (4, 8, 12):
            hist = lbp_histogram(np.random.default_rng(0).random((11, 11)),
                                 LbpParams(points=points))
            assert hist.size == points + 2

    def test_gray_shift_invariance(self):
        # continuous values keep every non-tie margin far above the 1-ulp
        # perturbation the shift introduces; the shift deliberately pushes
        # values past 1 (no clamping inside the histogram path)
        rng = np.random.default_rng(8)
        img = rng.random((20, 20))
        for shift in (0.25, 0.5):
            assert np.array_equal(lbp_histogram(img), lbp_histogram(img + shift))

    def test_mirrored_constant_image(self):
        img = np.full((10, 10), 0.3)
        assert np.array_equal(lbp_histogram(img), lbp_histogram(img[:, ::-1]))

    def test_too_small_image_rejected(self):
        with pytest.raises(DataError, match="too small"):
            lbp_histogram(np.zeros((2, 8)))
        with pytest.raises(DataError, match="too small"):
            lbp_histogram(np.zeros((8, 4)), LbpParams(points=8, radius=2.0))

    def test_minimum_viable_image(self):
        hist = lbp_histogram(np.full((3, 3), 0.5))
        assert hist[8] == 1.0


class TestParams:
    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            LbpParams(points=3)

    def test_radius_below_one_rejected(self):
        with pytest.raises(ValueError):
            LbpParams(radius=0.5)
