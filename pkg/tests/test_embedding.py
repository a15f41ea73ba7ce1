import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from chaostex import PointCloud, blend, embed, reconstruct

unit_images = hnp.arrays(
    dtype=np.float64,
    shape=st.tuples(st.integers(1, 12), st.integers(1, 12)),
    elements=st.floats(0.0, 1.0),
)


class TestEmbed:
    def test_single_pixel(self):
        cloud = embed(np.array([[0.5]]))
        assert np.array_equal(cloud.points, np.array([[1.0, 1.0, 0.5]]))

    def test_two_by_two_enumeration(self):
        cloud = embed(np.array([[0.0, 0.25], [0.5, 1.0]]))
        expected = np.array([
            [0.5, 0.5, 0.00],
            [0.5, 1.0, 0.25],
            [1.0, 0.5, 0.50],
            [1.0, 1.0, 1.00],
        ])
        assert np.array_equal(cloud.points, expected)
        assert (cloud.height, cloud.width) == (2, 2)

    @settings(max_examples=50, deadline=None)
    @given(img=unit_images)
    def test_intensity_column_is_the_image(self, img):
        cloud = embed(img)
        assert np.array_equal(cloud.points[:, 2].reshape(img.shape), img)

    def test_empty_image_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            embed(np.zeros((0, 3)))

    def test_out_of_range_intensity_rejected(self):
        with pytest.raises(ValueError, match=r"\[0,1\]"):
            embed(np.array([[0.2, 1.5]]))


class TestReconstruct:
    def test_roundtrip_identity_random_images(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            img = rng.random((rng.integers(1, 30), rng.integers(1, 30)))
            assert np.array_equal(reconstruct(embed(img)), img)

    @settings(max_examples=50, deadline=None)
    @given(img=unit_images)
    def test_roundtrip_identity_property(self, img):
        assert np.array_equal(reconstruct(embed(img)), img)

    def test_full_collision_averages_and_fills(self):
        # both points claim one cell; the other cell back-fills from the
        # cloud mean via the leading-hole rule
        cloud = PointCloud(np.array([[0.5, 0.5, 0.2], [0.5, 0.5, 0.4]]), 1, 2)
        assert reconstruct(cloud) == pytest.approx(np.array([[0.3, 0.3]]), abs=1e-12)

    def test_single_point_cloud(self):
        cloud = PointCloud(np.array([[1.0, 1.0, 0.7]]), 1, 1)
        assert np.array_equal(reconstruct(cloud), np.array([[0.7]]))

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(3)
        m, n = 6, 5
        pts = np.column_stack([
            rng.choice(np.linspace(0.1, 1.0, 4), m * n),
            rng.choice(np.linspace(0.1, 1.0, 4), m * n),
            rng.random(m * n),
        ])
        base = reconstruct(PointCloud(pts, m, n))
        for _ in range(5):
            perm = rng.permutation(m * n)
            shuffled = reconstruct(PointCloud(pts[perm], m, n))
            assert np.array_equal(shuffled, base)

    def test_multiset_conserved_without_collisions(self):
        # Construct distinct per-axis coordinates whose ranks place every
        # point in its own cell: column 1 increasing with p, column 2
        # ordered by the transpose numbering.
        rng = np.random.default_rng(9)
        m, n = 4, 6
        rows_sorted = np.sort(rng.uniform(0.01, 1.0, m * n))
        cols_sorted = np.sort(rng.uniform(0.01, 1.0, m * n))
        p = np.arange(m * n)
        row_of_p = p // n
        col_of_p = p % n
        transpose_rank = col_of_p * m + row_of_p  # 0-based rank for column 2
        pts = np.column_stack([
            rows_sorted,
            cols_sorted[transpose_rank],
            rng.random(m * n),
        ])
        image = reconstruct(PointCloud(pts, m, n))
        assert np.array_equal(np.sort(image.ravel()), np.sort(pts[:, 2]))

    def test_near_duplicate_coordinates_merge(self):
        # values equal to 12 decimals rank as one value
        pts = np.array([
            [0.3, 0.2, 0.1],
            [0.3 + 1e-14, 0.2, 0.9],
        ])
        image = reconstruct(PointCloud(pts, 1, 2))
        assert np.array_equal(image, np.array([[0.5, 0.5]]))


class TestBlend:
    def test_weight_zero_returns_first_exactly(self):
        rng = np.random.default_rng(0)
        a, b = rng.random((5, 5)), rng.random((5, 5))
        assert np.array_equal(blend(a, b, 0.0), a)

    def test_weight_one_returns_second_exactly(self):
        rng = np.random.default_rng(1)
        a, b = rng.random((5, 5)), rng.random((5, 5))
        assert np.array_equal(blend(a, b, 1.0), b)

    def test_midpoint_of_constants(self):
        a = np.full((4, 4), 0.2)
        b = np.full((4, 4), 0.6)
        assert blend(a, b, 0.5) == pytest.approx(np.full((4, 4), 0.4), abs=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(
        img=unit_images,
        w=st.floats(0.0, 1.0),
        seed=st.integers(0, 2**31),
    )
    def test_affine_symmetry(self, img, w, seed):
        other = np.random.default_rng(seed).random(img.shape)
        forward = blend(img, other, w)
        backward = blend(other, img, w)
        assert forward + backward == pytest.approx(img + other, abs=1e-12)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            blend(np.zeros((2, 2)), np.zeros((2, 3)), 0.5)

    def test_output_in_unit_interval(self):
        rng = np.random.default_rng(2)
        a, b = rng.random((8, 8)), rng.random((8, 8))
        out = blend(a, b, 0.37)
        assert out.min() >= 0.0 and out.max() <= 1.0
