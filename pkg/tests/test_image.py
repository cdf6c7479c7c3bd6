import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facekit.image import (
    Spectrum,
    canny,
    conv2_fft,
    fft2p,
    gaussian_smooth,
    histogram_equalize,
    ifft2p,
    iround,
    label_regions,
    lsum2,
    median_filter,
    morph_close,
    polygon_mask,
    resize,
)


def rand_img(rng, rows, cols, integer=True):
    if integer:
        return rng.integers(0, 256, size=(rows, cols)).astype(float)
    return rng.uniform(0, 255, size=(rows, cols))


class TestIround:
    def test_half_away_from_zero(self):
        assert iround(0.5) == 1
        assert iround(1.5) == 2
        assert iround(2.5) == 3
        assert iround(-0.5) == -1
        assert iround(127.5) == 128


class TestHistogramEqualize:
    def test_constant_image(self):
        img = np.full((8, 8), 77.0)
        out = histogram_equalize(img, bins=64)
        assert np.all(out == out[0, 0])

    def test_monotone_on_distinct_levels(self):
        img = np.array([[0.0, 85.0], [170.0, 255.0]])
        out = histogram_equalize(img, bins=256)
        flat_in = img.ravel()
        flat_out = out.ravel()
        order = np.argsort(flat_in)
        assert np.all(np.diff(flat_out[order]) > 0)

    def test_ramp_near_uniform_output(self):
        # derived oracle: histogram computed directly on the output
        img = np.arange(256, dtype=float).reshape(16, 16)
        out = histogram_equalize(img, bins=64)
        hist, _ = np.histogram(out, bins=64, range=(0, 256))
        nonzero = hist[hist > 0]
        assert nonzero.max() / nonzero.min() <= 2

    def test_rejects_bad_bins(self):
        with pytest.raises(ValueError):
            histogram_equalize(np.zeros((4, 4)), bins=1)

    @given(st.integers(2, 256), st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_order_preserving(self, bins, seed):
        rng = np.random.default_rng(seed)
        img = rand_img(rng, 8, 8)
        out = histogram_equalize(img, bins=bins)
        a = img.ravel()
        b = out.ravel()
        ge = a[:, None] >= a[None, :]
        assert np.all((b[:, None] >= b[None, :])[ge])


class TestGaussianSmooth:
    def test_constant_unchanged(self):
        img = np.full((9, 9), 42.0)
        out = gaussian_smooth(img, 1.5)
        np.testing.assert_allclose(out, img, atol=1e-9)

    def test_impulse_peak_matches_analytic(self):
        img = np.zeros((21, 21))
        img[10, 10] = 1.0
        out = gaussian_smooth(img, 1.0)
        expected = 1.0 / (2 * np.pi * 1.0**2)
        assert abs(out[10, 10] - expected) / expected < 0.05

    def test_mass_preserved_for_interior_impulse(self):
        img = np.zeros((21, 21))
        img[10, 10] = 1.0
        out = gaussian_smooth(img, 1.0)
        assert abs(out.sum() - 1.0) < 1e-3

    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(ValueError):
            gaussian_smooth(np.zeros((4, 4)), 0.0)


class TestMedianFilter:
    def test_constant_unchanged(self):
        img = np.full((7, 7), 3.0)
        np.testing.assert_array_equal(median_filter(img, 3, 3), img)

    def test_impulse_removed(self):
        img = np.zeros((9, 9))
        img[4, 4] = 255.0
        assert np.all(median_filter(img, 3, 3) == 0)

    def test_checkerboard_majority(self):
        img = np.indices((8, 8)).sum(axis=0) % 2 * 255.0
        out = median_filter(img, 3, 3)
        # derived oracle: enumerate interior windows
        for i in range(1, 7):
            for j in range(1, 7):
                window = img[i - 1:i + 2, j - 1:j + 2].ravel()
                counts = np.bincount(window.astype(int), minlength=256)
                majority = counts.argmax()
                assert out[i, j] == majority

    def test_rejects_even_window(self):
        with pytest.raises(ValueError):
            median_filter(np.zeros((5, 5)), 2, 3)


class TestResize:
    def test_identity_scale(self):
        rng = np.random.default_rng(0)
        img = rand_img(rng, 7, 9)
        np.testing.assert_array_equal(resize(img, 1.0), img)

    def test_constant_stays_constant(self):
        img = np.full((6, 5), 19.0)
        for s in (0.5, 1.3, 2.0):
            np.testing.assert_allclose(resize(img, s), 19.0, atol=1e-9)

    def test_round_trip_on_ramp(self):
        ramp = np.add.outer(np.linspace(0, 100, 16), np.linspace(0, 80, 16))
        back = resize(resize(ramp, 2.0), 0.5)
        assert np.abs(back - ramp).max() <= 1.0

    def test_too_small_errors(self):
        with pytest.raises(ValueError):
            resize(np.zeros((4, 4)), 0.1)


class TestFftPair:
    def test_round_trip(self):
        rng = np.random.default_rng(1)
        img = rand_img(rng, 13, 17)
        spec = fft2p(img, 13, 17, 1, 1)
        back = ifft2p(spec, 13, 17, 1, 1)
        np.testing.assert_allclose(back, img, atol=1e-9)

    def test_impulse_convolution_reproduces_kernel(self):
        img = np.zeros((9, 9))
        img[3, 4] = 1.0
        kern = np.arange(6, dtype=float).reshape(2, 3) + 1
        out = conv2_fft(img, kern)
        assert out.shape == (10, 11)
        np.testing.assert_allclose(out[3:5, 4:7], kern, atol=1e-9)
        out[3:5, 4:7] = 0
        np.testing.assert_allclose(out, 0, atol=1e-9)

    def test_matches_direct_convolution(self):
        rng = np.random.default_rng(2)
        a = rand_img(rng, 8, 8)
        b = rand_img(rng, 3, 3)
        # direct nested-loop oracle
        direct = np.zeros((10, 10))
        for i in range(8):
            for j in range(8):
                for k in range(3):
                    for l in range(3):
                        direct[i + k, j + l] += a[i, j] * b[k, l]
        np.testing.assert_allclose(conv2_fft(a, b), direct, atol=1e-9 * direct.max())

    def test_dimension_mismatch(self):
        img = np.zeros((4, 4))
        spec = fft2p(img, 4, 4, 3, 3)
        with pytest.raises(ValueError):
            ifft2p(Spectrum(spec.data, (5, 5)), 4, 4, 3, 3)


class TestLsum2:
    def test_all_ones(self):
        out = lsum2(np.ones((5, 5)), 2, 2)
        assert out.shape == (4, 4)
        np.testing.assert_array_equal(out, 4.0)

    def test_unit_window_is_identity(self):
        rng = np.random.default_rng(3)
        img = rand_img(rng, 6, 7)
        np.testing.assert_array_equal(lsum2(img, 1, 1), img)

    def test_window_too_large(self):
        with pytest.raises(ValueError):
            lsum2(np.ones((3, 3)), 4, 1)

    @given(st.integers(0, 10_000), st.integers(1, 32), st.integers(1, 32),
           st.data())
    @settings(max_examples=40, deadline=None)
    def test_matches_naive_sums(self, seed, rows, cols, data):
        m = data.draw(st.integers(1, rows))
        n = data.draw(st.integers(1, cols))
        rng = np.random.default_rng(seed)
        img = rng.integers(0, 256, size=(rows, cols)).astype(float)
        out = lsum2(img, m, n)
        naive = np.empty((rows - m + 1, cols - n + 1))
        for i in range(naive.shape[0]):
            for j in range(naive.shape[1]):
                naive[i, j] = img[i:i + m, j:j + n].sum()
        np.testing.assert_array_equal(out, naive)


class TestCanny:
    def test_constant_no_edges(self):
        assert not canny(np.full((16, 16), 9.0)).any()

    def test_vertical_step_edge(self):
        img = np.zeros((32, 32))
        img[:, 16:] = 255.0
        edges = canny(img)
        ys, xs = np.nonzero(edges)
        assert len(xs) > 0
        assert np.all(np.abs(xs - 15.5) <= 1.5)  # within +-1 column of the step
        # single-pixel-wide: one edge pixel per row
        for r in np.unique(ys):
            assert (ys == r).sum() == 1

    def test_disk_edges_near_circle(self):
        n = 64
        yy, xx = np.mgrid[:n, :n]
        r = np.hypot(xx - 32, yy - 32)
        img = np.where(r <= 20, 255.0, 0.0)
        edges = canny(img)
        ys, xs = np.nonzero(edges)
        assert len(xs) > 40
        dist = np.hypot(xs - 32, ys - 32)
        assert np.all(np.abs(dist - 20) <= 1.5)


class TestMorphClose:
    def test_constant_unchanged(self):
        img = np.full((8, 8), 5.0)
        np.testing.assert_array_equal(morph_close(img, np.ones((1, 7))), img)

    def test_fills_narrow_dark_detail(self):
        img = np.full((5, 9), 200.0)
        img[2, 4] = 10.0
        out = morph_close(img, np.ones((1, 7)))
        assert out[2, 4] == 200.0

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_extensive_and_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        img = rng.integers(0, 256, size=(16, 16)).astype(float)
        se = np.ones((1, 7)) if seed % 2 else np.ones((7, 1))
        once = morph_close(img, se)
        assert np.all(once >= img)
        np.testing.assert_array_equal(morph_close(once, se), once)


class TestLabelRegions:
    def test_empty(self):
        assert label_regions(np.zeros((5, 5), dtype=bool)) == []

    def test_diagonal_pixels_are_one_region(self):
        bw = np.zeros((4, 4), dtype=bool)
        bw[1, 1] = bw[2, 2] = True
        regions = label_regions(bw)
        assert len(regions) == 1
        assert regions[0].area == 2

    def test_three_blocks(self):
        bw = np.zeros((10, 10), dtype=bool)
        for y, x in ((0, 0), (4, 4), (8, 8)):
            bw[y:y + 2, x:x + 2] = True
        regions = label_regions(bw)
        assert len(regions) == 3
        for r in regions:
            assert r.area == 4
            assert (r.w, r.h) == (2, 2)

    def test_mean_gray_and_centroid_inside_bbox(self):
        bw = np.zeros((6, 6), dtype=bool)
        bw[2:4, 1:5] = True
        gray = np.full((6, 6), 30.0)
        gray[2:4, 1:5] = 90.0
        (r,) = label_regions(bw, companion=gray)
        assert r.mean_gray == 90.0
        assert r.x <= r.cx <= r.x + r.w
        assert r.y <= r.cy <= r.y + r.h

    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_partition_property(self, seed):
        rng = np.random.default_rng(seed)
        bw = rng.random((12, 12)) < 0.3
        regions = label_regions(bw)
        assert sum(r.area for r in regions) == int(bw.sum())


class TestPolygonMask:
    def test_square(self):
        pts = [(2, 2), (7, 2), (7, 7), (2, 7)]
        mask = polygon_mask(pts, (10, 10))
        expected = np.zeros((10, 10), dtype=bool)
        expected[2:7, 2:7] = True  # half-open: boundary rows/cols at 7 excluded
        np.testing.assert_array_equal(mask, expected)

    def test_triangle_area_close(self):
        pts = [(0, 0), (20, 0), (0, 20)]
        mask = polygon_mask(pts, (24, 24))
        assert abs(mask.sum() - 200) < 25
