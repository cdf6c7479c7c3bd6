import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facekit.transforms import (
    PcaModel,
    available_wavelets,
    dct2,
    dwt2,
    elliptical_mask,
    get_wavelet,
    load_model,
    pca_project,
    pca_train,
    save_model,
    select_features,
    wpd,
    wpd_pca_add,
    wpd_pca_project,
    wpd_pca_remove,
    wpd_pca_train,
)


def rand_images(rng, count, rows, cols):
    return [rng.uniform(0, 255, size=(rows, cols)) for _ in range(count)]


def dct2_loops(x):
    """Quadruple-loop orthonormal DCT-II oracle."""
    n1, n2 = x.shape
    y = np.zeros((n1, n2))
    for k1 in range(n1):
        for k2 in range(n2):
            a1 = np.sqrt(1 / n1) if k1 == 0 else np.sqrt(2 / n1)
            a2 = np.sqrt(1 / n2) if k2 == 0 else np.sqrt(2 / n2)
            acc = 0.0
            for l1 in range(n1):
                for l2 in range(n2):
                    acc += (x[l1, l2]
                            * np.cos((2 * l1 + 1) * np.pi * k1 / (2 * n1))
                            * np.cos((2 * l2 + 1) * np.pi * k2 / (2 * n2)))
            y[k1, k2] = a1 * a2 * acc
    return y


class TestPca:
    def test_two_images_one_component(self):
        rng = np.random.default_rng(0)
        model = pca_train(rand_images(rng, 2, 4, 4))
        assert model.n_components == 1

    def test_mean_projects_to_zero(self):
        rng = np.random.default_rng(1)
        imgs = rand_images(rng, 5, 4, 4)
        model = pca_train(imgs)
        mean_img = np.mean(imgs, axis=0)
        y = pca_project(model, mean_img).values
        np.testing.assert_allclose(y, 0, atol=1e-9)

    def test_orthonormal_basis_and_covariance_oracle(self):
        rng = np.random.default_rng(2)
        imgs = rand_images(rng, 10, 8, 8)
        model = pca_train(imgs)
        gram = model.basis @ model.basis.T
        np.testing.assert_allclose(gram, np.eye(model.n_components), atol=1e-8)
        # direct N x N covariance oracle at N = 64
        x = np.stack([im.reshape(-1) for im in imgs])
        d = x - x.mean(axis=0)
        cov = d.T @ d / len(x)
        lam = np.sort(np.linalg.eigvalsh(cov))[::-1][:model.n_components]
        np.testing.assert_allclose(model.eigenvalues, lam, atol=1e-8)

    def test_gram_trick_matches_direct_eigenvectors(self):
        rng = np.random.default_rng(3)
        imgs = rand_images(rng, 12, 10, 10)
        model = pca_train(imgs)  # r=12 < N=100: Gram path
        x = np.stack([im.reshape(-1) for im in imgs])
        d = x - x.mean(axis=0)
        cov = d.T @ d / len(x)
        lam, u = np.linalg.eigh(cov)
        order = np.argsort(lam)[::-1][:model.n_components]
        for row, lam_d, u_col in zip(model.basis, lam[order], u[:, order].T):
            match = min(np.abs(row - u_col).max(), np.abs(row + u_col).max())
            assert match < 1e-8

    def test_reconstruction_on_training_span(self):
        rng = np.random.default_rng(4)
        imgs = rand_images(rng, 6, 5, 5)
        model = pca_train(imgs)
        flat = imgs[2].reshape(-1)
        y = pca_project(model, imgs[2]).values
        recon = model.basis.T @ y + model.mean
        np.testing.assert_allclose(recon, flat, atol=1e-6)

    def test_whitened_covariance_is_identity(self):
        rng = np.random.default_rng(5)
        imgs = rand_images(rng, 20, 16, 16)
        model = pca_train(imgs)
        feats = np.stack([pca_project(model, im, whiten=True).values
                          for im in imgs])
        cov = feats.T @ feats / len(feats)  # whitened features have zero mean
        assert np.abs(cov - np.eye(model.n_components)).max() < 1e-8

    def test_whiten_ratio(self):
        rng = np.random.default_rng(6)
        imgs = rand_images(rng, 5, 4, 4)
        model = pca_train(imgs)
        plain = pca_project(model, imgs[0]).values
        white = pca_project(model, imgs[0], whiten=True).values
        np.testing.assert_allclose(white, plain / np.sqrt(model.eigenvalues),
                                   atol=1e-12)

    def test_rejects_single_image(self):
        with pytest.raises(ValueError):
            pca_train([np.zeros((4, 4))])

    def test_rejects_dim_mismatch(self):
        rng = np.random.default_rng(7)
        model = pca_train(rand_images(rng, 3, 4, 4))
        with pytest.raises(ValueError):
            pca_project(model, np.zeros((5, 5)))


class TestDct2:
    def test_one_pixel(self):
        np.testing.assert_allclose(dct2(np.array([[7.0]])), [[7.0]])

    def test_constant_image_dc_only(self):
        img = np.full((6, 9), 3.0)
        y = dct2(img)
        assert abs(y[0, 0] - 3.0 * np.sqrt(6 * 9)) < 1e-9
        y[0, 0] = 0
        assert np.abs(y).max() < 1e-9

    def test_matches_loop_oracle_and_parseval(self):
        rng = np.random.default_rng(8)
        x = rng.uniform(-1, 1, size=(8, 8))
        y = dct2(x)
        np.testing.assert_allclose(y, dct2_loops(x), atol=1e-9)
        assert abs((y**2).sum() - (x**2).sum()) < 1e-9


class TestWaveletSpec:
    def test_all_shipped_filters_are_orthonormal(self):
        for name in available_wavelets():
            w = get_wavelet(name)  # constructor enforces the invariants
            assert abs(w.lowpass.sum() - np.sqrt(2)) < 1e-10

    def test_highpass_relation_daubechies12(self):
        w = get_wavelet("daubechies-12")
        h = w.lowpass
        g = w.highpass
        k = len(h)
        for i in range(k):
            assert g[i] == pytest.approx((-1.0)**(i + 1) * h[k - 1 - i], abs=0)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            get_wavelet("meyer")


class TestDwt2:
    def test_haar_constant(self):
        img = np.full((8, 8), 5.0)
        res = dwt2(img, get_wavelet("haar"), 2)
        for dh, dv, dd in res.details:
            assert np.abs(dh).max() < 1e-12
            assert np.abs(dv).max() < 1e-12
            assert np.abs(dd).max() < 1e-12
        np.testing.assert_allclose(res.approx, 2**2 * 5.0, atol=1e-12)

    @pytest.mark.parametrize("name", ["haar", "daubechies-12", "symlet-16"])
    def test_parseval(self, name):
        rng = np.random.default_rng(9)
        img = rng.uniform(-1, 1, size=(16, 16))
        res = dwt2(img, get_wavelet(name), 2)
        total = (res.approx**2).sum() + sum(
            (dh**2).sum() + (dv**2).sum() + (dd**2).sum()
            for dh, dv, dd in res.details)
        assert abs(total - (img**2).sum()) < 1e-9

    def test_packed_preserves_coefficients(self):
        rng = np.random.default_rng(10)
        img = rng.uniform(0, 1, size=(8, 8))
        res = dwt2(img, get_wavelet("haar"), 2)
        packed = res.packed()
        assert packed.shape == img.shape
        assert abs((packed**2).sum() - (img**2).sum()) < 1e-9
        np.testing.assert_array_equal(packed[:2, :2], res.approx)

    def test_too_deep(self):
        with pytest.raises(ValueError):
            dwt2(np.zeros((6, 6)), get_wavelet("haar"), 2)


class TestWpd:
    def test_level1_equals_dwt2(self):
        rng = np.random.default_rng(11)
        img = rng.uniform(0, 1, size=(8, 8))
        w = get_wavelet("daubechies-4")
        bands = wpd(img, w, 1)
        res = dwt2(img, w, 1)
        assert len(bands) == 4
        np.testing.assert_array_equal(bands[0], res.approx)
        for band, ref in zip(bands[1:], res.details[0]):
            np.testing.assert_array_equal(band, ref)

    def test_counts_and_parseval(self):
        rng = np.random.default_rng(12)
        img = rng.uniform(-1, 1, size=(16, 16))
        for level in (1, 2):
            bands = wpd(img, get_wavelet("symlet-16"), level)
            assert len(bands) == 4**level
            assert sum(b.size for b in bands) == img.size
            energy = sum((b**2).sum() for b in bands)
            assert abs(energy - (img**2).sum()) < 1e-9

    def test_constant_only_first_band(self):
        img = np.full((8, 8), 2.0)
        bands = wpd(img, get_wavelet("haar"), 2)
        assert np.abs(bands[0]).max() > 0
        for b in bands[1:]:
            assert np.abs(b).max() < 1e-12


class TestWpdPca:
    def test_level0_equals_plain_pca(self):
        rng = np.random.default_rng(13)
        imgs = rand_images(rng, 6, 8, 8)
        w = get_wavelet("haar")
        model = wpd_pca_train(imgs, w, 0)
        plain = pca_train(imgs)
        assert model.n_subbands == 1
        np.testing.assert_allclose(model.submodels[0].basis, plain.basis,
                                   atol=1e-12)
        y1 = wpd_pca_project(model, imgs[0]).values
        y2 = pca_project(plain, imgs[0]).values
        np.testing.assert_allclose(y1, y2, atol=1e-12)

    def test_subband_dimension_arithmetic(self):
        rng = np.random.default_rng(14)
        imgs = rand_images(rng, 5, 16, 16)
        model = wpd_pca_train(imgs, get_wavelet("haar"), 2)
        assert model.n_subbands == 16
        for sub in model.submodels:
            assert sub.mean.shape == (16,)  # (16/4)^2

    def test_merged_order_against_sort_oracle(self):
        rng = np.random.default_rng(15)
        imgs = rand_images(rng, 8, 8, 8)
        model = wpd_pca_train(imgs, get_wavelet("haar"), 1)
        pooled = np.concatenate([m.eigenvalues for m in model.submodels])
        merged = model.merged_eigenvalues
        np.testing.assert_array_equal(merged, np.sort(pooled)[::-1])
        # projecting reorders coordinates exactly by the pooled eigenvalues
        y = wpd_pca_project(model, imgs[0]).values
        parts = []
        for band, sub in zip(wpd(imgs[0], get_wavelet("haar"), 1),
                             model.submodels):
            parts.append(sub.basis @ (band.reshape(-1) - sub.mean))
        concat = np.concatenate(parts)
        np.testing.assert_array_equal(y, concat[model.merged_order])

    def test_mean_image_projects_to_zero(self):
        rng = np.random.default_rng(16)
        imgs = rand_images(rng, 6, 8, 8)
        model = wpd_pca_train(imgs, get_wavelet("daubechies-4"), 1)
        y = wpd_pca_project(model, np.mean(imgs, axis=0)).values
        np.testing.assert_allclose(y, 0, atol=1e-9)

    def test_incremental_add_matches_retrain(self):
        rng = np.random.default_rng(17)
        imgs = rand_images(rng, 9, 8, 8)
        w = get_wavelet("haar")
        base = wpd_pca_train(imgs[:6], w, 1)
        grown = wpd_pca_add(base, imgs[6:])
        fresh = wpd_pca_train(imgs, w, 1)
        assert grown.trained_on == 9
        np.testing.assert_allclose(grown.merged_eigenvalues,
                                   fresh.merged_eigenvalues, atol=1e-8)
        ref = wpd_pca_project(fresh, imgs[0]).values
        got = wpd_pca_project(grown, imgs[0]).values
        np.testing.assert_allclose(np.abs(got), np.abs(ref), atol=1e-6)

    def test_incremental_remove_matches_retrain(self):
        rng = np.random.default_rng(18)
        imgs = rand_images(rng, 8, 8, 8)
        w = get_wavelet("haar")
        full = wpd_pca_train(imgs, w, 1)
        shrunk = wpd_pca_remove(full, imgs[6:])
        fresh = wpd_pca_train(imgs[:6], w, 1)
        np.testing.assert_allclose(shrunk.merged_eigenvalues,
                                   fresh.merged_eigenvalues, atol=1e-8)


class TestSelectFeatures:
    def test_full_length_identity(self):
        rng = np.random.default_rng(19)
        vecs = rng.standard_normal((10, 6))
        idx = select_features(list(vecs), 6, "variance")
        assert sorted(idx) == list(range(6))

    def test_constant_coordinate_never_selected(self):
        rng = np.random.default_rng(20)
        vecs = rng.standard_normal((10, 5))
        vecs[:, 2] = 3.0
        idx = select_features(list(vecs), 4, "variance")
        assert 2 not in idx

    def test_matches_bruteforce_top_variance(self):
        rng = np.random.default_rng(21)
        vecs = rng.standard_normal((10, 32))
        idx = select_features(list(vecs), 8, "variance")
        var = np.stack(vecs).var(axis=0)
        brute = sorted(range(32), key=lambda i: (-var[i], i))[:8]
        assert list(idx) == brute

    def test_eigenvalue_criterion_prefix(self):
        rng = np.random.default_rng(22)
        vecs = rng.standard_normal((5, 9))
        np.testing.assert_array_equal(
            select_features(list(vecs), 4, "eigenvalue"), np.arange(4))

    def test_rejects_overlong(self):
        with pytest.raises(ValueError):
            select_features([np.zeros(3)] * 4, 5, "variance")


class TestPersistence:
    def test_pca_round_trip(self, tmp_path):
        rng = np.random.default_rng(23)
        imgs = rand_images(rng, 5, 6, 6)
        model = pca_train(imgs)
        save_model(model, tmp_path / "m")
        loaded = load_model(tmp_path / "m")
        assert isinstance(loaded, PcaModel)
        np.testing.assert_array_equal(loaded.basis, model.basis)
        np.testing.assert_array_equal(loaded.mean, model.mean)
        y1 = pca_project(model, imgs[1]).values
        y2 = pca_project(loaded, imgs[1]).values
        np.testing.assert_array_equal(y1, y2)

    def test_wpdpca_round_trip(self, tmp_path):
        rng = np.random.default_rng(24)
        imgs = rand_images(rng, 6, 8, 8)
        model = wpd_pca_train(imgs, get_wavelet("symlet-16"), 1)
        save_model(model, tmp_path / "m")
        loaded = load_model(tmp_path / "m")
        y1 = wpd_pca_project(model, imgs[2]).values
        y2 = wpd_pca_project(loaded, imgs[2]).values
        np.testing.assert_array_equal(y1, y2)
        grown = wpd_pca_add(loaded, rand_images(rng, 2, 8, 8))
        assert grown.trained_on == 8


class TestEllipticalMask:
    def test_center_inside_corners_outside(self):
        mask = elliptical_mask(20, 30)
        assert mask[10, 15]
        assert not mask[0, 0]
        assert not mask[19, 29]

    def test_area_close_to_analytic(self):
        mask = elliptical_mask(50, 40)
        assert abs(mask.sum() - np.pi * 25 * 20) < 60


@given(st.integers(0, 5000))
@settings(max_examples=20, deadline=None)
def test_wpd_energy_property(seed):
    rng = np.random.default_rng(seed)
    img = rng.uniform(-5, 5, size=(8, 8))
    name = available_wavelets()[seed % len(available_wavelets())]
    bands = wpd(img, get_wavelet(name), 1)
    energy = sum((b**2).sum() for b in bands)
    assert abs(energy - (img**2).sum()) < 1e-9
