"""Feature-extraction transforms for recognition: PCA (with the small-sample
Gram trick and whitening), orthonormal 2-D DCT, 2-D DWT, full wavelet packet
decomposition, and the composite WPD+PCA trainer/projector whose features are
ranked by pooled eigenvalues.

Wavelet analysis uses periodic (circular) extension with dyadic downsampling
keeping odd-indexed samples, so every decomposition here is exactly
orthonormal and Parseval holds to rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._wavelet_tables import LOWPASS
from .image import as_image

__all__ = [
    "PcaModel",
    "WaveletSpec",
    "Dwt2Result",
    "WpdPcaModel",
    "FeatureVector",
    "pca_train",
    "pca_project",
    "dct2",
    "dwt2",
    "wpd",
    "wpd_pca_train",
    "wpd_pca_add",
    "wpd_pca_remove",
    "wpd_pca_project",
    "select_features",
    "elliptical_mask",
    "get_wavelet",
    "available_wavelets",
    "save_model",
    "load_model",
]

EIG_CUTOFF = 1e-12          # keep eigenpairs with lam > lam_max * EIG_CUTOFF
STATS_DIM_CAP = 4096        # keep sufficient statistics up to this vector size


# ---------------------------------------------------------------------------
# eigenspaces

@dataclass
class PcaModel:
    """Trained eigenspace: rows of `basis` are unit eigenvectors sorted by
    descending eigenvalue; `mean` is the training mean."""

    mean: np.ndarray
    basis: np.ndarray
    eigenvalues: np.ndarray
    trained_on: int
    shape: tuple[int, int]

    @property
    def n_components(self) -> int:
        return len(self.eigenvalues)


@dataclass
class FeatureVector:
    values: np.ndarray
    provenance: str = ""


def _sign_convention(basis: np.ndarray) -> np.ndarray:
    """Flip each eigenvector so its largest-magnitude component is positive;
    canonical C layout so projections are bit-stable across persistence."""
    basis = np.ascontiguousarray(basis)
    if basis.size == 0:
        return basis
    idx = np.abs(basis).argmax(axis=1)
    signs = np.sign(basis[np.arange(len(basis)), idx])
    signs[signs == 0] = 1.0
    return basis * signs[:, None]


def _fit_eigenspace(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mean, eigenbasis rows and eigenvalues of the 1/r sample covariance.

    Uses the r x r Gram problem when the sample count is below the
    dimensionality, otherwise the direct covariance.
    """
    r, n = x.shape
    mean = x.mean(axis=0)
    d = x - mean
    if r < n:
        gram = (d @ d.T) / r
        lam, w = np.linalg.eigh(gram)
        order = np.argsort(lam)[::-1]
        lam = lam[order]
        w = w[:, order]
        keep = lam > max(lam[0], 0.0) * EIG_CUTOFF
        lam = lam[keep]
        w = w[:, keep]
        # map Gram eigenvectors back through the data and renormalize
        basis = (d.T @ w) / np.sqrt(lam * r)
        basis = basis.T
    else:
        cov = (d.T @ d) / r
        lam, u = np.linalg.eigh(cov)
        order = np.argsort(lam)[::-1]
        lam = lam[order]
        u = u[:, order]
        keep = lam > max(lam[0], 0.0) * EIG_CUTOFF
        lam = lam[keep]
        basis = u[:, keep].T
    return mean, _sign_convention(basis), lam


def _solve_from_stats(s1: np.ndarray, s2: np.ndarray, r: int):
    """Eigenspace from sufficient statistics (sum, sum of outer products)."""
    mean = s1 / r
    cov = s2 / r - np.outer(mean, mean)
    lam, u = np.linalg.eigh(cov)
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    u = u[:, order]
    keep = lam > max(lam[0], 0.0) * EIG_CUTOFF
    return mean, _sign_convention(u[:, keep].T), lam[keep]


def _flatten_images(images) -> tuple[np.ndarray, tuple[int, int]]:
    imgs = [as_image(im) for im in images]
    if len(imgs) < 2:
        raise ValueError("training needs at least 2 images")
    shape = imgs[0].shape
    if any(im.shape != shape for im in imgs):
        raise ValueError("training images must share dimensions")
    return np.stack([im.reshape(-1) for im in imgs]), shape


def pca_train(images) -> PcaModel:
    """Eigenspace of row-major flattened images (classic eigenface training)."""
    x, shape = _flatten_images(images)
    mean, basis, lam = _fit_eigenspace(x)
    return PcaModel(mean=mean, basis=basis, eigenvalues=lam,
                    trained_on=len(x), shape=shape)


def pca_project(model: PcaModel, img, whiten: bool = False) -> FeatureVector:
    """Y = T(X - m); whitening scales components by 1/sqrt(eigenvalue)."""
    img = np.asarray(img, dtype=np.float64)
    flat = img.reshape(-1)
    if flat.shape[0] != model.mean.shape[0]:
        raise ValueError(
            f"image size {flat.shape[0]} does not match model {model.mean.shape[0]}")
    y = model.basis @ (flat - model.mean)
    name = "pca"
    if whiten:
        if np.any(model.eigenvalues <= 0):
            raise ValueError("whitening requires strictly positive eigenvalues")
        y = y / np.sqrt(model.eigenvalues)
        name = "pca+whiten"
    return FeatureVector(y, name)


# ---------------------------------------------------------------------------
# discrete cosine transform

def dct2(img) -> np.ndarray:
    """Orthonormal 2-D DCT-II (the alpha-normalized textbook formula)."""
    from scipy import fft as sfft

    return sfft.dctn(as_image(img), type=2, norm="ortho")


# ---------------------------------------------------------------------------
# wavelets

@dataclass
class WaveletSpec:
    """Orthogonal wavelet: lowpass h plus the derived highpass
    g(k) = (-1)^(k+1) h(K-1-k)."""

    name: str
    lowpass: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.lowpass, dtype=np.float64)
        if h.ndim != 1 or len(h) % 2:
            raise ValueError("lowpass filter must be 1-D of even length")
        if abs(h.sum() - np.sqrt(2.0)) > 1e-10:
            raise ValueError(f"{self.name}: filter sum is not sqrt(2)")
        k = len(h)
        for m in range(k // 2):
            target = 1.0 if m == 0 else 0.0
            if abs(np.dot(h[:k - 2 * m], h[2 * m:]) - target) > 1e-10:
                raise ValueError(f"{self.name}: filter is not orthonormal")
        self.lowpass = h

    @property
    def highpass(self) -> np.ndarray:
        h = self.lowpass
        k = len(h)
        signs = np.array([(-1.0) ** (i + 1) for i in range(k)])
        return signs * h[::-1]


def available_wavelets() -> list[str]:
    return sorted(LOWPASS)


def get_wavelet(name: str) -> WaveletSpec:
    """Look up a shipped filter set by name, e.g. "haar", "symlet-16"."""
    if name not in LOWPASS:
        raise ValueError(f"unknown wavelet {name!r}; known: {available_wavelets()}")
    return WaveletSpec(name, np.array(LOWPASS[name]))


def _analysis_axis(a: np.ndarray, filt: np.ndarray, axis: int) -> np.ndarray:
    """Circular convolution along `axis` followed by keeping odd indices.

    Polyphase form: out(t) = sum_j filt(2j) a_odd(t-j) + filt(2j+1) a_even(t-j).
    """
    m = a.shape[axis]
    if m % 2:
        raise ValueError("axis length must be even")
    a = np.moveaxis(a, axis, -1)
    a_e = a[..., 0::2]
    a_o = a[..., 1::2]
    out = filt[0] * a_o + filt[1] * a_e
    for j in range(1, len(filt) // 2):
        out += filt[2 * j] * np.roll(a_o, j, axis=-1)
        out += filt[2 * j + 1] * np.roll(a_e, j, axis=-1)
    return np.moveaxis(out, -1, axis)


def _split4(a: np.ndarray, w: WaveletSpec) -> tuple[np.ndarray, ...]:
    """One analysis level: (approx, horiz detail, vert detail, diag detail).

    Rows are filtered first (columns downsampled), then columns (rows
    downsampled); works on a single image or a batch stacked on axis 0.
    """
    h = w.lowpass
    g = w.highpass
    lo = _analysis_axis(a, h, axis=-1)
    hi = _analysis_axis(a, g, axis=-1)
    return (_analysis_axis(lo, h, axis=-2),
            _analysis_axis(lo, g, axis=-2),
            _analysis_axis(hi, h, axis=-2),
            _analysis_axis(hi, g, axis=-2))


def _check_divisible(shape: tuple[int, int], levels: int) -> None:
    if levels < 0:
        raise ValueError("levels must be >= 0")
    d = 2**levels
    if shape[0] % d or shape[1] % d:
        raise ValueError(
            f"image {shape} not divisible by 2^{levels} in both dimensions")


@dataclass
class Dwt2Result:
    """Classic pyramid decomposition: approximation at the deepest level and
    (horizontal, vertical, diagonal) details per level, index 0 = level 1."""

    approx: np.ndarray
    details: list[tuple[np.ndarray, np.ndarray, np.ndarray]]

    @property
    def levels(self) -> int:
        return len(self.details)

    def packed(self) -> np.ndarray:
        """All subbands written into one image-sized matrix: at each level the
        working quadrant splits into approx (top-left), horizontal detail
        (top-right), vertical (bottom-left) and diagonal (bottom-right)."""
        h1, v1, d1 = self.details[0]
        rows = h1.shape[0] * 2
        cols = h1.shape[1] * 2
        out = np.zeros((rows, cols))
        cur = self.approx
        for h, v, d in reversed(self.details[1:]):
            r, c = h.shape
            block = np.zeros((2 * r, 2 * c))
            block[:r, :c] = cur
            block[:r, c:] = h
            block[r:, :c] = v
            block[r:, c:] = d
            cur = block
        r, c = h1.shape
        out[:r, :c] = cur
        out[:r, c:] = h1
        out[r:, :c] = v1
        out[r:, c:] = d1
        return out


def dwt2(img, w: WaveletSpec, levels: int) -> Dwt2Result:
    """Iterated 2-D DWT: only the approximation is re-decomposed."""
    img = as_image(img)
    _check_divisible(img.shape, levels)
    if levels < 1:
        raise ValueError("dwt2 needs at least one level")
    details = []
    a = img
    for _ in range(levels):
        a, dh, dv, dd = _split4(a, w)
        details.append((dh, dv, dd))
    return Dwt2Result(approx=a, details=details)


def wpd(img, w: WaveletSpec, level: int) -> list[np.ndarray]:
    """Full wavelet packet tree: every subband is re-decomposed at every
    level.  Returns the 4^level subbands; the children of node i appear at
    4i (approx), 4i+1 (horizontal), 4i+2 (vertical), 4i+3 (diagonal)."""
    img = as_image(img)
    _check_divisible(img.shape, level)
    nodes = [img]
    for _ in range(level):
        nodes = [part for node in nodes for part in _split4(node, w)]
    return nodes


def _wpd_batch(stack: np.ndarray, w: WaveletSpec, level: int) -> np.ndarray:
    """Decompose a (r, rows, cols) stack; returns (4^level, r, subband_size)
    with subbands flattened row-major."""
    nodes = [stack]
    for _ in range(level):
        nodes = [part for node in nodes for part in _split4(node, w)]
    r = stack.shape[0]
    return np.stack([n.reshape(r, -1) for n in nodes])


# ---------------------------------------------------------------------------
# WPD + PCA

@dataclass
class WpdPcaModel:
    """Per-subband eigenspaces with a global feature order obtained by
    sorting the pooled eigenvalues of all subbands."""

    wavelet: str
    level: int
    shape: tuple[int, int]
    submodels: list[PcaModel]
    trained_on: int
    # sufficient statistics per subband (sum, sum of outer products) kept for
    # exact incremental add/remove when the subband dimension allows it
    stats: list[tuple[np.ndarray, np.ndarray]] | None = None
    merged_order: np.ndarray = field(init=False)
    merged_eigenvalues: np.ndarray = field(init=False)

    def __post_init__(self):
        pooled = np.concatenate([m.eigenvalues for m in self.submodels])
        self.merged_order = np.argsort(-pooled, kind="stable")
        self.merged_eigenvalues = pooled[self.merged_order]

    @property
    def n_subbands(self) -> int:
        return 4**self.level


def wpd_pca_train(images, w: WaveletSpec, level: int) -> WpdPcaModel:
    """Decompose the training set into 4^level subbands and train one
    eigenspace per subband; feature order pools all eigenvalues."""
    x, shape = _flatten_images(images)
    _check_divisible(shape, level)
    r = len(x)
    stack = x.reshape(r, *shape)
    bands = _wpd_batch(stack, w, level)          # (k, r, n_sub)
    n_sub = bands.shape[2]
    keep_stats = n_sub <= STATS_DIM_CAP
    sub_shape = (shape[0] // 2**level, shape[1] // 2**level)

    submodels = []
    stats = [] if keep_stats else None
    for band in bands:
        if keep_stats:
            stats.append((band.sum(axis=0), band.T @ band))
        mean, basis, lam = _fit_eigenspace(band)
        submodels.append(PcaModel(mean=mean, basis=basis, eigenvalues=lam,
                                  trained_on=r, shape=sub_shape))
    return WpdPcaModel(wavelet=w.name, level=level, shape=shape,
                       submodels=submodels, trained_on=r, stats=stats)


def _rebuild_from_stats(model: WpdPcaModel, stats, r: int) -> WpdPcaModel:
    sub_shape = model.submodels[0].shape
    submodels = []
    for s1, s2 in stats:
        mean, basis, lam = _solve_from_stats(s1, s2, r)
        submodels.append(PcaModel(mean=mean, basis=basis, eigenvalues=lam,
                                  trained_on=r, shape=sub_shape))
    return WpdPcaModel(wavelet=model.wavelet, level=model.level,
                       shape=model.shape, submodels=submodels,
                       trained_on=r, stats=stats)


def _update_stats(model: WpdPcaModel, images, sign: float) -> WpdPcaModel:
    if model.stats is None:
        raise ValueError("model was trained without sufficient statistics; "
                         "incremental updates unavailable at this size")
    imgs = [as_image(im) for im in images]
    if not imgs:
        return model
    if any(im.shape != model.shape for im in imgs):
        raise ValueError("image dimensions do not match the model")
    stack = np.stack(imgs)
    bands = _wpd_batch(stack, get_wavelet(model.wavelet), model.level)
    r_new = model.trained_on + int(sign) * len(imgs)
    if r_new < 2:
        raise ValueError("cannot remove: fewer than 2 images would remain")
    stats = []
    for (s1, s2), band in zip(model.stats, bands):
        stats.append((s1 + sign * band.sum(axis=0), s2 + sign * band.T @ band))
    return _rebuild_from_stats(model, stats, r_new)


def wpd_pca_add(model: WpdPcaModel, images) -> WpdPcaModel:
    """Exact incremental training: fold new images into the per-subband
    statistics and re-solve the eigenproblems."""
    return _update_stats(model, images, +1.0)


def wpd_pca_remove(model: WpdPcaModel, images) -> WpdPcaModel:
    """Exact removal of previously trained images (statistics subtraction)."""
    return _update_stats(model, images, -1.0)


def wpd_pca_project(model: WpdPcaModel, img, whiten: bool = False) -> FeatureVector:
    """Decompose, project into every subband eigenspace, concatenate and
    reorder so entry i corresponds to the i-th largest pooled eigenvalue."""
    img = as_image(img)
    if img.shape != model.shape:
        raise ValueError(f"image shape {img.shape} does not match model {model.shape}")
    bands = wpd(img, get_wavelet(model.wavelet), model.level)
    parts = []
    for band, sub in zip(bands, model.submodels):
        y = sub.basis @ (band.reshape(-1) - sub.mean)
        if whiten:
            if np.any(sub.eigenvalues <= 0):
                raise ValueError("whitening requires positive eigenvalues")
            y = y / np.sqrt(sub.eigenvalues)
        parts.append(y)
    merged = np.concatenate(parts)[model.merged_order]
    name = f"wpdpca[{model.wavelet},l={model.level}]"
    if whiten:
        name += "+whiten"
    return FeatureVector(merged, name)


# ---------------------------------------------------------------------------
# feature selection and masking utilities

def select_features(train_vectors, n: int, criterion: str = "variance") -> np.ndarray:
    """Indices of the n features to keep.

    "eigenvalue": the first n coordinates (vectors are already eigenvalue
    ordered).  "variance": the n coordinates with the largest variance over
    the training vectors, ties resolved toward the lower index.
    """
    if hasattr(train_vectors[0], "values"):
        mat = np.stack([v.values for v in train_vectors])
    else:
        mat = np.stack([np.asarray(v, dtype=np.float64) for v in train_vectors])
    if not 0 < n <= mat.shape[1]:
        raise ValueError(f"cannot select {n} of {mat.shape[1]} features")
    if criterion == "eigenvalue":
        return np.arange(n)
    if criterion == "variance":
        var = mat.var(axis=0)
        return np.argsort(-var, kind="stable")[:n]
    raise ValueError(f"unknown criterion {criterion!r}")


def elliptical_mask(rows: int, cols: int) -> np.ndarray:
    """Inscribed elliptical mask (true inside), for face-crop preprocessing."""
    cy, cx = (rows - 1) / 2.0, (cols - 1) / 2.0
    yy, xx = np.mgrid[:rows, :cols]
    return ((xx - cx) / (cols / 2.0))**2 + ((yy - cy) / (rows / 2.0))**2 <= 1.0


# ---------------------------------------------------------------------------
# persistence: JSON manifest + little-endian float64 blob

def save_model(model, directory) -> None:
    from .serialize import dump_json, write_f64

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if isinstance(model, PcaModel):
        manifest = {
            "type": "pca",
            "shape": list(model.shape),
            "trained_on": model.trained_on,
            "n_components": model.n_components,
        }
        arrays = [model.mean, model.basis, model.eigenvalues]
    elif isinstance(model, WpdPcaModel):
        manifest = {
            "type": "wpdpca",
            "wavelet": model.wavelet,
            "level": model.level,
            "shape": list(model.shape),
            "trained_on": model.trained_on,
            "n_components": [m.n_components for m in model.submodels],
            "has_stats": model.stats is not None,
        }
        arrays = []
        for m in model.submodels:
            arrays += [m.mean, m.basis, m.eigenvalues]
        if model.stats is not None:
            for s1, s2 in model.stats:
                arrays += [s1, s2]
    else:
        raise TypeError(f"cannot persist {type(model).__name__}")
    dump_json(manifest, directory / "manifest.json")
    write_f64(directory / "data.bin", *arrays)


def load_model(directory):
    from .serialize import read_f64

    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    shape = tuple(manifest["shape"])
    n = shape[0] * shape[1]
    if manifest["type"] == "pca":
        nc = manifest["n_components"]
        mean, basis, lam = read_f64(directory / "data.bin",
                                    [(n,), (nc, n), (nc,)])
        return PcaModel(mean=mean, basis=basis, eigenvalues=lam,
                        trained_on=manifest["trained_on"], shape=shape)
    if manifest["type"] == "wpdpca":
        level = manifest["level"]
        k = 4**level
        n_sub = n // k
        sub_shape = (shape[0] // 2**level, shape[1] // 2**level)
        shapes = []
        for nc in manifest["n_components"]:
            shapes += [(n_sub,), (nc, n_sub), (nc,)]
        if manifest["has_stats"]:
            shapes += [(n_sub,), (n_sub, n_sub)] * k
        blobs = read_f64(directory / "data.bin", shapes)
        submodels = []
        for i, nc in enumerate(manifest["n_components"]):
            mean, basis, lam = blobs[3 * i:3 * i + 3]
            submodels.append(PcaModel(mean=mean, basis=basis, eigenvalues=lam,
                                      trained_on=manifest["trained_on"],
                                      shape=sub_shape))
        stats = None
        if manifest["has_stats"]:
            rest = blobs[3 * len(submodels):]
            stats = [(rest[2 * i], rest[2 * i + 1]) for i in range(k)]
        return WpdPcaModel(wavelet=manifest["wavelet"], level=level,
                           shape=shape, submodels=submodels,
                           trained_on=manifest["trained_on"], stats=stats)
    raise ValueError(f"unknown model type {manifest['type']!r}")
