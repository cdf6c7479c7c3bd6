"""Core raster operations shared by every pipeline stage.

Grayscale images are plain 2-D float64 numpy arrays.  "Integer mode" means
every pixel holds a whole value in [0, 255] (the PGM interchange range).
Binary images are 2-D arrays of {0, 1} (bool or numeric).  All operations
are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

__all__ = [
    "Region",
    "Spectrum",
    "as_image",
    "as_binary",
    "iround",
    "histogram_equalize",
    "gaussian_smooth",
    "median_filter",
    "resize",
    "resize_to",
    "fft2p",
    "ifft2p",
    "conv2_fft",
    "lsum2",
    "canny",
    "morph_close",
    "label_regions",
    "polygon_mask",
    "fill_holes",
]

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def as_image(img) -> np.ndarray:
    """Validate and return a 2-D float64 image."""
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D image, got shape {a.shape}")
    return a


def as_binary(bw) -> np.ndarray:
    """Validate and return a 2-D boolean mask."""
    a = np.asarray(bw)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D binary image, got shape {a.shape}")
    if a.dtype != bool:
        vals = np.unique(a)
        if not np.all(np.isin(vals, (0, 1))):
            raise ValueError("binary image must contain only 0/1 values")
        a = a.astype(bool)
    return a


def iround(x):
    """Round half away from zero (single fixed convention for integer images)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


@dataclass
class Region:
    """An 8-connected component of a binary image."""

    label: int
    area: int
    bbox: tuple[int, int, int, int]  # (x, y, w, h)
    centroid: tuple[float, float]    # (cx, cy)
    mean_gray: float = 0.0

    @property
    def x(self) -> int:
        return self.bbox[0]

    @property
    def y(self) -> int:
        return self.bbox[1]

    @property
    def w(self) -> int:
        return self.bbox[2]

    @property
    def h(self) -> int:
        return self.bbox[3]

    @property
    def cx(self) -> float:
        return self.centroid[0]

    @property
    def cy(self) -> float:
        return self.centroid[1]

    @property
    def aspect(self) -> float:
        return self.w / self.h


def histogram_equalize(img, bins: int = 256) -> np.ndarray:
    """Cumulative-histogram equalization of an integer-mode image.

    The remapping is monotone: equal inputs map to equal outputs and a
    larger input never maps to a smaller output.
    """
    img = as_image(img)
    if not 2 <= bins <= 256:
        raise ValueError(f"bins must be in [2, 256], got {bins}")
    # bin index of each pixel over the fixed [0, 255] range
    idx = np.clip((img * bins / 256.0).astype(np.int64), 0, bins - 1)
    counts = np.bincount(idx.ravel(), minlength=bins)
    cdf = np.cumsum(counts) / img.size
    return iround(255.0 * cdf[idx])


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = int(np.ceil(3.0 * sigma))
    k = np.exp(-0.5 * (np.arange(-radius, radius + 1) / sigma) ** 2)
    return k / k.sum()


def gaussian_smooth(img, sigma: float) -> np.ndarray:
    """Separable Gaussian filter, kernel truncated at +-3 sigma, edges replicated."""
    img = as_image(img)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    k = _gaussian_kernel(sigma)
    out = ndimage.convolve1d(img, k, axis=0, mode="nearest")
    return ndimage.convolve1d(out, k, axis=1, mode="nearest")


def median_filter(img, win_w: int, win_h: int) -> np.ndarray:
    """Median over a win_h x win_w window, edges replicated."""
    img = as_image(img)
    if win_w % 2 == 0 or win_h % 2 == 0:
        raise ValueError(f"window dimensions must be odd, got {win_w}x{win_h}")
    return ndimage.median_filter(img, size=(win_h, win_w), mode="nearest")


def resize(img, scale: float, method: str = "bilinear") -> np.ndarray:
    """Resample to round(dims * scale); bilinear by default, "fft" optional."""
    img = as_image(img)
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    rows = int(iround(img.shape[0] * scale))
    cols = int(iround(img.shape[1] * scale))
    if rows < 1 or cols < 1:
        raise ValueError(f"resize by {scale} would produce an empty image")
    return resize_to(img, rows, cols, method=method)


def resize_to(img, rows: int, cols: int, method: str = "bilinear") -> np.ndarray:
    """Resample to an exact target shape."""
    img = as_image(img)
    if method == "fft":
        return _resize_fft(img, rows, cols)
    if method != "bilinear":
        raise ValueError(f"unknown resize method {method!r}")
    if (rows, cols) == img.shape:
        return img.copy()
    r0, c0 = img.shape
    # corner-aligned grids: linear ramps resample exactly
    ys = (np.arange(rows) * ((r0 - 1) / (rows - 1)) if rows > 1
          else np.full(1, (r0 - 1) / 2))
    xs = (np.arange(cols) * ((c0 - 1) / (cols - 1)) if cols > 1
          else np.full(1, (c0 - 1) / 2))
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, r0 - 1)
    x1 = np.minimum(x0 + 1, c0 - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    top = img[np.ix_(y0, x0)] * (1 - fx) + img[np.ix_(y0, x1)] * fx
    bot = img[np.ix_(y1, x0)] * (1 - fx) + img[np.ix_(y1, x1)] * fx
    return top * (1 - fy) + bot * fy


def _resize_fft(img, rows: int, cols: int) -> np.ndarray:
    """Spectral crop/pad resampling (the optional pyramid mode)."""
    from scipy import fft as sfft

    r0, c0 = img.shape
    spec = sfft.fftshift(sfft.fft2(img))
    out = np.zeros((rows, cols), dtype=complex)
    rr = min(rows, r0)
    cc = min(cols, c0)
    sr0, sc0 = (r0 - rr) // 2, (c0 - cc) // 2
    dr0, dc0 = (rows - rr) // 2, (cols - cc) // 2
    out[dr0:dr0 + rr, dc0:dc0 + cc] = spec[sr0:sr0 + rr, sc0:sc0 + cc]
    scale = (rows * cols) / (r0 * c0)
    return np.real(sfft.ifft2(sfft.ifftshift(out))) * scale


# ---------------------------------------------------------------------------
# padded FFT pair used by the correlation pre-detector

_SMOOTH_SIZES: list[int] = sorted(
    {2**a * 3**b * 5**c for a in range(17) for b in range(11) for c in range(8)
     if 2**a * 3**b * 5**c <= 100_000}
)


def _next_smooth(n: int) -> int:
    """Smallest 5-smooth integer >= n (FFT sizes with fast plans)."""
    from bisect import bisect_left

    i = bisect_left(_SMOOTH_SIZES, n)
    if i == len(_SMOOTH_SIZES):
        raise ValueError(f"FFT size {n} too large")
    return _SMOOTH_SIZES[i]


@dataclass
class Spectrum:
    """rfft2 of a zero-padded image plus the padded shape needed to invert it."""

    data: np.ndarray
    shape: tuple[int, int]


def _pad_shape(m1: int, n1: int, m2: int, n2: int) -> tuple[int, int]:
    return _next_smooth(m1 + m2 - 1), _next_smooth(n1 + n2 - 1)


def fft2p(img, m1: int, n1: int, m2: int, n2: int) -> Spectrum:
    """Forward FFT of an m1 x n1 image zero-padded for linear convolution
    with an m2 x n2 partner.  The padded size is (m1+m2-1, n1+n2-1) rounded
    up to the next highly composite (2,3,5-smooth) size.
    """
    from scipy import fft as sfft

    img = as_image(img)
    if img.shape != (m1, n1):
        raise ValueError(f"image shape {img.shape} does not match ({m1}, {n1})")
    shape = _pad_shape(m1, n1, m2, n2)
    return Spectrum(sfft.rfft2(img, s=shape), shape)


def ifft2p(spec: Spectrum, m1: int, n1: int, m2: int, n2: int) -> np.ndarray:
    """Inverse of fft2p: transform back and crop the zero-padding so the
    result is the full m1+m2-1 x n1+n2-1 linear-convolution region.
    """
    from scipy import fft as sfft

    if spec.shape != _pad_shape(m1, n1, m2, n2):
        raise ValueError(
            f"spectrum padded shape {spec.shape} does not match dims "
            f"({m1},{n1})x({m2},{n2})")
    full = sfft.irfft2(spec.data, s=spec.shape)
    return full[:m1 + m2 - 1, :n1 + n2 - 1]


def conv2_fft(a, b) -> np.ndarray:
    """Full 2-D linear convolution realized through the padded FFT pair."""
    a = as_image(a)
    b = as_image(b)
    m1, n1 = a.shape
    m2, n2 = b.shape
    fa = fft2p(a, m1, n1, m2, n2)
    fb = fft2p(b, m2, n2, m1, n1)
    return ifft2p(Spectrum(fa.data * fb.data, fa.shape), m1, n1, m2, n2)


def lsum2(img, m: int, n: int) -> np.ndarray:
    """Sums of all m x n windows, via running (integral-image) sums.

    Output entry (i, j) is the sum of img[i:i+m, j:j+n]; exact for
    integer-valued inputs.
    """
    img = as_image(img)
    if m > img.shape[0] or n > img.shape[1]:
        raise ValueError(f"window {m}x{n} larger than image {img.shape}")
    s = np.zeros((img.shape[0] + 1, img.shape[1] + 1))
    np.cumsum(img, axis=0, out=s[1:, 1:])
    np.cumsum(s[1:, 1:], axis=1, out=s[1:, 1:])
    return s[m:, n:] - s[:-m, n:] - s[m:, :-n] + s[:-m, :-n]


# ---------------------------------------------------------------------------
# Canny edge detector

def canny(img, sigma: float = 1.0, low_ratio: float = 0.12,
          high_ratio: float = 0.3) -> np.ndarray:
    """Canny edges: Gaussian gradient, non-maximum suppression and
    double-threshold hysteresis.  Thresholds are ratios of the maximum
    gradient magnitude.
    """
    img = as_image(img)
    if not 0 < low_ratio < high_ratio:
        raise ValueError("need 0 < low_ratio < high_ratio")
    smooth = gaussian_smooth(img, sigma)
    gy, gx = np.gradient(smooth)
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak <= 0:
        return np.zeros(img.shape, dtype=bool)

    # non-maximum suppression with 4-way direction quantization
    angle = np.mod(np.arctan2(gy, gx), np.pi)
    pad = np.pad(mag, 1, mode="constant")
    c = pad[1:-1, 1:-1]
    # neighbor pairs along the quantized gradient direction (y grows downward)
    deg0 = (pad[1:-1, 2:], pad[1:-1, :-2])
    deg45 = (pad[2:, 2:], pad[:-2, :-2])
    deg90 = (pad[2:, 1:-1], pad[:-2, 1:-1])
    deg135 = (pad[2:, :-2], pad[:-2, 2:])
    sector = ((angle + np.pi / 8) // (np.pi / 4)).astype(int) % 4
    nbr = [deg0, deg45, deg90, deg135]
    keep = np.zeros(img.shape, dtype=bool)
    for s, (n1, n2) in enumerate(nbr):
        m = sector == s
        keep |= m & (c >= n1) & (c >= n2)
    nms = np.where(keep, mag, 0.0)

    strong = nms >= high_ratio * peak
    weak = nms >= low_ratio * peak
    labels, count = ndimage.label(weak, structure=EIGHT_CONNECTED)
    if count == 0:
        return strong
    hit = np.zeros(count + 1, dtype=bool)
    hit[np.unique(labels[strong])] = True
    hit[0] = False
    return hit[labels]


def morph_close(img, strel) -> np.ndarray:
    """Grayscale closing (dilation then erosion) by a flat structuring element.

    Window maxima/minima are taken over in-image pixels only, which makes the
    operation extensive (output >= input) and idempotent.
    """
    img = as_image(img)
    se = np.asarray(strel, dtype=bool)
    if se.ndim != 2 or not se.any():
        raise ValueError("structuring element must be 2-D with at least one set cell")
    if se.shape[0] > img.shape[0] or se.shape[1] > img.shape[1]:
        raise ValueError(f"structuring element {se.shape} larger than image")
    dil = ndimage.maximum_filter(img, footprint=se, mode="constant", cval=-np.inf)
    return ndimage.minimum_filter(dil, footprint=se[::-1, ::-1],
                                  mode="constant", cval=np.inf)


def label_regions(bw, companion=None) -> list[Region]:
    """Regions of 8-connected 1-pixels; mean gray filled from a companion image."""
    bw = as_binary(bw)
    labels, count = ndimage.label(bw, structure=EIGHT_CONNECTED)
    if count == 0:
        return []
    comp = as_image(companion) if companion is not None else None
    regions = []
    index = np.arange(1, count + 1)
    slices = ndimage.find_objects(labels)
    areas = ndimage.sum_labels(np.ones_like(labels), labels, index)
    cys, cxs = zip(*ndimage.center_of_mass(bw, labels, index))
    means = (ndimage.mean(comp, labels, index) if comp is not None
             else np.zeros(count))
    for i, sl in enumerate(slices):
        y, x = sl[0].start, sl[1].start
        h, w = sl[0].stop - y, sl[1].stop - x
        regions.append(Region(label=i + 1, area=int(areas[i]),
                              bbox=(x, y, w, h),
                              centroid=(float(cxs[i]), float(cys[i])),
                              mean_gray=float(means[i])))
    return regions


def polygon_mask(points, shape: tuple[int, int]) -> np.ndarray:
    """Boolean mask of pixels whose centers lie inside a closed polygon.

    Even-odd scanline fill; `points` is an (n, 2) array of (x, y) vertices.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("polygon needs at least 3 (x, y) points")
    rows, cols = shape
    mask = np.zeros((rows, cols), dtype=bool)
    x = pts[:, 0]
    y = pts[:, 1]
    x2 = np.roll(x, -1)
    y2 = np.roll(y, -1)
    for r in range(rows):
        yr = float(r)
        # edges straddling this scanline (half-open rule avoids double counts)
        lo = np.minimum(y, y2)
        hi = np.maximum(y, y2)
        sel = (lo <= yr) & (yr < hi)
        if not sel.any():
            continue
        xs = x[sel] + (yr - y[sel]) * (x2[sel] - x[sel]) / (y2[sel] - y[sel])
        xs.sort()
        for i in range(0, len(xs) - 1, 2):
            a = int(np.ceil(xs[i]))
            b = int(np.ceil(xs[i + 1])) - 1  # half-open span, like the rows
            if b >= 0 and a < cols:
                mask[r, max(a, 0):min(b, cols - 1) + 1] = True
    return mask


def fill_holes(bw) -> np.ndarray:
    """Fill interior holes of a binary mask."""
    return ndimage.binary_fill_holes(as_binary(bw))
