"""Fast normalized cross-correlation pre-detector with multiple templates.

The multi-template path computes every image-side quantity (window means,
window deviations, image FFT) once and reuses it for the whole bank; only
template-side work is repeated per template.  `ncc_direct` is the slow
sliding-window reference the fast path is checked against.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .image import Spectrum, as_image, fft2p, ifft2p, lsum2, resize

__all__ = [
    "TemplateBank",
    "CorrelationMap",
    "PredetectParams",
    "Detection",
    "ncc_direct",
    "ncc_fast_single",
    "ncc_multi",
    "predetect_threshold",
    "pyramid_search",
    "load_bank",
    "save_bank",
    "save_detections",
    "load_detections",
    "counters",
    "reset_counters",
]

log = logging.getLogger(__name__)

# variance below VAR_TOL * (mean^2 + 1) counts as a flat window; correlation
# against flat data is defined as 0 there
VAR_TOL = 1e-9

# instrumentation for the cost-sharing contract (not thread-safe; test aid)
counters = {"image_fft": 0, "image_lsum": 0, "template_fft": 0}


def reset_counters() -> None:
    for k in counters:
        counters[k] = 0


@dataclass
class TemplateBank:
    """Equally sized template patches matched in one pass."""

    templates: list[np.ndarray]
    ids: list[str]
    tmx: np.ndarray = field(init=False)
    tsx: np.ndarray = field(init=False)

    def __post_init__(self):
        if not self.templates:
            raise ValueError("template bank is empty")
        self.templates = [as_image(t) for t in self.templates]
        shape = self.templates[0].shape
        if any(t.shape != shape for t in self.templates):
            raise ValueError("all templates must share the same dimensions")
        if len(self.ids) != len(self.templates):
            raise ValueError("one id per template required")
        self.tmx = np.array([t.mean() for t in self.templates])
        var = np.array([(t * t).mean() for t in self.templates]) - self.tmx**2
        self.tsx = np.sqrt(np.maximum(var, 0.0))
        if np.any(self.tsx <= 0):
            flat = [self.ids[i] for i in np.nonzero(self.tsx <= 0)[0]]
            raise ValueError(f"flat template(s) with zero deviation: {flat}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.templates[0].shape

    def __len__(self) -> int:
        return len(self.templates)


@dataclass
class CorrelationMap:
    """Correlation coefficients at every valid template position."""

    values: np.ndarray
    template_id: str


@dataclass
class PredetectParams:
    """Candidate thresholding and pyramid parameters."""

    tau: float = 0.5
    tau2: int = 4
    scales: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if not 0 < self.tau < 1:
            raise ValueError(f"tau must be in (0, 1), got {self.tau}")
        if not 1 <= self.tau2 <= 9:
            raise ValueError(f"tau2 must be in [1, 9], got {self.tau2}")


@dataclass
class Detection:
    """A located box at original image scale."""

    x: float
    y: float
    w: float
    h: float
    scale: float = 1.0
    score: float = 0.0
    template_id: str = ""
    overlap_count: int = 1

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h,
                "scale": self.scale, "score": self.score,
                "template_id": self.template_id,
                "overlap_count": self.overlap_count}

    @classmethod
    def from_dict(cls, d: dict) -> "Detection":
        return cls(**d)


def _finalize(num: np.ndarray, sx: np.ndarray, tsx: float,
              mx: np.ndarray, tmx: float, var_scale: np.ndarray) -> np.ndarray:
    """(M(XY) - MX*MY) / (SX*SY) with flat windows/template mapped to 0."""
    denom = sx * tsx
    flat = sx * sx <= VAR_TOL * var_scale
    safe = np.where(flat, 1.0, denom)
    r = (num - tmx * mx) / safe
    r[flat] = 0.0
    return r


def ncc_direct(img, tmpl) -> CorrelationMap:
    """Reference sliding-window evaluation of the correlation coefficient.

    O(image * template) work with explicit windows; intentionally the slow
    oracle the FFT path must match to 1e-6.
    """
    img = as_image(img)
    tmpl = as_image(tmpl)
    m1, m2 = tmpl.shape
    if m1 > img.shape[0] or m2 > img.shape[1]:
        raise ValueError("template does not fit in image")
    win = sliding_window_view(img, (m1, m2))
    m1m2 = m1 * m2
    mx = win.mean(axis=(2, 3))
    mx2 = np.einsum("ijkl,ijkl->ij", win, win) / m1m2
    sx = np.sqrt(np.maximum(mx2 - mx * mx, 0.0))
    tmx = tmpl.mean()
    tsx = float(np.sqrt(max((tmpl * tmpl).mean() - tmx * tmx, 0.0)))
    num = np.einsum("ijkl,kl->ij", win, tmpl) / m1m2
    if tsx * tsx <= VAR_TOL * (tmx * tmx + 1.0):
        return CorrelationMap(np.zeros(mx.shape), "")
    return CorrelationMap(_finalize(num, sx, tsx, mx, tmx, mx * mx + 1.0), "")


def ncc_multi(img, bank: TemplateBank) -> list[CorrelationMap]:
    """Fast normalized correlation against a whole template bank.

    Image-side quantities (window means/deviations via running sums, image
    FFT) are computed once; the per-template loop only transforms the
    template and combines spectra.
    """
    img = as_image(img)
    n1, n2 = img.shape
    m1, m2 = bank.shape
    if m1 > n1 or m2 > n2:
        raise ValueError("templates do not fit in image")
    m1m2 = m1 * m2

    imx = lsum2(img, m1, m2) / m1m2
    imx2 = lsum2(img * img, m1, m2) / m1m2
    counters["image_lsum"] += 2
    isx = np.sqrt(np.maximum(imx2 - imx * imx, 0.0))
    ifft = fft2p(img, n1, n2, m1, m2)
    counters["image_fft"] += 1
    var_scale = imx * imx + 1.0

    maps = []
    for tmpl, tid, tmx, tsx in zip(bank.templates, bank.ids, bank.tmx, bank.tsx):
        # correlation = convolution with the flipped template
        tfft = fft2p(tmpl[::-1, ::-1] / m1m2, m1, m2, n1, n2)
        counters["template_fft"] += 1
        full = ifft2p(Spectrum(ifft.data * tfft.data, ifft.shape),
                      n1, n2, m1, m2)
        num = full[m1 - 1:n1, m2 - 1:n2]
        maps.append(CorrelationMap(
            _finalize(num, isx, float(tsx), imx, float(tmx), var_scale), tid))
    return maps


def ncc_fast_single(img, tmpl, template_id: str = "") -> CorrelationMap:
    """Unmodified fast NCC: one template, image-side work recomputed."""
    bank = TemplateBank([tmpl], [template_id])
    return ncc_multi(img, bank)[0]


def predetect_threshold(cmap: CorrelationMap, params: PredetectParams,
                        template_shape: tuple[int, int],
                        scale: float = 1.0) -> list[Detection]:
    """Keep positions with R > tau whose 3x3 neighborhood holds more than
    tau2 values above tau."""
    r = cmap.values
    above = r > params.tau
    padded = np.pad(above, 1).astype(np.int32)
    s = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.int32)
    np.cumsum(padded, axis=0, out=s[1:, 1:])
    np.cumsum(s[1:, 1:], axis=1, out=s[1:, 1:])
    count3 = s[3:, 3:] - s[:-3, 3:] - s[3:, :-3] + s[:-3, :-3]
    keep = above & (count3 > params.tau2)
    m1, m2 = template_shape
    dets = []
    for i, j in zip(*np.nonzero(keep)):
        dets.append(Detection(x=float(j), y=float(i), w=float(m2), h=float(m1),
                              scale=scale, score=float(r[i, j]),
                              template_id=cmap.template_id))
    return dets


def pyramid_search(img, bank: TemplateBank,
                   params: PredetectParams) -> list[Detection]:
    """Run the multi-template pre-detector over a pyramid of resized images
    and map detections back to original coordinates."""
    img = as_image(img)
    scales = sorted(params.scales, reverse=True)
    m1, m2 = bank.shape
    out = []
    for s in scales:
        rows = int(round(img.shape[0] * s))
        cols = int(round(img.shape[1] * s))
        if rows < m1 or cols < m2:
            log.warning("scale %.4g skipped: %dx%d smaller than template %dx%d",
                        s, rows, cols, m1, m2)
            continue
        scaled = img if s == 1.0 else resize(img, s)
        for cmap in ncc_multi(scaled, bank):
            for d in predetect_threshold(cmap, params, bank.shape, scale=s):
                d.x /= s
                d.y /= s
                d.w /= s
                d.h /= s
                out.append(d)
    return out


# ---------------------------------------------------------------------------
# on-disk formats: bank directory (PGMs + manifest) and detections JSON

def save_bank(bank: TemplateBank, directory) -> None:
    from .pgm import write_pgm

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (tmpl, tid) in enumerate(zip(bank.templates, bank.ids)):
        name = f"template_{i:03d}.pgm"
        write_pgm(directory / name, tmpl)
        entries.append({"file": name, "id": tid})
    manifest = {"templates": entries,
                "shape": list(bank.shape)}
    (directory / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True))


def load_bank(directory) -> TemplateBank:
    from .pgm import read_pgm

    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    templates = []
    ids = []
    for entry in manifest["templates"]:
        templates.append(read_pgm(directory / entry["file"]))
        ids.append(entry["id"])
    return TemplateBank(templates, ids)


def save_detections(dets: list[Detection], path) -> None:
    from .serialize import dump_json

    dump_json([d.to_dict() for d in dets], path)


def load_detections(path) -> list[Detection]:
    return [Detection.from_dict(d) for d in json.loads(Path(path).read_text())]
