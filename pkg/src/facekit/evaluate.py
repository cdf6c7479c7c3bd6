"""Distance measures, nearest-neighbor recognition with rejection, biometric
characteristics (CMC/ROC and their scalar summaries), serial combining of two
recognizers from their distance matrices, and the detection/contour error
measures used for benchmarking."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "DistanceSpec",
    "DistanceMatrix",
    "CmcCurve",
    "RocCurve",
    "MetricsBundle",
    "distance",
    "distance_matrix",
    "nearest_neighbor",
    "cmc",
    "roc",
    "genuine_impostor_scores",
    "combine_serial",
    "combine_advisor",
    "eye_error",
    "contour_errors",
    "metrics_from_matrix",
]

KINDS = ("minkowski-p", "manhattan", "euclidean", "angle", "correlation",
         "weighted-angle", "simplified-mahalanobis")
PREPROCESS = ("none", "centred", "standardized", "whitened")


@dataclass
class DistanceSpec:
    """A distance measure plus optional per-vector preprocessing.

    `weights` are the eigenvalue weights z_i = sqrt(1/lambda_i) of the
    weighted kinds; `whitened` preprocessing multiplies coordinates by the
    same weights before measuring.
    """

    kind: str = "euclidean"
    p: float = 2.0
    weights: np.ndarray | None = None
    preprocessing: str = "none"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distance kind {self.kind!r}")
        if self.preprocessing not in PREPROCESS:
            raise ValueError(f"unknown preprocessing {self.preprocessing!r}")
        if self.kind == "minkowski-p" and self.p <= 0:
            raise ValueError("minkowski order p must be positive")
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=np.float64)
            if np.any(self.weights <= 0):
                raise ValueError("weights must be positive")
        elif self.kind in ("weighted-angle", "simplified-mahalanobis"):
            raise ValueError(f"{self.kind} requires weights")
        if self.preprocessing == "whitened" and self.weights is None:
            raise ValueError("whitened preprocessing requires weights")


def _prepare(x: np.ndarray, spec: DistanceSpec) -> np.ndarray:
    if spec.preprocessing == "centred":
        return x - x.mean()
    if spec.preprocessing == "standardized":
        std = x.std()
        if std == 0:
            raise ValueError("cannot standardize a constant vector")
        return (x - x.mean()) / std
    if spec.preprocessing == "whitened":
        return x * spec.weights
    return x


def distance(spec: DistanceSpec, x, y) -> float:
    """Distance between two equal-length feature vectors."""
    x = np.asarray(getattr(x, "values", x), dtype=np.float64)
    y = np.asarray(getattr(y, "values", y), dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("feature vectors must be 1-D of equal length")
    x = _prepare(x, spec)
    y = _prepare(y, spec)
    kind = spec.kind
    if kind == "manhattan":
        return float(np.abs(x - y).sum())
    if kind == "euclidean":
        return float(np.sqrt(((x - y)**2).sum()))
    if kind == "minkowski-p":
        return float((np.abs(x - y)**spec.p).sum()**(1.0 / spec.p))
    if kind == "angle":
        nx = np.sqrt((x * x).sum())
        ny = np.sqrt((y * y).sum())
        if nx == 0 or ny == 0:
            raise ValueError("angle distance undefined for zero vectors")
        return float(-(x @ y) / (nx * ny))
    if kind == "correlation":
        n = len(x)
        num = n * (x @ y) - x.sum() * y.sum()
        dx = n * (x * x).sum() - x.sum()**2
        dy = n * (y * y).sum() - y.sum()**2
        if dx <= 0 or dy <= 0:
            raise ValueError("correlation distance undefined for constant vectors")
        return float(-num / np.sqrt(dx * dy))
    z = spec.weights
    if len(z) != len(x):
        raise ValueError("weights length does not match vectors")
    if kind == "weighted-angle":
        nx = np.sqrt((x * x).sum())
        ny = np.sqrt((y * y).sum())
        if nx == 0 or ny == 0:
            raise ValueError("weighted angle undefined for zero vectors")
        return float(-(z * x * y).sum() / (nx * ny))
    # simplified Mahalanobis: the numerator of the weighted angle
    return float(-(z * x * y).sum())


@dataclass
class DistanceMatrix:
    """probes x gallery distances with their labels."""

    values: np.ndarray
    probe_labels: list[str]
    gallery_labels: list[str]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (len(self.probe_labels), len(self.gallery_labels)):
            raise ValueError("matrix shape does not match label lists")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("distance matrix must be finite")

    def save_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["probe\\gallery", *self.gallery_labels])
            for label, row in zip(self.probe_labels, self.values):
                writer.writerow([label, *(f"{v:.17g}" for v in row)])

    @classmethod
    def load_csv(cls, path) -> "DistanceMatrix":
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        if not rows or len(rows[0]) < 2:
            raise ValueError(f"malformed distance CSV: {path}")
        gallery = rows[0][1:]
        probes = []
        values = []
        for row in rows[1:]:
            if len(row) != len(gallery) + 1:
                raise ValueError(f"malformed distance CSV row in {path}")
            probes.append(row[0])
            try:
                values.append([float(v) for v in row[1:]])
            except ValueError as e:
                raise ValueError(f"malformed distance CSV value in {path}") from e
        return cls(np.array(values), probes, gallery)


def distance_matrix(spec: DistanceSpec, probes, probe_labels,
                    gallery, gallery_labels) -> DistanceMatrix:
    values = np.array([[distance(spec, p, g) for g in gallery] for p in probes])
    return DistanceMatrix(values, list(probe_labels), list(gallery_labels))


def nearest_neighbor(gallery, probe, spec: DistanceSpec,
                     tau_reject: float = np.inf) -> tuple[int | None, float]:
    """Index of the closest gallery vector (ties to the lowest index) and its
    distance; None when the minimum distance reaches the rejection threshold."""
    if len(gallery) == 0:
        raise ValueError("gallery is empty")
    eps = np.array([distance(spec, probe, g) for g in gallery])
    s = int(np.argmin(eps))  # argmin takes the first minimum
    eps_s = float(eps[s])
    if eps_s >= tau_reject:
        return None, eps_s
    return s, eps_s


# ---------------------------------------------------------------------------
# biometric characteristics

@dataclass
class CmcCurve:
    ranks: np.ndarray        # 1..G
    percent: np.ndarray      # cumulative percent of probes at each rank

    @property
    def first1(self) -> float:
        return float(self.percent[0])

    @property
    def cum100(self) -> float:
        """Smallest rank, as percent of gallery size, where the curve hits 100."""
        full = np.nonzero(self.percent >= 100.0 - 1e-12)[0]
        k = int(full[0]) + 1
        return 100.0 * k / len(self.ranks)

    @property
    def area_above(self) -> float:
        """CMCA on the [0..10^4] scale: area above the curve over rank percent."""
        rank_pct = 100.0 * self.ranks / len(self.ranks)
        xs = np.concatenate([[0.0], rank_pct])
        ys = np.concatenate([[self.percent[0]], self.percent])
        return float(np.trapezoid(100.0 - ys, xs))


def _ranks(dm: DistanceMatrix) -> np.ndarray:
    """Pessimistic rank of the correct gallery entry per probe: equal-distance
    competitors count as ranked ahead."""
    gallery = np.array(dm.gallery_labels)
    ranks = np.empty(len(dm.probe_labels), dtype=int)
    for i, label in enumerate(dm.probe_labels):
        row = dm.values[i]
        own = np.nonzero(gallery == label)[0]
        if own.size == 0:
            raise ValueError(f"probe label {label!r} missing from gallery")
        best = None
        for j in own:
            others = np.delete(np.arange(len(gallery)), j)
            r = 1 + int((row[others] <= row[j]).sum())
            best = r if best is None else min(best, r)
        ranks[i] = best
    return ranks


def cmc(dm: DistanceMatrix) -> CmcCurve:
    """Cumulative match characteristic over gallery ranks."""
    ranks = _ranks(dm)
    g = len(dm.gallery_labels)
    counts = np.bincount(ranks, minlength=g + 1)[1:g + 1]
    percent = 100.0 * np.cumsum(counts) / len(dm.probe_labels)
    return CmcCurve(ranks=np.arange(1, g + 1), percent=percent)


@dataclass
class RocCurve:
    thresholds: np.ndarray
    far: np.ndarray          # percent of impostor distances accepted
    frr: np.ndarray          # percent of genuine distances rejected

    @property
    def eer(self) -> float:
        """Operating point with FAR = FRR, linearly interpolated."""
        d = self.far - self.frr
        idx = np.nonzero(d >= 0)[0]
        i = int(idx[0])
        if i == 0 or d[i] == 0:
            return float(self.far[i])
        a = d[i - 1]
        b = d[i]
        t = -a / (b - a)
        return float(self.frr[i - 1] + t * (self.frr[i] - self.frr[i - 1]))

    @property
    def area(self) -> float:
        """ROCA on the [0..10^4] scale: area under FRR over FAR."""
        order = np.argsort(self.far, kind="stable")
        return float(np.trapezoid(self.frr[order], self.far[order]))


def roc(genuine_scores, impostor_scores) -> RocCurve:
    """Threshold sweep over the union of scores (distances: accept <= t)."""
    genuine = np.asarray(genuine_scores, dtype=np.float64)
    impostor = np.asarray(impostor_scores, dtype=np.float64)
    if genuine.size == 0 or impostor.size == 0:
        raise ValueError("both genuine and impostor score lists are required")
    ts = np.unique(np.concatenate([genuine, impostor]))
    ts = np.concatenate([[ts[0] - 1.0], ts, [ts[-1] + 1.0]])
    far = np.array([(impostor <= t).mean() * 100.0 for t in ts])
    frr = np.array([(genuine > t).mean() * 100.0 for t in ts])
    return RocCurve(thresholds=ts, far=far, frr=frr)


def genuine_impostor_scores(dm: DistanceMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Genuine = probe distance to same-label gallery entries; impostor = all
    cross-label distances."""
    gallery = np.array(dm.gallery_labels)
    genuine = []
    impostor = []
    for label, row in zip(dm.probe_labels, dm.values):
        same = gallery == label
        genuine.extend(row[same])
        impostor.extend(row[~same])
    return np.array(genuine), np.array(impostor)


@dataclass
class MetricsBundle:
    first1: float
    eer: float
    cum100: float
    cmca: float
    roca: float

    def to_dict(self) -> dict:
        return {"first1": self.first1, "eer": self.eer, "cum100": self.cum100,
                "cmca": self.cmca, "roca": self.roca}


def metrics_from_matrix(dm: DistanceMatrix) -> tuple[MetricsBundle, CmcCurve, RocCurve]:
    curve = cmc(dm)
    genuine, impostor = genuine_impostor_scores(dm)
    rcurve = roc(genuine, impostor)
    bundle = MetricsBundle(first1=curve.first1, eer=rcurve.eer,
                           cum100=curve.cum100, cmca=curve.area_above,
                           roca=rcurve.area)
    return bundle, curve, rcurve


# ---------------------------------------------------------------------------
# serial combining

def combine_serial(dm_a: DistanceMatrix, dm_b: DistanceMatrix,
                   rank_percent: float) -> DistanceMatrix:
    """Merge two recognizers' distance arrays: method A shortlists the best
    rank_percent of the gallery per probe, shortlisted entries keep their
    method-B distances, and dropped entries are pushed behind every kept one
    (ordered by A) so the merged array still yields a full CMC."""
    if dm_a.probe_labels != dm_b.probe_labels or \
            dm_a.gallery_labels != dm_b.gallery_labels:
        raise ValueError("distance matrices must share probe/gallery sets")
    if not 0 < rank_percent <= 100:
        raise ValueError("rank_percent must be in (0, 100]")
    g = len(dm_a.gallery_labels)
    m = min(g, max(1, int(np.ceil(g * rank_percent / 100.0))))
    out = np.empty_like(dm_b.values)
    for i in range(len(dm_a.probe_labels)):
        order_a = np.argsort(dm_a.values[i], kind="stable")
        kept = order_a[:m]
        dropped = order_a[m:]
        out[i, kept] = dm_b.values[i, kept]
        base = dm_b.values[i, kept].max()
        out[i, dropped] = base + 1.0 + np.arange(len(dropped))
    return DistanceMatrix(out, list(dm_a.probe_labels), list(dm_a.gallery_labels))


def combine_advisor(cmc_a: CmcCurve, speed_a: float, cmc_b: CmcCurve,
                    speed_b: float, rank_percent: float) -> dict:
    """Predict the serial combination without running it: the guarantee flag
    states whether the shortlist covers method A's 100% cumulative rank (then
    the combined First1 cannot fall below method B's on A's retained set);
    throughput comes from the two stage speeds (probes per second)."""
    if speed_a <= 0 or speed_b <= 0:
        raise ValueError("speeds must be positive (probes per second)")
    guarantee = rank_percent >= cmc_a.cum100
    throughput = 1.0 / (1.0 / speed_a + (rank_percent / 100.0) / speed_b)
    return {
        "guarantee": bool(guarantee),
        "cum100_a": cmc_a.cum100,
        "first1_floor": cmc_b.first1 if guarantee else None,
        "throughput": throughput,
        "speedup_vs_b": throughput / speed_b,
    }


# ---------------------------------------------------------------------------
# detection / contour error measures

def eye_error(manual_l, manual_r, auto_l, auto_r) -> float:
    """Relative eye-detection error t = 100 * max(d_l, d_r) / d_lr."""
    manual_l = np.asarray(manual_l, dtype=np.float64)
    manual_r = np.asarray(manual_r, dtype=np.float64)
    auto_l = np.asarray(auto_l, dtype=np.float64)
    auto_r = np.asarray(auto_r, dtype=np.float64)
    d_lr = np.linalg.norm(manual_l - manual_r)
    if d_lr == 0:
        raise ValueError("manual eye centers coincide")
    d_l = np.linalg.norm(manual_l - auto_l)
    d_r = np.linalg.norm(manual_r - auto_r)
    return float(100.0 * max(d_l, d_r) / d_lr)


def contour_errors(region_a, region_b, contour_a, contour_b) -> tuple[float, float, float]:
    """(err1 %, err2 %, err3 pt) between a reference region/contour (A, a) and
    a detected one (B, b).

    err1 = 100 * |symmetric difference| / (|A| + |B|); err2 rescales by |A|;
    err3 averages the two directed mean point-to-contour distances.
    """
    from scipy.spatial import cKDTree

    a = np.asarray(region_a, dtype=bool)
    b = np.asarray(region_b, dtype=bool)
    if a.shape != b.shape:
        raise ValueError("region masks must share dimensions")
    na = int(a.sum())
    nb = int(b.sum())
    if na == 0 or nb == 0:
        raise ValueError("regions must be nonempty")
    sym = int(np.logical_xor(a, b).sum())
    err1 = 100.0 * sym / (na + nb)
    err2 = err1 * (na + nb) / na

    pa = np.asarray(contour_a, dtype=np.float64)
    pb = np.asarray(contour_b, dtype=np.float64)
    if len(pa) == 0 or len(pb) == 0:
        raise ValueError("contours must be nonempty")
    d_ab = cKDTree(pb).query(pa)[0].mean()
    d_ba = cKDTree(pa).query(pb)[0].mean()
    err3 = (d_ab + d_ba) / 2.0
    return float(err1), float(err2), float(err3)
