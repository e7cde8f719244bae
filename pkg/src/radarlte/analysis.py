"""Throughput CDFs, loss summaries and exclusion-zone estimates."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .lte_uplink import ThroughputReport


def _values(report_or_values):
    if isinstance(report_or_values, ThroughputReport):
        return np.asarray(report_or_values.throughput_bps, dtype=float)
    return np.asarray(report_or_values, dtype=float)


def throughput_cdf(report_or_values):
    """Empirical CDF as ``(values, probabilities)``; probabilities are i/n."""
    x = np.sort(_values(report_or_values))
    if x.size == 0:
        raise ValueError("empty throughput sample")
    return x, np.arange(1, x.size + 1) / x.size


def cdf_at(report_or_values, value) -> float:
    """Fraction of samples at or below ``value``."""
    x = np.sort(_values(report_or_values))
    return float(np.searchsorted(x, value, side="right") / x.size)


def stochastically_dominates(better, worse, rtol=1e-12) -> bool:
    """True when ``better``'s CDF lies on or below ``worse``'s everywhere.

    Equal-size samples compare quantile by quantile; otherwise the CDFs are
    compared on the union of sample points.
    """
    a, b = np.sort(_values(better)), np.sort(_values(worse))
    if a.size == b.size:
        return bool(np.all(a >= b - rtol * np.abs(b)))
    pts = np.union1d(a, b)
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return bool(np.all(fa <= fb + 1e-12))


class RunMismatchError(ValueError):
    pass


def mean_loss_percent(interfered: ThroughputReport, baseline: ThroughputReport) -> float:
    """Percent drop of mean UE throughput; negative values are kept."""
    if (interfered.throughput_bps.shape != baseline.throughput_bps.shape
            or not np.array_equal(interfered.serving_cell, baseline.serving_cell)):
        raise RunMismatchError("reports come from different drops or seeds")
    base = baseline.mean_bps
    if base <= 0:
        raise ValueError("baseline mean throughput is zero")
    return 100.0 * (1.0 - interfered.mean_bps / base)


def per_ue_loss_percent(interfered: ThroughputReport, baseline: ThroughputReport) -> np.ndarray:
    b = baseline.throughput_bps
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(b > 0, 100.0 * (1.0 - interfered.throughput_bps / b), 0.0)


class NonMonotoneLossError(ValueError):
    pass


@dataclass(frozen=True)
class ExclusionZone:
    distance_km: float  # math.inf when the threshold is never met
    threshold_percent: float
    bracket: tuple  # ((d_lo, loss_lo), (d_hi, loss_hi)) or a single point

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.distance_km)


def exclusion_zone_km(losses: dict, loss_threshold_percent: float = 5.0,
                      tolerance_percent: float = 0.5) -> ExclusionZone:
    """Smallest distance whose mean loss is at or below the threshold.

    ``losses`` maps distance (km) to mean loss (%). The answer is linearly
    interpolated between the two sweep points that bracket the threshold.
    Losses may rise with distance by at most ``tolerance_percent``; larger
    reversals mean the sweep is too noisy and more drops are needed.
    """
    if len(losses) < 1:
        raise ValueError("need at least one sweep point")
    d = np.array(sorted(losses), dtype=float)
    v = np.array([losses[k] for k in sorted(losses)], dtype=float)
    rises = np.diff(v)
    if np.any(rises > tolerance_percent):
        i = int(np.argmax(rises))
        raise NonMonotoneLossError(
            f"loss rises from {v[i]:.3g}% at {d[i]:g} km to {v[i + 1]:.3g}% at "
            f"{d[i + 1]:g} km; run more drops")
    thr = loss_threshold_percent
    if v[0] <= thr:
        return ExclusionZone(float(d[0]), thr, ((float(d[0]), float(v[0])),))
    below = np.nonzero(v <= thr)[0]
    if below.size == 0:
        return ExclusionZone(math.inf, thr, ((float(d[-1]), float(v[-1])),))
    i = int(below[0])
    d0, d1, v0, v1 = d[i - 1], d[i], v[i - 1], v[i]
    x = d1 if v0 == v1 else d0 + (v0 - thr) * (d1 - d0) / (v0 - v1)
    return ExclusionZone(float(x), thr, ((float(d0), float(v0)), (float(d1), float(v1))))


@dataclass
class SweepResult:
    """Losses for every swept point against the matching-seed baseline.

    Keys are ``(distance_km, freq_offset_MHz, deployment)``.
    """

    baseline: ThroughputReport
    entries: dict = field(default_factory=dict)  # key -> ThroughputReport

    def loss_percent(self, key) -> float:
        return mean_loss_percent(self.entries[key], self.baseline)

    def keys(self):
        return sorted(self.entries)

    def losses_by_distance(self, freq_offset_MHz=0.0, deployment=None) -> dict:
        return {k[0]: self.loss_percent(k) for k in self.keys()
                if math.isclose(k[1], freq_offset_MHz) and (deployment is None or k[2] == deployment)}

    def rows(self):
        base = self.baseline.mean_bps
        out = [{"distance_km": "baseline", "freq_offset_MHz": "", "deployment": "",
                "mean_bps": base, "p5_bps": self.baseline.percentile_bps(5),
                "loss_percent": 0.0}]
        for k in self.keys():
            r = self.entries[k]
            out.append({"distance_km": k[0], "freq_offset_MHz": k[1], "deployment": k[2],
                        "mean_bps": r.mean_bps, "p5_bps": r.percentile_bps(5),
                        "loss_percent": self.loss_percent(k)})
        return out

    def write_csv(self, path) -> None:
        rows = self.rows()
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            for r in rows:
                w.writerow({k: (f"{v:g}" if k in ("distance_km", "freq_offset_MHz") else f"{v:.6f}")
                            if isinstance(v, float) else v for k, v in r.items()})


def write_cdf_csv(reports: dict, path) -> None:
    """Long-format CDF points: label, throughput_bps, cdf."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "throughput_bps", "cdf"])
        for label, rep in reports.items():
            x, p = throughput_cdf(rep)
            for a, b in zip(x, p):
                w.writerow([label, f"{a:.3f}", f"{b:.6f}"])
