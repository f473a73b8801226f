"""Structured ratio reports shared by the empirical estimate suites."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def running_sup_checkpoints(ratios: np.ndarray, n_checkpoints: int = 9):
    """Running supremum sampled at log-spaced counts over the final decade."""
    n = ratios.size
    if n < 2:
        return np.array([n]), np.array([float(np.max(ratios))])
    lo = max(2, n // 10)
    counts = np.unique(np.geomspace(lo, n, n_checkpoints).astype(int))
    run = np.maximum.accumulate(ratios)
    return counts, run[counts - 1]


def sup_trend_slope(ratios: np.ndarray) -> float:
    """Slope of (running sup / final sup) against log10(sample count).

    Near zero when the supremum has stabilized; positive when new samples
    keep raising it.
    """
    counts, sups = running_sup_checkpoints(np.asarray(ratios, float))
    if counts.size < 2 or sups[-1] == 0:
        return 0.0
    return float(np.polyfit(np.log10(counts), sups / sups[-1], 1)[0])


@dataclass
class RatioReport:
    """Outcome of one empirical-boundedness suite."""

    name: str
    exponents: dict
    sup_ratio: float
    trend_slope: float
    n_samples: int
    checkpoints: list = field(default_factory=list)

    @property
    def bounded(self) -> bool:
        return np.isfinite(self.sup_ratio) and self.trend_slope <= 0.05

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "exponents": dict(self.exponents),
            "sup_ratio": self.sup_ratio,
            "trend_slope": self.trend_slope,
            "n_samples": self.n_samples,
            "checkpoints": [[int(c), float(s)] for c, s in self.checkpoints],
        }


def make_ratio_report(name: str, exponents: dict, ratios) -> RatioReport:
    ratios = np.asarray(ratios, float)
    counts, sups = running_sup_checkpoints(ratios)
    return RatioReport(
        name=name,
        exponents=exponents,
        sup_ratio=float(np.max(ratios)),
        trend_slope=sup_trend_slope(ratios),
        n_samples=int(ratios.size),
        checkpoints=list(zip(counts.tolist(), sups.tolist())),
    )
