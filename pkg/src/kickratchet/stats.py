"""Momentum statistics containers and the small fits built on them."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "MomentumStats",
    "SinusoidFit",
    "TailFit",
    "ladder_edges",
    "fit_sinusoid",
    "fit_sinusoid_period",
    "fit_exponential_tails",
    "variance_knee",
    "saturation_onset",
    "STATS_COLUMNS",
    "HIST_COLUMNS",
]

STATS_COLUMNS = ("kick", "mean_shift", "sem", "variance", "second_moment",
                 "rocking_offset")
HIST_COLUMNS = ("rho_lo", "rho_hi", "rho_center", "count")


def _fmt(v) -> str:
    return repr(float(v))


@dataclass
class MomentumStats:
    """Per-kick momentum moments and a final histogram.

    ``mean_shift[k]`` is ``<rho> - rho_L`` after kick ``kicks[k]`` with the
    deterministic rocking displacement ``rocking_offset[k]`` removed, so that
    it measures the ratchet current alone.  ``variance`` is taken about the
    ensemble mean, ``second_moment`` about ``rho_L``.
    """

    kicks: np.ndarray
    mean_shift: np.ndarray
    sem: np.ndarray
    variance: np.ndarray
    second_moment: np.ndarray
    rocking_offset: np.ndarray
    hist_edges: np.ndarray
    hist_counts: np.ndarray
    n_samples: int
    final_mean: float = 0.0
    meta: dict = field(default_factory=dict)

    def at(self, kick: int) -> int:
        return int(np.searchsorted(self.kicks, kick))

    @property
    def hist_centers(self) -> np.ndarray:
        return 0.5 * (self.hist_edges[1:] + self.hist_edges[:-1])

    def write_csv(self, path):
        """Per-kick table; ``path`` may also be an open text file."""
        rows = ([int(r[0])] + [_fmt(v) for v in r[1:]]
                for r in zip(self.kicks, self.mean_shift, self.sem, self.variance,
                             self.second_moment, self.rocking_offset))
        _write(path, STATS_COLUMNS, rows)

    def write_histogram_csv(self, path):
        rows = ([_fmt(lo), _fmt(hi), _fmt(0.5 * (lo + hi)), _fmt(c)]
                for lo, hi, c in zip(self.hist_edges[:-1], self.hist_edges[1:],
                                     self.hist_counts))
        _write(path, HIST_COLUMNS, rows)


def _write(target, header, rows):
    if hasattr(target, "write"):
        w = csv.writer(target, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    with open(target, "w", newline="") as fh:
        _write(fh, header, rows)


def ladder_edges(rho_L: float, unit: float, lo: float, hi: float) -> np.ndarray:
    """Bin edges of width ``unit`` centred on ``rho_L + unit*k`` covering [lo, hi]."""
    k_lo = math.floor((lo - rho_L) / unit - 0.5)
    k_hi = math.ceil((hi - rho_L) / unit + 0.5)
    return rho_L + unit * (np.arange(k_lo, k_hi + 1) - 0.5)


@dataclass(frozen=True)
class SinusoidFit:
    """``y = amplitude * sin(2 pi x / period + phase) + offset``."""

    amplitude: float
    phase: float
    period: float
    offset: float
    amplitude_err: float
    rms_residual: float

    def __call__(self, x):
        return (self.amplitude * np.sin(2 * np.pi * np.asarray(x) / self.period
                                        + self.phase) + self.offset)


def _design(x, period, with_offset):
    w = 2 * np.pi * x / period
    cols = [np.sin(w), np.cos(w)]
    if with_offset:
        cols.append(np.ones_like(w))
    return np.column_stack(cols)


def fit_sinusoid(x, y, period, sigma=None, with_offset=False) -> SinusoidFit:
    """Linear least squares on the (sin, cos) basis at a known period."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    M = _design(x, period, with_offset)
    wts = np.ones_like(y) if sigma is None else 1.0 / np.asarray(sigma, float)
    coef, *_ = np.linalg.lstsq(M * wts[:, None], y * wts, rcond=None)
    s, c = coef[0], coef[1]
    amp = math.hypot(s, c)
    resid = y - M @ coef
    dof = max(len(y) - M.shape[1], 1)
    # amplitude error from the parameter covariance, residual-scaled
    cov = np.linalg.pinv((M * wts[:, None]).T @ (M * wts[:, None]))
    if sigma is None:
        cov = cov * float(resid @ resid) / dof
    if amp > 0:
        g = np.array([s / amp, c / amp] + [0.0] * (M.shape[1] - 2))
        amp_err = math.sqrt(max(float(g @ cov @ g), 0.0))
    else:
        amp_err = math.nan
    return SinusoidFit(
        amplitude=amp,
        phase=math.atan2(c, s),
        period=float(period),
        offset=float(coef[2]) if with_offset else 0.0,
        amplitude_err=amp_err,
        rms_residual=float(np.sqrt(np.mean(resid**2))),
    )


def fit_sinusoid_period(x, y, period_guess, rel_range=0.3, sigma=None,
                        with_offset=False) -> SinusoidFit:
    """Sinusoid fit with the period free as well.

    For each trial period the amplitude and phase are linear; the residual
    is then minimised over the period inside
    ``period_guess * (1 +- rel_range)``.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)

    def cost(P):
        f = fit_sinusoid(x, y, P, sigma=sigma, with_offset=with_offset)
        return f.rms_residual

    lo, hi = period_guess * (1 - rel_range), period_guess * (1 + rel_range)
    grid = np.linspace(lo, hi, 61)
    costs = [cost(P) for P in grid]
    i = int(np.argmin(costs))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(cost, bounds=(a, b), method="bounded",
                          options={"xatol": 1e-10 * period_guess})
    return fit_sinusoid(x, y, float(res.x), sigma=sigma, with_offset=with_offset)


@dataclass(frozen=True)
class TailFit:
    slope: float
    intercept: float
    r2: float
    n_points: int


def _linfit(x, y) -> TailFit:
    if len(x) < 3:
        return TailFit(math.nan, math.nan, math.nan, len(x))
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return TailFit(float(slope), float(intercept), 1.0 - ss_res / ss_tot, len(x))


def fit_exponential_tails(centers, counts, center, cutoff, floor=1e-10):
    """Fit ``log N`` linearly on each side beyond ``|rho - center| > cutoff``.

    Bins below ``floor * max(counts)`` are ignored (numerical noise floor).
    Returns ``(left, right)`` :class:`TailFit` objects.
    """
    centers = np.asarray(centers, float)
    counts = np.asarray(counts, float)
    ok = counts > floor * counts.max()
    out = []
    for side in (-1.0, 1.0):
        sel = ok & (side * (centers - center) > cutoff)
        out.append(_linfit(centers[sel], np.log(counts[sel])))
    return tuple(out)


def variance_knee(kicks, second_moment, early=(1, 15), late_start=None):
    """Break time of diffusive growth: early linear law meets the plateau.

    The early epoch is fitted with a straight line; the plateau is the mean
    of the last third of the series (or from ``late_start``).  Returns
    ``(knee, early_rate, plateau)``.
    """
    kicks = np.asarray(kicks, float)
    m2 = np.asarray(second_moment, float)
    sel = (kicks >= early[0]) & (kicks <= early[1])
    rate, c0 = np.polyfit(kicks[sel], m2[sel], 1)
    if late_start is None:
        late_start = kicks[-1] - (kicks[-1] - kicks[0]) / 3.0
    plateau = float(m2[kicks >= late_start].mean())
    return (plateau - c0) / rate, float(rate), plateau


def saturation_onset(kicks, curve, level=1.0 - math.exp(-1.0), tail=20):
    """First kick where the curve reaches ``level`` of its final value.

    The final value is the mean over the last ``tail`` points.
    """
    kicks = np.asarray(kicks)
    curve = np.asarray(curve, float)
    final = float(curve[-tail:].mean())
    target = level * final
    hit = np.nonzero(np.sign(final) * (curve - target) >= 0)[0]
    return int(kicks[hit[0]]) if len(hit) else None
