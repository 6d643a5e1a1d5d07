"""Steady-state extraction from load-test time series.

A measurement for the capacity model must come from the flat part of a
run: ramp-up and ramp-down samples drag the mean and corrupt the fit.
Two modes are supported.  Explicit trimming cuts fixed lead-in and
lead-out durations.  Automatic detection finds the longest window whose
fitted trend is flat (relative drift across the window below slope_tol)
and whose coefficient of variation stays below cv_max.  Dips inside the
window (GC pauses, compaction stalls) are part of steady state and are
deliberately not outlier-rejected; they belong in the mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoSteadyStateError, TrimExceedsRunError, UslError
from .fitting import Dataset
from .model import MeasuredPoint


@dataclass(frozen=True)
class RunSeries:
    """One run: (timestamp, throughput) samples at a fixed load level.

    Timestamps are seconds, strictly increasing; at least 5 samples.
    trim, when set, gives explicit (lead_in, lead_out) seconds to drop
    and switches extraction to the explicit mode.
    """

    load: float
    samples: tuple[tuple[float, float], ...]
    trim: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        pts = tuple((float(t), float(x)) for t, x in self.samples)
        if len(pts) < 5:
            raise DomainError(f"a run needs at least 5 samples, got {len(pts)}")
        for (t0, x0), (t1, _) in zip(pts, pts[1:]):
            if not t1 > t0:
                raise DomainError(f"timestamps must strictly increase (at t={t1:g})")
        for t, x in pts:
            if not math.isfinite(t) or not math.isfinite(x) or x < 0.0:
                raise DomainError(f"throughput must be finite and >= 0 (at t={t:g})")
        if not (self.load >= 1.0) or not math.isfinite(self.load):
            raise DomainError(f"load must be >= 1, got {self.load}")
        if self.trim is not None:
            up, down = self.trim
            if up < 0.0 or down < 0.0:
                raise DomainError("trim durations must be >= 0")
            object.__setattr__(self, "trim", (float(up), float(down)))
        object.__setattr__(self, "samples", pts)

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([x for _, x in self.samples])


@dataclass(frozen=True)
class SteadyWindow:
    start: float
    end: float
    mean_throughput: float
    cv: float
    sample_count: int

    def __post_init__(self) -> None:
        if not self.start < self.end:
            raise DomainError("window must have positive duration")
        if self.sample_count < 3:
            raise DomainError("window must contain at least 3 samples")
        if self.cv < 0.0:
            raise DomainError("cv cannot be negative")


@dataclass(frozen=True)
class SteadyStateConfig:
    slope_tol: float = 0.01     # max |fitted drift| across the window, relative to mean
    cv_max: float = 0.15        # max coefficient of variation inside the window
    min_fraction: float = 0.3   # window must span this fraction of the run

    def __post_init__(self) -> None:
        if not (self.slope_tol > 0.0 and self.cv_max > 0.0):
            raise DomainError("slope_tol and cv_max must be positive")
        if not (0.0 < self.min_fraction <= 1.0):
            raise DomainError("min_fraction must be in (0, 1]")


def _window_stats(x: np.ndarray) -> tuple[float, float]:
    mean = float(x.mean())
    if mean == 0.0:
        return 0.0, 0.0
    return mean, float(x.std() / mean)


def _trimmed(run: RunSeries) -> SteadyWindow:
    t, x = run.times, run.values
    up, down = run.trim
    start = t[0] + up
    end = t[-1] - down
    if not start < end:
        raise TrimExceedsRunError(
            f"trim ({up:g}s, {down:g}s) leaves no interval in a "
            f"{t[-1] - t[0]:g}s run"
        )
    mask = (t >= start) & (t <= end)
    if int(mask.sum()) < 3:
        raise TrimExceedsRunError(
            f"trim ({up:g}s, {down:g}s) leaves {int(mask.sum())} samples; need 3"
        )
    mean, cv = _window_stats(x[mask])
    return SteadyWindow(float(start), float(end), mean, cv, int(mask.sum()))


def _detected(run: RunSeries, cfg: SteadyStateConfig) -> SteadyWindow:
    t, x = run.times, run.values
    k = len(t)
    total = t[-1] - t[0]
    # prefix sums make every window's mean, variance and fitted slope O(1);
    # timestamps are centered on t[0] so the slope terms do not cancel
    tc = t - t[0]
    zt = np.concatenate([[0.0], np.cumsum(tc)])
    zx = np.concatenate([[0.0], np.cumsum(x)])
    ztt = np.concatenate([[0.0], np.cumsum(tc * tc)])
    zxx = np.concatenate([[0.0], np.cumsum(x * x)])
    ztx = np.concatenate([[0.0], np.cumsum(tc * x)])

    best = None  # (duration, -start_index, j)
    for i in range(k - 2):
        j = np.arange(i + 2, k)
        m = j - i + 1
        st = zt[j + 1] - zt[i]
        sx = zx[j + 1] - zx[i]
        stt = ztt[j + 1] - ztt[i]
        sxx = zxx[j + 1] - zxx[i]
        stx = ztx[j + 1] - ztx[i]
        mean = sx / m
        var = np.maximum(sxx / m - mean * mean, 0.0)
        duration = t[j] - t[i]
        den = m * stt - st * st
        slope = (m * stx - st * sx) / den
        with np.errstate(divide="ignore", invalid="ignore"):
            cv = np.where(mean > 0.0, np.sqrt(var) / np.where(mean > 0, mean, 1.0), np.inf)
            drift = np.where(mean > 0.0, np.abs(slope) * duration / np.where(mean > 0, mean, 1.0), np.inf)
        valid = (mean > 0.0) & (cv <= cfg.cv_max) & (drift <= cfg.slope_tol) & (
            duration >= cfg.min_fraction * total
        )
        if valid.any():
            idx = int(np.where(valid)[0][-1])  # longest duration for this start
            cand = (float(duration[idx]), -i, int(j[idx]))
            if best is None or cand > best:
                best = cand
    if best is None:
        raise NoSteadyStateError(
            f"no window of at least {cfg.min_fraction:.0%} of the run satisfies "
            f"drift <= {cfg.slope_tol:g} and cv <= {cfg.cv_max:g}"
        )
    _, neg_i, j = best
    i = -neg_i
    mean, cv = _window_stats(x[i:j + 1])
    return SteadyWindow(float(t[i]), float(t[j]), mean, cv, j - i + 1)


def extract_steady_state(run: RunSeries, config: SteadyStateConfig | None = None) -> SteadyWindow:
    """Steady-state window of one run.

    Uses the run's explicit trim when present, otherwise automatic
    detection under config (defaults apply when omitted).  The mean is
    the plain arithmetic mean over the window.
    """
    if run.trim is not None:
        return _trimmed(run)
    return _detected(run, config or SteadyStateConfig())


def aggregate_runs(runs, config: SteadyStateConfig | None = None) -> Dataset:
    """Reduce runs to a fittable dataset of (load, steady mean) points.

    Loads must be distinct.  Extraction failures are re-raised with the
    offending load named.  Each point carries the window cv in its meta.
    """
    runs = list(runs)
    seen: set[float] = set()
    for r in runs:
        if r.load in seen:
            raise DomainError(f"duplicate load level {r.load:g} across runs")
        seen.add(r.load)
    points = []
    for r in runs:
        try:
            w = extract_steady_state(r, config)
        except UslError as e:
            raise type(e)(f"run at load {r.load:g}: {e}") from e
        points.append(
            MeasuredPoint(r.load, w.mean_throughput, meta={"cv": w.cv, "samples": w.sample_count})
        )
    return Dataset(tuple(points))
