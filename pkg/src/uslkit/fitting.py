"""Least-squares estimation of capacity-model coefficients.

The loss is always computed on raw throughput, not on capacity ratios,
so every measurement carries equal weight.  Two modes exist:

* normalized-capacity: an n = 1 measurement pins x1 and only
  (alpha, beta) are free.  Default whenever a baseline exists.
* raw-throughput-3param: x1 is fitted alongside (alpha, beta).
  Automatic fallback when no baseline measurement is present.

The optimizer is deliberately boring and deterministic: a coarse grid
over the feasible box picks a starting cell, a projected Nelder-Mead
simplex refines it, and ties are broken toward smaller sse, then smaller
beta, then smaller alpha.  Identical input yields bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDataError,
    DomainError,
    InsufficientDataError,
    MismatchedDatasetError,
    MissingBaselineError,
    ZeroBaselineError,
)
from .model import (
    MeasuredPoint,
    Regime,
    UslParams,
    classify_regime,
    peak_concurrency,
    practical_peak,
)

MODE_AUTO = "auto"
MODE_NORMALIZED = "normalized-capacity"
MODE_RAW3 = "raw-throughput-3param"

_ALPHA_MAX = 1.0 - 1e-12  # keep fits strictly inside the open upper bound
_SNAP_EPS = 1e-9          # boundary proximity at which exact 0 is tried


@dataclass(frozen=True)
class Dataset:
    """Measurements of throughput versus concurrency, sorted by level.

    Levels must be strictly distinct; at least two points are required.
    Fewer than six points sets the significance flag, mirroring the rule
    of thumb that a meaningful fit wants half a dozen distinct loads.
    """

    points: tuple[MeasuredPoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(sorted(self.points, key=lambda p: p.n))
        if len(pts) < 2:
            raise DomainError(f"a dataset needs at least 2 points, got {len(pts)}")
        for a, b in zip(pts, pts[1:]):
            if a.n == b.n:
                raise DomainError(f"duplicate concurrency level {a.n}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_pairs(cls, pairs) -> "Dataset":
        return cls(tuple(MeasuredPoint(float(n), float(x)) for n, x in pairs))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def ns(self) -> np.ndarray:
        return np.array([p.n for p in self.points], dtype=float)

    @property
    def xs(self) -> np.ndarray:
        return np.array([p.x for p in self.points], dtype=float)

    @property
    def baseline(self) -> MeasuredPoint | None:
        """The n = 1 point when present."""
        for p in self.points:
            if p.n == 1.0:
                return p
        return None

    @property
    def has_baseline(self) -> bool:
        return self.baseline is not None

    @property
    def significance_warning(self) -> bool:
        return len(self.points) < 6

    @property
    def normalization(self) -> str:
        """Which fit mode the data supports by itself."""
        return MODE_NORMALIZED if self.has_baseline else MODE_RAW3


@dataclass(frozen=True)
class FitOptions:
    mode: str = MODE_AUTO
    beta_max: float = 1.0
    alpha_steps: int = 50
    beta_steps: int = 50
    refine_tol: float = 1e-10   # relative sse spread at which refinement stops
    max_refine_iter: int = 600

    def __post_init__(self) -> None:
        if self.mode not in (MODE_AUTO, MODE_NORMALIZED, MODE_RAW3):
            raise DomainError(f"unknown fit mode {self.mode!r}")
        if not (self.beta_max > 0.0):
            raise DomainError("beta_max must be positive")
        if self.alpha_steps < 2 or self.beta_steps < 2:
            raise DomainError("grid needs at least 2 steps per axis")
        if not (self.refine_tol > 0.0) or self.max_refine_iter < 1:
            raise DomainError("refinement settings must be positive")


@dataclass(frozen=True)
class Residual:
    n: float
    measured: float
    modeled: float
    residual: float


@dataclass(frozen=True)
class FitResult:
    """Fitted coefficients plus goodness-of-fit bookkeeping.

    The peak location is never stored: it is recomputed from params so
    the two can not drift apart.
    """

    params: UslParams
    sse: float
    r_squared: float
    residuals: tuple[Residual, ...]
    significance_warning: bool
    mode: str

    @property
    def peak(self) -> float:
        return peak_concurrency(self.params)

    @property
    def practical_peak(self) -> float:
        return practical_peak(self.params)

    @property
    def regime(self) -> Regime:
        return classify_regime(self.params)


@dataclass(frozen=True)
class FitDiagnostics:
    sse: float
    r_squared: float
    max_relative_residual: float


@dataclass(frozen=True)
class FitComparison:
    """Differences b minus a between two fits."""

    alpha_delta: float
    beta_delta: float
    peak_a: float
    peak_b: float
    peak_delta: float
    scales_further: str  # "a", "b" or "tie": which fit peaks later


def capacity_ratios(dataset: Dataset) -> list[tuple[float, float]]:
    """(n, x/x1) pairs; the n = 1 entry is exactly 1.

    Requires an n = 1 baseline with nonzero throughput.
    """
    base = dataset.baseline
    if base is None:
        raise MissingBaselineError("capacity ratios need an n = 1 measurement")
    if base.x == 0.0:
        raise ZeroBaselineError("n = 1 throughput is zero; ratios are undefined")
    return [(p.n, p.x / base.x) for p in dataset.points]


def _capacity_grid(ns: np.ndarray, alpha, beta) -> np.ndarray:
    # broadcasts over leading grid axes; last axis is the point index
    return ns / (1.0 + alpha * (ns - 1.0) + beta * ns * (ns - 1.0))


def _profiled_x1(c: np.ndarray, xs: np.ndarray) -> float:
    # closed-form least-squares scale for fixed (alpha, beta)
    return float(np.dot(xs, c) / np.dot(c, c))


def _make_objective(ns: np.ndarray, xs: np.ndarray, x1_pin: float | None):
    if x1_pin is not None:
        def f(theta: np.ndarray) -> float:
            c = _capacity_grid(ns, theta[0], theta[1])
            r = xs - x1_pin * c
            return float(np.dot(r, r))
    else:
        def f(theta: np.ndarray) -> float:
            c = _capacity_grid(ns, theta[0], theta[1])
            r = xs - _profiled_x1(c, xs) * c
            return float(np.dot(r, r))
    return f


def _grid_start(ns, xs, x1_pin, opt: FitOptions) -> tuple[float, float]:
    alphas = np.linspace(0.0, 1.0, opt.alpha_steps, endpoint=False)
    betas = np.concatenate(
        [[0.0], np.geomspace(opt.beta_max * 1e-10, opt.beta_max, opt.beta_steps)]
    )
    a = alphas[:, None, None]
    b = betas[None, :, None]
    c = _capacity_grid(ns[None, None, :], a, b)
    if x1_pin is not None:
        r = xs[None, None, :] - x1_pin * c
        sse = np.einsum("abp,abp->ab", r, r)
    else:
        dot = c @ xs
        c2 = np.einsum("abp,abp->ab", c, c)
        sse = float(np.dot(xs, xs)) - dot * dot / c2
    aa, bb = np.meshgrid(alphas, betas, indexing="ij")
    # lexsort: primary sse, then beta, then alpha
    order = np.lexsort((aa.ravel(), bb.ravel(), sse.ravel()))
    best = order[0]
    return float(aa.ravel()[best]), float(bb.ravel()[best])


def _project(theta: np.ndarray, beta_max: float) -> np.ndarray:
    return np.array(
        [min(max(theta[0], 0.0), _ALPHA_MAX), min(max(theta[1], 0.0), beta_max)]
    )


def _nelder_mead(f, start: np.ndarray, steps: np.ndarray, beta_max: float,
                 tol: float, max_iter: int) -> tuple[np.ndarray, float]:
    """Projected simplex descent in the (alpha, beta) box.

    Every candidate vertex is clamped into the feasible box before
    evaluation, so the boundary coefficients 0 are reachable exactly.
    """
    verts = [_project(start, beta_max)]
    for i in range(2):
        v = start.copy()
        v[i] += steps[i]
        v = _project(v, beta_max)
        if np.array_equal(v, verts[0]):
            v = start.copy()
            v[i] -= steps[i]
            v = _project(v, beta_max)
        verts.append(v)
    fs = [f(v) for v in verts]

    for _ in range(max_iter):
        order = sorted(range(3), key=lambda i: (fs[i], i))
        verts = [verts[i] for i in order]
        fs = [fs[i] for i in order]
        spread = fs[2] - fs[0]
        diam = max(np.max(np.abs(verts[1] - verts[0])), np.max(np.abs(verts[2] - verts[0])))
        if spread <= tol * max(abs(fs[0]), 1e-300) or diam <= 1e-13 * (1.0 + np.max(np.abs(verts[0]))):
            break
        centroid = (verts[0] + verts[1]) / 2.0
        xr = _project(centroid + (centroid - verts[2]), beta_max)
        fr = f(xr)
        if fr < fs[0]:
            xe = _project(centroid + 2.0 * (centroid - verts[2]), beta_max)
            fe = f(xe)
            if fe < fr:
                verts[2], fs[2] = xe, fe
            else:
                verts[2], fs[2] = xr, fr
        elif fr < fs[1]:
            verts[2], fs[2] = xr, fr
        else:
            if fr < fs[2]:
                xc = _project(centroid + 0.5 * (xr - centroid), beta_max)
            else:
                xc = _project(centroid + 0.5 * (verts[2] - centroid), beta_max)
            fc = f(xc)
            if fc < min(fr, fs[2]):
                verts[2], fs[2] = xc, fc
            else:
                for i in (1, 2):
                    verts[i] = _project(verts[0] + 0.5 * (verts[i] - verts[0]), beta_max)
                    fs[i] = f(verts[i])
    order = sorted(range(3), key=lambda i: (fs[i], i))
    return verts[order[0]], fs[order[0]]


def _minimize(ns, xs, x1_pin, opt: FitOptions) -> tuple[float, float, float]:
    f = _make_objective(ns, xs, x1_pin)
    a0, b0 = _grid_start(ns, xs, x1_pin, opt)
    theta = np.array([a0, b0])
    fbest = f(theta)
    da = max(0.5 / opt.alpha_steps, 1e-6)
    db = 0.5 * b0 if b0 > 0.0 else 1e-6 * opt.beta_max
    steps = np.array([da, db])
    # second pass restarts the simplex tighter around the first answer
    for scale in (1.0, 0.1):
        theta, fbest = _nelder_mead(
            f, theta, steps * scale, opt.beta_max, opt.refine_tol, opt.max_refine_iter
        )
    # coefficients this close to 0 are tried at exactly 0; kept on ties,
    # matching the smaller-beta-then-smaller-alpha preference
    candidates = [(fbest, float(theta[1]), float(theta[0]))]
    near_a0 = theta[0] < _SNAP_EPS
    near_b0 = theta[1] < _SNAP_EPS * opt.beta_max
    if near_a0:
        candidates.append((f(np.array([0.0, theta[1]])), float(theta[1]), 0.0))
    if near_b0:
        candidates.append((f(np.array([theta[0], 0.0])), 0.0, float(theta[0])))
    if near_a0 and near_b0:
        candidates.append((f(np.array([0.0, 0.0])), 0.0, 0.0))
    sse, beta, alpha = min(candidates)
    return alpha, beta, sse


def _resolve_mode(dataset: Dataset, opt: FitOptions) -> str:
    if opt.mode == MODE_AUTO:
        return dataset.normalization
    return opt.mode


def _fit_arrays(ns: np.ndarray, xs: np.ndarray, x1_pin: float | None,
                opt: FitOptions) -> tuple[float, float, float]:
    """Core fit on raw arrays; x1_pin None means the 3-parameter mode.

    Returns (alpha, beta, x1).  Used directly by the bootstrap, where
    resampling produces repeated levels that Dataset would reject.
    """
    alpha, beta, _ = _minimize(ns, xs, x1_pin, opt)
    if x1_pin is not None:
        x1 = x1_pin
    else:
        c = _capacity_grid(ns, alpha, beta)
        x1 = _profiled_x1(c, xs)
    return alpha, beta, x1


def fit_usl(dataset: Dataset, options: FitOptions | None = None) -> FitResult:
    """Fit (alpha, beta) and, without a baseline, x1 to the dataset.

    Raises InsufficientDataError below 3 distinct levels (4 for the
    3-parameter mode), DegenerateDataError when every throughput is
    zero, and the baseline errors when a requested normalized fit has
    no usable n = 1 point.
    """
    opt = options or FitOptions()
    ns, xs = dataset.ns, dataset.xs
    if not np.any(xs > 0.0):
        raise DegenerateDataError("every throughput is zero; nothing to fit")
    mode = _resolve_mode(dataset, opt)

    if mode == MODE_NORMALIZED:
        base = dataset.baseline
        if base is None:
            raise MissingBaselineError("normalized fit needs an n = 1 measurement")
        if base.x == 0.0:
            raise ZeroBaselineError("n = 1 throughput is zero")
        if len(dataset) < 3:
            raise InsufficientDataError("normalized fit needs at least 3 distinct levels")
        alpha, beta, x1 = _fit_arrays(ns, xs, base.x, opt)
    else:
        if len(dataset) < 4:
            raise InsufficientDataError("3-parameter fit needs at least 4 distinct levels")
        alpha, beta, x1 = _fit_arrays(ns, xs, None, opt)

    params = UslParams(alpha, beta, x1)
    modeled = x1 * _capacity_grid(ns, alpha, beta)
    res = xs - modeled
    sse = float(np.dot(res, res))
    tss = float(np.dot(xs - xs.mean(), xs - xs.mean()))
    if tss == 0.0:
        r2 = 1.0 if sse == 0.0 else 0.0
    else:
        r2 = 1.0 - sse / tss
    rows = tuple(
        Residual(float(n), float(x), float(m), float(r))
        for n, x, m, r in zip(ns, xs, modeled, res)
    )
    return FitResult(
        params=params,
        sse=sse,
        r_squared=r2,
        residuals=rows,
        significance_warning=dataset.significance_warning,
        mode=mode,
    )


def evaluate_fit(result: FitResult, dataset: Dataset) -> FitDiagnostics:
    """Recompute goodness of fit point by point against the dataset.

    Deliberately accumulates in a plain loop, independent of the fit
    path, so it doubles as a cross-check of the stored sse.
    """
    fit_ns = [r.n for r in result.residuals]
    data_ns = [p.n for p in dataset.points]
    if fit_ns != data_ns:
        raise MismatchedDatasetError(
            f"fit covers levels {fit_ns} but dataset has {data_ns}"
        )
    params = result.params
    if params.x1 is None:
        raise MismatchedDatasetError("fit result carries no x1; cannot model throughput")
    sse = 0.0
    mean = 0.0
    for p in dataset.points:
        mean += p.x
    mean /= len(dataset.points)
    tss = 0.0
    max_rel = 0.0
    for p in dataset.points:
        denom = 1.0 + params.alpha * (p.n - 1.0) + params.beta * p.n * (p.n - 1.0)
        modeled = params.x1 * (p.n / denom)
        r = p.x - modeled
        sse += r * r
        tss += (p.x - mean) * (p.x - mean)
        scale = abs(p.x) if p.x != 0.0 else 1.0
        max_rel = max(max_rel, abs(r) / scale)
    if tss == 0.0:
        r2 = 1.0 if sse == 0.0 else 0.0
    else:
        r2 = 1.0 - sse / tss
    return FitDiagnostics(sse=sse, r_squared=r2, max_relative_residual=max_rel)


def compare_fits(a: FitResult, b: FitResult) -> FitComparison:
    """Before/after comparison; deltas are b minus a."""
    pa, pb = peak_concurrency(a.params), peak_concurrency(b.params)
    if math.isinf(pa) and math.isinf(pb):
        delta = 0.0
    else:
        delta = pb - pa
    if pa == pb:
        further = "tie"
    else:
        further = "a" if pa > pb else "b"
    return FitComparison(
        alpha_delta=b.params.alpha - a.params.alpha,
        beta_delta=b.params.beta - a.params.beta,
        peak_a=pa,
        peak_b=pb,
        peak_delta=delta,
        scales_further=further,
    )


@dataclass(frozen=True)
class BootstrapResult:
    """Percentile intervals from resampling points with replacement.

    Approximate by construction: replicates reuse the original fit mode
    and, in normalized mode, keep x1 pinned to the measured baseline.
    Intended for error bars on plots, not formal inference.
    """

    alpha_interval: tuple[float, float]
    beta_interval: tuple[float, float]
    x1_interval: tuple[float, float]
    replicates: int
    seed: int
    level: float


def bootstrap_confidence(dataset: Dataset, options: FitOptions | None = None,
                         replicates: int = 200, seed: int = 0,
                         level: float = 0.95) -> BootstrapResult:
    if not (0.0 < level < 1.0):
        raise DomainError(f"confidence level must be in (0, 1), got {level}")
    if replicates < 2:
        raise DomainError("need at least 2 replicates")
    opt = options or FitOptions()
    base_fit = fit_usl(dataset, opt)
    x1_pin = dataset.baseline.x if base_fit.mode == MODE_NORMALIZED else None
    ns, xs = dataset.ns, dataset.xs
    rng = np.random.default_rng(seed)
    draws = np.empty((replicates, 3))
    for i in range(replicates):
        idx = rng.integers(0, len(ns), size=len(ns))
        draws[i] = _fit_arrays(ns[idx], xs[idx], x1_pin, opt)
    lo = (1.0 - level) / 2.0
    hi = 1.0 - lo
    q = np.quantile(draws, [lo, hi], axis=0)
    return BootstrapResult(
        alpha_interval=(float(q[0, 0]), float(q[1, 0])),
        beta_interval=(float(q[0, 1]), float(q[1, 1])),
        x1_interval=(float(q[0, 2]), float(q[1, 2])),
        replicates=replicates,
        seed=seed,
        level=level,
    )
