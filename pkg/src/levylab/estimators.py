"""Monte Carlo p-th moment estimators with standard errors and mergeable accumulators.

Estimates are pure folds over samples: per-block accumulators merge
associatively in block order, which keeps parallel runs deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, PreconditionError


@dataclass(frozen=True)
class MomentEstimate:
    """Estimate of E[|X|^p] (or E[norm(X)^p]) with its standard error."""

    value: float
    standard_error: float
    n_samples: int
    p: float

    def root(self) -> "MomentEstimate":
        """Estimate of (E|X|^p)^(1/p); SE propagated by the delta method."""
        if self.value < 0:
            raise PreconditionError("cannot take root of a negative moment estimate")
        if self.value == 0.0:
            return MomentEstimate(0.0, 0.0, self.n_samples, self.p)
        v = self.value ** (1.0 / self.p)
        se = self.standard_error * v / (self.p * self.value)
        return MomentEstimate(v, se, self.n_samples, self.p)

    def scaled(self, a: float) -> "MomentEstimate":
        return MomentEstimate(a * self.value, abs(a) * self.standard_error,
                              self.n_samples, self.p)


@dataclass
class MomentAccumulator:
    """Streaming accumulator for E[|X|^p]; merge adds partial sums in order."""

    p: float
    n: int = 0
    sum1: float = 0.0
    sum2: float = 0.0

    def add(self, samples) -> "MomentAccumulator":
        y = _powers(samples, self.p)
        self.n += y.size
        self.sum1 += math.fsum(y.tolist())
        self.sum2 += math.fsum((y * y).tolist())
        return self

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if other.p != self.p:
            raise PreconditionError("cannot merge accumulators with different exponents")
        self.n += other.n
        self.sum1 += other.sum1
        self.sum2 += other.sum2
        return self

    def estimate(self) -> MomentEstimate:
        if self.n == 0:
            raise PreconditionError("empty accumulator")
        mean = self.sum1 / self.n
        if self.n == 1:
            se = 0.0
        else:
            var = max(0.0, (self.sum2 - self.n * mean * mean) / (self.n - 1))
            se = math.sqrt(var / self.n)
        return MomentEstimate(mean, se, self.n, self.p)


def _powers(samples, p: float) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        return np.abs(x) ** p
    if x.ndim == 2:
        return np.linalg.norm(x, axis=1) ** p
    raise PreconditionError("samples must be a vector or an (n, K) array")


def estimate_p_moment(samples, p: float) -> MomentEstimate:
    """Mean of |x|^p (scalars) or ||x||^p (rows of an (n, K) array), with SE."""
    if p <= 0:
        raise PreconditionError("p must be positive")
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise PreconditionError("empty sample set")
    return MomentAccumulator(p).add(x).estimate()


def merge_accumulators(accs: list[MomentAccumulator]) -> MomentAccumulator:
    """Fold accumulators in list order."""
    if not accs:
        raise PreconditionError("nothing to merge")
    out = MomentAccumulator(accs[0].p)
    for a in accs:
        out.merge(a)
    return out


@dataclass(frozen=True)
class BoundVerdict:
    """Comparison of a Monte Carlo estimate against an upper bound.

    Passes when value <= bound + 3*(SE of the estimate + SE carried by the
    bound itself when the bound was estimated too).
    """

    estimate: MomentEstimate
    bound: float
    bound_se: float = 0.0
    label: str = ""
    slack_policy: str = field(default="estimate <= bound + 3*SE", repr=False)

    @property
    def slack(self) -> float:
        return 3.0 * (self.estimate.standard_error + self.bound_se)

    @property
    def passed(self) -> bool:
        return bool(self.estimate.value <= self.bound + self.slack)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def ratio(self) -> float:
        """estimate / bound, inf when the bound is zero but the estimate is not."""
        if self.bound > 0:
            return self.estimate.value / self.bound
        return 0.0 if self.estimate.value == 0.0 else math.inf


def fit_loglog_slope(pairs) -> tuple[float, float, float]:
    """Least-squares line through (log n, log value); returns (slope, intercept, max |residual|)."""
    pts = list(pairs)
    if len(pts) < 3:
        raise ConfigError("need at least 3 points for a slope fit")
    ns = np.array([q[0] for q in pts], dtype=float)
    vs = np.array([q[1] for q in pts], dtype=float)
    if np.any(np.diff(ns) <= 0):
        raise ConfigError("abscissae must be strictly increasing")
    if np.any(vs <= 0) or np.any(ns <= 0):
        raise ConfigError("log-log fit requires positive values")
    x, y = np.log(ns), np.log(vs)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.max(np.abs(resid)))
