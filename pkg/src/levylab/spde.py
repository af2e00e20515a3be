"""Mild-solution machinery for dX = (AX + B(X)) dt + G(X) dL on a diagonal spectrum.

The generator is A = diag(-lambda_k) with lambda_k >= 0, so the semigroup is
the coordinatewise exponential and contracts (m = 1, omega = 0). Both the
drift convolution and the stochastic convolution are left-endpoint sums on a
uniform grid, evaluated through the one-step recurrence
C_{i+1} = S(dt) (C_i + increment_i), which is exact for the diagonal
semigroup and keeps the cost linear in the number of grid points.

The Picard iteration reuses one set of noise increments across iterations
(common random numbers), so the measured iterate distances test the
contraction of the solution map rather than Monte Carlo noise. An
exponential-Euler stepper with independent streams serves as the oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import quad

from .errors import AssumptionViolation, ConfigError, PreconditionError
from .estimators import MomentEstimate, estimate_p_moment
from .integral import martingale_type_constant
from .levy import CylLevySpec, cyl_drift_vector, cyl_increments
from .operators import FiniteRankOperator, diagonal_operator, pi_p_upper
from .rng import RngStream, as_generator

# ---------------------------------------------------------------------------
# semigroup


@dataclass(frozen=True)
class SemigroupSpec:
    """Diagonal contraction semigroup S(t) = diag(exp(-lambda_k t))."""

    eigenvalues: tuple

    def __post_init__(self):
        evs = tuple(float(v) for v in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", evs)
        if len(evs) == 0 or any(v < 0 for v in evs):
            raise ConfigError("eigenvalues must be nonnegative")

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    # growth envelope |S(t)| <= m exp(omega t)
    m = 1.0
    omega = 0.0

    def factors(self, t: float) -> np.ndarray:
        return np.exp(-np.asarray(self.eigenvalues) * t)

    def operator(self, t: float) -> FiniteRankOperator:
        return diagonal_operator(self.factors(t))


def heat_semigroup(dim: int) -> SemigroupSpec:
    """Dirichlet heat spectrum lambda_k = (k pi)^2, k = 1..dim."""
    return SemigroupSpec(tuple((k * math.pi) ** 2 for k in range(1, dim + 1)))


def semigroup_apply(semi: SemigroupSpec, t: float, v: np.ndarray) -> np.ndarray:
    """S(t) v, coordinatewise; t must be nonnegative."""
    if t < 0:
        raise ConfigError("t must be nonnegative")
    return semi.factors(t) * np.asarray(v, dtype=float)


# ---------------------------------------------------------------------------
# scalar factors and coefficient maps


@dataclass(frozen=True)
class ScalarFactor:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]  # (n, K) -> (n,)
    bound: float
    lipschitz: float


FACTORS = {
    "one": ScalarFactor("one", lambda X: np.ones(X.shape[0]), 1.0, 0.0),
    "one_plus_sin_norm": ScalarFactor(
        "one_plus_sin_norm",
        lambda X: 1.0 + np.sin(np.linalg.norm(X, axis=1)), 2.0, 1.0),
}


def _factor(name: str) -> ScalarFactor:
    if name not in FACTORS:
        raise ConfigError(f"unknown factor formula {name!r}")
    return FACTORS[name]


@dataclass(frozen=True)
class ZeroDrift:
    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        return np.zeros_like(X)

    def bound_function(self, semi: SemigroupSpec) -> Callable[[float], float]:
        return lambda t: 0.0


@dataclass(frozen=True)
class DiagonalLinearDrift:
    """B(x) = diag(c) x."""

    coefficients: tuple

    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        return X * np.asarray(self.coefficients)

    def bound_function(self, semi: SemigroupSpec) -> Callable[[float], float]:
        c = np.abs(np.asarray(self.coefficients))
        lam = np.asarray(semi.eigenvalues)
        return lambda t: float(np.max(np.exp(-lam * t) * c))


@dataclass(frozen=True)
class ScalarFactorDrift:
    """B(x) = factor(x) * v for a bounded Lipschitz scalar factor.

    The image is the fixed vector v, not diag(v) x: multiplying the state by
    an unbounded factor would break the global Lipschitz requirement.
    """

    vector: tuple
    factor: str = "one"

    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        f = _factor(self.factor)
        return f.fn(X)[:, None] * np.asarray(self.vector)

    def bound_function(self, semi: SemigroupSpec) -> Callable[[float], float]:
        f = _factor(self.factor)
        v = np.asarray(self.vector)
        lam = np.asarray(semi.eigenvalues)
        const = max(f.bound, f.lipschitz)
        return lambda t: const * float(np.linalg.norm(np.exp(-lam * t) * v))


DriftCoefficient = Union[ZeroDrift, DiagonalLinearDrift, ScalarFactorDrift]


@dataclass(frozen=True)
class ZeroDiffusion:
    def operator(self, x: np.ndarray, dim_noise: int) -> FiniteRankOperator:
        return diagonal_operator(np.zeros(dim_noise))

    def apply_noise_batch(self, X: np.ndarray, dL: np.ndarray) -> np.ndarray:
        return np.zeros_like(dL)

    def bound_function(self, semi, p):
        return lambda t: 0.0


@dataclass(frozen=True)
class ConstantDiagonalDiffusion:
    """G(x) = diag(q), independent of the state (additive noise)."""

    coefficients: tuple

    def operator(self, x, dim_noise) -> FiniteRankOperator:
        return diagonal_operator(np.asarray(self.coefficients))

    def apply_noise_batch(self, X: np.ndarray, dL: np.ndarray) -> np.ndarray:
        return dL * np.asarray(self.coefficients)

    def bound_function(self, semi: SemigroupSpec, p: float) -> Callable[[float], float]:
        return _diag_profile(semi, np.asarray(self.coefficients), p, 1.0)


@dataclass(frozen=True)
class ScalarFactorDiagonalDiffusion:
    """G(x) = factor(x) * diag(q)."""

    coefficients: tuple
    factor: str = "one_plus_sin_norm"

    def operator(self, x, dim_noise) -> FiniteRankOperator:
        f = _factor(self.factor)
        val = float(f.fn(np.atleast_2d(np.asarray(x, dtype=float)))[0])
        return diagonal_operator(val * np.asarray(self.coefficients))

    def apply_noise_batch(self, X: np.ndarray, dL: np.ndarray) -> np.ndarray:
        f = _factor(self.factor)
        return f.fn(X)[:, None] * dL * np.asarray(self.coefficients)

    def bound_function(self, semi: SemigroupSpec, p: float) -> Callable[[float], float]:
        f = _factor(self.factor)
        return _diag_profile(semi, np.asarray(self.coefficients), p,
                             max(f.bound, f.lipschitz))


def _diag_profile(semi: SemigroupSpec, q: np.ndarray, p: float, const: float):
    """t -> const * pi_p-profile of S(t) diag(q) (HS at p=2, entry sum below)."""
    lam = np.asarray(semi.eigenvalues)
    absq = np.abs(q)
    if p == 2.0:
        return lambda t: const * float(np.sqrt(np.sum(np.exp(-2.0 * lam * t) * absq**2)))
    return lambda t: const * float(np.sum(np.exp(-lam * t) * absq))


DiffusionCoefficient = Union[ZeroDiffusion, ConstantDiagonalDiffusion,
                             ScalarFactorDiagonalDiffusion]


# ---------------------------------------------------------------------------
# initial laws


@dataclass(frozen=True)
class DeterministicInitial:
    value: tuple

    def sample(self, gen, n: int) -> np.ndarray:
        return np.tile(np.asarray(self.value, dtype=float), (n, 1))

    def second_moment(self) -> float:
        return float(np.sum(np.asarray(self.value, dtype=float) ** 2))


@dataclass(frozen=True)
class GaussianDiagonalInitial:
    sigmas: tuple

    def sample(self, gen, n: int) -> np.ndarray:
        return gen.standard_normal((n, len(self.sigmas))) * np.asarray(self.sigmas)

    def second_moment(self) -> float:
        return float(np.sum(np.asarray(self.sigmas, dtype=float) ** 2))


@dataclass(frozen=True)
class TwoPointDiagonalInitial:
    a: tuple

    def sample(self, gen, n: int) -> np.ndarray:
        signs = np.where(gen.random((n, len(self.a))) < 0.5, -1.0, 1.0)
        return signs * np.asarray(self.a)

    def second_moment(self) -> float:
        return float(np.sum(np.asarray(self.a, dtype=float) ** 2))


InitialLaw = Union[DeterministicInitial, GaussianDiagonalInitial, TwoPointDiagonalInitial]


# ---------------------------------------------------------------------------
# problem


@dataclass(frozen=True)
class MildProblem:
    semigroup: SemigroupSpec
    drift: DriftCoefficient
    diffusion: DiffusionCoefficient
    noise: CylLevySpec
    initial: InitialLaw
    horizon: float
    p: float

    def __post_init__(self):
        if self.horizon <= 0:
            raise ConfigError("horizon must be positive")
        if not (1.0 <= self.p <= 2.0):
            raise ConfigError("p must lie in [1, 2]")
        if self.noise.dim != self.semigroup.dim:
            raise ConfigError("noise truncation must match the spectrum dimension")

    @property
    def dim(self) -> int:
        return self.semigroup.dim

    def b_bound(self) -> Callable[[float], float]:
        return self.drift.bound_function(self.semigroup)

    def g_bound(self) -> Callable[[float], float]:
        return self.diffusion.bound_function(self.semigroup, self.p)


# ---------------------------------------------------------------------------
# dominating-function check


@dataclass(frozen=True)
class BoundCheckReport:
    max_ratios: dict
    n_samples: int
    t_grid: tuple

    @property
    def worst(self) -> float:
        return max(self.max_ratios.values())


def bound_functions_check(problem: MildProblem, n_samples: int = 48,
                          t_grid=None, stream=None) -> BoundCheckReport:
    """Sampled verification of the four dominating-function inequalities.

    Growth and Lipschitz bounds for the drift (in the state norm) and for the
    diffusion (in the p-summing upper bound) on random state pairs and grid
    times; any ratio above 1 + 1e-9 raises AssumptionViolation naming the
    failing inequality.
    """
    gen = as_generator(stream if stream is not None else RngStream(0xB0B, 0))
    K = problem.dim
    ts = tuple(t_grid) if t_grid is not None else tuple(
        problem.horizon * u for u in (0.0, 0.01, 0.05, 0.2, 0.5, 1.0))
    radii = np.concatenate([np.ones(n_samples // 2), 10.0 * np.ones(n_samples - n_samples // 2)])
    xs = gen.standard_normal((n_samples, K)) * radii[:, None]
    ys = gen.standard_normal((n_samples, K)) * radii[:, None]
    xs[0] = 0.0  # growth bounds are tightest at the origin
    b, g = problem.b_bound(), problem.g_bound()
    semi, p = problem.semigroup, problem.p
    ratios = {"drift-growth": 0.0, "drift-lipschitz": 0.0,
              "diffusion-growth": 0.0, "diffusion-lipschitz": 0.0}
    tol = 1.0 + 1e-9
    for t in ts:
        fac = semi.factors(t)
        bt, gt = b(t), g(t)
        Bx = problem.drift.apply_batch(xs)
        By = problem.drift.apply_batch(ys)
        lhs_growth = np.linalg.norm(fac * Bx, axis=1)
        lhs_lip = np.linalg.norm(fac * (Bx - By), axis=1)
        norms_x = np.linalg.norm(xs, axis=1)
        diff_norms = np.linalg.norm(xs - ys, axis=1)
        for i in range(n_samples):
            if bt > 0 or lhs_growth[i] > 0:
                ratios["drift-growth"] = max(
                    ratios["drift-growth"],
                    _ratio(lhs_growth[i], bt * (1.0 + norms_x[i])))
            if diff_norms[i] > 0:
                ratios["drift-lipschitz"] = max(
                    ratios["drift-lipschitz"], _ratio(lhs_lip[i], bt * diff_norms[i]))
            gx = problem.diffusion.operator(xs[i], K)
            gy = problem.diffusion.operator(ys[i], K)
            st_gx = diagonal_operator(fac * np.diag(gx.matrix))
            st_diff = diagonal_operator(fac * (np.diag(gx.matrix) - np.diag(gy.matrix)))
            ratios["diffusion-growth"] = max(
                ratios["diffusion-growth"],
                _ratio(pi_p_upper(st_gx, p), gt * (1.0 + norms_x[i])))
            if diff_norms[i] > 0:
                ratios["diffusion-lipschitz"] = max(
                    ratios["diffusion-lipschitz"],
                    _ratio(pi_p_upper(st_diff, p), gt * diff_norms[i]))
    for name, r in ratios.items():
        if r > tol:
            raise AssumptionViolation(
                f"dominating-function inequality {name} violated with ratio {r}",
                inequality=name, ratio=r)
    return BoundCheckReport(ratios, n_samples, ts)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return 0.0 if lhs <= 1e-300 else math.inf
    return lhs / rhs


# ---------------------------------------------------------------------------
# contraction constants


@dataclass(frozen=True)
class ContractionConstants:
    beta: float
    C: float
    C_prime: float
    p: float
    c_constant: float
    rp_norm: float
    rp_empirical: bool

    @property
    def bound(self) -> float:
        """2^{p-1} (C + C'); the map contracts when this is below 1."""
        return 2.0 ** (self.p - 1.0) * (self.C + self.C_prime)

    @property
    def distance_ratio(self) -> float:
        """The same bound on the seminorm scale (its 1/p power)."""
        return self.bound ** (1.0 / self.p)


def noise_continuity_constant(problem: MildProblem, n_paths: int = 20000,
                              stream=None) -> tuple[float, float, bool]:
    """c with E|integral|^p <= c Lambda^p for this noise, plus the growth norm used.

    Assembled exactly like the integral-continuity verifier: drift part via
    Holder, martingale part via the p-th moment constant times the growth
    norm of the centered noise (closed form at p = 2, else an empirical
    sphere-search estimate, flagged).
    """
    from .integral import drift_martingale_split, _default_rp_grid
    from .levy import rp_operator_norm

    p, T = problem.p, problem.horizon
    split = drift_martingale_split(problem.noise)
    bnorm = float(np.linalg.norm(split.drift))
    rp = rp_operator_norm(split.martingale, p, _default_rp_grid(T),
                          n_paths=n_paths,
                          stream=stream if stream is not None else RngStream(0xC0, 0))
    cp = martingale_type_constant(p)
    c = 2.0 ** (p - 1.0) * (T ** (p - 1.0) * bnorm**p + cp * rp.value**p)
    return c, rp.value, rp.standard_error > 0.0


def contraction_constants(problem: MildProblem, beta: float,
                          c_constant: Optional[float] = None,
                          stream=None) -> ContractionConstants:
    """Quadrature of the two weighted coefficient integrals at a given beta.

    C(beta) = (integral of b)^{p-1} * integral of b(s) e^{-beta s};
    C'(beta) = c * integral of e^{-beta s} g(s)^p. The constant c defaults
    to the noise continuity constant estimated from the problem's noise.
    """
    p, T = problem.p, problem.horizon
    b, g = problem.b_bound(), problem.g_bound()
    rp_val, rp_emp = 0.0, False
    if c_constant is None:
        c_constant, rp_val, rp_emp = noise_continuity_constant(problem, stream=stream)
    int_b = quad(b, 0.0, T, epsrel=1e-8, limit=200)[0]
    int_b_beta = quad(lambda s: b(s) * math.exp(-beta * s), 0.0, T,
                      epsrel=1e-8, limit=200)[0]
    int_g_beta = quad(lambda s: math.exp(-beta * s) * g(s) ** p, 0.0, T,
                      epsrel=1e-8, limit=200)[0]
    C = int_b ** (p - 1.0) * int_b_beta
    C_prime = c_constant * int_g_beta
    return ContractionConstants(beta, C, C_prime, p, c_constant, rp_val, rp_emp)


def find_contraction_beta(problem: MildProblem, cap: float = 2000.0,
                          c_constant: Optional[float] = None,
                          stream=None) -> tuple[float, ContractionConstants]:
    """Smallest beta (on a bisection) with 2^{p-1}(C + C') < 1, then doubled for margin."""
    if c_constant is None:
        c_constant, _, _ = noise_continuity_constant(problem, stream=stream)

    def bound_at(beta):
        return contraction_constants(problem, beta, c_constant=c_constant).bound

    if bound_at(0.0) < 1.0:
        return 0.0, contraction_constants(problem, 0.0, c_constant=c_constant)
    lo, hi = 0.0, 1.0
    while bound_at(hi) >= 1.0:
        hi *= 2.0
        if hi > cap:
            raise PreconditionError(
                f"no contracting beta below {cap}; bound at cap is {bound_at(cap)}")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bound_at(mid) < 1.0:
            hi = mid
        else:
            lo = mid
    beta = 2.0 * hi
    return beta, contraction_constants(problem, beta, c_constant=c_constant)


# ---------------------------------------------------------------------------
# paths, ensembles and the weighted seminorm


@dataclass(frozen=True)
class Ensemble:
    """Sampled trajectories on a uniform grid plus per-time moment estimates."""

    times: np.ndarray
    paths: np.ndarray  # (n_paths, n_times, K)
    p: float

    def moment(self, i: int) -> MomentEstimate:
        return estimate_p_moment(self.paths[:, i, :], self.p)

    def moments(self) -> list[MomentEstimate]:
        return [self.moment(i) for i in range(len(self.times))]

    @property
    def sup_moment(self) -> float:
        return max(m.value for m in self.moments())


def weighted_norm(paths_a: np.ndarray, paths_b: Optional[np.ndarray], times,
                  beta: float, p: float) -> MomentEstimate:
    """(sup_t e^{-beta t} E|A(t) - B(t)|^p)^{1/p} over a common grid.

    The standard error is the delta-method error at the maximizing time.
    """
    diff = paths_a if paths_b is None else paths_a - paths_b
    times = np.asarray(times, dtype=float)
    if diff.shape[1] != times.size:
        raise ConfigError("paths and grid do not match")
    best_val, best_est = -1.0, None
    for i, t in enumerate(times):
        est = estimate_p_moment(diff[:, i, :], p)
        v = math.exp(-beta * t) * est.value
        if v > best_val:
            best_val = v
            best_est = MomentEstimate(v, math.exp(-beta * t) * est.standard_error,
                                      est.n_samples, p)
    return best_est.root()


def draw_problem_samples(problem: MildProblem, n_steps: int, n_paths: int,
                         stream) -> tuple[np.ndarray, np.ndarray]:
    """Initial values (n, K) and noise increments (n, n_steps, K) for one grid."""
    gen = as_generator(stream)
    dt = problem.horizon / n_steps
    x0 = problem.initial.sample(gen, n_paths)
    dls = np.empty((n_paths, n_steps, problem.dim))
    for j in range(n_steps):
        dls[:, j, :] = cyl_increments(problem.noise, dt, n_paths, gen)
    return x0, dls


def _apply_solution_map(problem: MildProblem, X: np.ndarray, x0: np.ndarray,
                        dls: np.ndarray, dt: float) -> np.ndarray:
    """One application of the variation-of-constants map to a path bundle.

    Left-endpoint sums via the semigroup recurrence; exact for the diagonal
    exponential on a uniform grid.
    """
    n_paths, n_times, K = X.shape
    n_steps = n_times - 1
    s_dt = problem.semigroup.factors(dt)
    out = np.empty_like(X)
    out[:, 0, :] = x0
    s_ti = np.ones(K)
    drift_conv = np.zeros((n_paths, K))
    noise_conv = np.zeros((n_paths, K))
    for i in range(n_steps):
        bx = problem.drift.apply_batch(X[:, i, :])
        gdl = problem.diffusion.apply_noise_batch(X[:, i, :], dls[:, i, :])
        drift_conv = s_dt * (drift_conv + dt * bx)
        noise_conv = s_dt * (noise_conv + gdl)
        s_ti = s_ti * s_dt
        out[:, i + 1, :] = s_ti * x0 + drift_conv + noise_conv
    return out


def stochastic_convolution(problem: MildProblem, X: np.ndarray, times,
                           dls: np.ndarray) -> np.ndarray:
    """Left-endpoint convolution sum_{j<i} S(t_i - t_j) G(X(t_j)) dL_j.

    The increments are shared across all output times, so the path of the
    convolution is consistently coupled in t.
    """
    times = np.asarray(times, dtype=float)
    dt = times[1] - times[0]
    n_paths, n_times, K = X.shape
    s_dt = problem.semigroup.factors(dt)
    out = np.zeros_like(X)
    conv = np.zeros((n_paths, K))
    for i in range(n_times - 1):
        gdl = problem.diffusion.apply_noise_batch(X[:, i, :], dls[:, i, :])
        conv = s_dt * (conv + gdl)
        out[:, i + 1, :] = conv
    return out


def drift_convolution(problem: MildProblem, X: np.ndarray, times) -> np.ndarray:
    """Left-endpoint quadrature of S(t - s) B(X(s))."""
    times = np.asarray(times, dtype=float)
    dt = times[1] - times[0]
    n_paths, n_times, K = X.shape
    s_dt = problem.semigroup.factors(dt)
    out = np.zeros_like(X)
    conv = np.zeros((n_paths, K))
    for i in range(n_times - 1):
        conv = s_dt * (conv + dt * problem.drift.apply_batch(X[:, i, :]))
        out[:, i + 1, :] = conv
    return out


@dataclass(frozen=True)
class PicardResult:
    ensemble: Ensemble
    distances: tuple
    ratios: tuple
    constants: ContractionConstants
    beta: float
    converged: bool
    diverged: bool
    iterations: int

    @property
    def max_ratio(self) -> float:
        return max(self.ratios) if self.ratios else 0.0


def picard_solve(problem: MildProblem, n_steps: int = 64, beta: Optional[float] = None,
                 n_paths: int = 2000, stream=None, max_iter: int = 25,
                 tol: float = 1e-4, presampled=None,
                 constants: Optional[ContractionConstants] = None,
                 initial_paths: Optional[np.ndarray] = None) -> PicardResult:
    """Fixed-point iteration of the variation-of-constants map.

    Starts from S(t) X0 (or ``initial_paths``), reuses the same noise across
    iterations, and records the weighted iterate distances d_n; geometric
    decay of d_n with ratio below the predicted contraction bound is the
    testable content of the fixed-point argument. Divergence (three
    consecutive increases) aborts with diagnostics.
    """
    stream = stream if stream is not None else RngStream(0x9C, 0)
    if beta is None:
        beta, constants = find_contraction_beta(problem, stream=stream)
    elif constants is None:
        constants = contraction_constants(problem, beta, stream=stream)
    if constants.bound >= 1.0:
        warnings.warn(f"supplied beta={beta} does not certify a contraction "
                      f"(bound {constants.bound:.3f} >= 1)")
    dt = problem.horizon / n_steps
    times = np.arange(n_steps + 1) * dt
    x0, dls = presampled if presampled is not None else draw_problem_samples(
        problem, n_steps, n_paths, stream)
    n_paths = x0.shape[0]
    if initial_paths is not None:
        X = initial_paths.copy()
    else:
        X = np.empty((n_paths, n_steps + 1, problem.dim))
        s_dt = problem.semigroup.factors(dt)
        s_ti = np.ones(problem.dim)
        X[:, 0, :] = x0
        for i in range(n_steps):
            s_ti = s_ti * s_dt
            X[:, i + 1, :] = s_ti * x0
    distances, ratios = [], []
    converged = diverged = False
    increases = 0
    for it in range(max_iter):
        X_new = _apply_solution_map(problem, X, x0, dls, dt)
        d = weighted_norm(X_new, X, times, beta, problem.p)
        distances.append(d.value)
        if len(distances) >= 2 and distances[-2] > 0:
            r = distances[-1] / distances[-2]
            ratios.append(r)
            if distances[-1] > distances[-2]:
                increases += 1
                if increases >= 3:
                    diverged = True
                    X = X_new
                    break
            else:
                increases = 0
        X = X_new
        if d.value <= tol:
            converged = True
            break
    ensemble = Ensemble(times, X, problem.p)
    return PicardResult(ensemble, tuple(distances), tuple(ratios), constants,
                        beta, converged, diverged, len(distances))


def exp_euler_solve(problem: MildProblem, n_steps: int = 64, n_paths: int = 2000,
                    stream=None, presampled=None) -> Ensemble:
    """Exponential-Euler stepping X_{j+1} = S(dt)(X_j + B(X_j) dt + G(X_j) dL_j).

    Serves as the independent cross-check of the fixed-point solution.
    """
    stream = stream if stream is not None else RngStream(0xE0, 0)
    dt = problem.horizon / n_steps
    times = np.arange(n_steps + 1) * dt
    x0, dls = presampled if presampled is not None else draw_problem_samples(
        problem, n_steps, n_paths, stream)
    n_paths = x0.shape[0]
    s_dt = problem.semigroup.factors(dt)
    X = np.empty((n_paths, n_steps + 1, problem.dim))
    X[:, 0, :] = x0
    cur = x0.copy()
    for j in range(n_steps):
        bx = problem.drift.apply_batch(cur)
        gdl = problem.diffusion.apply_noise_batch(cur, dls[:, j, :])
        cur = s_dt * (cur + dt * bx + gdl)
        X[:, j + 1, :] = cur
    return Ensemble(times, X, problem.p)


# ---------------------------------------------------------------------------
# stochastic continuity probe


@dataclass(frozen=True)
class ContinuityProbe:
    eps_values: tuple
    moment_table: tuple          # E|X(t+eps) - X(t)|^p per eps
    standard_errors: tuple
    decreasing: bool
    j2_table: tuple              # averaged composition bound per eps

    @property
    def final_over_initial(self) -> float:
        if self.moment_table[0] == 0.0:
            return 0.0
        return self.moment_table[-1] / self.moment_table[0]


def stochastic_continuity_probe(problem: MildProblem, ensemble: Ensemble,
                                t: float, eps_list) -> ContinuityProbe:
    """Table of E|X(t+eps) - X(t)|^p from an ensemble, decreasing as eps -> 0.

    The diffusion part of the time increment is additionally bounded through
    the composition decay of (Id - S(eps)) against the convolution operators
    S(t - s) G(X(s)) sampled along the ensemble.
    """
    from .operators import compose

    times = ensemble.times
    dt = times[1] - times[0]
    i_t = int(round(t / dt))
    if abs(times[i_t] - t) > 1e-9:
        raise ConfigError("t must lie on the ensemble grid")
    eps_sorted = sorted(float(e) for e in eps_list)
    moments, ses = [], []
    for eps in eps_sorted:
        j = int(round((t + eps) / dt))
        if j >= len(times) or abs(times[j] - (t + eps)) > 1e-9:
            raise ConfigError("t + eps must lie on the ensemble grid")
        if j == i_t:
            moments.append(0.0)
            ses.append(0.0)
            continue
        est = estimate_p_moment(ensemble.paths[:, j, :] - ensemble.paths[:, i_t, :],
                                problem.p)
        moments.append(est.value)
        ses.append(est.standard_error)
    drops = [moments[k + 1] >= moments[k] - 3.0 * (ses[k] + ses[k + 1])
             for k in range(len(moments) - 1)]
    j2 = []
    sample_idx = range(0, i_t, max(1, i_t // 4)) if i_t > 0 else []
    for eps in eps_sorted:
        phi = diagonal_operator(1.0 - problem.semigroup.factors(eps))
        vals = []
        for si in sample_idx:
            x = ensemble.paths[0, si, :]
            gop = problem.diffusion.operator(x, problem.dim)
            conv_op = diagonal_operator(
                problem.semigroup.factors(t - times[si]) * np.diag(gop.matrix))
            vals.append(pi_p_upper(compose(phi, conv_op), problem.p) ** problem.p)
        j2.append(float(np.mean(vals)) if vals else 0.0)
    return ContinuityProbe(tuple(eps_sorted), tuple(moments), tuple(ses),
                           bool(all(drops)), tuple(j2))
