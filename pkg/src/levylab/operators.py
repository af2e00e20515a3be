"""Finite-rank operators between sequence spaces with p-summing norm bounds.

Exact p-summing norms are intractable for p < 2, so the module ships a
certified pair of bounds instead: ``pi_p_upper`` sums rank-one terms of a
decomposition (every downstream inequality only consumes an upper bound)
and ``pi_p_lower`` maximizes the defining ratio over finite test families.
On l2 -> l2 at p = 2 both collapse to the Hilbert-Schmidt norm, which is the
exact value there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from .errors import ConfigError, PreconditionError
from .estimators import BoundVerdict, estimate_p_moment
from .levy import CylLevySpec, cyl_increments, cyl_mode_variances, cyl_drift_vector, weak_p_norm
from .rng import RngStream, as_generator

DOMAIN_NORMS = ("l1", "l2", "linf")
CODOMAIN_NORMS = ("l1", "l2")
_DUAL = {"l1": "linf", "l2": "l2", "linf": "l1"}
_RECONSTRUCT_TOL = 1e-12


def vector_norm(v: np.ndarray, tag: str) -> float:
    if tag == "l1":
        return float(np.sum(np.abs(v)))
    if tag == "l2":
        return float(np.linalg.norm(v))
    if tag == "linf":
        return float(np.max(np.abs(v))) if v.size else 0.0
    raise ConfigError(f"unknown norm tag {tag!r}")


@dataclass(frozen=True)
class RankOneTerm:
    """The map x -> functional(x) * vector."""

    functional: np.ndarray
    vector: np.ndarray


@dataclass(frozen=True, eq=False)
class FiniteRankOperator:
    """K_out x K_in matrix with domain/codomain norm tags.

    An optional rank-one decomposition sum_k functional_k (x) vector_k feeds
    the upper p-summing bound; when present it must reconstruct the matrix
    entrywise to 1e-12.
    """

    matrix: np.ndarray
    domain_norm: str = "l2"
    codomain_norm: str = "l2"
    decomposition: Optional[tuple] = None

    def __post_init__(self):
        mat = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        object.__setattr__(self, "matrix", mat)
        mat.setflags(write=False)
        if self.domain_norm not in DOMAIN_NORMS:
            raise ConfigError(f"unknown domain norm {self.domain_norm!r}")
        if self.codomain_norm not in CODOMAIN_NORMS:
            raise ConfigError(f"unknown codomain norm {self.codomain_norm!r}")
        if self.decomposition is not None:
            terms = tuple(self.decomposition)
            object.__setattr__(self, "decomposition", terms)
            rebuilt = np.zeros_like(mat)
            for term in terms:
                rebuilt += np.outer(term.vector, term.functional)
            if not np.allclose(rebuilt, mat, atol=_RECONSTRUCT_TOL, rtol=0.0):
                raise ConfigError("decomposition does not reconstruct the matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def dim_out(self) -> int:
        return self.matrix.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def apply_batch(self, xs: np.ndarray) -> np.ndarray:
        """(n, K_in) -> (n, K_out)."""
        return xs @ self.matrix.T


def diagonal_operator(diag, domain_norm: str = "l2", codomain_norm: str = "l2") -> FiniteRankOperator:
    d = np.asarray(diag, dtype=float)
    return FiniteRankOperator(np.diag(d), domain_norm, codomain_norm)


def rank_one(functional, vector, domain_norm: str = "l2",
             codomain_norm: str = "l2") -> FiniteRankOperator:
    f = np.asarray(functional, dtype=float)
    v = np.asarray(vector, dtype=float)
    return FiniteRankOperator(np.outer(v, f), domain_norm, codomain_norm,
                              decomposition=(RankOneTerm(f, v),))


def identity_operator(dim: int, domain_norm: str = "l2",
                      codomain_norm: str = "l2") -> FiniteRankOperator:
    return FiniteRankOperator(np.eye(dim), domain_norm, codomain_norm)


def scale(op: FiniteRankOperator, a: float) -> FiniteRankOperator:
    dec = None
    if op.decomposition is not None:
        dec = tuple(RankOneTerm(t.functional, a * t.vector) for t in op.decomposition)
    return FiniteRankOperator(a * op.matrix, op.domain_norm, op.codomain_norm, dec)


def add(op1: FiniteRankOperator, op2: FiniteRankOperator) -> FiniteRankOperator:
    """Sum of operators; decompositions, when both stored, concatenate."""
    if op1.shape != op2.shape or op1.domain_norm != op2.domain_norm \
            or op1.codomain_norm != op2.codomain_norm:
        raise ConfigError("operator shapes or norm tags do not match")
    dec = None
    if op1.decomposition is not None and op2.decomposition is not None:
        dec = op1.decomposition + op2.decomposition
    return FiniteRankOperator(op1.matrix + op2.matrix, op1.domain_norm,
                              op1.codomain_norm, dec)


def compose(phi: FiniteRankOperator, psi: FiniteRankOperator) -> FiniteRankOperator:
    """phi after psi; psi's decomposition maps through phi term by term."""
    if phi.dim_in != psi.dim_out:
        raise ConfigError("dimension mismatch in composition")
    dec = None
    if psi.decomposition is not None:
        dec = tuple(RankOneTerm(t.functional, phi.apply(t.vector))
                    for t in psi.decomposition)
    return FiniteRankOperator(phi.matrix @ psi.matrix, psi.domain_norm,
                              phi.codomain_norm, dec)


# ---------------------------------------------------------------------------
# norms


def _sign_patterns(dim: int):
    for signs in product((1.0, -1.0), repeat=dim):
        yield np.array(signs)


def operator_norm_with_argmax(op: FiniteRankOperator) -> tuple[float, np.ndarray]:
    """Operator norm for the tagged norms together with a maximizing unit vector."""
    mat = op.matrix
    cod = op.codomain_norm
    if op.domain_norm == "l1":
        # extreme points of the l1 ball are +-e_j
        vals = [vector_norm(mat[:, j], cod) for j in range(op.dim_in)]
        j = int(np.argmax(vals))
        e = np.zeros(op.dim_in)
        e[j] = 1.0
        return float(vals[j]), e
    if op.domain_norm == "l2":
        if cod == "l2":
            u, s, vt = np.linalg.svd(mat)
            return float(s[0]), vt[0]
        # l2 -> l1: sup over sign weightings of rows
        if op.dim_out <= 16:
            best, bx = 0.0, None
            for eps in _sign_patterns(op.dim_out):
                v = eps @ mat
                nv = float(np.linalg.norm(v))
                if nv > best:
                    best, bx = nv, v / nv if nv > 0 else None
            if bx is None:
                return 0.0, np.eye(op.dim_in)[0]
            return best, bx
        return _ascent_operator_norm(op)
    # linf domain: extreme points are sign vectors
    if op.dim_in <= 16:
        best, bx = 0.0, np.ones(op.dim_in)
        for eps in _sign_patterns(op.dim_in):
            nv = vector_norm(mat @ eps, cod)
            if nv > best:
                best, bx = nv, eps
        return best, bx
    return _ascent_operator_norm(op)


def _ascent_operator_norm(op: FiniteRankOperator, restarts: int = 16) -> tuple[float, np.ndarray]:
    # local search fallback for the sign-enumeration cases in high dimension
    gen = np.random.Generator(np.random.Philox(key=np.array([0x9E3779B9, 0], dtype=np.uint64)))
    best, bx = 0.0, None
    for _ in range(restarts):
        x = np.sign(gen.standard_normal(op.dim_in))
        if op.domain_norm == "l2":
            x = gen.standard_normal(op.dim_in)
            x /= np.linalg.norm(x)
        improved = True
        while improved:
            improved = False
            for i in range(op.dim_in):
                for val in (1.0, -1.0):
                    cand = x.copy()
                    cand[i] = val
                    if op.domain_norm == "l2":
                        cand /= np.linalg.norm(cand)
                    nv = vector_norm(op.apply(cand), op.codomain_norm)
                    if nv > vector_norm(op.apply(x), op.codomain_norm) * (1 + 1e-12):
                        x, improved = cand, True
        nv = vector_norm(op.apply(x), op.codomain_norm)
        if nv > best:
            best, bx = nv, x
    return best, bx


def operator_norm(op: FiniteRankOperator) -> float:
    return operator_norm_with_argmax(op)[0]


def hs_norm(op: FiniteRankOperator) -> float:
    """Frobenius norm; only meaningful under l2 -> l2 tags."""
    if op.domain_norm != "l2" or op.codomain_norm != "l2":
        raise PreconditionError("Hilbert-Schmidt norm requires l2 domain and codomain")
    return float(np.linalg.norm(op.matrix, "fro"))


def default_decomposition(op: FiniteRankOperator) -> tuple:
    """Coordinate terms for diagonal matrices, SVD terms on l2 -> l2, else error."""
    if op.decomposition is not None:
        return op.decomposition
    mat = op.matrix
    if mat.shape[0] == mat.shape[1] and np.allclose(mat, np.diag(np.diag(mat)), atol=0.0):
        terms = []
        for k in range(mat.shape[0]):
            d = mat[k, k]
            if d != 0.0:
                e_in = np.zeros(mat.shape[1])
                e_in[k] = 1.0
                e_out = np.zeros(mat.shape[0])
                e_out[k] = d
                terms.append(RankOneTerm(e_in, e_out))
        return tuple(terms)
    if op.domain_norm == "l2" and op.codomain_norm == "l2":
        u, s, vt = np.linalg.svd(mat)
        return tuple(RankOneTerm(vt[i], s[i] * u[:, i])
                     for i in range(len(s)) if s[i] > 0.0)
    raise PreconditionError(
        "no decomposition stored and none can be derived for these norm tags")


def pi_p_upper(op: FiniteRankOperator, p: float) -> float:
    """Upper bound on the p-summing norm.

    Triangle inequality over rank-one terms: sum of dual-norm(functional)
    times codomain-norm(vector). On l2 -> l2 at p = 2 the exact value (the
    Frobenius norm) is returned instead, being the sharper valid bound.
    """
    if not (1.0 <= p <= 2.0):
        raise PreconditionError("p must lie in [1, 2]")
    if p == 2.0 and op.domain_norm == "l2" and op.codomain_norm == "l2":
        return hs_norm(op)
    dual = _DUAL[op.domain_norm]
    return float(sum(vector_norm(t.functional, dual) * vector_norm(t.vector, op.codomain_norm)
                     for t in default_decomposition(op)))


def _inner_sup(family: np.ndarray, domain_norm: str, p: float,
               restarts: int, tol: float, gen) -> float:
    """sup over the dual unit ball of (sum_k |x*(x_k)|^p)^{1/p} for a family of columns."""
    x_rows = family  # (n, K_in)

    def f(xstar):
        return float(np.sum(np.abs(x_rows @ xstar) ** p) ** (1.0 / p))

    dim = x_rows.shape[1]
    if x_rows.shape[0] == 1:
        # one-point family: the sup over the dual ball is the vector's own norm
        return vector_norm(x_rows[0], domain_norm)
    if domain_norm == "linf":
        # dual ball is the l1 ball; extreme points are +-e_i
        return max(float(np.sum(np.abs(x_rows[:, i]) ** p) ** (1.0 / p)) for i in range(dim))
    if domain_norm == "l2" and p == 2.0:
        return float(np.linalg.svd(x_rows, compute_uv=False)[0])
    if domain_norm == "l1" and dim <= 12:
        # dual ball is the linf box; the max of a convex function sits at a vertex
        return max(f(eps) for eps in _sign_patterns(dim))

    def project(xstar):
        if domain_norm == "l2":
            nrm = np.linalg.norm(xstar)
            return xstar / nrm if nrm > 1.0 else xstar
        return np.clip(xstar, -1.0, 1.0)

    best = 0.0
    for r in range(restarts):
        x = project(gen.standard_normal(dim))
        fx = f(x)
        step = 0.5
        while step > tol:
            g = x_rows.T @ (np.abs(x_rows @ x) ** (p - 1.0) * np.sign(x_rows @ x))
            gn = np.linalg.norm(g)
            if gn == 0.0:
                break
            cand = project(x + step * g / gn)
            fc = f(cand)
            if fc > fx * (1.0 + 1e-14):
                x, fx = cand, fc
            else:
                step /= 2.0
        # push to the boundary, where the maximum of a convex function lives
        if domain_norm == "l1":
            bx = np.sign(x)
            bx[bx == 0.0] = 1.0
            fx = max(fx, f(bx))
        elif domain_norm == "l2":
            nrm = np.linalg.norm(x)
            if nrm > 0:
                fx = max(fx, f(x / nrm))
        best = max(best, fx)
    return best


def default_families(op: FiniteRankOperator, gen) -> list[np.ndarray]:
    dim = op.dim_in
    fams = [np.eye(dim)]
    fams.extend(np.eye(dim)[i:i + 1] for i in range(dim))
    _, xmax = operator_norm_with_argmax(op)
    fams.append(np.atleast_2d(xmax))
    if op.domain_norm == "l2" and op.codomain_norm == "l2":
        _, _, vt = np.linalg.svd(op.matrix)
        fams.append(vt)
    for _ in range(4):
        fams.append(gen.standard_normal((2 * dim, dim)))
    return fams


def pi_p_lower(op: FiniteRankOperator, p: float, families=None, restarts: int = 32,
               tol: float = 1e-6, stream=None, include_defaults: bool = True) -> float:
    """Lower bound on the p-summing norm: best defining ratio over test families.

    For each family the denominator sup over the dual ball is solved exactly
    where the geometry allows (top singular value for l2 at p = 2, vertex
    enumeration for box and cross-polytope balls in small dimension) and by
    projected ascent with restarts otherwise. ``include_defaults=False``
    restricts the search to the supplied families.
    """
    if not (1.0 <= p <= 2.0):
        raise PreconditionError("p must lie in [1, 2]")
    gen = as_generator(stream if stream is not None else RngStream(0xF00D, 0))
    fams = [np.atleast_2d(np.asarray(f, dtype=float)) for f in (families or [])]
    if include_defaults or not fams:
        fams.extend(default_families(op, gen))
    best = 0.0
    for fam in fams:
        if not np.any(fam):
            raise PreconditionError("degenerate family: all vectors vanish")
        num = float(np.sum(np.array([vector_norm(op.apply(x), op.codomain_norm)
                                     for x in fam]) ** p) ** (1.0 / p))
        den = _inner_sup(fam, op.domain_norm, p, restarts, tol, gen)
        if den > 0.0:
            best = max(best, num / den)
    return best


@dataclass(frozen=True)
class PiPBounds:
    lower: float
    upper: float
    p: float
    notes: str = ""

    def __post_init__(self):
        if self.lower > self.upper * (1.0 + 1e-9) + 1e-12:
            raise ConfigError("lower bound exceeds upper bound")


def pi_p_bounds(op: FiniteRankOperator, p: float, **kwargs) -> PiPBounds:
    up = pi_p_upper(op, p)
    lo = pi_p_lower(op, p, **kwargs)
    notes = "hs-exact" if (p == 2.0 and op.domain_norm == "l2"
                           and op.codomain_norm == "l2") else "ratio/decomposition"
    return PiPBounds(min(lo, up), up, p, notes)


# ---------------------------------------------------------------------------
# composition decay study


@dataclass(frozen=True)
class DecayRow:
    eps: float
    upper: float
    hs: Optional[float]


@dataclass(frozen=True)
class DecayTable:
    """Values of the composition bound along a contraction family.

    ``converged`` holds when the last value dropped below ``threshold`` times
    the first; a constant table (the l1 -> l2 pathology) reports False.
    """

    rows: tuple
    monotone: bool
    converged: bool
    threshold: float

    def values(self) -> np.ndarray:
        return np.array([r.upper for r in self.rows])


def composition_decay(psi: FiniteRankOperator, phi_family, p: float,
                      threshold: float = 1e-3, monotone_tol: float = 1e-12) -> DecayTable:
    """Track the p-summing upper bound of phi_eps . psi along a family.

    ``phi_family`` is a list of (eps, operator) pairs ordered with decreasing
    eps; entries must act on psi's codomain.
    """
    rows = []
    for eps, phi in phi_family:
        if phi.dim_in != psi.dim_out:
            raise ConfigError("contraction family does not act on the codomain")
        comp = compose(phi, psi)
        up = pi_p_upper(comp, p)
        h = None
        if comp.domain_norm == "l2" and comp.codomain_norm == "l2":
            h = hs_norm(comp)
        rows.append(DecayRow(float(eps), up, h))
    vals = np.array([r.upper for r in rows])
    monotone = bool(np.all(np.diff(vals) <= monotone_tol * max(1.0, vals[0])))
    converged = bool(vals[-1] <= threshold * vals[0]) if vals[0] > 0 else True
    return DecayTable(tuple(rows), monotone, converged, threshold)


# ---------------------------------------------------------------------------
# pushforward bound check


def schwartz_bound_check(psi: FiniteRankOperator, spec: CylLevySpec, dt: float,
                         p: float, n_paths: int = 20000, stream=None) -> BoundVerdict:
    """Monte Carlo check of (E|psi dL|^p)^{1/p} <= pi_p(psi) * weak p-norm of dL.

    The right side uses the closed-form weak norm at p = 2 with centered
    noise and a sphere-search estimate otherwise; its standard error is
    folded into the verdict slack.
    """
    if psi.dim_in != spec.dim:
        raise ConfigError("operator domain does not match the noise truncation")
    gen = as_generator(stream if stream is not None else RngStream(0xABCD, 0))
    pi_up = pi_p_upper(psi, p)
    if pi_up == 0.0:
        est = estimate_p_moment(np.zeros(max(n_paths, 2)), p)
        return BoundVerdict(est, 0.0, label="pushforward-bound")
    increments = cyl_increments(spec, dt, n_paths, gen)
    lhs = estimate_p_moment(psi.apply_batch(increments), p).root()
    wn = weak_p_norm(spec, dt, p, estimator="auto", n_paths=n_paths, stream=gen)
    return BoundVerdict(lhs, pi_up * wn.value, bound_se=pi_up * wn.standard_error,
                        label="pushforward-bound")


def closed_form_second_moment(psi: FiniteRankOperator, spec: CylLevySpec, dt: float) -> float:
    """E|psi dL|^2 for centered noise (exact): dt * trace(A C A^T) with C the unit-time covariance."""
    if np.any(cyl_drift_vector(spec) != 0.0):
        raise PreconditionError("closed form requires centered noise")
    from .levy import DiagonalCylLevy

    if isinstance(spec, DiagonalCylLevy):
        variances = cyl_mode_variances(spec)
        cols = np.sum(psi.matrix**2, axis=0)
        return float(dt * np.sum(variances * cols))
    cov = spec.rate * spec.jumps.second_moment_matrix()
    return float(dt * np.trace(psi.matrix @ cov @ psi.matrix.T))
