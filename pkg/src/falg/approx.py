"""Polynomials that are uniformly small on the unit disc but have prescribed
Taylor coefficients at the boundary point 1.

For targets ``alpha_1..alpha_k`` the solver returns the polynomial of degree
``<= d`` with minimum Euclidean coefficient norm subject to

    p(1) = 0,    p^(i)(1) / i! = alpha_i    (i = 1..k).

Row ``i`` of the constraint matrix is ``binom(j, i)`` over the columns
``j = 0..d``. The rows grow polynomially in ``j``, so the minimum norm decays
as the degree grows, and ``||p||_inf <= sum |c_j| <= sqrt(d + 1) ||c||_2`` on
the closed unit disc.

Every certificate is re-measured from the returned coefficients: sup norm by
boundary sampling, Taylor coefficients by :func:`point_derivation`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import RetryBudgetExhausted
from .higher import ArElement, HigherDerivation
from .seminorms import DEFAULT_SAMPLES, disc_sup_norm, l1_norm
from .series import EXACT, NUMERIC, PowerSeries, coerce, point_derivation

SAFETY = 1.01
CONSTRAINT_TOL = 1e-8

TargetStream = Union[Sequence, Callable[[int], complex]]


def constraint_matrix(k: int, d: int, point: float = 1.0) -> np.ndarray:
    """``A[i, j] = binom(j, i) * point**(j - i)`` for ``i = 0..k``, ``j = 0..d``."""
    A = np.zeros((k + 1, d + 1))
    for i in range(k + 1):
        for j in range(i, d + 1):
            A[i, j] = math.comb(j, i) * point ** (j - i)
    return A


def _binomial_rows(k: int, d: int) -> list[list[int]]:
    return [[math.comb(j, i) for j in range(d + 1)] for i in range(k + 1)]


def _solve_rational(G: list[list[int]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over the rationals; raises on a singular ``G``."""
    n = len(G)
    rows = [[Fraction(v) for v in row] + [b[i]] for i, row in enumerate(G)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise np.linalg.LinAlgError(f"constraint matrix has rank < {n}")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return [row[-1] for row in rows]


def _min_norm_rational(rhs: list, d: int) -> list[Fraction]:
    """Exact minimum-norm solution for real rational right-hand sides.

    The solution lies in the row space, ``c = A^T y`` with ``(A A^T) y = rhs``.
    The Gram matrix is integral and only ``(k+1) x (k+1)``, so ``y`` is found
    in rational arithmetic and each ``c_j = sum_i y_i binom(j, i)`` is formed
    exactly over a common denominator.
    """
    if not any(rhs):
        return [Fraction(0)] * (d + 1)
    B = _binomial_rows(len(rhs) - 1, d)
    G = [[sum(x * y for x, y in zip(r, s)) for s in B] for r in B]
    y = _solve_rational(G, rhs)
    den = math.lcm(*(v.denominator for v in y))
    Y = [v.numerator * (den // v.denominator) for v in y]
    return [Fraction(sum(Yi * row[j] for Yi, row in zip(Y, B)), den) for j in range(d + 1)]


def _min_norm_exact(rhs: list, d: int) -> list[complex]:
    """The rational solution for real and imaginary parts (``A`` is real), rounded once."""
    re = _min_norm_rational([Fraction(complex(t).real) for t in rhs], d)
    im = _min_norm_rational([Fraction(complex(t).imag) for t in rhs], d)
    return [complex(float(a), float(b)) for a, b in zip(re, im)]


def _min_norm_svd(rhs: list, d: int) -> np.ndarray:
    """Minimum-norm solution by SVD least squares on row-equilibrated constraints.

    Equilibration leaves the solution set, and so the minimum-norm solution,
    unchanged. One refinement step follows.
    """
    k = len(rhs) - 1
    A = constraint_matrix(k, d)
    scale = np.linalg.norm(A, axis=1)
    As = A / scale[:, None]
    b = np.array(rhs, dtype=complex) / scale
    c, _, rank, _ = np.linalg.lstsq(As, b, rcond=None)
    if rank < k + 1:
        raise np.linalg.LinAlgError(f"constraint matrix has rank {rank} < {k + 1}")
    return c + np.linalg.lstsq(As, b - As @ c, rcond=None)[0]


def hermite_min_norm(targets: Sequence, d: int, method: str = "exact", mode: str = NUMERIC) -> PowerSeries:
    """Minimum-coefficient-norm polynomial of degree ``<= d`` with ``p(1) = 0`` and
    ``D_i(p) = targets[i-1]``.

    ``method="exact"`` solves the row-space Gram system in rationals;
    ``method="svd"`` uses floating-point least squares, whose high-order
    residuals grow like ``eps * binom(d, k)``. In numeric mode the rounding
    residual is then cancelled on the low-order columns. Float coefficients
    cannot carry order-``k`` constraints once ``eps * binom(d, k)`` approaches
    the tolerance; ``mode="exact"`` (real targets only) keeps the rational
    coefficients and meets every constraint exactly.
    """
    k = len(targets)
    if k < 1:
        raise ValueError("at least one target is required")
    if d < k:
        raise ValueError(f"degree {d} cannot meet {k + 1} constraints")
    if mode == EXACT:
        rhs = [Fraction(0)] + [coerce(a, EXACT) for a in targets]
        return PowerSeries.from_coeffs(_min_norm_rational(rhs, d), d, EXACT)
    rhs = [0j] + [complex(a) for a in targets]
    if not any(rhs):
        return PowerSeries.zero(d, NUMERIC)
    if method == "exact":
        c = _min_norm_exact(rhs, d)
    elif method == "svd":
        c = _min_norm_svd(rhs, d)
    else:
        raise ValueError(f"unknown method {method!r}")
    return PowerSeries.from_coeffs(_polish(c, rhs), d, NUMERIC)


def _polish(c, rhs: list) -> list:
    """Cancel the rounding residual of ``A c = rhs`` on columns ``0..k``.

    For large degrees the float residual of the high-order rows sits near
    ``eps * sum_j binom(j, i) |c_j|``. The leading ``(k+1) x (k+1)`` block of
    the constraint matrix is the unit upper-triangular Pascal matrix, so the
    residual (evaluated exactly on the stored floats) is removed by back
    substitution there, where the binomials are small.
    """
    k = len(rhs) - 1
    out = [complex(v) for v in c]
    poly = PowerSeries.from_coeffs(out, len(out) - 1, NUMERIC)
    r = [complex(t) - point_derivation(poly, i) for i, t in enumerate(rhs)]
    delta = [0j] * (k + 1)
    for i in range(k, -1, -1):
        delta[i] = r[i] - sum(math.comb(j, i) * delta[j] for j in range(i + 1, k + 1))
    for j in range(k + 1):
        out[j] += delta[j]
    return out


@dataclass
class ApproxCertificate:
    """Measurements of one returned polynomial, recomputed from its coefficients."""

    stage: int
    degree: int
    poly: PowerSeries = field(repr=False)
    targets: tuple
    bound: float
    sup_norm: float
    l1_bound: float
    phi_value: float
    residuals: tuple
    samples: int = DEFAULT_SAMPLES

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def meets(self, safety: float = SAFETY, tol: float = CONSTRAINT_TOL) -> bool:
        """Sup norm below the bound with the sampling safety factor, constraints met to ``tol``."""
        if self.bound == 0:
            return self.poly.is_zero()
        return self.sup_norm * safety < self.bound and self.max_residual < tol and self.phi_value < tol


def certify(p: PowerSeries, targets: Sequence, bound: float, stage: int = 0,
            samples: int = DEFAULT_SAMPLES) -> ApproxCertificate:
    targets = tuple(coerce(a, p.mode) for a in targets)
    residuals = tuple(float(abs(point_derivation(p, i) - a)) for i, a in enumerate(targets, start=1))
    return ApproxCertificate(
        stage=stage,
        degree=p.trunc,
        poly=p,
        targets=targets,
        bound=bound,
        sup_norm=disc_sup_norm(p, 1.0, samples),
        l1_bound=float(l1_norm(p)),
        phi_value=float(abs(point_derivation(p, 0))),
        residuals=residuals,
        samples=samples,
    )


def default_schedule(k: int) -> Callable[[int], int]:
    """``d(n) = k n^2`` (at least ``k``)."""
    return lambda n: max(k * n * n, k)


def solve_to_bound(targets: Sequence, bound: float, degree: int, stage: int = 0,
                   samples: int = DEFAULT_SAMPLES, max_retries: int = 8, mode: str = NUMERIC) -> ApproxCertificate:
    """Solve at ``degree``, doubling it until the certificate meets ``bound``."""
    best = None
    for _ in range(max_retries + 1):
        cert = certify(hermite_min_norm(targets, degree, mode=mode), targets, bound, stage, samples)
        if best is None or cert.sup_norm < best.sup_norm:
            best = cert
        if cert.meets():
            return cert
        degree *= 2
    raise RetryBudgetExhausted(
        f"stage {stage}: sup norm {best.sup_norm:.3g} not below {bound:.3g} by degree {best.degree}", best
    )


def approximating_sequence(targets: Sequence, k: int | None = None, n_max: int = 10,
                           schedule: Callable[[int], int] | None = None,
                           samples: int = DEFAULT_SAMPLES, max_retries: int = 8,
                           mode: str = NUMERIC) -> list[ApproxCertificate]:
    """Certificates ``p_1..p_{n_max}`` with ``||p_n|| < 1/n`` and ``D_i(p_n) = alpha_i`` for ``i <= k``."""
    targets = list(targets)
    if k is None:
        k = len(targets)
    targets = targets[:k]
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if schedule is None:
        schedule = default_schedule(k)
    return [
        solve_to_bound(targets, 1.0 / n, schedule(n), n, samples, max_retries, mode)
        for n in range(1, n_max + 1)
    ]


def stream_prefix(stream: TargetStream, k: int) -> list:
    """The first ``k`` targets; a finite sequence contributes at most its length."""
    if callable(stream):
        return [stream(i) for i in range(1, k + 1)]
    return list(stream)[:k]


def diagonal_sequence(stream: TargetStream, K: int, samples: int = DEFAULT_SAMPLES,
                      max_retries: int = 8, mode: str = NUMERIC) -> list[ApproxCertificate]:
    """One polynomial per level ``k <= K`` with ``||p_k|| < 1/k`` and
    ``|D_i(p_k) - alpha_i| < 1/k`` for every available ``i <= k``.

    Level ``k`` is the stage ``n = k`` of the sequence for the first ``k``
    targets, so its degree starts at ``len(targets) * k^2``.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    out = []
    for k in range(1, K + 1):
        targets = stream_prefix(stream, k)
        if not targets:
            raise ValueError("target stream is empty")
        degree = default_schedule(len(targets))(k)
        cert = solve_to_bound(targets, 1.0 / k, degree, k, samples, max_retries, mode)
        out.append(cert)
    return out


@dataclass(frozen=True)
class OntoWitness:
    """``(x, {alpha_i}) = (x, {D_i x}) + (0, {alpha_i - D_i x})``."""

    graph: ArElement
    radical: ArElement
    total: ArElement
    verified: bool


def onto_witness(x: PowerSeries, alphas: Sequence, R: int, D: HigherDerivation | None = None,
                 tol: float = 1e-12) -> OntoWitness:
    """Split ``(x, {alpha_i})`` into a point of the higher graph of ``D`` and a radical element."""
    if D is None:
        D = HigherDerivation(R, infinite=True)
    alphas = [coerce(a, x.mode) for a in alphas][:R]
    alphas += [coerce(0, x.mode)] * (R - len(alphas))
    graph = ArElement(x, D(x), True)
    radical = ArElement(PowerSeries.zero(x.trunc, x.mode), [a - d for a, d in zip(alphas, graph.tail)], True)
    total = ArElement(x, alphas, True)
    summed = graph + radical
    if x.mode == "exact":
        verified = summed == total
    else:
        verified = summed.a == total.a and all(abs(s - t) <= tol for s, t in zip(summed.tail, total.tail))
    return OntoWitness(graph, radical, total, verified)
