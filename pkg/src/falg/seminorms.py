"""Base seminorm families p_k on series and polynomials.

Two concrete families are provided:

* ``tau_c``: ``p_k(f) = sum |f_a|`` over monomials ``a`` of total degree at most
  ``k`` whose indeterminate indices are all below ``k``. These generate the
  topology of coordinatewise convergence, are submultiplicative, and increase
  with ``k``. In exact mode they are rational-valued.
* ``disc_sup``: the supremum of ``|p(z)|`` over ``|z| <= r_k``, measured on
  equally spaced boundary samples. The default radii ``r_k = 2 - 1/k``
  exhaust the open disc of radius 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .series import EXACT, PowerSeries, require_univariate

DEFAULT_SAMPLES = 512


def seminorm_tau_c(f: PowerSeries, k: int):
    """Sum of ``|coefficient|`` over monomials with degree <= k and all indices < k."""
    total = 0
    for m, c in f.terms.items():
        if m.degree <= k and m.max_index < k:
            total += abs(c)
    return total


def default_radius(k: int) -> float:
    """Radius ``2 - 1/k`` of the k-th compact disc exhausting ``|z| < 2``."""
    return 2.0 - 1.0 / k


def disc_samples(radius: float, samples: int) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(samples) / samples
    return radius * np.exp(1j * angles)


def disc_sup_norm(p: PowerSeries, radius: float = 1.0, samples: int = DEFAULT_SAMPLES) -> float:
    """max |p(z)| over ``samples`` equally spaced points of the circle ``|z| = radius``.

    The first sample is ``z = radius``. By the maximum-modulus principle the
    circle carries the sup over the closed disc; the sampled value is a lower
    bound whose gap is controlled by :func:`sampling_factor`.
    """
    require_univariate(p)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if samples < 8:
        raise ValueError("at least 8 boundary samples are required")
    coeffs = np.array([complex(c) for c in p.coeffs()], dtype=complex)
    if not coeffs.any():
        return 0.0
    z = disc_samples(radius, samples)
    values = np.polyval(coeffs[::-1], z)
    return float(np.max(np.abs(values)))


def sampling_factor(degree: int, samples: int) -> float:
    """Factor ``F`` with ``true sup <= F * sampled sup`` for polynomials of ``degree``.

    From Bernstein's inequality on the circle: every point is within half a
    sample spacing of a sample, so the sup exceeds the sampled maximum by at
    most ``pi * degree / samples`` of itself. Infinite when that gap reaches 1.
    """
    gap = math.pi * degree / samples
    return math.inf if gap >= 1 else 1.0 / (1.0 - gap)


def l1_norm(p: PowerSeries):
    """Sum of |coefficients|; a rigorous bound for the sup over the closed unit disc."""
    return sum((abs(c) for c in p.terms.values()), 0)


@dataclass(frozen=True)
class SeminormFamily:
    """An indexed family ``k -> p_k`` of submultiplicative seminorms.

    ``evaluator(x, k)`` evaluates ``p_k(x)``. Scalars (module values in a
    character module) are measured by ``|.|`` regardless of the family.
    """

    kind: str
    evaluator: Callable[[PowerSeries, int], object] = field(repr=False)
    description: str = ""

    def __call__(self, x, k: int):
        if isinstance(x, PowerSeries):
            return self.evaluator(x, k)
        return abs(x)


def tau_c_family() -> SeminormFamily:
    return SeminormFamily("tau_c", seminorm_tau_c, "coordinatewise-convergence seminorms")


def disc_family(samples: int = DEFAULT_SAMPLES, radius: Callable[[int], float] = default_radius,
                description: str = "sup on |z| <= 2 - 1/k") -> SeminormFamily:
    def evaluate(p: PowerSeries, k: int) -> float:
        return disc_sup_norm(p, radius(k), samples)

    return SeminormFamily("disc_sup", evaluate, description)


def unit_disc_family(samples: int = DEFAULT_SAMPLES) -> SeminormFamily:
    """Every level is the uniform norm on the closed unit disc."""
    return disc_family(samples, lambda k: 1.0, "sup on |z| <= 1")


def family_is_exact(family: SeminormFamily, mode: str) -> bool:
    """Whether the family returns exact rationals for series of ``mode``."""
    return family.kind == "tau_c" and mode == EXACT
