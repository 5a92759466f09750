"""Seeded random generators for series and algebra elements.

All draws go through a :class:`numpy.random.Generator` (PCG64), whose stream
for a given seed is stable across platforms, so experiment outputs are
reproducible.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .series import EXACT, Monomial, PowerSeries


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_coeff(rng: np.random.Generator, mode: str, span: int = 5):
    if mode == EXACT:
        return Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, 4)))
    return complex(rng.uniform(-span, span), rng.uniform(-span, span))


def random_monomial(rng: np.random.Generator, nvars: int, degree: int) -> Monomial:
    d = int(rng.integers(0, degree + 1))
    exps: dict[int, int] = {}
    for _ in range(d):
        i = int(rng.integers(0, nvars))
        exps[i] = exps.get(i, 0) + 1
    return Monomial(exps)


def random_series(rng: np.random.Generator, nvars: int = 3, degree: int = 4, trunc: int | None = None,
                  mode: str = EXACT, nterms: int = 6) -> PowerSeries:
    """Sparse series with up to ``nterms`` terms of total degree <= ``degree``."""
    if trunc is None:
        trunc = degree
    terms: dict = {}
    for _ in range(int(rng.integers(1, nterms + 1))):
        m = random_monomial(rng, nvars, degree)
        terms[m] = terms.get(m, 0) + random_coeff(rng, mode)
    return PowerSeries(terms, trunc, mode)


def random_univariate(rng: np.random.Generator, degree: int, trunc: int | None = None,
                      mode: str = EXACT, dense: bool = True) -> PowerSeries:
    if trunc is None:
        trunc = degree
    coeffs = [random_coeff(rng, mode) for _ in range(degree + 1)]
    if not dense:
        coeffs = [c if rng.random() < 0.6 else 0 for c in coeffs]
    return PowerSeries.from_coeffs(coeffs, trunc, mode)
