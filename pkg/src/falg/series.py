"""Sparse truncated power series in the indeterminates X_0, X_1, ...

A :class:`PowerSeries` stores a map ``Monomial -> coefficient`` together with a
truncation order ``trunc``: every stored monomial has total degree at most
``trunc``, and the coefficients of higher total degree are regarded as unknown.
Products are exact in every degree up to the truncation of the result, so a
series of degree at most ``trunc`` is simply a polynomial.

Coefficients live in one of two modes, fixed per series:

``"exact"``
    :class:`fractions.Fraction`. Arithmetic is equality-exact.
``"numeric"``
    Python ``complex``. Comparisons need a tolerance.

Combining series of different modes raises :class:`ModeMismatchError`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ModeMismatchError, NotUnivariateError, TruncationBudgetError

EXACT = "exact"
NUMERIC = "numeric"
MODES = (EXACT, NUMERIC)

Coefficient = Union[Fraction, complex]


def coerce(value, mode: str) -> Coefficient:
    """Convert ``value`` into a coefficient of the given mode."""
    if mode == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, complex):
            if value.imag != 0:
                raise ModeMismatchError("exact mode holds real rationals only")
            value = value.real
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)
    if mode == NUMERIC:
        if isinstance(value, str):
            return complex(value)
        return complex(value)
    raise ValueError(f"unknown coefficient mode {mode!r}")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown coefficient mode {mode!r}")
    return mode


def same_mode(*modes: str) -> str:
    first = modes[0]
    for m in modes[1:]:
        if m != first:
            raise ModeMismatchError(f"cannot combine {first!r} and {m!r} coefficients")
    return first


class Monomial:
    """A product of indeterminates, stored as sorted ``(index, exponent)`` pairs.

    Zero exponents are never stored; ``degree`` caches the total degree.
    """

    __slots__ = ("items", "degree", "_hash")

    def __init__(self, exps: Union[Mapping[int, int], Iterable[tuple[int, int]], None] = None):
        if exps is None:
            pairs: list[tuple[int, int]] = []
        elif isinstance(exps, Mapping):
            pairs = list(exps.items())
        else:
            pairs = list(exps)
        acc: dict[int, int] = {}
        for idx, e in pairs:
            idx, e = int(idx), int(e)
            if idx < 0 or e < 0:
                raise ValueError("indices and exponents must be nonnegative")
            if e:
                acc[idx] = acc.get(idx, 0) + e
        items = tuple(sorted(acc.items()))
        self.items = items
        self.degree = sum(e for _, e in items)
        self._hash = hash(items)

    @classmethod
    def _raw(cls, items: tuple, degree: int) -> "Monomial":
        obj = cls.__new__(cls)
        obj.items = items
        obj.degree = degree
        obj._hash = hash(items)
        return obj

    @classmethod
    def var(cls, i: int, power: int = 1) -> "Monomial":
        return cls({i: power})

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not self.items:
            return other
        if not other.items:
            return self
        acc = dict(self.items)
        for idx, e in other.items:
            acc[idx] = acc.get(idx, 0) + e
        return Monomial._raw(tuple(sorted(acc.items())), self.degree + other.degree)

    def exponent(self, i: int) -> int:
        for idx, e in self.items:
            if idx == i:
                return e
        return 0

    @property
    def max_index(self) -> int:
        """Largest indeterminate index present, or -1 for the constant monomial."""
        return self.items[-1][0] if self.items else -1

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.items == other.items

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Monomial") -> bool:
        return (self.degree, self.items) < (other.degree, other.items)

    def __repr__(self) -> str:
        if not self.items:
            return "1"
        return "*".join(f"X{i}" if e == 1 else f"X{i}^{e}" for i, e in self.items)


ONE = Monomial()


def _as_monomial(key) -> Monomial:
    if isinstance(key, Monomial):
        return key
    if isinstance(key, int):
        return Monomial.var(0, key) if key else ONE
    return Monomial(key)


class PowerSeries:
    """Immutable truncated power series; see the module docstring."""

    __slots__ = ("terms", "trunc", "mode")

    def __init__(self, terms=None, trunc: int = 0, mode: str = EXACT):
        check_mode(mode)
        trunc = int(trunc)
        if trunc < 0:
            raise ValueError("truncation order must be nonnegative")
        clean: dict[Monomial, Coefficient] = {}
        if terms:
            for key, c in dict(terms).items():
                mono = _as_monomial(key)
                if mono.degree > trunc:
                    continue
                c = coerce(c, mode)
                if c != 0:
                    clean[mono] = clean.get(mono, 0) + c
                    if clean[mono] == 0:
                        del clean[mono]
        self.terms = clean
        self.trunc = trunc
        self.mode = mode

    @classmethod
    def _raw(cls, terms: dict, trunc: int, mode: str) -> "PowerSeries":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.trunc = trunc
        obj.mode = mode
        return obj

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, trunc: int, mode: str = EXACT) -> "PowerSeries":
        return cls(None, trunc, mode)

    @classmethod
    def constant(cls, c, trunc: int, mode: str = EXACT) -> "PowerSeries":
        return cls({ONE: c}, trunc, mode)

    @classmethod
    def one(cls, trunc: int, mode: str = EXACT) -> "PowerSeries":
        return cls.constant(1, trunc, mode)

    @classmethod
    def var(cls, i: int, trunc: int, mode: str = EXACT, coeff=1) -> "PowerSeries":
        return cls({Monomial.var(i): coeff}, trunc, mode)

    @classmethod
    def from_coeffs(cls, coeffs, trunc: int | None = None, mode: str = EXACT) -> "PowerSeries":
        """Univariate series sum_j coeffs[j] X_0^j."""
        coeffs = list(coeffs)
        if trunc is None:
            trunc = max(len(coeffs) - 1, 0)
        return cls({Monomial.var(0, j) if j else ONE: c for j, c in enumerate(coeffs)}, trunc, mode)

    # inspection -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Largest total degree present (0 for the zero series)."""
        return max((m.degree for m in self.terms), default=0)

    @property
    def var_bound(self) -> int:
        """One more than the largest indeterminate index present."""
        return max((m.max_index for m in self.terms), default=-1) + 1

    def is_zero(self) -> bool:
        return not self.terms

    def is_univariate(self) -> bool:
        return self.var_bound <= 1

    def coeff(self, mono) -> Coefficient:
        return self.terms.get(_as_monomial(mono), coerce(0, self.mode))

    def coeffs(self) -> list:
        """Dense coefficient list of a univariate series, index = power of X_0."""
        require_univariate(self)
        out = [coerce(0, self.mode)] * (self.degree + 1)
        for m, c in self.terms.items():
            out[m.degree] = c
        return out

    def with_trunc(self, trunc: int) -> "PowerSeries":
        return PowerSeries(self.terms, trunc, self.mode)

    def to_mode(self, mode: str) -> "PowerSeries":
        if mode == self.mode:
            return self
        if mode == NUMERIC:
            return PowerSeries._raw({m: complex(c) for m, c in self.terms.items()}, self.trunc, NUMERIC)
        return PowerSeries(self.terms, self.trunc, EXACT)

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.constant(other, self.trunc, self.mode)
        return ps_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return ps_scale(self, -1)

    def __sub__(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.constant(other, self.trunc, self.mode)
        return ps_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return ps_scale(self, other)
        return ps_mul(self, other, min(self.trunc, other.trunc))

    def __rmul__(self, other):
        return ps_scale(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.mode == other.mode and self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.mode, self.trunc, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"({c})*{m}" for m, c in sorted(self.terms.items()))
        return f"PowerSeries[{self.mode}, T={self.trunc}]({body})"


def require_univariate(p: PowerSeries) -> None:
    if not p.is_univariate():
        raise NotUnivariateError("expected a series in X_0 only")


def ps_add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Coefficientwise sum, truncated at ``min(f.trunc, g.trunc)``."""
    mode = same_mode(f.mode, g.mode)
    trunc = min(f.trunc, g.trunc)
    out = {m: c for m, c in f.terms.items() if m.degree <= trunc}
    for m, c in g.terms.items():
        if m.degree > trunc:
            continue
        s = out.get(m, 0) + c
        if s == 0:
            out.pop(m, None)
        else:
            out[m] = s
    return PowerSeries._raw(out, trunc, mode)


def ps_scale(f: PowerSeries, c) -> PowerSeries:
    c = coerce(c, f.mode)
    if c == 0:
        return PowerSeries.zero(f.trunc, f.mode)
    return PowerSeries._raw({m: c * v for m, v in f.terms.items()}, f.trunc, f.mode)


def ps_mul(f: PowerSeries, g: PowerSeries, trunc: int) -> PowerSeries:
    """Cauchy product discarding every monomial of total degree above ``trunc``."""
    mode = same_mode(f.mode, g.mode)
    out: dict[Monomial, Coefficient] = {}
    g_items = sorted(g.terms.items(), key=lambda kv: kv[0].degree)
    for m1, c1 in f.terms.items():
        room = trunc - m1.degree
        if room < 0:
            continue
        for m2, c2 in g_items:
            if m2.degree > room:
                break
            m = m1 * m2
            out[m] = out.get(m, 0) + c1 * c2
    return PowerSeries._raw({m: c for m, c in out.items() if c != 0}, trunc, mode)


def ps_pow(f: PowerSeries, n: int, trunc: int | None = None, strict: bool = False) -> PowerSeries:
    """``f**n`` truncated at ``trunc`` (default ``f.trunc``).

    With ``strict=True`` the call refuses to drop terms: it raises
    :class:`TruncationBudgetError` when ``n * deg f`` exceeds ``trunc``.
    """
    if n < 0:
        raise ValueError("negative powers are not supported")
    if trunc is None:
        trunc = f.trunc
    if strict and n * f.degree > trunc:
        raise TruncationBudgetError(
            f"power {n} of a degree-{f.degree} series needs truncation {n * f.degree}, have {trunc}"
        )
    result = PowerSeries.one(trunc, f.mode)
    base = f
    while n:
        if n & 1:
            result = ps_mul(result, base, trunc)
        n >>= 1
        if n:
            base = ps_mul(base, base, trunc)
    return result


def ps_partial(f: PowerSeries, i: int) -> PowerSeries:
    """Formal partial derivative with respect to X_i (truncation kept)."""
    out: dict[Monomial, Coefficient] = {}
    for m, c in f.terms.items():
        e = m.exponent(i)
        if not e:
            continue
        acc = dict(m.items)
        if e == 1:
            del acc[i]
        else:
            acc[i] = e - 1
        out[Monomial._raw(tuple(sorted(acc.items())), m.degree - 1)] = c * e
    return PowerSeries._raw(out, f.trunc, f.mode)


def check_product_budget(f: PowerSeries, g: PowerSeries, trunc: int) -> None:
    """Raise unless the truncated product of ``f`` and ``g`` at ``trunc`` is the full product."""
    if f.degree + g.degree > trunc:
        raise TruncationBudgetError(
            f"deg f + deg g = {f.degree + g.degree} exceeds truncation {trunc}"
        )


def poly_eval(p: PowerSeries, z) -> Coefficient:
    """Horner evaluation of a univariate series at ``z``."""
    require_univariate(p)
    z = coerce(z, p.mode)
    acc = coerce(0, p.mode)
    for c in reversed(p.coeffs()):
        acc = acc * z + c
    return acc


def eval_all(p: PowerSeries, z) -> Coefficient:
    """Evaluate with every indeterminate set to ``z`` (a character of the polynomial algebra)."""
    if p.is_univariate():
        return poly_eval(p, z)
    z = coerce(z, p.mode)
    acc = coerce(0, p.mode)
    for m, c in p.terms.items():
        acc += c * z ** m.degree
    return acc


def _exact_binomial_sum(parts: list, i: int) -> float:
    """``sum binom(j, i) * x_j`` over ``(j, x_j)`` evaluated exactly on the binary
    float values, rounded once."""
    if not parts:
        return 0.0
    ratios = [(j, x.as_integer_ratio()) for j, x in parts]
    den = max(d for _, (_, d) in ratios)
    total = sum(math.comb(j, i) * n * (den // d) for j, (n, d) in ratios)
    return float(Fraction(total, den))


def point_derivation(p: PowerSeries, i: int, point=1) -> Coefficient:
    """``p^(i)(point) / i!``, the i-th Taylor coefficient of ``p`` about ``point``.

    Computed from the binomial re-expansion
    ``sum_j binom(j, i) * c_j * point**(j - i)``. In numeric mode at the point
    1 the sum is exact on the stored float coefficients and rounded once, since
    high-order sums cancel heavily; other points accumulate with
    :func:`math.fsum` per component.
    """
    require_univariate(p)
    if i < 0:
        raise ValueError("order must be nonnegative")
    point = coerce(point, p.mode)
    if p.mode == EXACT:
        total = Fraction(0)
        for m, c in p.terms.items():
            j = m.degree
            if j >= i:
                total += math.comb(j, i) * c * point ** (j - i)
        return total
    if point == 1:
        terms = [(m.degree, c) for m, c in p.terms.items() if m.degree >= i]
        return complex(_exact_binomial_sum([(j, c.real) for j, c in terms], i),
                       _exact_binomial_sum([(j, c.imag) for j, c in terms], i))
    re_parts, im_parts = [], []
    for m, c in p.terms.items():
        j = m.degree
        if j >= i:
            v = math.comb(j, i) * c * point ** (j - i)
            re_parts.append(v.real)
            im_parts.append(v.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def taylor_at(p: PowerSeries, point=1, upto: int | None = None) -> list:
    """``[D_0(p), D_1(p), ..., D_upto(p)]`` about ``point`` (default: up to deg p)."""
    if upto is None:
        upto = p.degree
    return [point_derivation(p, i, point) for i in range(upto + 1)]
