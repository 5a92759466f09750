"""Higher derivations and the algebras A (+) M^r, A (+) M^oo.

An :class:`ArElement` is ``(x, (m_1, ..., m_r))`` with product

    (x, {m_i})(y, {n_i}) = (xy, {x.n_i + y.m_i + sum_{j<i} m_j n_{i-j}})

For scalar tails this is the convolution product of ``C_0[[X]]`` truncated at
``X^r``. The infinite-order algebra is represented by an explicit truncation
``R`` (``infinite=True``); every quantity summed over the tail reports the
geometric tail bound ``2**-R`` it leaves out.

The default higher derivation is the point derivation of infinite order at 1,
``D_i(p) = p^(i)(1) / i!``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import RankMismatchError
from .module_algebra import CHAR, SELF, ModuleAction, value_mode
from .seminorms import SeminormFamily, disc_family, disc_sup_norm
from .series import (
    Monomial,
    PowerSeries,
    check_product_budget,
    coerce,
    ps_mul,
    point_derivation,
    same_mode,
)

CHAR_AT_1 = ModuleAction(CHAR, 1)


@dataclass(frozen=True)
class HigherDerivation:
    """``(D_1, ..., D_rank)`` into the character module at ``point``.

    ``D_s(x) = x^(s)(point) / s!`` (or 0 when ``zero`` is set) plus any
    ``overrides`` ``(s, mono, value)``, which add ``coeff_x(mono) * value`` to
    ``D_s``. For ``infinite=True``, ``rank`` is the truncation ``R`` of an
    infinite-order derivation.
    """

    rank: int
    infinite: bool = False
    point: object = 1
    overrides: tuple = field(default=())
    zero: bool = False

    def component(self, s: int, x: PowerSeries):
        if not 0 <= s <= self.rank:
            raise IndexError(f"component {s} outside rank {self.rank}")
        if self.zero and s > 0:
            value = coerce(0, x.mode)
        else:
            value = point_derivation(x, s, self.point)
        for t, mono, delta in self.overrides:
            if t == s:
                value += x.coeff(mono) * coerce(delta, x.mode)
        return value

    def __call__(self, x: PowerSeries) -> tuple:
        """``(D_1(x), ..., D_rank(x))``."""
        return tuple(self.component(s, x) for s in range(1, self.rank + 1))

    def perturb(self, s: int, mono: Monomial, delta) -> "HigherDerivation":
        return replace(self, overrides=self.overrides + ((s, mono, delta),))

    @property
    def action(self) -> ModuleAction:
        return ModuleAction(CHAR, self.point)


@dataclass(frozen=True)
class ArElement:
    """``(a, (m_1, ..., m_rank))``; ``infinite`` marks a truncated ``M^oo`` tail."""

    a: PowerSeries
    tail: tuple
    infinite: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tail", tuple(self.tail))
        same_mode(self.a.mode, *(value_mode(m) for m in self.tail))

    @property
    def rank(self) -> int:
        return len(self.tail)

    @property
    def mode(self) -> str:
        return self.a.mode

    def __add__(self, other: "ArElement") -> "ArElement":
        _check_ranks(self, other)
        return ArElement(self.a + other.a, [m + n for m, n in zip(self.tail, other.tail)], self.infinite)

    def __sub__(self, other: "ArElement") -> "ArElement":
        _check_ranks(self, other)
        return ArElement(self.a - other.a, [m - n for m, n in zip(self.tail, other.tail)], self.infinite)

    def is_zero(self) -> bool:
        return self.a.is_zero() and all(
            m.is_zero() if isinstance(m, PowerSeries) else m == 0 for m in self.tail
        )


def _check_ranks(u: ArElement, v: ArElement) -> None:
    if u.rank != v.rank or u.infinite != v.infinite:
        raise RankMismatchError(f"ranks differ: {u.rank} vs {v.rank}")


def tail_generator(j: int, rank: int, trunc: int = 0, mode: str = "exact", infinite: bool = False,
                   action: ModuleAction = CHAR_AT_1) -> ArElement:
    """``(0, e_j)``: the unit tail at index ``j`` (1-based)."""
    zero = action.zero(mode, trunc)
    one = PowerSeries.one(trunc, mode) if action.kind == SELF else coerce(1, mode)
    tail = [one if i == j else zero for i in range(1, rank + 1)]
    return ArElement(PowerSeries.zero(trunc, mode), tail, infinite)


def ar_unit(rank: int, trunc: int, mode: str = "exact", infinite: bool = False,
            action: ModuleAction = CHAR_AT_1) -> ArElement:
    return ArElement(PowerSeries.one(trunc, mode), [action.zero(mode, trunc)] * rank, infinite)


def ar_mul(u: ArElement, v: ArElement, action: ModuleAction = CHAR_AT_1,
           trunc: int | None = None, strict: bool = False) -> ArElement:
    """Product with convolution tail; tail entries beyond the rank are dropped."""
    _check_ranks(u, v)
    same_mode(u.mode, v.mode)
    if trunc is None:
        trunc = min(u.a.trunc, v.a.trunc)
    if strict:
        check_product_budget(u.a, v.a, trunc)
    r = u.rank
    if action.kind == SELF:
        def mul(m, n):
            return ps_mul(m, n, trunc)
    else:
        def mul(m, n):
            return m * n
    tail = []
    for i in range(1, r + 1):
        acc = action.act(u.a, v.tail[i - 1]) + action.act(v.a, u.tail[i - 1])
        for j in range(1, i):
            acc = acc + mul(u.tail[j - 1], v.tail[i - j - 1])
        tail.append(acc)
    return ArElement(ps_mul(u.a, v.a, trunc), tail, u.infinite)


def ar_pow(u: ArElement, n: int, action: ModuleAction = CHAR_AT_1, trunc: int | None = None) -> ArElement:
    if trunc is None:
        trunc = u.a.trunc
    result = ar_unit(u.rank, trunc, u.mode, u.infinite, action)
    base = u
    while n:
        if n & 1:
            result = ar_mul(result, base, action, trunc)
        n >>= 1
        if n:
            base = ar_mul(base, base, action, trunc)
    return result


def higher_leibniz_defect(D: HigherDerivation, x: PowerSeries, y: PowerSeries, s: int,
                          trunc: int | None = None):
    """``D_s(xy) - x.D_s(y) - y.D_s(x) - sum_{i<s} D_i(x) D_{s-i}(y)``.

    The module action is the character of ``D`` (evaluation at its point), so
    ``x.D_s(y) = D_0(x) D_s(y)``. Raises :class:`TruncationBudgetError` if
    ``xy`` would be truncated.
    """
    if not 1 <= s <= D.rank:
        raise ValueError(f"s must lie in 1..{D.rank}")
    if trunc is None:
        trunc = x.degree + y.degree
    check_product_budget(x, y, trunc)
    xy = ps_mul(x, y, trunc)
    phi = D.action.character
    defect = D.component(s, xy) - phi(x) * D.component(s, y) - phi(y) * D.component(s, x)
    for i in range(1, s):
        defect -= D.component(i, x) * D.component(s - i, y)
    return defect


def theta_D_higher(u: ArElement, D: HigherDerivation) -> ArElement:
    """``(x, {m_i}) -> (x, {D_i(x) - m_i})``."""
    if u.rank != D.rank:
        raise RankMismatchError(f"element rank {u.rank} vs derivation rank {D.rank}")
    return ArElement(u.a, [d - m for d, m in zip(D(u.a), u.tail)], u.infinite)


def q_kD_prime(p: PowerSeries, k: int, rank: int | None = None, family: SeminormFamily | None = None,
               point=1):
    """``p_k(p) + sum_{i=1}^{rank} |p^(i)(point)| / i!``.

    ``rank=None`` is the infinite-order version; the sum stops at ``deg p``
    where every later term vanishes.
    """
    if family is None:
        family = disc_family()
    top = p.degree if rank is None else rank
    return family(p, k) + sum(abs(point_derivation(p, i, point)) for i in range(1, top + 1))


def ar_q_k(u: ArElement, k: int, family: SeminormFamily, action: ModuleAction = CHAR_AT_1,
           use_lk: bool = False):
    """``p_k(x) + sum_i p_k(m_i)`` (times ``l_k`` when ``use_lk``)."""
    from .module_algebra import l_k_constant

    value = family(u.a, k) + sum(family(m, k) for m in u.tail)
    return l_k_constant(action, k) * value if use_lk else value


def ar_q_kD(u: ArElement, k: int, D: HigherDerivation, family: SeminormFamily,
            use_lk: bool = False):
    """``p_k(x) + sum_i p_k(D_i(x) - m_i)`` (times ``l_k`` when ``use_lk``)."""
    return ar_q_k(theta_D_higher(u, D), k, family, D.action, use_lk)


@dataclass(frozen=True)
class MetricValue:
    """A truncated metric value and the guaranteed bound on what was truncated."""

    value: float
    tail_bound: float

    def __float__(self) -> float:
        return self.value


def _norm(x: PowerSeries, samples: int) -> float:
    return disc_sup_norm(x, 1.0, samples) if not x.is_zero() else 0.0


def metric_d(u: ArElement, samples: int = 512) -> MetricValue:
    """``||x|| + sum_i 2^-i |m_i| / (1 + |m_i|)`` with ``||.||`` the unit-disc sup."""
    value = _norm(u.a, samples)
    for i, m in enumerate(u.tail, start=1):
        t = abs(complex(m))
        value += 2.0 ** -i * t / (1.0 + t)
    return MetricValue(value, 2.0 ** -u.rank if u.infinite else 0.0)


def metric_dD(u: ArElement, D: HigherDerivation, samples: int = 512) -> MetricValue:
    """``||x|| + sum_i 2^-i |D_i(x) - m_i| / (1 + |D_i(x) - m_i|)``."""
    return metric_d(theta_D_higher(u, D), samples)


def higher_graph(x: PowerSeries, D: HigherDerivation) -> ArElement:
    """``(x, {D_i(x)})``."""
    return ArElement(x, D(x), D.infinite)


def ar_from_values(a: PowerSeries, tail: Sequence, infinite: bool = False) -> ArElement:
    return ArElement(a, [coerce(m, a.mode) for m in tail], infinite)
