"""The extension algebra A (+) M with its plain and derivation-twisted seminorms.

Elements are pairs ``(a, m)`` with product ``(x, m)(y, n) = (xy, x.n + y.m)``,
so ``{0} (+) M`` is a square-zero ideal. ``M`` is either ``A`` itself acting by
multiplication (``self``), or the scalars with ``x.lam = phi(x) lam`` for the
character ``phi = evaluation at a point`` (``char@<point>``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import ActionMismatchError
from .seminorms import SeminormFamily
from .series import (
    EXACT,
    NUMERIC,
    Monomial,
    PowerSeries,
    coerce,
    eval_all,
    check_product_budget,
    ps_add,
    ps_mul,
    ps_partial,
    ps_scale,
    same_mode,
)

SELF = "self"
CHAR = "char"


def value_mode(v) -> str:
    if isinstance(v, PowerSeries):
        return v.mode
    if isinstance(v, Fraction) or isinstance(v, int):
        return EXACT
    return NUMERIC


def is_zero_value(v) -> bool:
    return v.is_zero() if isinstance(v, PowerSeries) else v == 0


@dataclass(frozen=True)
class ModuleAction:
    """How ``A`` acts on ``M``.

    ``declared_bound`` is the constant ``l_k`` for actions that are not
    contractive; the built-in actions are contractive and use ``l_k = 1``.
    """

    kind: str = SELF
    point: object = 1
    declared_bound: float | None = None

    def __post_init__(self):
        if self.kind not in (SELF, CHAR):
            raise ValueError(f"unknown action kind {self.kind!r}")

    @property
    def name(self) -> str:
        return SELF if self.kind == SELF else f"char@{self.point}"

    @classmethod
    def parse(cls, text: str) -> "ModuleAction":
        if text == SELF:
            return cls(SELF)
        if text.startswith("char@"):
            return cls(CHAR, Fraction(text[5:]))
        if text == CHAR:
            return cls(CHAR, 1)
        raise ValueError(f"cannot parse module action {text!r}")

    def character(self, x: PowerSeries):
        return eval_all(x, self.point)

    def act(self, x: PowerSeries, m):
        """``x . m``."""
        self.check_value(m)
        if self.kind == SELF:
            return ps_mul(x, m, min(x.trunc, m.trunc))
        return self.character(x) * m

    def zero(self, mode: str, trunc: int):
        if self.kind == SELF:
            return PowerSeries.zero(trunc, mode)
        return coerce(0, mode)

    def check_value(self, m) -> None:
        if (self.kind == SELF) != isinstance(m, PowerSeries):
            raise ActionMismatchError(f"module value {m!r} does not belong to M for action {self.name}")


def l_k_constant(action: ModuleAction, k: int) -> float:
    """``l_k = sup{1, p_k(x.m) : p_k(x) = p_k(m) = 1}``.

    Both built-in actions satisfy ``p_k(x.m) <= p_k(x) p_k(m)`` for the
    supported seminorm families, so the supremum clamps to 1. A declared bound
    is passed through (clamped below by 1).
    """
    if action.declared_bound is not None:
        return max(1, action.declared_bound)
    return 1


@dataclass(frozen=True)
class Derivation:
    """A derivation ``D : A -> M``.

    ``kind`` is ``partial`` (d/dX_index into the self-module), ``point``
    (``x -> (d/dX_index x)(point)`` into a character module at ``point``) or
    ``zero``. ``overrides`` adds a finite rule table on basis monomials:
    ``D(x) += coeff_x(mono) * value`` for every ``(mono, value)`` pair. A
    ``zero`` derivation with overrides is an arbitrary linear map given by its
    table; adding one override to a genuine derivation breaks Leibniz.
    """

    kind: str = "zero"
    target: str = SELF
    index: int = 0
    point: object = 1
    overrides: tuple = field(default=())

    @classmethod
    def partial(cls, i: int = 0) -> "Derivation":
        return cls("partial", SELF, index=i)

    @classmethod
    def at_point(cls, point=1, index: int = 0) -> "Derivation":
        return cls("point", CHAR, index=index, point=point)

    @classmethod
    def zero(cls, target: str = SELF) -> "Derivation":
        return cls("zero", target)

    @classmethod
    def custom(cls, table: dict, target: str = SELF) -> "Derivation":
        return cls("zero", target, overrides=tuple(table.items()))

    def perturb(self, mono: Monomial, value) -> "Derivation":
        return replace(self, overrides=self.overrides + ((mono, value),))

    def __call__(self, x: PowerSeries):
        if self.kind == "partial":
            out = ps_partial(x, self.index)
        elif self.kind == "point":
            out = eval_all(ps_partial(x, self.index), self.point)
        elif self.target == SELF:
            out = PowerSeries.zero(x.trunc, x.mode)
        else:
            out = coerce(0, x.mode)
        for mono, value in self.overrides:
            c = x.coeff(mono)
            if c == 0:
                continue
            if isinstance(value, PowerSeries):
                out = ps_add(out, ps_scale(value.to_mode(x.mode).with_trunc(x.trunc), c))
            else:
                out = out + c * coerce(value, x.mode)
        return out

    def check_target(self, action: ModuleAction) -> None:
        if self.target != action.kind:
            raise ActionMismatchError(
                f"derivation lands in the {self.target} module, action is {action.name}"
            )


@dataclass(frozen=True)
class ModuleElement:
    """``(a, m)`` in ``A (+) M``."""

    a: PowerSeries
    m: object

    def __post_init__(self):
        same_mode(self.a.mode, value_mode(self.m))

    @property
    def mode(self) -> str:
        return self.a.mode

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement(self.a + other.a, self.m + other.m)

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement(self.a - other.a, self.m - other.m)


def _check_pair(u: ModuleElement, v: ModuleElement, action: ModuleAction) -> None:
    same_mode(u.mode, v.mode)
    action.check_value(u.m)
    action.check_value(v.m)


def mod_mul(u: ModuleElement, v: ModuleElement, action: ModuleAction, trunc: int | None = None,
            strict: bool = False) -> ModuleElement:
    """``(x, m)(y, n) = (xy, x.n + y.m)``, truncated at ``trunc``.

    ``strict`` raises :class:`TruncationBudgetError` rather than drop terms of
    ``xy`` (and of ``x.n``, ``y.m`` in the self-module).
    """
    _check_pair(u, v, action)
    if trunc is None:
        trunc = min(u.a.trunc, v.a.trunc)
    if strict:
        check_product_budget(u.a, v.a, trunc)
        if action.kind == SELF:
            check_product_budget(u.a, v.m, trunc)
            check_product_budget(v.a, u.m, trunc)
    a = ps_mul(u.a, v.a, trunc)
    if action.kind == SELF:
        m = ps_add(ps_mul(u.a, v.m, trunc), ps_mul(v.a, u.m, trunc))
    else:
        m = action.character(u.a) * v.m + action.character(v.a) * u.m
    return ModuleElement(a, m)


def q_k(u: ModuleElement, k: int, family: SeminormFamily, action: ModuleAction,
        use_lk: bool = False):
    """``p_k(a) + p_k(m)``, times ``l_k`` when ``use_lk`` is set."""
    action.check_value(u.m)
    value = family(u.a, k) + family(u.m, k)
    return l_k_constant(action, k) * value if use_lk else value


def q_kD(u: ModuleElement, k: int, D: Derivation, family: SeminormFamily, action: ModuleAction,
         use_lk: bool = False):
    """``p_k(a) + p_k(D(a) - m)``, times ``l_k`` when ``use_lk`` is set."""
    D.check_target(action)
    action.check_value(u.m)
    value = family(u.a, k) + family(D(u.a) - u.m, k)
    return l_k_constant(action, k) * value if use_lk else value


def theta_D(u: ModuleElement, D: Derivation) -> ModuleElement:
    """``(x, m) -> (x, D(x) - m)``; an involution."""
    return ModuleElement(u.a, D(u.a) - u.m)


def embed_iota(x: PowerSeries, action: ModuleAction) -> ModuleElement:
    """``x -> (x, 0)``."""
    return ModuleElement(x, action.zero(x.mode, x.trunc))


def q_kD_embedded(x: PowerSeries, k: int, D: Derivation, family: SeminormFamily,
                  action: ModuleAction, use_lk: bool = False):
    """The seminorm ``x -> q_{k,D}(iota(x))`` on ``A``."""
    return q_kD(embed_iota(x, action), k, D, family, action, use_lk)


def radical_witness(u: ModuleElement, action: ModuleAction) -> bool:
    """Square-zero certificate that ``u = (0, m)`` lies in the radical.

    Only elements of ``{0} (+) M`` are decidable here.
    """
    if not u.a.is_zero():
        raise ValueError("radical membership is only certified for elements (0, m)")
    sq = mod_mul(u, u, action)
    return sq.a.is_zero() and is_zero_value(sq.m)
