"""Radical probes: nilpotency index, spectral-radius estimates, quasinilpotency certificates.

The spectral radius at level ``k`` is realised as ``lim_n p_k(x^n)^(1/n)``.
Finite-``N`` reports keep the whole sequence. A zero value is only reported as
certified when ``p_k(x^n)`` is exactly zero and every coefficient it reads
lies inside the truncation. A power is only called zero when no term could
have been cut off by truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import TruncationBudgetError
from .higher import CHAR_AT_1, ArElement, ar_mul, ar_unit, tail_generator
from .module_algebra import ModuleAction, ModuleElement, is_zero_value, mod_mul
from .seminorms import SeminormFamily, tau_c_family
from .series import PowerSeries, ps_mul

NILPOTENT = "nilpotent"
QUASINILPOTENT = "quasinilpotent-certified"
INCONCLUSIVE = "inconclusive"

Element = Union[PowerSeries, ModuleElement, ArElement]


@dataclass
class SpectralReport:
    """Per-level sequences ``(n, p_k(x^n), p_k(x^n)^(1/n))`` and a verdict.

    ``verdict`` is ``nilpotent`` (with ``nilpotent_index`` set),
    ``quasinilpotent-certified`` or ``inconclusive``. ``estimates[k]`` is the
    last root in the level-``k`` sequence, or exact 0 when certified.
    """

    description: str
    levels: dict = field(default_factory=dict)
    estimates: dict = field(default_factory=dict)
    certified_zero: dict = field(default_factory=dict)
    verdict: str = INCONCLUSIVE
    nilpotent_index: int | None = None
    nonzero_through: int | None = None
    budget: int = 0

    def rows(self):
        for k, seq in self.levels.items():
            for n, value, root in seq:
                yield k, n, value, root


def describe(x: Element) -> str:
    if isinstance(x, PowerSeries):
        return f"series deg={x.degree} T={x.trunc} mode={x.mode}"
    if isinstance(x, ModuleElement):
        return f"module element deg(a)={x.a.degree} mode={x.mode}"
    kind = f"inf_trunc={x.rank}" if x.infinite else f"rank={x.rank}"
    return f"tail element {kind} deg(a)={x.a.degree} mode={x.mode}"




def _trunc(x: Element) -> int:
    return x.trunc if isinstance(x, PowerSeries) else x.a.trunc


def _max_tail_index(x: ArElement) -> int:
    return max((i for i, m in enumerate(x.tail, start=1) if not is_zero_value(m)), default=0)


def _is_zero(x: Element) -> bool:
    if isinstance(x, PowerSeries):
        return x.is_zero()
    if isinstance(x, ModuleElement):
        return x.a.is_zero() and is_zero_value(x.m)
    return x.is_zero()


def _unit_like(x: Element, action: ModuleAction, trunc: int) -> Element:
    if isinstance(x, PowerSeries):
        return PowerSeries.one(trunc, x.mode)
    if isinstance(x, ModuleElement):
        return ModuleElement(PowerSeries.one(trunc, x.mode), action.zero(x.mode, trunc))
    return ar_unit(x.rank, trunc, x.mode, x.infinite, action)


def _mul(x: Element, y: Element, action: ModuleAction, trunc: int) -> Element:
    if isinstance(x, PowerSeries):
        return ps_mul(x, y, trunc)
    if isinstance(x, ModuleElement):
        return mod_mul(x, y, action, trunc)
    return ar_mul(x, y, action, trunc)


def power_budget(x: Element, s: int) -> int:
    """A truncation at which ``x**s`` is computed without dropping terms."""
    if isinstance(x, PowerSeries):
        return s * x.degree
    if isinstance(x, ModuleElement):
        # (a, m)^s = (a^s, s a^(s-1) . m)
        return s * x.a.degree + (x.m.degree if isinstance(x.m, PowerSeries) else 0)
    tail_deg = max((m.degree for m in x.tail if isinstance(m, PowerSeries)), default=0)
    return s * max(x.a.degree, tail_deg)


def check_power_budget(x: Element, max_s: int) -> None:
    """Raise unless powers up to ``max_s`` can be formed with nothing truncated.

    For the truncated infinite tail the tail indices count as degrees: the
    support of ``x^s`` reaches index ``s * max_index``.
    """
    need = power_budget(x, max_s)
    if need > _trunc(x):
        raise TruncationBudgetError(f"powers up to {max_s} need truncation {need}, have {_trunc(x)}")
    if isinstance(x, ArElement) and x.infinite:
        need = max_s * _max_tail_index(x)
        if need > x.rank:
            raise TruncationBudgetError(
                f"tail powers up to {max_s} reach index {need}, truncation is {x.rank}"
            )


def nilpotency_index(u: Element, max_s: int, action: ModuleAction | None = None) -> int | None:
    """Smallest ``s <= max_s`` with ``u**s == 0``, or ``None`` if none exists.

    Raises :class:`TruncationBudgetError` when the truncation could make a
    nonzero power look like zero.
    """
    if action is None:
        action = _default_action(u)
    check_power_budget(u, max_s)
    trunc = _trunc(u)
    power = _unit_like(u, action, trunc)
    for s in range(1, max_s + 1):
        power = _mul(power, u, action, trunc)
        if _is_zero(power):
            return s
    return None


def _default_action(u: Element) -> ModuleAction:
    if isinstance(u, ModuleElement):
        return ModuleAction("self") if isinstance(u.m, PowerSeries) else CHAR_AT_1
    return CHAR_AT_1


def level_seminorm(x: Element, k: int, family: SeminormFamily):
    """``p_k`` on each element type: sum of ``p_k`` over the components.

    For tail elements only tail indices ``i <= k`` enter, mirroring the
    coordinate seminorms of ``C_0[[X]]``.
    """
    if isinstance(x, PowerSeries):
        return family(x, k)
    if isinstance(x, ModuleElement):
        return family(x.a, k) + family(x.m, k)
    return family(x.a, k) + sum(family(m, k) for m in x.tail[:k])


def _reads_within_truncation(x: Element, k: int, family: SeminormFamily) -> bool:
    """Whether ``p_k`` of a truncated power equals ``p_k`` of the true power."""
    if family.kind != "tau_c":
        return False
    if _trunc(x) < k:
        return False
    if isinstance(x, ArElement) and x.infinite and x.rank < k:
        return False
    return True


def spectral_radius_estimate(x: Element, k: int, N: int, family: SeminormFamily | None = None,
                             action: ModuleAction | None = None) -> SpectralReport:
    """The sequence ``p_k(x^n)^(1/n)`` for ``n = 1..N`` and its last value.

    With the ``tau_c`` family ``p_k`` only reads coefficients of degree
    ``<= k``, which truncation at ``T >= k`` leaves exact, so the powers are
    formed at truncation ``T``. Other families need the whole power:
    ``T >= N * deg x`` is enforced.
    """
    if family is None:
        family = tau_c_family()
    if action is None:
        action = _default_action(x)
    trunc = _trunc(x)
    exact_reads = _reads_within_truncation(x, k, family)
    if not exact_reads:
        check_power_budget(x, N)
    report = SpectralReport(describe(x), budget=trunc)
    seq = []
    power = _unit_like(x, action, trunc)
    certified = False
    for n in range(1, N + 1):
        power = _mul(power, x, action, trunc)
        value = level_seminorm(power, k, family)
        root = float(value) ** (1.0 / n)
        seq.append((n, value, root))
        if value == 0:
            certified = True
    report.levels[k] = seq
    report.certified_zero[k] = certified
    report.estimates[k] = 0 if certified else seq[-1][2]
    nil = _nilpotent_within(x, N, action)
    if nil is not None:
        report.verdict = NILPOTENT
        report.nilpotent_index = nil
    elif certified:
        report.verdict = QUASINILPOTENT
    return report


def _nilpotent_within(x: Element, N: int, action: ModuleAction) -> int | None:
    try:
        return nilpotency_index(x, N, action)
    except TruncationBudgetError:
        return None


def quasinil_nonnil_certificate(R: int, u: ArElement | None = None, mode: str = "exact") -> SpectralReport:
    """Certify that a tail element of ``{0} (+) M^oo`` is quasinilpotent but not nilpotent.

    ``u`` defaults to ``(0, e_1)`` at truncation ``R``. Powers ``u^n`` are
    checked nonzero for every ``n`` whose support stays inside the truncation
    (``n * max tail index <= R``). For each level ``k <= R`` the tail
    seminorm of ``u^(k+1)`` must vanish exactly, which certifies ``r_k(u) = 0``.
    """
    if R < 4:
        raise ValueError("truncation R must be at least 4")
    if u is None:
        u = tail_generator(1, R, 0, mode, infinite=True)
    if not u.infinite or u.rank != R:
        raise ValueError("u must be a truncated infinite-order tail element of truncation R")
    report = SpectralReport(describe(u), budget=R)
    if u.is_zero():
        report.verdict = NILPOTENT
        report.nilpotent_index = 1
        return report
    if not u.a.is_zero():
        raise ValueError("certificate applies to elements of {0} (+) M^oo")
    family = tau_c_family()
    span = _max_tail_index(u)
    reach = R // span
    power = ar_unit(R, u.a.trunc, u.mode, True)
    powers = []
    for n in range(1, R + 2):
        power = ar_mul(power, u)
        powers.append(power)
    nonzero_through = 0
    for n in range(1, reach + 1):
        if powers[n - 1].is_zero():
            break
        nonzero_through = n
    report.nonzero_through = nonzero_through
    all_zero = True
    for k in range(1, R + 1):
        seq = []
        hit = False
        for n in range(1, k + 2):
            value = level_seminorm(powers[n - 1], k, family)
            seq.append((n, value, float(value) ** (1.0 / n)))
            if value == 0:
                hit = True
                break
        report.levels[k] = seq
        report.certified_zero[k] = hit
        report.estimates[k] = 0 if hit else seq[-1][2]
        all_zero = all_zero and hit
    if all_zero and nonzero_through == reach and reach >= 1:
        report.verdict = QUASINILPOTENT
    return report
