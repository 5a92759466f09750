"""Weight sequences (M_k), the limit gamma of (k!/M_k)^(1/k), and weighted seminorms.

A sequence is admissible when it is positive and

    M_k / k!  >=  (M_i / i!) (M_{k-i} / (k-i)!)      for 1 <= i < k,

which makes ``k -> (k!/M_k)^(1/k)`` nonincreasing with a limit ``gamma >= 0``.
``gamma > 0`` classifies the completion as semisimple and ``gamma = 0`` as
natural. From finite data the limit is only bracketed, so explicit lists are
always ``undetermined``; closed-form rules carry their exact limit.

Closed forms are ``M_i = c^i (i!)^e`` with rational ``c > 0`` and integer
``e >= 1``. ``factorial`` is ``c = e = 1``, ``k_pow_i_factorial:k0`` is
``c = k0, e = 1`` (limit ``1/k0``) and ``factorial_squared`` is ``e = 2``
(limit 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidWeightsError
from .seminorms import SeminormFamily, disc_family
from .series import PowerSeries, point_derivation

SEMISIMPLE = "semisimple"
NATURAL = "natural"
UNDETERMINED = "undetermined"

DEFAULT_K = 64


@dataclass(frozen=True)
class WeightSequence:
    rule: str
    values: tuple = ()
    base: Fraction = Fraction(1)
    exponent: int = 1

    def __post_init__(self):
        if self.rule == "explicit":
            object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        else:
            object.__setattr__(self, "base", Fraction(self.base))
            if self.base <= 0 or self.exponent < 1:
                raise InvalidWeightsError("closed forms need c > 0 and e >= 1")

    # constructors -----------------------------------------------------

    @classmethod
    def explicit(cls, values: Iterable) -> "WeightSequence":
        return cls("explicit", tuple(values))

    @classmethod
    def factorial(cls) -> "WeightSequence":
        return cls("factorial")

    @classmethod
    def k_pow_i_factorial(cls, k0) -> "WeightSequence":
        return cls("k_pow_i_factorial", base=Fraction(k0))

    @classmethod
    def factorial_squared(cls) -> "WeightSequence":
        return cls("factorial_squared", exponent=2)

    @classmethod
    def power_factorial(cls, c, e: int) -> "WeightSequence":
        return cls("power_factorial", base=Fraction(c), exponent=int(e))

    @classmethod
    def parse(cls, text: str) -> "WeightSequence":
        """Parse ``factorial``, ``k_pow_i_factorial:3``, ``factorial_squared``,
        ``power_factorial:c:e`` or ``explicit:1,2,6``."""
        name, _, arg = text.partition(":")
        if name == "factorial":
            return cls.factorial()
        if name == "k_pow_i_factorial":
            return cls.k_pow_i_factorial(Fraction(arg))
        if name == "factorial_squared":
            return cls.factorial_squared()
        if name == "power_factorial":
            c, _, e = arg.partition(":")
            return cls.power_factorial(Fraction(c), int(e))
        if name == "explicit":
            return cls.explicit(Fraction(v) for v in arg.split(","))
        raise ValueError(f"unknown weight rule {text!r}")

    # access -----------------------------------------------------------

    @property
    def length(self) -> int | None:
        """Number of available weights, ``None`` for closed forms."""
        return len(self.values) if self.rule == "explicit" else None

    def value(self, i: int) -> Fraction:
        """``M_i`` for ``i >= 1``; ``M_0 = 1`` by convention."""
        if i == 0:
            return Fraction(1)
        if self.rule == "explicit":
            if i > len(self.values):
                raise IndexError(f"weight M_{i} not given (have {len(self.values)})")
            return self.values[i - 1]
        return self.base ** i * Fraction(math.factorial(i)) ** self.exponent

    def closed_form_gamma(self) -> Fraction | None:
        if self.rule == "explicit":
            return None
        return 1 / self.base if self.exponent == 1 else Fraction(0)

    def scaled(self, c) -> "WeightSequence":
        """``M_i -> c^i M_i``; every ratio and gamma scale by ``1/c``."""
        c = Fraction(c)
        if self.rule == "explicit":
            return WeightSequence.explicit(c ** i * v for i, v in enumerate(self.values, start=1))
        return WeightSequence("power_factorial", base=self.base * c, exponent=self.exponent)

    @property
    def tag(self) -> str:
        if self.rule == "explicit":
            return f"explicit[{len(self.values)}]"
        if self.rule == "k_pow_i_factorial":
            return f"k_pow_i_factorial:{self.base}"
        if self.rule == "power_factorial":
            return f"power_factorial:{self.base}:{self.exponent}"
        return self.rule


def _horizon(M: WeightSequence, K: int | None) -> int:
    if K is None:
        K = M.length if M.length is not None else DEFAULT_K
    if M.length is not None and K > M.length:
        raise IndexError(f"K = {K} exceeds the {M.length} given weights")
    return K


@dataclass(frozen=True)
class WeightCheck:
    valid: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def validate_weights(M: WeightSequence, K: int | None = None) -> WeightCheck:
    """Exhaustive exact check of positivity and convexity for ``1 <= i < k <= K``.

    ``witness`` is the first violating ``(i, k)``, scanning ``k`` upward.
    """
    K = _horizon(M, K)
    scaled = [M.value(i) / math.factorial(i) for i in range(K + 1)]
    for i in range(1, K + 1):
        if scaled[i] <= 0:
            return WeightCheck(False, (i, i), f"M_{i} is not positive")
    for k in range(2, K + 1):
        for i in range(1, k):
            if scaled[k] < scaled[i] * scaled[k - i]:
                return WeightCheck(False, (i, k), f"M_{k}/{k}! < (M_{i}/{i}!)(M_{k - i}/{k - i}!)")
    return WeightCheck(True)


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for a nonnegative integer ``n``."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def exact_root(q: Fraction, k: int) -> Fraction | None:
    """``q ** (1/k)`` when it is rational, else ``None``."""
    a, b = _iroot(q.numerator, k), _iroot(q.denominator, k)
    if a ** k == q.numerator and b ** k == q.denominator:
        return Fraction(a, b)
    return None


def _float_root(q: Fraction, k: int) -> float:
    if q == 0:
        return 0.0
    return math.exp((math.log(q.numerator) - math.log(q.denominator)) / k)


def ratio_terms(M: WeightSequence, K: int) -> list[Fraction]:
    """``[k!/M_k for k = 1..K]`` exactly."""
    return [math.factorial(k) / M.value(k) for k in range(1, K + 1)]


def monotone_ratio(M: WeightSequence, K: int | None = None) -> int | None:
    """First ``k`` where ``(k!/M_k)^(1/k) < ((k+1)!/M_{k+1})^(1/(k+1))``, else ``None``.

    Roots are compared by exact cross-powering:
    ``(k!/M_k)^(k+1)`` against ``((k+1)!/M_{k+1})^k``.
    """
    K = _horizon(M, K)
    terms = ratio_terms(M, K)
    for k in range(1, K):
        if terms[k - 1] ** (k + 1) < terms[k] ** k:
            return k
    return None


@dataclass
class GammaReport:
    """The ratio sequence ``(k!/M_k)^(1/k)`` for ``k <= K`` and what it certifies.

    ``bracket`` encloses gamma: the upper end is the last ratio (the sequence
    is nonincreasing), the lower end is the exact limit for closed forms and 0
    otherwise.
    """

    tag: str
    K: int
    weights: list
    ratios: list
    exact_ratios: list
    gamma: object
    gamma_exact: bool
    bracket: tuple
    classification: str
    monotone: bool = True

    def rows(self):
        lo = self.bracket[0]
        for k in range(1, self.K + 1):
            yield k, self.weights[k - 1], self.ratios[k - 1], lo, self.ratios[k - 1], self.classification


def gamma_estimate(M: WeightSequence, K: int | None = None) -> GammaReport:
    """Build the :class:`GammaReport`; raises :class:`InvalidWeightsError` on bad weights."""
    K = _horizon(M, K)
    check = validate_weights(M, K)
    if not check:
        raise InvalidWeightsError(f"invalid weights at {check.witness}: {check.reason}")
    terms = ratio_terms(M, K)
    exact = [exact_root(t, k) for k, t in enumerate(terms, start=1)]
    ratios = [float(e) if e is not None else _float_root(t, k) for k, (t, e) in enumerate(zip(terms, exact), 1)]
    closed = M.closed_form_gamma()
    last = exact[-1] if exact[-1] is not None else ratios[-1]
    if closed is not None:
        gamma, gamma_exact, bracket = closed, True, (closed, last)
    else:
        gamma, gamma_exact, bracket = last, False, (Fraction(0), last)
    return GammaReport(
        tag=M.tag,
        K=K,
        weights=[M.value(k) for k in range(1, K + 1)],
        ratios=ratios,
        exact_ratios=exact,
        gamma=gamma,
        gamma_exact=gamma_exact,
        bracket=bracket,
        classification=_classify_bracket(bracket, gamma_exact),
        monotone=monotone_ratio(M, K) is None,
    )


def _classify_bracket(bracket: tuple, exact: bool) -> str:
    lo = bracket[0]
    if lo > 0:
        return SEMISIMPLE
    if exact:
        # the lower end is the exact limit, here 0
        return NATURAL
    return UNDETERMINED


def classify(M: WeightSequence, K: int | None = None) -> str:
    """``semisimple`` if gamma is certified positive, ``natural`` if exactly 0, else ``undetermined``."""
    return gamma_estimate(M, K).classification


def q_k_weighted(p: PowerSeries, k: int, M: WeightSequence, family: SeminormFamily | None = None,
                 point=1) -> float:
    """``p_k(p) + sum_{i>=1} |p^(i)(point)| / M_i`` for a polynomial ``p``."""
    if family is None:
        family = disc_family()
    d = p.degree
    if M.length is not None and M.length < d:
        raise IndexError(f"weights cover degree {M.length}, polynomial has degree {d}")
    total = float(family(p, k))
    for i in range(1, d + 1):
        deriv = math.factorial(i) * point_derivation(p, i, point)
        total += float(abs(deriv) / M.value(i)) if p.mode == "exact" else abs(deriv) / float(M.value(i))
    return total


def weighted_family(M: WeightSequence, samples: int = 512) -> SeminormFamily:
    base = disc_family(samples)

    def evaluate(p: PowerSeries, k: int) -> float:
        return q_k_weighted(p, k, M, base)

    return SeminormFamily("weighted", evaluate, f"disc sup + derivatives / {M.tag}")


@dataclass
class FamilyReport:
    """Per-level reports for ``M_i^(k0) = k0^i i!`` and the limit of their gammas."""

    levels: list = field(default_factory=list)
    gammas: list = field(default_factory=list)
    aggregate_limit: Fraction = Fraction(0)

    @property
    def classifications(self) -> list:
        return [r.classification for r in self.levels]


def doubly_indexed_family(k0_values: Sequence[int], K: int = 32) -> FamilyReport:
    """Reports for each ``k0``; the exact levels are ``gamma_k0 = 1/k0``, whose limit is 0."""
    report = FamilyReport()
    for k0 in k0_values:
        level = gamma_estimate(WeightSequence.k_pow_i_factorial(k0), K)
        report.levels.append(level)
        report.gammas.append(level.gamma)
    # gamma_k0 = 1/k0 exactly, so the limit over k0 -> oo is 0
    report.aggregate_limit = Fraction(0)
    return report
