"""Reproducible batch experiments producing CSV reports.

Each ``run_*`` function takes an :class:`ExperimentConfig` and returns a
:class:`Report`: a header, rows in a fixed order, and ``ok`` telling whether
every checked property held. :func:`write_report` writes the CSV and a JSON
manifest echoing the configuration.
"""

from __future__ import annotations

import csv
import io
import json
import platform
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .approx import diagonal_sequence
from .higher import q_kD_prime, tail_generator
from .module_algebra import (
    CHAR,
    SELF,
    Derivation,
    ModuleAction,
    ModuleElement,
    embed_iota,
    q_k,
    q_kD,
    radical_witness,
)
from .sampling import make_rng, random_coeff, random_series, random_univariate
from .seminorms import disc_family, tau_c_family, unit_disc_family
from .series import EXACT, NUMERIC, PowerSeries
from .spectral import QUASINILPOTENT, nilpotency_index, quasinil_nonnil_certificate
from .weights import WeightSequence, doubly_indexed_family, gamma_estimate, q_k_weighted

NUMERIC_RTOL = 1e-9


@dataclass
class ExperimentConfig:
    name: str
    seed: int = 20240501
    trials: int = 200
    k_max: int = 6
    trunc: int = 8
    levels: int = 25
    out: str = "out"
    mode: str | None = None
    options: dict = field(default_factory=dict)


@dataclass
class Report:
    name: str
    header: list
    rows: list
    ok: bool
    extra: dict = field(default_factory=dict)


def fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, complex):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_report(report: Report, cfg: ExperimentConfig, csv_path: str | Path | None = None) -> Path:
    out = Path(cfg.out)
    path = Path(csv_path) if csv_path else out / f"{report.name}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_csv(report.header, report.rows))
    manifest = {
        "experiment": report.name,
        "config": asdict(cfg),
        "ok": report.ok,
        "csv": str(path),
        "versions": {"falg": __version__, "python": platform.python_version(), "numpy": np.__version__},
    }
    path.with_suffix(".manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str))
    return path


# submultiplicativity ---------------------------------------------------


@dataclass
class SubmultCase:
    name: str
    mode: str
    draw: Callable
    seminorm: Callable
    product: Callable
    ks: range


def _violation(lhs, rhs, mode: str) -> float:
    """Relative excess of ``lhs`` over ``rhs``; positive means a violation."""
    if mode == EXACT:
        excess = Fraction(lhs) - Fraction(rhs)
        return float(excess / rhs) if rhs else float(excess)
    scale = max(float(rhs), 1e-300)
    return (float(lhs) - float(rhs)) / scale


def _is_violation(lhs, rhs, mode: str) -> bool:
    if mode == EXACT:
        return lhs > rhs
    return float(lhs) > float(rhs) * (1 + NUMERIC_RTOL) + 1e-300


def submult_cases(trunc: int, k_max: int, negative_control: bool = False) -> list[SubmultCase]:
    from .module_algebra import mod_mul
    from .series import ps_mul

    tau = tau_c_family()
    disc = disc_family()
    self_action = ModuleAction(SELF)
    char0 = ModuleAction(CHAR, 0)
    char1 = ModuleAction(CHAR, 1)
    d0 = Derivation.partial(0)
    pd0 = Derivation.at_point(0)
    pd1 = Derivation.at_point(1)
    deg = max(1, trunc // 2 - 1)
    ks_exact = range(1, min(k_max, trunc - 1) + 1)
    ks_disc = range(1, k_max + 1)

    def draw_self(rng):
        return tuple(
            ModuleElement(random_series(rng, 3, deg, trunc), random_series(rng, 3, deg, trunc)) for _ in range(2)
        )

    def draw_char0(rng):
        return tuple(ModuleElement(random_series(rng, 3, deg, trunc), random_coeff(rng, EXACT)) for _ in range(2))

    def draw_char1(rng):
        return tuple(
            ModuleElement(random_univariate(rng, 4, 8, NUMERIC), random_coeff(rng, NUMERIC)) for _ in range(2)
        )

    def draw_poly(rng):
        return random_univariate(rng, 4, 8, NUMERIC), random_univariate(rng, 4, 8, NUMERIC)

    def mul_with(action):
        return lambda u, v: mod_mul(u, v, action)

    def poly_mul(p, q):
        return ps_mul(p, q, 8)

    w2 = WeightSequence.k_pow_i_factorial(2)
    wsq = WeightSequence.factorial_squared()
    cases = [
        SubmultCase("q_k[self,tau_c]", EXACT, draw_self,
                    lambda u, k: q_k(u, k, tau, self_action), mul_with(self_action), ks_exact),
        SubmultCase("q_kD[self,tau_c,d/dX0]", EXACT, draw_self,
                    lambda u, k: q_kD(u, k, d0, tau, self_action), mul_with(self_action), ks_exact),
        SubmultCase("q_kD[char@0,tau_c,point@0]", EXACT, draw_char0,
                    lambda u, k: q_kD(u, k, pd0, tau, char0), mul_with(char0), ks_exact),
        SubmultCase("q_kD[char@1,disc,point@1]", NUMERIC, draw_char1,
                    lambda u, k: q_kD(u, k, pd1, disc, char1), mul_with(char1), ks_disc),
        SubmultCase("q_kD_prime[disc,inf]", NUMERIC, draw_poly,
                    lambda p, k: q_kD_prime(p, k, None, disc), poly_mul, ks_disc),
        SubmultCase("q_k_weighted[k_pow_i_factorial:2]", NUMERIC, draw_poly,
                    lambda p, k: q_k_weighted(p, k, w2, disc), poly_mul, ks_disc),
        SubmultCase("q_k_weighted[factorial_squared]", NUMERIC, draw_poly,
                    lambda p, k: q_k_weighted(p, k, wsq, disc), poly_mul, ks_disc),
    ]
    if negative_control:
        cases.append(
            SubmultCase("control[q_k/2]", EXACT, draw_self,
                        lambda u, k: q_k(u, k, tau, self_action) / 2, mul_with(self_action), ks_exact)
        )
    return cases


def run_submult_suite(cfg: ExperimentConfig) -> Report:
    """``trials`` random pairs per seminorm; reports the largest relative violation per level."""
    rng = make_rng(cfg.seed)
    cases = submult_cases(cfg.trunc, cfg.k_max, cfg.options.get("negative_control", False))
    if cfg.mode:
        cases = [c for c in cases if c.mode == cfg.mode]
    header = ["seminorm", "mode", "k", "pairs", "max_rel_violation", "violations"]
    rows = []
    ok = True
    pairs = 0
    for case in cases:
        worst = {k: -np.inf for k in case.ks}
        count = {k: 0 for k in case.ks}
        for _ in range(cfg.trials):
            u, v = case.draw(rng)
            uv = case.product(u, v)
            pairs += 1
            for k in case.ks:
                lhs, rhs = case.seminorm(uv, k), case.seminorm(u, k) * case.seminorm(v, k)
                worst[k] = max(worst[k], _violation(lhs, rhs, case.mode))
                if _is_violation(lhs, rhs, case.mode):
                    count[k] += 1
        for k in case.ks:
            if cfg.trials:
                rows.append([case.name, case.mode, k, cfg.trials, worst[k], count[k]])
            ok = ok and count[k] == 0
    return Report("submult", header, rows, ok, {"pairs": pairs})


# continuity dichotomy --------------------------------------------------


def run_dichotomy_demo(cfg: ExperimentConfig) -> Report:
    """Seminorms of ``iota(p_n)`` along the diagonal witness sequence.

    The base seminorm is the uniform norm on the closed unit disc, where the
    point derivation at 1 is discontinuous. Columns: untwisted ``q``, twisted
    ``q_D`` for ``D = p'(1)``, and the ``D = 0`` control. A second table
    bounds ``q_{k,D} / q_{k+1}`` for ``D = d/dX_0`` under ``tau_c``.
    """
    alpha = complex(cfg.options.get("alpha", 1))
    family = unit_disc_family()
    char1 = ModuleAction(CHAR, 1)
    point = Derivation.at_point(1)
    zero = Derivation.zero(CHAR)
    certs = diagonal_sequence([alpha], cfg.levels)
    header = ["n", "degree", "q_k", "q_kD_point", "q_kD_zero"]
    rows = []
    for cert in certs:
        u = embed_iota(cert.poly, char1)
        rows.append([
            cert.stage,
            cert.degree,
            q_k(u, 1, family, char1),
            q_kD(u, 1, point, family, char1),
            q_kD(u, 1, zero, family, char1),
        ])
    q_last = rows[-1][2]
    ok = q_last < 1 / 20 if cfg.levels >= 20 else True
    ok = ok and all(r[3] >= 0.9 * abs(alpha) for r in rows)
    ok = ok and all(r[4] == r[2] for r in rows)
    ok = ok and all(rows[i][2] < 1 / rows[i][0] for i in range(len(rows)))

    cont_rows, cont_ok = _continuous_control(cfg)
    return Report("dichotomy", header, rows, ok and cont_ok,
                  {"continuous": (["k", "samples", "max_ratio", "bound"], cont_rows)})


def _continuous_control(cfg: ExperimentConfig):
    rng = make_rng(cfg.seed + 1)
    tau = tau_c_family()
    action = ModuleAction(SELF)
    D = Derivation.partial(0)
    rows = []
    ok = True
    trunc = max(cfg.trunc, cfg.k_max + 2)
    for k in range(1, cfg.k_max + 1):
        worst = Fraction(0)
        for _ in range(cfg.trials):
            u = ModuleElement(random_series(rng, 3, trunc - 1, trunc), random_series(rng, 3, trunc - 1, trunc))
            denom = q_k(u, k + 1, tau, action)
            if denom:
                worst = max(worst, Fraction(q_kD(u, k, D, tau, action)) / denom)
        bound = k + 2
        rows.append([k, cfg.trials, worst, bound])
        ok = ok and worst <= bound
    return rows, ok


# radical structure -----------------------------------------------------


def run_radical_report(cfg: ExperimentConfig) -> Report:
    rng = make_rng(cfg.seed)
    header = ["section", "param", "value", "expected", "ok"]
    rows = []
    for r in range(1, cfg.options.get("max_rank", 6) + 1):
        idx = nilpotency_index(tail_generator(1, r), r + 2)
        rows.append(["tail_generator_index", r, idx, r + 1, idx == r + 1])
    self_action = ModuleAction(SELF)
    char1 = ModuleAction(CHAR, 1)
    passed = 0
    for i in range(cfg.trials):
        if i % 2:
            u = ModuleElement(PowerSeries.zero(cfg.trunc), random_series(rng, 3, 4, cfg.trunc))
            passed += radical_witness(u, self_action)
        else:
            u = ModuleElement(PowerSeries.zero(cfg.trunc), random_coeff(rng, EXACT))
            passed += radical_witness(u, char1)
    rows.append(["square_zero", cfg.trials, passed, cfg.trials, passed == cfg.trials])
    R = cfg.options.get("R", 16)
    cert = quasinil_nonnil_certificate(R)
    rows.append(["quasinil_nonzero_through", R, cert.nonzero_through, R, cert.nonzero_through == R])
    for k in range(1, R + 1):
        rows.append(["quasinil_r_k_zero", k, cert.certified_zero[k], True, cert.certified_zero[k]])
    rows.append(["quasinil_verdict", R, cert.verdict, QUASINILPOTENT, cert.verdict == QUASINILPOTENT])
    return Report("radical", header, rows, all(r[4] for r in rows))


# gamma -----------------------------------------------------------------


def run_gamma_table(cfg: ExperimentConfig) -> Report:
    """The family ``M_i = k0^i i!`` for ``k0`` in range, plus the ``(i!)^2`` rule."""
    lo, hi = cfg.options.get("k0_range", (1, 10))
    K = cfg.options.get("K", 32)
    family = doubly_indexed_family(range(lo, hi + 1), K)
    header = ["rule", "K", "gamma", "gamma_exact", "bracket_lo", "bracket_hi", "verdict"]
    rows = []
    ok = True
    for k0, rep in zip(range(lo, hi + 1), family.levels):
        rows.append([rep.tag, K, rep.gamma, rep.gamma_exact, rep.bracket[0], rep.bracket[1], rep.classification])
        ok = ok and rep.gamma == Fraction(1, k0) and rep.monotone
    sq = gamma_estimate(WeightSequence.factorial_squared(), K)
    rows.append([sq.tag, K, sq.gamma, sq.gamma_exact, sq.bracket[0], sq.bracket[1], sq.classification])
    rows.append(["aggregate_limit", K, family.aggregate_limit, True, 0, 0, "-"])
    ok = ok and sq.classification == "natural"
    return Report("gamma", header, rows, ok)


def run_gamma_rule(cfg: ExperimentConfig, rule: str) -> Report:
    M = WeightSequence.parse(rule)
    rep = gamma_estimate(M, cfg.options.get("K"))
    header = ["k", "M_k", "ratio", "bracket_lo", "bracket_hi", "verdict"]
    return Report("gamma", header, list(rep.rows()), rep.monotone, {"report": rep})
