"""Command-line front end: ``falg <subcommand> [options]``.

Exit status is 0 when every checked property held, 1 when a violation was
found and 2 for budget, configuration or input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .approx import approximating_sequence, diagonal_sequence
from .errors import FalgError
from .experiments import (
    ExperimentConfig,
    Report,
    run_dichotomy_demo,
    run_gamma_rule,
    run_gamma_table,
    run_radical_report,
    run_submult_suite,
    to_csv,
    write_report,
)
from .higher import HigherDerivation, ar_mul, higher_leibniz_defect, theta_D_higher
from .jsonio import ar_from_json, ar_to_json, dumps, element_from_json, load, module_element_from_json, \
    module_element_to_json
from .module_algebra import Derivation, q_k, q_kD, theta_D
from .sampling import make_rng, random_univariate
from .seminorms import disc_family, tau_c_family, unit_disc_family
from .series import EXACT, NUMERIC, Monomial
from .spectral import spectral_radius_estimate

OK, VIOLATION, CONFIG_ERROR = 0, 1, 2

FAMILIES = {"tau_c": tau_c_family, "disc": disc_family, "unit_disc": unit_disc_family}


def parse_derivation(text: str) -> Derivation:
    """``zero``, ``zero@char``, ``partial:i`` or ``point@c``."""
    if text == "zero":
        return Derivation.zero("self")
    if text == "zero@char":
        return Derivation.zero("char")
    if text.startswith("partial"):
        _, _, i = text.partition(":")
        return Derivation.partial(int(i or 0))
    if text.startswith("point"):
        _, _, c = text.partition("@")
        return Derivation.at_point(Fraction(c or 1))
    raise ValueError(f"unknown derivation {text!r}")


def parse_targets(text: str, mode: str = NUMERIC) -> list:
    """Comma-separated targets: rationals like ``1/2`` in either mode, complex
    literals like ``1+2j`` in numeric mode."""
    out = []
    for t in text.replace(" ", "").split(","):
        if not t:
            continue
        try:
            value = Fraction(t)
        except ValueError:
            value = complex(t)
        out.append(value if mode == EXACT else complex(value))
    return out


def _config(args, name: str, **kw) -> ExperimentConfig:
    return ExperimentConfig(name=name, seed=args.seed, out=args.out, mode=args.mode, **kw)


def _finish(report: Report, cfg: ExperimentConfig, csv_path=None, quiet=False) -> int:
    path = write_report(report, cfg, csv_path)
    if not quiet:
        print(f"{report.name}: {'ok' if report.ok else 'VIOLATION'} -> {path}")
    return OK if report.ok else VIOLATION


def cmd_submult(args) -> int:
    cfg = _config(args, "submult", trials=args.trials, k_max=args.k_max, trunc=args.trunc,
                  options={"negative_control": args.negative_control})
    return _finish(run_submult_suite(cfg), cfg)


def cmd_dichotomy(args) -> int:
    cfg = _config(args, "dichotomy", trials=args.trials, levels=args.levels, options={"alpha": args.alpha})
    report = run_dichotomy_demo(cfg)
    header, rows = report.extra["continuous"]
    out = Path(cfg.out) / "dichotomy_continuous.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(to_csv(header, rows))
    return _finish(report, cfg)


def cmd_radical(args) -> int:
    cfg = _config(args, "radical", trials=args.trials, options={"R": args.R, "max_rank": args.max_rank})
    return _finish(run_radical_report(cfg), cfg)


def cmd_gamma(args) -> int:
    if args.rule:
        cfg = _config(args, "gamma", options={"K": args.K})
        return _finish(run_gamma_rule(cfg, args.rule), cfg, args.csv)
    lo, _, hi = args.k0_range.partition(":")
    cfg = _config(args, "gamma", options={"K": args.K or 32, "k0_range": (int(lo), int(hi))})
    return _finish(run_gamma_table(cfg), cfg, args.csv)


def cmd_approx(args) -> int:
    mode = args.mode or NUMERIC
    targets = parse_targets(args.targets, mode)
    if args.diagonal:
        certs = diagonal_sequence(targets, args.n, mode=mode)
    else:
        certs = approximating_sequence(targets, len(targets), args.n, mode=mode)
    k = len(targets)
    header = ["n", "degree", "sup_norm", "bound"] + [f"resid_{i}" for i in range(1, k + 1)] + ["l1_bound"]
    rows = []
    for c in certs:
        resid = list(c.residuals) + [""] * (k - len(c.residuals))
        rows.append([c.stage, c.degree, c.sup_norm, c.bound, *resid, c.l1_bound])
    cfg = _config(args, "approx", levels=args.n, options={"targets": args.targets, "diagonal": args.diagonal})
    ok = all(c.meets() for c in certs)
    return _finish(Report("approx", header, rows, ok), cfg, args.csv)


def cmd_spectral(args) -> int:
    x = element_from_json(load(args.element))
    family = FAMILIES[args.family]()
    header = ["k", "n", "p_k(x^n)", "p_k(x^n)^(1/n)"]
    rows = []
    verdicts = []
    for k in range(1, args.k + 1):
        rep = spectral_radius_estimate(x, k, args.n, family)
        rows.extend(rep.rows())
        verdicts.append((k, rep.estimates[k], rep.certified_zero[k], rep.verdict))
    cfg = _config(args, "spectral", k_max=args.k, levels=args.n, options={"element": str(args.element)})
    for k, est, cert, verdict in verdicts:
        print(f"k={k} estimate={est} certified_zero={cert} verdict={verdict}")
    return _finish(Report("spectral", header, rows, True), cfg)


def cmd_qkd(args) -> int:
    u, action = module_element_from_json(load(args.element))
    D = parse_derivation(args.derivation)
    family = FAMILIES[args.family]()
    header = ["k", "q_k", "q_kD"]
    rows = [
        [k, q_k(u, k, family, action, args.use_lk), q_kD(u, k, D, family, action, args.use_lk)]
        for k in range(1, args.k + 1)
    ]
    cfg = _config(args, "qkd", k_max=args.k, options={"element": str(args.element), "derivation": args.derivation})
    return _finish(Report("qkd", header, rows, True), cfg)


def _write_json(args, name: str, obj) -> int:
    text = dumps(obj) + "\n"
    out = Path(args.out) / f"{name}.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(text, end="")
    return OK


def cmd_theta(args) -> int:
    obj = load(args.element)
    if "tail" in obj:
        u = ar_from_json(obj)
        D = HigherDerivation(u.rank, u.infinite)
        return _write_json(args, "theta", ar_to_json(theta_D_higher(u, D)))
    u, action = module_element_from_json(obj)
    D = parse_derivation(args.derivation)
    D.check_target(action)
    return _write_json(args, "theta", module_element_to_json(theta_D(u, D), action))


def cmd_armul(args) -> int:
    u, v = ar_from_json(load(args.left)), ar_from_json(load(args.right))
    return _write_json(args, "armul", ar_to_json(ar_mul(u, v)))


def cmd_leibniz(args) -> int:
    rng = make_rng(args.seed)
    D = HigherDerivation(args.rank)
    if args.perturb:
        D = D.perturb(min(2, args.rank), Monomial.var(0, 3), 1)
    worst = {s: Fraction(0) for s in range(1, args.rank + 1)}
    nonzero = {s: 0 for s in range(1, args.rank + 1)}
    for _ in range(args.trials):
        x = random_univariate(rng, args.degree)
        y = random_univariate(rng, args.degree)
        for s in range(1, args.rank + 1):
            d = higher_leibniz_defect(D, x, y, s)
            worst[s] = max(worst[s], abs(d))
            nonzero[s] += d != 0
    header = ["s", "trials", "max_abs_defect", "nonzero"]
    rows = [[s, args.trials, worst[s], nonzero[s]] for s in worst]
    cfg = _config(args, "leibniz-check", trials=args.trials, k_max=args.rank,
                  options={"perturb": args.perturb, "degree": args.degree})
    ok = not any(nonzero.values())
    return _finish(Report("leibniz-check", header, rows, ok), cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=20240501)
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--mode", choices=["exact", "numeric"], default=None)

    parser = argparse.ArgumentParser(prog="falg", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("submult", aliases=["submult-probe"], parents=[common], help="submultiplicativity property suite")
    p.add_argument("--trials", type=int, default=1500)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--trunc", type=int, default=8)
    p.add_argument("--negative-control", action="store_true")
    p.set_defaults(func=cmd_submult)

    p = sub.add_parser("dichotomy", parents=[common], help="continuity dichotomy along the witness sequence")
    p.add_argument("--levels", type=int, default=25)
    p.add_argument("--alpha", type=complex, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_dichotomy)

    p = sub.add_parser("radical", parents=[common], help="nilpotency and quasinilpotency report")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--R", type=int, default=16)
    p.add_argument("--max-rank", type=int, default=6)
    p.set_defaults(func=cmd_radical)

    p = sub.add_parser("gamma", parents=[common], help="weight-sequence gamma table")
    p.add_argument("--rule", default=None, help='e.g. "k_pow_i_factorial:3", "factorial_squared"')
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--k0-range", default="1:10")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("approx", parents=[common], help="approximating polynomial sequence")
    p.add_argument("--targets", required=True, help="comma-separated complex targets, e.g. 1,-2,3")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--diagonal", action="store_true")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("spectral", parents=[common], help="spectral-radius estimates from a JSON element")
    p.add_argument("--element", required=True)
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--family", choices=sorted(FAMILIES), default="tau_c")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("qkd", parents=[common], help="q_k and q_{k,D} of a JSON module element")
    p.add_argument("--element", required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--derivation", default="partial:0")
    p.add_argument("--family", choices=sorted(FAMILIES), default="tau_c")
    p.add_argument("--use-lk", action="store_true")
    p.set_defaults(func=cmd_qkd)

    p = sub.add_parser("theta", parents=[common], help="apply theta_D to a JSON element")
    p.add_argument("--element", required=True)
    p.add_argument("--derivation", default="partial:0")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("armul", parents=[common], help="product of two JSON tail elements")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_armul)

    p = sub.add_parser("leibniz-check", parents=[common], help="higher Leibniz defects on random polynomials")
    p.add_argument("--rank", type=int, default=8)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--perturb", action="store_true")
    p.set_defaults(func=cmd_leibniz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FalgError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
