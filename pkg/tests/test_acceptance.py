"""Acceptance gate: nine criteria at their stated tolerances and time limits.

Each test records one PASS/FAIL line, shown in the pytest terminal summary.
Run directly (``python3 tests/test_acceptance.py``) to print the lines alone.
"""

import math
import sys
import tempfile
import time
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from cli_runs import run_all  # noqa: E402
from falg.approx import diagonal_sequence  # noqa: E402
from falg.experiments import ExperimentConfig, run_dichotomy_demo, run_submult_suite  # noqa: E402
from falg.higher import ArElement, HigherDerivation, ar_mul, higher_leibniz_defect, tail_generator  # noqa: E402
from falg.module_algebra import (  # noqa: E402
    CHAR,
    SELF,
    Derivation,
    ModuleAction,
    ModuleElement,
    mod_mul,
    q_k,
    q_kD,
    radical_witness,
    theta_D,
)
from falg.sampling import make_rng, random_coeff, random_series, random_univariate  # noqa: E402
from falg.seminorms import tau_c_family  # noqa: E402
from falg.series import EXACT, Monomial, PowerSeries, eval_all, ps_pow  # noqa: E402
from falg.spectral import QUASINILPOTENT, nilpotency_index, quasinil_nonnil_certificate  # noqa: E402
from falg.weights import WeightSequence, gamma_estimate  # noqa: E402
from oracles import dense_mul, dense_pow, dense_terms, to_dense, truncated_poly_mul  # noqa: E402

SEED = 20240501
RESULTS: dict[int, str] = {}


def record(n: int, title: str, ok: bool, elapsed: float, limit: float | None, detail: str) -> bool:
    within = limit is None or elapsed < limit
    passed = ok and within
    budget = f" < {limit:g} s" if limit is not None else ""
    RESULTS[n] = f"[{'PASS' if passed else 'FAIL'}] {n}. {title}: {detail} ({elapsed:.2f} s{budget})"
    print(RESULTS[n])
    return passed


# 1 -------------------------------------------------------------------------


def test_gamma_exactness():
    t0 = time.perf_counter()
    gammas = {k0: gamma_estimate(WeightSequence.k_pow_i_factorial(k0), 32) for k0 in range(1, 11)}
    elapsed = time.perf_counter() - t0
    ok = all(rep.gamma == Fraction(1, k0) and rep.gamma_exact and isinstance(rep.gamma, Fraction)
             for k0, rep in gammas.items())
    detail = "gamma = " + ", ".join(str(rep.gamma) for rep in gammas.values())
    assert record(1, "gamma exactness for M_i = k0^i i!", ok, elapsed, 1.0, detail)


# 2 -------------------------------------------------------------------------


def test_submultiplicativity_suite():
    cases = 7
    trials = math.ceil(10_000 / cases)
    t0 = time.perf_counter()
    rep = run_submult_suite(ExperimentConfig("submult", seed=SEED, trials=trials))
    elapsed = time.perf_counter() - t0
    pairs = rep.extra["pairs"]
    violations = sum(r[5] for r in rep.rows)
    seminorms = sorted({r[0] for r in rep.rows})
    ok = rep.ok and pairs >= 10_000 and violations == 0 and len(seminorms) == cases
    detail = f"{pairs} pairs over {len(seminorms)} seminorm families, {violations} violations"
    assert record(2, "submultiplicativity", ok, elapsed, 60.0, detail)


# 3 -------------------------------------------------------------------------


def _theta_pairs(rng, n):
    # degree <= 3 at truncation 8: products are never truncated
    for _ in range(n):
        yield tuple(ModuleElement(random_series(rng, 3, 3, 8), random_series(rng, 3, 3, 8)) for _ in range(2))


def test_theta_contract():
    rng = make_rng(SEED + 3)
    tau = tau_c_family()
    action = ModuleAction(SELF)
    char0 = ModuleAction(CHAR, 0)
    D = Derivation.partial(0)
    P = Derivation.at_point(0)
    t0 = time.perf_counter()
    failures = 0
    for u, v in _theta_pairs(rng, 1000):
        uv = mod_mul(u, v, action, strict=True)
        failures += theta_D(uv, D) != mod_mul(theta_D(u, D), theta_D(v, D), action)
        for k in (1, 2, 3, 4):
            failures += q_k(theta_D(u, D), k, tau, action) != q_kD(u, k, D, tau, action)
        # the same contract for the point derivation into the character module at 0
        s, t = ModuleElement(u.a, random_coeff(rng, EXACT)), ModuleElement(v.a, random_coeff(rng, EXACT))
        st = mod_mul(s, t, char0)
        failures += theta_D(st, P) != mod_mul(theta_D(s, P), theta_D(t, P), char0)
        failures += q_k(theta_D(s, P), 2, tau, char0) != q_kD(s, 2, P, tau, char0)
    bad = D.perturb(Monomial.var(0, 2), PowerSeries.one(8))
    broken = 0
    for u, v in _theta_pairs(rng, 1000):
        uv = mod_mul(u, v, action, strict=True)
        broken += theta_D(uv, bad) != mod_mul(theta_D(u, bad), theta_D(v, bad), action)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and broken >= 1
    detail = f"1000 pairs, {failures} isometry/multiplicativity failures; perturbed D breaks {broken}/1000"
    assert record(3, "theta_D contract", ok, elapsed, 30.0, detail)


# 4 -------------------------------------------------------------------------


def test_higher_leibniz():
    rng = make_rng(SEED + 4)
    D = HigherDerivation(8)
    t0 = time.perf_counter()
    nonzero = 0
    for _ in range(1000):
        x = random_univariate(rng, int(rng.integers(0, 9)))
        y = random_univariate(rng, int(rng.integers(0, 9)))
        for s in range(1, 9):
            nonzero += higher_leibniz_defect(D, x, y, s) != 0
    elapsed = time.perf_counter() - t0
    detail = f"1000 trials x s = 1..8, {nonzero} nonzero defects"
    assert record(4, "higher Leibniz at 1", nonzero == 0, elapsed, 30.0, detail)


# 5 -------------------------------------------------------------------------


def test_radical_structure():
    rng = make_rng(SEED + 5)
    t0 = time.perf_counter()
    indices = {r: nilpotency_index(tail_generator(1, r), r + 2) for r in range(1, 7)}
    index_ok = all(indices[r] == r + 1 for r in indices)
    # every product of r + 1 tail basis elements vanishes
    products_ok = True
    for r in range(1, 7):
        basis = [tail_generator(j, r) for j in range(1, r + 1)]
        for combo in combinations_with_replacement(range(r), r + 1):
            prod = basis[combo[0]]
            for j in combo[1:]:
                prod = ar_mul(prod, basis[j])
            products_ok = products_ok and prod.is_zero()
    square_zero = 0
    self_action, char1 = ModuleAction(SELF), ModuleAction(CHAR, 1)
    for i in range(1000):
        if i % 2:
            square_zero += radical_witness(ModuleElement(PowerSeries.zero(8), random_series(rng, 3, 4, 8)),
                                           self_action)
        else:
            square_zero += radical_witness(ModuleElement(PowerSeries.zero(8), random_coeff(rng, EXACT)), char1)
    cert = quasinil_nonnil_certificate(32)
    cert_ok = (cert.nonzero_through == 32 and all(cert.certified_zero[k] for k in range(1, 33))
               and cert.verdict == QUASINILPOTENT)
    elapsed = time.perf_counter() - t0
    ok = index_ok and products_ok and square_zero == 1000 and cert_ok
    detail = (f"indices {[indices[r] for r in range(1, 7)]}, tail products of length r+1 vanish: {products_ok}, "
              f"square-zero {square_zero}/1000, R = 32 nonzero through {cert.nonzero_through}, {cert.verdict}")
    assert record(5, "radical structure", ok, elapsed, 30.0, detail)


# 6 -------------------------------------------------------------------------


def test_approximation_decay():
    targets = [1, -2, 3]
    t0 = time.perf_counter()
    certs = diagonal_sequence(targets, 20)
    elapsed = time.perf_counter() - t0
    sup_ok = all(c.sup_norm * 1.01 < 1 / k for k, c in enumerate(certs, start=1))
    resid_ok = all(c.max_residual < 1e-8 and c.phi_value < 1e-8 for c in certs)
    ok = len(certs) == 20 and sup_ok and resid_ok
    worst = max(c.sup_norm * 1.01 * k for k, c in enumerate(certs, start=1))
    detail = (f"k = 1..20, max 1.01 k ||p_k|| = {worst:.3f}, max residual {max(c.max_residual for c in certs):.1e}, "
              f"final degree {certs[-1].degree}")
    assert record(6, "approximation decay", ok, elapsed, 60.0, detail)


# 7 -------------------------------------------------------------------------


def test_dichotomy_demo():
    t0 = time.perf_counter()
    rep = run_dichotomy_demo(ExperimentConfig("dichotomy", seed=SEED, levels=20, trials=100))
    elapsed = time.perf_counter() - t0
    q = [r[2] for r in rep.rows]
    q_point = [r[3] for r in rep.rows]
    q_zero = [r[4] for r in rep.rows]
    alpha = 1.0
    decreasing = all(b <= a for a, b in zip(q, q[1:]))
    ok = (decreasing and q[-1] < 1 / 20 and all(v < 1 / n for n, v in enumerate(q, start=1))
          and min(q_point) >= 0.9 * alpha
          and q_zero == q and q_zero[-1] < 1 / 20
          and rep.ok)
    detail = (f"q: {q[0]:.3f} -> {q[-1]:.4f}, min q_D(point) = {min(q_point):.4f}, "
              f"D = 0 control: {q_zero[0]:.3f} -> {q_zero[-1]:.4f}")
    assert record(7, "dichotomy demo", ok, elapsed, 60.0, detail)


# 8 -------------------------------------------------------------------------


def test_oracle_equivalence():
    rng = make_rng(SEED + 8)
    t0 = time.perf_counter()
    mismatches = 0
    for _ in range(500):
        nvars = int(rng.integers(1, 4))
        f = random_series(rng, nvars, 4, 8)
        g = random_series(rng, nvars, 4, 8)
        A, B = to_dense(f, nvars, 9), to_dense(g, nvars, 9)
        mismatches += (f + g).terms != dense_terms(A + B, 8)
        mismatches += (f * g).terms != dense_terms(dense_mul(A, B, 8), 8)
        n = int(rng.integers(0, 4))
        mismatches += ps_pow(f, n).terms != dense_terms(dense_pow(A, n, 8), 8)
        r = int(rng.integers(1, 7))
        u = ArElement(random_univariate(rng, 4, 8), [random_coeff(rng, EXACT) for _ in range(r)])
        v = ArElement(random_univariate(rng, 4, 8), [random_coeff(rng, EXACT) for _ in range(r)])
        conv = truncated_poly_mul([eval_all(u.a, 1), *u.tail], [eval_all(v.a, 1), *v.tail], r)
        mismatches += list(ar_mul(u, v).tail) != conv[1:]
    elapsed = time.perf_counter() - t0
    detail = f"500 cases (add, mul, pow, convolution tail), {mismatches} mismatches"
    assert record(8, "dense oracle equivalence", mismatches == 0, elapsed, 30.0, detail)


# 9 -------------------------------------------------------------------------


def test_cli_determinism():
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as tmp:
        first = run_all(Path(tmp) / "a", seed=SEED)
        second = run_all(Path(tmp) / "b", seed=SEED)
    elapsed = time.perf_counter() - t0
    files = first["files"]
    same = files.keys() == second["files"].keys() and all(files[k] == second["files"][k] for k in files)
    codes_ok = all(c == 0 for c in first["codes"] + second["codes"])
    ok = same and codes_ok and len(files) >= 12
    detail = f"{len(files)} output files from {len(first['codes'])} experiments, byte-identical: {same}"
    assert record(9, "CLI determinism", ok, elapsed, None, detail)


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
