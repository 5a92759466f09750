"""Report rows are recomputed from their inputs by the underlying operations."""

from fractions import Fraction

from falg.approx import default_schedule, solve_to_bound
from falg.experiments import (
    ExperimentConfig,
    fmt,
    run_dichotomy_demo,
    run_gamma_rule,
    run_gamma_table,
    run_radical_report,
    run_submult_suite,
    to_csv,
    write_report,
)
from falg.higher import tail_generator
from falg.module_algebra import CHAR, Derivation, ModuleAction, embed_iota, q_k, q_kD
from falg.seminorms import unit_disc_family
from falg.spectral import nilpotency_index
from falg.weights import WeightSequence, gamma_estimate


def test_fmt():
    assert fmt(Fraction(1, 3)) == "1/3"
    assert fmt(Fraction(4)) == "4"
    assert fmt(0.1) == "0.1"
    assert fmt(True) == "true"
    assert to_csv(["a", "b"], [[1, "x,y"]]) == 'a,b\n1,"x,y"\n'


def test_submult_zero_trials_gives_header_only():
    rep = run_submult_suite(ExperimentConfig("submult", trials=0))
    assert rep.rows == [] and rep.ok
    assert to_csv(rep.header, rep.rows).startswith("seminorm,mode,k")


def test_submult_default_and_negative_control():
    rep = run_submult_suite(ExperimentConfig("submult", trials=40))
    assert rep.ok
    assert all(r[5] == 0 for r in rep.rows)
    bad = run_submult_suite(ExperimentConfig("submult", trials=40, options={"negative_control": True}))
    assert not bad.ok
    assert any(r[0].startswith("control") and r[5] > 0 for r in bad.rows)


def test_submult_mode_filter():
    rep = run_submult_suite(ExperimentConfig("submult", trials=5, mode="exact"))
    assert {r[1] for r in rep.rows} == {"exact"}


def test_dichotomy_rows_recompute():
    rep = run_dichotomy_demo(ExperimentConfig("dichotomy", levels=6, trials=20))
    assert rep.ok
    n, degree, qk, qd, qz = rep.rows[-1]
    cert = solve_to_bound([1], 1 / n, default_schedule(1)(n), n)
    assert cert.degree == degree
    char1 = ModuleAction(CHAR, 1)
    u = embed_iota(cert.poly, char1)
    fam = unit_disc_family()
    assert q_k(u, 1, fam, char1) == qk
    assert q_kD(u, 1, Derivation.at_point(1), fam, char1) == qd
    assert qz == qk


def test_radical_rows_recompute():
    rep = run_radical_report(ExperimentConfig("radical", trials=10, options={"R": 8, "max_rank": 4}))
    assert rep.ok
    for section, r, value, expected, ok in rep.rows:
        if section == "tail_generator_index":
            assert value == nilpotency_index(tail_generator(1, r), r + 2) == expected


def test_gamma_rows_recompute():
    rep = run_gamma_table(ExperimentConfig("gamma", options={"k0_range": (2, 4), "K": 12}))
    assert rep.ok
    for tag, K, gamma, *_ in rep.rows[:-2]:
        assert gamma_estimate(WeightSequence.parse(tag), K).gamma == gamma
    single = run_gamma_rule(ExperimentConfig("gamma", options={"K": 5}), "k_pow_i_factorial:3")
    assert [r[0] for r in single.rows] == [1, 2, 3, 4, 5]
    assert single.rows[1][1] == 18


def test_write_report_manifest(tmp_path):
    cfg = ExperimentConfig("gamma", out=str(tmp_path), options={"k0_range": (1, 2), "K": 4})
    path = write_report(run_gamma_table(cfg), cfg)
    assert path.read_text().startswith("rule,K,gamma")
    manifest = path.with_suffix(".manifest.json").read_text()
    assert '"seed": 20240501' in manifest and '"numpy"' in manifest
