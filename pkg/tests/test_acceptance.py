"""Acceptance suite: one test per criterion, exact tolerances, budget checks.

Each test prints a single PASS line on success; the full special-line sweep
(criterion 8, extended mode) runs only when POLECASCADE_FULL_SWEEP=1 since
the sampled shard is the committed budget.
"""

import itertools
import os
import random
import time
from fractions import Fraction as Q

import pytest

from polecascade.roots import build_root_datum


def _report(num, label, t0, budget_s):
    dt = time.time() - t0
    assert dt < budget_s, f"criterion {num} exceeded its runtime budget"
    print(f"ACCEPTANCE {num}: PASS ({label}, {dt:.1f}s)")


@pytest.fixture(scope="module")
def ctx():
    from polecascade.special import build_special_context

    return build_special_context()


@pytest.fixture(scope="module")
def f4_cascade():
    from polecascade.cascade import run_cascade

    return run_cascade(build_root_datum("F", 4))


def test_criterion_1_orbit_counts():
    from polecascade.orbits import (load_orbit_table, orbit_catalog,
                                    residual_orbit_count_oracle)
    from polecascade.polespaces import enumerate_standard_residual

    t0 = time.time()
    classical = [("A", r) for r in range(1, 6)] + \
        [("B", 2), ("B", 3), ("B", 4), ("C", 3), ("C", 4), ("D", 4), ("D", 5)]
    for t, r in classical:
        d = build_root_datum(t, r)
        assert len(enumerate_standard_residual(d)) == \
            residual_orbit_count_oracle(t, r), (t, r)
    table = load_orbit_table()
    for t, r in [("G", 2), ("F", 4), ("E", 6)]:
        d = build_root_datum(t, r)
        cat = {row["diagram"] for row in orbit_catalog(d)}
        entries = {k[2] for k in table if k[0] == t and k[1] == r}
        assert cat == entries, (t, r)
        for sp in enumerate_standard_residual(d):
            assert len(sp.pole_set) == len(sp.singular_set) + sp.codim
    _report(1, "orbit counts vs partition oracle and table", t0, 60)


def test_criterion_2_appendix_d_pole_data(ctx):
    from tests.test_special import PAPER_P_L0, PAPER_R_X4, PAPER_R_X5, _columns

    t0 = time.time()
    assert set(ctx.pole_set) == _columns(PAPER_P_L0)
    assert set(ctx.r_x4) == _columns(PAPER_R_X4)
    assert set(ctx.r_x5) == _columns(PAPER_R_X5)
    _report(2, "17/7/8-column pole matrices", t0, 60)


def test_criterion_3_appendix_e_classification(ctx):
    from polecascade.special import classify_weyl_triples

    t0 = time.time()
    u_classes, w76, w87 = classify_weyl_triples(ctx)
    assert [len(u_classes[m]) for m in range(4)] == [1, 3, 60, 150]
    assert len(w76) == 56 and len(w87) == 240
    for w in itertools.chain(w76, w87):
        assert len(ctx.datum.inversion_set(w)) == w.length
    _report(3, "(1,3,60,150) / 56 / 240 with minimality", t0, 300)


def test_criterion_4_f4_cascade(f4_cascade):
    from polecascade.cascade import verify_cascade

    t0 = time.time()
    rep = verify_cascade(f4_cascade)
    assert rep.ok, rep.failures
    _report(4, "F4 cascade axioms, closure, monotone orders", t0, 1800)


def test_criterion_5_classical_cascades():
    from polecascade.cascade import run_cascade
    from polecascade.polespaces import formal, is_residual, omega_ambient

    t0 = time.time()
    systems = [("A", r) for r in range(1, 6)] + \
        [("B", r) for r in range(2, 6)] + [("C", r) for r in range(3, 6)] + \
        [("D", 4), ("D", 5)]
    for t, r in systems:
        d = build_root_datum(t, r)
        db = run_cascade(d)
        amb = omega_ambient(d)
        for phase in db.std_phases:
            for srow in phase:
                cpt = formal(srow.space.center)
                for i in range(len(srow.w_list)):
                    k, gi = srow.gen_indices[i]
                    row = db.gen_phases[k][gi]
                    seg = srow.segment_list[i]
                    if row.generation >= 3:
                        assert seg == (cpt, cpt), ("(i)", t, r)
                    if not is_residual(d, srow.space):
                        assert seg == (cpt, cpt), ("(iii)", t, r)
                    if row.generation <= 2:
                        assert row.order == 0, ("(ii)", t, r)
                        assert all(d.is_positive_coroot(c)
                                   for c in row.space.pole_set & amb), ("(iv)", t, r)
    _report(5, "classical cascade properties (i)-(iv), rank <= 5", t0, 600)


def test_criterion_6_denominator_theorems_f4(f4_cascade):
    from polecascade.denominators import (check_main_containment,
                                          check_tau_identity)
    from polecascade.polespaces import is_residual

    t0 = time.time()
    d = f4_cascade.datum
    pairs = 0
    for phase in f4_cascade.std_phases:
        for srow in phase:
            if is_residual(d, srow.space):
                for w in srow.w_list:
                    assert check_tau_identity(srow.space, w, d)
                    assert check_main_containment(srow.space, w, d)
                    pairs += 1
    assert pairs >= 50
    _report(6, f"tau identity and main containments on {pairs} F4 pairs", t0, 1200)


def test_criterion_7_e_formula_oracle():
    from polecascade.special import e_value, e_value_bruteforce

    t0 = time.time()
    rng = random.Random(20260810)

    def rvec():
        return tuple(Q(rng.randint(-3, 3)) for _ in range(3))

    cases = 0
    while cases < 210:
        n, ns = rng.randint(0, 3), rng.randint(1, 3)
        npl = rng.randint(0, ns)
        q = [rvec() for _ in range(n)]
        sp = [rvec() for _ in range(npl)]
        sm = [rvec() for _ in range(ns - npl)]
        if any(all(x == 0 for x in v) for v in sp + sm):
            continue
        for e in (1, 2, 3):
            assert e_value(q, sp, sm, e) == e_value_bruteforce(q, sp, sm, e)
            cases += 1
    assert cases >= 200
    _report(7, f"E-formula vs symbolic oracle on {cases} cases", t0, 120)


def test_criterion_8_special_vanishing_sampled(ctx):
    from polecascade.special import verify_special_vanishing

    t0 = time.time()
    rep = verify_special_vanishing(ctx, "sample")
    assert rep["violations"] == [] and rep["max_abs_E"] == 0
    assert rep["eligible"] > 10000
    _report(8, f"special-line vanishing, sampled shard "
               f"({rep['eligible']} eligible triples)", t0, 900)


@pytest.mark.skipif(os.environ.get("POLECASCADE_FULL_SWEEP") != "1",
                    reason="extended mode: set POLECASCADE_FULL_SWEEP=1")
def test_criterion_8_special_vanishing_full(ctx, tmp_path):
    from polecascade.special import verify_special_vanishing

    t0 = time.time()
    rep = verify_special_vanishing(ctx, "full",
                                   checkpoint=str(tmp_path / "sweep.jsonl"))
    assert rep["triples"] == 214 * 56 * 240
    assert rep["violations"] == [] and rep["max_abs_E"] == 0
    _report(8, f"special-line vanishing, full sweep "
               f"({rep['eligible']} eligible triples)", t0, 6 * 3600)


def test_criterion_9_property_suites():
    from tests.test_denominators import test_heritability_on_nested_rank3_pairs
    from tests.test_roots import test_inversion_length_exhaustive_small_rank
    from tests.test_special import test_e_value_symmetry_100_permutations
    from tests.test_store import test_byte_determinism_across_runs_and_workers

    t0 = time.time()
    for t, r in [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3),
                 ("G", 2)]:
        test_inversion_length_exhaustive_small_rank(t, r)
    test_heritability_on_nested_rank3_pairs()
    test_e_value_symmetry_100_permutations()
    test_byte_determinism_across_runs_and_workers()
    _report(9, "inversion lengths, heritability, E symmetry, determinism",
            t0, 1800)
