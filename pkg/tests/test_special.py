import random
from fractions import Fraction as Q

import pytest

from polecascade.harmonics import apolar_pairing
from polecascade.special import (SweepEngine, build_special_context,
                                 classify_weyl_triples, e_value,
                                 e_value_bruteforce, harmonic_image_basis,
                                 permanent, pole_subset, s_sets,
                                 special_line_denominators,
                                 verify_special_vanishing)

PAPER_P_L0 = [
    "1 0 0 1 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "0 0 0 0 1 0 0 0 1 1 0 0 0 1 1 0 1",
    "0 0 0 1 0 1 0 0 1 0 1 0 0 1 0 1 1",
    "0 1 0 0 1 1 1 0 1 1 1 1 0 1 1 1 1",
    "0 0 0 0 0 0 1 0 0 1 1 1 1 1 1 1 1",
    "0 0 0 0 0 0 0 1 0 0 0 1 1 0 1 1 1",
    "0 0 1 0 0 0 0 1 0 0 0 0 1 0 0 0 0",
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0",
]
PAPER_R_X4 = [
    "1 1 1 1 1 0 1", "1 1 1 1 1 1 1", "1 2 1 2 1 1 2", "2 2 2 2 2 2 2",
    "1 1 2 2 2 2 2", "1 1 1 1 2 2 2", "1 1 1 1 1 2 1", "1 1 1 1 1 1 1",
]
PAPER_R_X5 = [
    "1 1 1 1 1 1 1 1", "1 1 2 1 1 2 1 2", "2 1 2 2 2 2 2 2", "3 2 3 3 2 3 3 3",
    "2 2 2 2 2 2 3 3", "1 2 1 2 2 2 2 2", "1 2 1 1 2 1 1 1", "1 1 1 1 1 1 1 1",
]


def _columns(rows):
    m = [[int(x) for x in r.split()] for r in rows]
    return {tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0]))}


@pytest.fixture(scope="module")
def ctx():
    return build_special_context()


def test_context_constants(ctx):
    assert ctx.n_space.center == tuple(Q(x) for x in (1, 0, 0, 1, 0, 1, -4, 0))
    assert ctx.l_sp.center == tuple(Q(x) for x in (1, 0, 0, 1, 0, 1, Q(-11, 2), Q(9, 2)))
    assert ctx.p_n_l == tuple(Q(x) for x in (1, 0, 0, 1, 0, 1, -4, 3))


def test_pole_matrices_match_the_stated_columns(ctx):
    assert set(ctx.pole_set) == _columns(PAPER_P_L0)
    assert set(ctx.r_x4) == _columns(PAPER_R_X4)
    assert set(ctx.r_x5) == _columns(PAPER_R_X5)


def test_s_set_members_satisfy_their_evaluations(ctx):
    base = ctx.lambda_base
    for c in ctx.r_x5:
        assert ctx.datum.pair(c, base) == 5 and c[7] == 1
    for c in ctx.r_x4:
        assert ctx.datum.pair(c, base) == 4 and c[7] == 1


def test_s_sets_conventions(ctx):
    # R(-e) = R(w0) is everything: the identity summand sees the full
    # families, which are the stated matrices; the longest element (= -1,
    # so that -w0 = e) sees none of them but inverts every pole coroot
    ss_e = s_sets(ctx, ctx.datum.identity)
    assert set(ss_e.plus_part) == set(ctx.r_x5)
    assert set(ss_e.minus_part) == set(ctx.r_x4)
    assert ss_e.n_w == 1
    w0 = ctx.datum.longest_element()
    ss0 = s_sets(ctx, w0)
    assert ss0.plus_part == () and ss0.minus_part == ()
    assert set(pole_subset(ctx, w0)) == set(ctx.pole_set)
    assert pole_subset(ctx, ctx.datum.identity) == ()


def test_classification_counts(ctx):
    u_classes, w76, w87 = classify_weyl_triples(ctx)
    assert [len(u_classes[m]) for m in range(4)] == [1, 3, 60, 150]
    assert len(w76) == 56 and len(w87) == 240
    for w in w76:
        assert len(ctx.datum.inversion_set(w)) == w.length


def test_pole_count_invariant_under_eta_tau(ctx):
    rng = random.Random(2)
    u_classes, w76, w87 = classify_weyl_triples(ctx)
    us = [u for m in range(4) for u in u_classes[m]]
    pole_n = sorted(ctx.n_space.pole_set)

    def count(w):
        return sum(1 for c in pole_n
                   if ctx.datum.pair(w.apply_coroot(c), [1] * 8) < 0)

    for _ in range(25):
        u = rng.choice(us)
        tau = rng.choice(w76)
        eta = rng.choice(w87)
        w = ctx.datum.product(eta, ctx.datum.product(tau, u))
        assert count(w) == count(u)


def test_permanent_contract():
    assert permanent([[Q(1), Q(2)], [Q(3), Q(4)]]) == 10
    assert permanent([[Q(7)]]) == 7
    assert permanent([]) == 1


def test_e_value_trivial_cases():
    assert e_value([], [(Q(1),)], [], 2) == 1
    # no S elements and N > 0: nothing to differentiate against
    assert e_value([(Q(1),)], [], [], 2) == 0


def test_e_value_matches_bruteforce_grid():
    rng = random.Random(20260810)

    def rvec():
        return tuple(Q(rng.randint(-3, 3)) for _ in range(3))

    cases = 0
    while cases < 210:
        n = rng.randint(0, 3)
        ns = rng.randint(1, 3)
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


def test_e_value_symmetry_100_permutations():
    rng = random.Random(4)

    def rvec():
        return tuple(Q(rng.randint(-2, 2)) for _ in range(3))

    done = 0
    while done < 100:
        q = [rvec() for _ in range(3)]
        sp, sm = [rvec()], [rvec(), rvec()]
        if any(all(x == 0 for x in v) for v in sp + sm):
            continue
        base = e_value(q, sp, sm, 2)
        qq = list(q)
        rng.shuffle(qq)
        assert e_value(qq, sp, sm, 2) == base
        done += 1


def test_harmonics_structure(ctx):
    degs = sorted(max((sum(m) for m in h), default=0) for h in ctx.harmonics)
    assert len(ctx.harmonics) == 24
    assert degs.count(0) == 1 and degs.count(5) == 1
    assert len(ctx.harmonics_plus) == 48


def test_harmonic_image_basis_degenerate(ctx):
    w0 = ctx.datum.longest_element()
    # |P(w0)| = 17 > 6: empty for every degree
    for n in range(7):
        assert harmonic_image_basis(ctx, w0, n) == []
    # identity: Delta = id, G = stabilizer of empty S = full W_F0;
    # degree 0 survives symmetrization
    basis0 = harmonic_image_basis(ctx, ctx.datum.identity, 0)
    assert len(basis0) == 1
    # projector contracts: dimension bounded by the unprojected image
    u = ctx.datum.simple_reflection(0)
    for n in (0, 1, 2):
        proj = harmonic_image_basis(ctx, u, n)
        eng = SweepEngine(ctx)
        b = sum(1 << i for i, c in enumerate(ctx.pole_set)
                if c in pole_subset(ctx, u))
        unproj = eng.delta_basis(b).get(n, [])
        assert len(proj) <= len(unproj)


def test_sweep_engine_matches_permanent_formula(ctx):
    eng = SweepEngine(ctx)
    d = ctx.datum
    rng = random.Random(9)
    s_all = list(ctx.r_x5) + list(ctx.r_x4)
    nonzero = 0
    for _ in range(12):
        a_bits = rng.getrandbits(15)
        graded = eng.delta_basis(0)
        sp = [d.root_of(c) for j, c in enumerate(s_all[:8]) if not a_bits >> j & 1]
        sm = [d.root_of(c) for j, c in enumerate(s_all[8:], 8) if not a_bits >> j & 1]
        n, e = rng.randint(1, 3), rng.randint(1, 3)
        series = eng.product_series(a_bits, e, n)
        for h in graded.get(n, [])[:2]:
            v1 = apolar_pairing(h, series[n], ctx.gram)
            v2 = Q(0)
            for mono, coef in h.items():
                vecs = []
                for j, m in enumerate(mono):
                    vecs.extend([ctx.basis[j]] * m)
                v2 += coef * e_value(vecs, sp, sm, e, d.ip)
            assert v1 == v2
            nonzero += v1 != 0
    assert nonzero > 0


def test_sample_sweep_all_zero(ctx):
    rep = verify_special_vanishing(ctx, "sample")
    assert rep["violations"] == []
    assert rep["max_abs_E"] == 0
    assert rep["eligible"] > 0


def test_special_line_denominators(ctx):
    off_d, sigma_prime_ok = special_line_denominators(ctx)
    assert sigma_prime_ok
    from polecascade.denominators import center_coords

    c = center_coords(ctx.datum, ctx.l0)
    assert len(off_d) == 1
    # the single off-D class is x - 1/2 in the recentered dual coordinate
    assert off_d[0].value_at(c) == Q(-1, 2)
    assert off_d[0].gradient == (Q(1),)
