from fractions import Fraction as Q

import pytest

from polecascade.cascade import (first_generation, init_gen0, poles_crossed,
                                 run_cascade, sub_tag, verify_cascade,
                                 wprime_match)
from polecascade.polespaces import (apply_weyl, formal,
                                    enumerate_standard_residual, is_residual,
                                    pole_space)
from polecascade.roots import build_root_datum


def test_init_gen0():
    d1 = build_root_datum("A", 1)
    rows = init_gen0(d1)
    assert len(rows) == 1
    assert rows[0].numerator == () and rows[0].denominator == ((1,),)
    d2 = build_root_datum("A", 2)
    rows = init_gen0(d2)
    assert len(rows) == 1
    assert len(rows[0].numerator) == 1 and len(rows[0].denominator) == 3


def test_first_generation_counts():
    assert len(first_generation(build_root_datum("A", 1))) == 1
    assert len(first_generation(build_root_datum("A", 2))) == 2
    # one row per residual orbit of the B3 Levi inside F4
    f4 = build_root_datum("F", 4)
    rows = first_generation(f4)
    assert len(rows) == len(enumerate_standard_residual(f4, f4.levi_prime))
    assert len(rows) == 8


def test_poles_crossed_degenerate_and_a1():
    d = build_root_datum("A", 1)
    v = pole_space(d, [])
    p = formal((2,))
    assert poles_crossed(d, v, p, p) == ([], False)
    hits, contained = poles_crossed(d, v, formal((4,)), formal((0,)))
    assert not contained and len(hits) == 1
    _, pt, child, g = hits[0]
    assert pt.finite == (Q(1),) and g == (1,)
    assert child.codim == 1


def test_poles_crossed_endpoint_convention():
    d = build_root_datum("A", 1)
    v = pole_space(d, [])
    # crossing exactly at q is registered, at p it is not
    hits, _ = poles_crossed(d, v, formal((4,)), formal((1,)))
    assert len(hits) == 1
    hits, _ = poles_crossed(d, v, formal((1,)), formal((0,)))
    assert len(hits) == 0


def test_special_line_crossing_point():
    """The E6(a3) initial ray meets the special line where the paper says."""
    from polecascade.special import build_special_context

    ctx = build_special_context()
    assert ctx.p_n_l == tuple(Q(x) for x in (1, 0, 0, 1, 0, 1, -4, 3))


def test_sub_tag():
    d = build_root_datum("A", 2)
    for sp in enumerate_standard_residual(d):
        assert sub_tag(sp, d)  # residual spaces always carry the tag
    import polecascade.polespaces as ps

    # the point (1, 0) is a non-residual space whose tempered form lies in no
    # residual tempered form: its dominant label is not an orbit diagram
    stray = ps.make_space(d, (Q(1), Q(0)), [])
    assert not is_residual(d, stray)
    assert not sub_tag(stray, d)


def test_wprime_match():
    d = build_root_datum("F", 4)
    l0 = enumerate_standard_residual(d)[5]
    wparr = d.weyl_group(d.levi_prime)
    u = wparr[17]
    moved = apply_weyl(d, u, l0)
    got = wprime_match(d, l0, moved)
    assert got is not None and apply_weyl(d, got, l0) == moved
    outside = apply_weyl(d, d.longest_element(), l0)
    if all(apply_weyl(d, v, l0) != outside for v in wparr):
        assert wprime_match(d, l0, outside) is None


def test_a1_cascade_hand_run():
    d = build_root_datum("A", 1)
    db = run_cascade(d)
    assert [len(p) for p in db.gen_phases] == [1, 1]
    assert [len(p) for p in db.std_phases] == [1, 1]
    point_row = db.std_phases[1][0]
    assert point_row.sub_tag
    c = formal(point_row.space.center)
    assert point_row.segment_list == [(c, c)]
    assert verify_cascade(db).ok


@pytest.mark.parametrize("t,r", [("A", 2), ("A", 3), ("B", 2), ("B", 3),
                                 ("C", 3), ("G", 2), ("D", 4)])
def test_cascades_verify_small(t, r):
    db = run_cascade(build_root_datum(t, r))
    rep = verify_cascade(db)
    assert rep.ok, rep.failures


def test_f4_cascade_verifies():
    db = run_cascade(build_root_datum("F", 4))
    rep = verify_cascade(db)
    assert rep.ok, rep.failures
    # every phase-k row has codimension k
    for k, phase in enumerate(db.gen_phases):
        assert all(row.space.codim == k for row in phase)


def test_verify_detects_deleted_segment():
    db = run_cascade(build_root_datum("B", 2))
    # drop one non-first-generation member segment: closure must complain
    for phase in db.std_phases:
        for srow in phase:
            if len(srow.segment_list) and srow.space.codim == 1:
                srow.segment_list.pop()
                srow.w_list.pop()
                srow.pole_set_list.pop()
                srow.gen_indices.pop()
                rep = verify_cascade(db)
                assert not rep.ok
                return
    raise AssertionError("no segment found to delete")


def test_order_weakly_increasing_along_flags():
    for t, r in [("F", 4), ("B", 3)]:
        db = run_cascade(build_root_datum(t, r))
        for phase in db.gen_phases:
            for row in phase:
                if row.parent is not None:
                    pk, pi = row.parent
                    assert row.order >= db.gen_phases[pk][pi].order
