"""The phase-by-phase cascade of contour shifts (Gen/Std databases).

Phase k consumes the Gen rows of codimension k: each row's pole space is
matched against the Std rows of its W'-orbit, a segment is chosen (to the
center when the SUB tag holds, else to the nearest recorded initial point),
and the pole hyperplanes crossed by that segment spawn the Gen rows of
phase k+1.  Initial points "at infinity" carry a formal parameter, so all
crossing bookkeeping stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from .linalg import vadd, vscale, vsub
from .polespaces import (FormalPoint, PoleSpace, apply_weyl, apply_weyl_formal,
                         enumerate_standard_residual, formal,
                         is_omega_pole_space, omega_ambient, order_along,
                         parabolic_datum, pole_space, space_contains, std_data)
from .roots import Coroot, RootDatum, WeylElement

Segment = tuple[FormalPoint, FormalPoint]


@dataclass
class GenRow:
    space: PoleSpace
    initial_point: FormalPoint
    order: int
    numerator: tuple[Coroot, ...]
    denominator: tuple[Coroot, ...]
    levi_datum: tuple[tuple[int, ...], tuple[Q, ...]]  # (J', gamma') seed data
    root_list: tuple[Coroot, ...]                      # rl: crossed hyperplanes
    parent: tuple[int, int] | None = None              # (phase, row index)

    @property
    def generation(self) -> int:
        return len(self.root_list) + 1


@dataclass
class StdRow:
    space: PoleSpace                     # L0, standard
    rep: WeylElement                     # d, minimal in W'd; d(L0) represents the orbit
    order: int
    sub_tag: bool
    parabolic: tuple[tuple[int, ...], tuple[Q, ...]]
    perp_coroots: tuple[Coroot, ...]
    w_list: list[WeylElement] = field(default_factory=list)
    segment_list: list[Segment] = field(default_factory=list)
    pole_set_list: list[frozenset[Coroot]] = field(default_factory=list)
    gen_indices: list[tuple[int, int]] = field(default_factory=list)
    parallel_flag: bool = False

    @property
    def pole_set(self):
        return self.space.pole_set

    @property
    def center(self):
        return self.space.center


@dataclass
class CascadeDB:
    datum: RootDatum
    gen_phases: list[list[GenRow]]
    std_phases: list[list[StdRow]]

    def all_std_rows(self):
        return [row for phase in self.std_phases for row in phase]

    def member_segments(self):
        """(std row, member index, space, segment in V) for every recorded member."""
        out = []
        for phase in self.std_phases:
            for row in phase:
                for i, w in enumerate(row.w_list):
                    seg0 = row.segment_list[i]
                    seg = (apply_weyl_formal(w, seg0[0]), apply_weyl_formal(w, seg0[1]))
                    out.append((row, i, row.pole_set_list[i], seg))
        return out


# ---------------------------------------------------------------------------
# Omega bookkeeping on rows


def omega_parts(datum: RootDatum, space: PoleSpace):
    """(Num^L, Den^L): nonconstant R'+ and R+ coroots on the space."""
    num = tuple(c for c in sorted(datum.levi_prime_positive)
                if any(datum.pair(c, d) != 0 for d in space.direction_basis))
    den = tuple(c for c in datum.positive_coroots
                if any(datum.pair(c, d) != 0 for d in space.direction_basis))
    return num, den


def _row_for_space(datum: RootDatum, space: PoleSpace, point: FormalPoint,
                   levi_datum, root_list, parent=None) -> GenRow:
    amb = omega_ambient(datum)
    num, den = omega_parts(datum, space)
    fin, inf = point.finite, point.infinite
    for c in space.pole_set:
        if datum.pair(c, fin) != 1 or datum.pair(c, inf) != 0:
            raise AssertionError("initial point does not lie on the space")
    return GenRow(space, point, order_along(datum, space, amb), num, den,
                  levi_datum, root_list, parent)


def init_gen0(datum: RootDatum) -> list[GenRow]:
    """Single row for L = V with initial point t*w' at infinity."""
    v = pole_space(datum, [])
    p = FormalPoint(tuple([Q(0)] * datum.rank), datum.fundamental_weight_prime)
    return [_row_for_space(datum, v, p, ((), ()), ())]


def first_generation(datum: RootDatum) -> list[GenRow]:
    """One row per standard residual space of R', based at infinity.

    Classical types use the partition-strip representatives (the positions
    the classical cascade analysis is written for); exceptional types use
    the Levi/distinguished-center enumeration.
    """
    if datum.type_label in "ABCD" and datum.omitted_index == 0:
        from .classical import classical_subsystem_residual

        spaces = classical_subsystem_residual(datum)
    else:
        spaces = enumerate_standard_residual(datum, datum.levi_prime)
    rows = []
    for lp in spaces:
        j, gamma = parabolic_datum(datum, lp)
        p = FormalPoint(lp.center, datum.fundamental_weight_prime)
        rows.append(_row_for_space(datum, lp, p, (j, gamma), ()))
    rows.sort(key=lambda r: (r.space.codim, sorted(r.space.pole_set)))
    return rows


# ---------------------------------------------------------------------------
# crossings


def _pole_hyperplane_coroots(datum: RootDatum, row_num, row_den):
    """Coroots g with {g = 1} a pole hyperplane of Omega^L (signed)."""
    return tuple(row_den) + tuple(tuple(-x for x in c) for c in row_num)


def poles_crossed(datum: RootDatum, space: PoleSpace, p: FormalPoint, q: FormalPoint,
                  num: tuple[Coroot, ...] | None = None,
                  den: tuple[Coroot, ...] | None = None):
    """Pole spaces crossed by the directed segment [p, q] inside the space.

    Returns (rows, contained): rows are (sort key, crossing point, child space,
    chosen coroot); ``contained`` flags coroots constant at value 1 along a
    nondegenerate segment (the column-9 phenomenon).  A hyperplane met at q
    is included, one met only at p is the parent's responsibility.
    """
    if num is None or den is None:
        num, den = omega_parts(datum, space)
    if p == q:
        return [], False
    amb = omega_ambient(datum)
    contained = False
    hits: dict = {}
    if not p.is_finite:
        if q.infinite != tuple([Q(0)] * datum.rank) or p.finite != q.finite:
            raise AssertionError("formal segment must be a ray over its endpoint")
        v = p.infinite
        for g in _pole_hyperplane_coroots(datum, num, den):
            slope = datum.pair(g, v)
            base = datum.pair(g, q.finite)
            if slope == 0:
                if base == 1:
                    contained = True
                continue
            s = (1 - base) / slope
            if s < 0:
                continue  # not on the ray (p at s = +infinity, q at s = 0)
            pt = vadd(q.finite, vscale(s, v))
            hits.setdefault((-s,), {}).setdefault(tuple(pt), []).append(g)
    else:
        if not q.is_finite:
            raise AssertionError("segments never end at infinity")
        for g in _pole_hyperplane_coroots(datum, num, den):
            a = datum.pair(g, p.finite)
            b = datum.pair(g, q.finite)
            if a == b:
                if a == 1:
                    contained = True
                continue
            t = (1 - a) / (b - a)
            if not (0 < t <= 1):
                continue
            pt = vadd(p.finite, vscale(t, vsub(q.finite, p.finite)))
            hits.setdefault((t,), {}).setdefault(tuple(pt), []).append(g)
    out = []
    for key in sorted(hits):
        for pt, coroots in sorted(hits[key].items()):
            by_space: dict = {}
            for g in sorted(coroots):
                try:
                    child = pole_space(datum, [c for c in space.pole_set] + [g])
                except ValueError:
                    continue
                if child.codim != space.codim + 1:
                    continue
                if not space_contains(datum, space, child):
                    continue
                if not is_omega_pole_space(datum, child, amb):
                    continue
                by_space.setdefault(child.key(), (child, g))
            for _, (child, g) in sorted(by_space.items()):
                out.append((key, formal(pt), child, g))
    return out, contained


# ---------------------------------------------------------------------------
# SUB tag


def sub_tag(l0: PoleSpace, datum: RootDatum, _cache={}) -> bool:
    """True iff some residual space contains l0 with the same center.

    Equivalently: the center is the center of a residual space of the Levi
    subsystem of coroots constant on l0.
    """
    j, _ = parabolic_datum(datum, l0)
    dom, _w = datum.dominant_map(l0.center, j)
    key = (id(datum), j, dom)
    if key in _cache:
        return _cache[key]
    result = False
    for m in enumerate_standard_residual(datum, j):
        mdom, _ = datum.dominant_map(m.center, j)
        if mdom == dom:
            result = True
            break
    _cache[key] = result
    return result


# ---------------------------------------------------------------------------
# W'-orbit matching


def wprime_match(datum: RootDatum, a: PoleSpace, b: PoleSpace,
                 max_enum: int = 200000) -> WeylElement | None:
    """u in W' with u(a) = b, or None."""
    jp = datum.levi_prime
    if a.codim != b.codim:
        return None
    group = datum.weyl_group(jp)
    if len(group) <= 5000:
        for u in group:
            if all(u.apply_coroot(c) in b.pole_set for c in a.pole_set) \
               and u.apply_point(a.center) == b.center:
                if apply_weyl(datum, u, a) == b:
                    return u
        return None
    # large W': align centers first, then search the center stabilizer
    da, ua = datum.dominant_map(a.center, jp)
    db, ub = datum.dominant_map(b.center, jp)
    if da != db:
        return None
    j1 = tuple(i for i in jp if da[i] == 0)
    stab = datum.weyl_group(j1)
    if len(stab) > max_enum:
        raise RuntimeError("W'-stabilizer too large for explicit matching")
    a1 = apply_weyl(datum, ua, a)
    b1 = apply_weyl(datum, ub, b)
    for v in stab:
        if apply_weyl(datum, v, a1) == b1:
            return datum.product(datum.inverse_element(ub),
                                 datum.product(v, ua))
    return None


# ---------------------------------------------------------------------------
# the phase construction


def _min_rep(datum: RootDatum, w: WeylElement) -> WeylElement:
    return datum.min_coset_rep_left(w, datum.levi_prime)


def _perp_coroots(datum: RootDatum, l0: PoleSpace) -> tuple[Coroot, ...]:
    j, _ = parabolic_datum(datum, l0)
    return tuple(c for c in datum.positive_coroots
                 if all(datum.pair(c, datum.simple_roots[i]) == 0 for i in j))


def _segment_in(seg: Segment, segs: list[Segment]) -> bool:
    return any(seg == s for s in segs)


def _sq_dist(datum: RootDatum, p, q) -> Q:
    d = vsub(p, q)
    return datum.ip(d, d)


def casc_phase(db: CascadeDB, k: int, first_gen: list[GenRow] | None = None) -> None:
    """Process Gen_k: fill std_phases[k] and gen_phases[k+1] (unless k = rank)."""
    datum = db.datum
    if first_gen is None:
        first_gen = first_generation(datum)
    if len(db.gen_phases) <= k:
        raise ValueError(f"phase {k} Gen table missing")
    gen = db.gen_phases[k]
    std: list[StdRow] = []
    nex: list[GenRow] = [] if k == datum.rank else [
        r for r in first_gen if r.space.codim == k + 1]

    def register_crossings(row_idx, row, p, q):
        crossings, contained = poles_crossed(datum, row.space, p, q,
                                             row.numerator, row.denominator)
        for _, pt, child, g in crossings:
            nex.append(_row_for_space(datum, child, pt, row.levi_datum,
                                      row.root_list + (g,), parent=(k, row_idx)))
        return contained

    for row_idx, row in enumerate(gen):
        l = row.space
        p_l = row.initial_point
        match = None
        for srow in std:
            rep_space = apply_weyl(datum, srow.rep, srow.space)
            u = wprime_match(datum, l, rep_space)
            if u is not None:
                w = datum.product(datum.inverse_element(u), srow.rep)
                match = (srow, w)
                break
        if match is not None:
            srow, w = match
            winv = datum.inverse_element(w)
            if srow.sub_tag:
                seg0 = (apply_weyl_formal(winv, p_l), formal(srow.space.center))
                if not _segment_in(seg0, srow.segment_list):
                    contained = register_crossings(row_idx, row, p_l, formal(l.center))
                    srow.parallel_flag |= contained
                srow.w_list.append(w)
                srow.segment_list.append(seg0)
                srow.pole_set_list.append(l.pole_set)
                srow.gen_indices.append((k, row_idx))
            else:
                p0 = apply_weyl_formal(winv, p_l)
                pts = [s[0] for s in srow.segment_list]
                q0 = min(pts, key=lambda q: (_sq_dist(datum, p0.finite, q.finite),
                                             q.finite))
                seg0 = (p0, q0)
                if not _segment_in(seg0, srow.segment_list):
                    q_l = apply_weyl_formal(w, q0)
                    contained = register_crossings(row_idx, row, p_l, q_l)
                    srow.parallel_flag |= contained
                srow.w_list.append(w)
                srow.segment_list.append(seg0)
                srow.pole_set_list.append(l.pole_set)
                srow.gen_indices.append((k, row_idx))
        else:
            w, l0, pd = std_data(l, datum)
            sub = sub_tag(l0, datum)
            d = _min_rep(datum, w)
            winv = datum.inverse_element(w)
            # column 5 stores the order of the standard form (Omega is only
            # W'-invariant, so this can differ from the members' order)
            srow = StdRow(l0, d, order_along(datum, l0, omega_ambient(datum)),
                          sub, pd, _perp_coroots(datum, l0))
            if sub:
                contained = register_crossings(row_idx, row, p_l, formal(l.center))
                srow.parallel_flag |= contained
                seg0 = (apply_weyl_formal(winv, p_l), formal(l0.center))
            else:
                p0 = apply_weyl_formal(winv, p_l)
                seg0 = (p0, p0)
            srow.w_list.append(w)
            srow.segment_list.append(seg0)
            srow.pole_set_list.append(l.pole_set)
            srow.gen_indices.append((k, row_idx))
            std.append(srow)

    db.std_phases.append(std)
    if k < datum.rank:
        db.gen_phases.append(nex)


def run_cascade(datum: RootDatum) -> CascadeDB:
    """Construct the full cascade database, phases 0..rank."""
    db = CascadeDB(datum, [init_gen0(datum)], [])
    fg = first_generation(datum)
    for k in range(datum.rank + 1):
        casc_phase(db, k, fg)
    return db


# ---------------------------------------------------------------------------
# verification


@dataclass
class CascadeReport:
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg):
        self.failures.append(msg)

    def note(self, msg):
        self.notes.append(msg)


def _on_segment(datum: RootDatum, pt: FormalPoint, seg: Segment) -> bool:
    """Whether an exact (possibly formal) point lies on a directed segment."""
    a, b = seg
    if not a.is_finite:
        if not pt.is_finite:
            return pt.infinite == a.infinite and pt.finite == a.finite
        # ray from b.finite in direction a.infinite
        diff = vsub(pt.finite, b.finite)
        v = a.infinite
        idx = next((i for i, x in enumerate(v) if x != 0), None)
        if idx is None:
            return diff == tuple([Q(0)] * datum.rank)
        s = diff[idx] / v[idx]
        return s >= 0 and vadd(b.finite, vscale(s, v)) == pt.finite
    if not pt.is_finite:
        return False
    ab = vsub(b.finite, a.finite)
    ap = vsub(pt.finite, a.finite)
    idx = next((i for i, x in enumerate(ab) if x != 0), None)
    if idx is None:
        return pt.finite == a.finite
    t = ap[idx] / ab[idx]
    return 0 <= t <= 1 and vadd(a.finite, vscale(t, ab)) == pt.finite


def verify_cascade(db: CascadeDB) -> CascadeReport:
    """Check the cascade axioms and tree properties; failures become report lines."""
    datum = db.datum
    rep = CascadeReport()
    members = db.member_segments()
    amb = omega_ambient(datum)

    # (iv): first-generation segments present with center endpoints
    for fg in first_generation(datum):
        found = False
        for srow, i, pset, seg in members:
            if pset == fg.space.pole_set and seg[0] == fg.initial_point \
               and seg[1] == formal(fg.space.center):
                found = True
                break
        if not found:
            rep.fail(f"missing first-generation segment for pole set {sorted(fg.space.pole_set)}")

    # (v) crossing closure up to W': every hyperplane intersection of a recorded
    # segment appears as some member's initial point, up to W'
    spaces_by_pset = {}
    for srow, i, pset, seg in members:
        w = srow.w_list[i]
        spaces_by_pset.setdefault(pset, apply_weyl(datum, w, srow.space))
    initial_pts = [(pset, apply_weyl_formal(srow.w_list[i], srow.segment_list[i][0]))
                   for srow, i, pset, seg in members]
    for srow, i, pset, seg in members:
        space = spaces_by_pset[pset]
        num, den = omega_parts(datum, space)
        crossings, _ = poles_crossed(datum, space, seg[0], seg[1], num, den)
        for _, pt, child, g in crossings:
            ok = False
            for u in datum.weyl_group(datum.levi_prime):
                upt = apply_weyl_formal(u, pt)
                uchild = apply_weyl(datum, u, child)
                for pset2, ipt in initial_pts:
                    if ipt == upt and pset2 == uchild.pole_set:
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                rep.fail(f"crossing closure violated at {pt.finite} (child {sorted(child.pole_set)})")

    # (vi) every non-first-generation row has a recorded parent
    for k, phase in enumerate(db.gen_phases):
        for idx, row in enumerate(phase):
            if row.root_list and row.parent is None:
                rep.fail(f"gen row ({k},{idx}) lacks a parent")
            if row.parent is not None:
                pk, pi = row.parent
                parent = db.gen_phases[pk][pi]
                if parent.space.codim + 1 != row.space.codim:
                    rep.fail(f"codimension step broken at gen row ({k},{idx})")
                if row.root_list[:-1] != parent.root_list:
                    rep.fail(f"flag extension broken at gen row ({k},{idx})")
                if row.order < parent.order:
                    rep.fail(f"Omega-order decreased along flag at ({k},{idx})")

    # (vii) center termination matches the SUB tag
    for phase in db.std_phases:
        for srow in phase:
            for seg in srow.segment_list:
                if srow.sub_tag:
                    if seg[1] != formal(srow.space.center):
                        rep.fail("SUB row has a segment not ending at the center")
                else:
                    if not seg[1].is_finite:
                        rep.fail("non-SUB row has an infinite segment endpoint")

    # trees: connectivity of the recorded segments inside each standard space
    for phase in db.std_phases:
        for srow in phase:
            segs = srow.segment_list
            n = len(segs)
            adj = [[False] * n for _ in range(n)]
            for i in range(n):
                for j2 in range(n):
                    if i == j2:
                        continue
                    for endpoint in segs[j2]:
                        if _on_segment(datum, endpoint, segs[i]):
                            adj[i][j2] = adj[j2][i] = True
            seen = {0} if n else set()
            stack = [0] if n else []
            while stack:
                x = stack.pop()
                for y in range(n):
                    if adj[x][y] and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != n:
                rep.fail(f"segment tree disconnected for pole set {sorted(srow.pole_set)}")

    # order bookkeeping: stored standard order, and W'-invariance across members
    for phase in db.std_phases:
        for srow in phase:
            o = order_along(datum, srow.space, amb)
            if o != srow.order:
                rep.fail("stored order disagrees with recomputation")
            member_orders = {db.gen_phases[k][i].order for k, i in srow.gen_indices}
            if len(member_orders) > 1:
                rep.fail("Omega-order not constant on a W'-orbit")
            if srow.parallel_flag:
                rep.note("segment-parallel pole hyperplane observed (column 9)")
    return rep
