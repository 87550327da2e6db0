"""Affine pole spaces of the rational forms and their classification.

A pole space is stored with an exact particular point, a canonical (rref)
basis of its direction space, its full pole/singular coroot sets, center,
and codimension.  Spaces whose initial point sits "at infinity" along the
omitted fundamental weight carry a formal parameter instead of a number;
see :class:`FormalPoint`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Iterable, Sequence

from .linalg import Vec, rref, solve_affine, solve_linear_system, vadd, vscale, vsub
from .roots import Coroot, RootDatum, WeylElement

_PRIMES = (10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079,
           10091, 10093, 10099, 10103, 10111, 10133, 10139, 10141)


# ---------------------------------------------------------------------------
# points with a formal t >> 0 component


@dataclass(frozen=True)
class FormalPoint:
    """finite + t*infinite with t a formal, arbitrarily large parameter."""

    finite: Vec
    infinite: Vec

    @property
    def is_finite(self) -> bool:
        return all(x == 0 for x in self.infinite)

    def __add__(self, other: "FormalPoint") -> "FormalPoint":
        return FormalPoint(vadd(self.finite, other.finite), vadd(self.infinite, other.infinite))

    def __sub__(self, other: "FormalPoint") -> "FormalPoint":
        return FormalPoint(vsub(self.finite, other.finite), vsub(self.infinite, other.infinite))


def formal(finite: Sequence, infinite: Sequence | None = None) -> FormalPoint:
    n = len(finite)
    inf = tuple(Q(x) for x in infinite) if infinite is not None else tuple([Q(0)] * n)
    return FormalPoint(tuple(Q(x) for x in finite), inf)


def formal_pair(datum: RootDatum, coroot: Coroot, p: FormalPoint) -> tuple[Q, Q]:
    """Evaluation <coroot, p> as (finite part, coefficient of t)."""
    return datum.pair(coroot, p.finite), datum.pair(coroot, p.infinite)


def formal_cmp(a: tuple[Q, Q], b: tuple[Q, Q]) -> int:
    """Compare a1 + a2*t vs b1 + b2*t for t >> 0."""
    if a[1] != b[1]:
        return 1 if a[1] > b[1] else -1
    if a[0] != b[0]:
        return 1 if a[0] > b[0] else -1
    return 0


def apply_weyl_formal(w: WeylElement, p: FormalPoint) -> FormalPoint:
    return FormalPoint(w.apply_point(p.finite), w.apply_point(p.infinite))


def concretize(datum: RootDatum, p: FormalPoint) -> Vec:
    """Substitute a concrete large t: 1 + 2*max |<a, finite>| over all coroots."""
    if p.is_finite:
        return p.finite
    bound = max((abs(datum.pair(c, p.finite)) for c in datum.positive_coroots), default=Q(0))
    t = 2 * bound + 1
    return vadd(p.finite, vscale(t, p.infinite))


# ---------------------------------------------------------------------------
# pole spaces


@dataclass(frozen=True)
class PoleSpace:
    defining_coroots: frozenset[Coroot]
    point: Vec                      # a particular point of L
    direction_basis: tuple[Vec, ...]  # canonical rref basis of V^L
    pole_set: frozenset[Coroot]     # signed coroots == 1 on L
    singular_set: frozenset[Coroot]  # signed coroots == 0 on L
    center: Vec
    codim: int

    def key(self):
        return (self.center, self.direction_basis)

    def __eq__(self, other):
        return isinstance(other, PoleSpace) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def dim(self) -> int:
        return len(self.direction_basis)

    def contains_point(self, datum: RootDatum, p: Sequence) -> bool:
        diff = vsub(tuple(Q(x) for x in p), self.center)
        rows = [[self.inner_rows] if False else None]
        # p in L  <=>  p - c_L lies in the span of the direction basis
        mat = [list(b) for b in self.direction_basis]
        sol = solve_affine(list(map(list, zip(*mat))) if mat else [[Q(0)] * 0], list(diff)) \
            if mat else None
        if not mat:
            return all(x == 0 for x in diff)
        return sol is not None


@dataclass(frozen=True)
class OrbitLabel:
    weighted_dynkin: tuple[int, ...]
    name: str | None = None


@dataclass(frozen=True)
class DensityFactors:
    isotropy_order: int = 1
    component_group_order: int = 1

    def __post_init__(self):
        if self.isotropy_order < 1 or self.component_group_order < 1:
            raise ValueError("density factors must be positive")


def _canonical_dirs(basis: Iterable[Sequence]) -> tuple[Vec, ...]:
    rows = [[Q(x) for x in b] for b in basis]
    if not rows:
        return ()
    red, pivots = rref(rows)
    return tuple(tuple(r) for r in red[: len(pivots)])


def _center(datum: RootDatum, point: Vec, dirs: tuple[Vec, ...]) -> Vec:
    """Orthogonal projection of any point of L away from V^L (exact)."""
    if not dirs:
        return point
    g = datum.inner_product
    n = datum.rank
    gp = [sum(g[i][j] * point[j] for j in range(n)) for i in range(n)]
    gram = [[sum(dirs[a][i] * g[i][j] * dirs[b][j] for i in range(n) for j in range(n))
             for b in range(len(dirs))] for a in range(len(dirs))]
    rhs = [sum(dirs[a][i] * gp[i] for i in range(n)) for a in range(len(dirs))]
    coef = solve_linear_system(gram, rhs)
    proj = point
    for c, d in zip(coef, dirs):
        proj = vsub(proj, vscale(c, d))
    return proj


def make_space(datum: RootDatum, point: Sequence, dirs: Iterable[Sequence],
               defining: Iterable[Coroot] = ()) -> PoleSpace:
    point = tuple(Q(x) for x in point)
    basis = _canonical_dirs(dirs)
    pole, sing = [], []
    for c in datum.positive_coroots:
        if any(datum.pair(c, d) != 0 for d in basis):
            continue
        v = datum.pair(c, point)
        if v == 1:
            pole.append(c)
        elif v == -1:
            pole.append(tuple(-x for x in c))
        if v == 0:
            sing.append(c)
            sing.append(tuple(-x for x in c))
    center = _center(datum, point, basis)
    return PoleSpace(frozenset(defining), center, basis, frozenset(pole),
                     frozenset(sing), center, datum.rank - len(basis))


def pole_space(datum: RootDatum, coroot_set: Iterable[Coroot]) -> PoleSpace:
    """The affine space {<a,x> = 1 for a in coroot_set} with its pole data."""
    coroots = sorted(set(coroot_set))
    if not coroots:
        return make_space(datum, [Q(0)] * datum.rank,
                          [tuple(Q(1) if j == i else Q(0) for j in range(datum.rank))
                           for i in range(datum.rank)])
    sol = solve_affine([list(map(Q, c)) for c in coroots], [Q(1)] * len(coroots))
    if sol is None:
        raise ValueError("inconsistent coroot system: empty intersection")
    part, basis = sol
    return make_space(datum, part, basis, coroots)


def apply_weyl(datum: RootDatum, w: WeylElement, space: PoleSpace) -> PoleSpace:
    return make_space(datum, w.apply_point(space.center),
                      [w.apply_point(d) for d in space.direction_basis],
                      frozenset(w.apply_coroot(c) for c in space.defining_coroots))


def space_contains(datum: RootDatum, big: PoleSpace, small: PoleSpace) -> bool:
    """Whether small is an (affine) subspace of big."""
    if small.dim > big.dim:
        return False
    if not big.direction_basis:
        return small.center == big.center
    cols = list(zip(*big.direction_basis))
    # small.center - big.center must be in span, and every direction too
    for v in (vsub(small.center, big.center), *small.direction_basis):
        if solve_affine([list(c) for c in cols], list(v)) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# classification


def omega_ambient(datum: RootDatum, w_twist: WeylElement | None = None) -> frozenset[Coroot]:
    """Pole/zero bookkeeping set of the form wOmega: w(R+ union R'_-)."""
    amb = set(datum.positive_coroots)
    amb.update(tuple(-x for x in c) for c in datum.levi_prime_positive)
    if w_twist is not None:
        amb = {w_twist.apply_coroot(c) for c in amb}
    return frozenset(amb)


def order_along(datum: RootDatum, space: PoleSpace, ambient: frozenset[Coroot]) -> int:
    p = sum(1 for c in space.pole_set if c in ambient)
    z = sum(1 for c in space.singular_set if c in ambient)
    return p - z - space.codim


def is_omega_pole_space(datum: RootDatum, space: PoleSpace,
                        ambient: frozenset[Coroot]) -> bool:
    """defn: pole set within the ambient family cuts out L and order >= 0."""
    pw = [c for c in space.pole_set if c in ambient]
    from .linalg import rank as mrank

    if mrank([list(map(Q, c)) for c in pw]) != space.codim:
        return False
    return order_along(datum, space, ambient) >= 0


def is_residual(datum: RootDatum, space: PoleSpace) -> bool:
    return len(space.pole_set) >= len(space.singular_set) + space.codim


def classify(space: PoleSpace, datum: RootDatum,
             w_twist: WeylElement | None = None) -> tuple[bool, int]:
    """(is_residual under Omega_r, order along the twisted Omega)."""
    amb = omega_ambient(datum, w_twist)
    return is_residual(datum, space), order_along(datum, space, amb)


def weighted_dynkin_label(space: PoleSpace, datum: RootDatum,
                          names: dict | None = None) -> OrbitLabel:
    if not is_residual(datum, space):
        raise ValueError("weighted Dynkin labels are defined for residual spaces only")
    dom, _ = datum.dominant_map(space.center)
    wd = tuple(2 * x for x in dom)
    if any(x.denominator != 1 or x not in (0, 1, 2) for x in map(Q, wd)):
        raise AssertionError(f"non {{0,1,2}} weighted Dynkin labels: {wd}")
    wd = tuple(int(x) for x in wd)
    name = (names or {}).get((datum.type_label, datum.rank, wd))
    return OrbitLabel(wd, name)


# ---------------------------------------------------------------------------
# enumeration of standard residual spaces


def distinguished_centers(datum: RootDatum, levi: Sequence[int]) -> list[Vec]:
    """Centers of the 0-dimensional residual spaces of a standard Levi.

    Candidates come from evenness of distinguished orbits: the simple-coroot
    values of the center lie in {0, 1}.  Each candidate is kept iff it is a
    residual point of the Levi subsystem (pole/zero count with equality).
    """
    levi = sorted(levi)
    if not levi:
        return [tuple([Q(0)] * datum.rank)]
    sub = datum.levi_positive_coroots(levi)
    out = []
    for labels in itertools.product((0, 1), repeat=len(levi)):
        # c = sum t_j alpha_j with <coroot_i, c> = labels_i
        rows = [[Q(datum.cartan_matrix[i][j]) for j in levi] for i in levi]
        t = solve_linear_system(rows, [Q(x) for x in labels])
        c = tuple([Q(0)] * datum.rank)
        for tj, j in zip(t, levi):
            c = vadd(c, vscale(tj, datum.simple_roots[j]))
        npole = sum(1 for a in sub for s in (1, -1) if s * datum.pair(a, c) == 1)
        nzero = sum(2 for a in sub if datum.pair(a, c) == 0)
        if npole < nzero + len(levi):
            continue
        assert npole == nzero + len(levi), "residual inequality must be an equality"
        out.append(c)
    return sorted(out)


def space_from_levi_center(datum: RootDatum, levi: Sequence[int], center: Vec) -> PoleSpace:
    levi = sorted(levi)
    if levi:
        from .linalg import nullspace

        dirs = nullspace([[Q(1) if j == i else Q(0) for j in range(datum.rank)] for i in levi])
    else:
        dirs = [tuple(Q(1) if j == i else Q(0) for j in range(datum.rank))
                for i in range(datum.rank)]
    return make_space(datum, center, dirs)


def enumerate_standard_residual(datum: RootDatum,
                                subsystem: Sequence[int] | None = None) -> list[PoleSpace]:
    """One standard representative per W(subsystem)-orbit of residual spaces.

    ``subsystem`` is a set of simple indices (defaults to the whole system).
    Representatives are deduplicated through the weighted-Dynkin bijection,
    computed with dominance taken inside the subsystem's Weyl group.
    """
    amb = tuple(range(datum.rank)) if subsystem is None else tuple(sorted(subsystem))
    found: dict[tuple, PoleSpace] = {}
    for k in range(len(amb) + 1):
        for levi in itertools.combinations(amb, k):
            for c in distinguished_centers(datum, levi):
                dom, _ = datum.dominant_map(c, amb)
                key = tuple(2 * x for x in dom)
                if key not in found:
                    found[key] = space_from_levi_center(datum, levi, c)
    return [found[k] for k in sorted(found)]


def parabolic_datum(datum: RootDatum, space: PoleSpace) -> tuple[tuple[int, ...], tuple[Q, ...]]:
    """(J, gamma): simple indices constant on the space, and their values."""
    j = tuple(i for i in range(datum.rank)
              if all(d[i] == 0 for d in space.direction_basis))
    gamma = tuple(space.center[i] for i in j)
    return j, gamma


def generic_point(datum: RootDatum, space: PoleSpace, prime_offset: int = 0) -> Vec:
    """Deterministic generic point c_L + t * x of the space (exact, checked)."""
    if not space.direction_basis:
        return space.center
    noncst = [c for c in datum.positive_coroots
              if any(datum.pair(c, d) != 0 for d in space.direction_basis)]
    for shift in range(len(_PRIMES)):
        x = tuple([Q(0)] * datum.rank)
        for k, d in enumerate(space.direction_basis):
            p = _PRIMES[(prime_offset + shift + k) % len(_PRIMES)]
            x = vadd(x, vscale(Q(1, p), d))
        vals = [datum.pair(c, x) for c in noncst]
        if all(v != 0 for v in vals):
            t = 1 + max((abs(datum.pair(c, space.center)) / abs(v)).__ceil__()
                        for c, v in zip(noncst, vals))
            return vadd(space.center, vscale(Q(t), x))
    raise AssertionError("no generic perturbation found (prime pool exhausted)")


def std_data(space: PoleSpace, datum: RootDatum):
    """(w, L0, (J, gamma)) with w(L0) = space and L0 standard."""
    lam = generic_point(datum, space)
    _, w1 = datum.dominant_map(lam)
    l0 = apply_weyl(datum, w1, space)
    w = datum.inverse_element(w1)
    return w, l0, parabolic_datum(datum, l0)


# ---------------------------------------------------------------------------
# spectral density


def nu_density(space: PoleSpace, datum: RootDatum, factors: DensityFactors,
               lambda_l: Sequence) -> Q:
    """Exact evaluation of the density product formula at c_L + i*lambda^L.

    ``lambda_l`` holds rational coordinates with respect to the space's
    direction basis.  Raises ZeroDivisionError at poles of the density.
    """
    if not is_residual(datum, space):
        raise ValueError("density is attached to residual spaces")
    lam = tuple([Q(0)] * datum.rank)
    for x, d in zip(lambda_l, space.direction_basis, strict=True):
        lam = vadd(lam, vscale(Q(x), d))
    pref = Q(factors.isotropy_order, factors.component_group_order)

    num = Q(1)
    den = Q(1)
    c = space.center
    for a in datum.positive_coroots:
        if all(datum.pair(a, d) == 0 for d in space.direction_basis):
            # constant (Levi) coroots contribute |a(c)| / |a(c) + 1| over both signs
            for s in (1, -1):
                v = s * datum.pair(a, c)
                if v != 0:
                    num *= abs(v)
                if v + 1 != 0:
                    den *= abs(v + 1)
        else:
            vc = datum.pair(a, c)
            vl = datum.pair(a, lam)
            top = vc * vc + vl * vl
            bot = (vc - 1) * (vc - 1) + vl * vl
            if bot == 0:
                raise ZeroDivisionError("density has a pole at the requested point")
            num *= top
            den *= bot
    return pref * num / den
