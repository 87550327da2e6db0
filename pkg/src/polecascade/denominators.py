"""Denominator calculus on standard pole spaces.

Symbolic convention: a standard space M0 with parabolic datum (J, gamma)
has the generic point  lambda_M0 = sum_J gamma_j w_j + sum_{b not in J} x_b w_b
with indeterminates x_b.  An affine form on M0 is stored as a gradient over
the free positions plus a rational constant; the class {nu, 1 - nu} is
canonicalized to the representative with componentwise-nonnegative gradient.

Denominator extraction happens at regular standard envelopes: the coroot
restrictions are grouped by gradient, their integer-spaced constants are
decomposed into maximal runs, and tops (+1 shift) or bottoms (no shift)
are read off -- the downward/upward multiplicity jumps.  Entries travel as
(coroot, shift) pairs, so the pullback along w_H is a covector action.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Iterable, Sequence

from .polespaces import (PoleSpace, apply_weyl, generic_point,
                         parabolic_datum, pole_space, space_contains)
from .roots import Coroot, RootDatum, WeylElement


# ---------------------------------------------------------------------------
# affine forms in the free coordinates of a standard space


@dataclass(frozen=True)
class AffineForm:
    gradient: tuple[Q, ...]
    constant: Q

    def is_constant(self) -> bool:
        return all(g == 0 for g in self.gradient)

    def flipped(self) -> "AffineForm":
        return AffineForm(tuple(-g for g in self.gradient), 1 - self.constant)

    def canonical(self) -> "AffineForm":
        neg = any(g < 0 for g in self.gradient)
        pos = any(g > 0 for g in self.gradient)
        if neg and pos:
            raise AssertionError("mixed-sign gradient: not a coroot restriction")
        return self.flipped() if neg else self

    def value_at(self, coords: Sequence[Q]) -> Q:
        return sum((g * Q(c) for g, c in zip(self.gradient, coords, strict=True)),
                   self.constant)

    def __str__(self):
        bits = []
        for i, g in enumerate(self.gradient):
            if g:
                bits.append(f"{g}*x{i}")
        bits.append(str(self.constant))
        return "+".join(bits)


class DenominatorMultiset:
    """Canonical affine forms with positive multiplicities, plus a tag."""

    def __init__(self, entries: dict[AffineForm, int] | None = None, tag: str = ""):
        self.entries = {k: v for k, v in (entries or {}).items() if v > 0}
        self.tag = tag

    def __eq__(self, other):
        return isinstance(other, DenominatorMultiset) and self.entries == other.entries

    def __iter__(self):
        return iter(sorted(self.entries.items(),
                           key=lambda kv: (kv[0].gradient, kv[0].constant)))

    def __len__(self):
        return sum(self.entries.values())

    def submultiset_of(self, other: "DenominatorMultiset") -> bool:
        return all(other.entries.get(k, 0) >= v for k, v in self.entries.items())

    def intersect(self, other: "DenominatorMultiset") -> "DenominatorMultiset":
        keys = set(self.entries) & set(other.entries)
        return DenominatorMultiset(
            {k: min(self.entries[k], other.entries[k]) for k in keys}, self.tag)

    def map_forms(self, fn) -> "DenominatorMultiset":
        out: dict[AffineForm, int] = {}
        for k, v in self.entries.items():
            k2 = fn(k)
            if k2 is not None:
                out[k2] = out.get(k2, 0) + v
        return DenominatorMultiset(out, self.tag)


def free_positions(datum: RootDatum, space: PoleSpace) -> tuple[int, ...]:
    j, _ = parabolic_datum(datum, space)
    return tuple(i for i in range(datum.rank) if i not in j)


def std_wdd(m0: PoleSpace, datum: RootDatum) -> list[AffineForm]:
    """Symbolic generic point of a standard space, one affine form per coordinate.

    Gradients are indexed by the free (non-parabolic) node positions.
    """
    j, gamma = parabolic_datum(datum, m0)
    free = [i for i in range(datum.rank) if i not in j]
    gm = dict(zip(j, gamma))
    coords = []
    for i in range(datum.rank):
        grad = tuple(Q(1) if (i == b) else Q(0) for b in free)
        coords.append(AffineForm(grad, Q(0)) if i in free
                      else AffineForm(tuple([Q(0)] * len(free)), gm[i]))
    return coords


def pair_symbolic(datum: RootDatum, coroot: Sequence, sym: list[AffineForm]) -> AffineForm:
    nfree = len(sym[0].gradient) if sym else 0
    grad = [Q(0)] * nfree
    const = Q(0)
    for ci, form in zip(coroot, sym, strict=True):
        if ci:
            const += Q(ci) * form.constant
            for k in range(nfree):
                grad[k] += Q(ci) * form.gradient[k]
    return AffineForm(tuple(grad), const)


def apply_matrix_symbolic(w: WeylElement, sym: list[AffineForm]) -> list[AffineForm]:
    n = len(sym)
    nfree = len(sym[0].gradient) if sym else 0
    out = []
    for i in range(n):
        grad = [Q(0)] * nfree
        const = Q(0)
        for jj in range(n):
            m = int(w.mat[i, jj])
            if m:
                const += m * sym[jj].constant
                for k in range(nfree):
                    grad[k] += m * sym[jj].gradient[k]
        out.append(AffineForm(tuple(grad), const))
    return out


# ---------------------------------------------------------------------------
# regular envelopes


@dataclass(frozen=True)
class EnvelopeRecord:
    envelope: PoleSpace
    standardizer: WeylElement     # w_H with w_H(H0) = H, inside W(Delta(L0))
    standard_form: PoleSpace
    good: bool


def _is_neighbor(datum: RootDatum, a: Coroot, b: Coroot) -> bool:
    diff = tuple(x - y for x, y in zip(a, b))
    return all(x == 0 for x in diff) or datum.is_coroot(diff)


def reg_components(pole_set: Iterable[Coroot], datum: RootDatum) -> list[tuple[Coroot, ...]]:
    """Partition of the pole set under the transitive neighbor relation."""
    items = sorted(pole_set)
    parent = list(range(len(items)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(items)):
        for k in range(i + 1, len(items)):
            if _is_neighbor(datum, items[i], items[k]):
                parent[find(i)] = find(k)
    comps: dict[int, list[Coroot]] = {}
    for i, it in enumerate(items):
        comps.setdefault(find(i), []).append(it)
    return sorted(tuple(sorted(v)) for v in comps.values())


def _subset_space_regular(datum: RootDatum, coroots: Sequence[Coroot]) -> bool:
    try:
        h = pole_space(datum, coroots)
    except ValueError:
        return False
    return not h.singular_set


def maximal_regular_subsets(anchor: Coroot, component: Sequence[Coroot],
                            datum: RootDatum) -> list[tuple[Coroot, ...]]:
    """Maximal subsets of the component containing the anchor whose space is regular."""
    comp = sorted(component)
    rest = [c for c in comp if c != anchor]
    maximal: set[tuple[Coroot, ...]] = set()

    def grow(current: tuple[Coroot, ...], candidates: list[Coroot]):
        extensions = [c for c in candidates
                      if _subset_space_regular(datum, current + (c,))]
        if not extensions:
            # maximality against the whole component, not just the tail
            if all(c in current or not _subset_space_regular(datum, current + (c,))
                   for c in rest):
                maximal.add(tuple(sorted(current)))
            return
        for idx, c in enumerate(extensions):
            grow(current + (c,), extensions[idx + 1:])

    grow((anchor,), rest)
    return sorted(maximal)


def all_maximal_regular_subsets(component: Sequence[Coroot],
                                datum: RootDatum) -> list[tuple[Coroot, ...]]:
    out: set[tuple[Coroot, ...]] = set()
    for anchor in component:
        out.update(maximal_regular_subsets(anchor, component, datum))
    # keep only subsets maximal across the whole union
    sets = sorted(out)
    return [s for s in sets
            if not any(set(s) < set(t) for t in sets)]


def min_coset_rep(datum: RootDatum, w: WeylElement) -> WeylElement:
    """Minimal-length representative of W' w."""
    return datum.min_coset_rep_left(w, datum.levi_prime)


def is_good_pair(datum: RootDatum, pole_set: Iterable[Coroot], w: WeylElement) -> bool:
    """w(P) inside R+ union R' (tested through the minimal coset representative)."""
    d = min_coset_rep(datum, w)
    ok_set = set(datum.positive_coroots) | {tuple(-x for x in c)
                                            for c in datum.levi_prime_positive}
    ok_set |= set(datum.levi_prime_positive)
    return all(d.apply_coroot(c) in ok_set for c in pole_set)


def _component_subspaces(datum: RootDatum, comp: Sequence[Coroot]) -> list[tuple[Coroot, ...]]:
    """Distinct regular pole subsets of one neighbor component (canonical form)."""
    out: set[tuple[Coroot, ...]] = set()
    for k in range(1, len(comp) + 1):
        for sub in itertools.combinations(comp, k):
            try:
                h = pole_space(datum, sub)
            except ValueError:
                continue
            if h.singular_set:
                continue
            canon = tuple(sorted(h.pole_set))
            if any(c not in comp for c in canon):
                raise AssertionError("pole set escaped its neighbor component")
            out.add(canon)
    return sorted(out)


def regular_envelopes(l0: PoleSpace, datum: RootDatum,
                      w: WeylElement | None = None) -> list[EnvelopeRecord]:
    """All regular envelopes H of a standard space, standardized inside W(Delta(L0)).

    Envelopes are cut out by subsets of the pole set; the neighbor-component
    partition makes the subset enumeration a product over components.  The
    good flag tests the pair (H, w); with w=None every flag is True.
    """
    pset = sorted(l0.pole_set)
    if any(not datum.is_positive_coroot(c) for c in pset):
        raise ValueError("expected a standard space with positive pole set")
    j, _ = parabolic_datum(datum, l0)
    comps = reg_components(pset, datum)
    families = [[()] + _component_subspaces(datum, comp) for comp in comps]
    spaces: dict = {}
    for choice in itertools.product(*families) if comps else [()]:
        coroots = tuple(sorted(set(itertools.chain.from_iterable(choice))))
        if not coroots:
            continue
        h = pole_space(datum, coroots)
        if h.singular_set:
            continue
        spaces.setdefault(h.key(), h)
    if not comps:
        spaces[l0.key()] = l0  # P empty: L0 = V envelopes itself
    out = []
    for h in spaces.values():
        lam = generic_point(datum, h, prime_offset=3)
        _, w1 = datum.dominant_map(lam, j)
        h0 = apply_weyl(datum, w1, h)
        wh = datum.inverse_element(w1)
        good = True if w is None else is_good_pair(datum, h.pole_set, w)
        out.append(EnvelopeRecord(h, wh, h0, good))
    out.sort(key=lambda r: (r.envelope.codim, tuple(sorted(r.envelope.pole_set))))
    return out


def brute_regular_envelopes(l0: PoleSpace, datum: RootDatum) -> set:
    """Oracle: all regular spaces H >= L0 by subset enumeration of the pole set."""
    pset = sorted(l0.pole_set)
    found = set()
    for k in range(1, len(pset) + 1):
        for sub in itertools.combinations(pset, k):
            try:
                h = pole_space(datum, sub)
            except ValueError:
                continue
            if not h.singular_set:
                found.add(h.key())
    return found


# ---------------------------------------------------------------------------
# jump extraction at regular standard spaces


def _grouped_constants(datum: RootDatum, h0: PoleSpace, coroots: Iterable[Coroot]):
    """Group coroot restrictions by gradient; map gradient -> {const: mult}."""
    j, gamma = parabolic_datum(datum, h0)
    free = [i for i in range(datum.rank) if i not in j]
    gm = dict(zip(j, gamma))
    groups: dict[tuple, dict[Q, list[Coroot]]] = {}
    for c in coroots:
        grad = tuple(Q(c[i]) for i in free)
        if all(g == 0 for g in grad):
            continue
        const = sum((Q(c[i]) * gm[i] for i in j), Q(0))
        groups.setdefault(grad, {}).setdefault(const, []).append(c)
    return groups


def _runs(consts: dict[Q, list[Coroot]]):
    """Decompose an integer-spaced multiset into maximal runs.

    Yields (bottom, top, multiplicity, witness coroots at bottom and top).
    """
    vals = sorted(consts)
    base = vals[0]
    if any((v - base).denominator != 1 for v in vals):
        raise AssertionError("constants within a gradient class must be integer-spaced")
    mult = {v: len(consts[v]) for v in vals}
    active: list[list] = []  # [bottom, mult] for runs currently open
    prev = None
    out = []
    for v in vals:
        m = mult[v]
        if prev is not None and v == prev + 1:
            mp = mult[prev]
            if m > mp:
                active.append([v, m - mp])
            elif m < mp:
                # close (mp - m) runs, deepest-bottom first kept open
                need = mp - m
                while need:
                    bottom, k = active[-1]
                    take = min(k, need)
                    out.append((bottom, prev, take))
                    need -= take
                    if take == k:
                        active.pop()
                    else:
                        active[-1][1] -= take
        else:
            for bottom, k in active:
                out.append((bottom, prev, k))
            active = [[v, m]]
        prev = v
    for bottom, k in active:
        out.append((bottom, prev, k))
    return sorted(out), consts


def den_sigma(h0: PoleSpace, datum: RootDatum) -> dict[tuple[Coroot, Q], int]:
    """Sigma-side denominators at a standard regular space: run tops, +1 shift.

    Returned as {(witness coroot, shift): multiplicity}; the form is
    <coroot, lambda> + shift.
    """
    if h0.singular_set:
        raise ValueError("sigma extraction requires a regular space")
    groups = _grouped_constants(datum, h0, datum.positive_coroots)
    out: dict[tuple[Coroot, Q], int] = {}
    for grad, consts in groups.items():
        for bottom, top, k in _runs(consts)[0]:
            witness = consts[top][0]
            key = (witness, Q(1))
            out[key] = out.get(key, 0) + k
    return out


def den_sigma_prime(h0: PoleSpace, d_h: WeylElement, datum: RootDatum) -> dict:
    """Sigma'-side denominators: run bottoms over R(d_H) union d_H^{-1}(R'+)."""
    if h0.singular_set:
        raise ValueError("sigma' extraction requires a regular space")
    inv = datum.inversion_set(d_h)
    dinv = datum.inverse_element(d_h)
    pulled = {dinv.apply_coroot(c) for c in datum.levi_prime_positive}
    for c in pulled:
        if not datum.is_positive_coroot(c):
            raise AssertionError("d_H is not minimal in W'd_H")
    subset = sorted(set(inv) | pulled)
    groups = _grouped_constants(datum, h0, subset)
    out: dict[tuple[Coroot, Q], int] = {}
    for grad, consts in groups.items():
        for bottom, top, k in _runs(consts)[0]:
            witness = consts[bottom][0]
            key = (witness, Q(0))
            out[key] = out.get(key, 0) + k
    return out


def den_tau(h0: PoleSpace, datum: RootDatum) -> dict:
    """Sigma_tau-side denominators: run bottoms over all of R+, no shift."""
    if h0.singular_set:
        raise ValueError("tau extraction requires a regular space")
    groups = _grouped_constants(datum, h0, datum.positive_coroots)
    out: dict[tuple[Coroot, Q], int] = {}
    for grad, consts in groups.items():
        for bottom, top, k in _runs(consts)[0]:
            witness = consts[bottom][0]
            key = (witness, Q(0))
            out[key] = out.get(key, 0) + k
    return out


# ---------------------------------------------------------------------------
# enveloping denominators


def _restrict_entries(datum: RootDatum, entries: dict, w_h: WeylElement,
                      l0: PoleSpace, tag: str) -> DenominatorMultiset:
    """Transport (coroot, shift) entries along w_H and restrict to L0 symbolically."""
    sym = std_wdd(l0, datum)
    out: dict[AffineForm, int] = {}
    for (coroot, shift), mult in entries.items():
        moved = w_h.apply_coroot(coroot)
        form = pair_symbolic(datum, moved, sym)
        form = AffineForm(form.gradient, form.constant + shift)
        if form.is_constant():
            continue
        form = form.canonical()
        out[form] = out.get(form, 0) + mult
    return DenominatorMultiset(out, tag)


def enveloping_den(l0: PoleSpace, w: WeylElement, which: str,
                   datum: RootDatum,
                   envelopes: list[EnvelopeRecord] | None = None
                   ) -> DenominatorMultiset | None:
    """Intersection over w-good regular envelopes of the restricted extractions.

    ``which`` is one of 'sigma', 'sigma_prime', 'tau'.  Returns None when no
    good envelope exists (the unconstrained value; callers must report it).
    """
    if envelopes is None:
        envelopes = regular_envelopes(l0, datum, w)
    good = [e for e in envelopes if is_good_pair(datum, e.envelope.pole_set, w)]
    result: DenominatorMultiset | None = None
    for rec in good:
        if not space_contains(datum, rec.envelope, l0):
            raise AssertionError("envelope does not contain its base space")
        if which == "sigma":
            raw = den_sigma(rec.standard_form, datum)
        elif which == "sigma_prime":
            composed = datum.product(w, rec.standardizer)
            raw = den_sigma_prime(rec.standard_form, min_coset_rep(datum, composed), datum)
        elif which == "tau":
            raw = den_tau(rec.standard_form, datum)
        else:
            raise ValueError("which must be sigma, sigma_prime, or tau")
        dm = _restrict_entries(datum, raw, rec.standardizer, l0, which)
        result = dm if result is None else result.intersect(dm)
    return result


# ---------------------------------------------------------------------------
# tau identity, main containments, admissibility


def tau_involution(l0: PoleSpace, datum: RootDatum) -> WeylElement:
    """The longest element of the constant-root Weyl group of a standard space."""
    j, _ = parabolic_datum(datum, l0)
    return datum.longest_element(j)


def one_minus_tau(datum: RootDatum, l0: PoleSpace, form: AffineForm) -> AffineForm:
    """(1 - tau_0)(X) with tau_0 = -w_L acting on the standard space."""
    w_l = tau_involution(l0, datum)
    sym = std_wdd(l0, datum)
    tau_sym = [AffineForm(tuple(-g for g in f.gradient), -f.constant)
               for f in apply_matrix_symbolic(w_l, sym)]
    j, _ = parabolic_datum(datum, l0)
    free = [i for i in range(datum.rank) if i not in j]
    nfree = len(free)
    grad = [Q(0)] * nfree
    const = form.constant
    for k, i in enumerate(free):
        g = form.gradient[k]
        if g:
            const += g * tau_sym[i].constant
            for kk in range(nfree):
                grad[kk] += g * tau_sym[i].gradient[kk]
    composed = AffineForm(tuple(grad), const)
    return AffineForm(tuple(-g for g in composed.gradient),
                      1 - composed.constant).canonical()


def check_tau_identity(l0: PoleSpace, x: WeylElement, datum: RootDatum) -> bool:
    """Den~(L0,x,Sigma_tau)+ == (1 - tau_0)(Den~(L0,x,Sigma)+) as multisets."""
    envs = regular_envelopes(l0, datum, x)
    lhs = enveloping_den(l0, x, "tau", datum, envs)
    sig = enveloping_den(l0, x, "sigma", datum, envs)
    if lhs is None or sig is None:
        return False
    rhs = sig.map_forms(lambda f: one_minus_tau(datum, l0, f))
    return lhs == rhs


def center_coords(datum: RootDatum, l0: PoleSpace) -> tuple[Q, ...]:
    free = free_positions(datum, l0)
    return tuple(l0.center[i] for i in free)


def check_main_containment(l0: PoleSpace, w: WeylElement, datum: RootDatum) -> bool:
    """Sigma side lands in D_{L0}, Sigma' side in (1-tau)(Sigma side) and D'_{L0}."""
    envs = regular_envelopes(l0, datum, w)
    sig = enveloping_den(l0, w, "sigma", datum, envs)
    sigp = enveloping_den(l0, w, "sigma_prime", datum, envs)
    if sig is None or sigp is None:
        return False
    c = center_coords(datum, l0)
    if any(f.value_at(c) < 1 for f, _ in sig):
        return False
    bound = sig.map_forms(lambda f: one_minus_tau(datum, l0, f))
    if not sigp.submultiset_of(bound):
        return False
    return all(f.value_at(c) <= 0 for f, _ in sigp)


def sigma_numerator_credit(datum: RootDatum, l0: PoleSpace,
                           w: WeylElement) -> DenominatorMultiset:
    """Common numerator classes (1 + inversion coroots of the minimal coset
    representative) of the twisted factor, restricted to the space.

    These cancel against the Sigma-side denominators in the product, so
    admissibility checks may discount them (the base-case argument for
    Adm(V) made exact).
    """
    d = min_coset_rep(datum, w)
    sym = std_wdd(l0, datum)
    out: dict[AffineForm, int] = {}
    for g in sorted(datum.inversion_set(d)):
        lin = pair_symbolic(datum, g, sym)
        form = AffineForm(lin.gradient, lin.constant + 1)
        if form.is_constant():
            continue
        form = form.canonical()
        out[form] = out.get(form, 0) + 1
    return DenominatorMultiset(out, "credit")


def effective_sigma(l0: PoleSpace, w: WeylElement, datum: RootDatum,
                    envelopes: list[EnvelopeRecord] | None = None
                    ) -> DenominatorMultiset | None:
    """Sigma-side proxy after removing the twisted factor's common numerators.

    Classes also present on the Sigma'-side are kept (the numerator may be
    consumed inside the twisted factor there).
    """
    envs = envelopes if envelopes is not None else regular_envelopes(l0, datum, w)
    sig = enveloping_den(l0, w, "sigma", datum, envs)
    if sig is None:
        return None
    sigp = enveloping_den(l0, w, "sigma_prime", datum, envs)
    credit = sigma_numerator_credit(datum, l0, w)
    out = dict(sig.entries)
    for form, mult in credit.entries.items():
        if sigp is not None and form in sigp.entries:
            continue
        if form in out:
            out[form] = out[form] - mult
    return DenominatorMultiset(out, "sigma")


def adm_membership(l: PoleSpace, p: Sequence, datum: RootDatum,
                   max_group_order: int = 200000) -> bool:
    """Point membership in Adm(L) via enveloping-denominator half spaces.

    Quantifies over representatives of the standard pairs (L0, v) with
    v(L0) = L; by the transport rules it is enough to vary v over the full
    Weyl group filtered to {v : v(L0) = L}, which is feasible at desk scale.
    """
    from .polespaces import classify, std_data

    _, order = classify(l, datum)
    if order != 0:
        raise ValueError("Adm(L) is defined for order-0 pole spaces")
    w0, l0, _ = std_data(l, datum)
    group = datum.weyl_group()
    if len(group) > max_group_order:
        raise RuntimeError("full Weyl group too large for Adm enumeration")
    envs_cache = regular_envelopes(l0, datum, None)
    p = tuple(Q(x) for x in p)
    seen_d = set()
    for v in group:
        if apply_weyl(datum, v, l0) != l:
            continue
        d = min_coset_rep(datum, v)
        q = datum.inverse_element(v).apply_point(p)
        key = (d, q)
        if key in seen_d:
            continue
        seen_d.add(key)
        sig = effective_sigma(l0, v, datum, envs_cache)
        sigp = enveloping_den(l0, v, "sigma_prime", datum, envs_cache)
        if sig is None or sigp is None:
            return False
        free = free_positions(datum, l0)
        qc = tuple(q[i] for i in free)
        jset, gamma = parabolic_datum(datum, l0)
        if any(q[i] != g for i, g in zip(jset, gamma)):
            raise AssertionError("transported point left the standard space")
        if any(f.value_at(qc) < 1 for f, _ in sig):
            return False
        if any(f.value_at(qc) > 0 for f, _ in sigp):
            return False
    return True


def transport_form(datum: RootDatum, l1: PoleSpace, l0: PoleSpace,
                   w: WeylElement, form: AffineForm) -> AffineForm:
    """|w|-transport of positive-gradient forms from Aff(L1) to Aff(L0)."""
    free1 = free_positions(datum, l1)
    # the gradient extends by zero to a covector on V: directions of L1 vanish
    # at the parabolic positions, so this extension restricts correctly
    cov = [Q(0)] * datum.rank
    for k, i in enumerate(free1):
        cov[i] = form.gradient[k]
    moved = w.apply_covector(cov)
    free0 = free_positions(datum, l0)
    grad = tuple(moved[i] for i in free0)
    if any(g < 0 for g in grad) and any(g > 0 for g in grad):
        raise AssertionError("transport produced a mixed-sign gradient")
    if any(g < 0 for g in grad):
        grad = tuple(-g for g in grad)
    return AffineForm(grad, form.constant)
