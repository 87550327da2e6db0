"""Based root systems with exact rational arithmetic, and their Weyl groups.

Coordinate conventions (fixed throughout the package):

* points of V are tuples of Fractions in the fundamental-weight basis;
* coroots (and all covectors) are tuples of ints/Fractions in the
  simple-coroot basis;
* the pairing of a covector with a point is then the plain dot product,
  since ``<coroot_i, weight_j> = delta_ij``.

Weyl group elements act on points through integer matrices in the weight
basis; the covector action is by the inverse transpose.  Both matrices are
stored, since sweeps over inversion sets are matrix-column sign tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .linalg import Vec, inverse

Coroot = tuple[int, ...]


def cartan_matrix(type_label: str, rank: int) -> list[list[int]]:
    """Cartan matrix a[i][j] = <coroot_i, root_j> in Bourbaki ordering."""
    t = type_label.upper()
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def edge(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if t == "A":
        if rank < 1:
            raise ValueError("rank out of range for type A")
        for i in range(rank - 1):
            edge(i, i + 1)
    elif t == "B":
        if rank < 2:
            raise ValueError("rank out of range for type B")
        for i in range(rank - 2):
            edge(i, i + 1)
        edge(rank - 2, rank - 1, -1, -2)  # alpha_n short
    elif t == "C":
        if rank < 2:
            raise ValueError("rank out of range for type C")
        for i in range(rank - 2):
            edge(i, i + 1)
        edge(rank - 2, rank - 1, -2, -1)  # alpha_n long
    elif t == "D":
        if rank < 3:
            raise ValueError("rank out of range for type D")
        for i in range(rank - 3):
            edge(i, i + 1)
        edge(rank - 3, rank - 2)
        edge(rank - 3, rank - 1)
    elif t == "E":
        if rank not in (6, 7, 8):
            raise ValueError("rank out of range for type E")
        chain = [0, 2, 3, 4, 5, 6, 7][: rank - 1]
        for i, j in zip(chain, chain[1:]):
            edge(i, j)
        edge(1, 3)  # node 2 hangs off node 4
    elif t == "F":
        if rank != 4:
            raise ValueError("rank out of range for type F")
        edge(0, 1)
        edge(1, 2, -1, -2)  # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        edge(2, 3)
    elif t == "G":
        if rank != 2:
            raise ValueError("rank out of range for type G")
        edge(0, 1, -3, -1)  # alpha_1 short, alpha_2 long
    else:
        raise ValueError(f"unknown type label {type_label!r}")
    return a


def _neg_coroot(c: Coroot) -> Coroot:
    return tuple(-x for x in c)


def coroot_is_positive(c: Sequence[int]) -> bool:
    return any(x > 0 for x in c)


@dataclass(frozen=True)
class WeylElement:
    """Group element stored as a reduced word plus its two action matrices.

    ``mat`` acts on points (weight coordinates), ``cmat`` on covectors
    (coroot coordinates); the matrix is authoritative for equality.
    """

    word: tuple[int, ...]
    mat: np.ndarray = field(compare=False)
    cmat: np.ndarray = field(compare=False)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and np.array_equal(self.mat, other.mat)

    def __hash__(self):
        return hash(self.mat.tobytes())

    def __repr__(self):
        return f"WeylElement({'.'.join(str(i + 1) for i in self.word) or 'e'})"

    @property
    def length(self) -> int:
        return len(self.word)

    def apply_point(self, p: Sequence) -> Vec:
        return tuple(sum(Q(int(self.mat[i, j])) * Q(p[j]) for j in range(len(p)))
                     for i in range(len(p)))

    def apply_coroot(self, c: Coroot) -> Coroot:
        v = self.cmat @ np.asarray(c, dtype=np.int64)
        return tuple(int(x) for x in v)

    def apply_covector(self, c: Sequence) -> Vec:
        n = len(c)
        return tuple(sum(Q(int(self.cmat[i, j])) * Q(c[j]) for j in range(n))
                     for i in range(n))


class RootDatum:
    """Exact based root system with a chosen maximal proper standard Levi."""

    def __init__(self, type_label: str, rank: int, levi_prime_omitted_index: int | None = None):
        type_label = type_label.upper()
        if levi_prime_omitted_index is None:
            levi_prime_omitted_index = default_omitted_index(type_label, rank)
        if not (1 <= levi_prime_omitted_index <= rank):
            raise ValueError("omitted index out of range")
        self.type_label = type_label
        self.rank = rank
        self.cartan_matrix = cartan_matrix(type_label, rank)
        self.omitted_index = levi_prime_omitted_index - 1
        self.levi_prime = tuple(i for i in range(rank) if i != self.omitted_index)

        n = rank
        a = np.array(self.cartan_matrix, dtype=np.int64)
        # point-side reflection matrices: s_j subtracts x_j * (column j of A)
        self._refl = []
        self._crefl = []
        for j in range(n):
            m = np.eye(n, dtype=np.int64)
            m[:, j] -= a[:, j]
            self._refl.append(m)
            self._crefl.append(m.T.copy())
        self.identity = WeylElement((), np.eye(n, dtype=np.int64), np.eye(n, dtype=np.int64))

        self.simple_coroots: list[Coroot] = [
            tuple(1 if j == i else 0 for j in range(n)) for i in range(n)
        ]
        self.fundamental_weights: list[Vec] = [
            tuple(Q(1) if j == i else Q(0) for j in range(n)) for i in range(n)
        ]
        # simple roots in weight coordinates are the columns of the Cartan matrix
        self.simple_roots: list[Vec] = [
            tuple(Q(self.cartan_matrix[i][j]) for i in range(n)) for j in range(n)
        ]
        self.positive_coroots, self.positive_roots = self._close_positive()
        self._positive_set = frozenset(self.positive_coroots)
        self._coroot_index = {c: k for k, c in enumerate(self.positive_coroots)}
        self._root_of_coroot = dict(zip(self.positive_coroots, self.positive_roots))
        self.inner_product = self._invariant_form()
        self.levi_prime_positive = frozenset(
            c for c in self.positive_coroots if self.coroot_support(c) <= set(self.levi_prime)
        )
        if self.levi_prime:
            self.fundamental_weight_prime: Vec = self.fundamental_weights[self.omitted_index]
        else:
            self.fundamental_weight_prime = self.fundamental_weights[0]

    # -- construction helpers -------------------------------------------------

    def _close_positive(self):
        """Reflection closure of the simple (co)roots; deterministic order."""
        pairs = {}
        frontier = list(zip(self.simple_coroots, self.simple_roots))
        for c, r in frontier:
            pairs[c] = r
        while frontier:
            nxt = []
            for c, r in frontier:
                for j in range(self.rank):
                    c2 = tuple(int(x) for x in self._crefl[j] @ np.asarray(c, dtype=np.int64))
                    if coroot_is_positive(c2) and c2 not in pairs:
                        r2 = tuple(
                            sum(Q(int(self._refl[j][i, k])) * r[k] for k in range(self.rank))
                            for i in range(self.rank)
                        )
                        pairs[c2] = r2
                        nxt.append((c2, r2))
            frontier = nxt
        coroots = sorted(pairs)
        return coroots, [pairs[c] for c in coroots]

    def _invariant_form(self):
        """W-invariant Gram matrix on V (weight basis), short roots of length^2 = 2."""
        n = self.rank
        g = [[Q(0)] * n for _ in range(n)]
        for c in self.positive_coroots:
            for i in range(n):
                if c[i]:
                    for j in range(n):
                        if c[j]:
                            g[i][j] += Q(c[i] * c[j])
        lengths = [sum(g[i][j] * r[i] * r[j] for i in range(n) for j in range(n))
                   for r in self.simple_roots]
        scale = Q(2) / min(lengths)
        return tuple(tuple(scale * v for v in row) for row in g)

    # -- basic queries ---------------------------------------------------------

    def coroot_support(self, c: Coroot) -> set[int]:
        return {i for i, x in enumerate(c) if x}

    def is_positive_coroot(self, c: Coroot) -> bool:
        return c in self._positive_set

    def is_coroot(self, c: Coroot) -> bool:
        return c in self._positive_set or _neg_coroot(c) in self._positive_set

    def root_of(self, coroot: Coroot) -> Vec:
        """Root vector (weight coordinates) paired with a signed coroot."""
        if coroot in self._root_of_coroot:
            return self._root_of_coroot[coroot]
        neg = _neg_coroot(coroot)
        return tuple(-x for x in self._root_of_coroot[neg])

    def pair(self, coroot: Sequence, point: Sequence) -> Q:
        return sum((Q(a) * Q(b) for a, b in zip(coroot, point, strict=True)), Q(0))

    def ip(self, x: Sequence, y: Sequence) -> Q:
        return sum(
            (self.inner_product[i][j] * Q(x[i]) * Q(y[j])
             for i in range(self.rank) for j in range(self.rank) if x[i] and y[j]),
            Q(0),
        )

    def coroot_vector(self, coroot: Sequence) -> Vec:
        """The vector v with (v, .) equal to the coroot functional."""
        rows = [[self.inner_product[i][j] for j in range(self.rank)] for i in range(self.rank)]
        from .linalg import solve_linear_system

        return solve_linear_system(rows, [Q(x) for x in coroot])

    def levi_positive_coroots(self, subset: Iterable[int]) -> list[Coroot]:
        s = set(subset)
        return [c for c in self.positive_coroots if self.coroot_support(c) <= s]

    # -- Weyl group ------------------------------------------------------------

    def simple_reflection(self, i: int) -> WeylElement:
        return WeylElement((i,), self._refl[i].copy(), self._crefl[i].copy())

    def product(self, w1: WeylElement, w2: WeylElement) -> WeylElement:
        mat = w1.mat @ w2.mat
        cmat = w1.cmat @ w2.cmat
        return WeylElement(self._reduced_word_from_cmat(cmat), mat, cmat)

    def inverse_element(self, w: WeylElement) -> WeylElement:
        mat = np.array(inverse(tuple(tuple(int(v) for v in row) for row in w.mat)),
                       dtype=object)
        mat = mat.astype(np.int64)
        cmat = w.mat.T.copy()
        return WeylElement(tuple(reversed(w.word)), mat, cmat)

    def from_word(self, word: Sequence[int]) -> WeylElement:
        w = self.identity
        for i in word:
            w = self.product(w, self.simple_reflection(i))
        return w

    def _reduced_word_from_cmat(self, cmat: np.ndarray) -> tuple[int, ...]:
        """Reduced word of the element whose covector matrix is ``cmat``."""
        word: list[int] = []
        m = cmat.copy()
        n = self.rank
        while True:
            for i in range(n):
                col = m[:, i]
                if col.max() <= 0:
                    break
            else:
                assert np.array_equal(m, np.eye(n, dtype=np.int64)), "not a Weyl matrix"
                return tuple(reversed(word))
            word.append(i)
            m = m @ self._crefl[i]

    def element_from_matrices(self, mat: np.ndarray, cmat: np.ndarray) -> WeylElement:
        return WeylElement(self._reduced_word_from_cmat(cmat), mat, cmat)

    def inversion_set(self, w: WeylElement) -> frozenset[Coroot]:
        """R(w): positive coroots sent to negative coroots by w."""
        arr = np.array(self.positive_coroots, dtype=np.int64).T
        img = w.cmat @ arr
        neg = (img <= 0).all(axis=0)
        return frozenset(c for c, isneg in zip(self.positive_coroots, neg) if isneg)

    def dominant_map(self, v: Sequence, subset: Iterable[int] | None = None):
        """Minimal w with w(v) dominant (on ``subset`` indices); returns (dominant, w)."""
        idx = tuple(range(self.rank)) if subset is None else tuple(subset)
        cur = tuple(Q(x) for x in v)
        w = self.identity
        while True:
            for i in idx:
                if cur[i] < 0:
                    break
            else:
                return cur, w
            s = self.simple_reflection(i)
            cur = s.apply_point(cur)
            w = self.product(s, w)

    def longest_element(self, subset: Iterable[int] | None = None) -> WeylElement:
        idx = tuple(range(self.rank)) if subset is None else tuple(subset)
        v = [Q(0)] * self.rank
        for i in idx:
            v[i] = Q(-1)
        _, w = self.dominant_map(v, idx)
        return w

    def weyl_group(self, subset: Iterable[int] | None = None) -> list[WeylElement]:
        """Full enumeration of the (parabolic) Weyl group, BFS order."""
        idx = tuple(range(self.rank)) if subset is None else tuple(sorted(subset))
        return self._weyl_group_cached(idx)

    @lru_cache(maxsize=None)
    def _weyl_group_cached(self, idx: tuple[int, ...]) -> list[WeylElement]:
        # BFS words are geodesic, so they are reduced as built; bypassing
        # product() avoids re-deriving words (matters for W(E6) sweeps)
        out = [self.identity]
        seen = {self.identity.mat.tobytes()}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for i in idx:
                    mat = self._refl[i] @ w.mat
                    key = mat.tobytes()
                    if key not in seen:
                        seen.add(key)
                        w2 = WeylElement((i,) + w.word, mat, self._crefl[i] @ w.cmat)
                        nxt.append(w2)
                        out.append(w2)
            frontier = nxt
        return out

    def minimal_coset_reps(self, parabolic_subset: Iterable[int], side: str = "left",
                           ambient: Iterable[int] | None = None) -> list[WeylElement]:
        """Minimal-length representatives of W/W_J (side='left') or W_J\\W.

        ``ambient`` restricts the big group to a parabolic (used for chains
        like W(E7)/W(E6) inside an E8 datum).
        """
        j = sorted(set(parabolic_subset))
        amb = tuple(range(self.rank)) if ambient is None else tuple(sorted(ambient))
        if not set(j) <= set(amb):
            raise ValueError("parabolic subset must lie in the ambient subset")
        base = [Q(0)] * self.rank
        for i in amb:
            if i not in j:
                base[i] = Q(1)
        base_t = tuple(base)
        gens = [(i, self.simple_reflection(i)) for i in amb]
        seen = {base_t}
        reps = [self.identity]
        frontier = [(base_t, self.identity)]
        while frontier:
            nxt = []
            for pt, w in frontier:
                for _, g in gens:
                    pt2 = g.apply_point(pt)
                    if pt2 not in seen:
                        seen.add(pt2)
                        w2 = self.product(g, w)
                        reps.append(w2)
                        nxt.append((pt2, w2))
            frontier = nxt
        if side == "left":
            return reps
        if side == "right":
            return [self.inverse_element(w) for w in reps]
        raise ValueError("side must be 'left' or 'right'")

    def min_coset_rep_left(self, w: WeylElement, subset: Iterable[int]) -> WeylElement:
        """Minimal-length representative of the coset W_J w."""
        idx = tuple(subset)
        cur = w
        while True:
            for i in idx:
                col = cur.cmat[:, i]
                # length of s_i * cur drops iff cur^{-1}(coroot_i) < 0,
                # i.e. iff row i of cur.cmat^{-1}... use image of alpha_i under cur^{-1}:
                # equivalently coroot_i in R(cur^{-1})  <=>  cur maps some negative...
                # test: s_i cur shorter  <=>  cur^{-1}(alpha_i) negative  <=>
                # (cmat of cur^{-1}) @ e_i <= 0; cmat(cur^{-1}) = mat(cur).T
                cinv = cur.mat.T[:, i]
                if cinv.max() <= 0:
                    break
            else:
                return cur
            cur = self.product(self.simple_reflection(i), cur)

    def irreducible_components(self, subset: Iterable[int]) -> list[tuple[int, ...]]:
        """Connected components of a simple-root subset in the Dynkin graph."""
        nodes = sorted(set(subset))
        adj = {i: [j for j in nodes if j != i and self.cartan_matrix[i][j] != 0] for i in nodes}
        out, seen = [], set()
        for i in nodes:
            if i in seen:
                continue
            comp, stack = [], [i]
            seen.add(i)
            while stack:
                k = stack.pop()
                comp.append(k)
                for j in adj[k]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
            out.append(tuple(sorted(comp)))
        return sorted(out)

    def subsystem_type(self, component: Sequence[int]) -> tuple[str, int]:
        """Isomorphism type (label, rank) of an irreducible simple-root subset."""
        nodes = list(component)
        r = len(nodes)
        if r == 1:
            return "A", 1
        a = {(i, j): self.cartan_matrix[i][j] for i in nodes for j in nodes if i != j}
        degs = {i: sum(1 for j in nodes if j != i and a[(i, j)] != 0) for i in nodes}
        maxoff = max(abs(v) for v in a.values())
        if maxoff == 3:
            return "G", 2
        if maxoff == 2:
            # double edge: i--j with a[i][j] == -2 means root_i is the short one
            (i, j) = next(k for k, v in a.items() if v == -2)
            if r == 2:
                return "B", 2
            chain_end_short = degs[i] == 1
            if self._double_edge_interior(nodes, a):
                return "F", 4
            return ("B", r) if chain_end_short else ("C", r)
        branch = [i for i in nodes if degs[i] == 3]
        if not branch:
            return "A", r
        b = branch[0]
        arms = sorted(self._arm_lengths(nodes, a, b))
        if arms[:2] == [1, 1]:
            return "D", r
        return "E", r

    def _double_edge_interior(self, nodes, a) -> bool:
        (i, j) = next(k for k, v in a.items() if v == -2)
        deg = lambda k: sum(1 for m in nodes if m != k and a[(k, m)] != 0)
        return deg(i) > 1 and deg(j) > 1

    def _arm_lengths(self, nodes, a, branch):
        arms = []
        for start in (j for j in nodes if j != branch and a[(branch, j)] != 0):
            ln, prev, cur = 1, branch, start
            while True:
                nxts = [k for k in nodes if k not in (prev, cur) and a[(cur, k)] != 0]
                if not nxts:
                    break
                prev, cur = cur, nxts[0]
                ln += 1
            arms.append(ln)
        return arms

    def root_length_sq(self, coroot: Coroot) -> Q:
        r = self.root_of(coroot if coroot in self._positive_set else coroot)
        return self.ip(r, r)


def default_omitted_index(type_label: str, rank: int) -> int:
    """Omitted node for the maximal Levi R' used by the cascade (1-based)."""
    t = type_label.upper()
    if t in ("A", "B", "C", "D", "G"):
        return 1
    if t == "F":
        return 4
    if t == "E":
        return rank
    raise ValueError(f"unknown type label {type_label!r}")


KNOWN_POSITIVE_COUNTS = {
    ("A", lambda n: n * (n + 1) // 2),
    ("B", lambda n: n * n),
    ("C", lambda n: n * n),
    ("D", lambda n: n * (n - 1)),
}


def build_root_datum(type_label: str, rank: int, levi_prime_omitted_index: int | None = None) -> RootDatum:
    """Construct a RootDatum in the Bourbaki ordering; validates closure counts."""
    datum = RootDatum(type_label, rank, levi_prime_omitted_index)
    t = type_label.upper()
    expected = {
        "A": rank * (rank + 1) // 2,
        "B": rank * rank,
        "C": rank * rank,
        "D": rank * (rank - 1),
        "G": 6,
        "F": 24,
        "E": {6: 36, 7: 63, 8: 120}.get(rank),
    }[t]
    if expected is not None and len(datum.positive_coroots) != expected:
        raise AssertionError("reflection closure produced an unexpected root count")
    return datum


def inversion_set(datum: RootDatum, w: WeylElement) -> frozenset[Coroot]:
    return datum.inversion_set(w)


def minimal_coset_reps(datum: RootDatum, parabolic_subset, side: str = "left",
                       ambient=None) -> list[WeylElement]:
    return datum.minimal_coset_reps(parabolic_subset, side, ambient)


def dominant_map(datum: RootDatum, v) -> tuple[Vec, WeylElement]:
    return datum.dominant_map(v)
