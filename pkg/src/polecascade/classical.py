"""Partition-strip representatives for classical residual spaces.

The classical subsystem X_{n-1} sits on the trailing coordinates of the
standard e-basis realization of X_n (the cascade's Levi always omits the
first node).  Residual spaces are parameterized by bipartitions (kappa; q):
paired parts become type-A strips carrying a free coordinate each, and the
distinct-part tail q is laid out in hooks from the outside in.  These
positions reproduce the layout used by the classical cascade analysis
(pole sets of early generations stay positive), which arbitrary standard
representatives do not.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .polespaces import PoleSpace, make_space
from .roots import RootDatum


def _e_coroots(type_label: str, rank: int) -> list[list[Q]]:
    """Simple coroots of the standard e-basis realization, as e-covectors."""
    rows = []
    for i in range(rank - 1):
        row = [Q(0)] * rank
        row[i], row[i + 1] = Q(1), Q(-1)
        rows.append(row)
    last = [Q(0)] * rank
    if type_label == "A":
        # handled separately (lives in rank+1 coordinates)
        raise AssertionError
    if type_label == "B":
        last[rank - 1] = Q(2)
    elif type_label == "C":
        last[rank - 1] = Q(1)
    elif type_label == "D":
        last[rank - 2] = last[rank - 1] = Q(1)
    rows.append(last)
    return rows


def _to_weight_coords(datum: RootDatum, evec: list[Q]) -> tuple[Q, ...]:
    """Pair an e-coordinate vector against the simple coroots."""
    t = datum.type_label
    n = datum.rank
    if t == "A":
        return tuple(evec[i] - evec[i + 1] for i in range(n))
    rows = _e_coroots(t, n)
    return tuple(sum(r[k] * evec[k] for k in range(n)) for r in rows)


def _a_strip(center: list[Q], dirs: list[list[Q]], pos: int, part: int) -> int:
    for l in range(part):
        center[pos + l] = Q(part - 1, 2) - l
    d = [Q(0)] * len(center)
    for l in range(part):
        d[pos + l] = Q(1)
    dirs.append(d)
    return pos + part


def _partitions(n: int, max_part: int | None = None):
    if n == 0:
        yield ()
        return
    mp = n if max_part is None else min(n, max_part)
    for p in range(mp, 0, -1):
        for tail in _partitions(n - p, p):
            yield (p,) + tail


def _distinct_partitions(n: int, parity: int):
    """Partitions of n into distinct parts of the given parity (descending)."""
    parts = [p for p in range(n, 0, -1) if p % 2 == parity]

    def rec(rest, avail):
        if rest == 0:
            yield ()
            return
        for i, p in enumerate(avail):
            if p > rest:
                continue
            for tail in rec(rest - p, avail[i + 1:]):
                yield (p,) + tail
    yield from rec(n, parts)


def _hook_layout(type_label: str, q: tuple[int, ...], center: list[Q], pos: int) -> int:
    """Lay the distinct-part tail out in hooks; returns the next free position."""
    qs = list(q)
    while len(qs) >= 2:
        a, b = qs[0], qs[1]
        qs = qs[2:]
        length = (a + b) // 2
        for l in range(length):
            center[pos + l] = Q(a - 1, 2) - l
        pos += length
    if qs:
        a = qs[0]
        if type_label in ("B", "D"):
            length = a // 2            # (a-1)/2 down to 1/2
            first = Q(a - 1, 2)
        else:
            length = (a - 1) // 2      # (a-1)/2 down to 1, the 0 is dropped
            first = Q(a - 1, 2)
        for l in range(length):
            center[pos + l] = first - l
        pos += length
    return pos


def classical_subsystem_residual(datum: RootDatum) -> list[PoleSpace]:
    """Standard residual spaces of the trailing classical Levi, strip layout.

    Requires a classical datum with the first node omitted.  The first
    e-coordinate stays free in every space (the omitted fundamental weight
    direction).
    """
    t = datum.type_label
    n = datum.rank
    if t not in "ABCD" or datum.omitted_index != 0:
        raise ValueError("strip layout needs a classical type with node 1 omitted")
    ncoords = n + 1 if t == "A" else n
    sub = ncoords - 1  # e-coordinates 1..ncoords-1 carry the Levi
    out = []

    def emit(center, dirs, x_start=None):
        d0 = [Q(0)] * ncoords
        d0[0] = Q(1)
        wdirs = [_to_weight_coords(datum, d) for d in [d0] + dirs]
        wc = _to_weight_coords(datum, center)
        if x_start is not None and x_start < n:
            # put the hook tail in dominant position inside its own Levi, so
            # that the early-generation pole sets stay positive; the parabolic
            # (0-based nodes x_start..n-1) fixes the strips and the free coordinate
            wc, w = datum.dominant_map(wc, range(x_start, n))
            wdirs = [w.apply_point(dd) for dd in wdirs]
        out.append(make_space(datum, wc, wdirs))

    if t == "A":
        for pi in _partitions(sub):
            center = [Q(0)] * ncoords
            dirs: list[list[Q]] = []
            pos = 1
            for part in pi:
                pos = _a_strip(center, dirs, pos, part)
            emit(center, dirs)
        return out

    parity = 0 if t in ("B",) else 1   # distinct even parts for B, odd for C and D
    total = 2 * sub + 1 if t == "C" else 2 * sub
    for npairs in range(sub + 1):
        for kappa in _partitions(npairs):
            rest = total - 2 * npairs
            for q in _distinct_partitions(rest, parity):
                center = [Q(0)] * ncoords
                dirs: list[list[Q]] = []
                pos = 1
                for part in kappa:
                    pos = _a_strip(center, dirs, pos, part)
                x_start = pos
                pos = _hook_layout(t, q, center, pos)
                if pos != ncoords:
                    raise AssertionError("strip layout did not fill the coordinates")
                emit(center, dirs, x_start if q else None)
                if t == "D" and not q and all(k % 2 == 0 for k in kappa):
                    # very even: the sign-flipped twin is a second W'-orbit
                    center2 = list(center)
                    center2[-1] = -center2[-1]
                    dirs2 = [list(d) for d in dirs]
                    for d in dirs2:
                        d[-1] = -d[-1]
                    emit(center2, dirs2)
    return out
