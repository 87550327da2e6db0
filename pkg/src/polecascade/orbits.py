"""Orbit bookkeeping: partition oracles, dimensions, Bala-Carter-style names.

The partition counts are an independent oracle for the residual-orbit
enumeration (the W-orbits of residual spaces of X_n biject with nilpotent
orbits of the dual Lie algebra).  Names are decorative labels derived from
the (Levi, distinguished center) data; distinguished orbits of one factor
type are ranked by descending orbit dimension, with the literature's index
sequences for the exceptional types (E6 skips a2, E8 interleaves a/b).
"""

from __future__ import annotations

import itertools
from fractions import Fraction as Q
from functools import lru_cache

from .polespaces import distinguished_centers
from .roots import RootDatum


# ---------------------------------------------------------------------------
# partition oracle


def partitions(n: int):
    """All partitions of n as descending tuples."""
    if n == 0:
        yield ()
        return
    def rec(rest, maxpart):
        if rest == 0:
            yield ()
            return
        for p in range(min(rest, maxpart), 0, -1):
            for tail in rec(rest - p, p):
                yield (p,) + tail
    yield from rec(n, n)


def _mult_ok(p, parity):
    """Parts of the given parity must have even multiplicity."""
    from collections import Counter

    return all(m % 2 == 0 for q, m in Counter(p).items() if q % 2 == parity)


def residual_orbit_count_oracle(type_label: str, rank: int) -> int:
    """Number of W-orbits of residual spaces, from partition combinatorics."""
    t = type_label.upper()
    if t == "A":
        return sum(1 for _ in partitions(rank + 1))
    if t == "B":  # dual algebra sp_{2n}: odd parts have even multiplicity
        return sum(1 for p in partitions(2 * rank) if _mult_ok(p, 1))
    if t == "C":  # dual algebra so_{2n+1}: even parts have even multiplicity
        return sum(1 for p in partitions(2 * rank + 1) if _mult_ok(p, 0))
    if t == "D":  # so_{2n}, with very even partitions counted twice
        base = [p for p in partitions(2 * rank) if _mult_ok(p, 0)]
        very_even = sum(1 for p in base if all(q % 2 == 0 for q in p))
        return len(base) + very_even
    raise ValueError("partition oracle covers classical types only")


# ---------------------------------------------------------------------------
# orbit dimensions and names


def orbit_dimension(datum: RootDatum, center, levi=None) -> int:
    """dim of the nilpotent orbit with weighted Dynkin element h = 2*center.

    Counts inside the full system by default, or inside a Levi subsystem.
    """
    coroots = (datum.positive_coroots if levi is None
               else datum.levi_positive_coroots(levi))
    n0 = n1 = 0
    for a in coroots:
        v = 2 * datum.pair(a, center)
        if v == 0:
            n0 += 2
        elif abs(v) == 1:
            n1 += 1
    return 2 * len(coroots) - n0 - n1


_EXCEPTIONAL_QUALIFIERS = {
    "E6": ["E6", "E6(a1)", "E6(a3)"],
    "E7": ["E7", "E7(a1)", "E7(a2)", "E7(a3)", "E7(a4)", "E7(a5)"],
    "E8": ["E8", "E8(a1)", "E8(a2)", "E8(a3)", "E8(a4)", "E8(b4)",
           "E8(a5)", "E8(b5)", "E8(a6)", "E8(b6)", "E8(a7)"],
    "F4": ["F4", "F4(a1)", "F4(a2)", "F4(a3)"],
    "G2": ["G2", "G2(a1)"],
}


@lru_cache(maxsize=None)
def _distinguished_ranking(datum_key, type_label, rank, component):
    raise RuntimeError  # replaced below; kept for cache identity


def _factor_names(datum: RootDatum, component: tuple[int, ...], center) -> str:
    """Name of one irreducible Levi factor's distinguished orbit.

    The orbit lives in the dual algebra, whose roots are our coroots: the
    factor's type is dualized (B <-> C) and a tilde marks factors whose
    coroots are the short ones (i.e. whose roots are long in R).
    """
    t, r = datum.subsystem_type(component)
    t = {"B": "C", "C": "B"}.get(t, t) if r > 2 else ("B" if t in "BC" else t)
    lengths = {datum.root_length_sq(c) for c in datum.positive_coroots}
    flen = {datum.root_length_sq(datum.simple_coroots[i]) for i in component}
    tilde = "~" if (t == "A" and len(lengths) > 1 and flen == {max(lengths)}) else ""
    base = f"{t}{tilde}{r}"
    if all(2 * datum.pair(datum.simple_coroots[i], center) == 2 for i in component):
        return base  # principal orbit of the factor
    # rank the factor's distinguished orbits by descending dimension
    cands = distinguished_centers(datum, component)
    dims = sorted({orbit_dimension(datum, c, component) for c in cands}, reverse=True)
    mydim = orbit_dimension(datum, center, component)
    idx = dims.index(mydim)
    series = _EXCEPTIONAL_QUALIFIERS.get(f"{t}{r}")
    if series and len(series) == len(dims):
        return series[idx]
    return f"{base}(a{idx})"


def bala_carter_name(datum: RootDatum, levi: tuple[int, ...], center) -> str:
    """Bala-Carter-style name from the (standard Levi, distinguished center)."""
    if not levi:
        return "0"
    parts = [
        _factor_names(datum, comp, center)
        for comp in datum.irreducible_components(levi)
    ]
    from collections import Counter

    counts = Counter(parts)
    out = []
    for name in sorted(counts, key=lambda s: (-_name_rank(s), s)):
        m = counts[name]
        out.append(f"{m}{name}" if m > 1 else name)
    return "+".join(out)


def _name_rank(name: str) -> int:
    digits = "".join(ch for ch in name.split("(")[0] if ch.isdigit())
    return int(digits) if digits else 0


def orbit_catalog(datum: RootDatum) -> list[dict]:
    """All residual orbits with diagram, dimension, and derived name.

    Orbits sharing a derived name (non-conjugate Levis of equal type) are
    disambiguated with prime marks in diagram-lexicographic order.
    """
    rows = []
    for k in range(datum.rank + 1):
        for levi in itertools.combinations(range(datum.rank), k):
            for c in distinguished_centers(datum, levi):
                dom, _ = datum.dominant_map(c)
                wd = tuple(int(2 * x) for x in dom)
                rows.append({
                    "diagram": wd,
                    "dim": orbit_dimension(datum, c),
                    "name": bala_carter_name(datum, levi, c),
                    "levi": levi,
                })
    # dedup by diagram (same W-orbit reached from conjugate Levis)
    seen = {}
    for row in sorted(rows, key=lambda r: (r["dim"], r["diagram"], r["name"])):
        seen.setdefault(row["diagram"], row)
    out = sorted(seen.values(), key=lambda r: (r["dim"], r["diagram"]))
    from collections import Counter

    dup = Counter(r["name"] for r in out)
    marks: dict[str, int] = {}
    for r in out:
        if dup[r["name"]] > 1:
            k = marks.get(r["name"], 0)
            marks[r["name"]] = k + 1
            r["name"] = r["name"] + "'" * (k + 1)
    return out


def orbit_table_text(datum: RootDatum) -> str:
    """Plain-text orbit table: type rank node-values name, one per line."""
    lines = [f"# weighted Dynkin diagrams, {datum.type_label}{datum.rank} "
             f"(schema v1: type rank labels name)"]
    for row in orbit_catalog(datum):
        labels = ",".join(str(v) for v in row["diagram"])
        lines.append(f"{datum.type_label} {datum.rank} {labels} {row['name']}")
    return "\n".join(lines) + "\n"


def name_lookup(datum: RootDatum) -> dict:
    """(type, rank, diagram) -> name map for weighted_dynkin_label()."""
    return {(datum.type_label, datum.rank, row["diagram"]): row["name"]
            for row in orbit_catalog(datum)}


def load_orbit_table(path=None) -> dict:
    """Parse the shipped orbit table; (type, rank, diagram) -> name."""
    if path is None:
        from importlib.resources import files

        text = (files("polecascade") / "data" / "orbit_tables.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        t, r, labels, name = line.split(" ", 3)
        out[(t, int(r), tuple(int(x) for x in labels.split(",")))] = name
    return out
