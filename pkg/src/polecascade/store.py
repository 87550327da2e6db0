"""Serialization of cascade databases, denominator sets, and reports.

Plain-text, diff-friendly formats: exact rationals as p/q strings, Weyl
elements as space-separated 1-based reduced words, one file per cascade
phase with the columns in database order, schema-versioned.  Points at
infinity carry an explicit ``inf*w' +`` prefix term.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction as Q

from .cascade import CascadeDB, GenRow, StdRow
from .polespaces import FormalPoint, pole_space

SCHEMA_VERSION = 1


def _q(x: Q) -> str:
    x = Q(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _vec(v) -> str:
    return ",".join(_q(x) for x in v)


def _parse_vec(s: str):
    return tuple(Q(x) for x in s.split(",")) if s else ()


def _point(p: FormalPoint) -> str:
    if p.is_finite:
        return f"({_vec(p.finite)})"
    return f"inf*w'({_vec(p.infinite)}) + ({_vec(p.finite)})"


def _parse_point(s: str) -> FormalPoint:
    s = s.strip()
    if s.startswith("inf*w'"):
        inf_part, fin_part = s[len("inf*w'"):].split(" + ")
        inf = _parse_vec(inf_part.strip("()"))
        fin = _parse_vec(fin_part.strip("()"))
        return FormalPoint(fin, inf)
    return FormalPoint(_parse_vec(s.strip("()")), tuple([Q(0)] * len(_parse_vec(s.strip("()")))))


def _coroots(cs) -> str:
    return ";".join(",".join(str(int(x)) for x in c) for c in sorted(cs))


def _parse_coroots(s: str):
    if not s:
        return ()
    return tuple(tuple(int(x) for x in part.split(",")) for part in s.split(";"))


def _word(datum, w) -> str:
    # canonical reduced word from the matrix, so exports are representation
    # independent and round trips are byte-stable
    word = datum._reduced_word_from_cmat(w.cmat)
    return ".".join(str(i + 1) for i in word) or "e"


def _segment(seg) -> str:
    return f"[{_point(seg[0])} -> {_point(seg[1])}]"


def _parse_segment(s: str):
    a, b = s.strip("[]").split(" -> ")
    return (_parse_point(a), _parse_point(b))


def export_cascade(db: CascadeDB, out_dir: str) -> list[str]:
    """One file per phase plus a manifest; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    datum = db.datum
    paths = []
    manifest = {
        "schema": SCHEMA_VERSION,
        "type": datum.type_label,
        "rank": datum.rank,
        "omitted": datum.omitted_index + 1,
        "gen_phases": len(db.gen_phases),
        "std_phases": len(db.std_phases),
    }
    mpath = os.path.join(out_dir, "manifest.json")
    with open(mpath, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")
    paths.append(mpath)
    for k, phase in enumerate(db.gen_phases):
        path = os.path.join(out_dir, f"gen_{k}.txt")
        with open(path, "w") as fh:
            fh.write(f"# Gen_{k} schema v{SCHEMA_VERSION}: "
                     "pole_set | p_L | c_L | order | num | den | J' | gamma' | rl | parent\n")
            for row in phase:
                cols = [
                    _coroots(row.space.pole_set),
                    _point(row.initial_point),
                    f"({_vec(row.space.center)})",
                    str(row.order),
                    _coroots(row.numerator),
                    _coroots(row.denominator),
                    ",".join(str(j + 1) for j in row.levi_datum[0]),
                    _vec(row.levi_datum[1]),
                    ";".join(",".join(str(int(x)) for x in c) for c in row.root_list),
                    "-" if row.parent is None else f"{row.parent[0]},{row.parent[1]}",
                ]
                fh.write(" | ".join(cols) + "\n")
        paths.append(path)
    for k, phase in enumerate(db.std_phases):
        path = os.path.join(out_dir, f"std_{k}.txt")
        with open(path, "w") as fh:
            fh.write(f"# Std_{k} schema v{SCHEMA_VERSION}: "
                     "pole_set | c_L0 | w_list | segments | order | sub | J | gamma "
                     "| perp | parallel | pole_sets | gen_refs\n")
            for row in phase:
                cols = [
                    _coroots(row.pole_set),
                    f"({_vec(row.space.center)})",
                    " ".join(_word(datum, w) for w in row.w_list),
                    " ".join(_segment(s) for s in row.segment_list),
                    str(row.order),
                    str(row.sub_tag).lower(),
                    ",".join(str(j + 1) for j in row.parabolic[0]),
                    _vec(row.parabolic[1]),
                    _coroots(row.perp_coroots),
                    str(row.parallel_flag).lower(),
                    " ".join(_coroots(ps) for ps in row.pole_set_list),
                    " ".join(f"{a},{b}" for a, b in row.gen_indices),
                ]
                fh.write(" | ".join(cols) + "\n")
        paths.append(path)
    return paths


def import_cascade(in_dir: str) -> CascadeDB:
    """Lossless reload of an exported cascade database."""
    from .roots import build_root_datum

    with open(os.path.join(in_dir, "manifest.json")) as fh:
        manifest = json.load(fh)
    if manifest["schema"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {manifest['schema']}")
    datum = build_root_datum(manifest["type"], manifest["rank"], manifest["omitted"])
    gen_phases = []
    for k in range(manifest["gen_phases"]):
        rows = []
        with open(os.path.join(in_dir, f"gen_{k}.txt")) as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = [c.strip() for c in line.split(" | ")]
                pset = _parse_coroots(cols[0])
                space = pole_space(datum, pset)
                jset = tuple(int(x) - 1 for x in cols[6].split(",")) if cols[6] else ()
                rows.append(GenRow(
                    space, _parse_point(cols[1]), int(cols[3]),
                    _parse_coroots(cols[4]), _parse_coroots(cols[5]),
                    (jset, _parse_vec(cols[7])),
                    _parse_coroots(cols[8]),
                    None if cols[9] == "-" else tuple(int(x) for x in cols[9].split(",")),
                ))
        gen_phases.append(rows)
    std_phases = []
    for k in range(manifest["std_phases"]):
        rows = []
        with open(os.path.join(in_dir, f"std_{k}.txt")) as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = [c.strip() for c in line.split(" | ")]
                pset = _parse_coroots(cols[0])
                space = pole_space(datum, pset)
                words = [() if w == "e" else tuple(int(i) - 1 for i in w.split("."))
                         for w in (cols[2].split(" ") if cols[2] else [])]
                segs = []
                if cols[3]:
                    parts = cols[3].replace("] [", "]|[").split("|")
                    segs = [_parse_segment(p) for p in parts]
                jset = tuple(int(x) - 1 for x in cols[6].split(",")) if cols[6] else ()
                row = StdRow(space, datum.from_word(()), int(cols[4]),
                             cols[5] == "true", (jset, _parse_vec(cols[7])),
                             _parse_coroots(cols[8]))
                row.rep = None  # recomputed lazily if needed
                row.w_list = [datum.from_word(w) for w in words]
                row.segment_list = segs
                row.parallel_flag = cols[9] == "true"
                row.pole_set_list = [frozenset(_parse_coroots(ps))
                                     for ps in (cols[10].split(" ") if cols[10] else [])]
                row.gen_indices = [tuple(int(x) for x in p.split(","))
                                   for p in (cols[11].split(" ") if cols[11] else [])]
                rows.append(row)
        std_phases.append(rows)
    return CascadeDB(datum, gen_phases, std_phases)


def cascade_equal(a: CascadeDB, b: CascadeDB) -> bool:
    """Structural equality through the canonical export form."""
    import io
    import tempfile

    with tempfile.TemporaryDirectory() as ta, tempfile.TemporaryDirectory() as tb:
        export_cascade(a, ta)
        export_cascade(b, tb)
        for name in sorted(os.listdir(ta)):
            with open(os.path.join(ta, name)) as fa, open(os.path.join(tb, name)) as fb:
                if fa.read() != fb.read():
                    return False
        return len(os.listdir(ta)) == len(os.listdir(tb))


def write_denominator_sets(path: str, rows: list[dict]) -> None:
    """Golden file: one line per form (pair id | tag | gradient | constant | mult)."""
    with open(path, "w") as fh:
        fh.write(f"# denominator sets schema v{SCHEMA_VERSION}\n")
        for row in rows:
            fh.write(f"{row['pair']} | {row['tag']} | {_vec(row['gradient'])} | "
                     f"{_q(row['constant'])} | {row['mult']}\n")


def write_report(path: str, records: list[dict]) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, default=str) + "\n")
