"""Command-line pipeline over the library stages.

Every stage writes its artifacts under the output directory (flag --out or
the POLECASCADE_OUT environment variable, default ./polecascade_out) and
exits nonzero on any verification failure, printing the failing witness.
Outputs are byte-deterministic, independent of the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction as Q

from .roots import build_root_datum


def _out_dir(args) -> str:
    out = args.out or os.environ.get("POLECASCADE_OUT", "polecascade_out")
    os.makedirs(out, exist_ok=True)
    return out


def _datum(args):
    return build_root_datum(args.type, args.rank, args.levi)


def cmd_orbits(args) -> int:
    from .orbits import orbit_catalog

    datum = _datum(args)
    rows = orbit_catalog(datum)
    out = _out_dir(args)
    path = os.path.join(out, f"orbits_{args.type}{args.rank}.txt")
    with open(path, "w") as fh:
        for row in rows:
            line = f"{','.join(str(v) for v in row['diagram'])} dim={row['dim']} {row['name']}"
            fh.write(line + "\n")
            print(line)
    print(f"{len(rows)} orbit labels -> {path}")
    return 0


def cmd_cascade(args) -> int:
    from .cascade import run_cascade, verify_cascade
    from .store import export_cascade

    datum = _datum(args)
    db = run_cascade(datum)
    out = os.path.join(_out_dir(args), f"cascade_{args.type}{args.rank}")
    paths = export_cascade(db, out)
    rep = verify_cascade(db)
    print(f"cascade {args.type}{args.rank}: gen rows per phase "
          f"{[len(p) for p in db.gen_phases]}, std rows {[len(p) for p in db.std_phases]}")
    print(f"{len(paths)} files -> {out}")
    for note in rep.notes:
        print("note:", note)
    if not rep.ok:
        for f in rep.failures:
            print("FAIL:", f)
        return 1
    print("all cascade axioms verified")
    return 0


def _residual_std_pairs(datum):
    from .cascade import run_cascade
    from .polespaces import is_residual

    db = run_cascade(datum)
    pairs = []
    for phase in db.std_phases:
        for srow in phase:
            if is_residual(datum, srow.space):
                for w in srow.w_list:
                    pairs.append((srow.space, w))
    return db, pairs


def cmd_envden(args) -> int:
    from .denominators import (enveloping_den, free_positions, regular_envelopes)
    from .store import write_denominator_sets

    datum = _datum(args)
    _, pairs = _residual_std_pairs(datum)
    rows = []
    env_cache = {}
    for idx, (l0, w) in enumerate(pairs):
        key = l0.key()
        if key not in env_cache:
            env_cache[key] = regular_envelopes(l0, datum)
        for tag in ("sigma", "sigma_prime", "tau"):
            dm = enveloping_den(l0, w, tag, datum, env_cache[key])
            if dm is None:
                rows.append({"pair": idx, "tag": tag + ":unconstrained",
                             "gradient": (), "constant": Q(0), "mult": 0})
                continue
            for form, mult in dm:
                rows.append({"pair": idx, "tag": tag, "gradient": form.gradient,
                             "constant": form.constant, "mult": mult})
    out = os.path.join(_out_dir(args), f"envden_{args.type}{args.rank}.txt")
    write_denominator_sets(out, rows)
    print(f"{len(pairs)} residual standard pairs, {len(rows)} denominator lines -> {out}")
    return 0


def _verify_pairs(args, checker, label) -> int:
    from .store import write_report

    datum = _datum(args)
    _, pairs = _residual_std_pairs(datum)
    records = []
    bad = 0
    for idx, (l0, w) in enumerate(pairs):
        ok = checker(l0, w, datum)
        records.append({"pair": idx, "pole_set": sorted(l0.pole_set),
                        "word": list(w.word), "ok": ok})
        if not ok:
            bad += 1
            print(f"FAIL {label} at pair {idx}: pole set {sorted(l0.pole_set)}, "
                  f"w word {[i + 1 for i in w.word]}")
    out = os.path.join(_out_dir(args), f"{label}_{args.type}{args.rank}.jsonl")
    write_report(out, records)
    print(f"{label}: {len(pairs) - bad}/{len(pairs)} residual standard pairs pass -> {out}")
    return 1 if bad else 0


def cmd_verify_main(args) -> int:
    from .denominators import check_main_containment

    return _verify_pairs(args, check_main_containment, "verify-main")


def cmd_verify_tau(args) -> int:
    from .denominators import check_tau_identity

    return _verify_pairs(args, check_tau_identity, "verify-tau")


def cmd_special_classify(args) -> int:
    from .special import build_special_context, classify_weyl_triples
    from .store import write_report

    ctx = build_special_context()
    u_classes, w76, w87 = classify_weyl_triples(ctx)
    counts = [len(u_classes[m]) for m in range(4)]
    print(" ".join(str(c) for c in counts))
    print(f"|W_7/6| = {len(w76)}  |W_8/7| = {len(w87)}")
    out = os.path.join(_out_dir(args), "special_classify.jsonl")
    write_report(out, [{"U_sizes": counts, "W76": len(w76), "W87": len(w87)}])
    ok = counts == [1, 3, 60, 150] and len(w76) == 56 and len(w87) == 240
    if not ok:
        print("FAIL: classification does not match the expected cardinalities")
    return 0 if ok else 1


def cmd_special_vanish(args) -> int:
    from .special import build_special_context, verify_special_vanishing
    from .store import write_report

    ctx = build_special_context()
    out = _out_dir(args)
    checkpoint = os.path.join(out, f"special_vanish_{args.scope}.jsonl")
    if args.workers > 1 and args.scope == "full":
        rep = _parallel_sweep(ctx, checkpoint, args.workers)
    else:
        rep = verify_special_vanishing(ctx, args.scope, checkpoint=checkpoint)
    summary = {k: rep[k] for k in ("scope", "etas", "triples", "eligible")}
    summary["violations"] = len(rep["violations"])
    summary["max_abs_E"] = str(rep["max_abs_E"])
    write_report(os.path.join(out, f"special_vanish_{args.scope}_summary.jsonl"),
                 [summary] + rep["violations"])
    print(f"special vanishing ({args.scope}): {rep['triples']} triples, "
          f"{rep['eligible']} eligible, {len(rep['violations'])} violations, "
          f"max |E| = {rep['max_abs_E']}")
    for v in rep["violations"][:20]:
        print("FAIL:", v)
    return 1 if rep["violations"] else 0


def _parallel_sweep(ctx, checkpoint, workers):
    """Shard the eta axis over processes; the merged output is order-stable."""
    import concurrent.futures as cf
    import json as js

    done = {}
    if os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            for line in fh:
                rec = js.loads(line)
                done[rec["eta"]] = rec
    todo = [e for e in range(240) if e not in done]
    chunks = [todo[i::workers] for i in range(workers)]
    shards = list(done.values())
    with cf.ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_sweep_chunk, chunks):
            shards.extend(part)
    shards.sort(key=lambda r: r["eta"])
    with open(checkpoint, "w") as fh:
        for rec in shards:
            fh.write(js.dumps(rec, sort_keys=True) + "\n")
    viol = [v for r in shards for v in r["violations"]]
    return {"scope": "full", "etas": 240,
            "triples": sum(r["triples"] for r in shards),
            "eligible": sum(r["eligible"] for r in shards),
            "violations": viol,
            "max_abs_E": max((abs(Q(v["E"])) for v in viol), default=Q(0))}


def _sweep_chunk(etas):
    from .special import (SweepEngine, build_special_context,
                          classify_weyl_triples, triple_patterns)
    import numpy as np

    ctx = build_special_context()
    engine = SweepEngine(ctx)
    u_classes, w76, w87 = classify_weyl_triples(ctx)
    u_list = [u for m in range(4) for u in u_classes[m]]
    out = []
    for ei, a_bits, b_bits in triple_patterns(ctx, u_list, w76, w87, etas):
        elig = np.nonzero(np.array([bin(int(b)).count("1") for b in b_bits]) <= 6)[0]
        pat = {}
        for idx in elig:
            pat.setdefault((int(b_bits[idx]), int(a_bits[idx])), int(idx))
        violations = []
        for (bb, ab), witness in sorted(pat.items()):
            for n, bi, e, val in engine.check_pattern(bb, ab):
                violations.append({"triple": [ei, witness // len(u_list),
                                              witness % len(u_list)],
                                   "N": n, "basis_index": bi, "e": e,
                                   "E": f"{val.numerator}/{val.denominator}"})
        out.append({"eta": ei, "triples": len(u_list) * len(w76),
                    "eligible": int(len(elig)), "patterns": len(pat),
                    "violations": violations})
    return out


def cmd_report(args) -> int:
    out = _out_dir(args)
    lines = []
    for name in sorted(os.listdir(out)):
        path = os.path.join(out, name)
        if name.endswith(".jsonl"):
            with open(path) as fh:
                n = sum(1 for _ in fh)
            lines.append(f"{name}: {n} records")
        elif os.path.isdir(path):
            lines.append(f"{name}/: {len(os.listdir(path))} files")
        else:
            lines.append(f"{name}")
    text = "\n".join(lines) + "\n"
    with open(os.path.join(out, "report.txt"), "w") as fh:
        fh.write(text)
    print(text, end="")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="polecascade",
                                 description="residual pole spaces, cascades, "
                                             "and the E8 special-line checks")
    ap.add_argument("--out", help="output directory (or POLECASCADE_OUT)")
    ap.add_argument("--workers", type=int, default=1)
    sub = ap.add_subparsers(dest="stage", required=True)

    def with_type(p):
        p.add_argument("type", choices=list("ABCDEFG"))
        p.add_argument("rank", type=int)
        p.add_argument("--levi", type=int, default=None,
                       help="omitted simple-root index (1-based)")

    for name, fn in [("orbits", cmd_orbits), ("cascade", cmd_cascade),
                     ("envden", cmd_envden), ("verify-main", cmd_verify_main),
                     ("verify-tau", cmd_verify_tau)]:
        p = sub.add_parser(name)
        with_type(p)
        p.set_defaults(fn=fn)
    p = sub.add_parser("special-classify")
    p.set_defaults(fn=cmd_special_classify)
    p = sub.add_parser("special-vanish")
    p.add_argument("--scope", choices=["sample", "full"], default="sample")
    p.set_defaults(fn=cmd_special_vanish)
    p = sub.add_parser("report")
    p.set_defaults(fn=cmd_report)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
