"""Command line driver: validate inputs, build towers, run audits and bounds."""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import random
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import bounds, corpus, functionals
from .functionals import DEFAULT_EXHAUSTIVE_CAP
from .io import InputBundle, SchemaError, bundle_from_dict, load_bundle, load_json
from .loops import FreeBasis
from .nilpotent import DEFAULT_GROUP_CAP, TrivialWordError, format_word, lcs_degree, magnus, parse_word
from .surface import CurveArcTriple, SurfaceError, is_minimal_position, reduce_to_minimal
from .tower import TowerConfig, TowerError, depth_driver, validate_certificate

TOWER_COLUMNS = ["name", "N0", "k", "k_bound", "ell", "ell_bound", "class", "all_checks"]


class _Out:
    """Collects named artifacts and writes them to --out or stdout."""

    def __init__(self, out_dir: Optional[str]):
        self.dir = Path(out_dir) if out_dir else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def emit(self, filename: str, text: str) -> None:
        if not text.endswith("\n"):
            text += "\n"
        if self.dir:
            (self.dir / filename).write_text(text)
        else:
            sys.stdout.write(text)


def _csv(rows: List[Dict[str, object]], columns: Sequence[str]) -> str:
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in columns})
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)


def _inputs(args) -> List[InputBundle]:
    out = []
    for item in args.input or []:
        p = Path(item)
        if p.exists():
            out.append(load_bundle(p))
        elif item in corpus.BUILDERS:
            out.append(bundle_from_dict(json.loads(corpus.load_text(item)), item))
        else:
            raise SchemaError(item, "no such file or bundled example")
    if not out:
        raise SchemaError("--input", "give at least one input file or example name")
    return out


def _config(args) -> TowerConfig:
    return TowerConfig(seed=args.seed, enum_cap=args.enum_cap, group_cap=args.group_cap)


# ---------------------------------------------------------------- subcommands


def cmd_validate(args, out: _Out) -> int:
    if args.certificate:
        problems = validate_certificate(load_json(Path(args.certificate)))
        report = {"certificate": args.certificate, "valid": not problems, "problems": problems}
        out.emit("validate.json", _dump(report))
        return 0 if not problems else 1
    rows = []
    status = 0
    for b in _inputs(args):
        s = b.surface
        row: Dict[str, object] = {
            "name": b.name, "V": s.num_vertices, "E": s.num_edges, "F": s.num_filled_faces,
            "boundary": s.num_boundary, "chi": s.euler_characteristic(), "genus": s.genus(),
            "notes": b.notes,
        }
        if b.triple is not None:
            t = b.triple
            ok, wit = is_minimal_position(t.alpha, t.beta, s)
            row.update(N=t.n, minimal=ok)
            if wit is not None:
                row["obstruction"] = wit.kind
                status = 1
        rows.append(row)
    if args.format == "csv":
        out.emit("validate.csv", _csv(rows, ["name", "V", "E", "F", "boundary", "chi", "genus", "N", "minimal"]))
    else:
        out.emit("validate.json", _dump(rows))
    return status


def _prepare(b: InputBundle) -> CurveArcTriple:
    if b.triple is None:
        raise SchemaError(b.name, "input has no curves")
    t = b.triple
    ok, _ = is_minimal_position(t.alpha, t.beta, t.surface)
    if not ok:
        t, _ = reduce_to_minimal(t)
    return t


def cmd_tower(args, out: _Out) -> int:
    rows = []
    status = 0
    for b in _inputs(args):
        t = _prepare(b)
        rep = depth_driver(t, args.depth, _config(args))
        cert = rep.certificate
        summ = cert.summary()
        rows.append({"name": b.name, **summ})
        if not cert.all_checks:
            status = 1
        if args.format == "cert":
            out.emit(f"{b.name}.cert.json", cert.to_json())
        elif args.format == "json-like":
            out.emit(f"{b.name}.report.json", _dump({"name": b.name, **rep.as_dict()}))
    if args.format == "csv" or out.dir:
        out.emit("tower.csv", _csv(rows, TOWER_COLUMNS))
    return status


def cmd_audit(args, out: _Out) -> int:
    rng = random.Random(args.seed)
    rows = []
    ok_all = True
    for n in range(args.min_dim, args.max_dim + 1):
        for fam in range(args.families):
            m = rng.randint(1, 12)
            vecs = functionals.random_nonzero_vectors(n, m, rng)
            avg = functionals.expectation_audit_half(vecs, n)
            half = functionals.find_half_functional(vecs, n, max(args.enum_cap, n), rng)
            row = {"dim": n, "family": fam, "m": m, "random1_average": str(avg),
                   "random1_exact": avg * 2 == m, "random1_best": half.count}
            if n >= 3:
                pairs = tuple(functionals.random_splitting(n, rng) for _ in range(m))
                sf = functionals.SplittingFamily(n, pairs)
                best = functionals.find_splitting_functional(sf, max(args.enum_cap, n), rng)
                zeta_ok = all(
                    functionals.splitting_probability(V, W, n) == functionals.zeta(len(V), n) for V, W in pairs
                )
                row.update(random2_best=best.count, random2_needed=best.threshold,
                           random2_ok=best.ok, zeta_exact=zeta_ok)
                ok_all &= best.ok and zeta_ok
            ok_all &= row["random1_exact"] and half.ok
            rows.append(row)
    cols = ["dim", "family", "m", "random1_average", "random1_exact", "random1_best",
            "random2_best", "random2_needed", "random2_ok", "zeta_exact"]
    if args.format == "csv":
        out.emit("audit.csv", _csv(rows, cols))
    else:
        out.emit("audit.json", _dump(rows))
    return 0 if ok_all else 1


def _witness_depth(t: CurveArcTriple, depth: int):
    fb = FreeBasis(t.surface, root=t.v)
    word = fb.word(t.witness_word())
    return word, fb.rank, lcs_degree(word, fb.rank, depth)


def cmd_magnus(args, out: _Out) -> int:
    rows = []
    if args.word:
        for text in args.word:
            w = parse_word(text)
            rank = args.rank or max([abs(x) for x in w] or [1])
            try:
                d = str(lcs_degree(w, rank, args.magnus_depth))
            except TrivialWordError:
                d = "trivial"
            rows.append({"word": format_word(w), "rank": rank, "depth": d,
                         "series": magnus(w, rank, args.magnus_depth).digest()})
    else:
        for b in _inputs(args):
            if b.triple is None:
                raise SchemaError(b.name, "input has no curves")
            word, rank, d = _witness_depth(b.triple, args.magnus_depth)
            rows.append({"name": b.name, "word": format_word(word), "rank": rank, "depth": str(d)})
    if args.format == "csv":
        out.emit("magnus.csv", _csv(rows, ["name", "word", "rank", "depth"]))
    else:
        out.emit("magnus.json", _dump(rows))
    return 0


def cmd_double(args, out: _Out) -> int:
    rows = []
    status = 0
    for b in _inputs(args):
        t = b.triple
        if t is None:
            raise SchemaError(b.name, "input has no curves")
        s = t.surface
        if s.is_closed:
            raise SchemaError(b.name, "doubling needs a surface with boundary")
        word, rank, d = _witness_depth(t, args.magnus_depth)
        t2 = corpus.doubled_triple(t)
        expected = 2 * s.genus() + s.num_boundary - 1
        rep = depth_driver(t2, d.value, _config(args))
        chain_ok = bounds.chain_ok(rep.chain)
        row = {
            "name": b.name, "genus": s.genus(), "boundary": s.num_boundary,
            "double_genus": t2.surface.genus(), "genus_check": t2.surface.genus() == expected,
            "witness": format_word(word), "rank": rank, "d": str(d),
            "k": rep.certificate.k, "depth_limit": bounds.depth_limit(rep.certificate.k),
            "N": t2.n, "chain_ok": chain_ok, "all_checks": rep.certificate.all_checks,
            "chain": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in rep.chain],
        }
        if not (row["genus_check"] and chain_ok and rep.certificate.all_checks):
            status = 1
        rows.append(row)
        if args.format == "cert":
            out.emit(f"{b.name}.double.cert.json", rep.certificate.to_json())
    cols = ["name", "genus", "boundary", "double_genus", "genus_check", "d", "k", "depth_limit", "N", "chain_ok"]
    if args.format == "csv":
        out.emit("double.csv", _csv(rows, cols))
    elif args.format == "json-like":
        out.emit("double.json", _dump(rows))
    return status


def cmd_bounds(args, out: _Out) -> int:
    reps = []
    c = bounds.constant_c()
    reps.append({"name": "c", "argument": "", "value": f"{c:.40f}", "symbolic": bounds.C_SYMBOLIC})
    reps.append({"name": "smallest_d_isect_above_2", "argument": "", "value": str(bounds.smallest_depth_exceeding(2)),
                 "symbolic": "min d: ((d+2)/2)^c > 2"})
    reps.append({"name": "first_positive_log_branch", "argument": "",
                 "value": str(bounds.first_positive_log_branch()), "symbolic": "min k: c ln((k+3)/2) > ln 2"})
    reps.append({"name": "log_branch_reaches_0.197", "argument": "",
                 "value": str(bounds.first_k_log_branch_at_least()), "symbolic": "min k: c ln((k+3)/2) - ln 2 >= 0.197"})
    for d in args.d or [3, 7, 100, 9623]:
        reps.append(bounds.isect_bound(d).as_dict())
    for k in args.k or [1, 13, 9622, 10**6]:
        reps.append(bounds.dil_bound(k).as_dict())
    for n in args.n or [2, 4, 6]:
        reps.append({"name": "tower_length_cap", "argument": str(n), "value": str(bounds.tower_length_cap(n)),
                     "symbolic": f"2 log_(28/25)({n}) + 1 = {bounds.tower_length_bound(n):.6f}"})
    if args.format == "csv":
        out.emit("bounds.csv", _csv(reps, ["name", "argument", "value", "symbolic", "branch"]))
    else:
        out.emit("bounds.json", _dump(reps))
    return 0


def cmd_examples(args, out: _Out) -> int:
    names = args.name or corpus.names()
    if args.format == "csv" or not out.dir:
        rows = []
        for n in names:
            t = corpus.load(n)
            rows.append({"name": n, "genus": t.surface.genus(), "boundary": t.surface.num_boundary, "N": t.n})
        if not out.dir:
            out.emit("examples.csv", _csv(rows, ["name", "genus", "boundary", "N"]))
            return 0
    for n in names:
        out.emit(f"{n}.json", corpus.load_text(n))
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilcover", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", help="input file or bundled example name (repeatable)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--enum-cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP,
                        help="largest dimension scanned exhaustively")
    common.add_argument("--group-cap", type=int, default=DEFAULT_GROUP_CAP, help="largest group order enumerated")
    common.add_argument("--magnus-depth", type=int, default=6)
    common.add_argument("--format", choices=["cert", "csv", "json-like"], default="json-like")
    common.add_argument("--out", help="directory for output files (default: stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check an input or a certificate")
    v.add_argument("--certificate", help="certificate file to replay")
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("tower", parents=[common], help="build a resolving tower")
    t.add_argument("--depth", type=int, help="known lower-central depth of the witness")
    t.set_defaults(func=cmd_tower)

    a = sub.add_parser("audit", parents=[common], help="exact audits of the functional searches")
    a.add_argument("--min-dim", type=int, default=2)
    a.add_argument("--max-dim", type=int, default=10)
    a.add_argument("--families", type=int, default=50)
    a.set_defaults(func=cmd_audit)

    m = sub.add_parser("magnus", parents=[common], help="lower central depth via the Magnus expansion")
    m.add_argument("--word", action="append", help="word such as abAB or x1 x2^-1")
    m.add_argument("--rank", type=int)
    m.set_defaults(func=cmd_magnus)

    d = sub.add_parser("double", parents=[common], help="double a surface with boundary and build the tower")
    d.set_defaults(func=cmd_double)

    b = sub.add_parser("bounds", parents=[common], help="print the explicit bounds")
    b.add_argument("--d", type=int, action="append")
    b.add_argument("--k", type=int, action="append")
    b.add_argument("--n", type=int, action="append")
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("examples", parents=[common], help="list or write the bundled examples")
    e.add_argument("--name", action="append")
    e.set_defaults(func=cmd_examples)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.out)
    try:
        return args.func(args, out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SurfaceError, TowerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
