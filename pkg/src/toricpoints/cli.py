"""Command-line interface.

Exit codes: 0 success or PASS, 1 invalid input, 2 computational error,
3 verdict FAIL.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import gallery
from .acceptance import CRITERIA, run as run_criterion
from .analytic import LocalDensityQuery, PoleError, denef_density, euler_product, x_function, x_pole_order
from .clemens import AdelicFaceSpec, ClemensError, ClemensFace, PlaceFace, adelic_picard, clemens_complex
from .cohomology import CohomologyError
from .counter.affine import ModelError, enumerate_affine, load_model
from .counter.cox import CountError, enumerate_cox
from .counter.fit import FitError, fit_asymptotics, verdict
from .counter.heights import HeightError, height_spec
from .counter.records import default_schedule, read_csv, write_csv
from .counter.regions import ALL, RegionError, parse_region
from .fan import FanError, is_complete, is_smooth, load_fan
from .invariants import InvariantError, fujita_a, predict_growth
from .picard import PicardError
from .polycore import PolyhedralError

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE, EXIT_FAIL = 0, 1, 2, 3

INVALID = (FanError, ClemensError, RegionError, ModelError, json.JSONDecodeError, KeyError,
           FileNotFoundError)
COMPUTE = (PoleError, CountError, InvariantError, FitError, HeightError, PicardError,
           PolyhedralError, CohomologyError, ArithmeticError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument parsing helpers

def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _fracs(text: str) -> list[Fraction]:
    return [Fraction(x) for x in text.replace(" ", "").split(",") if x]


def _load(args):
    if not args.fan:
        raise UsageError("--fan is required (a fixture name or a JSON path)")
    doc = gallery.resolve(args.fan)
    return doc, load_fan(doc)


def _boundary(args, doc) -> frozenset[int]:
    if args.boundary is not None:
        return frozenset(_ints(args.boundary))
    return frozenset(doc.get("boundary_rays") or [])


def parse_face(items: list[str]) -> AdelicFaceSpec:
    """``name[:kind]=i,j`` per place, e.g. ``inf=3,4`` or ``w:complex=2``."""
    entries = []
    for item in items:
        if "=" not in item:
            raise UsageError(f"--face expects place=IDXLIST, got {item!r}")
        head, rays = item.split("=", 1)
        name, _, kind = head.partition(":")
        entries.append(PlaceFace(name.strip(), (kind or "real").strip(), ClemensFace(frozenset(_ints(rays)))))
    return AdelicFaceSpec(tuple(entries))


def _specs(args, doc, f, b) -> list[AdelicFaceSpec]:
    if args.face:
        return [parse_face(args.face)]
    return [AdelicFaceSpec.single(c.rays) for c in clemens_complex(f, b)]


def _schedule(args) -> list[int]:
    if args.schedule:
        sched = _ints(args.schedule)
    else:
        sched = default_schedule(int(args.tmax))
    if any(b <= a for a, b in zip(sched, sched[1:])) or not sched:
        raise UsageError("schedule must be strictly increasing")
    return sched


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(args, table: str, structured) -> None:
    print(table)
    if args.out:
        Path(args.out).write_text(json.dumps(structured, indent=1, default=str) + "\n", encoding="utf-8")


def _face_label(spec: AdelicFaceSpec, labels) -> str:
    if not spec.entries:
        return "{}"
    parts = []
    for e in spec.entries:
        names = [labels[i] if labels and i < len(labels) else str(i) for i in sorted(e.face.rays)]
        parts.append(f"{e.place}={{{','.join(names)}}}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    doc, f = _load(args)
    info = {"ok": True, "rays": f.n_rays, "max_cones": len(f.max_cones),
            "smooth": is_smooth(f), "complete": is_complete(f)}
    _emit(args, _table(list(info), [list(info.values())]), info)
    return EXIT_OK


def cmd_clemens(args) -> int:
    doc, f = _load(args)
    b = _boundary(args, doc)
    labels = doc.get("labels")
    rows, out = [], []
    for face in clemens_complex(f, b):
        spec = AdelicFaceSpec.single(face.rays)
        rk = adelic_picard(f, b, spec).free_rank
        rows.append([_face_label(spec, labels), face.dim, rk])
        out.append({"rays": sorted(face.rays), "dim": face.dim, "adelic_pic_rank": rk})
    _emit(args, _table(["face", "dim", "rk Pic(X;A)"], rows), out)
    return EXIT_OK


def cmd_predict(args) -> int:
    doc, f = _load(args)
    b = _boundary(args, doc)
    L = _ints(args.cls) if args.cls else None
    labels = doc.get("labels")
    rows, out = [], []
    for spec in _specs(args, doc, f, b):
        pr = predict_growth(f, b, spec, L)
        label = _face_label(spec, labels)
        rec = {"face": label, "obstructed": pr.obstructed, "rank": pr.rank, "c_A": pr.c_A.value}
        if pr.obstructed:
            rec["witness"] = list(pr.witness) if pr.witness else None
            rows.append([label, "obstructed", f"witness {pr.witness}", "", "", f"{pr.c_A.value:.6g}"])
        else:
            rec.update(a=str(pr.a), b=pr.b, rigid=pr.rigid)
            rows.append([label, "ok", f"T^{pr.a} (log T)^{pr.b - 1}", pr.a, pr.b, f"{pr.c_A.value:.6g}"])
            rows[-1][2] = rows[-1][2] + f"  rigid={pr.rigid}"
        out.append(rec)
    _emit(args, _table(["face", "status", "order", "a", "b", "c_A"], rows), out)
    return EXIT_OK


def cmd_xfun(args) -> int:
    doc, f = _load(args)
    b = _boundary(args, doc)
    spec = parse_face(args.face) if args.face else gallery.default_spec(doc)
    ap = adelic_picard(f, b, spec)
    eff = ap.effective
    L = ap.from_rays(_ints(args.cls)) if args.cls else ap.anticanonical
    tors = 1
    for t in ap.torsion:
        tors *= t
    value = x_function(eff, tors)([Fraction(x) for x in L.free])
    a = fujita_a(ap, L)
    ell = [ap.canonical.free[i] + a * L.free[i] for i in range(len(L.free))]
    order = x_pole_order(eff, ell, L.free)
    info = {"class": list(L.free), "X(L)": str(value), "a": str(a), "pole_order": order}
    _emit(args, _table(list(info), [list(info.values())]), info)
    return EXIT_OK


def _z(args, f) -> tuple:
    if not args.z:
        return ()
    z = _fracs(args.z)
    return tuple(z * f.n_rays) if len(z) == 1 else tuple(z)


def cmd_density(args) -> int:
    doc, f = _load(args)
    q = int(args.primes or 2)
    val = denef_density(LocalDensityQuery(f, q, _z(args, f)))
    info = {"q": q, "density": str(val), "float": float(val) if isinstance(val, Fraction) else float(val.evalf(30))}
    _emit(args, _table(list(info), [list(info.values())]), info)
    return EXIT_OK


def cmd_euler(args) -> int:
    doc, f = _load(args)
    P = int(args.primes or 100)
    ep = euler_product(f, _z(args, f), P)
    info = {"prime_bound": P, "primes": ep.primes, "raw": repr(ep.raw), "normalized": repr(ep.normalized)}
    _emit(args, _table(list(info), [list(info.values())]), info)
    return EXIT_OK


def _expected(args, doc=None, f=None, b=None, lam=None):
    if args.expect:
        a, bb = _fracs(args.expect)
        return a, bb
    if f is not None and args.face:
        pr = predict_growth(f, b, parse_face(args.face), lam)
        if pr.obstructed:
            raise UsageError("the chosen face is obstructed; no growth order to compare with")
        return pr.a, pr.b
    return None


def _report_fit(args, records, expected) -> int:
    fit = fit_asymptotics(records)
    print(f"fit: a_hat={fit.a_hat:.4f} b_hat={fit.b_hat:.4f} c_hat={fit.c_hat:.4g} residual={fit.residual:.2e}")
    if expected is None:
        return EXIT_OK
    v = verdict(fit, *expected)
    print(v)
    return EXIT_OK if v.passed else EXIT_FAIL


def cmd_count(args) -> int:
    sched = _schedule(args)
    if args.model:
        model = load_model(gallery.resolve(args.model), args.model if args.model in gallery.MODELS else None)
        region = ALL
        if args.region:
            region = model.regions[args.region] if ":" not in args.region else parse_region(args.region, model.names)
        records = enumerate_affine(model, sched, region, args.workers)
        expected = _expected(args)
    else:
        doc, f = _load(args)
        b = _boundary(args, doc)
        lam = _ints(args.cls) if args.cls else doc.get("height_class")
        if lam is None:
            raise UsageError("--class is required: the fixture has no height class")
        h = height_spec(f, lam)
        names = [f"x{i}" for i in range(f.n_rays)]
        region = ALL
        if args.region:
            if ":" in args.region:
                region = parse_region(args.region, names)
            else:
                cons = (doc.get("regions") or {})[args.region]
                region = parse_region(f"{args.region}:{';'.join(cons)}", names)
        records = enumerate_cox(h, b, sched, region, args.include_boundary, args.workers,
                                model_id=str(doc.get("id", "fan")))
        expected = _expected(args, doc, f, b, lam)
    text = write_csv(records, args.out)
    if not args.out:
        print(text, end="")
    if len(records) >= 6:
        return _report_fit(args, records, expected)
    return EXIT_OK


def cmd_fit(args) -> int:
    records = read_csv(args.csv)
    expected = None
    if args.expect:
        expected = _expected(args)
    elif args.fan and args.face:
        doc, f = _load(args)
        b = _boundary(args, doc)
        lam = _ints(args.cls) if args.cls else doc.get("height_class")
        expected = _expected(args, doc, f, b, lam)
    return _report_fit(args, records, expected)


def cmd_verify(args) -> int:
    numbers = _ints(args.criteria) if args.criteria else sorted(CRITERIA)
    failed = 0
    for n in numbers:
        if n not in CRITERIA:
            raise UsageError(f"no criterion {n}")
        res = run_criterion(n, args.seed)
        print(res.line(), flush=True)
        failed += not res.passed
    print(f"{len(numbers) - failed}/{len(numbers)} criteria passed")
    return EXIT_OK if not failed else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toricpoints", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fan=True):
        if fan:
            sp.add_argument("--fan", help="fixture name or fan JSON path")
            sp.add_argument("--boundary", help="boundary ray indices, e.g. 2,3,4")
            sp.add_argument("--face", action="append", help="place[:kind]=IDXLIST, repeatable")
            sp.add_argument("--class", dest="cls", help="ray coefficient vector, e.g. 1,1,0,0,0")
        sp.add_argument("--out", help="write the structured result here")
        return sp

    sp = common(sub.add_parser("validate", help="load and check a fan"))
    sp.add_argument("path", nargs="?", help="fan path or fixture (same as --fan)")
    sp.set_defaults(func=cmd_validate)
    common(sub.add_parser("clemens", help="faces of the Clemens complex")).set_defaults(func=cmd_clemens)
    common(sub.add_parser("predict", help="obstruction or (a, b) per face")).set_defaults(func=cmd_predict)
    common(sub.add_parser("xfun", help="X-function of the effective cone at a class")).set_defaults(func=cmd_xfun)
    for name, fn, hlp in (("density", cmd_density, "local density at a prime power (--primes q)"),
                          ("euler", cmd_euler, "truncated Euler product (--primes P)")):
        sp = common(sub.add_parser(name, help=hlp))
        sp.add_argument("--primes", help="prime power q for density, prime bound P for euler")
        sp.add_argument("--z", help="shifts per ray, or one value for all rays")
        sp.set_defaults(func=fn)
    sp = common(sub.add_parser("count", help="count points on a schedule, then fit"))
    sp.add_argument("--model", help="affine model fixture or JSON path (instead of --fan)")
    sp.add_argument("--tmax", type=int, default=10**6)
    sp.add_argument("--schedule", help="comma-separated height bounds")
    sp.add_argument("--region", help="region id of the fixture/model, or id:constraint;constraint")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--include-boundary", action="store_true", help="also count points off the torus")
    sp.add_argument("--expect", help="predicted a,b for the verdict")
    sp.set_defaults(func=cmd_count)
    sp = common(sub.add_parser("fit", help="fit a CSV of counts"))
    sp.add_argument("csv")
    sp.add_argument("--expect", help="predicted a,b for the verdict")
    sp.set_defaults(func=cmd_fit)
    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate" and getattr(args, "path", None) and not args.fan:
        args.fan = args.path
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except INVALID as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except COMPUTE as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
