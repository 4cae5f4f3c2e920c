"""Batch command line: transforms, theorem checks, suites, galleries.

Every verb reads instance JSON files, computes, and emits CSV (to --out,
else stdout).  When an exact verb produces another instance, an --out path
ending in .json re-emits it as an instance file that parses back to the
identical object.  Exit codes: 0 success, 1 a check or suite reported a
failure, 2 arguments or inputs that do not parse, 3 inputs that parse but
violate a hypothesis of the requested computation.

``--instance`` also accepts ``gallery:<name>``, which resolves to that
worked example's primary object, so the shipped examples can be probed
without writing files first.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .extreal import as_extreal, format_scalar, parse_scalar
from .funcrep import (
    GridFunction,
    Interval1D,
    MaxAffine,
    PLConvex1D,
    SampledSet,
    dump_instance,
    effective_domain,
    load_instance,
)
from . import transforms, operators, envelopes, theoremlab


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def parse_probe_grid(spec: str, exact: bool = True) -> tuple:
    """Evenly spaced points from a "start:stop:count" description."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise _UsageError(f"probe grid {spec!r} is not start:stop:count")
    try:
        count = int(parts[2])
    except ValueError:
        raise _UsageError(f"probe count {parts[2]!r} is not an integer")
    if count < 1:
        raise _UsageError("probe count must be at least 1")
    try:
        start = parse_scalar(parts[0], exact=exact).finite()
        stop = parse_scalar(parts[1], exact=exact).finite()
    except (ValueError, TypeError) as e:
        raise _UsageError(str(e))
    if not exact:
        start, stop = float(start), float(stop)
    if count == 1:
        return (start,)
    step = (stop - start) / (count - 1)
    pts = [start + step * k for k in range(count)]
    pts[-1] = stop  # exact endpoint even for float grids
    return tuple(pts)


_GALLERY_MAIN_KEYS = ("instance", "f", "graph", "hull")


def _resolve_instance(ref: str):
    if ref.startswith("gallery:"):
        g = theoremlab.gallery(ref[len("gallery:"):])
        for key in _GALLERY_MAIN_KEYS:
            if key in g.objects:
                return g.objects[key]
        raise KeyError(f"gallery {g.name!r} carries no loadable object")
    with open(ref, "r", encoding="utf-8") as fh:
        d = json.load(fh)
    if isinstance(d, dict) and d.get("kind") == "opgraph":
        return operators.graph_load(d)
    return load_instance(d)


def _backend_for(inst) -> str:
    forced = os.environ.get("ENVCALC_BACKEND")
    if forced is not None:
        if forced not in ("exact", "grid"):
            raise _UsageError(f"ENVCALC_BACKEND must be exact or grid, got {forced!r}")
        return forced
    if isinstance(inst, (GridFunction, MaxAffine, SampledSet)):
        return "grid"
    return "exact"


def _emit(out_path, header: str, rows) -> None:
    lines = [header]
    for cells in rows:
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_instance_json(out_path, obj) -> bool:
    if not out_path or not str(out_path).endswith(".json"):
        return False
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(dump_instance(obj), fh, indent=2)
        fh.write("\n")
    return True


def _cell(v) -> str:
    return format_scalar(as_extreal(v))


def _value_rows(points, values, dim: int):
    for p, v in zip(points, values):
        coords = [p] if dim == 1 else list(p)
        yield [_cell(c) for c in coords] + [_cell(v)]


def _default_primal_probes(f: PLConvex1D) -> tuple:
    return theoremlab.primal_probes(f)


def _cross(axis) -> tuple:
    return tuple((a, b) for a in axis for b in axis)


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def _verb_conjugate(args, inst) -> int:
    backend = _backend_for(inst)
    if isinstance(inst, MaxAffine):
        inst = transforms.maxaffine_to_pl(inst)
    if backend == "exact":
        if not isinstance(inst, PLConvex1D):
            raise TypeError("the exact backend needs a piecewise-linear instance")
        g = transforms.conjugate_exact(inst)
        if _emit_instance_json(args.out, g):
            return 0
        if args.dual_grid:
            pts = parse_probe_grid(args.dual_grid, exact=True)
        else:
            pts = _default_primal_probes(g)
        _emit(args.out, "x,value", _value_rows(pts, (g.value_at(p) for p in pts), 1))
        return 0
    if not isinstance(inst, GridFunction):
        raise TypeError("the grid backend needs a grid instance")
    if not args.dual_grid:
        raise _UsageError("conjugate on a grid needs --dual-grid")
    axis = parse_probe_grid(args.dual_grid, exact=False)
    if inst.dim == 1:
        g = transforms.conjugate_llt(inst, axis)
    else:
        g = transforms.conjugate_brute(inst, _cross(axis))
    _emit(args.out, "x,value" if g.dim == 1 else "x,y,value",
          _value_rows(g.points, (v.value for v in g.values), g.dim))
    return 0


def _verb_clconv(args, inst) -> int:
    g = transforms.cl_conv(inst)
    if isinstance(g, PLConvex1D):
        if _emit_instance_json(args.out, g):
            return 0
        pts = (
            parse_probe_grid(args.probes, exact=True)
            if args.probes
            else _default_primal_probes(g)
        )
        _emit(args.out, "x,value", _value_rows(pts, (g.value_at(p) for p in pts), 1))
        return 0
    # the 2D hull comes back as a max of affine pieces
    if not args.probes:
        raise _UsageError("a 2D hull needs --probes to tabulate")
    axis = parse_probe_grid(args.probes, exact=False)
    pts = _cross(axis)
    _emit(args.out, "x,y,value", _value_rows(pts, (g.value_at(p) for p in pts), 2))
    return 0


def _verb_infconv(args, instances) -> int:
    if len(instances) != 2:
        raise _UsageError("infconv needs exactly two --instance files")
    f, g = instances
    h = transforms.inf_conv(f, g)
    if isinstance(h, PLConvex1D):
        if _emit_instance_json(args.out, h):
            return 0
        pts = (
            parse_probe_grid(args.probes, exact=True)
            if args.probes
            else _default_primal_probes(h)
        )
        _emit(args.out, "x,value", _value_rows(pts, (h.value_at(p) for p in pts), 1))
    else:
        _emit(args.out, "x,value" if h.dim == 1 else "x,y,value",
              _value_rows(h.points, (v.value for v in h.values), h.dim))
    return 0


def _verb_subdiff(args, inst) -> int:
    backend = _backend_for(inst)
    if backend == "exact":
        if not isinstance(inst, PLConvex1D):
            raise TypeError("the exact backend needs a piecewise-linear instance")
        pts = (
            parse_probe_grid(args.probes, exact=True)
            if args.probes
            else _default_primal_probes(inst)
        )
        rows = []
        for x in pts:
            iv = operators.subdiff_exact(inst, x)
            if iv is None:
                rows.append([_cell(x), "", ""])
            else:
                lo = "-inf" if iv.lo is None else _cell(iv.lo)
                hi = "inf" if iv.hi is None else _cell(iv.hi)
                rows.append([_cell(x), lo, hi])
        _emit(args.out, "x,lo,hi", rows)
        return 0
    if not isinstance(inst, GridFunction):
        raise TypeError("the grid backend needs a grid instance")
    if not args.dual_grid:
        raise _UsageError("subdiff on a grid needs --dual-grid")
    tol = args.tolerance if args.tolerance is not None else 0.0
    axis = parse_probe_grid(args.dual_grid, exact=False)
    duals = axis if inst.dim == 1 else _cross(axis)
    rows = []
    for p, _v in inst.finite_items():
        for s in duals:
            if operators.grid_subdiff_test(inst, p, s, tol=tol):
                coords = [p] if inst.dim == 1 else list(p)
                dcoords = [s] if inst.dim == 1 else list(s)
                rows.append([_cell(c) for c in coords + dcoords])
    _emit(args.out, "x,xstar" if inst.dim == 1 else "x1,x2,xstar1,xstar2", rows)
    return 0


def _verb_fitz(args, inst) -> int:
    if not args.probes or not args.dual_grid:
        raise _UsageError("fitz needs --probes and --dual-grid")
    if isinstance(inst, operators.OperatorGraph):
        exact = all(
            not isinstance(c, float)
            for x, y in inst.pairs
            for c in ((x, y) if inst.dim == 1 else (*x, *y))
        )
        xs = parse_probe_grid(args.probes, exact=exact)
        ys = parse_probe_grid(args.dual_grid, exact=exact)
        if inst.dim == 2:
            xs, ys = _cross(xs), _cross(ys)
        rows = []
        for x in xs:
            for y in ys:
                val = operators.fitzpatrick(inst, x, y)
                coords = [x, y] if inst.dim == 1 else [*x, *y]
                rows.append([_cell(c) for c in coords] + [_cell(val)])
        header = "x,xstar,value" if inst.dim == 1 else "x1,x2,xstar1,xstar2,value"
        _emit(args.out, header, rows)
        return 0
    if not isinstance(inst, PLConvex1D):
        raise TypeError("fitz needs a pair graph or a piecewise-linear instance")
    st = operators.subdiff_structure(inst)
    xs = parse_probe_grid(args.probes, exact=True)
    ys = parse_probe_grid(args.dual_grid, exact=True)
    rows = [
        [_cell(x), _cell(y), _cell(operators.fitzpatrick_structured(st, x, y))]
        for x in xs
        for y in ys
    ]
    _emit(args.out, "x,xstar,value", rows)
    return 0


def _verb_envelope(args, inst) -> int:
    if not args.probes:
        raise _UsageError("envelope needs --probes")
    if args.kind == "ncup" and args.n is None:
        raise _UsageError("--kind ncup needs --n")
    if args.kind == "smileeps" and args.eps is None:
        raise _UsageError("--kind smileeps needs --eps")
    if isinstance(inst, operators.OperatorGraph):
        raise TypeError("envelopes need a function instance, not a bare graph")
    backend = _backend_for(inst)
    exact = backend == "exact"
    probes = parse_probe_grid(args.probes, exact=exact)
    duals = (
        parse_probe_grid(args.dual_grid, exact=exact) if args.dual_grid else None
    )
    eps = None
    if args.eps is not None:
        eps = Fraction(args.eps).limit_denominator(10**9) if exact else args.eps
    res = envelopes.envelope_result(
        inst, args.kind, probes, n=args.n, eps=eps, dual_points=duals,
        backend=backend,
    )
    rows = res.table(probes if isinstance(res.carrier, MaxAffine) else None)
    _emit(args.out, "x,value", _value_rows(
        (r[0] for r in rows), (r[1] for r in rows), 1,
    ))
    return 0


def _verb_hull(args, inst) -> int:
    if isinstance(inst, Interval1D):
        hull = envelopes.portable_hull_interval(inst)
    elif isinstance(inst, PLConvex1D):
        hull = envelopes.portable_hull_interval(effective_domain(inst))
    elif isinstance(inst, GridFunction) and inst.dim == 1:
        xs = [p for p, _ in inst.finite_items()]
        if not xs:
            raise ValueError("no finite values to hull")
        hull = Interval1D(Fraction(min(xs)), Fraction(max(xs)))
    else:
        raise TypeError("hull handles intervals and one-dimensional functions")
    if _emit_instance_json(args.out, hull):
        return 0
    lo = "-inf" if hull.lo is None else _cell(hull.lo)
    hi = "inf" if hull.hi is None else _cell(hull.hi)
    _emit(args.out, "lo,hi", [[lo, hi]])
    return 0


def _check_csv(out_path, checks) -> None:
    theoremlab.SuiteReport(0, tuple(checks)).write_csv(out_path)


def _verb_check(args, inst) -> int:
    res = theoremlab.run_check(args.theorem_id, inst)
    line = f"{res.theorem_id:<18} {res.instance:<30} {res.verdict}"
    if res.witness is not None:
        line += f"  at {res.witness!r}"
    print(line)
    if args.out:
        _check_csv(args.out, [res])
    if res.verdict == theoremlab.FAIL:
        return 1
    if res.verdict == theoremlab.NOT_APPLICABLE:
        return 3
    return 0


def _verb_suite(args) -> int:
    ids = args.theorem_ids or None
    if ids:
        for tid in ids:
            if tid not in theoremlab.REGISTRY:
                raise _UsageError(f"unknown theorem id {tid!r}")
    report = theoremlab.run_suite(
        seed=args.seed, n_instances=args.n if args.n is not None else 4,
        theorem_ids=ids,
    )
    sys.stdout.write(report.text())
    if args.out:
        report.write_csv(args.out)
    return 0 if report.all_ok else 1


def _verb_gallery(args) -> int:
    names = (
        theoremlab.GALLERY_NAMES if args.name == "all" else (args.name,)
    )
    checks = []
    bad = False
    for nm in names:
        g = theoremlab.gallery(nm)
        print(f"{nm}: {g.summary}")
        for c in g.checks:
            print(f"  {c.theorem_id:<40} {c.verdict}")
            checks.append(c)
            bad = bad or c.verdict == theoremlab.FAIL
    if args.out:
        _check_csv(args.out, checks)
    return 1 if bad else 0


_BENCH_SIZES = tuple(2**k for k in range(10, 17))


def _verb_bench(args) -> int:
    rows = []
    for n in _BENCH_SIZES:
        xs = [-4.0 + 8.0 * k / (n - 1) for k in range(n)]
        vals = [x * x for x in xs]
        f = GridFunction(1, tuple(xs), tuple(vals))
        duals = tuple(-8.0 + 16.0 * k / (n - 1) for k in range(n))
        t0 = time.perf_counter()
        gb = transforms.conjugate_brute(f, duals)
        tb = time.perf_counter() - t0
        t0 = time.perf_counter()
        gl = transforms.conjugate_llt(f, duals)
        tl = time.perf_counter() - t0
        diff = max(
            abs(a.value - b.value) for a, b in zip(gb.values, gl.values)
        )
        ratio = tb / tl if tl > 0 else float("inf")
        rows.append([
            str(n), f"{tb:.6f}", f"{tl:.6f}", f"{ratio:.2f}", f"{diff:.3e}",
        ])
    _emit(args.out, "n,brute_seconds,llt_seconds,ratio,max_abs_diff", rows)
    return 0


# ---------------------------------------------------------------------------
# argument surface
# ---------------------------------------------------------------------------


def _add_common(p, instance=True):
    if instance:
        p.add_argument("--instance", action="append", default=[],
                       help="instance JSON path, or gallery:<name>")
    p.add_argument("--probes", help="primal grid start:stop:count")
    p.add_argument("--dual-grid", dest="dual_grid",
                   help="dual grid start:stop:count")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--out", help="CSV output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="envcalc",
        description="convex transforms, envelope calculus, and theorem suites",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    for verb in ("conjugate", "clconv", "subdiff", "hull"):
        _add_common(sub.add_parser(verb))
    _add_common(sub.add_parser("infconv"))
    _add_common(sub.add_parser("fitz"))

    pe = sub.add_parser("envelope")
    _add_common(pe)
    pe.add_argument("--kind", required=True,
                    choices=("cup", "sharp", "starcup", "circ", "ncup",
                             "smile", "smileeps"))
    pe.add_argument("--n", "-n", type=int, default=None)
    pe.add_argument("--eps", type=float, default=None)

    pc = sub.add_parser("check")
    pc.add_argument("theorem_id")
    _add_common(pc)

    ps = sub.add_parser("suite")
    ps.add_argument("theorem_ids", nargs="*")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--n", "-n", type=int, default=None)
    ps.add_argument("--out")

    pg = sub.add_parser("gallery")
    pg.add_argument("name", nargs="?", default="all")
    pg.add_argument("--out")

    pb = sub.add_parser("bench")
    pb.add_argument("--out")
    return ap


_VALUE_FLAGS = ("--probes", "--dual-grid", "--eps", "--tolerance")


def _join_value_flags(argv) -> list:
    # lets grid specs and numbers start with a dash: --probes -5:5:11
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_join_value_flags(argv))
    except SystemExit as e:
        return int(e.code or 0)

    try:
        instances = [
            _resolve_instance(ref) for ref in getattr(args, "instance", [])
        ]
        if args.verb == "check" and args.theorem_id not in theoremlab.REGISTRY:
            raise _UsageError(f"unknown theorem id {args.theorem_id!r}")
        if args.verb == "gallery" and args.name != "all" \
                and args.name not in theoremlab.GALLERY_NAMES:
            raise _UsageError(f"unknown gallery {args.name!r}")
        if args.verb in ("conjugate", "clconv", "subdiff", "fitz",
                         "envelope", "hull", "check"):
            if len(instances) != 1:
                raise _UsageError(f"{args.verb} needs exactly one --instance")
    except (_UsageError, OSError, KeyError, json.JSONDecodeError) as e:
        print(f"envcalc: {e}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as e:
        # unparseable instance contents are an input problem, not a math one
        print(f"envcalc: {e}", file=sys.stderr)
        return 2

    try:
        if args.verb == "conjugate":
            return _verb_conjugate(args, instances[0])
        if args.verb == "clconv":
            return _verb_clconv(args, instances[0])
        if args.verb == "infconv":
            return _verb_infconv(args, instances)
        if args.verb == "subdiff":
            return _verb_subdiff(args, instances[0])
        if args.verb == "fitz":
            return _verb_fitz(args, instances[0])
        if args.verb == "envelope":
            return _verb_envelope(args, instances[0])
        if args.verb == "hull":
            return _verb_hull(args, instances[0])
        if args.verb == "check":
            return _verb_check(args, instances[0])
        if args.verb == "suite":
            return _verb_suite(args)
        if args.verb == "gallery":
            return _verb_gallery(args)
        if args.verb == "bench":
            return _verb_bench(args)
        raise _UsageError(f"unknown verb {args.verb!r}")
    except _UsageError as e:
        print(f"envcalc: {e}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as e:
        print(f"envcalc: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
