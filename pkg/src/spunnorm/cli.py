"""Command-line front end: ``spunnorm <subcommand> [input] [flags]``.

Exit codes: 0 on success, 1 on bad input, 2 when an internal invariant fails.
"""
import argparse
import json
import sys
from pathlib import Path

from . import linalg
from .boundary import (BoundaryError, boundary_class, pairing, pairing_via_boundary,
                       torus_slope)
from .examples import BUNDLED, SearchFailure, bundled_path, generate, load_curves, to_reference
from .links import LinkError, build_link, framing_curves
from .polytope import extreme_rays, pf_components, solution_cone, theorem2_report
from .qmatch import dimension_report, kernel_basis, qmatching_matrix
from .surface import SurfaceError, reconstruct_core
from .triangulation import (TriangulationError, double_cover, load, parse_triangulation,
                            skeleton_summary, validate)


class InputError(Exception):
    pass


class InvariantError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def read_input(name):
    path = Path(name)
    try:
        if path.exists():
            tri = load(path)
        elif name in BUNDLED:
            tri = parse_triangulation(bundled_path(name).read_text(encoding="utf-8"))
        else:
            raise InputError(f"no such file or bundled example: {name}")
    except TriangulationError as exc:
        raise InputError(str(exc))
    report = validate(tri)
    if not report.valid:
        raise InputError(f"invalid triangulation:\n{report}")
    return tri


def parse_csv(text, n=None):
    try:
        vec = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}")
    if n is not None and len(vec) != n:
        raise InputError(f"expected {n} entries, got {len(vec)}")
    return vec


def csv(vec):
    return ",".join(str(x) for x in vec)


def _reference_columns(tri):
    """Column map to the printed figure-eight order, if tri is the bundled one."""
    try:
        ref = parse_triangulation(bundled_path("fig8").read_text(encoding="utf-8"))
        doc = json.loads(bundled_path("fig8_curves").read_text(encoding="utf-8"))
    except (OSError, TriangulationError):
        return None
    return tuple(doc["reference_columns"]) if ref.tets == tri.tets else None


def equation(row):
    terms = []
    for i, c in enumerate(row):
        if not c:
            continue
        name = f"x{i // 3}" + "'" * (i % 3)
        mag = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, mag + name))
    if not terms:
        return "0 = 0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out + " = 0"


def independent_equations(rows, ncols):
    chosen = []
    for r in rows:
        if any(r) and linalg.rank(chosen + [r], ncols) > len(chosen):
            chosen.append(r)
    out = []
    for r in chosen:
        p = linalg.primitive(r)
        # leading coefficient positive
        if next(x for x in p if x) < 0:
            p = tuple(-x for x in p)
        out.append(p)
    return out


# -- subcommands -----------------------------------------------------------------

def cmd_info(tri, args):
    s = skeleton_summary(tri)
    links = []
    for vc in tri.vertices:
        L = build_link(tri, vc.index)
        links.append({"vertex": vc.index, "triangles": len(L.triangles), "chi": L.chi,
                      "orientable": L.orientable, "genus": L.genus})
    data = {"name": tri.name, "t": s.t, "e": s.e, "v": s.v, "f": s.f, "v_o": s.v_o,
            "v_n": s.v_n, "chi": s.chi, "orientable": s.orientable,
            "edge_degrees": [e.degree for e in tri.edges], "links": links}
    lines = [f"name: {tri.name}",
             f"t={s.t} e={s.e} v={s.v} f={s.f} v_o={s.v_o} v_n={s.v_n} chi={s.chi} orientable={s.orientable}",
             "edge degrees: " + " ".join(str(d) for d in data["edge_degrees"])]
    for L in links:
        lines.append(f"vertex {L['vertex']}: link triangles={L['triangles']} chi={L['chi']} "
                     f"orientable={L['orientable']} genus={L['genus']}")
    return data, lines


def cmd_qmatch(tri, args):
    B = qmatching_matrix(tri)
    rep = dimension_report(tri)
    eqs = independent_equations(list(B.rows), B.ncols)
    data = {"rows": [list(r) for r in B.rows], "edges": list(B.edges),
            "equations": [list(e) for e in eqs], "rank_B": rep.rank_B, "dim_Q": rep.dim_Q,
            "dim_PQ": rep.dim_Q - 1, "e_minus_v_o": rep.e_minus_v_o,
            "by_vertices": rep.by_vertices, "by_chi": rep.by_chi,
            "rank_ok": rep.rank_ok, "dim_ok": rep.dim_ok}
    lines = ["matrix B (rows = edge classes, columns = tet-major quad types):"]
    lines += [f"  edge {e}: {csv(r)}" for e, r in zip(B.edges, B.rows)]
    lines.append("independent equations:")
    lines += ["  " + equation(e) for e in eqs]
    lines.append(f"rank B={rep.rank_B} (e - v_o = {rep.e_minus_v_o})")
    lines.append(f"dim Q={rep.dim_Q} dim PQ={rep.dim_Q - 1} "
                 f"(v_o - e + 3t = {rep.by_vertices}, chi + 2t - v_n = {rep.by_chi})")
    if not (rep.rank_ok and rep.dim_ok):
        raise InvariantError("dimension formulas violated:\n" + "\n".join(lines))
    return data, lines


def cmd_kernel(tri, args):
    K = kernel_basis(qmatching_matrix(tri))
    return {"basis": [list(k) for k in K]}, ["basis of Q(T):"] + ["  " + csv(k) for k in K]


def cmd_vertices(tri, args):
    rays = extreme_rays(solution_cone(tri))
    return ({"rays": [list(r) for r in rays]},
            [f"{len(rays)} extreme rays of the nonnegative cone:"] + ["  " + csv(r) for r in rays])


def cmd_admissible(tri, args):
    comps = pf_components(tri)
    rep = theorem2_report(tri, comps)
    cols = _reference_columns(tri)
    data = {"components": [], "theorem2": [], "reference_columns": list(cols) if cols else None}
    lines = [f"{len(comps)} admissible components"]
    for c in comps:
        d = c.to_json()
        d["dim_kernel"] = c.dim_kernel
        d["dim_span_kernel"] = c.dim_span_kernel
        if cols:
            d["reference_rays"] = [list(to_reference(cols, r)) for r in c.rays]
        data["components"].append(d)
        lines.append(f"support={csv(c.support)} dim={c.dim} dim_kernel={c.dim_kernel} "
                     f"dim_span_kernel={c.dim_span_kernel} maximal={c.maximal}")
        for i, r in enumerate(c.rays):
            extra = f"  reference order: {csv(to_reference(cols, r))}" if cols else ""
            lines.append(f"  ray {csv(r)}{extra}")
    classes = sorted({r for c in comps for r in c.rays})
    data["classes"] = [list(r) for r in classes]
    lines.append(f"{len(classes)} projective classes of admissible vertex solutions")
    lines.append("dimension bounds:" + (" (no admissible solutions; dim = -1)" if rep.empty else ""))
    for b in rep.checks:
        data["theorem2"].append({"support": list(b.support), "dim": b.dim, "lower": b.lower,
                                 "upper": b.upper, "cap": b.cap, "ok": b.ok,
                                 "literal_upper": b.literal_upper, "literal_ok": b.literal_ok})
        note = "" if b.literal_ok else f" (fails with dim(R cap ker) in place of its span: upper {b.literal_upper})"
        lines.append(f"  {b.lower} <= {b.dim} <= {b.upper}, dim <= {b.cap}: "
                     f"{'ok' if b.ok else 'VIOLATED'}{note}")
    if rep.violations:
        raise InvariantError("\n".join(lines))
    return data, lines


def _curves_for(tri, path):
    if not path:
        return None, {}
    try:
        v, cur, _ = load_curves(path)
        if v >= len(tri.vertices):
            raise InputError(f"curve file names vertex {v}, which does not exist")
        link = build_link(tri, v)
        if not link.orientable:
            raise InputError("curve files are only supported on orientable links")
        return v, {v: framing_curves(link, cur["lambda"], cur["mu"])}
    except (OSError, KeyError, ValueError, LinkError) as exc:
        raise InputError(f"bad curve file: {exc}")


def cmd_boundary(tri, args):
    N = parse_csv(args.solution, 3 * tri.size)
    _, framings = _curves_for(tri, args.curves)
    data = {"solution": list(N), "vertices": []}
    lines = []
    for vc in tri.vertices:
        v = vc.index
        link = build_link(tri, v)
        cs = framings.get(v)
        basis = "framing file" if cs else "non-canonical basis"
        bc = boundary_class(tri, N, v, cs)
        entry = {"vertex": v, "orientable": link.orientable, "coords": list(bc.coords),
                 "basis": basis}
        if link.orientable and link.chi == 0:
            s = torus_slope(tri, N, v, cs)
            entry["slope"] = None if s is None else {"p": s.p, "q": s.q, "d": s.d}
            lines.append(f"vertex {v}: no boundary" if s is None else f"vertex {v}: {s}  [{basis}]")
        elif link.orientable:
            lines.append(f"vertex {v}: boundary class {csv(bc.coords)}  [{basis}]")
        else:
            entry["free_coefficient"] = bc.free_coefficient
            lines.append(f"vertex {v}: non-orientable link, free coefficient {bc.free_coefficient}, "
                         f"cover coordinates {csv(bc.coords)}")
        data["vertices"].append(entry)
    return data, lines


def cmd_surface(tri, args):
    N = parse_csv(args.solution, 3 * tri.size)
    s = reconstruct_core(tri, N, args.padding)
    data = {"chi": s.chi, "orientable": s.orientable,
            "boundary": [[v, c] for v, c in sorted(s.boundary_circles.items())],
            "spins_into": list(s.spin_set), "quads": s.quads, "triangles": s.triangles,
            "components": s.components, "padding": s.padding}
    return data, [s.report(), f"quads={s.quads} triangles={s.triangles} components={s.components} padding={s.padding}"]


def cmd_pairing(tri, args):
    n = 3 * tri.size
    N, L = parse_csv(args.a, n), parse_csv(args.b, n)
    a = pairing(tri, N, L)
    b = pairing_via_boundary(tri, N, L)
    if a != b:
        raise InvariantError(f"pairing {a} disagrees with boundary formula {b}")
    return {"pairing": str(a), "via_boundary": str(b)}, [f"<N,L> = {a} (boundary formula: {b})"]


def cmd_doublecover(tri, args):
    cov = double_cover(tri).triangulation
    s = skeleton_summary(cov)
    if args.out:
        Path(args.out).write_text(cov.dumps() + "\n", encoding="utf-8")
    data = {"t": s.t, "e": s.e, "v": s.v, "orientable": s.orientable, "out": args.out}
    lines = [f"double cover: t={s.t} e={s.e} v={s.v} orientable={s.orientable}"]
    if args.out:
        lines.append(f"written to {args.out}")
    else:
        lines += cov.dumps().splitlines()
        data["triangulation"] = cov.to_json()
    return data, lines


def cmd_selftest(args):
    from .selftest import run_all

    results = run_all()
    data = {"checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}
    lines = [f"{'PASS' if ok else 'FAIL'}  {n}: {d}" for n, ok, d in results]
    if not all(ok for _, ok, _ in results):
        raise InvariantError("\n".join(lines))
    return data, lines


def cmd_generate(args):
    files = [str(p) for p in generate(args.out)]
    return {"files": files}, [f"wrote {f}" for f in files]


COMMANDS = {
    "info": (cmd_info, "skeleton counts and vertex links"),
    "qmatch": (cmd_qmatch, "Q-matching matrix and dimension formulas"),
    "kernel": (cmd_kernel, "basis of the solution space Q(T)"),
    "vertices": (cmd_vertices, "extreme rays of the nonnegative solution cone"),
    "admissible": (cmd_admissible, "admissible components and dimension bounds"),
    "boundary": (cmd_boundary, "boundary curves and slopes of a solution"),
    "surface": (cmd_surface, "reconstruct the compact core of a solution"),
    "pairing": (cmd_pairing, "intersection pairing of two solutions"),
    "doublecover": (cmd_doublecover, "orientable double cover"),
}


def build_parser():
    p = _Parser(prog="spunnorm", description="Spun-normal surface coordinates of ideal triangulations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", help="triangulation file or bundled name "
                        f"({', '.join(n for n in BUNDLED if not n.endswith('curves'))})")
        sp.add_argument("--json", action="store_true", help="JSON output")
        if name in ("boundary", "surface"):
            sp.add_argument("--solution", required=True, help="comma-separated quad coordinates")
        if name == "boundary":
            sp.add_argument("--curves", help="framing curve file for one torus link")
        if name == "surface":
            sp.add_argument("--padding", type=int, help="triangles added at every corner (default: minimum)")
        if name == "pairing":
            sp.add_argument("--a", required=True)
            sp.add_argument("--b", required=True)
        if name == "doublecover":
            sp.add_argument("--out")
    sp = sub.add_parser("selftest", help="run the bundled acceptance checks")
    sp.add_argument("--json", action="store_true")
    sp = sub.add_parser("generate-examples", help="regenerate the example triangulations")
    sp.add_argument("--out", default="examples")
    sp.add_argument("--json", action="store_true")
    return p


def run(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "selftest":
            data, lines = cmd_selftest(args)
        elif args.command == "generate-examples":
            data, lines = cmd_generate(args)
        else:
            tri = read_input(args.input)
            data, lines = COMMANDS[args.command][0](tri, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BoundaryError, SurfaceError, LinkError, TriangulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InvariantError, SearchFailure) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    if args.json:
        out.write(json.dumps(data, indent=1) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
