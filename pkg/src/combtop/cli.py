"""Command-line front end.

Every command reads the documented file formats, runs the library, and
prints a deterministic report: ``key=value`` lines in documented order
(``--plain``, the default) or one JSON object with the same keys
(``--json``).  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import geometry as geo
from . import maps as mp
from . import multispace as ms
from . import words as wd
from .errors import CombTopError


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CombTopError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(args, pairs: list[tuple[str, object]]) -> None:
    if args.json:
        def conv(v):
            if isinstance(v, bool) or isinstance(v, (int, float, str)):
                return v
            return str(v)
        print(json.dumps({k: conv(v) for k, v in pairs}))
        return
    for k, v in pairs:
        if isinstance(v, bool):
            v = "true" if v else "false"
        print(f"{k}={v}")


def _verbose(args, msg: str) -> None:
    if args.verbose:
        print(msg, file=sys.stderr)


# --------------------------------------------------------------------------
# word commands


def cmd_word_classify(args) -> list[tuple[str, object]]:
    w = wd.parse_word(_read(args.input))
    form = wd.classify(w)
    return [("form", form.kind), ("genus", form.genus),
            ("chi", wd.corner_trace_euler(w)),
            ("orientable", wd.is_orientable_word(w))]


def cmd_word_normalize(args) -> list[tuple[str, object]]:
    w = wd.parse_word(_read(args.input))
    res = wd.normalize_with_trace(w, args.step_limit)
    out: list[tuple[str, object]] = [
        ("form", res.form.kind), ("genus", res.form.genus),
        ("complete", res.complete), ("steps", len(res.moves))]
    if res.complete:
        final = wd.replay(w, res.moves)
        out.append(("normal_word", str(final)))
    out.append(("trace", " ".join(m.code() for m in res.moves)))
    return out


# --------------------------------------------------------------------------
# map commands


def cmd_map_analyze(args) -> list[tuple[str, object]]:
    m = mp.parse_map_file(_read(args.input))
    c = mp.census(m)
    lengths = sorted(f.length for f in mp.faces(m))
    return [("nu", c.nu), ("eps", c.eps), ("phi", c.phi), ("chi", c.chi),
            ("orientable", c.orientable), ("genus", c.genus),
            ("face_lengths", ",".join(str(x) for x in lengths))]


def cmd_map_dual(args) -> list[tuple[str, object]]:
    m = mp.parse_map_file(_read(args.input))
    d = mp.dual(m)
    sys.stdout.write(mp.format_map_file(d))
    return []


# --------------------------------------------------------------------------
# graph commands


def cmd_graph_genus(args) -> list[tuple[str, object]]:
    g = mp.parse_graph_file(_read(args.input))
    genus, systems = mp.rotation_genus(g, args.guard)
    return [("genus", genus), ("systems", systems)]


def cmd_graph_planar(args) -> list[tuple[str, object]]:
    g = mp.parse_graph_file(_read(args.input))
    genus, systems = mp.rotation_genus(g, args.guard, stop_at=0)
    return [("planar", genus == 0), ("systems", systems)]


def cmd_graph_multiembed(args) -> list[tuple[str, object]]:
    g = mp.parse_graph_file(_read(args.graph))
    blocks = mp.parse_blocks_file(_read(args.blocks), g)
    rep = mp.check_multi_embedding(g, blocks, args.guard)
    return [("ok", rep.ok),
            ("violation", rep.violation or "none"),
            ("detail", rep.detail)]


# --------------------------------------------------------------------------
# geometry commands


def _parse_geometry(text: str) -> geo.MapGeometry:
    m = mp.parse_map_file(text)
    mu: dict[str, geo.Angle] = {}
    for no, ln in enumerate(text.splitlines(), 1):
        ln = ln.strip()
        if not ln.startswith("mu "):
            continue
        parts = ln.split()
        if len(parts) != 4 or parts[3] != "pi":
            raise geo.GeometryError(
                f"line {no}: expected 'mu <vertex> <num>/<den> pi'")
        frac = Fraction(parts[2])
        mu[parts[1]] = geo.Angle.exact(frac.numerator, frac.denominator)
    return geo.new_geometry(m, mu)


def cmd_geom_classify(args) -> list[tuple[str, object]]:
    g = _parse_geometry(_read(args.input))
    rows = []
    for v in g.vertices():
        rows.append((v.key, classify_kind := geo.classify_vertex(g, v.key)))
    if args.json:
        print(json.dumps({k: c.kind.value for k, c in rows}))
    else:
        for k, c in rows:
            print(f"{k} {c.kind.value}")
    return []


def cmd_geom_boundary(args) -> list[tuple[str, object]]:
    g = _parse_geometry(_read(args.input))
    keys = [k for k in args.remove.split(",") if k]
    b = geo.with_boundary(g, keys)
    return [("ok", True), ("removed", ",".join(b.removed)),
            ("retained_faces", len(b.retained_faces()))]


def cmd_splane_query(args) -> list[tuple[str, object]]:
    pts: dict[str, geo.Point] = {}
    queries: list[tuple[str, list[geo.Point]]] = []
    for no, ln in enumerate(_read(args.input).splitlines(), 1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if parts[0] == "point" and len(parts) == 4:
            pts[parts[1]] = geo.point(Fraction(parts[2]), Fraction(parts[3]))
        elif parts[0] == "query" and parts[1] == "incidence" and len(parts) == 6:
            queries.append(("incidence",
                            [geo.point(Fraction(parts[2]), Fraction(parts[3])),
                             geo.point(Fraction(parts[4]), Fraction(parts[5]))]))
        elif parts[0] == "query" and parts[1] == "parallel" and len(parts) == 8:
            coords = [Fraction(p) for p in parts[2:]]
            queries.append(("parallel",
                            [geo.point(coords[0], coords[1]),
                             geo.point(coords[2], coords[3]),
                             geo.point(coords[4], coords[5])]))
        else:
            raise geo.SPlaneError(f"line {no}: malformed line {ln!r}")
    for name in ("A", "B", "C"):
        if name not in pts:
            raise geo.SPlaneError(f"missing marked point {name}")
    cfg = geo.SPlaneConfig(pts["A"], pts["B"], pts["C"])
    out: list[tuple[str, object]] = []
    for idx, (kind, ps) in enumerate(queries, 1):
        if kind == "incidence":
            val = geo.s_line_through(cfg, ps[0], ps[1])
        else:
            val = geo.s_parallels_through(cfg, geo.SLine(ps[0], ps[1]), ps[2])
        out.append((f"q{idx}", val))
    return out


# --------------------------------------------------------------------------
# multigroup commands


def cmd_mgroup_validate(args) -> list[tuple[str, object]]:
    text = _read(args.input)
    try:
        ms.parse_multigroup_file(text)
    except ms.MultiGroupError as exc:
        return [("ok", False), ("violation", str(exc))]
    return [("ok", True), ("violation", "none")]


def cmd_mgroup_lagrange(args) -> list[tuple[str, object]]:
    g, h = ms.parse_multigroup_file(_read(args.input))
    if h is None:
        raise ms.MultiGroupError("file defines no sub-multigroup (sub lines)")
    res = ms.lagrange_decomposition(g, h)
    out: list[tuple[str, object]] = [
        ("T", ",".join(res.representatives)),
        ("cosets", len(res.cosets))]
    for rep, coset in res.cosets:
        out.append((f"coset.{rep}", ",".join(coset)))
    return out


def cmd_mgroup_series(args) -> list[tuple[str, object]]:
    g, _ = ms.parse_multigroup_file(_read(args.input))
    lengths = ms.maximal_normal_series_lengths(g, args.guard)
    return [("lengths", ",".join(str(x) for x in sorted(lengths))),
            ("singleton", len(lengths) == 1)]


def cmd_metric_fixpoints(args) -> list[tuple[str, object]]:
    space, t = ms.parse_fixpoint_file(_read(args.input))
    pts = ms.fixed_points(space, t, seeds_per_part=args.seeds, tol=args.tol)
    return [("count", len(pts)),
            ("points", ",".join(f"{p:.12g}" for p in pts))]


# --------------------------------------------------------------------------
# parser


def _add_format_flags(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--plain", action="store_true", default=False)
    grp.add_argument("--json", action="store_true", default=False)
    p.add_argument("--verbose", action="store_true", default=False)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="combtop",
        description="surface words, combinatorial maps, map geometries "
                    "and multi-spaces")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **extra):
        p = sub.add_parser(name)
        _add_format_flags(p)
        for flag, kw in extra.items():
            p.add_argument(flag, **kw)
        p.set_defaults(fn=fn)
        return p

    p = add("word-classify", cmd_word_classify)
    p.add_argument("input")
    p = add("word-normalize", cmd_word_normalize)
    p.add_argument("input")
    p.add_argument("--step-limit", type=int, default=10_000)
    p = add("map-analyze", cmd_map_analyze)
    p.add_argument("input")
    p = add("map-dual", cmd_map_dual)
    p.add_argument("input")
    p = add("graph-genus", cmd_graph_genus)
    p.add_argument("input")
    p.add_argument("--guard", type=int, default=10_000_000)
    p = add("graph-planar", cmd_graph_planar)
    p.add_argument("input")
    p.add_argument("--guard", type=int, default=10_000_000)
    p = add("graph-multiembed", cmd_graph_multiembed)
    p.add_argument("graph")
    p.add_argument("blocks")
    p.add_argument("--guard", type=int, default=10_000_000)
    p = add("geom-classify", cmd_geom_classify)
    p.add_argument("input")
    p = add("geom-boundary", cmd_geom_boundary)
    p.add_argument("input")
    p.add_argument("--remove", required=True,
                   help="comma-separated face keys")
    p = add("splane-query", cmd_splane_query)
    p.add_argument("input")
    p = add("mgroup-validate", cmd_mgroup_validate)
    p.add_argument("input")
    p = add("mgroup-lagrange", cmd_mgroup_lagrange)
    p.add_argument("input")
    p = add("mgroup-series", cmd_mgroup_series)
    p.add_argument("input")
    p.add_argument("--guard", type=int, default=12)
    p = add("metric-fixpoints", cmd_metric_fixpoints)
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--seeds", type=int, default=5)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        pairs = args.fn(args)
    except CombTopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if pairs:
        _emit(args, pairs)
    return 0


if __name__ == "__main__":
    sys.exit(main())
