"""Command-line experiment runner.

Every subcommand prints a list of ClaimReport records (JSON by default, or
CSV) and exits 0 when all claims hold or are vacuous, 1 when a claim with a
true premise fails and 2 on usage, input or budget errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from fqlab import beck, distances, incidence, pldist
from fqlab.bigraph import mixing_trials, third_eigenvalue_estimate
from fqlab.errors import BudgetExceeded, DegenerateInput
from fqlab.ffield import FieldCtx, make_field, minus_one_is_square, nonzero_squares
from fqlab.report import ClaimReport, dumps_reports, timed
from fqlab.space import all_points, index_to_point
from fqlab.varieties import VarietyFamily, load_family, schwartz_zippel_trials

DEFAULTS = {"p": 3, "e": 1, "seed": 0, "samples": 200, "budget": None, "format": "json",
            "out": None, "threads": 1, "d": 2, "k": 1, "c": None}


class UsageError(Exception):
    pass


# -- input files -------------------------------------------------------------------

def read_rows(path: str) -> list[list[int]]:
    """Integer rows from a JSON list of lists or a CSV file (one row per line, '#' comments)."""
    text = Path(path).read_text()
    if path.endswith(".json") or text.lstrip().startswith("["):
        rows = json.loads(text)
    else:
        rows = [r for r in csv.reader(l for l in text.splitlines()
                                      if l.strip() and not l.lstrip().startswith("#"))]
    try:
        return [[int(x) for x in r] for r in rows]
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: rows must contain integers ({exc})") from None


def parse_inline_points(text: str) -> list[list[int]]:
    """'0,0,0;1,0,0' -> [[0,0,0],[1,0,0]]."""
    try:
        return [[int(x) for x in part.split(",")] for part in text.split(";") if part.strip()]
    except ValueError:
        raise UsageError(f"cannot parse points {text!r}") from None


def check_points(ctx: FieldCtx, rows: list[list[int]], n: int) -> np.ndarray:
    if any(len(r) != n for r in rows):
        raise UsageError(f"points must have {n} coordinates")
    P = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    if P.size and (P.min() < 0 or P.max() >= ctx.q):
        raise UsageError(f"coordinates must be canonical indices in [0, {ctx.q})")
    return P


def load_points(args, ctx: FieldCtx, n: int, default: Callable[[], np.ndarray]) -> np.ndarray:
    if getattr(args, "pts", None):
        return check_points(ctx, parse_inline_points(args.pts), n)
    if getattr(args, "points", None):
        return check_points(ctx, read_rows(args.points), n)
    return default()


def random_points(ctx: FieldCtx, n: int, size: int, seed: int) -> np.ndarray:
    total = ctx.q**n
    if not 0 <= size <= total:
        raise UsageError(f"cannot draw {size} distinct points from F_{ctx.q}^{n}")
    rng = np.random.default_rng(seed)
    return index_to_point(np.sort(rng.choice(total, size, replace=False)), ctx.q, n)


def load_config(args) -> None:
    """Fill unset flags from --config; explicit command-line flags win."""
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.config}: invalid JSON ({exc})") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        if "q" in cfg and "p" not in cfg:
            cfg["p"], cfg["e"] = _split_order(int(cfg["q"]))
        if "sizes" in cfg and getattr(args, "size", None) is None and hasattr(args, "size"):
            sizes = cfg["sizes"]
            args.size = int(sizes[0] if isinstance(sizes, list) else sizes)
    for key, val in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, val))
    for key in ("family", "mode"):
        if hasattr(args, key) and getattr(args, key) is None and key in cfg:
            setattr(args, key, cfg[key])
    args.family_spec = cfg.get("family") if isinstance(cfg.get("family"), dict) else None


def _split_order(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e = round(math.log(q, p))
            if p**e != q:
                raise UsageError(f"q = {q} is not a prime power")
            return p, e
    raise UsageError(f"q = {q} is not a prime power")


def _form(args, ctx: FieldCtx, d: int):
    if getattr(args, "form", None):
        F = distances.load_form(ctx, json.loads(Path(args.form).read_text()))
        if F.d != d:
            raise UsageError(f"form has dimension {F.d}, expected {d}")
        return F
    return distances.NonDegenerateForm.distance(ctx, d)


def _family(args, ctx: FieldCtx) -> VarietyFamily:
    if args.family_spec is not None:
        return load_family(ctx, args.family_spec)
    fam = args.family or "flats"
    if fam == "flats":
        return VarietyFamily.flats(ctx, args.d, args.k)
    if fam == "spheres":
        return VarietyFamily.spheres(ctx, args.d)
    p = Path(fam)
    if p.suffix == ".json" and p.exists():
        return load_family(ctx, json.loads(p.read_text()))
    raise UsageError(f"unknown family {fam!r} (flats, spheres or a JSON file)")


def _hyperplanes(path: str | None, ctx: FieldCtx, d: int) -> list[pldist.HyperplaneRep]:
    if path is None:
        return pldist.all_hyperplanes(ctx, d)
    rows = read_rows(path)
    if any(len(r) != d + 1 for r in rows):
        raise UsageError(f"hyperplane rows need {d + 1} coefficients")
    return [pldist.HyperplaneRep(tuple(r)) for r in rows]


# -- subcommands -----------------------------------------------------------------

def cmd_field_info(args, ctx):
    with timed() as ms:
        sq = nonzero_squares(ctx)
        x = ctx.elements()
        fermat = bool(np.all(ctx.pow(x, ctx.q) == x))
    return [ClaimReport(
        "field_info", {"p": ctx.p, "e": ctx.e, "q": ctx.q}, str(len(sq)), str((ctx.q - 1) // 2),
        len(sq) == (ctx.q - 1) // 2 and fermat, runtime_ms=ms[0],
        details={"modulus": list(ctx.modulus), "minus_one_square": minus_one_is_square(ctx),
                 "smallest_nonsquare": ctx.smallest_nonsquare, "fermat": fermat},
    )]


def cmd_verify_identity(args, ctx):
    fam = _family(args, ctx)
    g = incidence.build_point_variety_graph(fam, args.budget)
    mode = args.mode if args.mode in ("full", "sampled") else "auto"
    return [incidence.verify_cube_identity(fam, g, mode=mode, seed=args.seed)]


def cmd_verify_pl_identity(args, ctx):
    pl = pldist.build_pl_graph(ctx, args.budget)
    ing = pldist.build_in_graph(ctx, pl, args.budget)
    out = [pldist.verify_pl_identity(ctx, pl, ing)]
    if args.refined:
        out.append(pldist.verify_pl_identity(ctx, pl, ing, refined=True))
    if args.codegrees:
        pairs = "all" if args.pairs is None else args.pairs
        out.append(pldist.codegree_table_comparison(pl, pairs, seed=args.seed))
        if args.refined:
            out.append(pldist.codegree_table_comparison(pl, pairs, seed=args.seed, refined=True))
    return out


def cmd_mixing_check(args, ctx):
    fam = _family(args, ctx)
    g = incidence.build_point_variety_graph(fam, args.budget)
    if args.lambda3 is not None:
        lam = args.lambda3
    elif args.estimate:
        lam = third_eigenvalue_estimate(g, seed=args.seed)
    else:
        lam = ctx.q ** (fam.d * fam.k / 2)
    return [mixing_trials(g, lam, args.samples, args.seed)]


def cmd_incidence_bound(args, ctx):
    fam = _family(args, ctx)
    mode = args.mode or "V"
    if mode not in ("V", "W"):
        raise UsageError("--mode must be V or W")
    g = incidence.build_point_variety_graph(fam, args.budget)
    return [incidence.incidence_trials(fam, args.samples, args.seed, mode=mode, graph=g)]


def cmd_pinned(args, ctx):
    d = args.d
    P = load_points(args, ctx, d, lambda: all_points(ctx.q, d))
    return [distances.pinned_theorem_check(P, _form(args, ctx, d), args.c or 0.5)]


def cmd_two_set_pinned(args, ctx):
    d = args.d
    P = load_points(args, ctx, d, lambda: all_points(ctx.q, d))
    Q = check_points(ctx, read_rows(args.points2), d) if args.points2 else P
    return [distances.two_set_pinned_check(P, Q, _form(args, ctx, d))]


def _beck(args, ctx, n: int, default_size: int):
    # the default size is capped at the whole space, where the premise is moot anyway
    size = args.size if args.size is not None else min(default_size, ctx.q**n)
    P = load_points(args, ctx, n, lambda: random_points(ctx, n, size, args.seed))
    seed = None if (args.points or args.pts) else args.seed
    return beck.beck_reports(ctx, P, n, args.min_points, not args.allow_degenerate,
                             args.threads, seed=seed)


def cmd_beck_circles(args, ctx):
    return _beck(args, ctx, 2, 5 * ctx.q)


def cmd_beck_spheres(args, ctx):
    return _beck(args, ctx, 3, 8 * ctx.q**2)


def cmd_beck_radii(args, ctx):
    n = args.dim
    reps = _beck(args, ctx, n, 5 * ctx.q if n == 2 else 8 * ctx.q**2)
    return [r for r in reps if r.claim_name.endswith("_radii")]


def cmd_pl_distances(args, ctx):
    P = load_points(args, ctx, 2, lambda: all_points(ctx.q, 2))
    L = _hyperplanes(args.lines, ctx, 2)
    return [pldist.hyperplane_distance_theorem_check(ctx, P, L, args.c or 0.9)]


def cmd_hyperplane_distances(args, ctx):
    d = args.d
    P = load_points(args, ctx, d, lambda: all_points(ctx.q, d))
    H = _hyperplanes(args.hyperplanes, ctx, d)
    return [pldist.hyperplane_distance_theorem_check(ctx, P, H, args.c or 0.9)]


def cmd_spanned_lines(args, ctx):
    size = args.size if args.size is not None else 3 * ctx.q
    P = load_points(args, ctx, 2, lambda: random_points(ctx, 2, size, args.seed))
    r = pldist.spanned_lines_report(ctx, P)
    if not (args.points or args.pts):
        r.seed = args.seed
    return [r]


def cmd_schwartz_zippel(args, ctx):
    return [schwartz_zippel_trials(ctx, args.d, args.samples, args.seed, args.max_degree)]


def cmd_sphere_through(args, ctx):
    if not args.pts and not args.points:
        raise UsageError("sphere-through needs --pts or --points")
    rows = parse_inline_points(args.pts) if args.pts else read_rows(args.points)
    n = len(rows[0]) if rows else 0
    if n not in (2, 3) or len(rows) != n + 1:
        raise UsageError("give 3 points in F_q^2 or 4 points in F_q^3")
    pts = check_points(ctx, rows, n)
    with timed() as ms:
        s = beck._sphere_through(ctx, pts)
        ok = all(s.contains(ctx, p) for p in pts)
    return [ClaimReport("sphere_through" if n == 3 else "circle_through",
                        {"q": ctx.q, "points": pts.tolist()}, str(s), "contains all inputs", ok,
                        runtime_ms=ms[0], details={"center": list(s.center), "r": s.r})]


COMMANDS: dict[str, tuple[Callable, str]] = {
    "field-info": (cmd_field_info, "field parameters, |SQ| and Fermat check"),
    "verify-identity": (cmd_verify_identity, "length-three walk identity of the point-variety graph"),
    "verify-pl-identity": (cmd_verify_pl_identity, "walk identity of the point-line distance graph"),
    "mixing-check": (cmd_mixing_check, "expander mixing on seeded subset pairs"),
    "incidence-bound": (cmd_incidence_bound, "point-variety incidence bound on seeded pairs"),
    "pinned": (cmd_pinned, "pinned-value theorem for a non-degenerate form"),
    "two-set-pinned": (cmd_two_set_pinned, "two-set pinned-value corollary"),
    "beck-circles": (cmd_beck_circles, "distinct circles and circle radii"),
    "beck-spheres": (cmd_beck_spheres, "distinct spheres and sphere radii"),
    "beck-radii": (cmd_beck_radii, "distinct radii only"),
    "pl-distances": (cmd_pl_distances, "point-line distance sets"),
    "hyperplane-distances": (cmd_hyperplane_distances, "point-hyperplane distance sets"),
    "spanned-lines": (cmd_spanned_lines, "lines spanned by a planar point set"),
    "schwartz-zippel": (cmd_schwartz_zippel, "zero counts of seeded random polynomials"),
    "sphere-through": (cmd_sphere_through, "circle or sphere through given points"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--p", type=int, help="field characteristic (default 3)")
    g.add_argument("--e", type=int, help="extension degree (default 1)")
    g.add_argument("--seed", type=int)
    g.add_argument("--samples", type=int, help="random trials (default 200)")
    g.add_argument("--budget", type=int, help="max adjacency bytes (FQLAB_BUDGET_BYTES overrides)")
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--out", help="write reports here instead of stdout")
    g.add_argument("--threads", type=int, help="worker threads (speed only)")
    g.add_argument("--config", help="experiment config JSON")
    g.add_argument("--no-runtime", action="store_true", help="omit runtime_ms")

    parser = argparse.ArgumentParser(prog="fqlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_)
        if name in ("verify-identity", "mixing-check", "incidence-bound", "pinned",
                    "two-set-pinned", "hyperplane-distances", "schwartz-zippel"):
            sp.add_argument("--d", type=int)
        if name in ("verify-identity", "mixing-check", "incidence-bound"):
            sp.add_argument("--k", type=int)
            sp.add_argument("--family", help="flats, spheres or a family JSON file")
        if name in ("verify-identity", "incidence-bound"):
            sp.add_argument("--mode", help="full/sampled/auto for identities, V/W for incidences")
        if name in ("pinned", "two-set-pinned", "beck-circles", "beck-spheres", "beck-radii",
                    "pl-distances", "hyperplane-distances", "spanned-lines", "sphere-through"):
            sp.add_argument("--points", help="point file (CSV or JSON rows)")
            sp.add_argument("--pts", help='inline points, e.g. "0,0;1,0;0,1"')
        if name in ("pinned", "pl-distances", "hyperplane-distances"):
            sp.add_argument("--c", type=float)
        if name in ("pinned", "two-set-pinned"):
            sp.add_argument("--form", help="non-degenerate form JSON (default: distance)")
        if name == "two-set-pinned":
            sp.add_argument("--points2", help="second point file (default: same as --points)")
        if name in ("beck-circles", "beck-spheres", "beck-radii", "spanned-lines"):
            sp.add_argument("--size", type=int, help="random point count when no file is given")
        if name in ("beck-circles", "beck-spheres", "beck-radii"):
            sp.add_argument("--min-points", type=int)
            sp.add_argument("--allow-degenerate", action="store_true",
                            help="count objects whose points lie on one hyperplane")
        if name == "beck-radii":
            sp.add_argument("--dim", type=int, choices=(2, 3), default=3)
        if name == "mixing-check":
            sp.add_argument("--lambda3", type=float)
            sp.add_argument("--estimate", action="store_true",
                            help="use the power-iteration estimate instead of q^{dk/2}")
        if name == "verify-pl-identity":
            sp.add_argument("--refined", action="store_true")
            sp.add_argument("--codegrees", action="store_true", help="also compare codegree cases")
            sp.add_argument("--pairs", type=int, help="sample this many pairs instead of all")
        if name == "pl-distances":
            sp.add_argument("--lines", help="line coefficient file (default: all non-degenerate)")
        if name == "hyperplane-distances":
            sp.add_argument("--hyperplanes", help="coefficient file (default: all non-degenerate)")
        if name == "schwartz-zippel":
            sp.add_argument("--max-degree", type=int, default=4)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        load_config(args)
        ctx = make_field(args.p, args.e)
        if args.c is not None and not 0 < args.c < 1:
            raise UsageError("--c must lie in (0, 1)")
        reports = COMMANDS[args.command][0](args, ctx)
    except (UsageError, ValueError, BudgetExceeded, DegenerateInput, OSError, KeyError,
            OverflowError) as exc:
        print(f"fqlab {args.command}: error: {exc}", file=stderr)
        return 2
    text = dumps_reports(reports, args.format, include_runtime=not args.no_runtime)
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return 1 if any(r.failed for r in reports) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
