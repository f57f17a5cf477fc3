"""Command-line front end.

Every subcommand prints a short text summary; ``--json PATH`` also writes the
full report (``--json -`` writes it to stdout instead of the summary).
Exit status: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from luroth.errors import InvalidSurface, LurothError
from luroth.geometry import PointP3
from luroth.moduli import discriminant_pipeline, named_classes
from luroth.nets import SALMON_KINDS, NetOfQuadrics, delta_map, lambda_pfaffian, random_net, salmon_trials
from luroth.polycore.scalar import DEFAULT_PREC, DEFAULT_TOL, from_str, precision, to_str
from luroth.projection import branch_quartic
from luroth.quartics import (
    TernaryQuartic,
    determinant_identity,
    fermat_quartic,
    nodal_class,
    pentalateral_build,
    pentalateral_fit,
    singular_points,
)
from luroth.special_points import cremona_planes, involutory_points, line_profile, non_involutory_points
from luroth.surface import all_lines_27, double_sixes, new_surface, parse_tag, partition_tag
from luroth.verify import STANDARD_BETA, VerifyConfig, report, run_checks, sci

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# argument parsing ---------------------------------------------------------------------


def _scalars(text: str) -> List:
    try:
        return [from_str(s) for s in text.split(",") if s.strip()]
    except (ValueError, TypeError):
        raise UsageError(f"cannot parse number list {text!r}") from None


def _rationals(text: str) -> List[Fraction]:
    try:
        return [Fraction(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _forms(text: str) -> List[List]:
    """'a,b,c;d,e,f;...' -> list of coefficient triples."""
    return [_scalars(chunk) for chunk in text.split(";") if chunk.strip()]


def _common(p: argparse.ArgumentParser, beta: bool = False, seed: bool = False):
    if beta:
        p.add_argument("--beta", default=",".join(map(str, STANDARD_BETA)),
                       help="six distinct rationals, comma separated (default %(default)s)")
    p.add_argument("--prec", type=int, default=DEFAULT_PREC, help="working precision in bits (>= 64)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numeric tolerance (> 0)")
    if seed:
        p.add_argument("--seed", type=int, help="RNG seed (required)")
    p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="luroth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("surface", help="27 lines, double-sixes and Cremona planes of a surface")
    _common(p, beta=True)
    p.add_argument("--no-planes", action="store_true", help="skip the 36 Cremona planes")

    p = sub.add_parser("points", help="involutory and non-involutory points and the profile of a line")
    _common(p, beta=True)
    p.add_argument("--line", default="01|23|45", help="partition tag such as 01|23|45, or a line index 0..26")
    p.add_argument("--no-profile", action="store_true", help="skip the degree-36 profile")

    p = sub.add_parser("branch", help="branch quartic of the projection from a point of the surface")
    _common(p, beta=True, seed=True)
    p.add_argument("--point", help="6 hexahedral or 4 chart coordinates, comma separated")
    p.add_argument("--line", help="with --partner: use the involutory point of this line")
    p.add_argument("--partner", help="skew partner line (tag or index) for --line")
    p.add_argument("--fit-seeds", type=int, default=0, help="if > 0 and the quartic is smooth, try a pentalateral fit")

    p = sub.add_parser("pentalateral", help="build, fit or identity-check pentalateral quartics")
    act = p.add_subparsers(dest="action", required=True)
    q = act.add_parser("build", help="quartic sum_k w_k prod_{j != k} l_j")
    _common(q)
    q.add_argument("--lines", required=True, help="five forms 'a,b,c;...' meaning a x + b y + c z")
    q.add_argument("--weights", required=True, help="five weights, comma separated")
    q = act.add_parser("fit", help="multistart pentalateral fit of a quartic")
    _common(q, seed=True)
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--quartic", help="15 coefficients in the monomial order x^4, x^3y, x^3z, ...")
    src.add_argument("--fermat", action="store_true", help="use x^4 + y^4 + z^4")
    q.add_argument("--seeds", type=int, default=50, help="number of starts")
    q.add_argument("--threshold", type=float, default=1e-8)
    q = act.add_parser("identity", help="determinant identity on random rational pentalaterals")
    _common(q, seed=True)
    q.add_argument("--trials", type=int, default=25)

    p = sub.add_parser("nets", help="nets of quadrics: determinantal quartic, pfaffian, Salmon trials")
    act = p.add_subparsers(dest="action", required=True)
    for name, text in (("delta", "determinantal quartic det(x Q0 + y Q1 + z Q2)"),
                       ("pfaffian", "pfaffian of the 12x12 block matrix")):
        q = act.add_parser(name, help=text)
        _common(q, seed=True)
        q.add_argument("--net", metavar="FILE", help="net as JSON (default: a random rational net)")
    q = act.add_parser("salmon", help="singular/smooth image trials")
    _common(q, seed=True)
    q.add_argument("--kind", choices=SALMON_KINDS + ("all",), default="all")
    q.add_argument("--trials", type=int, default=50)

    p = sub.add_parser("moduli", help="named divisor classes and the discriminant derivation")
    p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    p = sub.add_parser("verify", help="run the verification suites")
    _common(p, beta=True, seed=True)
    p.add_argument("--only", help="comma-separated suite ids (default: all)")
    p.add_argument("--fit-seeds", type=int, default=50, help="multistarts per pentalateral fit")
    p.add_argument("--timings", action="store_true", help="include per-check seconds (breaks bit-identity)")
    return parser


def _validate(args):
    if getattr(args, "prec", DEFAULT_PREC) < 64:
        raise UsageError("precision must be at least 64 bits")
    if getattr(args, "tol", DEFAULT_TOL) <= 0:
        raise UsageError("tolerance must be positive")
    if hasattr(args, "seed") and args.seed is None:
        raise UsageError(f"--seed is required for '{args.command}'")


def _surface(args):
    return new_surface(_rationals(args.beta))


def _line_index(S, text: str, prec: int) -> int:
    text = text.strip()
    if text.isdigit():
        idx = int(text)
        if not 0 <= idx < 27:
            raise UsageError("line index must be in 0..26")
        return idx
    try:
        tag = partition_tag(parse_tag(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for sl in all_lines_27(S, prec):
        if sl.tag == tag:
            return sl.index
    raise UsageError(f"no line with tag {tag}")


def _line_json(sl):
    return {"index": sl.index, "tag": sl.tag, "exact": sl.exact, "residual": sci(sl.residual),
            "line": sl.line.to_json()}


# subcommands ---------------------------------------------------------------------------


def cmd_surface(args) -> Dict:
    S = _surface(args)
    with precision(args.prec):
        lines = all_lines_27(S, args.prec)
        sixes = double_sixes(S, args.prec)
        out = {
            "beta": [str(b) for b in S.beta],
            "lines": [_line_json(sl) for sl in lines],
            "double_sixes": [{"a": list(ds.a), "b": list(ds.b)} for ds in sixes],
            "hexahedral_cremona_plane": S.cremona_plane().to_json(),
        }
        if not args.no_planes:
            out["cremona_planes"] = [{"double_six": k, "plane": cp.plane.to_json(), "sigma": sci(cp.sigma)}
                                     for k, cp in enumerate(cremona_planes(S, args.prec))]
    summary = [f"surface beta = ({', '.join(out['beta'])})",
               f"lines: {len(lines)} (15 exact), max residual {max(sl.residual for sl in lines):.2e}",
               f"double-sixes: {len(sixes)}"]
    if "cremona_planes" in out:
        summary.append(f"Cremona planes: {len(out['cremona_planes'])}")
    return {"report": out, "summary": summary, "passed": True}


def cmd_points(args) -> Dict:
    S = _surface(args)
    idx = _line_index(S, args.line, args.prec)
    with precision(args.prec):
        lines = all_lines_27(S, args.prec)
        inv = involutory_points(S, args.prec)
        involutory = [{"partner": j, "partner_tag": lines[j].tag, "point": pt.to_json()}
                      for (i, j), pt in sorted(inv.items()) if i == idx]
        non_inv = [{"vertices": list(n.triple), "point": n.point.to_json()}
                   for n in non_involutory_points(S, idx, args.prec)]
        out = {"line": _line_json(lines[idx]), "involutory": involutory, "non_involutory": non_inv}
        summary = [f"line {idx} ({lines[idx].tag or 'numeric'}): {len(involutory)} involutory, "
                   f"{len(non_inv)} non-involutory points"]
        if not args.no_profile:
            prof = line_profile(S, idx, args.prec, args.tol)
            out["profile"] = {
                "pattern": {str(k): v for k, v in sorted(prof.pattern.items())},
                "lengths": prof.lengths,
                "roots": [{"kind": r.kind, "multiplicity": r.multiplicity, "planes": list(r.planes),
                           "partners": list(r.partners), "vertices": list(r.triple) if r.triple else None,
                           "residual": sci(r.residual)} for r in prof.roots],
            }
            pattern = " ".join(f"{k}^{v}" for k, v in sorted(prof.pattern.items()))
            summary.append(f"profile: root pattern {pattern}, lengths {prof.lengths}")
    return {"report": out, "summary": summary, "passed": True}


def _center(S, args) -> PointP3:
    if args.point and args.line:
        raise UsageError("give either --point or --line/--partner")
    if args.point:
        coords = _scalars(args.point)
        if len(coords) == 6:
            return S.from_hex(coords)
        if len(coords) == 4:
            return PointP3(tuple(coords))
        raise UsageError("--point needs 6 hexahedral or 4 chart coordinates")
    if args.line and args.partner:
        i = _line_index(S, args.line, args.prec)
        j = _line_index(S, args.partner, args.prec)
        inv = involutory_points(S, args.prec)
        if (i, j) not in inv:
            raise UsageError(f"lines {i} and {j} are not skew")
        return inv[(i, j)]
    raise UsageError("branch needs --point or --line with --partner")


def cmd_branch(args) -> Dict:
    S = _surface(args)
    with precision(args.prec):
        center = _center(S, args)
        res = branch_quartic(S.cubic, center, check_smooth=False, tol=args.tol, prec=args.prec)
        sing = singular_points(res.quartic, args.prec, seed=args.seed)
        out = {"branch": res.to_json(),
               "singular_points": [{"kind": s.kind, "point": [to_str(c) for c in s.point] if s.point else None,
                                    "residual": sci(s.residual)} for s in sing]}
        if not sing:
            classification = "smooth"
        elif len(sing) == 1 and sing[0].kind == "node":
            nc = nodal_class(res.quartic, args.prec, args.tol, singular=sing)
            classification = f"nodal {nc.kind}"
            out["nodal_class"] = {"kind": nc.kind, "conic_det": sci(nc.conic_det),
                                  "veronese_gap": sci(nc.veronese_gap)}
        else:
            classification = "singular: " + ", ".join(s.kind for s in sing)
        out["classification"] = classification
        summary = [f"branch quartic from {center.to_json()}: {classification}"]
        if classification == "smooth" and args.fit_seeds > 0:
            fit = pentalateral_fit(res.quartic, seeds=args.fit_seeds, seed=args.seed, prec=args.prec)
            out["fit"] = _fit_json(fit)
            summary.append(f"pentalateral fit: residual {fit.residual:.3e} after {fit.starts} starts")
    return {"report": out, "summary": summary, "passed": True}


def _fit_json(fit):
    return {"success": fit.success, "residual": sci(fit.residual), "starts": fit.starts,
            "seed_index": fit.seed_index, "pentalateral": fit.pentalateral.to_json() if fit.pentalateral else None,
            "note": fit.note}


def cmd_pentalateral(args) -> Dict:
    if args.action == "build":
        lines, weights = _forms(args.lines), _scalars(args.weights)
        if len(lines) != 5 or any(len(l) != 3 for l in lines) or len(weights) != 5:
            raise UsageError("need five lines of three coefficients and five weights")
        Q = pentalateral_build(lines, weights)
        return {"report": {"quartic": Q.to_json()}, "summary": ["quartic: " + str(Q.poly)], "passed": True}
    if args.action == "fit":
        if args.fermat:
            Q = fermat_quartic()
        else:
            coeffs = _scalars(args.quartic)
            if len(coeffs) != 15:
                raise UsageError("--quartic needs 15 coefficients")
            Q = TernaryQuartic(tuple(coeffs))
        fit = pentalateral_fit(Q, seeds=args.seeds, seed=args.seed, threshold=args.threshold, prec=args.prec)
        verdict = "fits" if fit.success else "no fit found"
        return {"report": {"quartic": Q.to_json(), "fit": _fit_json(fit)},
                "summary": [f"{verdict}: best residual {fit.residual:.3e} over {fit.starts} starts"],
                "passed": True}
    rng = random.Random(f"{args.seed}:identity")
    results = []
    for _ in range(args.trials):
        lines = [[Fraction(rng.randint(-9, 9)) for _ in range(3)] for _ in range(5)]
        weights = [Fraction(rng.randint(1, 9)) * rng.choice((1, -1)) for _ in range(5)]
        results.append(determinant_identity(lines, weights))
    passed = all(results)
    return {"report": {"trials": len(results), "holds": sum(results)},
            "summary": [f"determinant identity holds on {sum(results)}/{len(results)} instances"],
            "passed": passed}


def _net(args) -> NetOfQuadrics:
    if args.net:
        try:
            with open(args.net) as fh:
                return NetOfQuadrics.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise UsageError(f"cannot read net: {exc}") from None
    return random_net(random.Random(f"{args.seed}:net"))


def cmd_nets(args) -> Dict:
    if args.action in ("delta", "pfaffian"):
        N = _net(args)
        out = {"net": N.to_json()}
        if args.action == "delta":
            Q = delta_map(N)
            out["quartic"] = Q.to_json()
            summary = ["delta image: " + str(Q.poly)]
        else:
            pf = lambda_pfaffian(N)
            out["pfaffian"] = to_str(pf)
            summary = [f"pfaffian: {to_str(pf)}"]
        return {"report": out, "summary": summary, "passed": True}
    kinds = SALMON_KINDS if args.kind == "all" else (args.kind,)
    out, summary = {}, []
    for kind in kinds:
        trials = salmon_trials(kind, args.trials, args.seed, args.prec)
        ok = sum(t.passed for t in trials)
        out[kind] = {"trials": len(trials), "passed": ok, "results": [t.to_json() for t in trials]}
        summary.append(f"{kind}: {ok}/{len(trials)} trials as predicted")
    passed = all(v["passed"] == v["trials"] for v in out.values())
    return {"report": out, "summary": summary, "passed": passed}


def cmd_moduli(args) -> Dict:
    classes = named_classes()
    pipe = discriminant_pipeline()
    summary = [f"{name} = {cls}" for name, cls in classes.items()]
    summary.append("derivation checks: " + ("all hold" if pipe.ok else "FAILED"))
    return {"report": {"classes": {k: v.to_json() for k, v in classes.items()}, "derivation": pipe.to_json()},
            "summary": summary, "passed": pipe.ok}


def cmd_verify(args) -> Dict:
    beta = tuple(_rationals(args.beta))
    new_surface(beta)  # validate before running anything
    only = [s.strip() for s in args.only.split(",")] if args.only else None
    cfg = VerifyConfig(beta=beta, seed=args.seed, prec=args.prec, tol=args.tol, fit_seeds=args.fit_seeds)
    checks = run_checks(cfg, only)
    if only is not None and not checks:
        raise UsageError(f"no suites match --only {args.only}")
    rep = report(cfg, checks, timings=args.timings)
    summary = [f"[{'PASS' if c.passed else 'FAIL'}] {c.id} {c.title}" for c in checks]
    return {"report": rep, "summary": summary, "passed": rep["passed"], "raw": True}


COMMANDS = {
    "surface": cmd_surface,
    "points": cmd_points,
    "branch": cmd_branch,
    "pentalateral": cmd_pentalateral,
    "nets": cmd_nets,
    "moduli": cmd_moduli,
    "verify": cmd_verify,
}


def _config(args) -> Dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("json", "command", "action")}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"luroth {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidSurface as exc:
        print(f"luroth {args.command}: invalid surface: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LurothError, ValueError) as exc:
        print(f"luroth {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAILED
    if result.get("raw"):
        doc = result["report"]
    else:
        doc = {"schema": 1, "command": args.command, "config": _config(args), **result["report"],
               "passed": result["passed"]}
    text = json.dumps(doc, indent=2, sort_keys=False)
    if args.json == "-":
        print(text)
    else:
        print("\n".join(result["summary"]))
        if args.json:
            with open(args.json, "w") as fh:
                fh.write(text + "\n")
    return EXIT_OK if result["passed"] else EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
