import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

from ips import config
from ips import documents
from ips.bounds import bounds_report, constants_for_cutoffs, load_known_values
from ips.constructions import construction1, dilate, prime_set, trim
from ips.dmatrix import collinear_triple, from_points, realizable_dim
from ips.errors import IpsError
from ips.exactnum import format_rational
from ips.geometry import characteristic, verify_integral_set
from ips.packing import pps_solve, pps_validate
from ips.search import Extendable, Facher, bounded_maximality, classify_unit_set, enumerate_unit4, min_diameter

log = logging.getLogger("app")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 2
EXIT_NOT_FOUND = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 means a failed verification here
    def error(self, message):
        raise UsageError(message)


def _emit(payload: Dict[str, Any], out: Optional[str] = None) -> None:
    if out:
        documents.write_document(out, payload)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(documents.dumps(payload))


def run_construct(args) -> int:
    if args.prime == (args.k is not None):
        raise UsageError("give either --k or --prime --m --n --d")
    if args.prime:
        if None in (args.m, args.n, args.d):
            raise UsageError("--prime needs --m, --n and --d")
        if args.trim is not None or args.dilate is not None:
            raise UsageError("--trim/--dilate apply to --k only")
        ps = prime_set(args.m, args.n, args.d, unique_min=args.unique_min)
        _emit(documents.dm_to_doc(ps.matrix, ps.provenance), args.out)
        return EXIT_OK
    if args.m is not None or args.n is not None or args.d is not None or args.unique_min:
        raise UsageError("--m/--n/--d/--unique-min apply to --prime only")
    cs = construction1(args.k)
    if args.trim is not None:
        cs = trim(cs, args.trim)
    if args.dilate is not None:
        cs = dilate(cs, args.dilate)
    _emit(documents.planar_to_doc(cs.points, cs.provenance()), args.out)
    return EXIT_OK


def _verify_planar(doc, expected_dim: Optional[int]) -> Tuple[Dict[str, Any], bool]:
    s = documents.doc_to_planar(doc)
    report = verify_integral_set(s)
    result: Dict[str, Any] = {
        "kind": "planar",
        "n": len(s),
        "integral": report.is_integral,
        "full_dimensional": report.full_dimensional,
        "failures": [list(f) for f in report.failures],
    }
    if not report.ok:
        return result, False
    dm = from_points(s)
    result.update(
        {
            "diameter": report.diameter,
            "min_distance": report.min_distance,
            "characteristic": characteristic(s),
            "gcd": dm.gcd(),
            "dimension": 2,
        }
    )
    return result, expected_dim in (None, 2)


def _verify_dm(doc, expected_dim: Optional[int]) -> Tuple[Dict[str, Any], bool]:
    dm = documents.doc_to_dm(doc)
    verdict = realizable_dim(dm)
    result: Dict[str, Any] = {
        "kind": "distance-matrix",
        "n": dm.n,
        "gram_rank": verdict.gram_rank,
        "psd": verdict.psd,
        "dimension": verdict.dimension,
    }
    if dm.n >= 2:
        result.update({"diameter": dm.diameter(), "min_distance": dm.min_distance(), "gcd": dm.gcd()})
    ok = verdict.psd and (expected_dim is None or verdict.dimension == expected_dim)
    return result, ok


def run_verify(args) -> int:
    doc = documents.read_document(args.input)
    if isinstance(doc, documents.PlanarDoc):
        result, ok = _verify_planar(doc, args.dim)
    elif isinstance(doc, documents.DmDoc):
        result, ok = _verify_dm(doc, args.dim)
    else:
        raise UsageError(f"verify accepts {documents.PLANAR} or {documents.DM}, got {doc.format}")
    if args.dim is not None:
        result["expected_dimension"] = args.dim
    result["verified"] = ok
    _emit(result)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def run_bounds(args) -> int:
    consts = constants_for_cutoffs(args.cutoff_n, args.cutoff_diam, args.cutoff_t)
    ks: List[int] = list(args.pps or [])
    if args.all and not ks:
        ks = list(range(2, 11))
    known = load_known_values(args.known_values) if args.known_values else None
    report = bounds_report(ks, known, consts)
    _emit(report, args.out)
    return EXIT_OK


def run_pack(args) -> int:
    p = pps_solve(args.k, seed=args.seed, restarts=args.restarts, iterations=args.iters, jobs=args.jobs)
    in_square, _ = pps_validate(p)
    if not in_square:
        log.warning("packing leaves the unit square")
        return EXIT_VERIFY_FAILED
    _emit(documents.packing_to_doc(p), args.out)
    return EXIT_OK


def run_search(args) -> int:
    if args.unit4:
        if args.n is not None or args.emit:
            raise UsageError("--unit4 takes no --n or --emit")
        matrices = enumerate_unit4(args.bmax)
        rows = []
        for dm in matrices:
            unit = next((i, j) for i, j, d in dm.pairs() if d == 1)
            third = [k for k in range(dm.n) if k not in unit and collinear_triple(dm, unit[0], unit[1], k)]
            rows.append({"entries": dm.to_lists(), "unit_pair": list(unit), "collinear_with_unit_pair": third})
        counterexamples = sum(1 for r in rows if not r["collinear_with_unit_pair"])
        _emit({"kind": "unit4", "b_max": args.bmax, "count": len(rows), "sets": rows, "counterexamples": counterexamples})
        return EXIT_OK if counterexamples == 0 else EXIT_VERIFY_FAILED
    if args.n is None:
        raise UsageError("search needs --n or --unit4")
    outcome = min_diameter(args.n, args.bmax, jobs=args.jobs)
    _emit(documents.search_to_doc(outcome))
    if not outcome.found:
        return EXIT_NOT_FOUND
    if args.emit:
        _emit(documents.dm_to_doc(outcome.result.witness, {"search": {"n": args.n, "bound": args.bmax}}), args.emit)
    return EXIT_OK


def run_classify(args) -> int:
    doc = documents.read_document(args.input)
    if not isinstance(doc, documents.PlanarDoc):
        raise UsageError(f"classify needs an {documents.PLANAR} document")
    s = documents.doc_to_planar(doc)
    classification = classify_unit_set(s)
    verdict = classification.verdict
    result: Dict[str, Any] = {"kind": "classification", "n": len(s)}
    if isinstance(verdict, Facher):
        result["verdict"] = {
            "facher": True,
            "line_points": list(verdict.line_points),
            "apex": verdict.apex,
            "unit_pair": list(verdict.unit_pair),
        }
    else:
        result["verdict"] = {
            "facher": False,
            "unit_pair": list(verdict.unit_pair),
            "off_line": list(verdict.off_line),
            "reason": verdict.reason,
        }
    if args.maximal is not None:
        m = bounded_maximality(s, args.maximal)
        if isinstance(m, Extendable):
            result["maximality"] = {
                "extendable": True,
                "point": {"x": format_rational(m.point.x), "y": format_rational(m.point.y)},
                "distances": list(m.distances),
            }
        else:
            result["maximality"] = {
                "extendable": False,
                "radius_bound": m.radius_bound,
                "certified_absolute": m.certified_absolute,
            }
    _emit(result)
    return EXIT_OK if classification.is_facher else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ips", description="Integral point sets: constructions, verification, bounds, packing and search")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("construct", help="Unit-distance planar sets, trims, dilations and prime sets")
    p.add_argument("--k", type=int)
    p.add_argument("--trim", type=int, help="keep this many points")
    p.add_argument("--dilate", type=int, help="scale by this integer")
    p.add_argument("--prime", action="store_true", help="prime set with prescribed distance")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--unique-min", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=run_construct)

    p = sub.add_parser("verify", help="Verify a point-set or distance-matrix document")
    p.add_argument("input")
    p.add_argument("--dim", type=int, help="expected dimension")
    p.set_defaults(func=run_verify)

    p = sub.add_parser("bounds", help="Certified diameter bound constants")
    p.add_argument("--all", action="store_true", help="include pps bounds for k=2..10")
    p.add_argument("--pps", type=int, nargs="*")
    p.add_argument("--known-values", help="CSV with header n,diameter")
    p.add_argument("--cutoff-n", type=int, default=21491)
    p.add_argument("--cutoff-diam", type=int, default=10000)
    p.add_argument("--cutoff-t", type=int)
    p.add_argument("--out")
    p.set_defaults(func=run_bounds)

    p = sub.add_parser("pack", help="Max-min packing in the unit square")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=config.PACK_RESTARTS)
    p.add_argument("--iters", type=int, default=config.PACK_ITERATIONS)
    p.add_argument("--jobs", type=int, default=config.JOBS)
    p.add_argument("--out")
    p.set_defaults(func=run_pack)

    p = sub.add_parser("search", help="Minimum diameter search and unit-distance enumeration")
    p.add_argument("--n", type=int)
    p.add_argument("--bmax", type=int, required=True)
    p.add_argument("--jobs", type=int, default=config.JOBS)
    p.add_argument("--emit", help="write the witness distance matrix here")
    p.add_argument("--unit4", action="store_true")
    p.set_defaults(func=run_search)

    p = sub.add_parser("classify", help="Structure of a planar set with a unit distance")
    p.add_argument("input")
    p.add_argument("--maximal", type=int, metavar="R", help="also look for an extension within radius R")
    p.set_defaults(func=run_classify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IpsError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
