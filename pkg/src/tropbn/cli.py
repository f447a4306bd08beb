"""``tropbn`` command line: one subcommand per operation, one JSON document out.

Exit status is 0 on success, 2 for invalid input or a genericity violation,
and 1 for degenerate intersections, exceeded caps, or failed verification.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import brill_noether as bn
from .core import (
    ChainOfLoops,
    as_fraction,
    check_genericity,
    default_chain,
    expected_cell_count,
    lambda_count,
    rho,
)
from .divisors import Divisor, ReducedDivisor, canonicalize
from .errors import CapExceeded, Degenerate, GenericityViolation, InvalidChainError
from .jacobian import JacobianPoint, abel_jacobi, jacobi_invert, pic_from_json
from .lattice import lingering_path, rank
from .theta import (
    ThetaTranslate,
    intersect_cells_with_translates,
    intersect_translates,
    random_translates,
    theta_facets,
)
from .verify import run_verification


class UsageError(Exception):
    pass


def _read_input(args) -> dict:
    if not args.input:
        return {}
    text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise UsageError("input must be a JSON object")
    return doc


def _chain(args, doc: dict, generic: bool = True) -> ChainOfLoops:
    if "chain" in doc:
        chain = ChainOfLoops.from_json(doc["chain"])
    elif {"g", "ell", "m", "bridges"} <= doc.keys():
        chain = ChainOfLoops.from_json(doc)
    elif args.g is not None:
        chain = default_chain(args.g, bridges=not args.no_bridges)
    else:
        raise UsageError("no chain given: pass --g or an input document with a chain")
    if generic:
        witness = check_genericity(chain)
        if witness is not None:
            raise GenericityViolation(f"chain is not generic: {witness._asdict()}")
    return chain


def _reduced(chain: ChainOfLoops, doc: dict) -> ReducedDivisor:
    if "divisor" not in doc:
        raise UsageError("input document needs a 'divisor'")
    raw = doc["divisor"]
    if isinstance(raw, dict):
        reduced = ReducedDivisor.from_json(raw)
        reduced.validate(chain)
        return reduced
    return canonicalize(chain, Divisor.from_json(raw))


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _sampled_or_given(args, chain, doc) -> ReducedDivisor:
    r = _need(args.r, "--r")
    if "divisor" in doc:
        return _reduced(chain, doc)
    d = _need(args.d, "--d")
    return bn.sample_vertex_avoiding(chain, r, d, random.Random(args.seed))


def cmd_gen(args, doc):
    return default_chain(_need(args.g, "--g"), bridges=not args.no_bridges).to_json()


def cmd_check(args, doc):
    witness = check_genericity(_chain(args, doc, generic=False))
    return {"generic": witness is None, "witness": None if witness is None else witness._asdict()}


def cmd_reduce(args, doc):
    chain = _chain(args, doc)
    return _reduced(chain, doc).to_json()


def cmd_rank(args, doc):
    chain = _chain(args, doc)
    reduced = _reduced(chain, doc)
    return {"rank": rank(chain, reduced), "reduced": reduced.to_json()}


def cmd_path(args, doc):
    chain = _chain(args, doc)
    return lingering_path(chain, _reduced(chain, doc), _need(args.r, "--r")).to_json()


def cmd_aj(args, doc):
    chain = _chain(args, doc)
    return abel_jacobi(chain, _reduced(chain, doc)).to_json()


def cmd_invert(args, doc):
    chain = _chain(args, doc)
    if "point" not in doc:
        raise UsageError("input document needs a 'point'")
    point = doc["point"]
    degree = point.get("degree", doc.get("degree", args.d))
    coords = [as_fraction(c) for c in point["coords"]]
    return jacobi_invert(chain, JacobianPoint.of(chain, coords), int(_need(degree, "degree"))).to_json()


def cmd_cells(args, doc):
    chain = _chain(args, doc)
    r, d = _need(args.r, "--r"), _need(args.d, "--d")
    cells = bn.enumerate_cells(chain, r, d)
    shown = cells if args.limit is None else cells[: args.limit]
    return {"rho": rho(chain.g, r, d), "count": len(cells), "cells": [c.to_json() for c in shown]}


def cmd_count(args, doc):
    chain = _chain(args, doc)
    g, r, d = chain.g, _need(args.r, "--r"), _need(args.d, "--d")
    p = rho(g, r, d)
    out = {"rho": p, "lambda": lambda_count(g, r, d) if p == 0 else None}
    out["cells"] = len(bn.enumerate_cells(chain, r, d))
    if p != 0:
        out["expected_cells"] = expected_cell_count(g, r, d)
    return out


def _translates(chain, doc, key="shifts"):
    return [ThetaTranslate(pic_from_json(chain, s)) for s in doc[key]]


def cmd_theta_facets(args, doc):
    chain = _chain(args, doc)
    translate = ThetaTranslate(pic_from_json(chain, doc["shift"])) if "shift" in doc else None
    return {"facets": [f.to_json() for f in theta_facets(chain, translate)]}


def cmd_intersect(args, doc):
    chain = _chain(args, doc)
    if "shifts" in doc:
        translates = _translates(chain, doc)
    else:
        translates = random_translates(chain, chain.g, random.Random(args.seed))
    return [p.to_json() for p in intersect_translates(chain, translates)]


def cmd_bn_intersect(args, doc):
    chain = _chain(args, doc)
    r, d = _need(args.r, "--r"), _need(args.d, "--d")
    cells = bn.enumerate_cells(chain, r, d)
    rng = random.Random(args.seed)
    if "shifts" in doc:
        translates = _translates(chain, doc)
    elif "divisor" in doc:
        translates = bn.containing_translates(chain, _reduced(chain, doc), r, rng)
    else:
        translates = random_translates(chain, max(rho(chain.g, r, d), 0), rng, degree=d - chain.g + 1)
    return [p.to_json() for p in intersect_cells_with_translates(chain, cells, translates)]


def cmd_local_eqns(args, doc):
    chain = _chain(args, doc)
    divisor = _sampled_or_given(args, chain, doc)
    equations = bn.local_theta_equations(chain, divisor, args.r)
    return {"divisor": divisor.to_json(), "equations": [e.to_json() for e in equations]}


def cmd_dj(args, doc):
    chain = _chain(args, doc)
    divisor = _sampled_or_given(args, chain, doc)
    js = range(args.r + 1) if args.j is None else [args.j]
    return {
        "divisor": divisor.to_json(),
        "D": {str(j): bn.compute_Dj(chain, divisor, args.r, j).to_json() for j in js},
    }


def cmd_verify(args, doc):
    genera = [_need(args.g, "--g")]
    report = run_verification(genera, args.trials, args.seed, bridges=not args.no_bridges, scale=args.scale)
    return report.to_json()


COMMANDS = {
    "gen": (cmd_gen, "print the default generic integer chain"),
    "check": (cmd_check, "test the genericity condition"),
    "reduce": (cmd_reduce, "v1-reduced coordinates of a divisor"),
    "rank": (cmd_rank, "Baker-Norine rank via lingering lattice paths"),
    "path": (cmd_path, "lingering lattice path in Z^r"),
    "aj": (cmd_aj, "Abel-Jacobi image of a divisor"),
    "invert": (cmd_invert, "reduced divisor with a given Abel-Jacobi image"),
    "cells": (cmd_cells, "maximal cells of W^r_d"),
    "count": (cmd_count, "rho, lambda and the number of cells"),
    "theta-facets": (cmd_theta_facets, "facets of a theta translate"),
    "intersect": (cmd_intersect, "intersection of g theta translates"),
    "bn-intersect": (cmd_bn_intersect, "W^r_d meets rho theta translates"),
    "local-eqns": (cmd_local_eqns, "local theta equations at a vertex avoiding class"),
    "dj": (cmd_dj, "representatives D_j of a vertex avoiding class"),
    "verify": (cmd_verify, "cross-check ranks and reductions against chip-firing"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--j", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--scale", type=int, default=1)
    common.add_argument("--trials", type=int, default=50)
    common.add_argument("--limit", type=int)
    common.add_argument("--no-bridges", action="store_true")
    common.add_argument("--input", metavar="FILE", help="JSON input document, '-' for stdin")

    parser = argparse.ArgumentParser(prog="tropbn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    handler = COMMANDS[args.command][0]
    try:
        result = handler(args, _read_input(args))
    except (UsageError, InvalidChainError, GenericityViolation, ValueError, KeyError, OSError) as exc:
        print(f"tropbn {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (Degenerate, CapExceeded, AssertionError) as exc:
        print(f"tropbn {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    json.dump(result, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    if args.command == "verify" and not result["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())
