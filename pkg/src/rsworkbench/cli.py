"""Command line entry point: rsworkbench <command> ...

Commands:
    list                      the reduction catalog with the result each entry realizes
    solve --in FILE           solve an instance and print a SolveReport document
    run ID --in FILE          send an instance through a reduction and decode a solution
    export-dot --in FILE      a graph truncated to a vertex window, in DOT format
    verify [ID] | --all       round-trip verification; exit status 1 on any failure
    play PAIR                 run the five-color game against a shipped or external pair
    refute-dnr                run the DNR refuter against a constant-output pair
    serve-pair PAIR           serve a shipped pair over the line protocol on stdin/stdout
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from typing import Optional, Sequence

from .adversary import (
    SHIPPED_PAIRS,
    CatalogTooSmall,
    SubprocessPair,
    constant_output_pair,
    dnr_refuter,
    rt15_vs_ads,
    serve,
)
from .epsets import UPSet
from .harness import DEFAULT_SUITE, FAMILIES, MUTANT_SUITE, verify_reduction
from .machines import FunctionalCatalog, OracleValue, seed_catalog
from .problems import PROBLEMS, GraphDesc, graph_from_json, instance_from_json, instance_to_json
from .reductions import MUTANTS, REDUCTIONS
from .solvers import (
    SolveReport,
    TreePath,
    brute_force_enumerate,
    greedy_highly_recursive_rsgr,
    rsgr_solve_described,
)

WINDOW = 32


# JSON plumbing

def load_instance(data: dict):
    """Instance documents; adds the "cylinder" and "dnr" kinds to the problem schema."""
    kind = data.get("kind")
    if kind == "cylinder":
        return OracleValue.from_json(data["p"]), graph_from_json(data["graph"])
    if kind == "dnr":
        cat = FunctionalCatalog.from_json(data["catalog"]) if "catalog" in data else seed_catalog()
        return cat, OracleValue.from_json(data.get("oracle", {"table": [], "tail": {"constant": 0}}))
    return instance_from_json(data)


def value_to_json(value, window: int = WINDOW):
    """A JSON rendering of a decoded value; functions are shown on a window of inputs."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, tuple):
        return [value_to_json(v, window) for v in value]
    if isinstance(value, TreePath):
        return {"bits": value.word(window)}
    if hasattr(value, "to_json"):
        try:
            return value.to_json()
        except TypeError:
            pass
    if callable(value):
        return {"window": [int(value(n)) for n in range(window)]}
    try:
        return instance_to_json(value)
    except TypeError:
        return repr(value)


def parse_solution(problem_id: str, image, data):
    problem = PROBLEMS[problem_id]
    if problem.space == "set":
        S = UPSet.from_json(data)
        return problem.wrap(image, S) if problem.wrap is not None else S
    if problem.space == "tagged_set":
        return data["tag"], UPSet.from_json(data["set"])
    if problem.space == "branch":
        return TreePath(problem.tree(image), data.get("choices", ()), data.get("default", 0))
    raise ValueError(f"{problem_id} solutions cannot be read from a file")


def _read(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _write(doc, path: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, default=repr)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


# commands

def cmd_list(args) -> int:
    for rid, rec in REDUCTIONS.items():
        kind = "strong" if rec.strong else "plain"
        print(f"{rid:24s} {rec.source:>12s} -> {rec.target:<14s} {kind:6s} {rec.statement}")
    if args.mutants:
        print()
        for mid, m in MUTANTS.items():
            print(f"{mid:36s} {m.note}")
    return 0


def cmd_solve(args) -> int:
    instance = load_instance(_read(args.infile))
    if args.problem is None:
        if not isinstance(instance, GraphDesc):
            raise SystemExit("solve needs --problem for non-graph instances")
        report = greedy_highly_recursive_rsgr(instance) if args.method == "greedy" else rsgr_solve_described(instance)
    else:
        sols = brute_force_enumerate(args.problem, instance, (args.prefix, args.period))
        if not sols:
            raise SystemExit(f"no {args.problem} solution within prefix {args.prefix}, period {args.period}")
        first = sols[0]
        if isinstance(first, tuple):
            first = first[1]
        report = SolveReport(first, [{"method": "brute force", "found": len(sols)}])
    _write(report.to_json(), args.out)
    return 0


def cmd_run(args) -> int:
    if args.reduction not in REDUCTIONS:
        raise SystemExit(f"unknown reduction {args.reduction!r}")
    record = REDUCTIONS[args.reduction]
    doc = _read(args.infile)
    inst_doc = doc.get("instance", doc)
    instance = load_instance(inst_doc)
    image = record.forward(instance)
    if "solution" in doc:
        solution = parse_solution(record.target, image, doc["solution"])
    else:
        sols = brute_force_enumerate(record.target, image, record.bounds)
        if not sols:
            raise SystemExit(f"no {record.target} solution within bounds {record.bounds}")
        solution = sols[0]
    decoded = record.backward(None if record.strong else instance, image, solution)
    result = {
        "reduction": record.id,
        "instance": inst_doc,
        "image": value_to_json(image),
        "target_solution": value_to_json(solution),
        "decoded": value_to_json(decoded),
        "check": bool(PROBLEMS[record.source].check(instance, decoded)),
    }
    _write(result, args.out)
    return 0 if result["check"] else 1


def graph_to_dot(G, window: int, name: str = "G") -> str:
    adj = G.adj if hasattr(G, "adj") else G.adjacent
    vertices = [v for v in range(window) if not hasattr(G, "vertices") or v in G.vertices]
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in vertices]
    lines += [f"  {u} -- {v};" for i, u in enumerate(vertices) for v in vertices[i + 1:] if adj(u, v)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args) -> int:
    doc = _read(args.infile)
    if args.reduction is not None:
        G = REDUCTIONS[args.reduction].forward(load_instance(doc))
    else:
        G = load_instance(doc)
    if not hasattr(G, "adj"):
        raise SystemExit("the document does not describe a graph")
    text = graph_to_dot(G, args.window)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    bounds = None
    if args.prefix is not None or args.period is not None:
        if args.prefix is None or args.period is None:
            raise SystemExit("--prefix and --period go together")
        bounds = (args.prefix, args.period)
    if args.all:
        reports = [verify_reduction(rid, bounds=bounds) for rid in DEFAULT_SUITE]
        if args.mutants:
            reports += [verify_reduction(MUTANTS[m].base, bounds=bounds, mutant=m) for m in MUTANT_SUITE]
    elif args.mutant:
        reports = [verify_reduction(MUTANTS[args.mutant].base, args.family, args.size, bounds, mutant=args.mutant)]
    elif args.reduction:
        reports = [verify_reduction(args.reduction, args.family, args.size, bounds)]
    else:
        raise SystemExit("name a reduction, --mutant ID, or --all")
    for r in reports:
        print(r.summary())
        for f in r.failures[:3]:
            print(f"    {f.clause}: instance={json.dumps(f.instance, default=repr)} solution={f.solution}")
    if args.json:
        _write([r.to_json() for r in reports], args.json)
    # catalog entries must pass; a mutant counts as caught when it fails
    catalog_failed = any(not r.passed for r in reports if r.mutant is None)
    mutant_missed = args.all and args.mutants and any(r.passed for r in reports if r.mutant is not None)
    if args.mutant and not args.all:
        return 1 if not reports[0].passed else 0
    return 1 if catalog_failed or mutant_missed else 0


def _pair_from_args(args):
    if args.command_line:
        return SubprocessPair(shlex.split(args.command_line), name=args.pair)
    if args.pair not in SHIPPED_PAIRS:
        raise SystemExit(f"unknown pair {args.pair!r}; shipped: {sorted(SHIPPED_PAIRS)}")
    return None


def cmd_play(args) -> int:
    external = _pair_from_args(args)
    try:
        if external is not None:
            describe = SHIPPED_PAIRS[args.describe_from].describe if args.describe_from else None
            pair = external.pair(describe)
        else:
            pair = SHIPPED_PAIRS[args.pair]
        result = rt15_vs_ads(pair, args.budget, horizon=args.horizon)
    finally:
        if external is not None:
            external.close()
    doc = result.to_json()
    doc["pair"] = args.pair
    if not args.trace:
        doc.pop("trace", None)
    _write(doc, args.json)
    return 0 if doc["result"] == "refutation" else 1


def cmd_refute_dnr(args) -> int:
    cat = FunctionalCatalog.from_json(_read(args.catalog)) if args.catalog else seed_catalog()
    pair = constant_output_pair(lambda e: args.constant)
    try:
        found = dnr_refuter(pair, cat, OracleValue.constant(args.oracle))
    except CatalogTooSmall as exc:
        print(str(exc), file=sys.stderr)
        return 1
    _write(found.to_json(), args.json)
    return 0


def cmd_serve_pair(args) -> int:
    if args.pair not in SHIPPED_PAIRS:
        raise SystemExit(f"unknown pair {args.pair!r}; shipped: {sorted(SHIPPED_PAIRS)}")
    serve(SHIPPED_PAIRS[args.pair])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsworkbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("list", help="print the reduction catalog")
    p.add_argument("--mutants", action="store_true", help="also list the broken decodes")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--problem", help="problem id; graphs default to the described RSgr solver")
    p.add_argument("--method", choices=("described", "greedy"), default="described")
    p.add_argument("--prefix", type=int, default=3)
    p.add_argument("--period", type=int, default=2)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("run", help="run one catalog reduction on an instance")
    p.add_argument("reduction")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("export-dot", help="write a graph window in DOT format")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--window", type=int, default=16)
    p.add_argument("--reduction", help="export the forward image of the instance instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("verify", help="round-trip verification")
    p.add_argument("reduction", nargs="?")
    p.add_argument("--all", action="store_true")
    p.add_argument("--mutants", action="store_true", help="with --all, also require every mutant to be caught")
    p.add_argument("--mutant")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--size", type=int)
    p.add_argument("--prefix", type=int)
    p.add_argument("--period", type=int)
    p.add_argument("--json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("play", help="the five-color game against a candidate pair")
    p.add_argument("pair", help="a shipped pair name, or a label when --command is given")
    p.add_argument("--command", dest="command_line", help="run the pair as a subprocess speaking the line protocol")
    p.add_argument("--describe-from", choices=sorted(SHIPPED_PAIRS),
                   help="check the result against this shipped pair's closed-form forward image")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--horizon", type=int, default=32)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("refute-dnr", help="the DNR refuter against a constant-output pair")
    p.add_argument("--catalog", help="catalog JSON; defaults to e_div, e_zero")
    p.add_argument("--constant", type=int, default=0)
    p.add_argument("--oracle", type=int, default=0)
    p.add_argument("--json")
    p.set_defaults(func=cmd_refute_dnr)

    p = sub.add_parser("serve-pair", help="serve a shipped pair on stdin/stdout")
    p.add_argument("pair")
    p.set_defaults(func=cmd_serve_pair)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
