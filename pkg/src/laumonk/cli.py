"""Command-line front end: enumeration dumps, relation suites, oracle
cross-checks, operator matrix dumps, and specialization runs, with
reproducible seeded JSON reports.

Subcommands:

* patterns    -- enumerate finite or affine patterns with counts
* verify      -- run a relation/oracle suite; exit 0 iff everything passes
* specialize  -- D(mu) block sizes and closure checks
* op-matrix   -- matrix of one mode operator between degree blocks

All reports are JSON with sorted keys; identical (config, seed) runs are
byte-identical.  --workers (or LAUMONK_WORKERS) sizes a thread pool over
independent relation families; the merge order is fixed, so results do not
depend on the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import relations as rel
from .finite_action import FiniteAction
from .patterns import enumerate_affine, enumerate_affine_total, \
    enumerate_finite
from .specialization import LevelWeight, WeightError, closure_report
from .tangent import TangentOracle
from .toroidal_action import ToroidalAction


def _write_report(path, payload) -> str:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _parse_int_list(text):
    return tuple(int(x) for x in text.split(",")) if text else ()


def cmd_patterns(args) -> int:
    if args.affine:
        if args.total is not None:
            pats = enumerate_affine_total(args.n, args.total)
        else:
            pats = enumerate_affine(args.n, _parse_int_list(args.deg))
        listing = [p.to_json() for p in pats]
    else:
        pats = enumerate_finite(args.n, _parse_int_list(args.deg))
        listing = [p.to_json() for p in pats]
    payload = {
        "command": "patterns",
        "module": "affine" if args.affine else "finite",
        "n": args.n,
        "count": len(listing),
        "patterns": listing,
    }
    text = _write_report(args.out, payload)
    if args.out:
        print("%d patterns -> %s" % (len(listing), args.out))
    else:
        sys.stdout.write(text)
    return 0


def _suite_reports(args):
    """The named suite as a list of (description, callable) units."""
    units = []
    if args.suite == "loop":
        units.append(("loop", lambda: rel.loop_suite(
            args.n, max_degree=args.max_degree, window=args.window,
            strategy=args.strategy, seed=args.seed, trials=args.trials)))
    elif args.suite == "toroidal":
        units.append(("toroidal", lambda: rel.toroidal_suite(
            args.n, max_degree=args.max_degree, window=args.window,
            strategy=args.strategy, seed=args.seed, trials=args.trials)))
    elif args.suite == "glzero":
        units.append(("glzero", lambda: rel.verify_gl_zero_modes(
            rel.FiniteModel(args.n), max_degree=args.max_degree,
            strategy=args.strategy, seed=args.seed, trials=args.trials)))
    elif args.suite == "controls":
        units.append(("controls", lambda: rel.negative_controls(
            max(args.n, 3), max_degree=min(args.max_degree, 2), window=1,
            strategy=args.strategy, seed=args.seed, trials=args.trials)))
    elif args.suite == "oracle":
        units.append(("oracle", lambda: oracle_suite(
            args.n, max_degree=args.max_degree)))
    else:
        raise SystemExit("unknown suite %r" % args.suite)
    return units


def oracle_suite(n: int, max_degree: int = 2, modes=(-1, 0, 1)) -> list:
    """Bott-Lefschetz equality and character-size checks as reports."""
    oracle = TangentOracle(n)
    action = ToroidalAction(n)
    sources = []
    for total in range(max_degree + 1):
        sources.extend(enumerate_affine_total(n, total))
    entries = 0
    counterexample = None
    for p in sources:
        space = oracle.tangent_character_space(p)
        if space.size() != 2 * sum(p.degree()):
            counterexample = counterexample or {"source": p.to_json(),
                                                "size": space.size()}
        for node in range(1, n + 1):
            for kind in ("e", "f"):
                for tr in action.transitions(kind, node, p):
                    if kind == "f":
                        corr = oracle.tangent_character_correspondence(
                            p, node, tr.column)
                        entries += 1
                        if corr.size() != 2 * sum(p.degree()) + 1:
                            counterexample = counterexample or {
                                "source": p.to_json(), "move": tr.column}
                    for r in modes:
                        entries += 1
                        got = oracle.bott_coefficient(kind, p, node,
                                                      tr.column, r)
                        if got != tr.coeff(r) and counterexample is None:
                            counterexample = {
                                "source": p.to_json(),
                                "target": tr.target.to_json(),
                                "modes": [kind, node, tr.column, r],
                                "residual": (got - tr.coeff(r)).to_string(),
                            }
    report = rel.VerificationReport(
        rel.RelationId("bott_oracle", "", ()),
        {"n": n, "module": "affine", "strategy": "symbolic",
         "max_degree": max_degree, "window": list(modes), "seed": 0},
        "pass" if counterexample is None else "fail",
        entries,
        counterexample,
    )
    return [report]


def cmd_verify(args) -> int:
    units = _suite_reports(args)
    workers = args.workers or int(os.environ.get("LAUMONK_WORKERS", "1"))
    reports = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [(name, pool.submit(fn)) for name, fn in units]
            for _, fut in futures:
                reports.extend(fut.result())
    else:
        for _, fn in units:
            reports.extend(fn())
    payload = {
        "command": "verify",
        "suite": args.suite,
        "n": args.n,
        "max_degree": args.max_degree,
        "window": args.window,
        "strategy": args.strategy,
        "seed": args.seed,
        "trials": args.trials,
        "reports": [r.to_json() for r in reports],
        "all_pass": all(r.passed for r in reports),
    }
    if args.suite == "toroidal":
        # reported, not asserted: the scalars relating the node-0 Chevalley
        # operators to the shifted node-n zero modes (constant across moves)
        action = ToroidalAction(args.n)
        ratios = {"e": set(), "f": set(), "k": set()}
        for total in range(min(args.max_degree, 2) + 1):
            for p in enumerate_affine_total(args.n, total):
                for key, vals in action.chevalley_node0_ratios(p).items():
                    ratios[key].update(vals)
        payload["chevalley_node0_ratios"] = {
            k: sorted(v) for k, v in ratios.items()}
    if args.suite == "controls":
        payload["all_pass"] = all(
            (not r.passed) and r.counterexample for r in reports)
        payload["note"] = "negative controls: pass means every mutation failed"
    _write_report(args.out, payload)
    for r in reports:
        print("%-40s %s  (%d entries)" % (r.relation.key(), r.status,
                                          r.entries_checked))
    ok = payload["all_pass"]
    print("suite %s: %s" % (args.suite, "PASS" if ok else "FAIL"))
    return 0 if ok else 1


def cmd_specialize(args) -> int:
    try:
        w = LevelWeight(args.n, args.level, _parse_int_list(args.mu))
    except WeightError as err:
        print("rejected: %s" % err, file=sys.stderr)
        return 2
    u_exponent = None
    if args.wrong_u:
        u_exponent = -args.level - args.n + 1
    report = closure_report(w, max_total=args.max_degree, window=args.window,
                            u_exponent=u_exponent)
    report["command"] = "specialize"
    _write_report(args.out, report)
    for block in report["blocks"]:
        print("degree %s  basis %d  closure %s"
              % (block["degree"], block["basis_size"], block["closure"]))
    print("closure: %s" % ("PASS" if report["closure"] else "FAIL"))
    return 0 if report["closure"] else 1


def cmd_op_matrix(args) -> int:
    deg = _parse_int_list(args.deg)
    entries = []
    if args.affine:
        action = ToroidalAction(args.n)
        sources = enumerate_affine(args.n, deg)
        for p in sources:
            for tr in action.transitions(args.kind, args.node, p):
                entries.append({
                    "source": p.to_json(),
                    "target": tr.target.to_json(),
                    "column": tr.column,
                    "u_exponent": 2 * (-((-tr.column) // args.n)),
                    "node_residue": (args.node - 1) % args.n + 1,
                    "value": tr.coeff(args.mode).to_string(),
                })
    else:
        action = FiniteAction(args.n)
        sources = enumerate_finite(args.n, deg)
        for p in sources:
            for tr in action.transitions(args.kind, args.node, p):
                entries.append({
                    "source": p.to_json(),
                    "target": tr.target.to_json(),
                    "column": tr.column,
                    "value": tr.coeff(args.mode).to_string(),
                })
    payload = {
        "command": "op-matrix",
        "module": "affine" if args.affine else "finite",
        "kind": args.kind,
        "node": args.node,
        "mode": args.mode,
        "n": args.n,
        "degree": list(deg),
        "entries": entries,
    }
    text = _write_report(args.out, payload)
    if not args.out:
        sys.stdout.write(text)
    else:
        print("%d entries -> %s" % (len(entries), args.out))
    return 0


def _apply_config(args, subparser):
    """Config file supplies defaults; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    with open(args.config, encoding="utf-8") as fh:
        conf = json.load(fh)
    for key, value in conf.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            continue
        if subparser.get_default(key) == getattr(args, key):
            setattr(args, key, value)
    return args


def build_parser():
    parser = argparse.ArgumentParser(
        prog="laumonk",
        description="exact fixed-point calculus for quantum loop and "
                    "toroidal algebra actions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    registry = {}

    pat = sub.add_parser("patterns", help="enumerate fixed-point patterns")
    pat.add_argument("-n", type=int, required=True)
    group = pat.add_mutually_exclusive_group()
    group.add_argument("--finite", action="store_true")
    group.add_argument("--affine", action="store_true")
    pat.add_argument("-d", "--deg", default="")
    pat.add_argument("--total", type=int, default=None)
    pat.add_argument("--out", default=None)
    pat.set_defaults(fn=cmd_patterns)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", required=True,
                     choices=["loop", "toroidal", "glzero", "oracle",
                              "controls"])
    ver.add_argument("-n", type=int, default=3)
    ver.add_argument("-D", "--max-degree", type=int, default=None)
    ver.add_argument("-R", "--window", type=int, default=2)
    ver.add_argument("--strategy", choices=["symbolic", "random"],
                     default="symbolic")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--trials", type=int, default=5)
    ver.add_argument("--workers", type=int, default=None)
    ver.add_argument("--config", default=None)
    ver.add_argument("--out", default=None)
    ver.set_defaults(fn=cmd_verify)

    spec = sub.add_parser("specialize", help="integrable-module closure")
    spec.add_argument("-n", type=int, default=3)
    spec.add_argument("-K", "--level", type=int, required=True)
    spec.add_argument("--mu", required=True)
    spec.add_argument("--max-degree", type=int, default=2)
    spec.add_argument("--window", type=int, default=2)
    spec.add_argument("--wrong-u", action="store_true",
                      help="negative control: off-by-one u exponent")
    spec.add_argument("--config", default=None)
    spec.add_argument("--out", default=None)
    spec.set_defaults(fn=cmd_specialize)

    mat = sub.add_parser("op-matrix", help="dump one mode operator matrix")
    mat.add_argument("-n", type=int, required=True)
    mat.add_argument("--affine", action="store_true")
    mat.add_argument("--kind", choices=["e", "f"], required=True)
    mat.add_argument("--node", type=int, required=True)
    mat.add_argument("-r", "--mode", type=int, default=0)
    mat.add_argument("-d", "--deg", required=True)
    mat.add_argument("--out", default=None)
    mat.set_defaults(fn=cmd_op_matrix)

    registry.update(patterns=pat, verify=ver, specialize=spec,
                    **{"op-matrix": mat})
    return parser, registry


def main(argv=None) -> int:
    parser, registry = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        args = _apply_config(args, registry[args.command])
    if args.command == "verify" and args.max_degree is None:
        args.max_degree = 3 if args.suite in ("loop", "glzero") else 2
    try:
        return args.fn(args)
    except (ValueError, OSError) as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
