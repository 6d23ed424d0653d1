"""Command-line entry point: verification, enumeration, simulation, synthesis,
graph export, matrix export, and the console service.

Exit codes: 0 success, 1 verification failure, 2 usage or internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import linalg, semigroup, service, synthesis, verify
from .market import (
    GeneratorBasis,
    active_flags,
    apply_arbitrage,
    chain_from_dict,
    ensemble_from_dict,
    ensemble_to_dict,
)


def _setup_logging() -> None:
    level = os.environ.get("ARBITER_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _write_out(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_verify(args: argparse.Namespace) -> int:
    reports = verify.run_suite(args.suite, quick=args.quick)
    for report in reports:
        for line in report.lines():
            print(line)
    if args.out:
        _write_out({"reports": [r.to_dict() for r in reports]}, args.out)
    return 0 if all(r.passed for r in reports) else 1


def cmd_run(args: argparse.Namespace) -> int:
    try:
        with open(args.ensemble) as fh:
            ensemble = ensemble_from_dict(json.load(fh))
        with open(args.chain) as fh:
            chain = chain_from_dict(json.load(fh))
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    steps = args.steps if args.steps is not None else (
        len(chain.items) if chain.period is None else 10 * max(chain.period, 1)
    )
    trajectory = [ensemble]
    flags = [list(active_flags(ensemble))]
    for n in range(steps):
        trajectory.append(apply_arbitrage(trajectory[-1], chain.at(n)))
        flags.append(list(active_flags(trajectory[-1])))
    doc = {
        "trajectory": [ensemble_to_dict(r) for r in trajectory],
        "active_flags": flags,
    }
    _write_out(doc, args.emit)
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    elements = semigroup.enumerate_products()
    transitions = sorted(
        (i, j)
        for i, targets in semigroup.component_transitions().items()
        for j in targets
    )
    doc = {
        "count": len(elements),
        "elements": [
            {
                "m": [c for row in e.matrix for c in row],
                "rank": e.rank,
                "component": e.component,
            }
            for e in elements
        ],
        "transitions": [list(t) for t in transitions],
    }
    _write_out(doc, args.out)
    return 0


def _orbit_dot(orbit: semigroup.DiscrepancyOrbit) -> str:
    lines = ["digraph orbit {"]
    for v in orbit.vertices:
        lines.append(f'  {v.name} [label="{v.name}"];')
    lines.append('  D0 [label="D0", shape=doublecircle];')
    for e in orbit.edges:
        src = "D0" if e.source == 0 else f"D{e.source}"
        dst = "D0" if e.target == 0 else f"D{e.target}"
        label = str(e.arbitrage) if e.arbitrage else f"s{e.strong}"
        lines.append(f'  {src} -> {dst} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)


def cmd_graph(args: argparse.Namespace) -> int:
    try:
        orbit = (
            semigroup.single_step_orbit(args.a) if args.b == 0.0
            else semigroup.orbit_polyhedron(args.a, args.b)
        )
    except ValueError as exc:
        print(f"invalid steps: {exc}", file=sys.stderr)
        return 2
    if args.format == "dot":
        text = _orbit_dot(orbit)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    else:
        _write_out(service.orbit_payload(orbit), args.out)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        n = tuple(int(x) for x in args.target.split(","))
        if len(n) != 3:
            raise ValueError("target needs three integers")
    except ValueError as exc:
        print(f"bad target: {exc}", file=sys.stderr)
        return 2
    basis = GeneratorBasis.single(args.alpha)
    if args.method == "bfs":
        from .market import make_perturbed

        bound = synthesis.length_bound(args.initial, n)
        try:
            chain = synthesis.bfs_chain(make_perturbed(basis, args.initial), n, bound + 8)
        except synthesis.NotFound as exc:
            print(f"not found: {exc}", file=sys.stderr)
            return 1
        doc = {
            "chain": list(chain.items), "length": len(chain.items),
            "bound": bound, "method": "bfs", "deviation": False,
        }
    else:
        result = (
            synthesis.basic_chain(n, basis) if args.initial == 1
            else synthesis.variant_chain(args.initial, n, basis)
        )
        doc = {
            "chain": list(result.chain.items), "length": len(result.chain.items),
            "bound": result.bound, "method": result.method, "deviation": result.deviation,
        }
    print(json.dumps(doc))
    return 0


def cmd_export_matrices(args: argparse.Namespace) -> int:
    _write_out(linalg.export_matrices(), args.out)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        service.serve_forever(args.port, args.root)
    except OSError as exc:
        print(f"cannot bind port {args.port}: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fourfx", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run derivation and reference checks")
    p.add_argument("--suite", choices=("core", "matrices", "semigroup", "synthesis", "all"),
                   default="all")
    p.add_argument("--quick", action="store_true", help="smaller sample sizes")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="simulate a chain from an ensemble file")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--chain", required=True)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--emit", help="trajectory output file (stdout otherwise)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("enumerate", help="enumerate the operator semigroup")
    p.add_argument("--out", help="output file (stdout otherwise)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("graph", help="export a discrepancy orbit graph")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("synth", help="synthesize a chain to a balanced target")
    p.add_argument("--target", required=True, help="n1,n2,n3")
    p.add_argument("--initial", type=int, choices=range(1, 7), default=1)
    p.add_argument("--method", choices=("printed", "bfs"), default="printed")
    p.add_argument("--alpha", type=float, default=2.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("export-matrices", help="emit all derived matrices as JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_matrices)

    p = sub.add_parser("serve", help="start the console service on loopback")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--root", help="directory of static console files to serve")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # pragma: no cover - last-resort guard
        logging.getLogger("fourfx").exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
