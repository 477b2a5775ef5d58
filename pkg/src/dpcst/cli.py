"""Batch front end: generate, solve, verify, and render instances.

Exit codes: 0 ok, 1 usage or I/O error, 2 verification violation, 3 internal
divergence (replay disagrees with the trace).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import gw, sim, verify
from .exact import MAX_EXACT_NODES, exact_pcst
from .instance import (
    InstanceError,
    PcstInstance,
    Solution,
    format_rational,
    generate_random_instance,
    make_solution,
    parse_instance,
    render_instance,
)


def _load_instance(args) -> PcstInstance:
    if args.gen:
        params = {}
        for part in args.gen.split(","):
            k, _, v = part.partition("=")
            params[k.strip()] = int(v)
        return generate_random_instance(
            params["n"],
            params["m"],
            params.get("seed", 0),
            params.get("wmax", 20),
            params.get("pmax", 20),
        )
    if not args.instance:
        raise InstanceError("no instance given (path or --gen)")
    with open(args.instance) as fh:
        return parse_instance(fh.read())


def _parse_schedule(text: str) -> sim.Schedule:
    if text == "eager":
        return sim.Schedule.eager()
    if text.startswith("seeded:"):
        return sim.Schedule.seeded(int(text.split(":", 1)[1]))
    raise InstanceError(f"unknown schedule {text!r} (want eager or seeded:<n>)")


def cmd_solve(args) -> int:
    inst = _load_instance(args)
    if args.alg == "exact":
        res = exact_pcst(inst)
        sol = res.best
    elif args.alg == "gw":
        sol, _cert = gw.gw_solve(inst)
    elif args.alg == "dpcst":
        s = sim.run(inst, _parse_schedule(args.schedule))
        sol = sim.extract_solution(s)
        if args.trace:
            sim.write_trace(s.trace, args.trace)
    else:
        raise InstanceError(f"unknown algorithm {args.alg!r}")
    out = sol.to_json_dict()
    out["algorithm"] = args.alg
    print(json.dumps(out, indent=None if args.json else 2, sort_keys=False))
    return 0


def cmd_verify(args) -> int:
    with open(args.instance) as fh:
        inst = parse_instance(fh.read())
    trace = sim.read_trace(args.trace)
    exact = exact_pcst(inst) if inst.n <= MAX_EXACT_NODES and not args.no_exact else None
    try:
        cert = verify.reconstruct_duals(trace, inst)
    except verify.ReplayDivergence as exc:
        print(json.dumps({"check": "replay", "status": "divergence", "witnesses": [str(exc)]}))
        return 3
    reports = [
        verify.check_edge_packing(cert, inst),
        verify.check_penalty_packing(cert, inst),
        verify.check_ratio(cert, inst, exact),
        verify.check_bounds(trace, inst),
    ]
    for rep in reports:
        print(json.dumps(rep.to_json_dict()))
    return 0 if all(r.ok for r in reports) else 2


def cmd_render(args) -> int:
    with open(args.instance) as fh:
        inst = parse_instance(fh.read())
    with open(args.solution) as fh:
        data = json.load(fh)
    branch = [tuple(e) for e in data["branch_edges"]]
    steiner = set(inst.node_ids) - set(data["penalty_nodes"])
    sol = make_solution(inst, branch, steiner)
    if format_rational(sol.objective) != data["objective"]:
        raise InstanceError("solution file objective does not match the instance")
    print(render_dot(inst, sol))
    return 0


def cmd_gen(args) -> int:
    inst = generate_random_instance(args.n, args.m, args.seed, args.wmax, args.pmax)
    sys.stdout.write(render_instance(inst))
    return 0


def render_dot(inst: PcstInstance, sol: Solution) -> str:
    """DOT text: bold branch edges, dashed penalty nodes, double-circled root."""
    lines = ["graph pcst {"]
    for v in inst.node_ids:
        attrs = []
        if v == inst.root:
            attrs.append("shape=doublecircle")
        if v in sol.steiner_nodes:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightgray")
        else:
            attrs.append("style=dashed")
        label = f'label="{v} (p={format_rational(inst.prizes[v])})"'
        attrs.append(label)
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for (u, v) in sorted(inst.weights):
        attrs = [f'label="{format_rational(inst.weights[(u, v)])}"']
        if (u, v) in sol.branch_edges:
            attrs.append("style=bold")
        else:
            attrs.append("style=dotted")
        lines.append(f"  {u} -- {v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dpcst", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve an instance")
    ps.add_argument("instance", nargs="?", help="instance file path")
    ps.add_argument("--alg", choices=["dpcst", "gw", "exact"], default="dpcst")
    ps.add_argument("--schedule", default="eager", help="eager or seeded:<n>")
    ps.add_argument("--trace", help="write the JSON-lines trace here (dpcst only)")
    ps.add_argument("--gen", help="generate instead of reading: n=..,m=..,seed=..,wmax=..,pmax=..")
    ps.add_argument("--json", action="store_true", help="single-line JSON output")
    ps.set_defaults(func=cmd_solve)

    pv = sub.add_parser("verify", help="verify a trace against its instance")
    pv.add_argument("instance")
    pv.add_argument("trace")
    pv.add_argument("--no-exact", action="store_true", help="skip the exact-optimum bound")
    pv.set_defaults(func=cmd_verify)

    pr = sub.add_parser("render", help="render a solution as DOT")
    pr.add_argument("instance")
    pr.add_argument("solution", help="solution JSON written by solve")
    pr.set_defaults(func=cmd_render)

    pg = sub.add_parser("gen", help="emit a random instance in text form")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--m", type=int, required=True)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--wmax", type=int, default=20)
    pg.add_argument("--pmax", type=int, default=20)
    pg.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
