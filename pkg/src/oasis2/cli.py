"""Command-line entry point: ``oasis2 {build,validate,match,entrust,demo,export,trace}``.

Exit codes: 0 success, 1 violations or unmatched tasks, 2 I/O, parse or
spec errors (including bad flags).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from oasis2 import demo as demo_mod
from oasis2.builder import build_behaviour, build_entrustment, build_plan, build_template
from oasis2.dot import to_dot
from oasis2.errors import OasisError
from oasis2.graph import TypedGraph
from oasis2.harness import trace
from oasis2.matcher import discover
from oasis2.spec import load_spec
from oasis2.turtle import parse, serialize
from oasis2.validator import format_report, validate
from oasis2.vocab import DEFAULT_NS

OK, FAILED, ERROR = 0, 1, 2


class CliError(Exception):
    """Usage problem detected after argument parsing (exit 2)."""


def _default_ns() -> str:
    return os.environ.get("OASIS2_NS") or DEFAULT_NS


def _read_graph(path: str, ns: str) -> TypedGraph:
    return parse(Path(path).read_text(encoding="utf-8"), ns)


def _read_graphs(paths: list[str], ns: str) -> TypedGraph:
    g = TypedGraph()
    for path in paths:
        g.update(_read_graph(path, ns))
    return g


def _render(g: TypedGraph, args) -> str:
    if args.format == "dot":
        return to_dot(g)
    if args.format == "turtle":
        return serialize(g, args.ns)
    raise CliError(f"--format {args.format} is not available for graphs")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    doc = load_spec(args.spec)
    if args.kind == "template":
        g = build_template(doc.spec)
    elif args.kind == "behaviour":
        template = None
        if args.template:
            template = (_read_graph(args.template, args.ns), doc.overloads)
        elif doc.overloads:
            raise CliError("the spec file lists overloads but no --template graph was given")
        g = build_behaviour(doc.spec, template)
    else:
        if not doc.requester:
            raise CliError("a plan spec needs a 'requester'")
        target = None
        if args.target:
            target = (_read_graph(args.target, args.ns) | doc.facts, doc.submitted_to)
        elif doc.submitted_to:
            raise CliError("the spec file lists submitted_to but no --target graph was given")
        g = build_plan(doc.spec, doc.requester, target)
    g.update(doc.facts)
    for prefix, ns in sorted(doc.prefixes.items()):
        g.bind(prefix, ns)
    _emit(_render(g, args), args.out)
    summary = f"{args.kind}: {len(g.nodes)} nodes, {len(g)} edges\n"
    (sys.stdout if args.out else sys.stderr).write(summary)
    return OK


def cmd_validate(args) -> int:
    results = {path: validate(_read_graph(path, args.ns)) for path in args.paths}
    if args.json:
        doc = {path: [v.to_dict() for v in found] for path, found in results.items()}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        for path, found in results.items():
            sys.stdout.write(format_report(found))
            sys.stderr.write(f"{path}: {len(found)} violation(s)\n")
    return FAILED if any(results.values()) else OK


def cmd_match(args) -> int:
    plan = _read_graph(args.plan, args.ns)
    # Behaviours and facts carried by the plan file are known too.
    kb = plan | _read_graphs(args.kb, args.ns)
    found = discover(plan, kb)
    lines = []
    for task, candidates in sorted(found.choices.items()):
        if not candidates:
            lines.append(f"{task}\tno candidates")
        for c in candidates:
            lines.append(f"{task}\t{c.agent}\t{c.behaviour}\t{c.task}")
    sys.stdout.write("".join(line + "\n" for line in lines))
    return FAILED if found.unmatched() else OK


def cmd_entrust(args) -> int:
    plan = _read_graph(args.plan, args.ns)
    kb = plan | _read_graphs(args.kb, args.ns)
    found = discover(plan, kb)
    if found.unmatched():
        for task in found.unmatched():
            sys.stderr.write(f"{task}: no candidates\n")
        return FAILED
    assignment = {task: cands[0].task for task, cands in found.choices.items()}
    g = build_entrustment(plan, kb, assignment)
    g.namespaces.update(plan.namespaces)
    _emit(_render(g, args), args.out)
    return OK


def cmd_demo(args) -> int:
    if args.format == "dot":
        raise CliError("the demo writes Turtle files and an event log; use export for DOT")
    out = Path(args.out or "oasis2-demo")
    run = demo_mod.write_demo(out, seed=args.seed, ns=args.ns)
    if args.format == "log":
        sys.stdout.write(run.scenario.event_log())
    else:
        for name in demo_mod.FILES:
            sys.stdout.write(f"{out / name}\n")
    return OK


def cmd_export(args) -> int:
    g = _read_graphs(args.paths, args.ns)
    _emit(_render(g, args), args.out)
    return OK


def cmd_trace(args) -> int:
    g = _read_graphs(args.paths, args.ns)
    result = trace(g, args.task)
    sys.stdout.write("".join(f"{link}\t{node}\n" for link, node in result.chain()))
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ns", default=_default_ns(),
                        help="core vocabulary namespace (default: $OASIS2_NS or %(default)s)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    common.add_argument("--out", help="output file (directory for demo); default stdout")
    common.add_argument("--format", choices=("turtle", "dot", "log"), default="turtle",
                        help="output format (default: turtle)")

    parser = argparse.ArgumentParser(prog="oasis2", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build a graph from a spec file")
    p.add_argument("spec", help="YAML or JSON spec file")
    p.add_argument("--kind", choices=("template", "behaviour", "plan"), required=True)
    p.add_argument("--template", help="template graph the behaviour overloads (.ttl)")
    p.add_argument("--target", help="behaviour graph the plan is submitted to (.ttl)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", parents=[common], help="check graphs against rules V1-V8")
    p.add_argument("paths", nargs="+")
    p.add_argument("--json", action="store_true", help="structured report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("match", parents=[common], help="list performer candidates per plan task")
    p.add_argument("plan")
    p.add_argument("kb", nargs="*", help="graphs with performer behaviours (added to the plan file's own)")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("entrust", parents=[common], help="entrust each plan task to its first candidate")
    p.add_argument("plan")
    p.add_argument("kb", nargs="*")
    p.set_defaults(func=cmd_entrust)

    p = sub.add_parser("demo", parents=[common], help="run the ERC-721 minting scenario")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("export", parents=[common], help="re-serialize graphs (e.g. to DOT)")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("trace", parents=[common], help="provenance chain of an execution task")
    p.add_argument("task")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, OasisError, CliError) as exc:
        sys.stderr.write(f"oasis2 {args.command}: error: {exc}\n")
        return ERROR
