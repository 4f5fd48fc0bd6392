"""Command-line interface.

Exit codes: for `solve`, 0 means Duplicator and 1 means Spoiler so shell
tests can assert winners directly; 2 flags a usage error and 3 a blown
search budget for every command.

Structure specs accept the shorthand ``lo:N`` (a linear order of size N)
or a JSON document — inline or ``@path`` — with fields ``universe``
(element count), ``relations`` (name to list of index tuples) and
``constants`` (name to index), indices 1-based.
"""

from __future__ import annotations

import argparse
import json
import pickle
import sys

from .budget import Budget, BudgetExceeded
from .bounds import CAMPAIGNS, bounds_table, verify_campaign
from .ef import ef_prefix_winner, ef_winner
from .library import library, library_names
from .ms import game_state, ms_winner, prefix_constraints
from .sentences import AtomModel, evaluate, parse, render
from .structures import (
    DomainError,
    Structure,
    UsageError,
    board,
    make_linear_order,
)
from . import strategies
from .synthesis import SynthesisError, synthesize

EXIT_DUPLICATOR = 0
EXIT_SPOILER = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

SCRIPTS = {
    "split_board": strategies.split_board_duplicator,
    "reduction": strategies.reduction_duplicator,
    "plain2": strategies.plain2_duplicator,
    "plain3": strategies.plain3_duplicator,
    "naive_mirror": strategies.naive_mirror_duplicator,
}


def parse_structure(spec: str) -> Structure:
    """Parse a structure spec: ``lo:N`` or a JSON document / @file."""
    spec = spec.strip()
    if spec.startswith("lo:"):
        try:
            n = int(spec[3:])
        except ValueError:
            raise UsageError(f"bad linear-order spec {spec!r}")
        return make_linear_order(n)
    if spec.startswith("@"):
        with open(spec[1:], encoding="utf-8") as fh:
            spec = fh.read()
    try:
        doc = json.loads(spec)
    except json.JSONDecodeError as exc:
        raise UsageError(f"structure spec is neither lo:N nor JSON: {exc}")
    if not isinstance(doc, dict) or "universe" not in doc:
        raise UsageError("structure document needs a 'universe' field")
    n = doc["universe"]
    relations = {
        name: {tuple(i - 1 for i in tup) for tup in tuples}
        for name, tuples in doc.get("relations", {}).items()
    }
    constants = {name: i - 1 for name, i in doc.get("constants", {}).items()}
    return Structure(n, relations, constants=constants)


def _boards(specs: str):
    return [board(parse_structure(s)) for s in specs.split(",")]


def _budget(args) -> Budget:
    return Budget(
        max_nodes=getattr(args, "max_nodes", None),
        max_ms=getattr(args, "max_ms", None),
    )


def _cmd_solve(args) -> int:
    budget = _budget(args)
    if args.rounds is None and not args.prefix:
        raise UsageError("give --rounds or --prefix")
    if args.game == "ef":
        a, b = _boards(args.a), _boards(args.b)
        if len(a) != 1 or len(b) != 1:
            raise UsageError("the classic game takes one structure per side")
        if args.atoms:
            raise UsageError("--atoms applies to the ms game only")
        if args.prefix:
            verdict = ef_prefix_winner(a[0], b[0], args.prefix, budget=budget)
        else:
            verdict = ef_winner(a[0], b[0], args.rounds, budget=budget)
    else:
        kw = {"atoms": args.atoms, "no_play_on_top": args.no_play_on_top}
        if args.prefix:
            kw["constraints"] = prefix_constraints(args.prefix)
            rounds = len(args.prefix)
        else:
            rounds = args.rounds
        if args.constrain_first:
            kw["constraints"] = args.constrain_first + kw.get("constraints", "")[1:]
        st = game_state(_boards(args.a), _boards(args.b), rounds, **kw)
        verdict = ms_winner(st, budget)
        if verdict.winner == "Spoiler" and args.certificate:
            with open(args.certificate, "wb") as fh:
                pickle.dump((st, verdict.certificate), fh)
            print(f"certificate: {args.certificate}")
    print(verdict.winner)
    return EXIT_DUPLICATOR if verdict.winner == "Duplicator" else EXIT_SPOILER


def _cmd_sentence(args) -> int:
    if args.action == "eval":
        if args.name:
            s = library(args.name)
        elif args.text:
            s = parse(args.text)
        else:
            raise UsageError("give --name or --text")
        struct = parse_structure(args.model)
        model = AtomModel(struct, args.atoms) if args.atoms else struct
        print("true" if evaluate(s, model) else "false")
        return EXIT_DUPLICATOR
    with open(getattr(args, "from"), "rb") as fh:
        st, cert = pickle.load(fh)
    print(render(synthesize(cert, st)))
    return EXIT_DUPLICATOR


def _cmd_certify(args) -> int:
    if args.script not in SCRIPTS:
        raise UsageError(
            f"unknown script {args.script!r}; choose from {', '.join(sorted(SCRIPTS))}"
        )
    st = game_state(
        _boards(args.a), _boards(args.b), args.rounds, atoms=args.atoms
    )
    cert = strategies.certify_duplicator(SCRIPTS[args.script](), st, _budget(args))
    if cert.certified:
        print("certified")
        return EXIT_DUPLICATOR
    print("refuted")
    if cert.refutation:
        print(cert.refutation)
    return EXIT_SPOILER


def _cmd_table(args) -> int:
    print(bounds_table(args.max_r).render())
    return EXIT_DUPLICATOR


def _cmd_campaign(args) -> int:
    caps = {}
    if args.max_nodes:
        caps["max_nodes"] = args.max_nodes
    if args.max_ms:
        caps["max_ms"] = args.max_ms
    report = verify_campaign(args.name, caps)
    out = args.out or f"{args.name}.report.tsv"
    with open(out, "a", encoding="utf-8") as fh:
        fh.write(report.to_tsv() + "\n")
    print(f"{report.passed}/{len(report.lines)} passed; report appended to {out}")
    return EXIT_DUPLICATOR if report.all_pass else EXIT_SPOILER


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(persist_dir=args.persist), host="127.0.0.1", port=args.port)
    return EXIT_DUPLICATOR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msgames", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a game instance")
    solve.add_argument("game", choices=["ef", "ms"])
    solve.add_argument("--a", required=True, help="comma-separated structure specs")
    solve.add_argument("--b", required=True)
    solve.add_argument("--rounds", type=int, default=None)
    solve.add_argument("--atoms", action="store_true")
    solve.add_argument("--no-play-on-top", action="store_true")
    solve.add_argument("--prefix", help="quantifier prefix over E/A")
    solve.add_argument("--constrain-first", choices=["A", "B"])
    solve.add_argument("--certificate", help="write a Spoiler certificate here")
    solve.add_argument("--max-nodes", type=int)
    solve.add_argument("--max-ms", type=float)
    solve.set_defaults(fn=_cmd_solve)

    sentence = sub.add_parser("sentence", help="evaluate or synthesize sentences")
    sentence.add_argument("action", choices=["eval", "synth"])
    sentence.add_argument("--name", choices=library_names())
    sentence.add_argument("--text", help="a sentence in the concrete syntax")
    sentence.add_argument("--model", help="structure spec")
    sentence.add_argument("--atoms", type=int, default=0)
    sentence.add_argument("--from", help="certificate file from solve --certificate")
    sentence.add_argument("--max-nodes", type=int)
    sentence.add_argument("--max-ms", type=float)
    sentence.set_defaults(fn=_cmd_sentence)

    certify = sub.add_parser("certify", help="certify a Duplicator script")
    certify.add_argument("--script", required=True)
    certify.add_argument("--a", required=True)
    certify.add_argument("--b", required=True)
    certify.add_argument("--rounds", type=int, required=True)
    certify.add_argument("--atoms", action="store_true")
    certify.add_argument("--max-nodes", type=int)
    certify.add_argument("--max-ms", type=float)
    certify.set_defaults(fn=_cmd_certify)

    table = sub.add_parser("table", help="print the bounds table")
    table.add_argument("--max-r", type=int, default=10)
    table.set_defaults(fn=_cmd_table)

    campaign = sub.add_parser("campaign", help="run a verification campaign")
    campaign.add_argument("name", choices=CAMPAIGNS)
    campaign.add_argument("--out", help="report path (appended)")
    campaign.add_argument("--max-nodes", type=int)
    campaign.add_argument("--max-ms", type=float)
    campaign.set_defaults(fn=_cmd_campaign)

    serve = sub.add_parser("serve", help="start the HTTP session service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--persist", help="directory for session files")
    serve.set_defaults(fn=_cmd_serve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, DomainError, SynthesisError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
