"""Command line: ``corefine minimize | convert-grammar | generate``.

Data goes to stdout, diagnostics and statistics to stderr.  Exit status is 0
on success, 1 for malformed input and 2 when an internal invariant breaks.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import monoids
from .coalgebra import desort, format_coalgebra, read_coalgebra, write_partition
from .refiner import InvariantViolation, Refiner
from .wta import generate_random, parse_berkeley, wta_to_coalgebra

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def run_report(enc, refiner, parse_s) -> dict:
    s = refiner.stats
    return {
        "n": enc.n0,
        "n'": enc.n,
        "m": enc.m,
        "P1'": s.initial_blocks,
        "Pf'": s.final_blocks,
        "Pf": s.final_blocks_sort0,
        "parse_s": round(parse_s, 4),
        "init_s": round(s.init_s, 4),
        "refine_s": round(s.refine_s, 4),
        "update_labels": s.label_traffic,
    }


def cmd_minimize(args, out, err) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
        start = time.perf_counter()
        _, c = read_coalgebra(text)
        enc = desort(c, fuse=not args.no_fuse)
        parse_s = time.perf_counter() - start
    except (ValueError, OSError) as e:
        print(f"{args.path}:{e}", file=err)
        return EXIT_INPUT
    try:
        r = Refiner(enc, singleton_opt=not args.no_singleton_opt)
        r.run()
    except (InvariantViolation, KeyError, AssertionError) as e:
        print(f"internal error: {e!r}", file=err)
        return EXIT_INTERNAL
    out.write(write_partition(enc.names, r.P.block[:enc.n0], as_json=args.json))
    if args.stats:
        for k, v in run_report(enc, r, parse_s).items():
            print(f"{k}={v}", file=err)
    return EXIT_OK


def cmd_convert_grammar(args, out, err) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            c = parse_berkeley(fh.read())
    except (ValueError, OSError) as e:
        print(f"{args.path}: {e}", file=err)
        return EXIT_INPUT
    out.write(format_coalgebra(c))
    return EXIT_OK


def cmd_generate(args, out, err) -> int:
    try:
        wta = generate_random(args.states, args.transitions, args.symbols, args.rank,
                              args.monoid, args.cap, args.seed)
    except ValueError as e:
        print(f"generate: {e}", file=err)
        return EXIT_INPUT
    out.write(format_coalgebra(wta_to_coalgebra(wta)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corefine", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("minimize", help="print the behavioural equivalence classes of a coalgebra file")
    m.add_argument("path")
    m.add_argument("--stats", action="store_true", help="report sizes and timings on stderr")
    m.add_argument("--json", action="store_true", help="print a name -> block JSON object")
    m.add_argument("--no-singleton-opt", action="store_true",
                   help="keep weights for blocks with a single state")
    m.add_argument("--no-fuse", action="store_true",
                   help="give every nested functor its own intermediate states")
    m.set_defaults(func=cmd_minimize)

    g = sub.add_parser("convert-grammar", help="convert a berkeleyparser grammar to a coalgebra file")
    g.add_argument("path")
    g.set_defaults(func=cmd_convert_grammar)

    r = sub.add_parser("generate", help="print a random weighted tree automaton as a coalgebra file")
    r.add_argument("--states", "-n", type=int, required=True)
    r.add_argument("--transitions", "-t", type=int, default=50)
    r.add_argument("--symbols", type=int, default=4)
    r.add_argument("--rank", type=int, default=2)
    r.add_argument("--monoid", choices=sorted(monoids.BY_NAME), default="maxnat")
    r.add_argument("--cap", type=int, default=50, help="number of distinct weights")
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_generate)
    return p


def main(argv=None, out=None, err=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args, out or sys.stdout, err or sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
