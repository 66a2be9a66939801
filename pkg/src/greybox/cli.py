"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 instance error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .automata import composite_product, image_automaton
from .bench import ALGORITHMS, BenchmarkConfig, ConfigurationError, gen_random_reduced, random_nfa, run_experiment, to_csv
from .compat import Preorder, direct_simulation
from .formats import (
    FormatError,
    dump_mealy,
    dump_nfa,
    dump_suite,
    load_suite,
    mealy_to_dot,
    nfa_to_dot,
    parse_mealy,
    parse_nfa,
)
from .oracle import MutantSpec, TooLarge, completeness_check, mutant_kill_rate
from .testgen import GenerationTimeout, SuiteTooLarge, baseline_tail, complex, simple

OK, USAGE, INSTANCE, FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_mealy(path: str):
    try:
        return parse_mealy(_read(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _load_nfa(path: str):
    try:
        return parse_nfa(_read(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _metrics(algorithm, suite, millis, *, n_h=None, n_t=None, n_m, n_a, k) -> str:
    info = getattr(suite, "info", {})
    record = {
        "algorithm": algorithm,
        "nH": n_h,
        "nT": n_t,
        "nM": n_m,
        "nA": n_a,
        "k": k,
        "e": info.get("e_P", info.get("e")),
        "tests": suite.n_tests(),
        "symbols": suite.n_symbols(),
        "millis": millis,
    }
    return json.dumps(record)


def cmd_gen(args) -> int:
    if args.kind == "mealy":
        m = gen_random_reduced(args.states, args.inputs, args.outputs, args.seed)
        text = mealy_to_dot(m) if args.dot else dump_mealy(m)
    else:
        a = random_nfa(args.states, args.inputs, args.seed, density=args.density)
        text = nfa_to_dot(a) if args.dot else dump_nfa(a)
    _write(args.output, text)
    return OK


def cmd_image(args) -> int:
    a = image_automaton(_load_mealy(args.head))
    _write(args.output, nfa_to_dot(a) if args.dot else dump_nfa(a))
    return OK


def cmd_product(args) -> int:
    p, _ = composite_product(_load_mealy(args.head), _load_mealy(args.tail))
    _write(args.output, mealy_to_dot(p) if args.dot else dump_mealy(p))
    return OK


def _emit_suite(args, algorithm, suite, millis, **sizes) -> int:
    """Suite to ``-o`` (or stdout); metrics line to stdout, or stderr when the suite uses stdout."""
    _write(args.output, dump_suite(suite, outputs=args.outputs))
    line = _metrics(algorithm, suite, millis, **sizes) + "\n"
    if args.metrics:
        with open(args.metrics, "a") as fh:
            fh.write(line)
    (sys.stderr if args.output in (None, "-") else sys.stdout).write(line)
    return OK


def cmd_simple(args) -> int:
    m, a = _load_mealy(args.mealy), _load_nfa(args.nfa)
    started = time.perf_counter()
    suite = simple(m, a, args.k, debug=args.debug, timeout=args.timeout)
    millis = int(round((time.perf_counter() - started) * 1000))
    return _emit_suite(args, "simple", suite, millis, n_m=m.n_states, n_a=a.n_states, k=args.k)


def cmd_complex(args) -> int:
    m, a = _load_mealy(args.mealy), _load_nfa(args.nfa)
    started = time.perf_counter()
    pre = direct_simulation(a) if args.preorder == "simulation" else Preorder.identity(a.n_states)
    suite = complex(m, a, pre, args.k, debug=args.debug, timeout=args.timeout)
    millis = int(round((time.perf_counter() - started) * 1000))
    return _emit_suite(args, "complex", suite, millis, n_m=m.n_states, n_a=a.n_states, k=args.k)


def cmd_baseline(args) -> int:
    h, t = _load_mealy(args.head), _load_mealy(args.tail)
    started = time.perf_counter()
    suite = baseline_tail(h, t, args.k, limit=args.limit)
    millis = int(round((time.perf_counter() - started) * 1000))
    return _emit_suite(
        args, "baseline", suite, millis, n_h=h.n_states, n_t=t.n_states, n_m=t.n_states, n_a=h.n_states, k=args.k
    )


def cmd_verify(args) -> int:
    m, a = _load_mealy(args.mealy), _load_nfa(args.nfa)
    suite = load_suite(_read(args.suite), m, a)
    verdict = completeness_check(m, a, suite, args.k)
    print(verdict.to_json())
    return OK if verdict.complete else FAILED


def cmd_kill(args) -> int:
    m, a = _load_mealy(args.mealy), _load_nfa(args.nfa)
    suite = load_suite(_read(args.suite), m, a)
    rate = mutant_kill_rate(m, a, suite, MutantSpec(m, args.k), args.trials, seed=args.seed)
    print(json.dumps({"kill_rate": rate, "trials": args.trials}))
    return OK


def cmd_bench(args) -> int:
    algorithms = args.algorithms.split(",")
    cfg = BenchmarkConfig(
        head_states=args.head_states,
        tail_states=args.tail_states,
        head_inputs=args.head_inputs,
        shared_alphabet=args.shared_alphabet,
        tail_outputs=args.tail_outputs,
        extra_states=args.extra_states,
        seed=args.seed,
        count=args.count,
        timeout=args.timeout,
    )
    rows = run_experiment(cfg, algorithms, timing=not args.no_timing)
    _write(args.output, to_csv(rows, algorithms))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="greybox", description="k-complete test suites for Mealy machines in an NFA context.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="draw a random reduced Mealy machine or a random context NFA")
    g.add_argument("kind", choices=("mealy", "nfa"))
    g.add_argument("--states", type=int, required=True)
    g.add_argument("--inputs", type=int, required=True, help="input (or NFA) alphabet size")
    g.add_argument("--outputs", type=int, default=2)
    g.add_argument("--density", type=float, default=0.35, help="NFA edge probability")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dot", action="store_true")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    im = sub.add_parser("image", help="context NFA accepting the output language of a head machine")
    im.add_argument("--head", required=True)
    im.add_argument("--dot", action="store_true")
    im.add_argument("-o", "--output")
    im.set_defaults(func=cmd_image)

    pr = sub.add_parser("product", help="composite machine of a head and a tail")
    pr.add_argument("--head", required=True)
    pr.add_argument("--tail", required=True)
    pr.add_argument("--dot", action="store_true")
    pr.add_argument("-o", "--output")
    pr.set_defaults(func=cmd_product)

    for name, func, text in (
        ("simple", cmd_simple, "suite from flat certificates"),
        ("complex", cmd_complex, "suite exploiting a simulation preorder of the context"),
    ):
        s = sub.add_parser(name, help=text)
        s.add_argument("--mealy", required=True)
        s.add_argument("--nfa", required=True)
        s.add_argument("-k", type=int, required=True)
        if name == "complex":
            s.add_argument("--preorder", choices=("simulation", "identity"), default="simulation")
        s.add_argument("--debug", action="store_true", help="check certificate invariants while generating")
        s.add_argument("--timeout", type=float)
        s.set_defaults(func=func)

    b = sub.add_parser("baseline", help="W-method on the composite machine, mapped through the head")
    b.add_argument("--head", required=True)
    b.add_argument("--tail", required=True)
    b.add_argument("-k", type=int, required=True)
    b.add_argument("--limit", type=int, default=None, help="refuse suites above this many words")
    b.set_defaults(func=cmd_baseline)

    for s in (sub.choices["simple"], sub.choices["complex"], b):
        s.add_argument("-o", "--output")
        s.add_argument("--outputs", action="store_true", help="write expected outputs after each test")
        s.add_argument("--metrics", help="append the JSON metrics line to this file")

    for name, func, text in (
        ("verify", cmd_verify, "exhaustive k-completeness check"),
        ("kill", cmd_kill, "kill rate over sampled mutants"),
    ):
        v = sub.add_parser(name, help=text)
        v.add_argument("--mealy", required=True)
        v.add_argument("--nfa", required=True)
        v.add_argument("--suite", required=True)
        v.add_argument("-k", type=int, required=True)
        if name == "kill":
            v.add_argument("--trials", type=int, default=1000)
            v.add_argument("--seed", type=int, default=0)
        v.set_defaults(func=func)

    be = sub.add_parser("bench", help="random cascade experiment, CSV output")
    be.add_argument("--head-states", type=int, default=5)
    be.add_argument("--tail-states", type=int, default=2)
    be.add_argument("--head-inputs", type=int, default=6)
    be.add_argument("--shared-alphabet", type=int, default=3)
    be.add_argument("--tail-outputs", type=int, default=3)
    be.add_argument("--extra-states", type=int, default=0)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--count", type=int, default=10)
    be.add_argument("--timeout", type=float, default=180.0)
    be.add_argument("--algorithms", default="simple,baseline")
    be.add_argument("--no-timing", action="store_true", help="zero the millis column for byte-identical output")
    be.add_argument("-o", "--output")
    be.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench":
            bad = [x for x in args.algorithms.split(",") if x not in ALGORITHMS]
            if bad:
                raise UsageError(f"unknown algorithms: {', '.join(bad)}")
        if getattr(args, "k", 1) is not None and getattr(args, "k", 1) < 1:
            raise UsageError("k must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"greybox: error: {exc}", file=sys.stderr)
        return USAGE
    except (FormatError, ConfigurationError, TooLarge, SuiteTooLarge, GenerationTimeout, ValueError, OSError) as exc:
        print(f"greybox: error: {exc}", file=sys.stderr)
        return INSTANCE


if __name__ == "__main__":
    sys.exit(main())
