"""Command-line workbench for cellular-automaton keystream generators.

Subcommands cover ring evolution, keystream generation, the XOR cipher,
Walsh-spectrum reports, rule classification, known-plaintext key recovery,
and the statistical battery.  Runs are reproducible from the command line
alone: no environment variables are consulted, and every stochastic
operation takes an explicit seed (or prints the default it used).

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 key recovery
exhausted its trial budget, 5 statistical battery failed.
"""
from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from . import bitio
from .algebra import affine_decomposition, conjugate, conjugate_reflect, equivalence_class, reflect
from .attack import TrialsExhaustedError, attack
from .cipher import KeystreamSpec, keystream, vernam_decrypt, vernam_encrypt
from .engine import Configuration, Rule, RuleAssignment, RuleLike, evolve
from .fips import SAMPLE_BITS, Thresholds, fips_battery
from .spectrum import (
    correlation_immunity_order,
    is_balanced,
    iterate_rule,
    scan_report_csv,
    scan_rules,
    walsh_transform,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_EXHAUSTED = 4
EXIT_TEST_FAILED = 5

DEFAULT_MAX_WIDTH = 1 << 20  # memory cap for ring widths; raise with --max-width

Bits = tuple[int, ...]


def _build_rule(args: argparse.Namespace) -> RuleLike:
    if getattr(args, "rules", None):
        numbers = [int(n) for n in args.rules.split(",") if n]
        if not numbers:
            raise ValueError("--rules must list at least one rule number")
        rules = [Rule.from_number(n, args.radius) for n in numbers]
        return RuleAssignment.cycle(rules, args.width)
    if args.rule is None:
        raise ValueError("one of --rule or --rules is required")
    return Rule.from_number(args.rule, args.radius)


def _initial_config(args: argparse.Namespace) -> Configuration:
    init = args.init
    if init == "single":
        return Configuration.single(_require_width(args))
    if init == "zero":
        return Configuration.zeros(_require_width(args))
    if init == "random":
        if args.seed is None:
            raise ValueError("--init random requires --seed")
        return Configuration.random(_require_width(args), random.Random(args.seed))
    config = Configuration.from_bits(init)
    if args.width is not None and args.width != config.width:
        raise ValueError(f"--width {args.width} does not match --init of length {config.width}")
    return config


def _require_width(args: argparse.Namespace) -> int:
    if args.width is None:
        raise ValueError("--width is required unless the initial state is a literal bit string")
    return args.width


def _check_width_cap(args: argparse.Namespace, width: int) -> None:
    cap = getattr(args, "max_width", DEFAULT_MAX_WIDTH)
    if width > cap:
        raise ValueError(f"ring width {width} exceeds the cap of {cap}; raise it with --max-width")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _emit_stream(bits: Bits, fmt: str, out: str | None) -> None:
    if fmt == "ascii":
        _emit(bitio.format_bits(bits), out)
        return
    data = bitio.pack_bits(bits)
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        with open(out, "wb") as handle:
            handle.write(data)


def _read_stream(path: str, fmt: str, bits: int | None) -> Bits:
    if fmt == "ascii":
        with open(path, encoding="utf-8") as handle:
            return bitio.parse_bits(handle.read())
    if bits is None:
        raise ValueError("--bits is required with --stream-format raw")
    with open(path, "rb") as handle:
        return bitio.unpack_bits(handle.read(), bits)


def cmd_evolve(args: argparse.Namespace) -> int:
    config = _initial_config(args)
    if args.width is None:
        args.width = config.width
    _check_width_cap(args, config.width)
    rule = _build_rule(args)
    diagram = evolve(config, rule, args.steps)
    if args.format == "pbm":
        _emit(bitio.diagram_pbm(diagram), args.out)
    else:
        _emit(bitio.diagram_text(diagram), args.out)
    return EXIT_OK


def cmd_keystream(args: argparse.Namespace) -> int:
    key_arg = args.key
    if key_arg == "random":
        if args.seed is None:
            raise ValueError("--key random requires --seed")
        key = Configuration.random(_require_width(args), random.Random(args.seed))
    elif key_arg == "zero":
        key = Configuration.zeros(_require_width(args))
    else:
        key = Configuration.from_bits(key_arg)
        if args.width is not None and args.width != key.width:
            raise ValueError(f"--width {args.width} does not match --key of length {key.width}")
    if args.width is None:
        args.width = key.width
    _check_width_cap(args, key.width)
    rule = _build_rule(args)
    spec = KeystreamSpec(rule=rule, width=key.width, tap=args.cell, burn_in=args.burn_in)
    bits = keystream(key, spec, args.length)
    _emit_stream(bits, args.stream_format, args.out)
    return EXIT_OK


def _cmd_xor(args: argparse.Namespace) -> int:
    message = _read_stream(args.infile, args.stream_format, args.bits)
    key = _read_stream(args.key, args.stream_format, args.key_bits or args.bits)
    if len(key) != len(message):
        if not args.allow_key_reuse:
            raise ValueError(
                f"key has {len(key)} bits but message has {len(message)}; "
                "pass --allow-key-reuse to cycle or truncate the key material"
            )
        if not key:
            raise ValueError("key stream is empty")
        key = tuple(key[i % len(key)] for i in range(len(message)))
    result = vernam_encrypt(message, key) if args.mode == "encrypt" else vernam_decrypt(message, key)
    _emit_stream(result, args.stream_format, args.out)
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    rule = Rule.from_number(args.rule, args.radius)
    spectrum = walsh_transform(iterate_rule(rule, args.order))
    lines = ["omega,value"]
    lines += [f"{omega},{value}" for omega, value in enumerate(spectrum.values)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _parse_orders(text: str) -> tuple[int, ...]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(p) for p in text.split(",") if p)


def cmd_scan(args: argparse.Namespace) -> int:
    orders = _parse_orders(args.orders)
    only = None
    if args.only:
        only = [int(p) for p in args.only.split(",") if p]
    report = scan_rules(orders)
    _emit(scan_report_csv(report, only=only), args.out)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    rule = Rule.from_number(args.rule)
    f = iterate_rule(rule, 1)
    decomposition = affine_decomposition(rule)
    lines = [
        f"rule = {rule.number}",
        f"class = {','.join(str(m) for m in sorted(equivalence_class(rule)))}",
        f"conjugate = {conjugate(rule).number}",
        f"reflected = {reflect(rule).number}",
        f"conjugate_reflected = {conjugate_reflect(rule).number}",
        f"balanced = {str(is_balanced(f)).lower()}",
        f"affine = {str(decomposition.is_affine).lower()}",
        f"correlation_immunity = {correlation_immunity_order(f)}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_attack(args: argparse.Namespace) -> int:
    observed = bitio.parse_bits(args.sequence)
    if args.width is not None and args.width != len(observed):
        raise ValueError(f"--width {args.width} does not match sequence of length {len(observed)}")
    rule = Rule.from_number(args.rule)
    max_trials = args.max_trials
    if max_trials is None:
        max_trials = 64 << (len(observed) - 1)
    transcript_lines: list[str] = []

    def trace(trial: int, guess: Bits, key: Configuration, matched: bool) -> None:
        guess_text = "".join(str(b) for b in guess)
        transcript_lines.append(f"trial {trial} guess {guess_text} key {key} match {int(matched)}")

    try:
        result = attack(rule, observed, max_trials=max_trials, seed=args.seed, trace=trace)
    except TrialsExhaustedError as exc:
        if args.transcript:
            _emit("\n".join(transcript_lines) + "\n", args.transcript)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if args.transcript:
        _emit("\n".join(transcript_lines) + "\n", args.transcript)
    lines = [
        f"seed = {args.seed}",
        f"max_trials = {max_trials}",
        f"trials_used = {result.trials_used}",
        f"key = {result.recovered_key}",
        f"matched_length = {result.matched_length}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_fips(args: argparse.Namespace) -> int:
    stream = _read_stream(args.infile, args.stream_format, args.bits)
    if len(stream) < SAMPLE_BITS:
        raise ValueError(f"need at least {SAMPLE_BITS} bits, got {len(stream)}")
    window = stream[:SAMPLE_BITS]
    thresholds = Thresholds.from_file(args.thresholds) if args.thresholds else Thresholds.default()
    report = fips_battery(window, thresholds)
    text = f"input.bits = {len(stream)}\ntested.bits = {SAMPLE_BITS}\n" + report.to_text()
    _emit(text, args.out)
    return EXIT_OK if report.passed else EXIT_TEST_FAILED


def _add_rule_flags(parser: argparse.ArgumentParser, nonuniform: bool = True) -> None:
    parser.add_argument("--rule", type=int, help="rule number")
    parser.add_argument("--radius", type=int, default=1, choices=(1, 2), help="neighborhood radius")
    if nonuniform:
        parser.add_argument(
            "--rules",
            help="comma-separated per-cell rule numbers; the pattern is tiled around the ring",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="castream",
        description="Cellular-automaton keystream workbench: simulate, analyze, attack.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="render a space-time diagram")
    _add_rule_flags(p)
    p.add_argument("--width", type=int, help="ring width")
    p.add_argument("--steps", type=int, required=True, help="number of time steps")
    p.add_argument("--init", required=True, help="single | zero | random | literal bits")
    p.add_argument("--seed", type=int, help="seed for --init random")
    p.add_argument("--format", choices=("text", "pbm"), default="text")
    p.add_argument("--max-width", type=int, default=DEFAULT_MAX_WIDTH, help="ring width cap")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("keystream", help="emit the tap-cell sequence of a keyed ring")
    _add_rule_flags(p)
    p.add_argument("--width", type=int, help="ring width")
    p.add_argument("--key", required=True, help="literal bits | random | zero")
    p.add_argument("--seed", type=int, help="seed for --key random")
    p.add_argument("--cell", type=int, default=0, help="tap cell index")
    p.add_argument("--length", type=int, required=True, help="number of keystream bits")
    p.add_argument("--burn-in", type=int, default=0, help="steps discarded before output")
    p.add_argument("--stream-format", choices=("ascii", "raw"), default="ascii")
    p.add_argument("--max-width", type=int, default=DEFAULT_MAX_WIDTH, help="ring width cap")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_keystream)

    for mode in ("encrypt", "decrypt"):
        p = sub.add_parser(mode, help=f"{mode} a bitstream with a keystream file (XOR)")
        p.add_argument("--in", dest="infile", required=True, help="input bitstream file")
        p.add_argument("--key", required=True, help="keystream file")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--stream-format", choices=("ascii", "raw"), default="ascii")
        p.add_argument("--bits", type=int, help="bit count of the input (raw format)")
        p.add_argument("--key-bits", type=int, help="bit count of the key file (raw format)")
        p.add_argument(
            "--allow-key-reuse",
            action="store_true",
            help="cycle or truncate key material instead of requiring an exact-length keystream",
        )
        p.set_defaults(func=_cmd_xor, mode=mode)

    p = sub.add_parser("spectrum", help="Walsh spectrum of an iterated rule")
    p.add_argument("--rule", type=int, required=True)
    p.add_argument("--radius", type=int, default=1, choices=(1, 2))
    p.add_argument("--order", type=int, default=1, help="iteration count")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("scan", help="scan all 256 rules: scores and equivalences (CSV)")
    p.add_argument("--orders", default="1..5", help="iteration orders, e.g. 1..5 or 1,3")
    p.add_argument("--only", help="comma-separated rule numbers to report")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("classify", help="equivalence class, affinity, and immunity of a rule")
    p.add_argument("--rule", type=int, required=True)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("attack", help="recover a key from an observed tap sequence")
    p.add_argument("--rule", type=int, default=30)
    p.add_argument("--width", type=int, help="ring width (defaults to the sequence length)")
    p.add_argument("--sequence", required=True, help="observed tap-cell bits, oldest first")
    p.add_argument("--max-trials", type=int, help="trial budget (default 64 * 2^(N-1))")
    p.add_argument("--seed", type=int, default=0, help="guess-stream seed")
    p.add_argument("--transcript", help="write per-trial audit lines to this path")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("fips", help="run the statistical battery on a bitstream file")
    p.add_argument("--in", dest="infile", required=True, help="input bitstream file")
    p.add_argument("--stream-format", choices=("ascii", "raw"), default="ascii")
    p.add_argument("--bits", type=int, help="bit count of the input (raw format)")
    p.add_argument("--thresholds", help="threshold config file (default: packaged values)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_fips)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
