"""``qceqio`` command-line front end.

Exit codes: 0 equivalent / probably-equivalent (and success for the
other commands), 1 not-equivalent, 2 inconclusive, 3 any other error,
64 circuit parse error, 65 wire-count mismatch.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .bench import rows_to_csv, run_bench
from .circuit import (Circuit, CircuitParseError, concat, gate_stats, load_circuit,
                      serialize_circuit, tensor_extend)
from .obfuscate import ObfuscationConfig, QuantumImplementation, Strategy, obfuscate, write_manifest
from .pathsum import circuit_pathsum, evaluate_amplitude
from .pit import MERSENNE_61, PitConfig
from .reduce import CheckConfig, Verdict, check_equivalence, reduce
from .sim import index_bits, simulate_state

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3
EXIT_PARSE = 64
EXIT_WIRES = 65


class _UsageError(Exception):
    pass


class _WireMismatch(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is taken by "inconclusive"
    def error(self, message):
        raise _UsageError(message)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QCEQIO_SEED")
    return int(env) if env else 0


def format_complex(z: complex, digits: int = 12) -> str:
    """``1+0i`` style rendering, rounded to ``digits`` significant places."""
    re_, im = round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0
    return f"{re_:.{digits}g}{im:+.{digits}g}i"


def _bits_arg(value: str, n: int) -> str:
    value = value.strip()
    if value.isdigit() and len(value) == n and set(value) <= {"0", "1"}:
        return value
    try:
        idx = int(value, 0)
    except ValueError:
        raise _UsageError(f"cannot read {value!r} as a basis state") from None
    if not 0 <= idx < 1 << n:
        raise _UsageError(f"basis state {value} out of range for {n} wires")
    return index_bits(idx, n)


def cmd_parse(args) -> int:
    c = load_circuit(args.file)
    if args.stats:
        s = gate_stats(c)
        print(f"wires={s.n_wires} gates={s.total_gates} clifford={s.clifford_count} "
              f"t={s.t_count} rotation={s.rotation_count}")
    else:
        sys.stdout.write(serialize_circuit(c))
    return EXIT_OK


def cmd_pathsum(args) -> int:
    p = circuit_pathsum(load_circuit(args.file))
    if args.reduce:
        p = reduce(p)
    sys.stdout.write(str(p))
    return EXIT_OK


def cmd_amplitude(args) -> int:
    c = load_circuit(args.file)
    n = c.n_wires
    amp = evaluate_amplitude(circuit_pathsum(c), _bits_arg(args.x, n), _bits_arg(args.z, n))
    print(format_complex(amp))
    return EXIT_OK


def cmd_simulate(args) -> int:
    c = load_circuit(args.file)
    n = c.n_wires
    state = simulate_state(c, _bits_arg(args.x, n))
    for idx in np.flatnonzero(np.abs(state) > args.tol):
        print(f"|{index_bits(int(idx), n)}⟩ {format_complex(complex(state[idx]))}")
    return EXIT_OK


def _with_prep(path, prep_path) -> Circuit:
    c = load_circuit(path)
    if prep_path:
        prep = load_circuit(prep_path)
        if prep.n_wires != c.n_wires:
            raise _WireMismatch(f"{prep_path} has {prep.n_wires} wires, {path} has {c.n_wires}")
        c = concat(prep, c)
    return c


def cmd_check(args) -> int:
    c1 = _with_prep(args.file1, args.prep1)
    c2 = _with_prep(args.file2, args.prep2)
    if c1.n_wires != c2.n_wires:
        if not args.pad:
            raise _WireMismatch(f"{args.file1} has {c1.n_wires} wires, {args.file2} has {c2.n_wires}")
        n = max(c1.n_wires, c2.n_wires)
        c1, c2 = tensor_extend(c1, n - c1.n_wires), tensor_extend(c2, n - c2.n_wires)
    seed = _seed(args)
    pit = PitConfig(field_modulus=args.pit_modulus, r_size=args.pit_r, trials=args.pit_trials,
                    seed=seed)
    cfg = CheckConfig(method=args.method, up_to_global_phase=not args.exact_phase, pit=pit,
                      seed=seed)
    result = check_equivalence(c1, c2, cfg)
    print(result)
    if args.verbose and result.reason:
        print(f"# {result.method}: {result.reason}", file=sys.stderr)
    return {Verdict.EQUIVALENT: EXIT_OK, Verdict.PROBABLY_EQUIVALENT: EXIT_OK,
            Verdict.NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT,
            Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[result.verdict]


def cmd_obfuscate(args) -> int:
    c = load_circuit(args.file)
    cfg = ObfuscationConfig(lam=args.lam, ell=args.ell, B=args.B, split_ratio=args.ratio,
                            strategy=Strategy(args.strategy), seed=_seed(args))
    ob = obfuscate(QuantumImplementation.from_circuit(c), cfg)
    prefix = args.output
    with open(f"{prefix}.prep.qcx", "w", encoding="utf-8") as fh:
        fh.write(serialize_circuit(ob.prep))
    with open(f"{prefix}.main.qcx", "w", encoding="utf-8") as fh:
        fh.write(serialize_circuit(ob.main))
    write_manifest(ob, f"{prefix}.manifest.jsonl")
    print(f"wires: {c.n_wires} -> {ob.n_wires} (+{cfg.lam})")
    print(f"prep gates: 0 -> {len(ob.prep.gates)} (+{len(ob.prep.gates)})")
    print(f"main gates: {len(c.gates)} -> {len(ob.main.gates)} (+{len(ob.main.gates) - len(c.gates)})")
    print(f"loops: {cfg.ell}")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = run_bench(args.dir, seed=_seed(args), do_mutate=args.mutate, repeats=args.repeats)
    text = rows_to_csv(rows, args.csv)
    if args.csv is None:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qceqio", description="Path-sum equivalence checking and obfuscation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="parse a circuit and print it canonically")
    sp.add_argument("file")
    sp.add_argument("--stats", action="store_true", help="print gate counts instead")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("pathsum", help="print the path sum of a circuit")
    sp.add_argument("file")
    sp.add_argument("--reduce", action="store_true", help="apply the rewrite rules first")
    sp.set_defaults(func=cmd_pathsum)

    sp = sub.add_parser("amplitude", help="<z|C|x> from the path sum")
    sp.add_argument("file")
    sp.add_argument("--in", dest="x", required=True, help="input bitstring or integer")
    sp.add_argument("--out", dest="z", required=True, help="output bitstring or integer")
    sp.set_defaults(func=cmd_amplitude)

    sp = sub.add_parser("simulate", help="statevector of C|x>")
    sp.add_argument("file")
    sp.add_argument("--in", dest="x", default="0")
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("check", help="decide whether two circuits are equivalent")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.add_argument("--prep1", help="state preparation run before file1")
    sp.add_argument("--prep2", help="state preparation run before file2")
    sp.add_argument("--pad", action="store_true", help="extend the narrower circuit with idle wires")
    sp.add_argument("--method", choices=("auto", "reduce", "pit", "brute"), default="auto")
    sp.add_argument("--exact-phase", action="store_true", help="do not ignore a global phase")
    sp.add_argument("--pit-modulus", type=int, default=MERSENNE_61)
    sp.add_argument("--pit-r", type=int, default=1 << 32)
    sp.add_argument("--pit-trials", type=int, default=8)
    sp.add_argument("--seed", type=int)
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("obfuscate", help="insert split identity loops")
    sp.add_argument("file")
    sp.add_argument("--lambda", dest="lam", type=int, default=2, help="number of flag wires")
    sp.add_argument("--ell", type=int, default=8, help="number of loops")
    sp.add_argument("--B", type=int, default=None, help="loop length bound")
    sp.add_argument("--ratio", type=float, default=0.5, help="split point as a fraction of the loop")
    sp.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.MIXED.value)
    sp.add_argument("--seed", type=int)
    sp.add_argument("-o", "--output", required=True, help="output prefix")
    sp.set_defaults(func=cmd_obfuscate)

    sp = sub.add_parser("bench", help="positive/negative verification timings as CSV")
    sp.add_argument("dir")
    sp.add_argument("--mutate", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--repeats", type=int, default=5)
    sp.add_argument("--csv", default=None, help="write to this file instead of stdout")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"qceqio: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except CircuitParseError as exc:
        print(f"qceqio: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _WireMismatch as exc:
        print(f"qceqio: wire mismatch: {exc}", file=sys.stderr)
        return EXIT_WIRES
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"qceqio: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
