"""``symsmt`` command line: solve, preprocess, syms, oracle, bench, gen."""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import List, Optional

from . import dimacs
from .ast import And, Script, conjoin
from .bench import DEFAULT_TIMEOUT, load_corpus, run_bench, write_report
from .errors import ResourceExceeded, SymSmtError
from .generate import DEFAULT_GEN_BOUND, Profile, generate_corpus
from .oracle import brute_force
from .parser import parse_file
from .printer import serialize
from .sbp import DEFAULT_K, OrderingMode, build_theory_sbp
from .skeleton import extract_skeleton, to_cnf
from .symgraph import detect_symmetries
from .solver import HybridOrder, Mode, SolveConfig, Status, add_symmetry_breaking, solve
from .theory import DEFAULT_BOUND

EXIT_DECIDED, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 means "unknown" here
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def parse_duration(text: str) -> float:
    m = re.fullmatch(r"\s*([0-9]*\.?[0-9]+)\s*(ms|s|m)?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad duration {text!r}")
    value = float(m.group(1))
    return value * {"ms": 1e-3, "s": 1.0, "m": 60.0, None: 1.0}[m.group(2)]


def _solver_flags(p: argparse.ArgumentParser, timeout_default: Optional[float] = 60.0) -> None:
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.SYM.value)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND, metavar="B")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--t-budget", type=parse_duration, default=None, help="hybrid phase-1 budget")
    p.add_argument("--hybrid-order", choices=[h.value for h in HybridOrder], default=HybridOrder.SYM_FIRST.value)
    p.add_argument("--ordering", choices=[o.value for o in OrderingMode], default=OrderingMode.HEURISTIC.value)
    p.add_argument("--timeout", type=parse_duration, default=timeout_default)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--carry-conflicts", action="store_true")
    p.add_argument("--shrink-core", action="store_true")


def _config(args) -> SolveConfig:
    return SolveConfig(mode=args.mode, bound=args.bound, k=args.k, ordering_mode=args.ordering,
                       hybrid_budget_t=args.t_budget, hybrid_order=args.hybrid_order,
                       total_deadline=args.timeout, carry_conflicts=args.carry_conflicts,
                       shrink_core=args.shrink_core)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="symsmt", description="Bounded-domain lazy SMT solver with skeleton symmetry breaking.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("solve", help="decide an SMT-LIB file")
    p.add_argument("file")
    _solver_flags(p)
    p.add_argument("--json", metavar="PATH", help="write the result JSON here (default: stderr)")
    p.add_argument("--dimacs", metavar="PATH", help="write the working skeleton CNF")

    p = sub.add_parser("preprocess", help="emit SBP-augmented DIMACS and SMT-LIB")
    p.add_argument("file")
    _solver_flags(p)
    p.add_argument("--dimacs", metavar="PATH")
    p.add_argument("--smt2", metavar="PATH", help="SMT-LIB output with theory SBPs conjoined")
    p.add_argument("--json", metavar="PATH")

    p = sub.add_parser("syms", help="print accepted symmetries")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=8)
    p.add_argument("--json", metavar="PATH")

    p = sub.add_parser("oracle", help="brute-force decision over [-B, B]^n")
    p.add_argument("file")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND, metavar="B")
    p.add_argument("--json", metavar="PATH")

    p = sub.add_parser("bench", help="run every mode over a corpus")
    p.add_argument("corpus")
    _solver_flags(p, DEFAULT_TIMEOUT)
    p.add_argument("--modes", default="plain,sym,hybrid")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--csv", metavar="PATH")

    p = sub.add_parser("gen", help="generate a random corpus")
    p.add_argument("--profile", choices=[x.value for x in Profile], default=Profile.MIXED.value)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=DEFAULT_GEN_BOUND, metavar="B")
    p.add_argument("--out", required=True, metavar="DIR")
    return ap


def _emit_json(obj, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text, file=sys.stderr)


def _cmd_solve(args) -> int:
    script = parse_file(args.file)
    config = _config(args)
    res = solve(script, config)
    print({Status.SAT: "sat", Status.UNSAT: "unsat", Status.UNKNOWN: "unknown"}[res.status])
    out = res.to_json(config)
    out["config_echo"]["seed"] = args.seed
    _emit_json(out, args.json)
    if args.dimacs:
        _write_dimacs(script, config, args.dimacs)
    return EXIT_DECIDED if res.decided else EXIT_UNKNOWN


def _augmented(script: Script, config: SolveConfig):
    psi, phi = extract_skeleton(script)
    cnf = to_cnf(psi, len(phi))
    detection = sbps = None
    if config.mode is not Mode.PLAIN:
        detection, _, sbps = add_symmetry_breaking(script, psi, phi, cnf, config)
    return phi, cnf, detection, sbps


def _write_dimacs(script: Script, config: SolveConfig, path: str) -> None:
    phi, cnf, _, _ = _augmented(script, config)
    Path(path).write_text(dimacs.dumps(cnf, phi))


def _cmd_preprocess(args) -> int:
    script = parse_file(args.file)
    config = _config(args)
    if config.mode is Mode.PLAIN:
        config.mode = Mode.SYM
    phi, cnf, detection, sbps = _augmented(script, config)
    labels = phi.labels()
    theory_parts = [build_theory_sbp(t, script.sorts, [n for n, _ in script.declarations])
                    for t in detection.accepted if t.theory]
    info = {
        "skeleton_vars": len(phi),
        "clauses": len(cnf.clauses),
        "permutations": [t.cycles(labels) for t in detection.accepted],
        "sbp_clauses": sum(len(s.clauses) for s in sbps),
        "theory_sbps": len(theory_parts),
    }
    text = dimacs.dumps(cnf, phi)
    if args.dimacs:
        Path(args.dimacs).write_text(text)
    else:
        sys.stdout.write(text)
    if args.smt2:
        base = list(script.assertion.args) if isinstance(script.assertion, And) else [script.assertion]
        aug = Script(script.declarations, conjoin(base + theory_parts),
                     script.logic, script.info, script.source)
        Path(args.smt2).write_text(serialize(aug))
    _emit_json(info, args.json)
    return EXIT_DECIDED


def _cmd_syms(args) -> int:
    script = parse_file(args.file)
    psi, phi = extract_skeleton(script)
    det = detect_symmetries(script, psi, phi, args.limit)
    labels = phi.labels()
    for t in det.accepted:
        print(t.cycles(labels))
    summary = det.summary()
    summary["permutations"] = [t.cycles(labels) for t in det.accepted]
    summary["atoms"] = phi.describe()
    _emit_json(summary, args.json)
    return EXIT_DECIDED


def _cmd_oracle(args) -> int:
    script = parse_file(args.file)
    res = brute_force(script, args.bound, cap=1)
    print("sat" if res.sat else "unsat")
    print(f"models {res.count}")
    out = {"schema": 1, "status": res.status, "model_count": res.count,
           "model": res.models[0] if res.models else {}}
    if args.json:
        _emit_json(out, args.json)
    return EXIT_DECIDED


def _cmd_bench(args) -> int:
    corpus = load_corpus(args.corpus)
    if not corpus:
        raise _UsageError(f"no .smt2 files under {args.corpus}")
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    for m in modes:
        Mode(m)
    config = _config(args)
    report = run_bench(corpus, modes, args.timeout, config, args.jobs)
    write_report(report, args.json, args.csv)
    s = report.summary()
    print(f"instances {s['instances']}  timeouts {s['timeouts']}")
    for m in modes:
        others = "  ".join(f"not-{b} {n}" for b, n in s["non_overlap"][m].items())
        print(f"{m:<8} solved {s['solved'][m]:>4}  {others}")
    return EXIT_DECIDED


def _cmd_gen(args) -> int:
    insts = generate_corpus(args.seed, args.count, args.profile, args.bound, args.out)
    sat = sum(i.sat for i in insts)
    print(f"wrote {len(insts)} instances to {args.out} ({sat} sat, {len(insts) - sat} unsat)")
    return EXIT_DECIDED


_COMMANDS = {
    "solve": _cmd_solve, "preprocess": _cmd_preprocess, "syms": _cmd_syms,
    "oracle": _cmd_oracle, "bench": _cmd_bench, "gen": _cmd_gen,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_ERROR
    except (SymSmtError, ValueError, OSError) as e:
        kind = "resource limit" if isinstance(e, ResourceExceeded) else "error"
        print(f"symsmt: {kind}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
