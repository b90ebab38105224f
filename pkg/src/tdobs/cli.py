"""Command line entry point ``tdobs``.

Exit codes: 0 success, 1 usage error, 2 data-integrity error, 130 interrupted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, storage
from .canon import DEFAULT_CUTOFF, canonical_form
from .enumeration import IntegrityError
from .graph import Graph6Error, GraphError, from_graph6
from .obstruction import Mode
from .pipeline import (
    RunConfig,
    UsageError,
    compare_with_prior,
    default_workers,
    oracle_check,
    read_obstructions,
    run_levels,
    run_obstructions,
)
from .treedepth import TreedepthSolver

EXIT_USAGE = 1
EXIT_INTEGRITY = 2
EXIT_INTERRUPTED = 130


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _run_args(p: argparse.ArgumentParser, mode: bool = False) -> None:
    p.add_argument("--k", type=int, required=True, help="treedepth bound")
    p.add_argument("--n-max", type=int, required=True, help="largest vertex count")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default $TDOBS_WORKERS or 1)")
    p.add_argument("--canon-cutoff", type=int, default=DEFAULT_CUTOFF)
    p.add_argument("--resume", action="store_true", help="skip stages whose outputs verify")
    if mode:
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.LOOKUP.value)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tdobs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _run_args(sub.add_parser("levels", help="enumerate graphs with td <= k level by level"))
    _run_args(sub.add_parser("obstructions", help="compute obstruction sets from stored levels"), mode=True)

    p = sub.add_parser("td", help="treedepth of graph6 lines on stdin")
    p.add_argument("--certificate", action="store_true", help="append the elimination forest parent array")

    p = sub.add_parser("canon", help="canonical graph6 of graph6 lines on stdin")
    p.add_argument("--canon-cutoff", type=int, default=DEFAULT_CUTOFF)

    p = sub.add_parser("oracle", help="diff stored outputs against brute force")
    p.add_argument("--scope", choices=["levels", "obstructions"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-limit", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--canon-cutoff", type=int, default=DEFAULT_CUTOFF)
    p.add_argument("--exhaustive", action="store_true", help="check every proper subgraph and minor")

    p = sub.add_parser("compare", help="diff the induced obstructions against a prior list")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--prior", type=Path, required=True, help="graph6 file of previously known obstructions")
    p.add_argument("--kind", choices=list(storage.OBS_KINDS), default="induced")
    p.add_argument("--canon-cutoff", type=int, default=DEFAULT_CUTOFF)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        k=args.k,
        n_max=args.n_max,
        out_dir=args.out,
        mode=getattr(args, "mode", Mode.LOOKUP.value),
        workers=args.workers if args.workers is not None else default_workers(),
        canon_cutoff=args.canon_cutoff,
        resume=args.resume,
    )


def _read_graphs(stream):
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line:
            continue
        try:
            yield line, from_graph6(line)
        except Graph6Error as exc:
            raise UsageError(f"stdin line {lineno}: {exc}") from None


def _cmd_td(args: argparse.Namespace) -> None:
    solver = TreedepthSolver()
    for line, g in _read_graphs(sys.stdin):
        if g.n == 0:
            print(f"{line}\t0")
            continue
        res = solver.treedepth(g)
        if args.certificate:
            parents = ",".join("-1" if p is None else str(p) for p in res.certificate.parent)
            print(f"{line}\t{res.value}\t{parents}")
        else:
            print(f"{line}\t{res.value}")


def _cmd_canon(args: argparse.Namespace) -> None:
    for _, g in _read_graphs(sys.stdin):
        print(canonical_form(g, args.canon_cutoff).decode())


def _cmd_oracle(args: argparse.Namespace) -> None:
    cfg = RunConfig(args.k, max(args.k + 1, args.n_limit), args.out, canon_cutoff=args.canon_cutoff, workers=1)
    problems = oracle_check(cfg, args.scope, args.n_limit, args.exhaustive)
    for line in problems:
        print(line)
    print(f"oracle {args.scope} k={args.k} n<={args.n_limit}: {len(problems)} discrepancies")


def _cmd_compare(args: argparse.Namespace) -> None:
    manifest = storage.Manifest(args.out, args.k)
    n_values = sorted(int(n) for n in manifest.data["obstructions"])
    if not n_values:
        raise UsageError(f"no obstruction results for k={args.k} in {args.out}")
    found = read_obstructions(args.out, args.k, args.kind, n_values)
    prior = storage.read_lines(args.prior)
    report = compare_with_prior(found, prior, args.canon_cutoff)
    print(f"computed {len(found)}, prior {len(prior)}")
    for form in report["new"]:
        print(f"new\t{form.decode()}")
    for form in report["not_reproduced"]:
        print(f"not_reproduced\t{form.decode()}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "levels":
            run_levels(_config(args))
        elif args.command == "obstructions":
            cfg = _config(args)
            run_obstructions(cfg)
            sys.stdout.write(storage.summary_path(cfg.out_dir, cfg.k).read_text())
        elif args.command == "td":
            _cmd_td(args)
        elif args.command == "canon":
            _cmd_canon(args)
        elif args.command == "oracle":
            _cmd_oracle(args)
        elif args.command == "compare":
            _cmd_compare(args)
    except IntegrityError as exc:
        print(f"tdobs: integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (UsageError, GraphError, FileNotFoundError) as exc:
        print(f"tdobs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        # completed stages are already on disk; rerun with --resume
        print("tdobs: interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    return 0


if __name__ == "__main__":
    sys.exit(main())
