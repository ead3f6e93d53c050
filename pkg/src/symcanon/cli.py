"""Command-line front end.

Default output is deterministic; wall-clock figures appear only with
``--stats`` (on stderr) and in ``--bench-sizes`` tables.

Exit codes: 0 success, 1 parse error, 2 timeout, 3 unreadable input,
4 bad command line.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from .canonical import SELECTORS, search_canonical
from .errors import SearchTimeout
from .graph import ParseError, matching_graph, parse_cnf, parse_dimacs, random_relabel
from .pipeline import canonical_label_combined, format_stats, phase_stats
from .symmetry import search_automorphisms

MODES = ("auto", "canon", "combined")
EXIT_OK, EXIT_PARSE, EXIT_TIMEOUT, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    input: str = "-"
    format: str = "dimacs"
    mode: str = "combined"
    selector: str = "first"
    early_symmetry: bool = False
    stats: bool = False
    seed: int | None = None
    timeout: float = 1000.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.selector not in SELECTORS:
            raise ValueError(f"unknown selector {self.selector!r}")
        if self.format not in ("dimacs", "cnf"):
            raise ValueError(f"unknown format {self.format!r}")
        if not self.timeout > 0:
            raise ValueError("timeout must be positive")


def _solve(G, config: RunConfig):
    """Run one mode; returns (stdout text, info lines, stats dict)."""
    if config.mode == "auto":
        rep = search_automorphisms(G, time_limit=config.timeout)
        out = "".join(f"{g}\n" for g in rep.generators)
        out += f"grpsize={rep.group_order}\norbits={rep.orbit_partition}\n"
        return out, {}, rep.stats()
    if config.mode == "canon":
        res = search_canonical(G, config.selector, config.early_symmetry, time_limit=config.timeout)
        stats = res.stats()
    else:
        pipe = canonical_label_combined(G, config.selector, time_limit=config.timeout)
        res = pipe.canonical
        stats = {"nodes": sum(pipe.phase_node_counts.values()), "grpsize": res.group_order}
        stats.update(phase_stats(pipe))
    info = {
        "labeling": " ".join(map(str, res.canonical_labeling.image)),
        "digest": res.digest(),
        "grpsize": res.group_order,
    }
    return res.canonical_form.to_dimacs(), info, stats


def run(config: RunConfig, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        if config.input == "-":
            text = stdin.read()
        else:
            with open(config.input) as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        G = parse_cnf(text) if config.format == "cnf" else parse_dimacs(text)
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    if config.seed is not None:
        G, _ = random_relabel(G, config.seed)
    start = time.perf_counter()
    try:
        out, info, stats = _solve(G, config)
    except SearchTimeout:
        print(f"timeout: no result within {config.timeout} s", file=stderr)
        return EXIT_TIMEOUT
    stdout.write(out)
    for k, v in info.items():
        print(f"{k}={v}", file=stderr)
    if config.stats:
        stats["seconds"] = time.perf_counter() - start
        stderr.write(format_stats(stats))
    return EXIT_OK


def bench(config: RunConfig, sizes, out=None, modes=MODES) -> list[dict]:
    """Time every mode on matching graphs with the given vertex counts."""
    out = out or sys.stdout
    rows = []
    print("n\tmode\tnodes\tmillis\tstatus", file=out)
    for n in sizes:
        if n < 2 or n % 2:
            raise ValueError(f"bench size {n} must be an even number >= 2")
        G = matching_graph(n // 2)
        for mode in modes:
            cfg = RunConfig(mode=mode, selector=config.selector,
                            early_symmetry=config.early_symmetry, timeout=config.timeout)
            t0 = time.perf_counter()
            try:
                _, _, stats = _solve(G, cfg)
                row = {"n": n, "mode": mode, "nodes": stats["nodes"], "status": "ok"}
            except SearchTimeout:
                row = {"n": n, "mode": mode, "nodes": None, "status": "timeout"}
            row["millis"] = round((time.perf_counter() - t0) * 1000, 3)
            rows.append(row)
            nodes = "-" if row["nodes"] is None else row["nodes"]
            print(f"{n}\t{mode}\t{nodes}\t{row['millis']}\t{row['status']}", file=out, flush=True)
    return rows


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sizes(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symcanon", description="Graph automorphisms and canonical labeling.")
    p.add_argument("input", nargs="?", default="-", help="input file, '-' for stdin")
    p.add_argument("--format", choices=("dimacs", "cnf"), default="dimacs")
    p.add_argument("--mode", choices=MODES, default="combined")
    p.add_argument("--selector", choices=SELECTORS, default="first")
    p.add_argument("--early-sym", action="store_true", help="left-path early symmetry detection (canon mode)")
    p.add_argument("--stats", action="store_true", help="print key=value statistics on stderr")
    p.add_argument("--seed", type=int, help="randomly relabel the input first")
    p.add_argument("--timeout", type=float, default=1000.0, help="seconds (default 1000)")
    p.add_argument("--bench-sizes", type=_sizes, help="comma-separated vertex counts of matching graphs to benchmark")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(input=args.input, format=args.format, mode=args.mode,
                           selector=args.selector, early_symmetry=args.early_sym,
                           stats=args.stats, seed=args.seed, timeout=args.timeout)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.bench_sizes:
        try:
            bench(config, args.bench_sizes)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_OK
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
