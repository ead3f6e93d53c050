"""Symmetries first, canonical labeling second.

Phase 1 builds the canonical search's left-most path.  Phase 2 runs the
automorphism search with its left-most path forced onto the same vertex
sequence and keeps the orbit partition of every stabilizer in the chain.
Phase 3 resumes the canonical search, expanding one candidate per orbit at
each decomposition level and no longer looking for symmetries.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .canonical import CanonicalResult, CanonicalSearch
from .errors import Deadline
from .graph import Graph
from .symmetry import SymmetryReport, _SymmetrySearch

PHASES = ("phase1", "phase2", "phase3")


@dataclass(frozen=True)
class PipelineResult:
    canonical: CanonicalResult
    symmetry: SymmetryReport
    phase_timings: dict
    phase_node_counts: dict


def canonical_label_combined(G: Graph, selector: str = "first",
                             time_limit: float | None = None) -> PipelineResult:
    deadline = Deadline(time_limit)
    clock = time.perf_counter

    t0 = clock()
    search = CanonicalSearch(G, selector, early_symmetry=False, deadline=deadline)
    sequence = search.descend()
    n1 = search.nodes
    t1 = clock()

    report = _SymmetrySearch(G, deadline).run(sequence)
    if report.stabilizer_sequence != sequence:
        raise AssertionError("symmetry search did not follow the forced stabilizer sequence")
    t2 = clock()

    search.backtrack(report.level_orbits)
    t3 = clock()

    canonical = search.result(generators=list(report.generators), group_order=report.group_order)
    return PipelineResult(
        canonical=canonical,
        symmetry=report,
        phase_timings={"phase1": t1 - t0, "phase2": t2 - t1, "phase3": t3 - t2},
        phase_node_counts={"phase1": n1, "phase2": report.nodes_explored,
                           "phase3": search.nodes - n1},
    )


def phase_stats(result: PipelineResult) -> dict:
    """Flat record of per-phase node counts and seconds, plus totals."""
    out = {}
    for p in PHASES:
        out[f"{p}_nodes"] = result.phase_node_counts[p]
    out["total_nodes"] = sum(result.phase_node_counts[p] for p in PHASES)
    for p in PHASES:
        out[f"{p}_seconds"] = result.phase_timings[p]
    out["total_seconds"] = sum(result.phase_timings[p] for p in PHASES)
    return out


def format_stats(stats: dict) -> str:
    """``key=value`` lines; floats use ``repr`` so they parse back exactly."""
    return "".join(f"{k}={v!r}\n" if isinstance(v, float) else f"{k}={v}\n" for k, v in stats.items())


def parse_stats(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        try:
            out[key] = int(value)
        except ValueError:
            try:
                out[key] = float(value)
            except ValueError:
                out[key] = value
    return out
