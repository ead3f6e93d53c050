"""Automorphism search over ordered partition pairs.

The left-most path fixes one vertex per level (top and bottom rows stay
identical) until the partition is discrete, giving a chain of point
stabilizers.  Levels are then revisited deepest first: at level ``l`` the
target ``t_l`` is mapped to every other vertex of its cell, skipping
candidates already known to share an orbit with an explored one.  Each
such subtree is searched depth-first until a discrete or matching pair
yields an automorphism, which is kept as the coset representative and
ends the subtree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import Deadline, VerificationError
from .graph import Graph, Permutation, is_automorphism
from .partition import OPP, CellState, OppClass, initial_partition


class OrbitPartition:
    """Union-find over ``0..n-1`` tracking orbit sizes."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    @property
    def n(self):
        return len(self.parent)

    def find(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    orbit = find

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b] or (self.size[a] == self.size[b] and b < a):
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        return True

    def orbit_size(self, v: int) -> int:
        return self.size[self.find(v)]

    def add_generator(self, gamma: Permutation):
        for v, w in enumerate(gamma.image):
            if v != w:
                self.union(v, w)

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def copy(self) -> "OrbitPartition":
        other = OrbitPartition.__new__(OrbitPartition)
        other.parent = list(self.parent)
        other.size = list(self.size)
        return other

    def orbits(self) -> list[list[int]]:
        groups = {}
        for v in range(self.n):
            groups.setdefault(self.find(v), []).append(v)
        return sorted(groups.values())

    def __eq__(self, other):
        return isinstance(other, OrbitPartition) and self.orbits() == other.orbits()

    def __str__(self):
        return "[" + "|".join(",".join(map(str, o)) for o in self.orbits()) + "]"


@dataclass(frozen=True)
class SymmetryReport:
    generators: list[Permutation]
    group_order: int
    stabilizer_sequence: list[int]
    level_orbits: list[OrbitPartition] = field(repr=False)
    nodes_explored: int
    bad_nodes: int

    @property
    def orbit_partition(self) -> OrbitPartition:
        return self.level_orbits[0]

    def stats(self) -> dict:
        return {"nodes": self.nodes_explored, "bads": self.bad_nodes,
                "levels": len(self.stabilizer_sequence), "gens": len(self.generators),
                "grpsize": self.group_order}


class CosetPrune(NamedTuple):
    level: int
    representative: Permutation


def coset_prune_signal(found: Permutation, level: int, on_left_path: bool = False) -> CosetPrune | None:
    """Where to unwind after ``found`` was extracted below decomposition node
    ``level``.  The left-most path only ever yields the identity, which
    never prunes anything."""
    if on_left_path or found.is_identity():
        return None
    return CosetPrune(level, found)


def orbit_prune(orbits: OrbitPartition, candidate: int, explored: Sequence[int]) -> bool:
    """True when ``candidate`` shares an orbit with an already explored one."""
    root = orbits.find(candidate)
    return any(orbits.find(x) == root for x in explored)


def _choose_branch(state: CellState, pending=None):
    """Pick (target, cell id, ordered bottom candidates) at an active node.

    ``pending`` is the last mapping ``(v1, v2)``; mapping ``v2 -> v1`` is
    tried first when both sit in corresponding, non-identical cells.
    """
    top, bot = state.labs
    ctop, cbot = state.cells
    start, end = state.start, state.end
    if pending is not None:
        v1, v2 = pending
        c = ctop[v2]
        s, e = start[c], end[c]
        if e - s > 1 and cbot[v1] == c and set(top[s:e]) != set(bot[s:e]):
            rest = sorted(x for x in bot[s:e] if x != v1)
            return v2, c, [v1] + rest
    chosen = first = None
    p = 0
    while p < state.n:
        c = state.cell_at(p)
        e = end[c]
        if e - p > 1:
            if first is None:
                first = c
            if set(top[p:e]) != set(bot[p:e]):
                chosen = c
                break
        p = e
    if chosen is None:
        chosen = first
    s, e = start[chosen], end[chosen]
    return top[s], chosen, sorted(bot[s:e])


def branch_children(G: Graph, opp: OPP, pending=None, leftmost: bool = False) -> list[tuple[int, int]]:
    """Ordered ``(target, image)`` children of an active pair."""
    state = CellState.pair(G, opp)
    if leftmost:
        c = state.first_nonsingleton()
        t = state.labs[0][state.start[c]]
        return [(t, t)]
    t, _, cands = _choose_branch(state, pending)
    return [(t, b) for b in cands]


class _SymmetrySearch:
    def __init__(self, G: Graph, deadline: Deadline | None = None):
        self.G = G
        self.deadline = deadline or Deadline()
        pi = initial_partition(G)
        flat = pi.flat()
        self.state = CellState(G, [flat, list(flat)], [len(c) for c in pi.cells])
        self.state.refine()
        self.nodes = 1
        self.bads = 0

    def _child(self, cid, t, b):
        state = self.state
        mark = state.mark()
        state.individualize(cid, (t, b))
        ok = state.refine(())
        self.nodes += 1
        self.deadline.check()
        return mark, ok

    def _candidate(self):
        gamma = Permutation(self.state.row_permutation())
        return gamma if is_automorphism(self.G, gamma) else None

    def explore(self, cid, t, b):
        """Search the subtree mapping ``t -> b`` for any automorphism."""
        state = self.state
        base = state.mark()
        # frame: [candidates, next index, cell id, target, mark to undo on pop]
        stack = [[[b], 0, cid, t, None]]
        while stack:
            frame = stack[-1]
            cands, i, cid, t, node_mark = frame
            if i == len(cands):
                stack.pop()
                if node_mark is not None:
                    state.undo(node_mark)
                continue
            frame[1] = i + 1
            b = cands[i]
            mark, ok = self._child(cid, t, b)
            if not ok:
                self.bads += 1
                state.undo(mark)
                continue
            kind = state.classify()
            if kind is not OppClass.ACTIVE:
                gamma = self._candidate()
                if gamma is not None:
                    state.undo(base)
                    return gamma
                if kind is OppClass.DISCRETE:
                    self.bads += 1
                    state.undo(mark)
                    continue
            t2, c2, cands2 = _choose_branch(state, (t, b))
            stack.append([cands2, 0, c2, t2, mark])
        state.undo(base)
        return None

    def run(self, forced_sequence=None) -> SymmetryReport:
        G, state = self.G, self.state
        n = G.n
        forced = list(forced_sequence or ())
        for i, v in enumerate(forced):
            if not 0 <= v < n:
                raise ValueError(f"forced_sequence level {i}: vertex {v} out of range [0, {n})")

        levels = []
        fi = 0
        hint = 0
        while not state.is_discrete():
            t = cid = None
            while fi < len(forced):
                v = forced[fi]
                fi += 1
                c = state.cells[0][v]
                if state.end[c] - state.start[c] > 1:
                    t, cid = v, c
                    break
            if t is None:
                cid = state.first_nonsingleton(hint)
                hint = state.start[cid]
                t = state.labs[0][hint]
            mark, _ = self._child(cid, t, t)
            levels.append((t, cid, mark))

        uf = OrbitPartition(n)
        level_orbits = [None] * (len(levels) + 1)
        level_orbits[-1] = uf.copy()
        generators = []
        for lvl in range(len(levels) - 1, -1, -1):
            t, cid, mark = levels[lvl]
            state.undo(mark)
            s, e = state.start[cid], state.end[cid]
            explored = [t]
            for b in sorted(state.labs[1][s:e]):
                if b == t or orbit_prune(uf, b, explored):
                    continue
                explored.append(b)
                gamma = self.explore(cid, t, b)
                if gamma is None:
                    continue
                signal = coset_prune_signal(gamma, lvl)
                if signal is None:
                    continue
                if not is_automorphism(G, signal.representative):
                    raise VerificationError(f"emitted non-automorphism {signal.representative}")
                generators.append(signal.representative)
                uf.add_generator(signal.representative)
            level_orbits[lvl] = uf.copy()

        order = math.prod(level_orbits[l].orbit_size(t) for l, (t, _, _) in enumerate(levels))
        return SymmetryReport(
            generators=generators,
            group_order=order,
            stabilizer_sequence=[t for t, _, _ in levels],
            level_orbits=level_orbits,
            nodes_explored=self.nodes,
            bad_nodes=self.bads,
        )


def search_automorphisms(G: Graph, forced_sequence: Sequence[int] | None = None,
                         time_limit: float | None = None) -> SymmetryReport:
    """Generators, group order and per-level orbits of ``Aut(G)``."""
    return _SymmetrySearch(G, Deadline(time_limit)).run(forced_sequence)
