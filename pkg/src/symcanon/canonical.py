"""Individualization-refinement canonical labeling.

Each search node is an equitable ordered partition.  Its certificate
fragment lists the positions of the cells that became singletons at that
node, together with every edge incident to one of them, both endpoints
renamed to their positions.  Since a new singleton is joined to either all
or none of any other cell, the fragment does not depend on the order of
vertices inside cells.  Every edge is emitted with final positions once its
second endpoint becomes a singleton, so a leaf certificate determines the
labeled graph, and two leaves with equal certificates differ by an
automorphism.

Certificates are compared level by level as tuples; smaller is better.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .errors import Deadline, VerificationError
from .graph import Graph, Permutation, apply_permutation, is_automorphism
from .partition import CellState, OrderedPartition, initial_partition
from .symmetry import OrbitPartition

SELECTORS = ("first", "maxnonuniform")


@dataclass(frozen=True)
class CanonicalResult:
    canonical_labeling: Permutation
    canonical_form: Graph
    generators: list[Permutation]
    group_order: int
    nodes_explored: int
    leaves_visited: int
    certificate: tuple = field(repr=False, default=())

    def form_bytes(self) -> bytes:
        return self.canonical_form.to_dimacs().encode()

    def digest(self) -> str:
        return hashlib.sha256(self.form_bytes()).hexdigest()

    def stats(self) -> dict:
        return {"nodes": self.nodes_explored, "leaves": self.leaves_visited,
                "gens": len(self.generators), "grpsize": self.group_order}


def _fragment(state: CellState, positions) -> tuple:
    lab, pos = state.labs[0], state.poss[0]
    adj = state.adj
    sing = sorted(set(positions))
    pairs = set()
    for p in sing:
        for w in adj[lab[p]]:
            q = pos[w]
            pairs.add((p, q) if p < q else (q, p))
    return tuple(sing), tuple(sorted(pairs))


def node_certificate_fragment(G: Graph, pi: OrderedPartition, parent: OrderedPartition | None = None) -> tuple:
    """Fragment of an equitable partition relative to its parent (None at the root).

    Returns ``(new singleton positions, sorted edge pairs)``.
    """
    old = set()
    if parent is not None:
        old = {c[0] for c in parent.cells if len(c) == 1}
    pos = pi.positions()
    news = [pos[c[0]] for c in pi.cells if len(c) == 1 and c[0] not in old]
    pairs = set()
    for p in news:
        v = pi.flat()[p]
        for w in G.adj[v]:
            q = pos[w]
            pairs.add((p, q) if p < q else (q, p))
    return tuple(sorted(news)), tuple(sorted(pairs))


def _max_nonuniform(state: CellState) -> int:
    lab, cell = state.labs[0], state.cells[0]
    start, end, adj = state.start, state.end, state.adj
    best, best_count = None, -1
    p = 0
    while p < state.n:
        c = cell[lab[p]]
        e = end[c]
        if e - p > 1:
            hits = {}
            for w in adj[lab[p]]:
                d = cell[w]
                hits[d] = hits.get(d, 0) + 1
            k = sum(1 for d, x in hits.items() if d != c and x < end[d] - start[d])
            if k > best_count:
                best, best_count = c, k
        p = e
    return best


def _selector_index(pi: OrderedPartition, c_start: int) -> int:
    p = 0
    for i, c in enumerate(pi.cells):
        if p == c_start:
            return i
        p += len(c)
    raise AssertionError("cell start not found")


def cell_selector_first(pi: OrderedPartition) -> int:
    for i, c in enumerate(pi.cells):
        if len(c) > 1:
            return i
    raise ValueError("partition is discrete; nothing to select")


def cell_selector_max_nonuniform(G: Graph, pi: OrderedPartition) -> int:
    if pi.is_discrete():
        raise ValueError("partition is discrete; nothing to select")
    state = CellState.single(G, pi)
    c = _max_nonuniform(state)
    return _selector_index(pi, state.start[c])


def left_path_early_symmetry(G: Graph, current: OrderedPartition,
                             leftmost: OrderedPartition) -> Permutation | None:
    """Automorphism taking ``current`` onto ``leftmost``, if the two have the
    same cell sizes and element-identical non-singleton cells.  Singletons map
    by position, non-singleton cells are fixed.  The identity is rejected."""
    if [len(c) for c in current.cells] != [len(c) for c in leftmost.cells]:
        return None
    img = [0] * G.n
    for a, b in zip(current.cells, leftmost.cells):
        if len(a) > 1:
            if set(a) != set(b):
                return None
            for v in a:
                img[v] = v
        else:
            img[a[0]] = b[0]
    gamma = Permutation(img)
    if gamma.is_identity() or not is_automorphism(G, gamma):
        return None
    return gamma


class CanonicalSearch:
    """Depth-first canonical labeling search.

    :meth:`descend` builds the left-most path (the subgroup decomposition)
    and the first leaf; :meth:`backtrack` explores the remaining subtrees.
    The two are separate so a symmetry pass can run in between.
    """

    def __init__(self, G: Graph, selector: str = "first", early_symmetry: bool = False,
                 deadline: Deadline | None = None):
        if selector not in SELECTORS:
            raise ValueError(f"unknown selector {selector!r}")
        self.G = G
        self.selector = selector
        self.early_symmetry = early_symmetry
        self.deadline = deadline or Deadline()
        n = G.n
        pi = initial_partition(G)
        self.state = state = CellState.single(G, pi)
        state.new_singletons = [state.start[c] for c in range(state.ncells) if state.end[c] - state.start[c] == 1]
        state.refine()
        size = n + 2
        self.frags = [None] * size
        self.eq_first = [True] * size
        self.cmp = [0] * size
        self.frags[0] = _fragment(state, state.new_singletons)
        self.nodes = 1
        self.leaves = 0
        self.levels = []
        self.left_snaps = {}
        self.generators = []
        self.orbits = OrbitPartition(n)
        self.orbit_sizes = []

    def _select(self, hint=0) -> int:
        if self.selector == "first":
            return self.state.first_nonsingleton(hint)
        return _max_nonuniform(self.state)

    def _child(self, cid, v, depth):
        state = self.state
        mark = state.mark()
        state.new_singletons = []
        state.individualize(cid, (v,))
        state.refine(())
        self.nodes += 1
        self.deadline.check()
        frag = _fragment(state, state.new_singletons)
        self.frags[depth] = frag
        first = self.first_frags
        self.eq_first[depth] = (self.eq_first[depth - 1] and depth < len(first)
                                and frag == first[depth])
        c = self.cmp[depth - 1]
        if c == 0:
            best = self.best_frags
            if depth < len(best):
                bf = best[depth]
                c = (frag > bf) - (frag < bf)
            else:
                c = 1
        self.cmp[depth] = c
        return mark

    def _nonsingleton_ranges(self):
        state = self.state
        out = []
        p = 0
        while p < state.n:
            e = state.end[state.cell_at(p)]
            if e - p > 1:
                out.append((p, e))
            p = e
        return out

    def descend(self) -> list[int]:
        """Build the left-most path down to the first leaf; return the
        individualized vertices."""
        state = self.state
        self.first_frags = self.best_frags = []
        depth = 0
        hint = 0
        while not state.is_discrete():
            cid = self._select(hint)
            hint = state.start[cid]
            t = state.labs[0][hint]
            mark = self._child(cid, t, depth + 1)
            depth += 1
            self.levels.append((t, cid, mark))
            if self.early_symmetry and not state.is_discrete():
                self.left_snaps[depth] = (list(state.labs[0]), self._nonsingleton_ranges())
        self.leaves = 1
        for j in range(depth + 1):
            self.eq_first[j] = True
            self.cmp[j] = 0
        self.first_frags = self.best_frags = self.frags[:depth + 1]
        self.first_lab = list(state.labs[0])
        self.best_lab = self.first_lab
        return [t for t, _, _ in self.levels]

    def _leaf_symmetry(self, target_lab) -> Permutation:
        img = [0] * self.G.n
        for a, b in zip(self.state.labs[0], target_lab):
            img[a] = b
        return Permutation(img)

    def _early(self, depth):
        snap = self.left_snaps.get(depth)
        if snap is None:
            return None
        left_lab, ranges = snap
        lab = self.state.labs[0]
        if self._nonsingleton_ranges() != ranges:
            return None
        img = [0] * self.G.n
        for a, b in zip(lab, left_lab):
            img[a] = b
        for s, e in ranges:
            if set(lab[s:e]) != set(left_lab[s:e]):
                return None
            for v in lab[s:e]:
                img[v] = v
        gamma = Permutation(img)
        if gamma.is_identity() or not is_automorphism(self.G, gamma):
            return None
        return gamma

    def _explore(self, lvl, cid, b, detect):
        """Search below decomposition node ``lvl`` with ``b`` individualized.

        Returns an automorphism mapping the subtree onto the left-most one
        (which ends the subtree), or None once it is exhausted.
        """
        state = self.state
        lab, start, end = state.labs[0], state.start, state.end
        leaf_depth = len(self.levels)
        early = detect and self.early_symmetry
        base = state.mark()
        # frame: [cell id, next offset, child count, depth, undo mark, fixed children]
        stack = [[cid, 0, 1, lvl, None, (b,)]]
        while stack:
            frame = stack[-1]
            cid, i, count, d, node_mark, fixed = frame
            if i == count:
                stack.pop()
                if node_mark is not None:
                    state.undo(node_mark)
                continue
            frame[1] = i + 1
            v = fixed[i] if fixed else lab[start[cid] + i]
            depth = d + 1
            mark = self._child(cid, v, depth)
            eq = self.eq_first[depth]
            c = self.cmp[depth]
            if state.is_discrete():
                self.leaves += 1
                if detect and eq and depth == leaf_depth:
                    gamma = self._leaf_symmetry(self.first_lab)
                    if not is_automorphism(self.G, gamma):
                        raise VerificationError(f"equal leaf certificates but {gamma} is not an automorphism")
                    state.undo(base)
                    return gamma
                if c < 0:
                    self.best_lab = list(lab)
                    self.best_frags = self.frags[:depth + 1]
                    for j in range(depth + 1):
                        self.cmp[j] = 0
                state.undo(mark)
                continue
            if c > 0 and not (detect and eq):
                state.undo(mark)
                continue
            if early and eq:
                gamma = self._early(depth)
                if gamma is not None:
                    state.undo(base)
                    return gamma
            c2 = self._select(start[cid])
            stack.append([c2, 0, end[c2] - start[c2], depth, mark, None])
        state.undo(base)
        return None

    def backtrack(self, level_orbits: list[OrbitPartition] | None = None):
        """Explore every non-left subtree, deepest level first.

        With ``level_orbits`` (orbits of each stabilizer in the chain) only
        one candidate per orbit is expanded and no symmetries are searched
        for; otherwise automorphisms are collected as they are found.
        """
        state = self.state
        detect = level_orbits is None
        if level_orbits is not None and len(level_orbits) < len(self.levels):
            raise ValueError("need one orbit partition per decomposition level")
        self.orbit_sizes = [1] * len(self.levels)
        for lvl in range(len(self.levels) - 1, -1, -1):
            t, cid, mark = self.levels[lvl]
            state.undo(mark)
            orbits = self.orbits if detect else level_orbits[lvl]
            s, e = state.start[cid], state.end[cid]
            explored = [t]
            roots = {orbits.find(t)}
            for b in sorted(state.labs[0][s:e]):
                if b == t or orbits.find(b) in roots:
                    continue
                explored.append(b)
                roots.add(orbits.find(b))
                gamma = self._explore(lvl, cid, b, detect)
                if gamma is not None:
                    self.generators.append(gamma)
                    self.orbits.add_generator(gamma)
                    roots = {orbits.find(x) for x in explored}
            self.orbit_sizes[lvl] = orbits.orbit_size(t)

    def result(self, generators=None, group_order=None) -> CanonicalResult:
        n = self.G.n
        img = [0] * n
        for i, v in enumerate(self.best_lab):
            img[v] = i
        labeling = Permutation(img)
        if generators is None:
            generators = list(self.generators)
        if group_order is None:
            group_order = math.prod(self.orbit_sizes)
        for g in generators:
            if not is_automorphism(self.G, g):
                raise VerificationError(f"emitted non-automorphism {g}")
        return CanonicalResult(
            canonical_labeling=labeling,
            canonical_form=apply_permutation(self.G, labeling),
            generators=generators,
            group_order=group_order,
            nodes_explored=self.nodes,
            leaves_visited=self.leaves,
            certificate=tuple(self.best_frags),
        )


def decomposition_sequence(G: Graph, selector: str = "first") -> list[int]:
    return CanonicalSearch(G, selector).descend()


def search_canonical(G: Graph, selector: str = "first", enable_early_symmetry: bool = False,
                     time_limit: float | None = None) -> CanonicalResult:
    search = CanonicalSearch(G, selector, enable_early_symmetry, Deadline(time_limit))
    search.descend()
    search.backtrack()
    return search.result()

