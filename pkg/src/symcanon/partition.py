"""Ordered partitions, ordered partition pairs, and equitable refinement.

The value types (:class:`OrderedPartition`, :class:`OPP`) are immutable and
used at API boundaries.  The searches work on :class:`CellState`, a mutable
cell structure with one or two rows of vertex orderings sharing the same
cell boundaries, and a trail so every split can be undone exactly.

Refinement convention: a FIFO work-list of splitter cells.  A cell split by
a splitter is reordered so that vertices with fewer neighbors in the
splitter come first; touched vertices are sorted by (count, position) so
the result never depends on vertex names.  The fragments replace the cell
in place.  If the split cell was already waiting in the work-list every
fragment joins it, otherwise all fragments but the first largest do.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, Permutation


@dataclass(frozen=True)
class OrderedPartition:
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        flat = [v for c in cells for v in c]
        if any(not c for c in cells):
            raise ValueError("empty cell in ordered partition")
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("cells do not partition 0..n-1")

    @classmethod
    def unit(cls, n: int) -> "OrderedPartition":
        return cls((tuple(range(n)),) if n else ())

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.cells)

    def __len__(self):
        return len(self.cells)

    def flat(self) -> list[int]:
        return [v for c in self.cells for v in c]

    def position(self, v: int) -> int:
        return self.flat().index(v)

    def positions(self) -> list[int]:
        pos = [0] * self.n
        for i, v in enumerate(self.flat()):
            pos[v] = i
        return pos

    def cell_index(self, v: int) -> int:
        for i, c in enumerate(self.cells):
            if v in c:
                return i
        raise ValueError(f"vertex {v} not in partition")

    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.cells)

    def is_unit(self) -> bool:
        return len(self.cells) == 1

    def same_cells(self, other: "OrderedPartition") -> bool:
        """Equal as ordered partitions, ignoring order inside cells."""
        return len(self.cells) == len(other.cells) and all(
            set(a) == set(b) for a, b in zip(self.cells, other.cells))

    def permuted(self, gamma: Permutation) -> "OrderedPartition":
        return OrderedPartition(tuple(gamma[v] for v in c) for c in self.cells)

    def __str__(self):
        return "[" + "|".join(",".join(map(str, c)) for c in self.cells) + "]"


class OppClass(enum.Enum):
    NON_ISOMORPHIC = "non-isomorphic"
    DISCRETE = "discrete"
    MATCHING = "matching"
    ACTIVE = "active"


@dataclass(frozen=True)
class OPP:
    top: OrderedPartition
    bottom: OrderedPartition

    def is_isomorphic(self) -> bool:
        return (len(self.top) == len(self.bottom)
                and all(len(a) == len(b) for a, b in zip(self.top.cells, self.bottom.cells)))

    def classify(self) -> OppClass:
        if not self.is_isomorphic():
            return OppClass.NON_ISOMORPHIC
        if self.top.is_discrete():
            return OppClass.DISCRETE
        for a, b in zip(self.top.cells, self.bottom.cells):
            if len(a) > 1 and set(a) != set(b):
                return OppClass.ACTIVE
        return OppClass.MATCHING

    def __str__(self):
        return f"{self.top} / {self.bottom}"


class CellState:
    """Mutable partition rows over a shared cell structure.

    Cells are identified by small integer ids; ``start[c]``/``end[c]`` give
    the position range of cell ``c`` and ``cell[r][v]`` the id of the cell
    holding ``v`` in row ``r``.  Row 0 is the top partition, row 1 (when
    present) the bottom one.
    """

    def __init__(self, G: Graph, rows: Sequence[Sequence[int]], sizes: Sequence[int]):
        n = G.n
        self.n = n
        self.adj = G.adj
        self.labs = [list(r) for r in rows]
        self.poss = []
        self.cells = []
        self.start = [0] * max(n, 1)
        self.end = [0] * max(n, 1)
        p = 0
        for cid, size in enumerate(sizes):
            self.start[cid] = p
            self.end[cid] = p + size
            p += size
        self.ncells = len(sizes)
        self.next_id = len(sizes)
        for lab in self.labs:
            pos = [0] * n
            cell = [0] * n
            for i, v in enumerate(lab):
                pos[v] = i
            for cid in range(self.ncells):
                for i in range(self.start[cid], self.end[cid]):
                    cell[lab[i]] = cid
            self.poss.append(pos)
            self.cells.append(cell)
        self.queue = deque()
        self.inq = bytearray(max(n, 1))
        self.trail = []
        self.new_singletons = []

    @classmethod
    def single(cls, G: Graph, pi: OrderedPartition) -> "CellState":
        _check_partition(G, pi)
        return cls(G, [pi.flat()], [len(c) for c in pi.cells])

    @classmethod
    def pair(cls, G: Graph, opp: OPP) -> "CellState":
        _check_partition(G, opp.top)
        _check_partition(G, opp.bottom)
        if not opp.is_isomorphic():
            raise ValueError("OPP is not isomorphic")
        return cls(G, [opp.top.flat(), opp.bottom.flat()], [len(c) for c in opp.top.cells])

    # -- inspection -------------------------------------------------------

    def cell_at(self, p: int) -> int:
        return self.cells[0][self.labs[0][p]]

    def is_discrete(self) -> bool:
        return self.ncells == self.n

    def cell_ids(self) -> list[int]:
        out = []
        p = 0
        while p < self.n:
            c = self.cell_at(p)
            out.append(c)
            p = self.end[c]
        return out

    def first_nonsingleton(self, hint: int = 0) -> int | None:
        p = hint
        n = self.n
        end = self.end
        cell0 = self.cells[0]
        lab0 = self.labs[0]
        while p < n:
            c = cell0[lab0[p]]
            e = end[c]
            if e - p > 1:
                return c
            p = e
        return None

    def partition(self, row: int = 0) -> OrderedPartition:
        lab = self.labs[row]
        return OrderedPartition(tuple(lab[self.start[c]:self.end[c]]) for c in self.cell_ids())

    def opp(self) -> OPP:
        return OPP(self.partition(0), self.partition(1))

    def is_matching(self) -> bool:
        """Corresponding non-singleton cells hold the same vertices."""
        top, bot = self.labs
        p = 0
        while p < self.n:
            e = self.end[self.cell_at(p)]
            if e - p > 1 and set(top[p:e]) != set(bot[p:e]):
                return False
            p = e
        return True

    def classify(self) -> OppClass:
        if self.is_discrete():
            return OppClass.DISCRETE
        if len(self.labs) == 1 or self.is_matching():
            return OppClass.MATCHING
        return OppClass.ACTIVE

    def row_permutation(self) -> list[int]:
        """Image list mapping singleton top vertices to bottom ones, fixing the rest."""
        top, bot = self.labs
        img = list(range(self.n))
        p = 0
        while p < self.n:
            e = self.end[self.cell_at(p)]
            if e - p == 1:
                img[top[p]] = bot[p]
            p = e
        return img

    # -- mutation ---------------------------------------------------------

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int):
        trail = self.trail
        start, end = self.start, self.end
        while len(trail) > mark:
            cid, old_start, old_end, new_ids, changes = trail.pop()
            for r, lab in enumerate(self.labs):
                cell = self.cells[r]
                for nid in new_ids:
                    for i in range(start[nid], end[nid]):
                        cell[lab[i]] = cid
                pos = self.poss[r]
                for p, v in reversed(changes[r]):
                    lab[p] = v
                    pos[v] = p
            start[cid] = old_start
            end[cid] = old_end
            self.next_id -= len(new_ids)
            self.ncells -= len(new_ids)

    def _enqueue(self, c: int):
        if not self.inq[c]:
            self.inq[c] = 1
            self.queue.append(c)

    def _clear_queue(self):
        for c in self.queue:
            self.inq[c] = 0
        self.queue.clear()

    def individualize(self, cid: int, vertices: Sequence[int]) -> int:
        """Split ``vertices[r]`` out of cell ``cid`` in each row as a singleton
        placed before the remainder.  Returns the id of the singleton cell,
        already queued as the next splitter."""
        s, e = self.start[cid], self.end[cid]
        if e - s < 2:
            raise ValueError("cannot individualize inside a singleton cell")
        changes = []
        for r, v in enumerate(vertices):
            lab, pos = self.labs[r], self.poss[r]
            if self.cells[r][v] != cid:
                raise ValueError(f"vertex {v} is not in the selected cell")
            p = pos[v]
            ch = []
            if p != s:
                u = lab[s]
                ch.append((s, u))
                ch.append((p, v))
                lab[s], lab[p] = v, u
                pos[v], pos[u] = s, p
            changes.append(ch)
        nid = self.next_id
        self.next_id += 1
        self.ncells += 1
        self.start[nid], self.end[nid] = s, s + 1
        self.start[cid] = s + 1
        for r, v in enumerate(vertices):
            self.cells[r][v] = nid
        self.trail.append((cid, s, e, (nid,), changes))
        self.new_singletons.append(s)
        if e - s == 2:
            self.new_singletons.append(s + 1)
        self._enqueue(nid)
        return nid

    def refine(self, splitters: Iterable[int] | None = None) -> bool:
        """Refine to an equitable partition.  With two rows, returns False as
        soon as the rows split differently (the pair is non-isomorphic)."""
        if splitters is None:
            splitters = self.cell_ids()
        for c in splitters:
            self._enqueue(c)
        queue, inq = self.queue, self.inq
        adj, start, end = self.adj, self.start, self.end
        labs, cells = self.labs, self.cells
        nrows = len(labs)
        while queue:
            sp = queue.popleft()
            inq[sp] = 0
            s, e = start[sp], end[sp]
            counts = []
            groups = []
            for r in range(nrows):
                lab, cell = labs[r], cells[r]
                cnt = {}
                get = cnt.get
                for i in range(s, e):
                    for w in adj[lab[i]]:
                        cnt[w] = get(w, 0) + 1
                grp = {}
                for w in cnt:
                    c = cell[w]
                    if end[c] - start[c] > 1:
                        g = grp.get(c)
                        if g is None:
                            grp[c] = [w]
                        else:
                            g.append(w)
                counts.append(cnt)
                groups.append(grp)
            if nrows == 2:
                g0, g1 = groups
                c0, c1 = counts
                if g0.keys() != g1.keys() or any(
                        sorted(c0[w] for w in g0[c]) != sorted(c1[w] for w in g1[c]) for c in g0):
                    self._clear_queue()
                    return False
            grp0 = groups[0]
            if len(grp0) > 1:
                order = sorted(grp0, key=start.__getitem__)
            else:
                order = list(grp0)
            for c in order:
                self._split(c, [g[c] for g in groups], counts)
        return True

    def _split(self, cid, touched, counts):
        start, end = self.start, self.end
        s, e = start[cid], end[cid]
        size = e - s
        t = len(touched[0])
        cnt0 = counts[0]
        ks = sorted(cnt0[w] for w in touched[0])
        if t == size and ks[0] == ks[-1]:
            return
        ts = e - t
        # Fragment starts in position order; the first keeps ``cid``.
        bounds = [] if t == size else [s]
        prev = None
        for i, k in enumerate(ks):
            if k != prev:
                bounds.append(ts + i)
                prev = k
        bounds.append(e)
        changes = []
        for r, lab in enumerate(self.labs):
            pos = self.poss[r]
            cnt = counts[r]
            grp = touched[r]
            ch = []
            holes = sorted(pos[w] for w in grp if pos[w] < ts)
            if holes:
                intruders = [lab[p] for p in range(ts, e) if lab[p] not in cnt]
                for p, x in zip(holes, intruders):
                    ch.append((p, lab[p]))
                    lab[p] = x
                    pos[x] = p
            grp.sort(key=lambda w: (cnt[w], pos[w]))
            for i, w in enumerate(grp):
                p = ts + i
                if lab[p] != w:
                    ch.append((p, lab[p]))
                    lab[p] = w
                    pos[w] = p
            changes.append(ch)
        end[cid] = bounds[1]
        new_ids = []
        for j in range(1, len(bounds) - 1):
            nid = self.next_id
            self.next_id += 1
            a, b = bounds[j], bounds[j + 1]
            start[nid], end[nid] = a, b
            for r, lab in enumerate(self.labs):
                cell = self.cells[r]
                for i in range(a, b):
                    cell[lab[i]] = nid
            new_ids.append(nid)
        self.ncells += len(new_ids)
        self.trail.append((cid, s, e, tuple(new_ids), changes))
        frags = [cid] + new_ids
        for f in frags:
            if end[f] - start[f] == 1:
                self.new_singletons.append(start[f])
        if self.inq[cid]:
            for f in new_ids:
                self._enqueue(f)
        else:
            big = max(frags, key=lambda f: (end[f] - start[f], -start[f]))
            for f in frags:
                if f != big:
                    self._enqueue(f)


def _check_partition(G: Graph, pi: OrderedPartition):
    if pi.n != G.n:
        raise ValueError(f"partition covers {pi.n} vertices, graph has {G.n}")


# -- value-level operations -------------------------------------------------

def initial_partition(G: Graph) -> OrderedPartition:
    """One cell per color, ascending color; vertices ascending inside a cell."""
    classes = {}
    for v, c in enumerate(G.colors):
        classes.setdefault(c, []).append(v)
    return OrderedPartition(tuple(classes[c]) for c in sorted(classes))


def refine(G: Graph, pi: OrderedPartition) -> OrderedPartition:
    state = CellState.single(G, pi)
    state.refine()
    return state.partition()


def refine_opp(G: Graph, opp: OPP) -> tuple[OPP, OppClass]:
    if not opp.is_isomorphic():
        return opp, OppClass.NON_ISOMORPHIC
    state = CellState.pair(G, opp)
    if not state.refine():
        return state.opp(), OppClass.NON_ISOMORPHIC
    return state.opp(), state.classify()


def individualize(pi: OrderedPartition, cell_index: int, v: int) -> OrderedPartition:
    cell = pi.cells[cell_index]
    if v not in cell:
        raise ValueError(f"vertex {v} is not in cell {cell_index}")
    if len(cell) < 2:
        raise ValueError("cannot individualize inside a singleton cell")
    rest = tuple(u for u in cell if u != v)
    return OrderedPartition(pi.cells[:cell_index] + ((v,), rest) + pi.cells[cell_index + 1:])


def permutation_count(opp: OPP) -> int:
    """Number of permutations encoded by the pair (0 if non-isomorphic)."""
    if not opp.is_isomorphic():
        return 0
    return math.prod(math.factorial(len(c)) for c in opp.top.cells)


def extract_permutation(opp: OPP) -> Permutation:
    kind = opp.classify()
    if kind not in (OppClass.DISCRETE, OppClass.MATCHING):
        raise ValueError(f"cannot extract a permutation from a {kind.value} OPP")
    img = list(range(opp.top.n))
    for a, b in zip(opp.top.cells, opp.bottom.cells):
        if len(a) == 1:
            img[a[0]] = b[0]
    return Permutation(img)
