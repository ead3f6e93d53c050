"""Colored undirected graphs, vertex permutations, and input formats.

Vertices are ``0..n-1``.  A :class:`Graph` keeps its edge set as normalized
pairs ``(u, v)`` with ``u < v`` plus ascending neighbor lists, so refinement
can scan adjacency linearly.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence


class ParseError(ValueError):
    """Malformed input file.  ``lineno`` is 1-based (0 when not line-bound)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Permutation:
    """A bijection on ``0..n-1`` stored as its image list."""

    __slots__ = ("image",)

    def __init__(self, image: Iterable[int]):
        image = tuple(image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a permutation: {image!r}")
        self.image = image

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        image = list(range(n))
        for cycle in cycles:
            for i, v in enumerate(cycle):
                image[v] = cycle[(i + 1) % len(cycle)]
        return cls(image)

    def __len__(self):
        return len(self.image)

    def __getitem__(self, v):
        return self.image[v]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(i) == self(other(i)): apply ``other`` first.
        if len(self) != len(other):
            raise ValueError("permutation size mismatch")
        return Permutation(self.image[i] for i in other.image)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, v in enumerate(self.image):
            inv[v] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.image))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.image)
        out = []
        for i in range(len(self.image)):
            if seen[i] or self.image[i] == i:
                continue
            cycle = [i]
            seen[i] = True
            j = self.image[i]
            while j != i:
                seen[j] = True
                cycle.append(j)
                j = self.image[j]
            out.append(tuple(cycle))
        return out

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self):
        return f"Permutation({str(self)!r}, n={len(self.image)})"


class Graph:
    """Immutable colored simple undirected graph."""

    __slots__ = ("n", "edges", "colors", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), colors: Sequence[int] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        if colors is None:
            colors = (0,) * n
        colors = tuple(colors)
        if len(colors) != n:
            raise ValueError("color map length differs from vertex count")
        if any(c < 0 for c in colors):
            raise ValueError("colors must be non-negative")
        adj = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.edges = frozenset(norm)
        self.colors = colors
        self.adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and self.edges == other.edges and self.colors == other.colors)

    def __hash__(self):
        return hash((self.n, self.edges, self.colors))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def to_dimacs(self) -> str:
        """Deterministic DIMACS text: header, nonzero colors, sorted edges."""
        lines = [f"p edge {self.n} {self.m}"]
        lines += [f"n {v + 1} {c}" for v, c in enumerate(self.colors) if c]
        lines += [f"e {u + 1} {v + 1}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"


def _check_size(G: Graph, gamma: Permutation):
    if len(gamma) != G.n:
        raise ValueError(f"permutation on {len(gamma)} points applied to graph on {G.n} vertices")


def apply_permutation(G: Graph, gamma: Permutation) -> Graph:
    _check_size(G, gamma)
    img = gamma.image
    colors = [0] * G.n
    for v, c in enumerate(G.colors):
        colors[img[v]] = c
    return Graph(G.n, ((img[u], img[v]) for u, v in G.edges), colors)


def is_automorphism(G: Graph, gamma: Permutation) -> bool:
    _check_size(G, gamma)
    img = gamma.image
    colors = G.colors
    for v in range(G.n):
        if colors[img[v]] != colors[v]:
            return False
    edges = G.edges
    for u, v in edges:
        a, b = img[u], img[v]
        if (a, b) not in edges and (b, a) not in edges:
            return False
    return True


def matching_graph(k: int) -> Graph:
    """``k`` disjoint edges ``(2i, 2i+1)`` on ``2k`` vertices."""
    if k < 1:
        raise ValueError("matching graph needs k >= 1")
    return Graph(2 * k, ((2 * i, 2 * i + 1) for i in range(k)))


def figure1_graph() -> Graph:
    """A 4-cycle 0-1-2-3 plus a triangle 4-5-6; its group has order 48."""
    return Graph(7, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (4, 6)])


def random_relabel(G: Graph, seed: int) -> tuple[Graph, Permutation]:
    image = list(range(G.n))
    random.Random(seed).shuffle(image)
    gamma = Permutation(image)
    return apply_permutation(G, gamma), gamma


def _text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return data.decode("ascii")
    return data


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer, got {tok!r}", lineno) from None


def parse_dimacs(text) -> Graph:
    """Parse DIMACS edge format (``p edge n m``, ``e u v``, ``n v color``)."""
    n = m = None
    edges = {}
    colors = None
    for lineno, line in enumerate(_text(text).splitlines(), 1):
        toks = line.split()
        if not toks or toks[0] == "c":
            continue
        kind = toks[0]
        if kind == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(toks) != 4 or toks[1] not in ("edge", "col"):
                raise ParseError("malformed header, expected 'p edge <n> <m>'", lineno)
            n, m = _int(toks[2], lineno), _int(toks[3], lineno)
            if n < 0 or m < 0:
                raise ParseError("negative count in header", lineno)
            colors = [0] * n
            continue
        if n is None:
            raise ParseError(f"{kind!r} line before header", lineno)
        if kind == "e":
            if len(toks) != 3:
                raise ParseError("malformed edge line", lineno)
            u, v = _int(toks[1], lineno), _int(toks[2], lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} out of range [1, {n}]", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in edges:
                raise ParseError(f"duplicate edge {u} {v} (first at line {edges[key]})", lineno)
            edges[key] = lineno
        elif kind == "n":
            if len(toks) != 3:
                raise ParseError("malformed color line", lineno)
            v, c = _int(toks[1], lineno), _int(toks[2], lineno)
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} out of range [1, {n}]", lineno)
            if c < 0:
                raise ParseError("negative color", lineno)
            colors[v - 1] = c
        else:
            raise ParseError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge' header")
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    return Graph(n, edges, colors)


def parse_cnf(text) -> Graph:
    """Encode a DIMACS CNF as a 2-colored graph.

    Literal ``x_i`` is vertex ``2(i-1)``, ``-x_i`` is ``2(i-1)+1`` (color 0);
    complementary literals are adjacent.  A binary clause becomes an edge
    between its two literals; any other clause gets its own vertex (color 1)
    joined to each of its literals.  Clause vertices follow the literals in
    file order.
    """
    nvars = None
    clauses = []
    current = []
    for lineno, line in enumerate(_text(text).splitlines(), 1):
        toks = line.split()
        if not toks or toks[0] == "c":
            continue
        if toks[0] == "%":
            break
        if toks[0] == "p":
            if nvars is not None:
                raise ParseError("duplicate header", lineno)
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("malformed header, expected 'p cnf <vars> <clauses>'", lineno)
            nvars = _int(toks[2], lineno)
            _int(toks[3], lineno)
            if nvars < 0:
                raise ParseError("negative variable count", lineno)
            continue
        if nvars is None:
            raise ParseError("clause before header", lineno)
        for tok in toks:
            lit = _int(tok, lineno)
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > nvars:
                raise ParseError(f"variable {abs(lit)} out of range [1, {nvars}]", lineno)
            else:
                current.append(lit)
    if nvars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        clauses.append(current)

    def vertex(lit):
        return 2 * (abs(lit) - 1) + (lit < 0)

    edges = {(2 * i, 2 * i + 1) for i in range(nvars)}
    n = 2 * nvars
    for clause in clauses:
        lits = sorted({vertex(x) for x in clause})
        if len(lits) == 2:
            edges.add((lits[0], lits[1]))
            continue
        c = n
        n += 1
        edges.update((v, c) for v in lits)
    colors = [0] * (2 * nvars) + [1] * (n - 2 * nvars)
    return Graph(n, edges, colors)
