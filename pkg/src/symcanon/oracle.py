"""Brute-force ground truth for graphs with at most 8 vertices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import Graph, Permutation, is_automorphism
from .symmetry import OrbitPartition

MAX_VERTICES = 8


def _guard(G: Graph):
    if G.n > MAX_VERTICES:
        raise ValueError(f"brute force refused for n={G.n} > {MAX_VERTICES}")


@dataclass(frozen=True)
class OracleGroup:
    n: int
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def orbit_partition(self) -> OrbitPartition:
        uf = OrbitPartition(self.n)
        for g in self.elements:
            uf.add_generator(g)
        return uf

    def stabilizer(self, points) -> "OracleGroup":
        points = list(points)
        return OracleGroup(self.n, tuple(g for g in self.elements if all(g[p] == p for p in points)))


def brute_force_automorphisms(G: Graph) -> OracleGroup:
    _guard(G)
    elements = []
    for image in itertools.permutations(range(G.n)):
        gamma = Permutation(image)
        if is_automorphism(G, gamma):
            elements.append(gamma)
    return OracleGroup(G.n, tuple(elements))


def _encoding(G: Graph, image) -> tuple:
    colors = [0] * G.n
    for v, c in enumerate(G.colors):
        colors[image[v]] = c
    edges = sorted((min(image[u], image[v]), max(image[u], image[v])) for u, v in G.edges)
    return tuple(colors), tuple(edges)


def brute_force_canonical(G: Graph) -> Graph:
    """The relabeling whose (colors, sorted edges) encoding is smallest."""
    _guard(G)
    colors, edges = min(_encoding(G, image) for image in itertools.permutations(range(G.n)))
    return Graph(G.n, edges, colors)


def stabilizer_chain_orbits(group: OracleGroup, sequence) -> list[OrbitPartition]:
    """Orbit partitions of the pointwise stabilizers of each prefix of ``sequence``."""
    sequence = list(sequence)
    return [group.stabilizer(sequence[:l]).orbit_partition() for l in range(len(sequence) + 1)]
