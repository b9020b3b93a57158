"""The product substitution on letter pairs and its ergodic decomposition."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Tuple

import networkx as nx
import numpy as np

from .substitution import Substitution

__all__ = [
    "BiSubstitution",
    "ErgodicDecomposition",
    "DecompositionError",
    "pair_index",
    "pair_labels",
    "build_bisubstitution",
    "ergodic_decomposition",
]


class DecompositionError(RuntimeError):
    pass


def pair_index(a: int, b: int, size: int) -> int:
    """Row-major pair index; matches ``numpy.kron`` ordering."""
    return a * size + b


def pair_labels(s: Substitution) -> List[str]:
    """``"ab"`` for single-character letters, ``"a|b"`` otherwise."""
    sep = "" if all(len(a) == 1 for a in s.alphabet) else "|"
    return [a + sep + b for a in s.alphabet for b in s.alphabet]


@dataclass(frozen=True)
class BiSubstitution:
    """``q`` instruction maps on the pair alphabet, ``ab -> R_j(a) R_j(b)``."""

    base: Substitution
    maps: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.base.size ** 2

    @property
    def labels(self) -> List[str]:
        return pair_labels(self.base)

    def matrices(self) -> List[np.ndarray]:
        out = []
        for m in self.maps:
            r = np.zeros((self.size, self.size), dtype=np.int64)
            r[list(m), np.arange(self.size)] = 1
            out.append(r)
        return out

    def graph(self, power: int = 1) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.size))
        maps = [tuple(range(self.size))]
        for _ in range(power):
            maps = [tuple(m[x] for x in prev) for prev in maps for m in self.maps]
        for m in maps:
            g.add_edges_from((x, m[x]) for x in range(self.size))
        return g


def build_bisubstitution(s: Substitution) -> BiSubstitution:
    n = s.size
    maps = tuple(
        tuple(pair_index(m[a], m[b], n) for a in range(n) for b in range(n)) for m in s.maps
    )
    return BiSubstitution(s, maps)


@dataclass(frozen=True)
class ErgodicDecomposition:
    """Partition of the pair alphabet into ergodic classes and a transient part.

    ``classes`` are tuples of pair indices. The diagonal class comes first;
    the rest are ordered by (size, smallest pair index). ``periods[i]`` is the
    cyclic period of class ``i``; under ``S^exponent`` a class of period ``d``
    falls apart into the ``d`` primitive pieces listed in ``cyclic_subclasses``.
    """

    classes: Tuple[Tuple[int, ...], ...]
    transient: Tuple[int, ...]
    exponent: int
    labels: Tuple[str, ...]
    periods: Tuple[int, ...] = ()
    cyclic_subclasses: Tuple[Tuple[Tuple[int, ...], ...], ...] = ()

    def class_labels(self) -> List[List[str]]:
        return [[self.labels[i] for i in c] for c in self.classes]

    def transient_labels(self) -> List[str]:
        return [self.labels[i] for i in self.transient]


def _period(g: nx.DiGraph, nodes) -> int:
    sub = g.subgraph(nodes)
    start = next(iter(sorted(nodes)))
    level = {start: 0}
    frontier = [start]
    d = 0
    while frontier:
        nxt = []
        for u in frontier:
            for v in sub.successors(u):
                if v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
                else:
                    d = math.gcd(d, level[u] + 1 - level[v])
        frontier = nxt
    return abs(d) or 1


def ergodic_decomposition(b: BiSubstitution, max_exponent: int = None) -> ErgodicDecomposition:
    """Recurrent classes of the pair graph ``ab -> (R (x) R)_j(ab)``.

    Exit-free strongly connected components are the ergodic classes; all other
    pairs are transient. The exponent is the lcm of the class periods.
    """
    g = b.graph()
    cond = nx.condensation(g)
    closed = [
        tuple(sorted(cond.nodes[c]["members"])) for c in cond.nodes if cond.out_degree(c) == 0
    ]
    n = b.base.size
    diagonal = {pair_index(a, a, n) for a in range(n)}

    def key(c):
        return (0 if diagonal <= set(c) else 1, len(c), c[0])

    classes = tuple(sorted(closed, key=key))
    periods = tuple(_period(g, c) for c in classes)
    h = reduce(math.lcm, periods, 1)
    bound = max_exponent if max_exponent is not None else b.base.length ** b.size
    if h > bound:
        raise DecompositionError(f"exponent {h} exceeds the search bound {bound}")
    gh = b.graph(h) if h > 1 else g
    pieces = tuple(
        tuple(sorted((tuple(sorted(c)) for c in nx.strongly_connected_components(gh.subgraph(comp))),
                     key=lambda c: c[0]))
        for comp in classes
    )
    recurrent = {x for c in classes for x in c}
    transient = tuple(x for x in range(b.size) if x not in recurrent)
    return ErgodicDecomposition(classes, transient, h, tuple(b.labels), periods, pieces)
