"""
Component groups of two-vertex dual graphs.

The chains of rational curves replacing the nodes are encoded by their edges η_ij
(edge i of the graph, j = 1, ..., m_i·k). The component group is generated by the η_ij subject to

* chain relations η_ij - η_i,j-1 = 0 at the interior vertices of the chains,
* one relation per component (the oriented edges at v1 and at v2 sum to zero),
* one relation per independent cycle of the graph (loops and pairs of connecting edges).

The class [s2 - s1] is the sum over the chain of the last connecting edge.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ

from .dual_graph import DualGraph

logger = logging.getLogger(__name__)


class InfiniteGroupError(ValueError):
    ...


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """
    The group Z^generator_count / (row span of ``relation_matrix``) with a distinguished element.
    """

    generator_count: int
    relation_matrix: Tuple[Tuple[int, ...], ...]
    distinguished_class: Tuple[int, ...]

    def matrix(self):
        entries = [c for row in self.relation_matrix for c in row]
        return Matrix(len(self.relation_matrix), self.generator_count, entries)


def _generator_offsets(lengths):
    offsets, total = [], 0
    for length in lengths:
        offsets.append(total)
        total += length
    return offsets, total


def build_presentation(g):
    """
    Presentation of the component group of the dual graph ``g``.

    Parameters
    ----------
    g: DualGraph

    Returns
    -------
    AbelianGroupPresentation
    """
    if not isinstance(g, DualGraph):
        raise TypeError(f"Expected a DualGraph, got {type(g)}")
    lengths = g.chain_lengths()
    offsets, n = _generator_offsets(lengths)

    def eta(i, j):
        return offsets[i] + j

    relations = []

    def add(entries):
        row = [0] * n
        for index, value in entries:
            row[index] += value
        if any(row):
            relations.append(tuple(row))

    for i, length in enumerate(lengths):
        for j in range(1, length):
            add([(eta(i, j), 1), (eta(i, j - 1), -1)])

    a, b = g.loops_v1, g.loops_v2
    at_v1 = [(eta(i, lengths[i] - 1), 1) for i in range(a)] + [(eta(i, 0), -1) for i in range(a)]
    at_v2 = [(eta(i, lengths[i] - 1), 1) for i in range(a, a + b)] + [(eta(i, 0), -1) for i in range(a, a + b)]
    for i in range(a + b, g.edge_count):
        at_v1.append((eta(i, 0), -1))
        at_v2.append((eta(i, lengths[i] - 1), 1))
    add(at_v1)
    add(at_v2)

    for i in range(a + b):
        add([(eta(i, j), 1) for j in range(lengths[i])])
    first = a + b
    for i in range(first + 1, g.edge_count):
        add([(eta(i, j), 1) for j in range(lengths[i])] + [(eta(first, j), -1) for j in range(lengths[first])])

    last = g.edge_count - 1
    distinguished = [0] * n
    for j in range(lengths[last]):
        distinguished[eta(last, j)] = 1

    logger.debug("Graph %s: %d generators, %d relations", g.to_json(), n, len(relations))
    return AbelianGroupPresentation(
        generator_count=n, relation_matrix=tuple(relations), distinguished_class=tuple(distinguished)
    )


def simplify_presentation(p):
    """
    Eliminate generators that occur with coefficient ±1 in some relation.

    The result presents an isomorphic group and carries the image of the distinguished class.
    """
    rows = [{j: c for j, c in enumerate(row) if c} for row in p.relation_matrix]
    element = {j: c for j, c in enumerate(p.distinguished_class) if c}
    alive = set(range(p.generator_count))

    while True:
        candidates = [
            (len(row), index, j) for index, row in enumerate(rows) for j, c in row.items() if abs(c) == 1
        ]
        if not candidates:
            break
        _, index, column = min(candidates)
        pivot = rows.pop(index)
        unit = pivot.pop(column)
        # x_column = -unit * Σ pivot[j] x_j
        for target in rows + [element]:
            a = target.pop(column, 0)
            if not a:
                continue
            for j, c in pivot.items():
                value = target.get(j, 0) - a * unit * c
                if value:
                    target[j] = value
                else:
                    target.pop(j, None)
        rows = [row for row in rows if row]
        alive.discard(column)

    columns = sorted(alive)
    return AbelianGroupPresentation(
        generator_count=len(columns),
        relation_matrix=tuple(tuple(row.get(j, 0) for j in columns) for row in rows),
        distinguished_class=tuple(element.get(j, 0) for j in columns),
    )


def _invariant_factors(rows, n):
    if n == 0:
        return []
    matrix = Matrix(len(rows), n, [c for row in rows for c in row]) if rows else Matrix.zeros(1, n)
    if matrix.rank() < n:
        raise InfiniteGroupError(f"The presented group is infinite: relation rank {matrix.rank()} < {n}")
    factors = [abs(int(d)) for d in invariant_factors(matrix, domain=ZZ)]
    return [d for d in factors if d != 1]


def component_group(p):
    """
    Invariant factors d_1 | d_2 | ... of the presented finite abelian group. Trivial factors are
    omitted, so the trivial group gives an empty list.

    Raises
    ------
    InfiniteGroupError
        The relations do not have full rank.
    """
    p = simplify_presentation(p)
    return _invariant_factors(p.relation_matrix, p.generator_count)


def component_group_order(p):
    return math.prod(component_group(p))


def class_order(p):
    """
    Order of the distinguished class: |G| / |Z^n / (L + Z·v)|.
    """
    p = simplify_presentation(p)
    rows, n = p.relation_matrix, p.generator_count
    group_order = math.prod(_invariant_factors(rows, n))
    quotient_order = math.prod(_invariant_factors(rows + (p.distinguished_class,), n))
    return group_order // quotient_order


def section_class_order(g):
    """
    Order of [s2 - s1] in the component group of the dual graph ``g``, computed from the Smith
    normal form of the presentation.
    """
    return class_order(build_presentation(g))
