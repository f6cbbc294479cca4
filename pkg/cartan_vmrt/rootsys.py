"""
Dynkin diagrams and their root systems
"""
import logging
from collections import OrderedDict
from functools import lru_cache

import networkx as nx
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from cartan_vmrt.exceptions import DiagramMismatch, IllegalRank
from cartan_vmrt.utils import format_root

logger = logging.getLogger(__name__)

# A root is its coefficient vector over the simple roots, node 1 first
Root = Tuple[int, ...]

FAMILIES = ('A', 'B', 'C', 'D', 'E6', 'E7')

MIN_RANK = {
    'A': 1,
    'B': 2,
    'C': 2,
    'D': 3,
    'E6': 6,
    'E7': 7,
}

SHORT = 2
LONG = 4


class DynkinDiagram:
    """
    A Dynkin diagram with nodes numbered 1..rank.

    Simply-laced diagrams have all squared lengths 2. In B_n the last node is short, in C_n the last node is long.
    The Cartan matrix follows A[i][j] = 2(a_i, a_j) / (a_i, a_i).
    """

    def __init__(self, family: str, rank: int, bonds: Dict[Tuple[int, int], int], lengths: Sequence[int]):
        self.family = family
        self.rank = rank
        self.bonds = dict(bonds)
        self.lengths = tuple(lengths)

        gram = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            gram[i][i] = self.lengths[i]
        for (i, j), bond in self.bonds.items():
            if bond == 1:
                value = -self.lengths[i - 1] // 2
            else:
                value = -2
            gram[i - 1][j - 1] = gram[j - 1][i - 1] = value

        self.gram = tuple(tuple(row) for row in gram)
        self.cartan = tuple(tuple(2 * gram[i][j] // gram[i][i] for j in range(rank)) for i in range(rank))

    @property
    def name(self) -> str:
        """
        The usual name like A3 or E6
        """
        if self.family.startswith('E'):
            return self.family
        return '{}{}'.format(self.family, self.rank)

    @property
    def simply_laced(self) -> bool:
        """
        Whether all bonds are single
        """
        return all(bond == 1 for bond in self.bonds.values())

    def bond(self, i: int, j: int) -> int:
        """
        The number of lines between two nodes, 0 when they are not adjacent.

        :param i: First node
        :param j: Second node
        :return: The bond multiplicity
        """
        return self.bonds.get((min(i, j), max(i, j)), 0)

    def neighbours(self, node: int) -> List[int]:
        """
        The nodes adjacent to a node, in increasing order.

        :param node: The node
        :return: The adjacent nodes
        """
        return [other for other in range(1, self.rank + 1) if other != node and self.bond(node, other)]

    def is_long(self, node: int) -> bool:
        """
        Whether the simple root of this node is long, which for simply-laced diagrams is every node.

        :param node: The node
        :return: Whether it is long
        """
        return self.lengths[node - 1] == max(self.lengths)

    def simple_root(self, node: int) -> Root:
        """
        The coefficient vector of a simple root.

        :param node: The node
        :return: The unit vector
        """
        return tuple(1 if i == node - 1 else 0 for i in range(self.rank))

    def graph(self, marked: int = None) -> nx.Graph:
        """
        The diagram as a graph for isomorphism matching.

        :param marked: The marked node, if any
        :return: A graph with node attributes "long" and "marked" and edge attribute "bond"
        """
        graph = nx.Graph()
        for node in range(1, self.rank + 1):
            graph.add_node(node, long=self.is_long(node), marked=node == marked)
        for (i, j), bond in sorted(self.bonds.items()):
            graph.add_edge(i, j, bond=bond)
        return graph

    def _key(self):
        return self.family, self.rank

    def __eq__(self, other):
        return isinstance(other, DynkinDiagram) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return 'DynkinDiagram({!r}, {})'.format(self.family, self.rank)

    def __str__(self):
        return self.name


def build_diagram(family: str, rank: int) -> DynkinDiagram:
    """
    Build a Dynkin diagram with the usual node numbering.

    A, B and C are chains where B and C carry the double bond between nodes n-1 and n. D_n is the chain 1..n-2 with
    nodes n-1 and n both attached to n-2. E6 and E7 are the chains 1-3-4-5-6(-7) with node 2 attached to node 4.

    :param family: One of A, B, C, D, E6, E7
    :param rank: The number of nodes
    :return: The diagram
    """
    if family not in FAMILIES:
        raise IllegalRank("Unknown diagram family {!r}".format(family))

    if not isinstance(rank, int) or rank < MIN_RANK[family]:
        raise IllegalRank("Family {} needs rank at least {}, not {}".format(family, MIN_RANK[family], rank))

    if family.startswith('E') and rank != MIN_RANK[family]:
        raise IllegalRank("Family {} has rank {}, not {}".format(family, MIN_RANK[family], rank))

    bonds = {}
    lengths = [SHORT] * rank
    if family in ('A', 'B', 'C'):
        for node in range(1, rank):
            bonds[(node, node + 1)] = 1

        if family == 'B':
            lengths = [LONG] * (rank - 1) + [SHORT]
            bonds[(rank - 1, rank)] = 2
        elif family == 'C':
            lengths = [SHORT] * (rank - 1) + [LONG]
            bonds[(rank - 1, rank)] = 2

    elif family == 'D':
        for node in range(1, rank - 2):
            bonds[(node, node + 1)] = 1
        bonds[(rank - 2, rank - 1)] = 1
        bonds[(rank - 2, rank)] = 1

    else:
        for i, j in ((1, 3), (3, 4), (4, 5), (5, 6), (2, 4)):
            bonds[(i, j)] = 1
        if rank == 7:
            bonds[(6, 7)] = 1

    return DynkinDiagram(family, rank, bonds, lengths)


class RootSystem:
    """
    The complete finite root system of a diagram
    """

    def __init__(self, diagram: DynkinDiagram, positives: Iterable[Root]):
        self.diagram = diagram
        self.positives = sorted(positives)  # type: List[Root]
        self.negatives = sorted(tuple(-c for c in root) for root in self.positives)  # type: List[Root]
        self.roots = frozenset(self.positives) | frozenset(self.negatives)  # type: FrozenSet[Root]

    @property
    def rank(self) -> int:
        """
        The rank of the diagram
        """
        return self.diagram.rank

    def __contains__(self, vector) -> bool:
        return tuple(vector) in self.roots

    def __len__(self):
        return len(self.roots)

    def inner(self, a: Sequence[int], b: Sequence[int]) -> int:
        """
        The inner product of two vectors through the Gram matrix.

        :param a: First coefficient vector
        :param b: Second coefficient vector
        :return: (a, b)
        """
        gram = self.diagram.gram
        return sum(a[i] * gram[i][j] * b[j] for i in range(self.rank) for j in range(self.rank) if a[i] and b[j])

    def check_vector(self, vector: Sequence[int]):
        """
        Make sure a vector has the right length for this system.

        :param vector: The coefficient vector
        """
        if len(vector) != self.rank:
            raise DiagramMismatch("Vector {!r} has length {} but {} has rank {}".format(
                tuple(vector), len(vector), self.diagram, self.rank))

    def as_dict(self) -> OrderedDict:
        """
        The canonical serialization with the roots in lexicographic order.

        :return: The report
        """
        return OrderedDict([
            ('diagram', self.diagram.name),
            ('rank', self.rank),
            ('positive_count', len(self.positives)),
            ('positives', [list(root) for root in self.positives]),
            ('expressions', [format_root(root) for root in self.positives]),
        ])


def _add(a: Sequence[int], b: Sequence[int], factor: int = 1) -> Root:
    return tuple(x + factor * y for x, y in zip(a, b))


def _pairing(diagram: DynkinDiagram, root: Sequence[int], node: int) -> int:
    # <root, a_node coroot> from the Cartan matrix row of the node
    row = diagram.cartan[node - 1]
    return sum(c * row[j] for j, c in enumerate(root))


@lru_cache(maxsize=None)
def generate_root_system(diagram: DynkinDiagram) -> RootSystem:
    """
    Generate all roots by extending root strings, one height at a time.

    A root b + a_i exists exactly when q > 0 in p - q = <b, a_i coroot>, where p is the length of the a_i-string
    below b. Everything below the current height is complete when a height is processed, so p is exact.

    :param diagram: The diagram
    :return: The root system
    """
    simple = [diagram.simple_root(node) for node in range(1, diagram.rank + 1)]
    found = set(simple)
    layer = list(simple)
    height = 1
    while layer:
        next_layer = []
        for root in layer:
            for node in range(1, diagram.rank + 1):
                alpha = simple[node - 1]
                p = 0
                while _add(root, alpha, -(p + 1)) in found:
                    p += 1

                q = p - _pairing(diagram, root, node)
                if q > 0:
                    new = _add(root, alpha)
                    if new not in found:
                        found.add(new)
                        next_layer.append(new)

        height += 1
        layer = next_layer

    logger.debug("Generated {} positive roots of {} up to height {}".format(len(found), diagram, height - 1))
    return RootSystem(diagram, found)


def reflection_orbit(diagram: DynkinDiagram) -> FrozenSet[Root]:
    """
    All roots as the orbit of the simple roots under the simple reflections.

    This is an independent construction used to check the root string closure.

    :param diagram: The diagram
    :return: All roots, positive and negative
    """
    simple = [diagram.simple_root(node) for node in range(1, diagram.rank + 1)]
    orbit = set(simple)
    todo = list(simple)
    while todo:
        root = todo.pop()
        for node in range(1, diagram.rank + 1):
            reflected = _add(root, simple[node - 1], -_pairing(diagram, root, node))
            if reflected not in orbit:
                orbit.add(reflected)
                todo.append(reflected)

    return frozenset(orbit)


def is_root(rs: RootSystem, vector: Sequence[int]) -> bool:
    """
    Check whether a coefficient vector is a root.

    :param rs: The root system
    :param vector: The coefficient vector
    :return: Whether it is a root of the system
    """
    rs.check_vector(vector)
    return tuple(vector) in rs.roots


def cartan_int(rs: RootSystem, a: Sequence[int], b: Sequence[int]) -> int:
    """
    The Cartan integer 2(a, b) / (a, a), so that simple roots give back the Cartan matrix entries.

    :param rs: The root system
    :param a: First root
    :param b: Second root
    :return: The Cartan integer
    """
    rs.check_vector(a)
    rs.check_vector(b)
    return 2 * rs.inner(a, b) // rs.inner(a, a)


def root_length(rs: RootSystem, root: Sequence[int]) -> int:
    """
    The squared length of a root.

    :param rs: The root system
    :param root: The root
    :return: (root, root)
    """
    return rs.inner(root, root)


def coefficient_sum(root: Sequence[int], nodes: Iterable[int]) -> int:
    """
    Sum of the coefficients of a root on some nodes.

    :param root: The root
    :param nodes: The nodes to add up
    :return: The sum
    """
    return sum(root[node - 1] for node in nodes)
