"""
Matching of marked Dynkin diagrams, for sub-diagrams and deleted chains
"""
import logging
from collections import OrderedDict

import networkx as nx
from networkx.algorithms import isomorphism
from typing import Dict, Iterator, List, Optional, Tuple

from cartan_vmrt.chss import MarkedSpace, catalog_space
from cartan_vmrt.exceptions import IllegalParams, IllegalRank

logger = logging.getLogger(__name__)


def _node_match(a: dict, b: dict) -> bool:
    return a['marked'] == b['marked'] and a['long'] == b['long']


def _edge_match(a: dict, b: dict) -> bool:
    return a['bond'] == b['bond']


def marked_graph(space: MarkedSpace) -> nx.Graph:
    """
    The marked diagram of a space as a graph.

    :param space: The space
    :return: The graph
    """
    return space.diagram.graph(space.marked)


def embeddings(source: nx.Graph, target: nx.Graph) -> List[Dict[int, int]]:
    """
    All ways to identify the source diagram with an induced sub-diagram of the target, marked node on marked node.

    :param source: The source graph
    :param target: The target graph
    :return: Maps from source node to target node, sorted
    """
    if source.number_of_nodes() > target.number_of_nodes():
        return []

    matcher = isomorphism.GraphMatcher(target, source, node_match=_node_match, edge_match=_edge_match)
    found = []
    for mapping in matcher.subgraph_isomorphisms_iter():
        found.append({src: tgt for tgt, src in mapping.items()})

    return sorted(found, key=lambda m: sorted(m.items()))


def subdiagram_embedding(source: MarkedSpace, target: MarkedSpace) -> Optional[Dict[int, int]]:
    """
    The first identification of the source's marked diagram with a sub-diagram of the target's.

    :param source: The smaller space
    :param target: The bigger space
    :return: Map from source node to target node, or None
    """
    if source.is_product or target.is_product:
        return None

    found = embeddings(marked_graph(source), marked_graph(target))
    return OrderedDict(sorted(found[0].items())) if found else None


def chains_from_marked(space: MarkedSpace) -> Iterator[Tuple[List[int], int]]:
    """
    The chains that start at the marked node and run through nodes of degree two over single bonds.

    :param space: The space
    :return: Pairs of the chain, marked node first, and the node the chain is attached to
    """
    diagram = space.diagram
    marked = space.marked
    if len(diagram.neighbours(marked)) != 1:
        return

    chain = [marked]
    while True:
        previous = chain[-2] if len(chain) > 1 else None
        attached = [node for node in diagram.neighbours(chain[-1]) if node != previous]
        if len(attached) != 1 or diagram.bond(chain[-1], attached[0]) != 1:
            return

        yield list(chain), attached[0]

        if len(diagram.neighbours(attached[0])) != 2:
            return
        chain.append(attached[0])


def _spaces_of_rank(rank: int) -> List[MarkedSpace]:
    spaces = []
    for p in range(1, rank + 1):
        spaces.append(catalog_space('G', (p, rank + 1 - p)))

    candidates = [('GII', (rank,)), ('GIII', (rank,)), ('Q', (2 * rank - 1,)), ('Q', (2 * rank - 2,)),
                  ('V', ()), ('VI', ())]
    for family, params in candidates:
        try:
            space = catalog_space(family, params)
        except (IllegalParams, IllegalRank):
            continue
        if space.rank == rank:
            spaces.append(space)

    return spaces


def identify(graph: nx.Graph) -> Optional[MarkedSpace]:
    """
    Find the catalog space with the given marked diagram.

    :param graph: A marked diagram as produced by marked_graph
    :return: The space or None
    """
    if graph.number_of_nodes() == 0 or not nx.is_connected(graph):
        return None

    for space in _spaces_of_rank(graph.number_of_nodes()):
        if nx.is_isomorphic(graph, marked_graph(space), node_match=_node_match, edge_match=_edge_match):
            return space

    return None


class DeletionMatch:
    """
    A chain deleted from the target's diagram leaving the diagram of an intermediate space that contains the source
    """

    def __init__(self, source: MarkedSpace, target: MarkedSpace, chain: List[int], attached: int,
                 intermediate: MarkedSpace, node_map: Dict[int, int]):
        self.source = source
        self.target = target
        self.chain = chain
        self.attached = attached
        self.intermediate = intermediate
        self.node_map = node_map

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('intermediate', self.intermediate.name),
            ('chain', list(self.chain)),
            ('attached', self.attached),
            ('node_map', [[src, tgt] for src, tgt in sorted(self.node_map.items())]),
        ])


def deletion_match(source: MarkedSpace, target: MarkedSpace) -> Optional[DeletionMatch]:
    """
    Look for a chain from the target's marked node whose removal leaves a marked diagram, marked at the node the
    chain was attached to, that contains the source's diagram with marked nodes identified.

    :param source: The smaller space
    :param target: The bigger space
    :return: The shortest such chain or None
    """
    if source.is_product or target.is_product:
        return None

    source_graph = marked_graph(source)
    for chain, attached in chains_from_marked(target):
        remaining = marked_graph(target)
        remaining.remove_nodes_from(chain)
        remaining.nodes[attached]['marked'] = True

        intermediate = identify(remaining)
        if intermediate is None:
            continue

        found = embeddings(source_graph, remaining)
        if found:
            logger.debug("{} is in {} after deleting chain {} from {}".format(source, intermediate, chain, target))
            return DeletionMatch(source, target, chain, attached, intermediate, OrderedDict(sorted(found[0].items())))

    return None
