"""
Root maps between the root systems of a smaller and a bigger space
"""
import logging
from collections import OrderedDict, deque

from typing import Dict, List, Optional, Sequence

from cartan_vmrt import app_settings
from cartan_vmrt.chss import MarkedSpace, hc_partition, iso_key, parse_space
from cartan_vmrt.exceptions import BudgetExceeded, DiagramMismatch, InvalidMap, NoBuiltin, NotDeletionType, \
    ProductUnsupported
from cartan_vmrt.matching import deletion_match, subdiagram_embedding
from cartan_vmrt.rootsys import Root, cartan_int
from cartan_vmrt.utils import format_root, parse_root

logger = logging.getLogger(__name__)

PROVENANCES = ('builtin-table', 'deletion-construction', 'search', 'user')

# Images of the simple roots, keyed by the source node. The source orientation is the one in the key; the mirrored
# Grassmannian G(q,p) uses the same table with node i renamed to p+q-i.
BUILTIN_TABLES = OrderedDict([
    (('G(4,2)', 'V'), OrderedDict([
        (4, 'a6'),
        (5, 'a5'),
        (3, 'a5+2a4+a3+a2'),
        (2, 'a1'),
        (1, 'a3'),
    ])),
    (('GII(6)', 'VI'), OrderedDict([
        (6, 'a7'),
        (4, 'a6'),
        (5, 'a5'),
        (3, 'a5+2a4+a3+a2'),
        (2, 'a1'),
        (1, 'a3'),
    ])),
    (('G(6,2)', 'VI'), OrderedDict([
        (6, 'a7'),
        (7, 'a6'),
        (5, 'a6+2a5+2a4+a3+a2'),
        (4, 'a1'),
        (3, 'a3'),
        (2, 'a4'),
        (1, 'a2'),
    ])),
    # The G(6,2) table without its last node
    (('G(5,2)', 'VI'), OrderedDict([
        (5, 'a7'),
        (6, 'a6'),
        (4, 'a6+2a5+2a4+a3+a2'),
        (3, 'a1'),
        (2, 'a3'),
        (1, 'a4'),
    ])),
    (('G(3,3)', 'VI'), OrderedDict([
        (3, 'a7'),
        (5, 'a4+a3'),
        (4, 'a6+a5+a4+a3+a2+a1'),
        (2, 'a6+a5+a4'),
        (1, 'a5+a4+a3+a2'),
    ])),
])


class RootMap:
    """
    Images of the simple roots of the source, extended linearly to all roots
    """

    def __init__(self, source: MarkedSpace, target: MarkedSpace, simple_images: Dict[int, Sequence[int]],
                 provenance: str = 'user', label: str = None):
        if provenance not in PROVENANCES:
            raise ValueError("Unknown provenance {!r}".format(provenance))

        self.source = source
        self.target = target
        self.simple_images = OrderedDict((node, tuple(image)) for node, image in sorted(simple_images.items()))
        self.provenance = provenance
        self.label = label or provenance

    def image(self, root: Sequence[int]) -> Root:
        """
        The image of a root of the source under the linear extension.

        :param root: A coefficient vector over the source's simple roots
        :return: A coefficient vector over the target's simple roots
        """
        out = [0] * self.target.rank
        for node, coeff in enumerate(root, start=1):
            if coeff:
                for i, c in enumerate(self.simple_images[node]):
                    out[i] += coeff * c
        return tuple(out)

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('source', self.source.name),
            ('target', self.target.name),
            ('assignments', [[node, list(image)] for node, image in self.simple_images.items()]),
            ('expressions', OrderedDict((str(node), format_root(image))
                                        for node, image in self.simple_images.items())),
            ('provenance', self.provenance),
            ('label', self.label),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'RootMap':
        """
        Read a map back from its serialized form.

        :param data: The dictionary as produced by as_dict, only source, target and assignments are required
        :return: The root map
        """
        source = parse_space(data['source'])
        target = parse_space(data['target'])
        images = OrderedDict()
        for node, image in data['assignments']:
            if isinstance(image, str):
                image = parse_root(image, target.rank)
            images[int(node)] = tuple(image)

        return cls(source, target, images, data.get('provenance', 'user'), data.get('label'))

    def __eq__(self, other):
        return isinstance(other, RootMap) and (self.source, self.target, self.simple_images) == \
            (other.source, other.target, other.simple_images)

    def __repr__(self):
        return 'RootMap({}, {}, {})'.format(self.source, self.target, dict(self.simple_images))


class MapReport:
    """
    The outcome of checking a root map
    """

    def __init__(self, root_map: RootMap):
        self.root_map = root_map
        self.checks = OrderedDict()
        self.consequences = OrderedDict()
        self.failures = []  # type: List[str]

    @property
    def checks_pass(self) -> bool:
        """
        Whether the marked root, root, injectivity and Cartan integer checks passed
        """
        return all(self.checks.values())

    @property
    def consequences_hold(self) -> bool:
        """
        Whether the positive, tangent and normal roots land in their counterparts
        """
        return all(self.consequences.values())

    @property
    def valid(self) -> bool:
        """
        Whether the checks passed and the root partition is respected
        """
        return self.checks_pass and self.consequences_hold

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('map', self.root_map.as_dict()),
            ('valid', self.valid),
            ('checks', OrderedDict(self.checks)),
            ('consequences', OrderedDict(self.consequences)),
            ('failures', list(self.failures)),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'MapReport':
        """
        Read a report back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The report
        """
        report = cls(RootMap.from_dict(data['map']))
        report.checks = OrderedDict(data.get('checks', {}))
        report.consequences = OrderedDict(data.get('consequences', {}))
        report.failures = list(data.get('failures', []))
        return report


def verify_root_map(root_map: RootMap) -> MapReport:
    """
    Check that a map sends the marked root to the marked root, roots to roots injectively and keeps all Cartan integers
    between simple roots. For valid maps the positive noncompact, tangent and normal roots must then map into their
    counterparts in the target, which is checked as well.

    :param root_map: The map
    :return: The report
    """
    source, target = root_map.source, root_map.target
    if source.is_product or target.is_product:
        raise ProductUnsupported("Root maps need two spaces with Dynkin diagrams")

    if sorted(root_map.simple_images) != list(range(1, source.rank + 1)):
        raise DiagramMismatch("Map assigns nodes {} but {} has nodes 1..{}".format(
            sorted(root_map.simple_images), source.diagram, source.rank))

    for node, image in root_map.simple_images.items():
        if len(image) != target.rank:
            raise DiagramMismatch("Image {} of node {} has length {} but {} has rank {}".format(
                image, node, len(image), target.diagram, target.rank))

    report = MapReport(root_map)
    source_rs = source.root_system
    target_rs = target.root_system

    report.checks['marked'] = root_map.simple_images[source.marked] == target.gamma
    if not report.checks['marked']:
        report.failures.append("Marked node {} maps to {} instead of {}".format(
            source.marked, format_root(root_map.simple_images[source.marked]), format_root(target.gamma)))

    images = {}
    missing = []
    for root in source_rs.positives + source_rs.negatives:
        image = root_map.image(root)
        images[root] = image
        if image not in target_rs.roots:
            missing.append(root)

    report.checks['roots'] = not missing
    for root in missing[:5]:
        report.failures.append("{} maps to {} which is not a root".format(format_root(root),
                                                                           format_root(images[root])))

    report.checks['injective'] = len(set(images.values())) == len(images)
    if not report.checks['injective']:
        report.failures.append("Map is not injective on the roots of {}".format(source))

    cartan_ok = True
    for i, a in root_map.simple_images.items():
        for j, b in root_map.simple_images.items():
            if a not in target_rs.roots or b not in target_rs.roots:
                cartan_ok = False
                continue
            expected = source.diagram.cartan[i - 1][j - 1]
            found = cartan_int(target_rs, a, b)
            if found != expected:
                cartan_ok = False
                report.failures.append("Cartan integer of nodes {},{} is {} instead of {}".format(
                    i, j, found, expected))

    report.checks['cartan'] = cartan_ok

    if report.checks_pass:
        source_part = hc_partition(source)
        target_part = hc_partition(target)
        report.consequences['noncompact'] = all(target_part.is_noncompact(images[root])
                                                for root in source_part.nc_pos)
        report.consequences['tangent'] = all(target_part.in_h(images[root]) for root in source_part.h_set)
        report.consequences['normal'] = all(target_part.in_n(images[root]) for root in source_part.n_set)

        if not report.consequences_hold:
            logger.error("Valid map {} does not respect the root partition: {}".format(
                root_map, dict(report.consequences)))
            report.failures.append("Map does not respect the root partition")

    return report


def _simple_vector(target: MarkedSpace, node: int) -> Root:
    return target.diagram.simple_root(node)


def identification_map(source: MarkedSpace, target: MarkedSpace) -> Optional[RootMap]:
    """
    The map identifying the source's diagram with a sub-diagram of the target's.

    :param source: The smaller space
    :param target: The bigger space
    :return: The map or None when there is no such sub-diagram
    """
    node_map = subdiagram_embedding(source, target)
    if node_map is None:
        return None

    return RootMap(source, target, {node: _simple_vector(target, image) for node, image in node_map.items()},
                   'builtin-table', 'sub-diagram identification')


def builtin_map(source: MarkedSpace, target: MarkedSpace) -> RootMap:
    """
    The tabulated root map of a special pair, or the identification map of a sub-diagram pair.

    :param source: The smaller space
    :param target: The bigger space
    :return: The map
    """
    for (source_name, target_name), table in BUILTIN_TABLES.items():
        table_source = parse_space(source_name)
        table_target = parse_space(target_name)
        if iso_key(source) != iso_key(table_source) or iso_key(target) != iso_key(table_target):
            continue

        if source.family != table_source.family or target.family != table_target.family:
            # Alias spellings without a matching diagram
            continue

        if source.params == table_source.params:
            rename = {node: node for node in table}
        else:
            p, q = table_source.params
            rename = {node: p + q - node for node in table}

        images = {rename[node]: parse_root(expr, target.rank) for node, expr in table.items()}
        return RootMap(source, target, images, 'builtin-table', '{} in {}'.format(source_name, target_name))

    root_map = identification_map(source, target)
    if root_map is None:
        raise NoBuiltin("No tabulated root map for ({}, {})".format(source, target))
    return root_map


def deletion_map(source: MarkedSpace, target: MarkedSpace) -> RootMap:
    """
    Build the root map of a pair of deletion type.

    The marked root goes to the marked root. A node next to the source's marked node goes to the sum of the deleted
    chain without its first node, the node the chain was attached to and its own image in the remaining diagram.
    Every other node goes to its own image.

    :param source: The smaller space
    :param target: The bigger space
    :return: The verified map
    """
    match = deletion_match(source, target)
    if match is None:
        raise NotDeletionType("({}, {}) is not obtained by deleting a chain".format(source, target))

    tail = list(match.chain[1:]) + [match.attached]
    adjacent = set(source.diagram.neighbours(source.marked))

    images = {}
    for node, image_node in match.node_map.items():
        if node == source.marked:
            images[node] = target.gamma
            continue

        vector = list(_simple_vector(target, image_node))
        if node in adjacent:
            for extra in tail:
                vector[extra - 1] += 1
        images[node] = tuple(vector)

    root_map = RootMap(source, target, images, 'deletion-construction',
                       'chain {} through {}'.format(match.chain, match.intermediate))
    report = verify_root_map(root_map)
    if not report.valid:
        raise InvalidMap("Deletion construction for ({}, {}) failed: {}".format(
            source, target, '; '.join(report.failures)))

    return root_map


def _search_order(source: MarkedSpace) -> List[int]:
    diagram = source.diagram
    order = [source.marked]
    todo = deque(order)
    while todo:
        node = todo.popleft()
        for other in diagram.neighbours(node):
            if other not in order:
                order.append(other)
                todo.append(other)
    return order


def search_root_map(source: MarkedSpace, target: MarkedSpace, budget: int = None) -> Optional[RootMap]:
    """
    Search for a root map by backtracking.

    The marked node goes to the marked root, the other nodes are visited outward from it and tried against the positive
    roots of the target with coefficient 0 on the marked node, in lexicographic order. Candidates must keep the Cartan
    integers with every node assigned so far. Complete assignments are checked with verify_root_map.

    :param source: The smaller space
    :param target: The bigger space
    :param budget: Maximum number of candidates to try, from the settings when not given
    :return: The first valid map or None when there is none
    """
    if source.is_product or target.is_product:
        raise ProductUnsupported("Root maps need two spaces with Dynkin diagrams")

    budget = app_settings.SEARCH_BUDGET if budget is None else budget
    order = _search_order(source)
    target_rs = target.root_system
    cartan = source.diagram.cartan
    marked = target.marked
    candidates = [root for root in target_rs.positives if root[marked - 1] == 0]

    assigned = OrderedDict([(source.marked, target.gamma)])
    expansions = 0

    def extend(position: int) -> Optional[RootMap]:
        nonlocal expansions

        if position == len(order):
            root_map = RootMap(source, target, dict(assigned), 'search')
            return root_map if verify_root_map(root_map).valid else None

        node = order[position]
        for candidate in candidates:
            expansions += 1
            if expansions > budget:
                logger.warning("Root map search for ({}, {}) used up its budget of {}".format(source, target, budget))
                raise BudgetExceeded("Search for ({}, {}) needs more than {} expansions".format(
                    source, target, budget))

            if candidate in assigned.values():
                continue
            if any(cartan_int(target_rs, candidate, image) != cartan[node - 1][other - 1] or
                   cartan_int(target_rs, image, candidate) != cartan[other - 1][node - 1]
                   for other, image in assigned.items()):
                continue

            assigned[node] = candidate
            found = extend(position + 1)
            if found is not None:
                return found
            del assigned[node]

        return None

    result = extend(1)
    logger.info("Root map search for ({}, {}) tried {} candidates and {}".format(
        source, target, expansions, 'found a map' if result else 'found none'))
    return result
