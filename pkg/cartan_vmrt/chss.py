"""
The catalog of compact Hermitian symmetric spaces and their root combinatorics
"""
import itertools
import logging
import re
import threading
from collections import OrderedDict

from typing import Dict, List, Optional, Set, Tuple

from cartan_vmrt.exceptions import IllegalParams, LinearSpace, NotInCatalog, NotNoncompact, ProductUnsupported
from cartan_vmrt.rootsys import DynkinDiagram, Root, RootSystem, build_diagram, coefficient_sum, \
    generate_root_system
from cartan_vmrt.utils import format_root

logger = logging.getLogger(__name__)

FAMILIES = ('G', 'GII', 'GIII', 'Q', 'V', 'VI', 'PxP')

space_re = re.compile(r'^\s*(GIII|GII|G|Q|VI|V|PxP)\s*(?:\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\))?\s*$')


class MarkedSpace:
    """
    A compact Hermitian symmetric space given by a Dynkin diagram with a marked node.

    Products of two projective spaces only occur as VMRTs and have no diagram.
    """

    def __init__(self, family: str, params: Tuple[int, ...], diagram: Optional[DynkinDiagram],
                 marked: Optional[int], dimension: int):
        self.family = family
        self.params = tuple(params)
        self.diagram = diagram
        self.marked = marked
        self.dimension = dimension

    @property
    def name(self) -> str:
        """
        The name in the space grammar, like G(2,3) or VI
        """
        if not self.params:
            return self.family
        return '{}({})'.format(self.family, ','.join(map(str, self.params)))

    @property
    def rank(self) -> int:
        """
        Rank of the diagram, 0 for products
        """
        return self.diagram.rank if self.diagram else 0

    @property
    def is_product(self) -> bool:
        """
        Whether this is a product of projective spaces
        """
        return self.diagram is None

    @property
    def is_linear(self) -> bool:
        """
        Whether this is a projective space
        """
        if self.family == 'G':
            return 1 in self.params
        return self.family == 'GII' and self.params[0] == 3

    @property
    def is_quadric(self) -> bool:
        """
        Whether this space is a quadric up to isomorphism
        """
        key = iso_key(self)
        return key[0] == 'Q' or key in (('G', 2, 2), ('PxP', 1, 1))

    @property
    def quadric_dimension(self) -> Optional[int]:
        """
        The dimension as a quadric, or None for other spaces
        """
        return self.dimension if self.is_quadric else None

    @property
    def gamma(self) -> Root:
        """
        The marked simple root
        """
        if self.diagram is None:
            raise ProductUnsupported("{} has no Dynkin diagram".format(self))
        return self.diagram.simple_root(self.marked)

    @property
    def root_system(self) -> RootSystem:
        """
        The root system of the diagram
        """
        if self.diagram is None:
            raise ProductUnsupported("{} has no Dynkin diagram".format(self))
        return generate_root_system(self.diagram)

    def __eq__(self, other):
        return isinstance(other, MarkedSpace) and (self.family, self.params) == (other.family, other.params)

    def __hash__(self):
        return hash((self.family, self.params))

    def __repr__(self):
        return 'MarkedSpace({!r})'.format(self.name)

    def __str__(self):
        return self.name


def product_space(a: int, b: int) -> MarkedSpace:
    """
    The product P^a x P^b.

    :param a: Dimension of the first factor
    :param b: Dimension of the second factor
    :return: The product
    """
    if a < 1 or b < 1:
        raise IllegalParams("PxP({},{}) needs positive dimensions".format(a, b))
    return MarkedSpace('PxP', (a, b), None, None, a + b)


def catalog_space(family: str, params: Tuple[int, ...] = (), ambient: bool = True) -> MarkedSpace:
    """
    Look up a space in the catalog.

    :param family: One of G, GII, GIII, Q, V, VI, PxP
    :param params: The parameters of the family
    :param ambient: Whether the space must be usable as ambient space, which excludes Q(2)
    :return: The marked space
    """
    params = tuple(params)

    def need(count: int):
        if len(params) != count or any(not isinstance(p, int) for p in params):
            raise IllegalParams("{} takes {} integer parameter(s), got {!r}".format(family, count, params))

    if family == 'G':
        need(2)
        p, q = params
        if p < 1 or q < 1:
            raise IllegalParams("G(p,q) needs p,q >= 1, got G({},{})".format(p, q))
        return MarkedSpace('G', (p, q), build_diagram('A', p + q - 1), p, p * q)

    if family == 'GII':
        if len(params) == 2 and params[0] == params[1]:
            params = params[:1]
        need(1)
        n = params[0]
        if n < 3:
            raise IllegalParams("GII(n) needs n >= 3, got GII({})".format(n))
        return MarkedSpace('GII', (n,), build_diagram('D', n), n, n * (n - 1) // 2)

    if family == 'GIII':
        if len(params) == 2 and params[0] == params[1]:
            params = params[:1]
        need(1)
        n = params[0]
        if n < 2:
            raise IllegalParams("GIII(n) needs n >= 2, got GIII({})".format(n))
        return MarkedSpace('GIII', (n,), build_diagram('C', n), n, n * (n + 1) // 2)

    if family == 'Q':
        need(1)
        n = params[0]
        if n == 2 and not ambient:
            return MarkedSpace('Q', (2,), None, None, 2)
        if n < 3:
            raise IllegalParams("Q(n) needs n >= 3 as ambient space, got Q({})".format(n))
        if n % 2:
            diagram = build_diagram('B', (n + 1) // 2)
        else:
            diagram = build_diagram('D', (n + 2) // 2)
        return MarkedSpace('Q', (n,), diagram, 1, n)

    if family == 'V':
        need(0)
        return MarkedSpace('V', (), build_diagram('E6', 6), 6, 16)

    if family == 'VI':
        need(0)
        return MarkedSpace('VI', (), build_diagram('E7', 7), 7, 27)

    if family == 'PxP':
        need(2)
        return product_space(*params)

    raise NotInCatalog("Unknown family {!r}, expected one of {}".format(family, ', '.join(FAMILIES)))


def parse_space(text: str, ambient: bool = True) -> MarkedSpace:
    """
    Parse a space name like G(2,3), GII(5,5), Q(7) or VI.

    :param text: The name
    :param ambient: Whether the space must be usable as ambient space
    :return: The marked space
    """
    match = space_re.match(text)
    if not match:
        raise NotInCatalog("Cannot parse space {!r}, expected one of G(p,q), GII(n), GIII(n), Q(n), V, VI, "
                           "PxP(a,b)".format(text))

    family, first, second = match.groups()
    params = tuple(int(p) for p in (first, second) if p is not None)
    return catalog_space(family, params, ambient=ambient)


def iso_key(space: MarkedSpace) -> Tuple:
    """
    A key that is equal for isomorphic spaces.

    Applies GIII(2) = Q(3), GII(3) = P3, GII(4) = Q(6), Q(4) = G(2,2), Q(2) = P1xP1 and G(p,q) = G(q,p).

    :param space: The space
    :return: The key
    """
    family, params = space.family, space.params
    if family == 'GIII' and params == (2,):
        return 'Q', 3
    if family == 'GII' and params == (3,):
        return 'G', 1, 4
    if family == 'GII' and params == (4,):
        return 'Q', 6
    if family == 'Q' and params == (4,):
        return 'G', 2, 2
    if family == 'Q' and params == (2,):
        return 'PxP', 1, 1
    if family in ('G', 'PxP'):
        return (family,) + tuple(sorted(params))
    return (family,) + params


ALIASES = {
    ('Q', 3): ['GIII(2)', 'Q(3)'],
    ('G', 1, 4): ['GII(3)', 'P3'],
    ('Q', 6): ['GII(4)', 'Q(6)'],
    ('G', 2, 2): ['G(2,2)', 'Q(4)'],
    ('PxP', 1, 1): ['Q(2)', 'PxP(1,1)'],
}


def aliases(space: MarkedSpace) -> List[str]:
    """
    Other names of the same space.

    :param space: The space
    :return: The names other than the space's own
    """
    return [name for name in ALIASES.get(iso_key(space), []) if name != space.name]


class AbstractVmrt:
    """
    The VMRT of a space as an abstract variety with the degree of its embedding
    """

    def __init__(self, space: MarkedSpace, degree: int = 1):
        self.space = space
        self.degree = degree

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('space', self.space.name),
            ('embedding', 'O({})'.format(self.degree)),
        ])

    def __eq__(self, other):
        return isinstance(other, AbstractVmrt) and (self.space, self.degree) == (other.space, other.degree)

    def __repr__(self):
        return 'AbstractVmrt({!r}, {})'.format(self.space.name, self.degree)


def abstract_vmrt(space: MarkedSpace) -> AbstractVmrt:
    """
    The VMRT of a non-linear space as another catalog space.

    Projective spaces are written as G(1,n). The VMRT of GIII(n) and of Q(3) is a projective space embedded by O(2).

    :param space: The space
    :return: The VMRT
    """
    if space.is_product:
        raise ProductUnsupported("{} is a product and has no VMRT in the catalog".format(space))
    if space.is_linear:
        raise LinearSpace("{} is a projective space".format(space))

    family, params = space.family, space.params
    if family == 'G':
        return AbstractVmrt(product_space(params[0] - 1, params[1] - 1))
    if family == 'GII':
        return AbstractVmrt(catalog_space('G', (2, params[0] - 2)))
    if family == 'GIII':
        return AbstractVmrt(catalog_space('G', (1, params[0] - 1)), degree=2)
    if family == 'Q':
        if params[0] == 3:
            return AbstractVmrt(catalog_space('G', (1, 1)), degree=2)
        return AbstractVmrt(catalog_space('Q', (params[0] - 2,), ambient=False))
    if family == 'V':
        return AbstractVmrt(catalog_space('GII', (5,)))
    return AbstractVmrt(catalog_space('V'))


def vmrt_chain(space: MarkedSpace) -> List[AbstractVmrt]:
    """
    Take VMRTs until a projective space or a product is reached.

    :param space: The starting space
    :return: The successive VMRTs
    """
    chain = []
    current = space
    while not current.is_linear and not current.is_product:
        vmrt = abstract_vmrt(current)
        chain.append(vmrt)
        current = vmrt.space
    return chain


def max_linear_dim(space: MarkedSpace) -> Set[int]:
    """
    The possible dimensions of maximal linear subspaces.

    :param space: The space
    :return: The dimensions
    """
    family, params = space.family, space.params
    if family == 'G':
        return set(params)
    if family == 'GII':
        return {3, params[0] - 1}
    if family == 'GIII':
        return {1}
    if family == 'Q':
        return {params[0] // 2}
    if family == 'V':
        return {4, 5}
    if family == 'VI':
        return {5, 6}
    raise ProductUnsupported("{} is a product".format(space))


def catalog(max_rank: int, sources: bool = False) -> List[MarkedSpace]:
    """
    One non-linear space per isomorphism class with diagram rank up to max_rank.

    :param max_rank: The rank bound
    :param sources: Also include Q(2), which only occurs as a subspace
    :return: The spaces
    """
    spaces = []
    if sources:
        spaces.append(catalog_space('Q', (2,), ambient=False))

    for total in range(4, max_rank + 2):
        for p in range(2, total // 2 + 1):
            spaces.append(catalog_space('G', (p, total - p)))

    spaces.extend(catalog_space('GII', (n,)) for n in range(5, max_rank + 1))
    spaces.extend(catalog_space('GIII', (n,)) for n in range(3, max_rank + 1))

    for n in range(3, 2 * max_rank):
        if n == 4:
            continue
        spaces.append(catalog_space('Q', (n,)))

    if max_rank >= 6:
        spaces.append(catalog_space('V'))
    if max_rank >= 7:
        spaces.append(catalog_space('VI'))

    return spaces


class HCPartition:
    """
    The positive noncompact roots split as {gamma}, the tangent part H and the normal part N
    """

    def __init__(self, space: MarkedSpace, nc_pos: List[Root], h_set: List[Root], n_set: List[Root]):
        self.space = space
        self.nc_pos = nc_pos
        self.h_set = h_set
        self.n_set = n_set

        self._nc_index = frozenset(nc_pos)
        self._h_index = frozenset(h_set)
        self._n_index = frozenset(n_set)

    @property
    def gamma(self) -> Root:
        """
        The marked simple root
        """
        return self.space.gamma

    def is_noncompact(self, root: Root) -> bool:
        """
        Whether the root is a positive noncompact root
        """
        return tuple(root) in self._nc_index

    def in_h(self, root: Root) -> bool:
        """
        Whether the root is in the tangent part H
        """
        return tuple(root) in self._h_index

    def in_n(self, root: Root) -> bool:
        """
        Whether the root is in the normal part N
        """
        return tuple(root) in self._n_index

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('space', self.space.name),
            ('dimension', self.space.dimension),
            ('gamma', format_root(self.gamma)),
            ('h_count', len(self.h_set)),
            ('n_count', len(self.n_set)),
            ('h_set', [format_root(root) for root in self.h_set]),
            ('n_set', [format_root(root) for root in self.n_set]),
        ])


_partitions = {}  # type: Dict[MarkedSpace, HCPartition]
_partitions_lock = threading.Lock()


def hc_partition(space: MarkedSpace) -> HCPartition:
    """
    Split the positive noncompact roots by the sum of their coefficients on the nodes adjacent to the marked node:
    1 goes to H and 2 or more goes to N.

    :param space: The space
    :return: The partition
    """
    if space.is_product:
        raise ProductUnsupported("{} is a product and has no root partition".format(space))

    with _partitions_lock:
        cached = _partitions.get(space)
    if cached is not None:
        return cached

    rs = space.root_system
    marked = space.marked
    adjacent = space.diagram.neighbours(marked)

    too_deep = [root for root in rs.positives if root[marked - 1] > 1]
    if too_deep:
        raise IllegalParams("Node {} of {} is not minuscule: {} has coefficient {}".format(
            marked, space.diagram, format_root(too_deep[0]), too_deep[0][marked - 1]))

    nc_pos = [root for root in rs.positives if root[marked - 1] == 1]
    h_set = []
    n_set = []
    for root in nc_pos:
        s = coefficient_sum(root, adjacent)
        if s == 1:
            h_set.append(root)
        elif s >= 2:
            n_set.append(root)

    partition = HCPartition(space, nc_pos, h_set, n_set)
    logger.debug("Partition of {}: |H| = {}, |N| = {}".format(space, len(h_set), len(n_set)))

    with _partitions_lock:
        return _partitions.setdefault(space, partition)


def perp_set(space: MarkedSpace, beta: Root) -> List[Root]:
    """
    The noncompact positive roots other than beta whose difference with beta is not a root.

    :param space: The space
    :param beta: A positive noncompact root
    :return: The roots, in lexicographic order
    """
    partition = hc_partition(space)
    beta = tuple(beta)
    if not partition.is_noncompact(beta):
        raise NotNoncompact("{} is not a positive noncompact root of {}".format(format_root(beta), space))

    rs = space.root_system
    return [other for other in partition.nc_pos
            if other != beta and tuple(x - y for x, y in zip(other, beta)) not in rs.roots]


def perp_stats(space: MarkedSpace) -> OrderedDict:
    """
    Cardinalities of all perp sets and of the intersections for pairs that are not perpendicular.

    :param space: The space
    :return: The report
    """
    partition = hc_partition(space)
    perps = OrderedDict((beta, set(perp_set(space, beta))) for beta in partition.nc_pos)

    singles = OrderedDict((format_root(beta), len(perp)) for beta, perp in perps.items())
    pairs = []
    symmetric = True
    for first, second in itertools.combinations(partition.nc_pos, 2):
        if (second in perps[first]) != (first in perps[second]):
            symmetric = False
        if second in perps[first]:
            continue
        pairs.append(OrderedDict([
            ('first', format_root(first)),
            ('second', format_root(second)),
            ('intersection', len(perps[first] & perps[second])),
        ]))

    return OrderedDict([
        ('space', space.name),
        ('single_sizes', sorted(set(singles.values()))),
        ('pair_intersection_sizes', sorted({pair['intersection'] for pair in pairs})),
        ('symmetric', symmetric),
        ('singles', singles),
        ('pairs', pairs),
    ])
