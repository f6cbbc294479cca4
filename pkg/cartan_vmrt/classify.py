"""
Category membership of pairs of spaces, the atlas over the catalog and its comparison with the expected tables
"""
import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

import networkx as nx
from typing import Dict, Iterable, List, Optional, Tuple

from cartan_vmrt import app_settings
from cartan_vmrt.chss import MarkedSpace, catalog, catalog_space, iso_key, parse_space
from cartan_vmrt.correspond import BUILTIN_TABLES, builtin_map, deletion_map, identification_map
from cartan_vmrt.exceptions import CartanVmrtError, LinearSource, ProductUnsupported, UsageError
from cartan_vmrt.matching import DeletionMatch, deletion_match as match_deleted_chain, subdiagram_embedding
from cartan_vmrt.matmodel import kernel_matrix_model
from cartan_vmrt.utils import load_expected
from cartan_vmrt.vmrt import DEGENERATE, NONDEGENERATE, KernelReport, kernel_root_level

logger = logging.getLogger(__name__)

CATEGORIES = ('subdiagram', 'deletion', 'quadric-odd', 'special', 'transitive')
DIRECT_CATEGORIES = CATEGORIES[:4]

NOT_EVALUATED = 'not-evaluated'

RIGID = 'rigid'
NON_RIGID = 'non-rigid'
OPEN_ALGEBRAIC = 'open-algebraic'
OUT_OF_SCOPE_LINEAR = 'out-of-scope-linear'

TABULATED_FAMILIES = ('V', 'VI', 'GII', 'GIII', 'Q')

CATEGORY_TITLES = OrderedDict([
    ('subdiagram', 'sub-diagram type'),
    ('deletion', 'deletion type and quadrics of even difference'),
    ('quadric-odd', 'quadrics of odd difference'),
    ('special', 'special pairs'),
    ('transitive', 'chains of admissible pairs'),
])


class PairRecord:
    """
    Everything known about a pair: its categories with evidence, its degeneracy and its rigidity
    """

    def __init__(self, source: MarkedSpace, target: MarkedSpace):
        self.source = source
        self.target = target
        self.categories = []  # type: List[str]
        self.evidence = OrderedDict()
        self.degeneracy = NOT_EVALUATED
        self.rigidity = None  # type: Optional[str]
        self.kernel = None  # type: Optional[KernelReport]
        self.notes = []  # type: List[str]

    @property
    def admissible(self) -> bool:
        """
        Whether the pair falls into at least one category
        """
        return bool(self.categories)

    @property
    def direct(self) -> bool:
        """
        Whether the pair has a category other than transitive
        """
        return any(category in DIRECT_CATEGORIES for category in self.categories)

    def add(self, category: str, evidence):
        """
        Claim a category with its evidence.

        :param category: One of CATEGORIES
        :param evidence: Anything that serializes, describing why the pair is in the category
        """
        if category not in CATEGORIES:
            raise ValueError("Unknown category {!r}".format(category))
        if category not in self.categories:
            self.categories.append(category)
            self.categories.sort(key=CATEGORIES.index)
        self.evidence[category] = evidence

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('source', self.source.name),
            ('target', self.target.name),
            ('categories', list(self.categories)),
            ('evidence', OrderedDict((category, self.evidence[category]) for category in self.categories)),
            ('degeneracy', self.degeneracy),
            ('rigidity', self.rigidity),
            ('kernel', self.kernel.as_dict() if self.kernel else None),
            ('notes', list(self.notes)),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'PairRecord':
        """
        Read a record back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The record
        """
        record = cls(parse_space(data['source'], ambient=False), parse_space(data['target']))
        for category in data.get('categories', []):
            record.add(category, data.get('evidence', {}).get(category))
        record.degeneracy = data.get('degeneracy', NOT_EVALUATED)
        record.rigidity = data.get('rigidity')
        if data.get('kernel'):
            record.kernel = KernelReport.from_dict(data['kernel'])
        record.notes = list(data.get('notes', []))
        return record

    def __repr__(self):
        return 'PairRecord({}, {}, {})'.format(self.source, self.target, self.categories)


def subdiagram_match(source: MarkedSpace, target: MarkedSpace) -> Optional[Dict[int, int]]:
    """
    The first identification of the source's marked diagram with a sub-diagram of the target's.

    :param source: The smaller space
    :param target: The bigger space
    :return: Map from source node to target node, or None
    """
    return subdiagram_embedding(source, target)


def deletion_match(source: MarkedSpace, target: MarkedSpace) -> Optional[DeletionMatch]:
    """
    The chain off the target's marked node whose deletion leaves a space containing the source as sub-diagram.

    :param source: The smaller space
    :param target: The bigger space
    :return: The match, with the intermediate space and the chain, or None
    """
    return match_deleted_chain(source, target)


def quadric_difference(source: MarkedSpace, target: MarkedSpace) -> Optional[int]:
    """
    The difference in dimension of two quadrics.

    :param source: The smaller space
    :param target: The bigger space
    :return: The difference or None when one of them is not a quadric
    """
    if not source.is_quadric or not target.is_quadric:
        return None
    return target.dimension - source.dimension


_builtin_keys = {(iso_key(parse_space(s, ambient=False)), iso_key(parse_space(t))) for s, t in BUILTIN_TABLES}


def special_kind(source: MarkedSpace, target: MarkedSpace) -> Optional[str]:
    """
    Which of the special families a pair belongs to.

    :param source: The smaller space
    :param target: The bigger space
    :return: 'builtin' for the exceptional ambient spaces, 'segre' for GIII(n) in G(r,s), 'plucker' for G(r,s) in
             GII(n), or None
    """
    if (iso_key(source), iso_key(target)) in _builtin_keys:
        return 'builtin'

    if source.family == 'GIII' and target.family == 'G':
        n = source.params[0]
        if 3 <= n <= min(target.params):
            return 'segre'

    source_key = iso_key(source)
    if source_key[0] == 'G' and target.family == 'GII':
        r, s = source_key[1:]
        if r >= 3 and s >= 3 and r + s <= target.params[0]:
            return 'plucker'

    return None


def direct_record(source: MarkedSpace, target: MarkedSpace) -> PairRecord:
    """
    Collect the categories that do not need other pairs.

    :param source: The smaller space
    :param target: The bigger space
    :return: A record without degeneracy
    """
    record = PairRecord(source, target)

    node_map = subdiagram_match(source, target)
    if node_map is not None:
        record.add('subdiagram', OrderedDict([('node_map', [[src, tgt] for src, tgt in node_map.items()])]))

    match = deletion_match(source, target)
    if match is not None:
        record.add('deletion', match.as_dict())

    difference = quadric_difference(source, target)
    if difference is not None and difference > 0:
        if difference % 2:
            record.add('quadric-odd', OrderedDict([('difference', difference)]))
        elif match is None:
            record.add('deletion', OrderedDict([('rule', 'quadrics of even difference'),
                                                ('difference', difference)]))

    kind = special_kind(source, target)
    if kind == 'builtin':
        record.add('special', OrderedDict([('kind', kind), ('map', builtin_map(source, target).label)]))
    elif kind:
        record.add('special', OrderedDict([('kind', kind), ('model', kind)]))

    return record


def evaluate_degeneracy(record: PairRecord) -> Optional[KernelReport]:
    """
    Compute the kernel of a pair with direct categories. Quadric pairs and the two classical special families use their
    matrix models, the others go through a root map: the tabulated one, the sub-diagram identification or the
    deletion construction, in that order.

    :param record: The record
    :return: The kernel report or None when no method applies
    """
    source, target = record.source, record.target
    special = record.evidence.get('special') or {}

    if quadric_difference(source, target) is not None:
        return kernel_matrix_model(source, target)
    if special.get('kind') == 'builtin':
        return kernel_root_level(builtin_map(source, target))
    if special.get('kind') in ('segre', 'plucker'):
        return kernel_matrix_model(source, target)
    if 'subdiagram' in record.categories:
        return kernel_root_level(identification_map(source, target))
    if 'deletion' in record.categories:
        return kernel_root_level(deletion_map(source, target))
    return None


def _evaluate(record: PairRecord) -> PairRecord:
    try:
        kernel = evaluate_degeneracy(record)
    except CartanVmrtError as e:
        logger.warning("Could not evaluate ({}, {}): {}".format(record.source, record.target, e))
        record.notes.append('not evaluated: {}'.format(e))
        return record

    if kernel is not None:
        record.kernel = kernel
        record.degeneracy = kernel.verdict
    return record


def _first_pass(pair: Tuple[MarkedSpace, MarkedSpace]) -> PairRecord:
    record = direct_record(*pair)
    if record.admissible:
        _evaluate(record)
    return record


def rigidity_of(record: PairRecord) -> Optional[str]:
    """
    Rigidity from the categories and the degeneracy. Sub-diagram pairs are rigid, degenerate pairs and quadrics of odd
    difference are not, and the remaining admissible pairs are open-algebraic.

    :param record: The record
    :return: The rigidity or None for pairs without category
    """
    if not record.categories:
        return None
    if 'subdiagram' in record.categories:
        return RIGID
    if record.degeneracy == DEGENERATE or 'quadric-odd' in record.categories:
        return NON_RIGID
    return OPEN_ALGEBRAIC


class Atlas:
    """
    All pairs of a set of spaces with a smaller source than target, and their records.

    Chains of admissible pairs never use a Lagrangian Grassmannian inside a Grassmannian as link: Lagrangian
    Grassmannians only sit in Lagrangian Grassmannians and Grassmannians.
    """

    def __init__(self, spaces: Iterable[MarkedSpace], workers: int = 1):
        self.spaces = list(spaces)
        self.records = OrderedDict()  # type: Dict[Tuple[MarkedSpace, MarkedSpace], PairRecord]
        self.discrepancies = []  # type: List[str]

        pairs = []
        for source in self.spaces:
            for target in self.spaces:
                if target.is_product or source.is_linear or target.is_linear:
                    continue
                if source.dimension >= target.dimension or iso_key(source) == iso_key(target):
                    continue
                pairs.append((source, target))

        logger.info("Classifying {} pairs of {} spaces".format(len(pairs), len(self.spaces)))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                records = list(executor.map(_first_pass, pairs))
        else:
            records = [_first_pass(pair) for pair in pairs]

        for record in records:
            self.records[(record.source, record.target)] = record

        self.links = nx.DiGraph()
        self.links.add_nodes_from(self.spaces)
        for (source, target), record in self.records.items():
            if record.admissible and (record.evidence.get('special') or {}).get('kind') != 'segre':
                self.links.add_edge(source, target)

        self._close()
        self._propagate()

        for record in self.records.values():
            record.rigidity = rigidity_of(record)
            if record.categories == ['transitive'] and record.rigidity == OPEN_ALGEBRAIC:
                record.notes.append('rigidity not decided for chains of nondegenerate pairs')

    def _close(self):
        for source in self.spaces:
            if source not in self.links:
                continue
            for target in nx.descendants(self.links, source):
                best = None
                for middle in self.links.successors(source):
                    if middle == target or not nx.has_path(self.links, middle, target):
                        continue
                    path = [source] + nx.shortest_path(self.links, middle, target)
                    if best is None or len(path) < len(best):
                        best = path
                if best is not None:
                    record = self.records[(source, target)]
                    record.add('transitive', OrderedDict([('chain', [space.name for space in best])]))

    def _propagate(self):
        chained = [record for record in self.records.values() if 'transitive' in record.categories]
        degenerate = {key for key, record in self.records.items() if record.degeneracy == DEGENERATE}

        reported = set()

        changed = True
        while changed:
            changed = False
            for record in chained:
                key = (record.source, record.target)
                if key in degenerate or key in reported:
                    continue

                culprit = self._degenerate_link(record, degenerate)
                if culprit is None:
                    continue

                if record.degeneracy == NONDEGENERATE:
                    reported.add(key)
                    self.discrepancies.append("({}, {}) is nondegenerate but its chain link ({}, {}) is "
                                              "degenerate".format(record.source, record.target, *culprit))
                else:
                    record.degeneracy = DEGENERATE
                    record.notes.append('degenerate through ({}, {})'.format(*culprit))
                    degenerate.add(key)
                    changed = True

        for message in self.discrepancies:
            logger.error(message)

    def _linked(self, key: Tuple[MarkedSpace, MarkedSpace]) -> bool:
        if self.links.has_edge(*key):
            return True
        record = self.records.get(key)
        return record is not None and 'transitive' in record.categories

    def _degenerate_link(self, record: PairRecord, degenerate) -> Optional[Tuple[MarkedSpace, MarkedSpace]]:
        for middle in self.spaces:
            first, second = (record.source, middle), (middle, record.target)
            if not self._linked(first) or not self._linked(second):
                continue
            if first in degenerate:
                return first
            if second in degenerate:
                return second
        return None

    def record(self, source: MarkedSpace, target: MarkedSpace) -> PairRecord:
        """
        The record of a pair.

        :param source: The smaller space
        :param target: The bigger space
        :return: The record
        """
        return self.records[(source, target)]

    def admissible(self) -> List[PairRecord]:
        """
        The records with at least one category
        """
        return [record for record in self.records.values() if record.admissible]

    def sources(self, target: MarkedSpace) -> List[PairRecord]:
        """
        The admissible records with the given ambient space.

        :param target: The ambient space
        :return: The records
        """
        return [record for record in self.admissible() if record.target == target]


def _universe(source: MarkedSpace, target: MarkedSpace) -> List[MarkedSpace]:
    bound = max(source.rank, target.rank)
    skip = {iso_key(source), iso_key(target)}
    middle = [space for space in catalog(bound)
              if source.dimension < space.dimension < target.dimension and iso_key(space) not in skip]
    return [source] + middle + [target]


def classify_pair(source: MarkedSpace, target: MarkedSpace) -> PairRecord:
    """
    Classify a single pair, with every catalog space of dimension strictly between them available for chains.

    :param source: The smaller space
    :param target: The bigger space
    :return: The record
    """
    if source.is_linear:
        raise LinearSource("{} is a projective space, see the dimensions of maximal linear subspaces "
                           "instead".format(source))
    if target.is_product:
        raise ProductUnsupported("{} is a product and cannot be an ambient space".format(target))

    if source.dimension >= target.dimension or iso_key(source) == iso_key(target):
        record = PairRecord(source, target)
        record.notes.append('{} is not smaller than {}'.format(source, target))
        return record

    atlas = Atlas(_universe(source, target))
    record = atlas.record(source, target)
    if atlas.discrepancies:
        record.notes.extend(atlas.discrepancies)
    return record


def classify_all(max_rank: int = None, workers: int = 1) -> Atlas:
    """
    Build the atlas of all pairs of catalog spaces up to a rank bound, including Q(2) as source.

    :param max_rank: The rank bound, at least 7
    :param workers: Threads for the pass over the pairs
    :return: The atlas
    """
    max_rank = app_settings.ATLAS_RANK if max_rank is None else max_rank
    if max_rank < 7:
        raise UsageError("The atlas needs a rank bound of at least 7, got {}".format(max_rank))

    return Atlas(catalog(max_rank, sources=True), workers=workers)


def degenerate_linear_exceptions() -> List[OrderedDict]:
    """
    The standard embeddings that do not come from a root map: maximal linear subspaces of odd dimensional quadrics
    and lines in Lagrangian Grassmannians, which are degenerate, and pairs of quadrics.

    :return: The families
    """
    return [
        OrderedDict([
            ('source', 'P(n-1), maximal linear subspace'),
            ('target', 'Q(2n-1)'),
            ('condition', 'n >= 2'),
            ('degeneracy', DEGENERATE),
            ('rigidity', OUT_OF_SCOPE_LINEAR),
        ]),
        OrderedDict([
            ('source', 'P1, maximal linear subspace'),
            ('target', 'GIII(n)'),
            ('condition', 'n >= 2'),
            ('degeneracy', DEGENERATE),
            ('rigidity', OUT_OF_SCOPE_LINEAR),
        ]),
        OrderedDict([
            ('source', 'Q(n)'),
            ('target', 'Q(m)'),
            ('condition', 'n < m'),
            ('degeneracy', DEGENERATE),
            ('rigidity', NON_RIGID),
        ]),
    ]


def _entry(source: MarkedSpace, category: str, rigidity: str) -> Tuple[Tuple, OrderedDict]:
    return iso_key(source), OrderedDict([('source', source.name), ('category', category), ('rigidity', rigidity)])


def expected_sources(target: MarkedSpace) -> Optional[OrderedDict]:
    """
    The admissible sources of an ambient space as listed in the expected tables. Grassmannians are not tabulated.

    :param target: The ambient space
    :return: Entries keyed by the isomorphism class of the source, or None when there is no table
    """
    family, params = target.family, target.params
    entries = []
    if family in ('V', 'VI'):
        for item in load_expected()['atlas'][family]['sources']:
            entries.append(_entry(parse_space(item['source'], ambient=False), item['category'], item['rigidity']))

    elif family == 'GII':
        m = params[0]
        for s in range(2, m - 1):
            entries.append(_entry(catalog_space('G', (2, s)), 'deletion', NON_RIGID))
        for r in range(3, m // 2 + 1):
            for s in range(r, m - r + 1):
                entries.append(_entry(catalog_space('G', (r, s)), 'special', OPEN_ALGEBRAIC))
        for n in (2, 3, 5):
            entries.append(_entry(catalog_space('Q', (n,), ambient=False), 'transitive', NON_RIGID))
        entries.append(_entry(catalog_space('Q', (6,)), 'subdiagram', RIGID))
        for n in range(5, m):
            entries.append(_entry(catalog_space('GII', (n,)), 'subdiagram', RIGID))

    elif family == 'GIII':
        m = params[0]
        for n in range(3, m):
            entries.append(_entry(catalog_space('GIII', (n,)), 'subdiagram', RIGID))
        entries.append(_entry(catalog_space('Q', (3,)), 'subdiagram', RIGID))
        entries.append(_entry(catalog_space('Q', (2,), ambient=False), 'transitive', NON_RIGID))

    elif family == 'Q':
        m = params[0]
        for n in range(2, m):
            source = catalog_space('G', (2, 2)) if n == 4 else catalog_space('Q', (n,), ambient=False)
            entries.append(_entry(source, 'quadric-odd' if (m - n) % 2 else 'deletion', NON_RIGID))

    else:
        return None

    return OrderedDict(entries)


def compare_with_expected(atlas: Atlas) -> OrderedDict:
    """
    Compare the atlas with the expected tables for every tabulated ambient space in it.

    :param atlas: The atlas
    :return: Messages per ambient family, and under 'chains' the conflicts between chains and direct verdicts
    """
    problems = OrderedDict((family, []) for family in TABULATED_FAMILIES)
    problems['chains'] = list(atlas.discrepancies)
    for target in atlas.spaces:
        if target.is_product:
            continue
        expected = expected_sources(target)
        if expected is None:
            continue

        messages = problems[target.family]
        found = OrderedDict((iso_key(record.source), record) for record in atlas.sources(target))
        for key, entry in expected.items():
            record = found.get(key)
            if record is None:
                messages.append("{} should be admissible in {}".format(entry['source'], target))
                continue
            if entry['category'] not in record.categories:
                messages.append("({}, {}) should be {} but is {}".format(
                    entry['source'], target, entry['category'], ', '.join(record.categories)))
            if entry['rigidity'] != record.rigidity:
                messages.append("({}, {}) should be {} but is {}".format(
                    entry['source'], target, entry['rigidity'], record.rigidity))

        for key, record in found.items():
            if key not in expected:
                messages.append("({}, {}) should not be admissible but is {}".format(
                    record.source, target, ', '.join(record.categories)))

    return problems


def group_by_category(records: Iterable[PairRecord]) -> OrderedDict:
    """
    Lines of text for the records, grouped by category in the order of the classification.

    :param records: The records
    :return: Lines per category title
    """
    groups = OrderedDict((title, []) for title in CATEGORY_TITLES.values())
    for record in records:
        for category in record.categories:
            groups[CATEGORY_TITLES[category]].append('({}, {}): {}, {}'.format(
                record.source, record.target, record.degeneracy, record.rigidity))
    return groups
