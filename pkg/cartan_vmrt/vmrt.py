"""
The second fundamental form of the VMRT cone at root level, its kernel and the non-rigidity witness
"""
import itertools
import logging
import random
from collections import OrderedDict

from sympy import Matrix, Rational
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from cartan_vmrt import app_settings
from cartan_vmrt.chss import MarkedSpace, hc_partition, parse_space
from cartan_vmrt.correspond import RootMap, verify_root_map
from cartan_vmrt.exceptions import InvalidMap, NotDegenerate, NotInH
from cartan_vmrt.rootsys import Root
from cartan_vmrt.utils import format_root, parse_root

logger = logging.getLogger(__name__)

DEGENERATE = 'degenerate'
NONDEGENERATE = 'nondegenerate'


def _shift(a: Sequence[int], b: Sequence[int], gamma: Sequence[int]) -> Root:
    return tuple(x + y - g for x, y, g in zip(a, b, gamma))


def sff_shift(space: MarkedSpace, first: Sequence[int], second: Sequence[int]) -> Optional[Root]:
    """
    The root vector that the second fundamental form of two tangent root vectors points at, if any.

    :param space: The space
    :param first: A root in H or the marked root
    :param second: A root in H or the marked root
    :return: first + second - gamma when that is a root, None otherwise
    """
    partition = hc_partition(space)
    gamma = partition.gamma
    first, second = tuple(first), tuple(second)
    for root in (first, second):
        if root != gamma and not partition.in_h(root):
            raise NotInH("{} is not in the tangent part of {}".format(format_root(root), space))

    if first == gamma or second == gamma:
        return None

    target = _shift(first, second, gamma)
    return target if target in space.root_system.roots else None


class SffPattern:
    """
    Which pairs of tangent roots have a nonzero second fundamental form, and where it points
    """

    def __init__(self, space: MarkedSpace, entries: Dict[FrozenSet[Root], Root]):
        self.space = space
        self.entries = entries

    def get(self, first: Sequence[int], second: Sequence[int]) -> Optional[Root]:
        """
        The target of a pair.

        :param first: A root in H
        :param second: A root in H
        :return: The normal root or None
        """
        return self.entries.get(frozenset((tuple(first), tuple(second))))

    def keys(self) -> List[FrozenSet[Root]]:
        """
        The pairs with a target, in a fixed order
        """
        return sorted(self.entries, key=lambda pair: sorted(pair))

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        entries = []
        for pair in self.keys():
            first, second = sorted(pair) * 2 if len(pair) == 1 else sorted(pair)
            entries.append([format_root(first), format_root(second), format_root(self.entries[pair])])
        return OrderedDict([
            ('space', self.space.name),
            ('entry_count', len(entries)),
            ('entries', entries),
        ])


def build_sff_pattern(space: MarkedSpace) -> SffPattern:
    """
    Tabulate the shifts of all pairs of tangent roots.

    :param space: The space
    :return: The pattern
    """
    partition = hc_partition(space)
    entries = {}
    for first, second in itertools.combinations_with_replacement(partition.h_set, 2):
        target = sff_shift(space, first, second)
        if target is not None:
            assert partition.in_n(target), "Shift of tangent roots must be normal"
            entries[frozenset((first, second))] = target

    return SffPattern(space, entries)


class KernelReport:
    """
    The directions beyond the marked root on which the second fundamental form vanishes against the subspace
    """

    def __init__(self, source: MarkedSpace, target: MarkedSpace, method: str, kernel_basis: List[str],
                 witnesses: List[OrderedDict] = None, details: OrderedDict = None):
        self.source = source
        self.target = target
        self.method = method
        self.kernel_basis = kernel_basis
        self.witnesses = witnesses or []
        self.details = details or OrderedDict()

    @property
    def verdict(self) -> str:
        """
        Degenerate exactly when there is a kernel
        """
        return DEGENERATE if self.kernel_basis else NONDEGENERATE

    @property
    def degenerate(self) -> bool:
        """
        Whether the pair is degenerate
        """
        return bool(self.kernel_basis)

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('source', self.source.name),
            ('target', self.target.name),
            ('method', self.method),
            ('verdict', self.verdict),
            ('kernel_dimension', len(self.kernel_basis)),
            ('kernel_basis', list(self.kernel_basis)),
            ('witnesses', [OrderedDict(witness) for witness in self.witnesses]),
            ('details', OrderedDict(self.details)),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'KernelReport':
        """
        Read a report back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The report
        """
        return cls(parse_space(data['source'], ambient=False), parse_space(data['target']), data['method'],
                   list(data['kernel_basis']), [OrderedDict(w) for w in data.get('witnesses', [])],
                   OrderedDict(data.get('details', {})))


def sub_tangent_roots(root_map: RootMap) -> List[Root]:
    """
    The images of the source's tangent roots.

    :param root_map: A valid root map
    :return: The images, sorted
    """
    return sorted(root_map.image(root) for root in hc_partition(root_map.source).h_set)


def kernel_root_level(root_map: RootMap) -> KernelReport:
    """
    Find the tangent roots outside the image of the source whose second fundamental form vanishes against every
    tangent root of the source. Nonzero structure constants and injective shifts make this check on root vectors
    decide the kernel of the full linear map.

    :param root_map: The root map of the pair
    :return: The report, with one witness for every tangent root outside the kernel
    """
    report = verify_root_map(root_map)
    if not report.valid:
        raise InvalidMap("Map for ({}, {}) is invalid: {}".format(
            root_map.source, root_map.target, '; '.join(report.failures)))

    target = root_map.target
    partition = hc_partition(target)
    sub = sub_tangent_roots(root_map)
    sub_index = set(sub)

    kernel = []
    witnesses = []
    for root in partition.h_set:
        if root in sub_index:
            continue

        for other in sub:
            shifted = sff_shift(target, root, other)
            if shifted is not None:
                witnesses.append(OrderedDict([
                    ('u', format_root(root)),
                    ('w', format_root(other)),
                    ('target', format_root(shifted)),
                ]))
                break
        else:
            kernel.append(root)

    details = OrderedDict([
        ('map', root_map.label),
        ('h_count', len(partition.h_set)),
        ('sub_count', len(sub)),
        ('sub', [format_root(root) for root in sub]),
    ])
    logger.info("Root level kernel of ({}, {}) has dimension {}".format(root_map.source, target, len(kernel)))
    return KernelReport(root_map.source, target, 'root-level', [format_root(root) for root in kernel],
                        witnesses, details)


class OracleResult:
    """
    Kernel dimensions found with random structure constants
    """

    def __init__(self, dimension: int, trial_dimensions: List[int], seed: int):
        self.dimension = dimension
        self.trial_dimensions = trial_dimensions
        self.seed = seed

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('dimension', self.dimension),
            ('trial_dimensions', list(self.trial_dimensions)),
            ('seed', self.seed),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'OracleResult':
        """
        Read a result back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The result
        """
        return cls(data['dimension'], list(data['trial_dimensions']), data.get('seed'))


def structure_constants(pattern: SffPattern, rng: random.Random) -> Dict[FrozenSet[Root], int]:
    """
    Draw a nonzero constant for every pair in the pattern.

    :param pattern: The pattern
    :param rng: The random generator
    :return: Constants per unordered pair
    """
    return {pair: rng.randint(1, 97) for pair in pattern.keys()}


def randomized_kernel_oracle(pattern: SffPattern, sub_basis: Sequence[Sequence[int]], trials: int = None,
                             seed: int = None, domain: Sequence[Sequence[int]] = None) -> OracleResult:
    """
    Compute the kernel of u -> (sff(u, w)) for w in the sub basis as an exact null space, with random nonzero
    constants in place of the unknown structure constants.

    :param pattern: The pattern of the ambient space
    :param sub_basis: The tangent roots of the subspace
    :param trials: The number of independent draws
    :param seed: The seed of the first draw
    :param domain: The tangent roots to take the kernel on, all of H by default
    :return: The smallest dimension found and the dimension of every trial
    """
    trials = app_settings.ORACLE_TRIALS if trials is None else trials
    seed = app_settings.DEFAULT_SEED if seed is None else seed
    if trials < 1:
        raise ValueError("Need at least one trial")

    domain = [tuple(root) for root in (hc_partition(pattern.space).h_set if domain is None else domain)]
    sub_basis = [tuple(root) for root in sub_basis]

    rows = OrderedDict()
    for w in sub_basis:
        for column, u in enumerate(domain):
            target = pattern.get(u, w)
            if target is not None:
                rows.setdefault((w, target), []).append((column, frozenset((u, w))))

    dimensions = []
    for trial in range(trials):
        rng = random.Random(seed * 1000003 + trial)
        constants = structure_constants(pattern, rng)
        if not rows or not domain:
            dimensions.append(len(domain))
            continue

        matrix = Matrix.zeros(len(rows), len(domain))
        for r, entries in enumerate(rows.values()):
            for column, pair in entries:
                matrix[r, column] += Rational(constants[pair])

        dimensions.append(len(domain) - matrix.rank())

    logger.debug("Oracle kernel dimensions {} for seed {}".format(dimensions, seed))
    return OracleResult(min(dimensions), dimensions, seed)


def _sff(pattern: SffPattern, constants, first: Dict[Root, Rational], second: Dict[Root, Rational]) \
        -> Dict[Root, Rational]:
    out = {}
    for u, x in first.items():
        for w, y in second.items():
            target = pattern.get(u, w)
            if target is not None:
                out[target] = out.get(target, 0) + x * y * constants[frozenset((u, w))]
    return out


def _combine(*terms: Tuple[Rational, Dict[Root, Rational]]) -> Dict[Root, Rational]:
    out = {}
    for factor, vector in terms:
        for root, value in vector.items():
            out[root] = out.get(root, 0) + factor * value
    return {root: value for root, value in out.items() if value != 0}


class WitnessReport:
    """
    A germ of submanifold showing that a degenerate pair is not rigid
    """

    def __init__(self, source: MarkedSpace, target: MarkedSpace):
        self.source = source
        self.target = target
        self.eta = None
        self.checks = OrderedDict()
        self.coordinates = []  # type: List[str]
        self.recipe = []  # type: List[str]
        self.seed = None
        self.samples = 0

    @property
    def verified(self) -> bool:
        """
        Whether every check passed
        """
        return bool(self.checks) and all(self.checks.values())

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('source', self.source.name),
            ('target', self.target.name),
            ('eta', format_root(self.eta) if self.eta else None),
            ('verified', self.verified),
            ('checks', OrderedDict(self.checks)),
            ('coordinates', list(self.coordinates)),
            ('recipe', list(self.recipe)),
            ('seed', self.seed),
            ('samples', self.samples),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'WitnessReport':
        """
        Read a report back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The report
        """
        report = cls(parse_space(data['source'], ambient=False), parse_space(data['target']))
        if data.get('eta'):
            report.eta = parse_root(data['eta'], report.target.rank)
        report.checks = OrderedDict(data.get('checks', {}))
        report.coordinates = list(data.get('coordinates', []))
        report.recipe = list(data.get('recipe', []))
        report.seed = data.get('seed')
        report.samples = data.get('samples', 0)
        return report


def nonrigidity_witness(root_map: RootMap, seed: int = None, samples: int = None) -> WitnessReport:
    """
    Build the graph of (z_1, ..., z_n) -> (z_1, ..., z_n, z_n^2, 0, ..., 0) in Harish-Chandra coordinates whose first
    n coordinates belong to the source and coordinate n+1 to a kernel root eta. Tangent directions of the graph stay on
    the VMRT cone when sff(eta, eta) and sff(eta, H_0) vanish, which is checked at random points.

    :param root_map: The root map of a degenerate pair
    :param seed: The seed for the random structure constants and points
    :param samples: The number of points to check
    :return: The report
    """
    seed = app_settings.DEFAULT_SEED if seed is None else seed
    samples = app_settings.WITNESS_SAMPLES if samples is None else samples

    kernel = kernel_root_level(root_map)
    if not kernel.degenerate:
        raise NotDegenerate("({}, {}) is not degenerate".format(root_map.source, root_map.target))

    source, target = root_map.source, root_map.target
    partition = hc_partition(target)
    gamma = partition.gamma
    rs = target.root_system
    sub = sub_tangent_roots(root_map)

    eta = next(root for root in partition.h_set if format_root(root) == kernel.kernel_basis[0])

    report = WitnessReport(source, target)
    report.eta = eta
    report.seed = seed
    report.samples = samples
    report.checks['eta_eta_vanishes'] = _shift(eta, eta, gamma) not in rs.roots
    report.checks['eta_sub_vanishes'] = all(sff_shift(target, eta, w) is None for w in sub)

    source_part = hc_partition(source)
    first = [root_map.image(root) for root in source_part.nc_pos]
    rest = [root for root in partition.nc_pos if root not in first and root != eta]
    ordered = first + [eta] + rest
    n = len(first)
    report.coordinates = ['w{} ~ {}'.format(i, format_root(root)) for i, root in enumerate(ordered, start=1)]
    report.recipe = ['w{0} = z{0}'.format(i) for i in range(1, n + 1)]
    report.recipe.append('w{} = z{}^2'.format(n + 1, n))
    if len(ordered) > n + 1:
        report.recipe.append('w{} = 0 for {} <= j <= {}'.format('j', n + 2, len(ordered)))

    pattern = build_sff_pattern(target)
    rng = random.Random(seed)
    identity_ok = True
    for sample in range(samples):
        constants = structure_constants(pattern, rng)
        xi = {w: Rational(rng.randint(-9, 9), rng.randint(1, 9)) for w in sub}
        lam = Rational(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
        moved = _combine((1, xi), (lam, {eta: 1}))

        left = _combine((1, {gamma: 1}), (1, moved), (1, _sff(pattern, constants, moved, moved)))
        right = _combine((1, {gamma: 1}), (1, xi), (1, _sff(pattern, constants, xi, xi)), (lam, {eta: 1}))
        if left != right:
            identity_ok = False
            logger.error("Quadratic parametrization moved off the cone at sample {}".format(sample))
            break

    report.checks['cone_identity'] = identity_ok
    logger.info("Witness for ({}, {}) with eta = {}: {}".format(source, target, format_root(eta),
                                                              'verified' if report.verified else 'failed'))
    return report
