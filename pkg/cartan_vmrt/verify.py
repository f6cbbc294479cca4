"""
Replay every checkable claim against the golden values shipped with the package
"""
import logging
import random
from collections import OrderedDict

from sympy import Matrix
from typing import Callable, Iterator, List, Tuple

from cartan_vmrt import app_settings
from cartan_vmrt.chss import catalog_space, hc_partition, parse_space, perp_set, perp_stats
from cartan_vmrt.classify import TABULATED_FAMILIES, classify_all, compare_with_expected
from cartan_vmrt.correspond import builtin_map, deletion_map, search_root_map, verify_root_map
from cartan_vmrt.exceptions import CartanVmrtError
from cartan_vmrt.matmodel import ChernPoly, MatrixPoint, chern_factor_search, embed_grass_into_skew, \
    embed_sym_into_grass, kernel_matrix_model, vmrt_rank_membership
from cartan_vmrt.rootsys import build_diagram, generate_root_system
from cartan_vmrt.utils import format_root, load_expected, parse_root
from cartan_vmrt.vmrt import build_sff_pattern, kernel_root_level, nonrigidity_witness, randomized_kernel_oracle, \
    sff_shift, sub_tangent_roots

logger = logging.getLogger(__name__)

Outcome = Tuple[str, bool, str]


class CheckResult:
    """
    The outcome of one claim
    """

    def __init__(self, item: str, anchor: str, passed: bool, detail: str = ''):
        self.item = item
        self.anchor = anchor
        self.passed = passed
        self.detail = detail

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('item', self.item),
            ('status', 'pass' if self.passed else 'fail'),
            ('anchor', self.anchor),
            ('detail', self.detail),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'CheckResult':
        """
        Read a result back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The result
        """
        return cls(data['item'], data['anchor'], data['status'] == 'pass', data.get('detail', ''))


class SuiteReport:
    """
    All results of a verification run
    """

    def __init__(self, seed: int, max_rank: int):
        self.seed = seed
        self.max_rank = max_rank
        self.results = []  # type: List[CheckResult]

    @property
    def passed(self) -> bool:
        """
        Whether every check passed
        """
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        """
        The failed checks
        """
        return [result for result in self.results if not result.passed]

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        return OrderedDict([
            ('seed', self.seed),
            ('max_rank', self.max_rank),
            ('passed', self.passed),
            ('total', len(self.results)),
            ('failed', len(self.failures)),
            ('results', [result.as_dict() for result in self.results]),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'SuiteReport':
        """
        Read a report back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The report
        """
        report = cls(data['seed'], data['max_rank'])
        report.results = [CheckResult.from_dict(result) for result in data.get('results', [])]
        return report


def check_root_counts(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['root_counts']:
        family, rank = item['diagram']
        found = len(generate_root_system(build_diagram(family, rank)).positives)
        yield item['anchor'], found == item['positives'], '{} positive roots'.format(found)

    for item in data['noncompact_counts']:
        found = len(hc_partition(parse_space(item['space'])).nc_pos)
        yield item['anchor'], found == item['count'], '{} noncompact positive roots'.format(found)


def check_partitions(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['partitions']:
        partition = hc_partition(parse_space(item['space']))
        found = (len(partition.h_set), len(partition.n_set))
        yield item['anchor'], found == (item['h'], item['n']), '|H| = {}, |N| = {}'.format(*found)

    vi = hc_partition(catalog_space('VI'))
    cells = (('tangent', data['vi_tangent'], vi.h_set), ('normal', data['vi_normal'], vi.n_set))
    for label, listed, part in cells:
        roots = {key: parse_root(expr, 7) for key, expr in listed.items()}
        wrong = [key for key, root in roots.items() if root not in set(part)]
        passed = not wrong and set(roots.values()) == set(part)
        yield 'the listed {} roots of VI are exactly its {} part'.format(label, label), passed, \
            'misplaced: {}'.format(', '.join(wrong)) if wrong else '{} roots'.format(len(roots))


def check_perp(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['perp']:
        space = parse_space(item['space'])
        if 'root' in item:
            found = [format_root(root) for root in perp_set(space, parse_root(item['root'], space.rank))]
            yield item['anchor'], sorted(found) == sorted(item['expected']), ', '.join(found)
        else:
            first, second = (set(perp_set(space, parse_root(expr, space.rank))) for expr in item['roots'])
            found = sorted(format_root(root) for root in first & second)
            yield item['anchor'], found == sorted(item['intersection']), ', '.join(found)

    for item in data['perp_stats']:
        stats = perp_stats(parse_space(item['space']))
        passed = stats['single_sizes'] == item['single_sizes'] and \
            stats['pair_intersection_sizes'] == item['pair_intersection_sizes'] and stats['symmetric']
        yield item['anchor'], passed, 'sizes {}, intersections {}'.format(stats['single_sizes'],
                                                                         stats['pair_intersection_sizes'])


def _map_outcome(anchor: str, build: Callable) -> Outcome:
    try:
        report = verify_root_map(build())
    except CartanVmrtError as e:
        return anchor, False, str(e)
    return anchor, report.valid, '; '.join(report.failures) or 'valid'


def check_builtin_maps(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['builtin_pairs']:
        source, target = parse_space(item['source']), parse_space(item['target'])
        yield _map_outcome(item['anchor'], lambda: builtin_map(source, target))


def check_deletion_maps(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['deletion_pairs']:
        source, target = parse_space(item['source']), parse_space(item['target'])
        yield _map_outcome(item['anchor'], lambda: deletion_map(source, target))


def _verdict_outcome(anchor: str, expected: str, build: Callable) -> Outcome:
    try:
        kernel = build()
    except CartanVmrtError as e:
        return anchor, False, str(e)
    return anchor, kernel.verdict == expected, '{} by {}, kernel dimension {}'.format(
        kernel.verdict, kernel.method, len(kernel.kernel_basis))


def check_kernel_verdicts(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['special_matrix_pairs']:
        source, target = parse_space(item['source']), parse_space(item['target'])
        yield _verdict_outcome(item['anchor'], 'nondegenerate', lambda: kernel_matrix_model(source, target))

    for item in data['builtin_pairs']:
        source, target = parse_space(item['source']), parse_space(item['target'])
        yield _verdict_outcome('{} and nondegenerate'.format(item['anchor']), 'nondegenerate',
                               lambda: kernel_root_level(builtin_map(source, target)))

    for item in data['deletion_pairs']:
        source, target = parse_space(item['source']), parse_space(item['target'])
        yield _verdict_outcome('{} and degenerate'.format(item['anchor']), 'degenerate',
                               lambda: kernel_root_level(deletion_map(source, target)))

    for b in range(3, 13):
        for a in range(2, b):
            source = catalog_space('Q', (a,), ambient=False)
            target = catalog_space('Q', (b,))
            kernel = kernel_matrix_model(source, target)
            yield ('a quadric of dimension {} in one of dimension {} has a kernel of dimension {}'.format(a, b, b - a),
                   kernel.degenerate and len(kernel.kernel_basis) == b - a,
                   'kernel dimension {}'.format(len(kernel.kernel_basis)))


def check_witness_table(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    vi = catalog_space('VI')
    tangent = {key: parse_root(expr, 7) for key, expr in data['vi_tangent'].items()}
    normal = {key: parse_root(expr, 7) for key, expr in data['vi_normal'].items()}

    root_map = builtin_map(parse_space('G(3,3)'), vi)
    image = set(sub_tangent_roots(root_map))
    expected_image = {tangent[key] for key in data['vi_g33_image']}
    yield 'the tangent roots of G(3,3) land on four listed tangent roots of VI', image == expected_image, \
        ', '.join(sorted(key for key, root in tangent.items() if root in image))

    for item in data['vi_witnesses']:
        found = sff_shift(vi, tangent[item['u']], tangent[item['w']])
        passed = found == normal[item['target']]
        detail = '{} + {} points at {}'.format(item['u'], item['w'], format_root(found) if found else 'nothing')
        if item['listed'] != item['target']:
            detail += ', printed as {}'.format(item['listed'])
        yield 'the product of {} and {} is {}'.format(item['u'], item['w'], item['target']), passed, detail

    covered = {tangent[item['u']] for item in data['vi_witnesses']}
    outside = set(hc_partition(vi).h_set) - image
    yield 'every tangent root of VI outside G(3,3) has a listed product', covered == outside, \
        '{} of {} covered'.format(len(covered & outside), len(outside))


def check_oracle(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    maps = [builtin_map(parse_space(item['source']), parse_space(item['target'])) for item in data['builtin_pairs']]
    maps += [deletion_map(parse_space(item['source']), parse_space(item['target']))
             for item in data['deletion_pairs']]

    for root_map in maps:
        kernel = kernel_root_level(root_map)
        expected = len(kernel.kernel_basis)
        sub = sub_tangent_roots(root_map)
        domain = [root for root in hc_partition(root_map.target).h_set if root not in set(sub)]
        pattern = build_sff_pattern(root_map.target)
        results = [randomized_kernel_oracle(pattern, sub, seed=seed + offset, domain=domain) for offset in range(3)]
        passed = all(result.dimension == expected and all(found == expected for found in result.trial_dimensions)
                     for result in results)
        yield ('random structure constants give the same kernel for ({}, {})'.format(
            root_map.source, root_map.target),
            passed,
            'root level {}, oracle trials {}'.format(expected, [result.trial_dimensions for result in results]))


def _random_vector(rng: random.Random, size: int) -> List[int]:
    vector = [rng.randint(-5, 5) for _ in range(size)]
    if not any(vector):
        vector[rng.randrange(size)] = 1
    return vector


def _random_point(rng: random.Random, shape: str, size: int, on_cone: bool) -> MatrixPoint:
    if shape == 'symmetric':
        if on_cone:
            v = Matrix(_random_vector(rng, size))
            return MatrixPoint(shape, v * v.T)
        m = Matrix(size, size, lambda i, j: rng.randint(-5, 5))
        return MatrixPoint(shape, m + m.T)

    if on_cone:
        return MatrixPoint(shape, Matrix(_random_vector(rng, size)) * Matrix(_random_vector(rng, size)).T)
    return MatrixPoint(shape, Matrix(size, size, lambda i, j: rng.randint(-5, 5)))


def check_matrix_models(data: dict, seed: int, max_rank: int, samples: int = 100) -> Iterator[Outcome]:
    rng = random.Random(seed)
    g33 = catalog_space('G', (3, 3))

    functorial = respected = True
    for sample in range(samples):
        point = _random_point(rng, 'symmetric', 3, on_cone=bool(sample % 2))
        if point.is_zero:
            continue
        image = embed_sym_into_grass(3, 3, 3, point)
        functorial &= image.rank == point.rank
        if vmrt_rank_membership(catalog_space('GIII', (3,)), point):
            respected &= vmrt_rank_membership(g33, image)
    yield 'the Lagrangian Grassmannian in the Grassmannian keeps ranks', functorial, '{} samples'.format(samples)
    yield 'the Lagrangian Grassmannian in the Grassmannian keeps the VMRT', respected, '{} samples'.format(samples)

    gii6 = catalog_space('GII', (6,))
    functorial = respected = True
    for sample in range(samples):
        point = _random_point(rng, 'general', 3, on_cone=bool(sample % 2))
        if point.is_zero:
            continue
        image = embed_grass_into_skew(3, 3, 6, point)
        functorial &= image.rank == 2 * point.rank
        if vmrt_rank_membership(g33, point):
            respected &= vmrt_rank_membership(gii6, image)
    yield 'the Grassmannian in the orthogonal Grassmannian doubles ranks', functorial, '{} samples'.format(samples)
    yield 'the Grassmannian in the orthogonal Grassmannian keeps the VMRT', respected, '{} samples'.format(samples)


def check_chern(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['chern']:
        found = chern_factor_search(ChernPoly(item['target']), tuple(item['split']))
        expected = tuple(tuple(factor) for factor in item['factors']) if item['factors'] else None
        yield item['anchor'], found == expected, str(found)


def check_searches(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['nonexistent_maps']:
        found = search_root_map(parse_space(item['source']), parse_space(item['target']))
        yield item['anchor'], found is None, 'none' if found is None else str(found)

    for item in data['existing_maps']:
        found = search_root_map(parse_space(item['source']), parse_space(item['target']))
        yield item['anchor'], found is not None, str(found)


def check_atlas(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    problems = compare_with_expected(classify_all(max_rank))
    for family in TABULATED_FAMILIES:
        messages = problems[family]
        yield data['atlas'][family]['anchor'], not messages, '; '.join(messages) or 'matches'

    yield 'chains of admissible pairs agree with the direct verdicts', not problems['chains'], \
        '; '.join(problems['chains']) or 'consistent'


def check_witnesses(data: dict, seed: int, max_rank: int) -> Iterator[Outcome]:
    for item in data['witness_pairs']:
        root_map = deletion_map(parse_space(item['source']), parse_space(item['target']))
        for offset in range(3):
            report = nonrigidity_witness(root_map, seed=seed + offset)
            n = len(hc_partition(root_map.source).nc_pos)
            has_recipe = 'w{} = z{}^2'.format(n + 1, n) in report.recipe
            yield '{} (seed {})'.format(item['anchor'], seed + offset), report.verified and has_recipe, \
                'eta = {}, {}'.format(format_root(report.eta), dict(report.checks))


CHECKS = OrderedDict([
    ('root-counts', check_root_counts),
    ('partitions', check_partitions),
    ('perp', check_perp),
    ('builtin-maps', check_builtin_maps),
    ('deletion-maps', check_deletion_maps),
    ('kernel-verdicts', check_kernel_verdicts),
    ('witness-table', check_witness_table),
    ('oracle', check_oracle),
    ('matrix-models', check_matrix_models),
    ('chern', check_chern),
    ('searches', check_searches),
    ('atlas', check_atlas),
    ('witnesses', check_witnesses),
])


def verify_all(seed: int = None, max_rank: int = None) -> SuiteReport:
    """
    Run every check in order. Failures and errors are recorded as failed results, nothing is raised.

    :param seed: The seed for randomized checks
    :param max_rank: The rank bound of the atlas
    :return: The report
    """
    seed = app_settings.DEFAULT_SEED if seed is None else seed
    max_rank = app_settings.ATLAS_RANK if max_rank is None else max_rank
    data = load_expected()

    report = SuiteReport(seed, max_rank)
    for item, check in CHECKS.items():
        logger.info("Checking {}".format(item))
        try:
            for anchor, passed, detail in check(data, seed, max_rank):
                report.results.append(CheckResult(item, anchor, bool(passed), detail))
        except CartanVmrtError as e:
            logger.error("Check {} stopped: {}".format(item, e))
            report.results.append(CheckResult(item, 'the {} checks run to completion'.format(item), False, str(e)))

    logger.info("{} of {} checks passed".format(len(report.results) - len(report.failures), len(report.results)))
    return report
