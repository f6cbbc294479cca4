"""
Tests for the second fundamental form patterns, kernels and nonrigidity witnesses
"""
import pytest

from cartan_vmrt.chss import hc_partition, parse_space
from cartan_vmrt.correspond import builtin_map, deletion_map
from cartan_vmrt.exceptions import InvalidMap, NotDegenerate, NotInH
from cartan_vmrt.correspond import RootMap
from cartan_vmrt.utils import format_root, load_expected, parse_root
from cartan_vmrt.vmrt import DEGENERATE, NONDEGENERATE, KernelReport, OracleResult, WitnessReport, \
    build_sff_pattern, kernel_root_level, nonrigidity_witness, randomized_kernel_oracle, sff_shift, sub_tangent_roots


def test_shift_in_q5():
    space = parse_space('Q(5)')
    assert sff_shift(space, (1, 1, 0), (1, 1, 2)) == (1, 2, 2)
    assert sff_shift(space, (1, 1, 1), (1, 1, 1)) == (1, 2, 2)
    assert sff_shift(space, (1, 1, 0), (1, 1, 0)) is None
    assert sff_shift(space, (1, 1, 0), (1, 1, 1)) is None


def test_shift_with_marked_root():
    space = parse_space('Q(5)')
    assert sff_shift(space, space.gamma, (1, 1, 0)) is None


def test_shift_needs_tangent_roots():
    with pytest.raises(NotInH):
        sff_shift(parse_space('Q(5)'), (1, 2, 2), (1, 1, 0))


def test_pattern_of_q5():
    pattern = build_sff_pattern(parse_space('Q(5)'))
    assert len(pattern.keys()) == 2
    assert pattern.get((1, 1, 2), (1, 1, 0)) == (1, 2, 2)
    assert pattern.as_dict()['entry_count'] == 2


@pytest.mark.parametrize('name', ['V', 'VI', 'GII(5)', 'G(2,3)'])
def test_pattern_points_into_normal_part(name):
    space = parse_space(name)
    partition = hc_partition(space)
    pattern = build_sff_pattern(space)
    assert pattern.keys()
    for pair in pattern.keys():
        assert partition.in_n(pattern.entries[pair])


def test_vi_tangent_and_normal_listing():
    data = load_expected()
    partition = hc_partition(parse_space('VI'))
    assert sorted(parse_root(expr, 7) for expr in data['vi_tangent'].values()) == sorted(partition.h_set)
    assert sorted(parse_root(expr, 7) for expr in data['vi_normal'].values()) == sorted(partition.n_set)


def test_kernel_of_q3_in_q5():
    report = kernel_root_level(deletion_map(parse_space('Q(3)'), parse_space('Q(5)')))
    assert report.verdict == DEGENERATE
    assert report.kernel_basis == ['a2+a1', '2a3+a2+a1']


@pytest.mark.parametrize('source, target', [
    ('GII(5)', 'V'),
    ('V', 'VI'),
])
def test_deletion_pairs_are_degenerate(source, target):
    report = kernel_root_level(deletion_map(parse_space(source), parse_space(target)))
    assert report.degenerate


@pytest.mark.parametrize('source, target', [
    ('G(4,2)', 'V'),
    ('GII(6)', 'VI'),
    ('G(6,2)', 'VI'),
    ('G(5,2)', 'VI'),
    ('G(3,3)', 'VI'),
])
def test_builtin_pairs_are_nondegenerate(source, target):
    report = kernel_root_level(builtin_map(parse_space(source), parse_space(target)))
    assert report.verdict == NONDEGENERATE
    assert report.method == 'root-level'


def test_g33_in_vi_witnesses():
    data = load_expected()
    tangent = data['vi_tangent']
    normal = data['vi_normal']

    root_map = builtin_map(parse_space('G(3,3)'), parse_space('VI'))
    assert [format_root(root) for root in sub_tangent_roots(root_map)] == \
        sorted((tangent[label] for label in data['vi_g33_image']),
               key=lambda expr: parse_root(expr, 7))

    space = parse_space('VI')
    for item in data['vi_witnesses']:
        u = parse_root(tangent[item['u']], 7)
        w = parse_root(tangent[item['w']], 7)
        assert sff_shift(space, u, w) == parse_root(normal[item['target']], 7)

    report = kernel_root_level(root_map)
    assert len(report.witnesses) == 12


def test_invalid_map_has_no_kernel():
    source, target = parse_space('G(4,2)'), parse_space('V')
    images = dict(builtin_map(source, target).simple_images)
    images[1] = parse_root('a4', 6)
    with pytest.raises(InvalidMap):
        kernel_root_level(RootMap(source, target, images))


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_oracle_agrees_on_g33_in_vi(seed):
    root_map = builtin_map(parse_space('G(3,3)'), parse_space('VI'))
    sub = sub_tangent_roots(root_map)
    partition = hc_partition(root_map.target)
    domain = [root for root in partition.h_set if root not in sub]
    result = randomized_kernel_oracle(build_sff_pattern(root_map.target), sub, trials=2, seed=seed, domain=domain)
    assert result.dimension == 0
    assert len(result.trial_dimensions) == 2


def test_oracle_agrees_on_q3_in_q5():
    root_map = deletion_map(parse_space('Q(3)'), parse_space('Q(5)'))
    sub = sub_tangent_roots(root_map)
    domain = [root for root in hc_partition(root_map.target).h_set if root not in sub]
    result = randomized_kernel_oracle(build_sff_pattern(root_map.target), sub, seed=5, domain=domain)
    assert result.dimension == 2


def test_oracle_needs_trials():
    pattern = build_sff_pattern(parse_space('Q(5)'))
    with pytest.raises(ValueError):
        randomized_kernel_oracle(pattern, [], trials=0)


def test_report_serialization():
    report = kernel_root_level(deletion_map(parse_space('Q(3)'), parse_space('Q(5)')))
    again = KernelReport.from_dict(report.as_dict())
    assert again.verdict == report.verdict
    assert again.kernel_basis == report.kernel_basis
    assert again.as_dict()['kernel_dimension'] == 2


@pytest.mark.parametrize('source, target', [
    ('Q(3)', 'Q(5)'),
    ('GII(5)', 'V'),
])
def test_witness_verified(source, target):
    root_map = deletion_map(parse_space(source), parse_space(target))
    report = nonrigidity_witness(root_map, seed=3, samples=5)
    assert report.verified, report.as_dict()
    assert report.seed == 3


def test_witness_recipe():
    root_map = deletion_map(parse_space('Q(3)'), parse_space('Q(5)'))
    report = nonrigidity_witness(root_map, seed=1, samples=2)
    assert report.recipe[:3] == ['w1 = z1', 'w2 = z2', 'w3 = z3']
    assert 'w4 = z3^2' in report.recipe
    assert report.as_dict()['eta'] == 'a2+a1'


def test_witness_is_deterministic():
    root_map = deletion_map(parse_space('GII(5)'), parse_space('V'))
    first = nonrigidity_witness(root_map, seed=9, samples=3).as_dict()
    second = nonrigidity_witness(root_map, seed=9, samples=3).as_dict()
    assert first == second


def test_witness_needs_degenerate_pair():
    with pytest.raises(NotDegenerate):
        nonrigidity_witness(builtin_map(parse_space('G(4,2)'), parse_space('V')))


def test_oracle_result_reads_back():
    root_map = deletion_map(parse_space('Q(3)'), parse_space('Q(5)'))
    sub = sub_tangent_roots(root_map)
    domain = [root for root in hc_partition(root_map.target).h_set if root not in sub]
    result = randomized_kernel_oracle(build_sff_pattern(root_map.target), sub, trials=2, seed=4, domain=domain)
    assert OracleResult.from_dict(result.as_dict()).as_dict() == result.as_dict()


def test_witness_report_reads_back():
    report = nonrigidity_witness(deletion_map(parse_space('GII(5)'), parse_space('V')), seed=2, samples=2)
    restored = WitnessReport.from_dict(report.as_dict())
    assert restored.eta == report.eta
    assert restored.verified
    assert restored.as_dict() == report.as_dict()
