"""
Tests for root maps: the tables, the deletion construction and the search
"""
import pytest

from cartan_vmrt.chss import parse_space
from cartan_vmrt.correspond import BUILTIN_TABLES, MapReport, RootMap, builtin_map, deletion_map, identification_map, \
    search_root_map, verify_root_map
from cartan_vmrt.exceptions import BudgetExceeded, DiagramMismatch, NoBuiltin, NotDeletionType, ProductUnsupported
from cartan_vmrt.utils import parse_root


@pytest.mark.parametrize('source, target', list(BUILTIN_TABLES) + [('G(2,4)', 'V'), ('G(2,6)', 'VI')])
def test_builtin_maps_are_valid(source, target):
    root_map = builtin_map(parse_space(source), parse_space(target))
    report = verify_root_map(root_map)
    assert report.valid, report.failures
    assert report.consequences_hold
    assert root_map.provenance == 'builtin-table'


def test_mirrored_grassmannian_renames_nodes():
    straight = builtin_map(parse_space('G(4,2)'), parse_space('V'))
    mirrored = builtin_map(parse_space('G(2,4)'), parse_space('V'))
    for node, image in straight.simple_images.items():
        assert mirrored.simple_images[6 - node] == image


def test_corrupted_table_fails():
    source, target = parse_space('G(4,2)'), parse_space('V')
    images = dict(builtin_map(source, target).simple_images)
    images[1] = parse_root('a4', 6)
    report = verify_root_map(RootMap(source, target, images))
    assert not report.valid
    assert not report.checks['cartan']
    assert report.failures


def test_marked_node_must_hit_marked_root():
    source, target = parse_space('G(2,2)'), parse_space('G(2,3)')
    images = {1: parse_root('a2', 4), 2: parse_root('a3', 4), 3: parse_root('a4', 4)}
    report = verify_root_map(RootMap(source, target, images))
    assert not report.checks['marked']
    assert not report.valid


def test_map_must_cover_all_nodes():
    source, target = parse_space('G(2,2)'), parse_space('G(2,3)')
    with pytest.raises(DiagramMismatch):
        verify_root_map(RootMap(source, target, {2: parse_root('a2', 4)}))


def test_map_images_need_target_rank():
    source, target = parse_space('G(2,2)'), parse_space('G(2,3)')
    with pytest.raises(DiagramMismatch):
        verify_root_map(RootMap(source, target, {1: (1, 0), 2: (0, 1), 3: (0, 0)}))


def test_products_have_no_root_maps():
    with pytest.raises(ProductUnsupported):
        search_root_map(parse_space('Q(2)', ambient=False), parse_space('Q(5)'))


def test_unknown_provenance():
    with pytest.raises(ValueError):
        RootMap(parse_space('G(2,2)'), parse_space('G(2,3)'), {}, 'guess')


def test_serialization_keeps_the_map():
    root_map = builtin_map(parse_space('G(3,3)'), parse_space('VI'))
    assert RootMap.from_dict(root_map.as_dict()) == root_map


def test_from_dict_accepts_expressions():
    data = {
        'source': 'G(2,2)',
        'target': 'G(2,3)',
        'assignments': [[1, 'a1'], [2, 'a2'], [3, 'a3']],
    }
    root_map = RootMap.from_dict(data)
    assert root_map.provenance == 'user'
    assert verify_root_map(root_map).valid


def test_identification_map():
    root_map = identification_map(parse_space('Q(6)'), parse_space('GII(5)'))
    assert verify_root_map(root_map).valid
    assert identification_map(parse_space('G(4,2)'), parse_space('V')) is None


def test_no_builtin():
    with pytest.raises(NoBuiltin):
        builtin_map(parse_space('G(3,4)'), parse_space('VI'))


@pytest.mark.parametrize('source, target', [
    ('GII(5)', 'V'),
    ('V', 'VI'),
    ('G(2,3)', 'V'),
    ('Q(3)', 'Q(5)'),
    ('Q(6)', 'Q(8)'),
])
def test_deletion_maps(source, target):
    root_map = deletion_map(parse_space(source), parse_space(target))
    assert root_map.provenance == 'deletion-construction'
    report = verify_root_map(root_map)
    assert report.valid
    assert report.consequences_hold


def test_deletion_map_of_q3_in_q5():
    root_map = deletion_map(parse_space('Q(3)'), parse_space('Q(5)'))
    assert root_map.simple_images[1] == (1, 0, 0)
    assert root_map.simple_images[2] == (0, 1, 1)


def test_not_deletion_type():
    with pytest.raises(NotDeletionType):
        deletion_map(parse_space('G(4,2)'), parse_space('V'))


@pytest.mark.parametrize('source, target', [
    ('Q(4)', 'Q(5)'),
    ('G(2,2)', 'G(2,3)'),
    ('Q(3)', 'GIII(3)'),
    ('GII(5)', 'V'),
])
def test_search_finds_map(source, target):
    root_map = search_root_map(parse_space(source), parse_space(target))
    assert root_map is not None
    assert root_map.provenance == 'search'
    assert verify_root_map(root_map).valid


def test_search_for_lagrangian_in_grassmannian():
    assert search_root_map(parse_space('GIII(3)'), parse_space('G(3,3)')) is None


def test_search_budget():
    with pytest.raises(BudgetExceeded):
        search_root_map(parse_space('G(3,3)'), parse_space('VI'), budget=1)


def test_broken_consequence_invalidates_map():
    report = MapReport(builtin_map(parse_space('G(4,2)'), parse_space('V')))
    report.checks.update(marked=True, roots=True, injective=True, cartan=True)
    report.consequences.update(noncompact=True, tangent=False, normal=True)

    assert report.checks_pass
    assert not report.consequences_hold
    assert not report.valid
    assert report.as_dict()['valid'] is False


def test_map_report_reads_back():
    source, target = parse_space('G(4,2)'), parse_space('V')
    images = dict(builtin_map(source, target).simple_images)
    images[1] = parse_root('a4', 6)
    report = verify_root_map(RootMap(source, target, images))
    restored = MapReport.from_dict(report.as_dict())

    assert restored.root_map == report.root_map
    assert restored.as_dict() == report.as_dict()
    assert not restored.valid
