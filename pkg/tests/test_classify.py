"""
Tests for the classification of pairs and the atlas
"""
import itertools

import pytest

from cartan_vmrt.chss import iso_key, parse_space
from cartan_vmrt.classify import NON_RIGID, OPEN_ALGEBRAIC, RIGID, Atlas, PairRecord, classify_all, classify_pair, \
    compare_with_expected, degenerate_linear_exceptions, direct_record, expected_sources, group_by_category, \
    quadric_difference, rigidity_of, special_kind
from cartan_vmrt.exceptions import LinearSource, ProductUnsupported, UsageError
from cartan_vmrt.vmrt import DEGENERATE, NONDEGENERATE


def space(name):
    return parse_space(name, ambient=False)


SMALL_UNIVERSE = ['Q(2)', 'Q(3)', 'G(2,2)', 'Q(5)', 'Q(6)', 'G(2,3)', 'Q(8)', 'GII(5)', 'V']


@pytest.fixture(scope='module')
def small_atlas():
    return Atlas([space(name) for name in SMALL_UNIVERSE])


@pytest.mark.parametrize('source, target, kind', [
    ('G(4,2)', 'V', 'builtin'),
    ('G(2,4)', 'V', 'builtin'),
    ('G(3,3)', 'VI', 'builtin'),
    ('GII(6)', 'VI', 'builtin'),
    ('GIII(3)', 'G(3,3)', 'segre'),
    ('GIII(3)', 'G(3,5)', 'segre'),
    ('GIII(2)', 'G(3,3)', None),
    ('GIII(4)', 'G(3,5)', None),
    ('G(3,3)', 'GII(6)', 'plucker'),
    ('G(3,4)', 'GII(8)', 'plucker'),
    ('G(2,3)', 'GII(6)', None),
    ('G(3,3)', 'GII(5)', None),
    ('Q(5)', 'Q(7)', None),
])
def test_special_kind(source, target, kind):
    assert special_kind(space(source), space(target)) == kind


def test_quadric_difference():
    assert quadric_difference(space('Q(2)'), space('Q(5)')) == 3
    assert quadric_difference(space('G(2,2)'), space('GII(4)')) == 2
    assert quadric_difference(space('G(2,3)'), space('Q(7)')) is None


@pytest.mark.parametrize('source, target, categories', [
    ('Q(2)', 'Q(5)', ['quadric-odd']),
    ('Q(2)', 'Q(4)', ['deletion']),
    ('Q(3)', 'Q(5)', ['deletion']),
    ('Q(3)', 'Q(7)', ['deletion']),
    ('Q(5)', 'Q(6)', ['quadric-odd']),
    ('Q(8)', 'V', ['subdiagram']),
    ('GII(5)', 'V', ['deletion']),
    ('G(4,2)', 'V', ['special']),
    ('GIII(3)', 'G(3,3)', ['special']),
    ('G(3,4)', 'VI', []),
])
def test_direct_categories(source, target, categories):
    assert direct_record(space(source), space(target)).categories == categories


def test_even_quadrics_without_chain_use_the_rule():
    record = direct_record(space('Q(2)'), space('Q(6)'))
    assert record.categories == ['deletion']
    assert record.evidence['deletion'] == {'rule': 'quadrics of even difference', 'difference': 4}


@pytest.mark.parametrize('source, target, chain', [
    ('Q(3)', 'Q(5)', [1]),
    ('Q(3)', 'Q(7)', [1, 2]),
])
def test_even_quadrics_with_chain(source, target, chain):
    evidence = direct_record(space(source), space(target)).evidence['deletion']
    assert 'rule' not in evidence
    assert evidence['chain'] == chain


def test_unknown_category():
    record = PairRecord(space('Q(3)'), space('Q(5)'))
    with pytest.raises(ValueError):
        record.add('nearby', None)


def test_categories_stay_ordered():
    record = PairRecord(space('Q(3)'), space('V'))
    record.add('transitive', {'chain': []})
    record.add('deletion', {})
    assert record.categories == ['deletion', 'transitive']
    assert record.direct


def test_rigidity_rules():
    record = PairRecord(space('Q(8)'), space('V'))
    assert rigidity_of(record) is None
    record.add('subdiagram', {})
    record.degeneracy = DEGENERATE
    assert rigidity_of(record) == RIGID

    record = PairRecord(space('G(4,2)'), space('V'))
    record.add('special', {})
    record.degeneracy = NONDEGENERATE
    assert rigidity_of(record) == OPEN_ALGEBRAIC

    record = PairRecord(space('Q(2)'), space('Q(5)'))
    record.add('quadric-odd', {})
    assert rigidity_of(record) == NON_RIGID


def test_classify_special_pair():
    record = classify_pair(space('G(4,2)'), space('V'))
    assert record.categories == ['special']
    assert record.degeneracy == NONDEGENERATE
    assert record.rigidity == OPEN_ALGEBRAIC
    assert record.kernel.method == 'root-level'


def test_classify_subdiagram_pair():
    record = classify_pair(space('Q(8)'), space('V'))
    assert 'subdiagram' in record.categories
    assert record.rigidity == RIGID


def test_classify_chain():
    record = classify_pair(space('Q(3)'), space('V'))
    assert 'transitive' in record.categories
    assert record.degeneracy == DEGENERATE
    assert record.rigidity == NON_RIGID
    chain = record.evidence['transitive']['chain']
    assert chain[0] == 'Q(3)'
    assert chain[-1] == 'V'
    assert len(chain) >= 3


def test_classify_odd_quadrics():
    record = classify_pair(space('Q(2)'), space('Q(5)'))
    assert 'quadric-odd' in record.categories
    assert 'transitive' in record.categories
    assert record.rigidity == NON_RIGID


def test_lagrangian_does_not_chain_through_grassmannian():
    record = classify_pair(space('GIII(3)'), space('GII(6)'))
    assert record.categories == []
    assert record.rigidity is None


def test_classify_linear_source():
    with pytest.raises(LinearSource):
        classify_pair(space('G(1,3)'), space('V'))


def test_classify_product_target():
    with pytest.raises(ProductUnsupported):
        classify_pair(space('Q(3)'), space('Q(2)'))


def test_classify_wrong_order():
    record = classify_pair(space('V'), space('GII(5)'))
    assert not record.admissible
    assert record.notes


def test_record_serialization():
    record = classify_pair(space('Q(3)'), space('Q(5)'))
    again = PairRecord.from_dict(record.as_dict())
    assert again.categories == record.categories
    assert again.degeneracy == record.degeneracy
    assert again.rigidity == record.rigidity
    assert again.kernel.kernel_basis == record.kernel.kernel_basis


def test_atlas_is_transitive(small_atlas):
    for first, second, third in itertools.permutations(small_atlas.spaces, 3):
        first_pair = small_atlas.records.get((first, second))
        second_pair = small_atlas.records.get((second, third))
        if first_pair and first_pair.admissible and second_pair and second_pair.admissible:
            assert small_atlas.record(first, third).admissible, (first, second, third)


def test_atlas_chains_inherit_degeneracy(small_atlas):
    assert small_atlas.discrepancies == []
    for record in small_atlas.admissible():
        if 'transitive' not in record.categories:
            continue
        chain = record.evidence['transitive']['chain']
        links = [small_atlas.record(space(a), space(b)) for a, b in zip(chain, chain[1:])]
        if any(link.degeneracy == DEGENERATE for link in links):
            assert record.degeneracy == DEGENERATE


def test_atlas_sources(small_atlas):
    names = {record.source.name for record in small_atlas.sources(space('V'))}
    assert names == {'Q(2)', 'Q(3)', 'G(2,2)', 'Q(5)', 'Q(6)', 'G(2,3)', 'Q(8)', 'GII(5)'}


def test_atlas_has_no_product_targets(small_atlas):
    assert all(not record.target.is_product for record in small_atlas.records.values())


def test_atlas_with_workers():
    names = ['Q(2)', 'Q(3)', 'G(2,2)', 'Q(5)', 'Q(6)', 'Q(7)']
    serial = Atlas([space(name) for name in names])
    threaded = Atlas([space(name) for name in names], workers=3)
    assert [record.as_dict() for record in serial.records.values()] == \
        [record.as_dict() for record in threaded.records.values()]


def test_quadrics_match_expected_tables():
    atlas = Atlas([space(name) for name in ['Q(2)', 'Q(3)', 'G(2,2)', 'Q(5)', 'Q(6)', 'Q(7)']])
    problems = compare_with_expected(atlas)
    assert all(not messages for messages in problems.values()), problems


def test_expected_sources_of_quadric():
    expected = expected_sources(space('Q(5)'))
    assert list(expected) == [iso_key(space('Q(2)')), iso_key(space('Q(3)')), iso_key(space('G(2,2)'))]
    assert expected[iso_key(space('Q(3)'))]['category'] == 'deletion'
    assert expected[iso_key(space('Q(2)'))]['category'] == 'quadric-odd'


def test_expected_sources_of_v():
    expected = expected_sources(space('V'))
    assert len(expected) == 10
    assert expected[iso_key(space('G(4,2)'))]['rigidity'] == OPEN_ALGEBRAIC


def test_grassmannians_are_not_tabulated():
    assert expected_sources(space('G(3,3)')) is None


def test_classify_all_needs_rank():
    with pytest.raises(UsageError):
        classify_all(6)


def test_degenerate_linear_exceptions():
    exceptions = degenerate_linear_exceptions()
    assert [item['target'] for item in exceptions] == ['Q(2n-1)', 'GIII(n)', 'Q(m)']
    assert all(item['degeneracy'] == DEGENERATE for item in exceptions)


def test_group_by_category(small_atlas):
    groups = group_by_category(small_atlas.sources(space('V')))
    assert list(groups)[0] == 'sub-diagram type'
    assert any(line.startswith('(Q(8), V)') for line in groups['sub-diagram type'])
