"""
Tests for sub-diagram and deletion matching
"""
import pytest

from cartan_vmrt.chss import iso_key, parse_space
from cartan_vmrt.matching import chains_from_marked, deletion_match, embeddings, identify, marked_graph, \
    subdiagram_embedding


@pytest.mark.parametrize('source, target', [
    ('G(2,2)', 'G(2,3)'),
    ('Q(6)', 'GII(5)'),
    ('Q(8)', 'V'),
    ('GIII(3)', 'GIII(4)'),
    ('Q(3)', 'GIII(3)'),
])
def test_subdiagram_found(source, target):
    source_space, target_space = parse_space(source), parse_space(target)
    node_map = subdiagram_embedding(source_space, target_space)
    assert node_map is not None
    assert node_map[source_space.marked] == target_space.marked
    assert len(set(node_map.values())) == source_space.rank


@pytest.mark.parametrize('source, target', [
    ('G(3,3)', 'VI'),
    ('G(4,2)', 'V'),
    ('GIII(3)', 'G(3,3)'),
    ('Q(5)', 'Q(7)'),
    ('VI', 'V'),
    ('V', 'VI'),
])
def test_subdiagram_missing(source, target):
    assert subdiagram_embedding(parse_space(source), parse_space(target)) is None


def test_subdiagram_of_product():
    assert subdiagram_embedding(parse_space('Q(2)', ambient=False), parse_space('Q(5)')) is None


def test_embeddings_are_sorted():
    found = embeddings(marked_graph(parse_space('G(2,2)')), marked_graph(parse_space('G(2,3)')))
    assert found
    assert found == sorted(found, key=lambda m: sorted(m.items()))
    assert all(mapping[2] == 2 for mapping in found)


def test_chains_of_vi():
    chains = list(chains_from_marked(parse_space('VI')))
    assert chains[0] == ([7], 6)
    assert chains[1] == ([7, 6], 5)


def test_no_chains_over_double_bond():
    assert list(chains_from_marked(parse_space('GIII(3)'))) == []


def test_identify():
    assert identify(marked_graph(parse_space('V'))) == parse_space('V')
    assert iso_key(identify(marked_graph(parse_space('Q(7)')))) == ('Q', 7)


@pytest.mark.parametrize('source, target, chain, intermediate', [
    ('GII(5)', 'V', [6], ('GII', 5)),
    ('V', 'VI', [7], ('V',)),
    ('Q(3)', 'Q(5)', [1], ('Q', 3)),
    ('Q(5)', 'Q(7)', [1], ('Q', 5)),
    ('G(2,3)', 'V', [6, 5], ('G', 2, 3)),
])
def test_deletion_match(source, target, chain, intermediate):
    match = deletion_match(parse_space(source), parse_space(target))
    assert match is not None
    assert match.chain == chain
    assert iso_key(match.intermediate) == intermediate
    assert match.as_dict()['chain'] == chain


@pytest.mark.parametrize('source, target', [
    ('G(4,2)', 'V'),
    ('G(3,3)', 'VI'),
    ('GIII(3)', 'G(3,3)'),
])
def test_deletion_missing(source, target):
    assert deletion_match(parse_space(source), parse_space(target)) is None
