"""
Tests for the matrix models, their embeddings and the Chern class search
"""
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from cartan_vmrt.chss import parse_space
from cartan_vmrt.exceptions import IllegalParams, ShapeMismatch, UnsupportedPair, ZeroMatrix
from cartan_vmrt.matmodel import ChernPoly, MatrixPoint, chern_factor_search, embed_grass_into_skew, \
    embed_sym_into_grass, kernel_matrix_model, model_sff_pattern, model_shape, plucker_pattern, segre_pattern, \
    twisted_tangent_class, vmrt_rank_membership
from cartan_vmrt.vmrt import DEGENERATE, NONDEGENERATE

entries = st.integers(min_value=-5, max_value=5)


def test_point_shapes():
    with pytest.raises(ShapeMismatch):
        MatrixPoint('symmetric', [[1, 2], [3, 4]])
    with pytest.raises(ShapeMismatch):
        MatrixPoint('skew', [[0, 1], [1, 0]])
    with pytest.raises(ShapeMismatch):
        MatrixPoint('symmetric', [[1, 2, 3], [2, 4, 6]])
    with pytest.raises(ShapeMismatch):
        MatrixPoint('diagonal', [[1]])


def test_point_serialization():
    point = MatrixPoint('general', [['1/2', 0], [3, '-2/3']])
    assert point.as_dict()['rows'] == [['1/2', '0'], ['3', '-2/3']]
    assert MatrixPoint.from_dict(point.as_dict()) == point


@pytest.mark.parametrize('name, shape, size', [
    ('G(2,3)', 'general', (2, 3)),
    ('GIII(3)', 'symmetric', (3, 3)),
    ('GII(6)', 'skew', (6, 6)),
])
def test_model_shape(name, shape, size):
    assert model_shape(parse_space(name)) == (shape, size)


def test_exceptional_spaces_have_no_model():
    with pytest.raises(ShapeMismatch):
        model_shape(parse_space('V'))


def test_rank_membership():
    lagrangian = parse_space('GIII(3)')
    assert vmrt_rank_membership(lagrangian, MatrixPoint('symmetric', [[1, 2, 0], [2, 4, 0], [0, 0, 0]]))
    assert not vmrt_rank_membership(lagrangian, MatrixPoint('symmetric', [[1, 0, 0], [0, 1, 0], [0, 0, 0]]))

    orthogonal = parse_space('GII(4)')
    skew = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert vmrt_rank_membership(orthogonal, MatrixPoint('skew', skew))


def test_rank_membership_errors():
    space = parse_space('GIII(3)')
    with pytest.raises(ZeroMatrix):
        vmrt_rank_membership(space, MatrixPoint('symmetric', [[0] * 3] * 3))
    with pytest.raises(ShapeMismatch):
        vmrt_rank_membership(space, MatrixPoint('symmetric', [[1, 0], [0, 0]]))
    with pytest.raises(ShapeMismatch):
        vmrt_rank_membership(space, MatrixPoint('general', [[1, 0, 0]] * 3))


def test_embedding_bounds():
    point = MatrixPoint('symmetric', [[1, 0], [0, 0]])
    with pytest.raises(IllegalParams):
        embed_sym_into_grass(2, 3, 3, point)
    with pytest.raises(IllegalParams):
        embed_sym_into_grass(3, 2, 4, MatrixPoint('symmetric', [[1, 0, 0], [0, 0, 0], [0, 0, 0]]))
    with pytest.raises(IllegalParams):
        embed_grass_into_skew(3, 3, 5, MatrixPoint('general', [[1, 0, 0]] * 3))
    with pytest.raises(ShapeMismatch):
        embed_grass_into_skew(3, 3, 6, MatrixPoint('general', [[1, 0]] * 3))


@settings(max_examples=50, deadline=None)
@given(vector=st.lists(entries, min_size=3, max_size=3).filter(any))
def test_lagrangian_cone_goes_to_grassmannian_cone(vector):
    v = Matrix(vector)
    point = MatrixPoint('symmetric', v * v.T)
    assert vmrt_rank_membership(parse_space('GIII(3)'), point)

    image = embed_sym_into_grass(3, 3, 4, point)
    assert image.matrix[:3, :3] == point.matrix
    assert vmrt_rank_membership(parse_space('G(3,4)'), image)


@settings(max_examples=50, deadline=None)
@given(rows=st.lists(entries, min_size=3, max_size=3).filter(any),
       cols=st.lists(entries, min_size=3, max_size=3).filter(any))
def test_grassmannian_cone_goes_to_orthogonal_cone(rows, cols):
    point = MatrixPoint('general', Matrix(rows) * Matrix(cols).T)
    assert vmrt_rank_membership(parse_space('G(3,3)'), point)

    image = embed_grass_into_skew(3, 3, 6, point)
    assert image.matrix == -image.matrix.T
    assert image.rank == 2 * point.rank
    assert vmrt_rank_membership(parse_space('GII(6)'), image)


def test_segre_pattern():
    pattern = segre_pattern(3, 3, 3)
    assert pattern.ambient == ['dz10', 'dz20', 'dz01', 'dz02']
    assert pattern.value('dz10', 'dz01') == (1, 'dz11')
    assert pattern.value('dz01', 'dz10') == (1, 'dz11')
    assert pattern.value('dz10', 'dz20') is None
    assert len(pattern.sub_basis) == 2


def test_plucker_pattern_is_antisymmetric_in_sign():
    pattern = plucker_pattern(3, 3, 6)
    assert pattern.value('E1^e1', 'E2^e2') == (-1, 'e1^e2')
    assert pattern.value('E1^e2', 'E2^e1') == (1, 'e1^e2')
    assert pattern.value('E1^e1', 'E2^e1') is None
    assert len(pattern.sub_basis) == 4


@pytest.mark.parametrize('source, target', [
    ('GIII(3)', 'G(3,3)'),
    ('GIII(3)', 'G(3,4)'),
    ('G(3,3)', 'GII(6)'),
    ('G(3,3)', 'GII(7)'),
])
def test_classical_special_pairs_are_nondegenerate(source, target):
    report = kernel_matrix_model(parse_space(source), parse_space(target))
    assert report.verdict == NONDEGENERATE
    assert report.method.startswith('matrix-model:')


@pytest.mark.parametrize('a, b', [(2, 3), (3, 5), (4, 5), (5, 8), (2, 12), (11, 12)])
def test_quadric_kernels(a, b):
    source = parse_space('Q({})'.format(a), ambient=False)
    report = kernel_matrix_model(source, parse_space('Q({})'.format(b)))
    assert report.verdict == DEGENERATE
    assert len(report.kernel_basis) == b - a
    assert report.details['form'] == 'q(x) = x1^2 + ... + x{}^2'.format(b - 2)


def test_grassmannian_as_quadric():
    report = kernel_matrix_model(parse_space('G(2,2)'), parse_space('Q(6)'))
    assert len(report.kernel_basis) == 2


def test_unsupported_model():
    with pytest.raises(UnsupportedPair):
        model_sff_pattern(parse_space('G(2,3)'), parse_space('V'))


def test_twisted_tangent_class():
    assert twisted_tangent_class(4).coeffs == (1, 1, 1, 1, 1)
    assert twisted_tangent_class(7).coeffs == (1, 1, 1, 1, 1)
    assert twisted_tangent_class(2).coeffs == (1, 1, 1, 0, 0)
    assert str(twisted_tangent_class(2)) == '1 + d + d^2'


@pytest.mark.parametrize('target, split, factors', [
    ((1, 1, 1, 1, 1), (2, 2), None),
    ((1, 1, 1, 1, 1), (1, 3), None),
    ((1, 2, 1, 0, 0), (1, 1), ((1, 1), (1, 1))),
    ((1, 2, 1, 0, 0), (2, 0), ((1, 2, 1), (1,))),
    ((1, 3, 3, 1, 0), (1, 1), None),
])
def test_chern_factor_search(target, split, factors):
    assert chern_factor_search(ChernPoly(target), split) == factors


@pytest.mark.parametrize('coeffs', [[2, 1], [], [1, 0, 0, 0, 0, 1]])
def test_chern_poly_errors(coeffs):
    with pytest.raises(IllegalParams):
        ChernPoly(coeffs)


def test_chern_split_errors():
    with pytest.raises(IllegalParams):
        chern_factor_search(twisted_tangent_class(4), (3, 2))
    with pytest.raises(IllegalParams):
        chern_factor_search(twisted_tangent_class(4), (-1, 2))
