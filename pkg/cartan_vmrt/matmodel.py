"""
Harish-Chandra matrix models of the classical spaces and the coordinate embeddings between them
"""
import itertools
import logging
from collections import OrderedDict

from sympy import Matrix, Poly, Rational, factor_list, symbols
from typing import Dict, List, Optional, Sequence, Tuple

from cartan_vmrt.chss import MarkedSpace, iso_key
from cartan_vmrt.exceptions import IllegalParams, ShapeMismatch, UnsupportedPair, ZeroMatrix
from cartan_vmrt.vmrt import KernelReport

logger = logging.getLogger(__name__)

SHAPES = ('general', 'symmetric', 'skew')

delta = symbols('delta')


class MatrixPoint:
    """
    A point of a Harish-Chandra chart as a rational matrix
    """

    def __init__(self, shape: str, rows):
        if shape not in SHAPES:
            raise ShapeMismatch("Unknown shape {!r}, expected one of {}".format(shape, ', '.join(SHAPES)))

        self.shape = shape
        self.matrix = Matrix(rows).applyfunc(Rational)

        if shape != 'general' and not self.matrix.is_square:
            raise ShapeMismatch("A {} matrix must be square, not {}x{}".format(shape, *self.matrix.shape))
        if shape == 'symmetric' and self.matrix != self.matrix.T:
            raise ShapeMismatch("Matrix is not symmetric")
        if shape == 'skew' and self.matrix != -self.matrix.T:
            raise ShapeMismatch("Matrix is not skew-symmetric")

    @property
    def rank(self) -> int:
        """
        The exact rank
        """
        return self.matrix.rank()

    @property
    def is_zero(self) -> bool:
        """
        Whether all entries are zero
        """
        return self.matrix.is_zero_matrix

    def as_dict(self) -> OrderedDict:
        """
        Serialize with row-major rational strings
        """
        return OrderedDict([
            ('shape', self.shape),
            ('rows', [[str(self.matrix[i, j]) for j in range(self.matrix.cols)] for i in range(self.matrix.rows)]),
        ])

    @classmethod
    def from_dict(cls, data: dict) -> 'MatrixPoint':
        """
        Read a point back from its serialized form.

        :param data: The dictionary as produced by as_dict
        :return: The point
        """
        return cls(data['shape'], [[Rational(entry) for entry in row] for row in data['rows']])

    def __eq__(self, other):
        return isinstance(other, MatrixPoint) and self.shape == other.shape and self.matrix == other.matrix

    def __repr__(self):
        return 'MatrixPoint({!r}, {})'.format(self.shape, self.matrix.tolist())


def model_shape(space: MarkedSpace) -> Tuple[str, Tuple[int, int]]:
    """
    The matrix shape of the Harish-Chandra chart of a space.

    :param space: A Grassmannian, Lagrangian or orthogonal Grassmannian
    :return: The shape tag and the matrix size
    """
    if space.family == 'G':
        return 'general', space.params
    if space.family == 'GIII':
        return 'symmetric', (space.params[0], space.params[0])
    if space.family == 'GII':
        return 'skew', (space.params[0], space.params[0])
    raise ShapeMismatch("{} has no matrix model".format(space))


def vmrt_rank_membership(space: MarkedSpace, point: MatrixPoint) -> bool:
    """
    Whether a tangent vector lies on the VMRT cone: rank 1 for general and symmetric matrices, rank 2 for skew ones.

    :param space: The space
    :param point: The tangent vector as a matrix
    :return: Whether it is on the cone
    """
    shape, size = model_shape(space)
    if point.shape != shape or tuple(point.matrix.shape) != tuple(size):
        raise ShapeMismatch("{} needs a {} {}x{} matrix, not a {} {}x{} one".format(
            space, shape, size[0], size[1], point.shape, *point.matrix.shape))
    if point.is_zero:
        raise ZeroMatrix("The zero matrix is not on any VMRT cone")

    return point.rank == (2 if shape == 'skew' else 1)


def embed_sym_into_grass(n: int, r: int, s: int, point: MatrixPoint) -> MatrixPoint:
    """
    Put a symmetric n x n matrix in the upper left corner of an r x s matrix.

    :param n: Size of the symmetric matrix
    :param r: Rows of the result
    :param s: Columns of the result
    :param point: The symmetric matrix
    :return: The general matrix
    """
    if not 3 <= n <= min(r, s):
        raise IllegalParams("Need 3 <= n <= min(r, s), got n={}, r={}, s={}".format(n, r, s))
    if point.shape != 'symmetric' or point.matrix.shape != (n, n):
        raise ShapeMismatch("Need a symmetric {0}x{0} matrix".format(n))

    out = Matrix.zeros(r, s)
    out[:n, :n] = point.matrix
    return MatrixPoint('general', out)


def embed_grass_into_skew(r: int, s: int, n: int, point: MatrixPoint) -> MatrixPoint:
    """
    Put an r x s matrix in the upper right block of a skew n x n matrix, at rows 1..r and columns r+1..r+s.

    :param r: Rows of the general matrix
    :param s: Columns of the general matrix
    :param n: Size of the result
    :param point: The general matrix
    :return: The skew-symmetric matrix
    """
    if r < 3 or s < 3 or r + s > n:
        raise IllegalParams("Need r, s >= 3 and r + s <= n, got r={}, s={}, n={}".format(r, s, n))
    if point.shape != 'general' or point.matrix.shape != (r, s):
        raise ShapeMismatch("Need a general {}x{} matrix".format(r, s))

    out = Matrix.zeros(n, n)
    for i in range(r):
        for j in range(s):
            out[i, j + r] = point.matrix[i, j]
            out[j + r, i] = -point.matrix[i, j]
    return MatrixPoint('skew', out)


class BilinearPattern:
    """
    The second fundamental form of a model on basis vectors.

    Entries map an ordered pair of ambient labels to a sign and a normal label and are stored for both orders.
    Sub basis vectors are combinations of ambient labels.
    """

    def __init__(self, model: str, ambient: List[str], sub_basis: List[Dict[str, int]],
                 entries: Dict[Tuple[str, str], Tuple[int, str]], form: str = None):
        self.model = model
        self.ambient = ambient
        self.sub_basis = sub_basis
        self.entries = entries
        self.form = form

    @property
    def normals(self) -> List[str]:
        """
        All normal labels that occur
        """
        return sorted({label for sign, label in self.entries.values()})

    def value(self, first: str, second: str) -> Optional[Tuple[int, str]]:
        """
        The form on two ambient basis vectors.

        :param first: Ambient label
        :param second: Ambient label
        :return: Sign and normal label, or None for zero
        """
        return self.entries.get((first, second))

    def as_dict(self) -> OrderedDict:
        """
        Serialize for reports
        """
        entries = []
        for (first, second), (sign, label) in sorted(self.entries.items()):
            if self.ambient.index(first) <= self.ambient.index(second):
                entries.append([first, second, '{}{}'.format('-' if sign < 0 else '', label)])
        return OrderedDict([
            ('model', self.model),
            ('ambient', list(self.ambient)),
            ('sub_basis', [_format_vector(vector) for vector in self.sub_basis]),
            ('form', self.form),
            ('entries', entries),
        ])


def _format_vector(vector: Dict[str, object]) -> str:
    terms = []
    for label, coeff in vector.items():
        if coeff == 0:
            continue
        if coeff == 1:
            terms.append('+{}'.format(label))
        elif coeff == -1:
            terms.append('-{}'.format(label))
        else:
            terms.append('{}{}*{}'.format('+' if coeff > 0 else '-', abs(coeff), label))
    out = ''.join(terms) or '0'
    return out[1:] if out.startswith('+') else out


def _set_symmetric(entries, first, second, value):
    entries[(first, second)] = value
    entries[(second, first)] = value


def segre_pattern(n: int, r: int, s: int) -> BilinearPattern:
    """
    The form of G(r,s) at dz_00 with the tangent directions of GIII(n) embedded as the diagonal.

    :param n: Size of the symmetric matrices
    :param r: Rows
    :param s: Columns
    :return: The pattern
    """
    rows = ['dz{}0'.format(i) for i in range(1, r)]
    cols = ['dz0{}'.format(j) for j in range(1, s)]
    entries = {}
    for i, j in itertools.product(range(1, r), range(1, s)):
        _set_symmetric(entries, rows[i - 1], cols[j - 1], (1, 'dz{}{}'.format(i, j)))

    sub = [OrderedDict([('dz0{}'.format(k), 1), ('dz{}0'.format(k), 1)]) for k in range(1, n)]
    return BilinearPattern('segre', rows + cols, sub, entries)


def plucker_pattern(r: int, s: int, n: int) -> BilinearPattern:
    """
    The form of GII(n) at e1 ^ e2 with the tangent directions of G(r,s) embedded block-wise.

    :param r: Rows of the Grassmannian model
    :param s: Columns of the Grassmannian model
    :param n: Size of the skew matrices
    :return: The pattern
    """
    first = ['E1^e{}'.format(i) for i in range(1, n - 1)]
    second = ['E2^e{}'.format(j) for j in range(1, n - 1)]
    entries = {}
    for i, j in itertools.product(range(1, n - 1), repeat=2):
        if i == j:
            continue
        label = 'e{}^e{}'.format(min(i, j), max(i, j))
        _set_symmetric(entries, first[i - 1], second[j - 1], (-1 if i < j else 1, label))

    sub = [OrderedDict([('E1^e{}'.format(l), 1)]) for l in range(r, r + s - 1)]
    sub += [OrderedDict([('E2^e{}'.format(k), 1)]) for k in range(1, r)]
    return BilinearPattern('plucker', first + second, sub, entries)


def quadric_pattern(a: int, b: int) -> BilinearPattern:
    """
    The form of Q(b) with a single normal direction given by the sum of squares, with Q(a) along the first
    directions.

    :param a: Dimension of the smaller quadric
    :param b: Dimension of the bigger quadric
    :return: The pattern
    """
    ambient = ['h{}'.format(i) for i in range(1, b - 1)]
    entries = {(label, label): (1, 'nu') for label in ambient}
    sub = [OrderedDict([(label, 1)]) for label in ambient[:a - 2]]
    return BilinearPattern('quadric', ambient, sub, entries, form='q(x) = x1^2 + ... + x{}^2'.format(b - 2))


def model_sff_pattern(source: MarkedSpace, target: MarkedSpace) -> BilinearPattern:
    """
    The coordinate pattern for a pair with a matrix model.

    :param source: The smaller space
    :param target: The bigger space
    :return: The pattern
    """
    if source.is_quadric and target.is_quadric and not target.is_product:
        a, b = source.dimension, target.dimension
        if a < b:
            return quadric_pattern(a, b)

    if source.family == 'GIII' and target.family == 'G':
        n = source.params[0]
        r, s = target.params
        if 2 <= n <= min(r, s):
            return segre_pattern(n, r, s)

    source_key = iso_key(source)
    if source_key[0] == 'G' and target.family == 'GII':
        r, s = source_key[1:]
        n = target.params[0]
        if r >= 2 and r + s <= n:
            return plucker_pattern(r, s, n)

    raise UnsupportedPair("({}, {}) has no coordinate model".format(source, target))


def kernel_matrix_model(source: MarkedSpace, target: MarkedSpace) -> KernelReport:
    """
    The exact null space of v -> (sff(v, w)) for w in the sub basis, over all ambient directions.

    :param source: The smaller space
    :param target: The bigger space
    :return: The report
    """
    pattern = model_sff_pattern(source, target)
    columns = {label: index for index, label in enumerate(pattern.ambient)}

    row_keys = []
    for w_index in range(len(pattern.sub_basis)):
        for normal in pattern.normals:
            row_keys.append((w_index, normal))
    row_index = {key: index for index, key in enumerate(row_keys)}

    matrix = Matrix.zeros(max(len(row_keys), 1), len(pattern.ambient))
    for w_index, w in enumerate(pattern.sub_basis):
        for w_label, w_coeff in w.items():
            for v_label in pattern.ambient:
                value = pattern.value(v_label, w_label)
                if value is None:
                    continue
                sign, normal = value
                matrix[row_index[(w_index, normal)], columns[v_label]] += sign * w_coeff

    kernel = matrix.nullspace()
    basis = [_format_vector(OrderedDict(zip(pattern.ambient, list(vector)))) for vector in kernel]

    witnesses = []
    for v_label in pattern.ambient:
        for w_index, w in enumerate(pattern.sub_basis):
            products = OrderedDict()
            for w_label, w_coeff in w.items():
                value = pattern.value(v_label, w_label)
                if value is not None:
                    sign, normal = value
                    products[normal] = products.get(normal, 0) + sign * w_coeff
            products = OrderedDict((label, c) for label, c in products.items() if c)
            if products:
                witnesses.append(OrderedDict([
                    ('u', v_label),
                    ('w', _format_vector(w)),
                    ('target', _format_vector(products)),
                ]))
                break

    details = OrderedDict([
        ('model', pattern.model),
        ('ambient_dimension', len(pattern.ambient)),
        ('sub_dimension', len(pattern.sub_basis)),
    ])
    if pattern.form:
        details['form'] = pattern.form

    logger.info("{} model kernel of ({}, {}) has dimension {}".format(pattern.model, source, target, len(kernel)))
    return KernelReport(source, target, 'matrix-model:{}'.format(pattern.model), basis, witnesses, details)


class ChernPoly:
    """
    A total Chern class 1 + c1 d + ... + c4 d^4 with d the hyperplane class
    """

    def __init__(self, coeffs: Sequence[int]):
        coeffs = [int(c) for c in coeffs]
        if not coeffs or coeffs[0] != 1:
            raise IllegalParams("A total Chern class starts with 1, got {}".format(coeffs))
        if len(coeffs) > 5:
            raise IllegalParams("Only classes modulo d^5 are supported, got {} coefficients".format(len(coeffs)))

        self.coeffs = tuple(coeffs + [0] * (5 - len(coeffs)))

    def as_poly(self) -> Poly:
        """
        As a polynomial in delta
        """
        return Poly(list(reversed(self.coeffs)), delta)

    def __str__(self):
        terms = []
        for power, c in enumerate(self.coeffs):
            if c:
                base = '' if power == 0 else ('d' if power == 1 else 'd^{}'.format(power))
                if not base:
                    terms.append(str(c))
                else:
                    terms.append('{}{}'.format('' if c == 1 else ('-' if c == -1 else c), base))
        return ' + '.join(terms).replace('+ -', '- ')


def twisted_tangent_class(n: int) -> ChernPoly:
    """
    The total Chern class of T(-1) on P^n modulo d^5, which is 1 / (1 - d) cut off after d^n.

    :param n: The dimension of the projective space
    :return: The class
    """
    return ChernPoly([1] * (min(n, 4) + 1))


def _normalized(poly: Poly) -> Tuple[int, ...]:
    coeffs = list(reversed(poly.all_coeffs()))
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(int(c) for c in coeffs)


def chern_factor_search(target: ChernPoly, split: Tuple[int, int]) \
        -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Look for integer polynomials 1 + a1 d + ... + a_d1 d^d1 and 1 + b1 d + ... + b_d2 d^d2 whose product is the target.
    With d1 + d2 <= 4 nothing gets cut off modulo d^5, so the factors are groupings of the irreducible factors of the
    target over the integers.

    :param target: The class to factor
    :param split: The degree bounds (d1, d2)
    :return: The coefficients of both factors, constant term first, or None
    """
    d1, d2 = split
    if d1 < 0 or d2 < 0 or d1 + d2 > 4:
        raise IllegalParams("Need nonnegative degrees with d1 + d2 <= 4, got {}".format(split))

    poly = target.as_poly()
    if poly.degree() > d1 + d2:
        return None

    content, factors = factor_list(poly.as_expr(), delta)
    pieces = []
    for factor, power in factors:
        pieces.extend([Poly(factor, delta)] * power)

    found = []
    for size in range(len(pieces) + 1):
        for chosen in itertools.combinations(range(len(pieces)), size):
            first = Poly(1, delta)
            second = Poly(1, delta)
            for index, piece in enumerate(pieces):
                if index in chosen:
                    first = first * piece
                else:
                    second = second * piece
            if first.degree() <= d1 and second.degree() <= d2:
                found.append((_normalized(first), _normalized(second)))

    if not found:
        logger.debug("{} has no factorization with degrees {}".format(target, split))
        return None

    first, second = min(found)
    return first + (0,) * (d1 + 1 - len(first)), second + (0,) * (d2 + 1 - len(second))
