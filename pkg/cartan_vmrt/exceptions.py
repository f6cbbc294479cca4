"""
Exceptions raised by the computations in this package
"""


class CartanVmrtError(Exception):
    """
    Base class for all errors in this package
    """


class ImproperlyConfigured(CartanVmrtError):
    """
    A setting from the environment has an invalid value
    """


class UsageError(CartanVmrtError):
    """
    Arguments that don't fit the command line grammar
    """


class NegativeResult(CartanVmrtError):
    """
    A computation ran to completion and answered no, like a map that fails verification or a pair without kernel
    """


class IllegalRank(CartanVmrtError):
    """
    A Dynkin diagram was requested outside the legal rank range of its family
    """


class IllegalParams(CartanVmrtError):
    """
    Parameters outside the legal range of a catalog space or matrix embedding
    """


class NotInCatalog(CartanVmrtError):
    """
    A space name that doesn't denote a catalog space
    """


class ProductUnsupported(CartanVmrtError):
    """
    A product of projective spaces was given where a marked diagram is needed
    """


class LinearSpace(CartanVmrtError):
    """
    The space is a projective space, which has no non-linear VMRT
    """


class LinearSource(CartanVmrtError):
    """
    Pairs with a linear source are described by maximal linear subspace data instead
    """


class NotNoncompact(CartanVmrtError):
    """
    The root is not a positive noncompact root of the space
    """


class NotInH(CartanVmrtError):
    """
    The root is neither the marked root nor a tangent root of the space
    """


class DiagramMismatch(CartanVmrtError):
    """
    Root vectors whose length doesn't match the rank of their diagram
    """


class InvalidMap(NegativeResult):
    """
    A root map failed verification
    """


class NoBuiltin(NegativeResult):
    """
    No tabulated root map exists for the pair
    """


class NotDeletionType(NegativeResult):
    """
    The pair is not obtained by deleting a chain from the target diagram
    """


class BudgetExceeded(NegativeResult):
    """
    The root map search ran out of node expansions before exhausting the search space
    """


class NotDegenerate(NegativeResult):
    """
    The second fundamental form has no kernel beyond the marked direction
    """


class ZeroMatrix(CartanVmrtError):
    """
    The zero matrix is not a point of any VMRT cone
    """


class ShapeMismatch(CartanVmrtError):
    """
    The matrix shape doesn't fit the Harish-Chandra model of the space
    """


class UnsupportedPair(NegativeResult):
    """
    The pair has no coordinate model
    """
