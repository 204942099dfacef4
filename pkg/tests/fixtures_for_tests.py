"""Library-level fixture objects shared by the test modules (the CLI has
its own serialized copies; these avoid going through config parsing)."""

from thl.algebra import Algebra, AlgebraMap, FiniteGroupAction
from thl.sparse import QMatrix


def ground_field_algebra():
    return Algebra(1, ["1"], {0: 1}, [[{0: 1}]])


def dual_numbers_algebra():
    return Algebra(2, ["1", "x"], {0: 1}, [[{0: 1}, {1: 1}], [{1: 1}, {}]])


def trunc_cubic_algebra():
    return Algebra(
        3,
        ["1", "x", "x2"],
        {0: 1},
        [
            [{0: 1}, {1: 1}, {2: 1}],
            [{1: 1}, {2: 1}, {}],
            [{2: 1}, {}, {}],
        ],
    )


def triple_lines_algebra():
    """Q^3 in the basis (1, f2, f3) with f2, f3 the point idempotents."""
    return Algebra(
        3,
        ["1", "f2", "f3"],
        {0: 1},
        [
            [{0: 1}, {1: 1}, {2: 1}],
            [{1: 1}, {1: 1}, {}],
            [{2: 1}, {}, {2: 1}],
        ],
    )


def sign_twist(algebra):
    """x -> -x on the truncated polynomial algebras."""
    if algebra.dim == 2:
        return AlgebraMap(QMatrix.from_dense([[1, 0], [0, -1]]))
    return AlgebraMap(QMatrix.from_dense([[1, 0, 0], [0, -1, 0], [0, 0, 1]]))


def shift_autom():
    """Coordinate shift of Q^3 in the (1, f2, f3) basis; order three."""
    return AlgebraMap(QMatrix.from_dense([[1, 0, 1], [0, 0, -1], [0, 1, -1]]))


def z2_group(algebra):
    return FiniteGroupAction(
        ["e", "s"], [[0, 1], [1, 0]], [AlgebraMap.identity(algebra.dim), sign_twist(algebra)]
    )


def z3_group(algebra):
    s = shift_autom()
    s2 = AlgebraMap(s.matrix @ s.matrix)
    return FiniteGroupAction(
        ["e", "s", "s2"],
        [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
        [AlgebraMap.identity(3), s, s2],
    )


def s3_group(algebra):
    """Coordinate permutations of Q^3 in the (1, f2, f3) basis."""
    from thl.config import load_fixture

    cfg = load_fixture("triple-lines-s3")
    return cfg.group
