import pytest

from thl.algebra import (
    Algebra,
    AlgebraMap,
    FiniteGroupAction,
    algebra_tensor_basis,
    conjugacy_data,
    crossed_product,
    tensor_index,
    trivial_group,
    validate_action,
    validate_algebra,
)
from thl.errors import ActionError, AlgebraError, ReducedBasisError
from thl.rational import Q
from thl.sparse import QMatrix

from fixtures_for_tests import (
    dual_numbers_algebra,
    sign_twist,
    s3_group,
    triple_lines_algebra,
    z2_group,
    z3_group,
)


def test_validate_dual_numbers():
    validate_algebra(dual_numbers_algebra())


def test_validate_q3_coordinatewise():
    validate_algebra(triple_lines_algebra())


def test_validate_rejects_nonassociative():
    # x.x = y, x.y = 1, y.x = 0: then (x.x).x = 0 but x.(x.x) = 1
    bad = Algebra(
        3,
        ["1", "x", "y"],
        {0: 1},
        [
            [{0: 1}, {1: 1}, {2: 1}],
            [{1: 1}, {2: 1}, {0: 1}],
            [{2: 1}, {}, {}],
        ],
    )
    with pytest.raises(AlgebraError) as err:
        validate_algebra(bad)
    assert "associativity" in str(err.value)
    assert "x" in str(err.value)


def test_validate_action_sign_twist():
    A = dual_numbers_algebra()
    validate_action(A, z2_group(A))


def test_validate_action_shift():
    A = triple_lines_algebra()
    validate_action(A, z3_group(A))


def test_action_rejects_unit_breaker():
    A = dual_numbers_algebra()
    bad = AlgebraMap(QMatrix.from_dense([[2, 0], [0, 1]]))  # g(1) = 2
    G = FiniteGroupAction(["e", "s"], [[0, 1], [1, 0]], [AlgebraMap.identity(2), bad])
    with pytest.raises(ActionError):
        validate_action(A, G)


def test_crossed_product_trivial_group():
    A = dual_numbers_algebra()
    AG = crossed_product(A, trivial_group(A))
    assert AG.dim == 2
    assert AG.mult[0][1] == A.mult[0][1]


def test_crossed_product_convention():
    """(1 x| g)(x x| e) = (g(x) x| g) = (-x x| g)."""
    A = dual_numbers_algebra()
    G = z2_group(A)
    AG = crossed_product(A, G)
    # basis order: (i, j) -> i*r + j; (1 x| s) = index 1, (x x| e) = index 2
    prod = AG.mult[0 * 2 + 1][1 * 2 + 0]
    assert prod == {1 * 2 + 1: Q(-1)}


def test_crossed_product_dimension():
    A = dual_numbers_algebra()
    assert crossed_product(A, z2_group(A)).dim == 4


def test_crossed_product_conjugation_embedding():
    """(1 x| h)(a x| e)(1 x| h^-1) = (h(a) x| e) for all h and basis a."""
    for A, G in [
        (dual_numbers_algebra(), None),
        (triple_lines_algebra(), None),
    ]:
        G = z2_group(A) if A.dim == 2 else z3_group(A)
        AG = crossed_product(A, G)
        r = G.order
        for h in range(r):
            hinv = G.inverse[h]
            for a in range(A.dim):
                lhs = AG.multiply(
                    AG.multiply({0 * r + h: Q(1)}, {a * r + G.identity_index: Q(1)}),
                    {0 * r + hinv: Q(1)},
                )
                expected = {
                    m * r + G.identity_index: v
                    for m, v in G.action[h].image_of_basis(a).items()
                }
                assert lhs == expected


def test_conjugacy_z2():
    A = dual_numbers_algebra()
    data = conjugacy_data(z2_group(A))
    assert [len(c) for c in data.classes] == [1, 1]
    assert all(len(c) == 2 for c in data.centralizers)


def test_conjugacy_z3():
    A = triple_lines_algebra()
    data = conjugacy_data(z3_group(A))
    assert [len(c) for c in data.classes] == [1, 1, 1]


def test_conjugacy_s3():
    A = triple_lines_algebra()
    G = s3_group(A)
    data = conjugacy_data(G)
    assert sorted(len(c) for c in data.classes) == [1, 2, 3]
    assert sum(G.order // len(cent) for cent in data.centralizers) != 0
    for cls, cent in zip(data.classes, data.centralizers):
        assert len(cls) * len(cent) == G.order
        assert G.order % len(cent) == 0


def test_tensor_index_counts():
    A = dual_numbers_algebra()
    G = z2_group(A)
    assert tensor_index(G, A, 0, 1, reduced_flags=(False, False)).size == 8
    assert tensor_index(G, A, 0, 1, reduced_flags=(False, True)).size == 4
    A3 = triple_lines_algebra()
    G3 = z3_group(A3)
    assert tensor_index(G3, A3, 1, 0, reduced_flags=(False,)).size == 27


def test_tensor_index_roundtrip():
    A3 = triple_lines_algebra()
    G3 = z3_group(A3)
    basis = tensor_index(G3, A3, 1, 2)
    for idx in range(basis.size):
        gt, at = basis.decode(idx)
        assert basis.encode(gt, at) == idx
        assert all(a >= 1 for a in at[1:])


def test_reduced_needs_unit_basis_vector():
    # coordinatewise Q^2 with basis the two idempotents: unit is (1,1)
    A = Algebra(2, ["p", "q"], {0: 1, 1: 1}, [[{0: 1}, {}], [{}, {1: 1}]])
    validate_algebra(A)
    with pytest.raises(ReducedBasisError):
        algebra_tensor_basis(A, 2)


def test_group_table_validation():
    A = dual_numbers_algebra()
    with pytest.raises(ActionError):
        FiniteGroupAction(["e", "s"], [[0, 1], [1, 1]], [AlgebraMap.identity(2)] * 2)
