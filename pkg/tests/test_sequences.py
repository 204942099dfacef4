import pytest

from thl.algebra import AlgebraMap, trivial_group
from thl.crossed import GJOperators
from thl.rational import Q
from thl.sequences import (
    DeRhamComplex,
    derham_d,
    derham_d_ambient,
    derham_homology,
    g_hochschild,
    karoubi_sequence,
    sbi_sequence,
)
from thl.sparse import QMatrix
from thl.twisted import twisted_hochschild

from fixtures_for_tests import (
    dual_numbers_algebra,
    ground_field_algebra,
    s3_group,
    triple_lines_algebra,
    z2_group,
    z3_group,
)


# -- group Hochschild ----------------------------------------------------

def test_g_hochschild_trivial_group_is_plain():
    A = dual_numbers_algebra()
    lib = g_hochschild(A, trivial_group(A), 3).dims
    assert lib == twisted_hochschild(A, AlgebraMap.identity(2), 3).dims


def test_g_hochschild_class_count():
    """Degree 0 over the ground field counts conjugacy classes."""
    Aq = ground_field_algebra()
    z3 = z3_group(triple_lines_algebra())
    # replace the action with trivial maps on Q
    from thl.algebra import FiniteGroupAction

    g3 = FiniteGroupAction(
        z3.element_names, z3.mult_table, [AlgebraMap.identity(1)] * 3
    )
    assert g_hochschild(Aq, g3, 2).dims[0] == 3
    s3 = s3_group(triple_lines_algebra())
    g6 = FiniteGroupAction(
        s3.element_names, s3.mult_table, [AlgebraMap.identity(1)] * 6
    )
    assert g_hochschild(Aq, g6, 2).dims[0] == 3  # classes of sizes 1, 3, 2


def test_g_hochschild_fixture2():
    A = dual_numbers_algebra()
    assert g_hochschild(A, z2_group(A), 3).dims == [2, 1, 1, 1]


# -- periodicity sequence -------------------------------------------------

def test_sbi_ground_field_classical_pattern():
    Aq = ground_field_algebra()
    rep = sbi_sequence(Aq, trivial_group(Aq), 3)
    assert rep.all_exact
    labels = {n.label: n for n in rep.nodes}
    # S: HC_2 -> HC_0 surjective in the classical pattern
    shifted = labels["HC_0 (shift of HC_2)"]
    assert shifted.image_dim == 1


def test_sbi_composites_zero_everywhere():
    A = dual_numbers_algebra()
    rep = sbi_sequence(A, z2_group(A), 3)
    assert all(n.composite_zero for n in rep.nodes)


def test_sbi_fixture2_exact():
    A = dual_numbers_algebra()
    rep = sbi_sequence(A, z2_group(A), 3)
    assert rep.all_exact


def test_sbi_fixture3_exact():
    A = triple_lines_algebra()
    rep = sbi_sequence(A, z3_group(A), 3)
    assert rep.all_exact


def test_sbi_indexing_note_present():
    Aq = ground_field_algebra()
    rep = sbi_sequence(Aq, trivial_group(Aq), 2)
    assert any("HH_{n-1}" in note for note in rep.notes)


# -- de Rham ----------------------------------------------------------------

def test_derham_d_kills_unit_slot():
    A = dual_numbers_algebra()
    G = z2_group(A)
    d0 = derham_d_ambient(A, G, 0)
    basis = GJOperators(A, G).basis(0, 0)
    # d(g | 1) = (g | 1, 1bar) = 0
    assert d0.column(basis.encode_group((0,)) * basis.asize + 0) == {}


def test_derham_d_hand_value():
    """G trivial, dual numbers: d(e | x) = (e | 1, xbar)."""
    A = dual_numbers_algebra()
    G = trivial_group(A)
    d0 = derham_d_ambient(A, G, 0)
    col = d0.column(1)
    assert col == {0: Q(1)}  # (1, xbar) is the first degree-1 reduced tensor


def test_derham_dd_zero():
    A = dual_numbers_algebra()
    G = z2_group(A)
    for n in range(3):
        dn = derham_d_ambient(A, G, n)
        dn1 = derham_d_ambient(A, G, n + 1)
        assert (dn1 @ dn).is_zero()


def test_derham_ground_field():
    Aq = ground_field_algebra()
    assert derham_homology(Aq, trivial_group(Aq), 3).dims == [1, 0, 0, 0]


def test_derham_fixture2():
    A = dual_numbers_algebra()
    assert derham_homology(A, z2_group(A), 3).dims == [2, 0, 0, 0]


def test_derham_descends_assertion_holds():
    """Constructing the complex exercises every descent check exactly."""
    A = triple_lines_algebra()
    DeRhamComplex(A, z3_group(A), 2)


def test_derham_d_on_coinvariants():
    """The public map acts on orbit-quotient coordinates; with a trivial
    group it coincides with the ambient formula."""
    A = dual_numbers_algebra()
    Gt = trivial_group(A)
    assert derham_d(A, Gt, 0) == derham_d_ambient(A, Gt, 0)
    G = z2_group(A)
    d0 = derham_d(A, G, 0)
    cx0 = DeRhamComplex(A, G, 1)
    assert d0.cols == cx0.coinv.pres[0].quotient_dim
    assert d0.rows == cx0.coinv.pres[1].quotient_dim


def test_homology_result_basis_invariant():
    """dims equal cycle rank minus boundary rank wherever bases exist."""
    from thl.complexes import homology
    from thl.sparse import rank
    from thl.twisted import HKBicomplex
    from fixtures_for_tests import sign_twist

    A = dual_numbers_algebra()
    hk = HKBicomplex(A, sign_twist(A), 3)
    h = homology(hk.total().chain)
    for n in range(h.valid_through + 1):
        cy = h.cycle_basis(n)
        bd = h.boundary_basis(n)
        assert h.dims[n] == rank(cy) - rank(bd)


# -- Karoubi ----------------------------------------------------------------

def test_karoubi_ground_field_all_nodes():
    Aq = ground_field_algebra()
    rep = karoubi_sequence(Aq, trivial_group(Aq), 3)
    assert rep.all_ok


def test_karoubi_dual_numbers_trivial_group():
    """Nilpotent augmentation ideal: the classical sequence is exact."""
    A = dual_numbers_algebra()
    rep = karoubi_sequence(A, trivial_group(A), 3)
    assert rep.all_ok


def test_karoubi_fixture2_low_degrees():
    A = dual_numbers_algebra()
    rep = karoubi_sequence(A, z2_group(A), 3)
    by_degree = {n.degree: n for n in rep.nodes}
    assert by_degree[0].ok
    assert by_degree[1].ok
    # Degree 2: the periodicity class of the semisimple group-algebra part
    # of the crossed product lies in the kernel of the degree raise, and
    # the de Rham modules above degree zero cannot reach it.  This mismatch
    # is forced by the module dimensions, not by the realization.
    assert by_degree[2].left_injective
    assert by_degree[2].composite_zero
    assert not by_degree[2].middle_exact
    assert by_degree[2].hdr_dim == 0 and by_degree[2].middle_kernel == 1
