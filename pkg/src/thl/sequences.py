"""Group Hochschild homology, the periodicity (SBI) long exact sequence,
group de Rham homology, and the Karoubi sequence, all verified by exact
rank bookkeeping.

Exactness at a node means: the composite of the two adjacent maps is the
zero matrix AND rank(incoming) = dim kernel(outgoing) -- both over Q with
no tolerance.
"""

from .algebra import tensor_index
from .complexes import ChainComplexQ, homology
from .crossed import CoinvariantComplex, LambdaComplex, GJOperators
from .errors import ChainMapError, ComplexError
from .quotient import descend_map, quotient_by
from .rational import QONE
from .sparse import QMatrix, kernel_basis, rank, solve_general, solve_in_span


def g_hochschild(algebra, group, max_degree):
    """Homology of the first column of the coinvariant bicomplex."""
    return CoinvariantComplex(algebra, group, max_degree).column_homology()


# ---------------------------------------------------------------------
# the periodicity sequence
# ---------------------------------------------------------------------

class SequenceNode:
    def __init__(self, label, incoming, outgoing, image_dim, kernel_dim, composite_zero):
        self.label = label
        self.incoming = incoming
        self.outgoing = outgoing
        self.image_dim = image_dim
        self.kernel_dim = kernel_dim
        self.composite_zero = composite_zero

    @property
    def exact(self):
        return self.composite_zero and self.image_dim == self.kernel_dim


class ExactnessReport:
    def __init__(self, nodes, notes=()):
        self.nodes = nodes
        self.notes = list(notes)

    @property
    def all_exact(self):
        return all(n.exact for n in self.nodes)


SBI_INDEXING_NOTE = (
    "periodicity sequence indexed classically: the map out of HC_{n-2} "
    "lands in HH_{n-1}"
)


def _matrix_kernel_dim(m):
    return m.cols - rank(m)


def sbi_sequence(algebra, group, max_degree):
    """Periodicity long exact sequence of the coinvariant bicomplex.

    Built from the degreewise-split short exact sequence of complexes

        0 -> (first column, b) -> Tot -> Tot[2] -> 0,

    with I the column inclusion, S the column-dropping projection, and the
    connecting map computed by the lift-differentiate-project recipe.
    """
    cx = CoinvariantComplex(algebra, group, max_degree)
    k = cx.n_internal
    tot = cx.mixed.total(k)
    hcH = homology(tot.chain)
    hhH = homology(cx.mixed.column_complex())
    N = max_degree

    # chain-level I: C_n -> Tot_n (column p = 0 is the first block)
    incl = []
    for n in range(k + 1):
        dim = cx.mixed.dims[n]
        tdim = tot.chain.dims[n]
        incl.append(
            QMatrix(tdim, dim, [{i: QONE} for i in range(dim)], _adopt=True)
        )
    # chain-level S: Tot_n -> Tot_{n-2} drops the p = 0 block
    proj = {}
    for n in range(2, k + 1):
        head = cx.mixed.dims[n]
        tdim = tot.chain.dims[n]
        cols = []
        for j in range(tdim):
            cols.append({} if j < head else {j - head: QONE})
        proj[n] = QMatrix(tot.chain.dims[n - 2], tdim, cols, _adopt=True)

    # exact chain-map checks
    for n in range(1, k + 1):
        if tot.chain.d[n] @ incl[n] != incl[n - 1] @ cx.mixed.b[n]:
            raise ChainMapError(f"column inclusion fails at degree {n}")
    for n in range(3, k + 1):
        if proj[n - 1] @ tot.chain.d[n] != tot.chain.d[n - 2] @ proj[n]:
            raise ChainMapError(f"shift projection fails at degree {n}")

    def induced_I(n):
        reps, _ = hhH.representatives(n)
        return hcH.class_coordinates(n, incl[n] @ reps)

    def induced_S(n):
        reps, _ = hcH.representatives(n)
        return hcH.class_coordinates(n - 2, proj[n] @ reps)

    def connecting(n):
        """HC_{n-2} -> HH_{n-1}: lift along the splitting, differentiate,
        read off the first column."""
        reps, _ = hcH.representatives(n - 2)
        head = cx.mixed.dims[n]
        lift_cols = []
        for j in range(reps.cols):
            lift_cols.append({r + head: v for r, v in reps._cols[j].items()})
        lift = QMatrix(tot.chain.dims[n], reps.cols, lift_cols, _adopt=True)
        dlift = tot.chain.d[n] @ lift
        head_prev = cx.mixed.dims[n - 1]
        cols = []
        for j in range(dlift.cols):
            col = dict()
            for r, v in dlift._cols[j].items():
                if r >= head_prev:
                    raise ComplexError(
                        "connecting map leaked outside the first column",
                        location=f"degree {n}",
                    )
                col[r] = v
            cols.append(col)
        first_col = QMatrix(head_prev, dlift.cols, cols, _adopt=True)
        return hhH.class_coordinates(n - 1, first_col)

    I_mats = {n: induced_I(n) for n in range(N + 1)}
    S_mats = {n: induced_S(n) for n in range(2, N + 1)}
    # the connecting map out of HC_{n-2} lifts into internal degree n, so
    # it exists one step past the reported range, giving the HH_N node too
    D_mats = {n: connecting(n) for n in range(2, N + 2) if n - 1 <= N}

    def S_or_zero(n):
        if n in S_mats:
            return S_mats[n]
        return QMatrix.zero(0, hcH.dims[n]) if n <= N else None

    nodes = []
    # node HC_n: in I_n, out S_n (zero map for n < 2)
    for n in range(N + 1):
        out = S_or_zero(n)
        comp = (out @ I_mats[n]).is_zero()
        nodes.append(
            SequenceNode(
                f"HC_{n}", f"I_{n}", f"S_{n}",
                rank(I_mats[n]), _matrix_kernel_dim(out), comp,
            )
        )
    # node HC_{n-2} between S_n and the connecting map
    for n in range(2, N + 1):
        if n not in D_mats:
            continue
        comp = (D_mats[n] @ S_mats[n]).is_zero()
        nodes.append(
            SequenceNode(
                f"HC_{n - 2} (shift of HC_{n})", f"S_{n}", f"d_{n}",
                rank(S_mats[n]), _matrix_kernel_dim(D_mats[n]), comp,
            )
        )
    # node HH_n between the connecting map out of HC_{n-1} and I_n
    for n in range(N + 1):
        if n + 1 in D_mats:
            incoming = D_mats[n + 1]
            comp = (I_mats[n] @ incoming).is_zero()
            img = rank(incoming)
        elif n + 1 == 1:
            # the sequence starts: nothing comes into HH_0 from HC_{-1}
            incoming = None
            comp = True
            img = 0
        else:
            continue
        nodes.append(
            SequenceNode(
                f"HH_{n}", f"d_{n + 1}", f"I_{n}",
                img, _matrix_kernel_dim(I_mats[n]), comp,
            )
        )
    return ExactnessReport(nodes, notes=[SBI_INDEXING_NOTE])


# ---------------------------------------------------------------------
# group de Rham homology
# ---------------------------------------------------------------------

def derham_d_ambient(algebra, group, n):
    """d(g | a_0, abar_1, ..) = (g | 1, abar_0, abar_1, ..) on the reduced
    group-indexed modules, before any quotient."""
    ops = GJOperators(algebra, group)
    src = ops.basis(0, n)
    dst = ops.basis(0, n + 1)
    cols = []
    for (g0,) in src.iter_group():
        base = g0 * dst.asize
        for aidx in range(src.asize):
            a = src.decode_algebra(aidx)
            if a[0] == 0:
                cols.append({})
                continue
            tgt = (0, a[0]) + a[1:]
            cols.append({base + dst.encode_algebra(tgt): QONE})
    return QMatrix(dst.size, src.size, cols, _adopt=True)


def derham_d(algebra, group, n):
    """The unit-insertion differential on the coinvariant modules,
    before abelianization; the descent through the orbit quotient is
    checked exactly."""
    cx = CoinvariantComplex(algebra, group, n + 1)
    return descend_map(
        derham_d_ambient(algebra, group, n), cx.pres[n], cx.pres[n + 1],
        what=f"derham d_{n}",
    )


class DeRhamComplex:
    """Abelianized coinvariant modules with the unit-insertion differential.

    Degree n carries (k[G] (x) A (x) Abar^n)/G divided by
    im(bd + db) + im(b); the differential d raises degree by one.  With
    reduced=True the degree-0 class of the unit-stalk tensor (e | 1) is
    divided out too (the ground field's contribution).
    """

    def __init__(self, algebra, group, max_degree, reduced=False):
        self.algebra = algebra
        self.group = group
        self.max_degree = max_degree
        self.reduced = reduced
        self.n_internal = k = max_degree + 1
        cx = CoinvariantComplex(algebra, group, max_degree)
        self.coinv = cx
        # d descended to the coinvariant quotient
        d_coinv = []
        for n in range(k):
            d_coinv.append(
                descend_map(
                    derham_d_ambient(algebra, group, n),
                    cx.pres[n], cx.pres[n + 1], what=f"derham d_{n}",
                )
            )
        d_coinv.append(None)
        # abelianization: quotient by im(bd + db) + im(b)
        self.ab = []
        for n in range(k + 1):
            rels_parts = []
            if n < k:
                rels_parts.append(cx.mixed.b[n + 1] @ d_coinv[n])
            if n >= 1 and d_coinv[n - 1] is not None:
                rels_parts.append(d_coinv[n - 1] @ cx.mixed.b[n])
            if n < k:
                rels_parts.append(cx.mixed.b[n + 1])
            if reduced and n == 0:
                basis = cx.bases[0]
                unit_idx = group.identity_index * basis.asize + basis.encode_algebra((0,))
                unit_amb = QMatrix(basis.size, 1, [{unit_idx: QONE}], _adopt=True)
                rels_parts.append(cx.pres[0].projection @ unit_amb)
            rels = None
            for part in rels_parts:
                rels = part if rels is None else rels.hstack(part)
            if rels is None:
                rels = QMatrix.zero(cx.mixed.dims[n], 0)
            self.ab.append(quotient_by(cx.mixed.dims[n], rels))
        self.d_ab = []
        for n in range(k):
            self.d_ab.append(
                descend_map(d_coinv[n], self.ab[n], self.ab[n + 1], what=f"abelianized d_{n}")
            )
        self.d_ab.append(None)
        # d.d = 0 on the abelianized complex
        for n in range(k - 1):
            if not (self.d_ab[n + 1] @ self.d_ab[n]).is_zero():
                raise ComplexError("d.d != 0 on the abelianized complex", location=f"degree {n}")
        self.d_coinv = d_coinv

    def homology(self):
        """Ascending-differential homology via the reversed chain complex.

        A zero module is appended above the top so that every degree
        0..n_internal - 1 of the original grading is trustworthy.
        """
        k = self.n_internal
        dims = [self.ab[k - m].quotient_dim for m in range(k + 1)] + [0]
        diffs = [None]
        for m in range(1, k + 1):
            diffs.append(self.d_ab[k - m])
        diffs.append(QMatrix.zero(dims[k], 0))
        chain = ChainComplexQ(dims, diffs)
        return ReversedHomology(homology(chain), k)


class ReversedHomology:
    """Adapter exposing cochain-direction homology in the original grading.

    Degrees run 0..top-1: the top cochain degree has no outgoing
    differential in the truncation, so its homology is not reported.
    """

    def __init__(self, inner, top):
        self.inner = inner
        self.top = top
        self.valid_through = top - 1
        self.dims = [inner.dims[top - n] for n in range(top)]

    def representatives(self, n):
        return self.inner.representatives(self.top - n)

    def class_coordinates(self, n, vectors):
        return self.inner.class_coordinates(self.top - n, vectors)

    def boundary_basis(self, n):
        return self.inner.boundary_basis(self.top - n)

    def cycle_basis(self, n):
        return self.inner.cycle_basis(self.top - n)


def derham_homology(algebra, group, max_degree, reduced=False):
    return DeRhamComplex(algebra, group, max_degree, reduced=reduced).homology()


# ---------------------------------------------------------------------
# the Karoubi sequence
# ---------------------------------------------------------------------

class KaroubiNode:
    def __init__(self, degree, left_injective, composite_zero, middle_exact,
                 hdr_dim, hc_dim, hh_next_dim, left_rank, middle_kernel,
                 diagnostic=""):
        self.degree = degree
        self.left_injective = left_injective
        self.composite_zero = composite_zero
        self.middle_exact = middle_exact
        self.hdr_dim = hdr_dim
        self.hc_dim = hc_dim
        self.hh_next_dim = hh_next_dim
        self.left_rank = left_rank
        self.middle_kernel = middle_kernel
        self.diagnostic = diagnostic

    @property
    def ok(self):
        return self.left_injective and self.composite_zero and self.middle_exact


class KaroubiReport:
    def __init__(self, nodes):
        self.nodes = nodes

    @property
    def all_ok(self):
        return all(n.ok for n in self.nodes)


def _reduced_to_full_section(algebra, group, n):
    """Canonical inclusion of the reduced group-indexed module into the
    full one: a reduced basis tensor is its own full-module representative."""
    ops = GJOperators(algebra, group)
    red = ops.basis(0, n)
    full = tensor_index(group, algebra, 0, n, reduced_flags=(False,) * (n + 1))
    cols = []
    for (g0,) in red.iter_group():
        base = g0 * full.asize
        for aidx in range(red.asize):
            a = red.decode_algebra(aidx)
            cols.append({base + full.encode_algebra(a): QONE})
    return QMatrix(full.size, red.size, cols, _adopt=True)


def _full_to_reduced_projection(algebra, group, n):
    """Kill full-module basis tensors with a unit in a reduced slot."""
    ops = GJOperators(algebra, group)
    red = ops.basis(0, n)
    full = tensor_index(group, algebra, 0, n, reduced_flags=(False,) * (n + 1))
    cols = []
    for (g0,) in full.iter_group():
        base = g0 * red.asize
        for aidx in range(full.asize):
            a = full.decode_algebra(aidx)
            if any(x == 0 for x in a[1:]):
                cols.append({})
            else:
                cols.append({base + red.encode_algebra(a): QONE})
    return QMatrix(red.size, full.size, cols, _adopt=True)


def _stalkwise_B_full_to_reduced(algebra, group, n):
    """Normalized degree-raise from the full module into the reduced one:
    project, then apply the stalkwise twisted B."""
    ops = GJOperators(algebra, group)
    return ops.B(0, n) @ _full_to_reduced_projection(algebra, group, n)


def _boundary_membership(vectors, hres, n, what):
    """Exact check that columns are boundaries in homology hres at degree n."""
    frame = hres.boundary_basis(n)
    if frame.cols == 0:
        if not vectors.is_zero():
            raise ChainMapError(f"{what}: a relation does not map to a boundary")
        return
    try:
        solve_in_span(frame, vectors)
    except ValueError:
        raise ChainMapError(f"{what}: a relation does not map to a boundary")


def karoubi_sequence(algebra, group, max_degree):
    """0 -> HDR_n -> HC_n(crossed) -> HH_{n+1} checks for n <= max_degree - 1.

    All three terms are taken reduced relative to the ground field (the
    unit-stalk classes divided out); with the unreduced middle term the
    periodicity class of the unit sits in the kernel of the degree-raising
    map in every even degree >= 2 while the de Rham side has nothing to
    hit it with, so middle exactness is unattainable.  The group
    Hochschild side is already reduced in degrees >= 1 by normalization.

    The left map takes an abelianized class representative to its class in
    the group-indexed Connes complex; the right map applies the normalized
    degree-raising operator.  Every well-definedness obligation is checked
    exactly before ranks are taken.
    """
    k = max_degree + 1
    dr = DeRhamComplex(algebra, group, max_degree, reduced=True)
    cx = dr.coinv
    lam = LambdaComplex(algebra, group, max_degree, g_coinvariants=True, reduced=True)
    lamH = lam.homology()
    hdrH = dr.homology()
    hhH = cx.column_homology()

    nodes = []
    for n in range(max_degree):
        try:
            node = _karoubi_node(algebra, group, n, dr, cx, lam, lamH, hdrH, hhH)
        except ChainMapError as exc:
            node = KaroubiNode(
                degree=n,
                left_injective=False,
                composite_zero=False,
                middle_exact=False,
                hdr_dim=hdrH.dims[n],
                hc_dim=lamH.dims[n],
                hh_next_dim=hhH.dims[n + 1],
                left_rank=-1,
                middle_kernel=-1,
                diagnostic=str(exc),
            )
        nodes.append(node)
    return KaroubiReport(nodes)


def _adapted_lambda_classes(algebra, group, n, dr, cx, lam, lamH, vectors, what):
    """Lambda homology coordinates of abelianized-module vectors, choosing
    within each abelianization class a representative whose lambda image is
    a cycle.

    vectors: columns in the abelianized quotient coordinates at degree n.
    The correction lives in the span of the abelianization relations; the
    system is solved exactly and fails loudly when no adapted
    representative exists.
    """
    to_lambda = lam.pres[n].projection @ (
        _reduced_to_full_section(algebra, group, n) @ cx.pres[n].section
    )
    rel = dr.ab[n].relation_basis
    lifted = dr.ab[n].section @ vectors
    if n == 0:
        return lamH.class_coordinates(0, to_lambda @ lifted)
    d_lam = lam.chain.d[n]
    move = d_lam @ (to_lambda @ rel)
    rhs = -(d_lam @ (to_lambda @ lifted))
    correction = solve_general(move, rhs)
    if correction is None:
        raise ChainMapError(f"{what}: no adapted cycle representative at degree {n}")
    adapted = to_lambda @ (lifted + rel @ correction)
    return lamH.class_coordinates(n, adapted)


def _karoubi_node(algebra, group, n, dr, cx, lam, lamH, hdrH, hhH):
    # left map: adapted abelianized representatives -> lambda classes
    reps, _ = hdrH.representatives(n)
    left = _adapted_lambda_classes(algebra, group, n, dr, cx, lam, lamH, reps, "left map")
    # well-definedness: adapted representatives of zero must be boundaries.
    # The ambiguity space is the kernel of the adapted-cycle system over
    # the relation span; its lambda classes must vanish.
    to_lambda = lam.pres[n].projection @ (
        _reduced_to_full_section(algebra, group, n) @ cx.pres[n].section
    )
    rel = dr.ab[n].relation_basis
    if n >= 1 and rel.cols:
        amb = kernel_basis(lam.chain.d[n] @ (to_lambda @ rel))
        closed_rel = to_lambda @ (rel @ amb)
        if not closed_rel.is_zero():
            _boundary_membership(closed_rel, lamH, n, "left map relations")
    bd = hdrH.boundary_basis(n)
    if bd.cols:
        zero_like = _adapted_lambda_classes(
            algebra, group, n, dr, cx, lam, lamH, bd, "left map boundaries"
        )
        if not zero_like.is_zero():
            raise ChainMapError("left map boundaries: a boundary maps to a nonzero class")

    # right map: lambda class -> normalized degree raise -> group Hochschild
    Bmap = _stalkwise_B_full_to_reduced(algebra, group, n)
    right_chain = cx.pres[n + 1].projection @ Bmap @ lam.pres[n].section
    lreps, _ = lamH.representatives(n)
    rimages = right_chain @ lreps
    resid = cx.mixed.b[n + 1] @ rimages
    if not resid.is_zero():
        raise ChainMapError(f"degree-raise image is not a cycle at degree {n}")
    raw_right = cx.pres[n + 1].projection @ Bmap
    lrel = raw_right @ lam.pres[n].relation_basis
    if not lrel.is_zero():
        _boundary_membership(lrel, hhH, n + 1, "right map relations")
    lbd = lamH.boundary_basis(n)
    if lbd.cols:
        _boundary_membership(right_chain @ lbd, hhH, n + 1, "right map boundaries")
    right = hhH.class_coordinates(n + 1, rimages)

    comp = (right @ left).is_zero()
    lrank = rank(left)
    mker = _matrix_kernel_dim(right)
    return KaroubiNode(
        degree=n,
        left_injective=(lrank == hdrH.dims[n]),
        composite_zero=comp,
        middle_exact=(lrank == mker),
        hdr_dim=hdrH.dims[n],
        hc_dim=lamH.dims[n],
        hh_next_dim=hhH.dims[n + 1],
        left_rank=lrank,
        middle_kernel=mker,
    )
