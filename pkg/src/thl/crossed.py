"""Group-extended tensor operators for a group acting on an algebra, the
quotient bicomplex computing HC of the crossed product, the coinvariant
bicomplex, its conjugacy-class stalk decomposition, the comparison map
from a single twisted theory, the group-indexed Connes complex, and the
u-parameter equivalence check.

Module conventions (machine-checked per instance):

* block (p, q) is k[G^{p+1}] (x) A (x) Abar^q, group tuple major;
* on the block of (g_0, ..., g_p) the algebra-direction operators b, B and
  the twist T act through sigma = (g_0 ... g_p)^{-1}, the inverse of the
  tuple product.  With sigma the Connes identity bB + Bb = 1 - T holds on
  the nose; the variant twisting by the product itself spans the same
  relation subspace, so the (1 - T) quotients agree either way;
* the group-direction operators carry the Koszul sign (-1)^q of the
  algebra degree they act past:

  bbar(g_0..g_p | a) = (-1)^q [ sum_i (-1)^i (g_0.., g_i g_{i+1}, ..g_p | a)
                       + (-1)^p (g_p g_0, .., g_{p-1} | g_p(a)) ],
  Bbar(g_0..g_p | a) = (-1)^q sum_i (-1)^{ip}
                       (e, g_{p-i+1}, .., g_p, g_0, .., g_{p-i} | h_i(a)),
  with h_i = g_{p-i+1} ... g_p.  Without the Koszul sign the unsigned sums
  commute with b and B instead of anticommuting; with it, b bbar + bbar b
  = 0 and bbar B + B bbar = 0 hold on the nose, so (b + bbar) squares to
  zero with no further block adjustment.
"""

from .algebra import algebra_tensor_basis, conjugacy_data, tensor_index
from .complexes import (
    ChainComplexQ,
    MixedComplex,
    homology,
    induced_on_homology,
)
from .errors import ChainMapError, ComplexError
from .quotient import coinvariant_relations, descend_map, quotient_by, QuotientPresentation
from .rational import QONE
from .sparse import QMatrix, block_diag, block_matrix, rank
from .twisted import HKBicomplex, twist_matrix, twisted_B, twisted_b


class GJOperators:
    """Lazy per-(p, q) operator matrices on the reduced GJ modules."""

    def __init__(self, algebra, group):
        self.algebra = algebra
        self.group = group
        self._alg_twist = {}   # (elem, slots) -> twist matrix, reduced
        self._alg_b = {}       # (elem, q) -> twisted b, reduced
        self._alg_B = {}       # (elem, q) -> twisted B, reduced
        self._cache = {}

    # -- per-element algebra-direction blocks --------------------------

    def alg_twist(self, elem, q):
        key = (elem, q)
        m = self._alg_twist.get(key)
        if m is None:
            m = twist_matrix(self.algebra, self.group.action[elem], q, reduced=True)
            self._alg_twist[key] = m
        return m

    def alg_b(self, elem, q):
        key = (elem, q)
        m = self._alg_b.get(key)
        if m is None:
            m = twisted_b(self.algebra, self.group.action[elem], q, reduced=True)
            self._alg_b[key] = m
        return m

    def alg_B(self, elem, q):
        key = (elem, q)
        m = self._alg_B.get(key)
        if m is None:
            m = twisted_B(self.algebra, self.group.action[elem], q)
            self._alg_B[key] = m
        return m

    # -- bases ----------------------------------------------------------

    def basis(self, p, q):
        key = ("basis", p, q)
        b = self._cache.get(key)
        if b is None:
            b = tensor_index(self.group, self.algebra, p, q)
            self._cache[key] = b
        return b

    def _sigma(self, gtuple):
        return self.group.inverse[self.group.product(gtuple)]

    def _blockdiag(self, p, q, block_of):
        basis = self.basis(p, q)
        return block_diag([block_of(gt) for gt in basis.iter_group()])

    # -- operators --------------------------------------------------------

    def T(self, p, q):
        key = ("T", p, q)
        m = self._cache.get(key)
        if m is None:
            m = self._blockdiag(p, q, lambda gt: self.alg_twist(self._sigma(gt), q))
            self._cache[key] = m
        return m

    def b(self, p, q):
        """Vertical face sum (p, q) -> (p, q-1); zero-width for q = 0."""
        key = ("b", p, q)
        m = self._cache.get(key)
        if m is None:
            if q < 1:
                raise ValueError("b needs q >= 1")
            m = self._blockdiag(p, q, lambda gt: self.alg_b(self._sigma(gt), q))
            self._cache[key] = m
        return m

    def B(self, p, q):
        key = ("B", p, q)
        m = self._cache.get(key)
        if m is None:
            m = self._blockdiag(p, q, lambda gt: self.alg_B(self._sigma(gt), q))
            self._cache[key] = m
        return m

    def bbar(self, p, q):
        """Group-direction boundary (p, q) -> (p-1, q); zero map at p = 0."""
        key = ("bbar", p, q)
        m = self._cache.get(key)
        if m is not None:
            return m
        src = self.basis(p, q)
        if p == 0:
            m = QMatrix.zero(0, src.size)
            self._cache[key] = m
            return m
        dst = self.basis(p - 1, q)
        grp = self.group
        asize = src.asize
        koszul = QONE if q % 2 == 0 else -QONE
        cols = []
        for gt in src.iter_group():
            terms = []
            for i in range(p):
                merged = gt[:i] + (grp.mul(gt[i], gt[i + 1]),) + gt[i + 2 :]
                sign = koszul if i % 2 == 0 else -koszul
                terms.append((dst.encode_group(merged), sign, None))
            rotated = (grp.mul(gt[p], gt[0]),) + gt[1:p]
            sign = koszul if p % 2 == 0 else -koszul
            terms.append((dst.encode_group(rotated), sign, self.alg_twist(gt[p], q)))
            for aidx in range(asize):
                col = {}
                for tgt_g, s, mat in terms:
                    base = tgt_g * asize
                    if mat is None:
                        r = base + aidx
                        nv = col.get(r)
                        nv = s if nv is None else nv + s
                        if nv:
                            col[r] = nv
                        elif r in col:
                            del col[r]
                    else:
                        for rr, vv in mat._cols[aidx].items():
                            r = base + rr
                            nv = col.get(r)
                            nv = s * vv if nv is None else nv + s * vv
                            if nv:
                                col[r] = nv
                            elif r in col:
                                del col[r]
                cols.append(col)
        m = QMatrix(dst.size, src.size, cols, _adopt=True)
        self._cache[key] = m
        return m

    def Bbar(self, p, q):
        """Group-direction degree raise (p, q) -> (p+1, q)."""
        key = ("Bbar", p, q)
        m = self._cache.get(key)
        if m is not None:
            return m
        src = self.basis(p, q)
        dst = self.basis(p + 1, q)
        grp = self.group
        e = grp.identity_index
        asize = src.asize
        koszul = QONE if q % 2 == 0 else -QONE
        cols = []
        for gt in src.iter_group():
            terms = []
            for i in range(p + 1):
                rot = gt[p - i + 1 :] + gt[: p - i + 1]
                tgt = (e,) + rot
                h = grp.product(gt[p - i + 1 :])
                sign = koszul if (i * p) % 2 == 0 else -koszul
                terms.append((dst.encode_group(tgt), sign, None if h == e else self.alg_twist(h, q)))
            for aidx in range(asize):
                col = {}
                for tgt_g, s, mat in terms:
                    base = tgt_g * asize
                    if mat is None:
                        r = base + aidx
                        nv = col.get(r)
                        nv = s if nv is None else nv + s
                        if nv:
                            col[r] = nv
                        elif r in col:
                            del col[r]
                    else:
                        for rr, vv in mat._cols[aidx].items():
                            r = base + rr
                            nv = col.get(r)
                            nv = s * vv if nv is None else nv + s * vv
                            if nv:
                                col[r] = nv
                            elif r in col:
                                del col[r]
                cols.append(col)
        m = QMatrix(dst.size, src.size, cols, _adopt=True)
        self._cache[key] = m
        return m


def gj_bbar(algebra, group, p, q):
    return GJOperators(algebra, group).bbar(p, q)


def gj_Bbar(algebra, group, p, q):
    return GJOperators(algebra, group).Bbar(p, q)


def gj_T(algebra, group, p, q):
    return GJOperators(algebra, group).T(p, q)


def gj_twisted_bB(algebra, group, p, q):
    ops = GJOperators(algebra, group)
    return (ops.b(p, q) if q >= 1 else None), ops.B(p, q)


def beta_map(algebra, group, p, q):
    """The regrouping bijection (g_0..g_p | a) -> (g_1..g_p, g_0...g_p | a).

    Permutation matrix from k[G^{p+1}] (x) A^{(q+1)} to
    k[G^p] (x) (k[G] (x) A^{(q+1)}), both enumerated group-major.
    """
    if p < 1:
        raise ValueError("beta needs p >= 1")
    basis = tensor_index(group, algebra, p, q, reduced_flags=(False,) * (q + 1))
    cols = []
    for gt in basis.iter_group():
        g = group.product(gt)
        tgt = gt[1:] + (g,)
        base = basis.encode_group(tgt) * basis.asize
        for aidx in range(basis.asize):
            cols.append({base + aidx: QONE})
    return QMatrix(basis.size, basis.size, cols, _adopt=True)


# ---------------------------------------------------------------------
# operator-identity suites
# ---------------------------------------------------------------------

def identity_suite(algebra, group, bound):
    """The exact operator identities on every block with p + q <= bound.

    Returns (name, ok, detail) triples with stable names; on failure the
    detail names the first offending block and basis tensor.
    """
    ops = GJOperators(algebra, group)
    failures = {}

    def residual(name, p, q, mat):
        if name in failures or mat.is_zero():
            return
        j = next(k for k in range(mat.cols) if mat._cols[k])
        basis = ops.basis(p, q)
        failures[name] = (
            f"first residual at (p,q)=({p},{q}) on "
            f"{basis.label(j, group, algebra)}: {dict(mat._cols[j])}"
        )

    for s in range(bound + 1):
        for p in range(s + 1):
            q = s - p
            T = ops.T(p, q)
            B = ops.B(p, q)
            lhs = ops.b(p, q + 1) @ B
            if q >= 1:
                lhs = lhs + ops.B(p, q - 1) @ ops.b(p, q)
            residual("bB+Bb=1-T", p, q, lhs - (QMatrix.identity(T.rows) - T))
            if q >= 2:
                residual("b^2=0", p, q, ops.b(p, q - 1) @ ops.b(p, q))
            residual("B^2=0", p, q, ops.B(p, q + 1) @ B)
            if p >= 2:
                residual("bbar^2=0", p, q, ops.bbar(p - 1, q) @ ops.bbar(p, q))
            if p >= 1:
                r = ops.bbar(p, q + 1) @ B + ops.B(p - 1, q) @ ops.bbar(p, q)
                residual("bbarB+Bbbar=0", p, q, r)
            if q >= 1:
                residual("[T,b]=0", p, q,
                         (ops.T(p, q - 1) @ ops.b(p, q)) - (ops.b(p, q) @ T))
            if p >= 1:
                residual("[T,bbar]=0", p, q,
                         (ops.T(p - 1, q) @ ops.bbar(p, q)) - (ops.bbar(p, q) @ T))
            residual("[T,B]=0", p, q, (ops.T(p, q + 1) @ B) - (B @ T))
            if p >= 1 and q >= 1:
                r = ops.b(p - 1, q) @ ops.bbar(p, q) + ops.bbar(p, q - 1) @ ops.b(p, q)
                residual("b.bbar+bbar.b=0", p, q, r)
    names = (
        "b^2=0",
        "B^2=0",
        "bbar^2=0",
        "bB+Bb=1-T",
        "bbarB+Bbbar=0",
        "[T,b]=0",
        "[T,bbar]=0",
        "[T,B]=0",
        "b.bbar+bbar.b=0",
    )
    return [(name, name not in failures, failures.get(name, "")) for name in names]


def full_pair_check(algebra, group, bound):
    """Construction-time identities of the full boundary pair.

    D = b + bbar and the degree-raising candidate F = B + T.Bbar satisfy
    D.D = 0 and D.F + F.D = 0 exactly on the truncation (the two
    anticommutators trade 1 - T against its negative).  F.F does not
    vanish, which is why the homology pipeline runs through the quotient
    bicomplex with F replaced by B.
    """
    ops = GJOperators(algebra, group)

    def U(p, q):
        return ops.T(p + 1, q) @ ops.Bbar(p, q)

    ok_d2 = True
    ok_mixed = True
    for s in range(bound + 1):
        for p in range(s + 1):
            q = s - p
            # D^2 components
            if q >= 2 and not (ops.b(p, q - 1) @ ops.b(p, q)).is_zero():
                ok_d2 = False
            if p >= 2 and not (ops.bbar(p - 1, q) @ ops.bbar(p, q)).is_zero():
                ok_d2 = False
            if p >= 1 and q >= 1:
                r = ops.b(p - 1, q) @ ops.bbar(p, q) + ops.bbar(p, q - 1) @ ops.b(p, q)
                if not r.is_zero():
                    ok_d2 = False
            # (D F + F D) components
            comp = ops.b(p, q + 1) @ ops.B(p, q)
            if q >= 1:
                comp = comp + ops.B(p, q - 1) @ ops.b(p, q)
            comp = comp + ops.bbar(p + 1, q) @ U(p, q)
            if p >= 1:
                comp = comp + U(p - 1, q) @ ops.bbar(p, q)
            if not comp.is_zero():
                ok_mixed = False
            if q >= 1:
                r = ops.b(p + 1, q) @ U(p, q) + U(p, q - 1) @ ops.b(p, q)
                if not r.is_zero():
                    ok_mixed = False
            if p >= 1:
                r = ops.bbar(p, q + 1) @ ops.B(p, q) + ops.B(p - 1, q) @ ops.bbar(p, q)
                if not r.is_zero():
                    ok_mixed = False
    return [("(b+bbar)^2=0", ok_d2), ("(b+bbar)(B+TBbar)+(B+TBbar)(b+bbar)=0", ok_mixed)]


# ---------------------------------------------------------------------
# quotient pipelines
# ---------------------------------------------------------------------

def _sum_presentation(parts):
    """Block-diagonal direct sum of quotient presentations."""
    ambient = sum(p.ambient_dim for p in parts)
    relation = block_diag([p.relation_basis for p in parts])
    projection = block_diag([p.projection for p in parts])
    section = block_diag([p.section for p in parts])
    pivot_rows = []
    free_rows = []
    off = 0
    for p in parts:
        pivot_rows.extend(off + r for r in p.pivot_rows)
        free_rows.extend(off + r for r in p.free_rows)
        off += p.ambient_dim
    return QuotientPresentation(ambient, relation, projection, section, pivot_rows, free_rows)


class PropositionComplex:
    """The quotient bicomplex of the crossed-product theory.

    Every block (p, q) with p + q <= N + 1 is divided by (1 - T); the
    boundary b + bbar and the degree-raising B descend (checked); total
    degree n collects blocks with p + q = n, ascending p.
    """

    def __init__(self, algebra, group, max_degree, deep_checks=True):
        self.algebra = algebra
        self.group = group
        self.max_degree = max_degree
        self.n_internal = k = max_degree + 1
        ops = GJOperators(algebra, group)
        self.ops = ops

        self.pres = {}
        for s in range(k + 1):
            for p in range(s + 1):
                q = s - p
                T = ops.T(p, q)
                rels = coinvariant_relations(T.rows, [T])
                self.pres[(p, q)] = quotient_by(T.rows, rels)

        if deep_checks:
            self.full_pair = full_pair_check(algebra, group, min(k, 2))
            for name, ok in self.full_pair:
                if not ok:
                    raise ComplexError(f"full boundary pair identity failed: {name}")

        # descended operators
        self.db = {}
        self.dbbar = {}
        self.dB = {}
        for s in range(k + 1):
            for p in range(s + 1):
                q = s - p
                if q >= 1:
                    self.db[(p, q)] = descend_map(
                        ops.b(p, q), self.pres[(p, q)], self.pres[(p, q - 1)],
                        what=f"b at (p,q)=({p},{q})",
                    )
                if p >= 1:
                    self.dbbar[(p, q)] = descend_map(
                        ops.bbar(p, q), self.pres[(p, q)], self.pres[(p - 1, q)],
                        what=f"bbar at (p,q)=({p},{q})",
                    )
                if s < k:
                    self.dB[(p, q)] = descend_map(
                        ops.B(p, q), self.pres[(p, q)], self.pres[(p, q + 1)],
                        what=f"B at (p,q)=({p},{q})",
                    )

        # assemble the mixed complex C_n = sum over p+q = n
        self.layout = {
            n: [(p, n - p) for p in range(n + 1)] for n in range(k + 1)
        }
        dims = []
        for n in range(k + 1):
            dims.append(sum(self.pres[pq].quotient_dim for pq in self.layout[n]))
        b_tot = [None]
        for n in range(1, k + 1):
            src_blocks = self.layout[n]
            dst_blocks = self.layout[n - 1]
            dst_pos = {pq: i for i, pq in enumerate(dst_blocks)}
            blocks = {}
            for js, (p, q) in enumerate(src_blocks):
                if q >= 1:
                    blocks[(dst_pos[(p, q - 1)], js)] = self.db[(p, q)]
                if p >= 1:
                    blocks[(dst_pos[(p - 1, q)], js)] = self.dbbar[(p, q)]
            b_tot.append(
                block_matrix(
                    blocks,
                    [self.pres[pq].quotient_dim for pq in dst_blocks],
                    [self.pres[pq].quotient_dim for pq in src_blocks],
                )
            )
        B_tot = []
        for n in range(k):
            src_blocks = self.layout[n]
            dst_blocks = self.layout[n + 1]
            dst_pos = {pq: i for i, pq in enumerate(dst_blocks)}
            blocks = {}
            for js, (p, q) in enumerate(src_blocks):
                blocks[(dst_pos[(p, q + 1)], js)] = self.dB[(p, q)]
            B_tot.append(
                block_matrix(
                    blocks,
                    [self.pres[pq].quotient_dim for pq in dst_blocks],
                    [self.pres[pq].quotient_dim for pq in src_blocks],
                )
            )
        B_tot.append(None)
        self.mixed = MixedComplex(
            dims, b_tot, B_tot, label=f"crossed-product quotient bicomplex (N={max_degree})"
        )

    def homology(self):
        return homology(self.mixed.total(self.n_internal).chain)


def proposition_bicomplex(algebra, group, max_degree, deep_checks=True):
    """Quotient-bicomplex pipeline; returns (complex object, HomologyResult)."""
    pc = PropositionComplex(algebra, group, max_degree, deep_checks=deep_checks)
    return pc, pc.homology()


class GroupIndexedComplex:
    """Shared scaffold for the p = 0 theories: modules k[G] (x) A (x) Abar^n.

    Subclasses choose the relations; b (and B) are the stalkwise operators
    twisted by the inverse of the stalk element, descended through the
    quotient with the well-definedness check.
    """

    def __init__(self, algebra, group, max_degree):
        self.algebra = algebra
        self.group = group
        self.max_degree = max_degree
        self.n_internal = k = max_degree + 1
        ops = GJOperators(algebra, group)
        self.ops = ops
        self.bases = [ops.basis(0, n) for n in range(k + 1)]
        self.pres = [
            quotient_by(self.bases[n].size, self.relations(n)) for n in range(k + 1)
        ]
        b = [None]
        for n in range(1, k + 1):
            b.append(
                descend_map(ops.b(0, n), self.pres[n], self.pres[n - 1], what=f"b_{n}")
            )
        B = []
        for n in range(k):
            B.append(
                descend_map(ops.B(0, n), self.pres[n], self.pres[n + 1], what=f"B_{n}")
            )
        B.append(None)
        dims = [p.quotient_dim for p in self.pres]
        self.mixed = MixedComplex(dims, b, B, label=self.label())

    def relations(self, n):
        raise NotImplementedError

    def label(self):
        return "group-indexed complex"

    def total_homology(self):
        return homology(self.mixed.total(self.n_internal).chain)

    def column_homology(self):
        return homology(self.mixed.column_complex())


def group_action_operator(ops, h, n):
    """Action of h on k[G] (x) A (x) Abar^n: conjugation on the group slot,
    h on every algebra slot."""
    group = ops.group
    basis = ops.basis(0, n)
    alg = ops.alg_twist(h, n)
    cols = []
    for (g0,) in basis.iter_group():
        tgt = group.conjugate(h, g0)
        base = tgt * basis.asize
        for aidx in range(basis.asize):
            cols.append({base + r: v for r, v in alg._cols[aidx].items()})
    return QMatrix(basis.size, basis.size, cols, _adopt=True)


class HcgComplex(GroupIndexedComplex):
    """(k[G] (x) A (x) Abar^n) / (1 - T): the p = 0 sub-bicomplex."""

    def relations(self, n):
        T = self.ops.T(0, n)
        return coinvariant_relations(T.rows, [T])

    def label(self):
        return "group-extended twisted bicomplex"


class CoinvariantComplex(GroupIndexedComplex):
    """(k[G] (x) A (x) Abar^n) / G with the conjugation-diagonal action.

    The orbit relations absorb (1 - T): the T-twist on the stalk of g is
    the action of g itself.
    """

    def relations(self, n):
        ops = self.ops
        operators = [
            group_action_operator(ops, h, n) for h in range(self.group.order)
        ]
        return coinvariant_relations(self.bases[n].size, operators)

    def label(self):
        return "coinvariant bicomplex"


def hcG_bicomplex(algebra, group, max_degree):
    """Homology of the p = 0 sub-bicomplex (the HC^G theory)."""
    return HcgComplex(algebra, group, max_degree).total_homology()


def coinvariant_bicomplex(algebra, group, max_degree):
    """Homology of the coinvariant bicomplex (the model of HC(A x| G)
    that the stalk decomposition acts on; |G| invertible)."""
    return CoinvariantComplex(algebra, group, max_degree).total_homology()


# ---------------------------------------------------------------------
# conjugacy stalks and the comparison map
# ---------------------------------------------------------------------

class StalkComplex:
    """(A (x) Abar^n) / G^g for one conjugacy-class representative g.

    The centralizer acts diagonally; the operators are the g^{-1}-twisted
    b and B, descended.  The quotient absorbs (1 - T_{g^{-1}}) because g
    centralizes itself.
    """

    def __init__(self, algebra, group, rep, centralizer, max_degree):
        self.rep = rep
        self.centralizer = list(centralizer)
        self.max_degree = max_degree
        self.n_internal = k = max_degree + 1
        sigma = group.action[group.inverse[rep]]
        diag = {}
        self.pres = []
        for n in range(k + 1):
            ops = [
                twist_matrix(algebra, group.action[h], n, reduced=True)
                for h in self.centralizer
            ]
            dim = ops[0].rows if ops else algebra_tensor_basis(algebra, n + 1).asize
            self.pres.append(quotient_by(dim, coinvariant_relations(dim, ops)))
        b = [None]
        for n in range(1, k + 1):
            b.append(
                descend_map(
                    twisted_b(algebra, sigma, n, reduced=True),
                    self.pres[n], self.pres[n - 1], what=f"stalk b_{n}",
                )
            )
        B = []
        for n in range(k):
            B.append(
                descend_map(
                    twisted_B(algebra, sigma, n),
                    self.pres[n], self.pres[n + 1], what=f"stalk B_{n}",
                )
            )
        B.append(None)
        dims = [p.quotient_dim for p in self.pres]
        self.mixed = MixedComplex(dims, b, B, label=f"stalk over class of element {rep}")

    def total_homology(self):
        return homology(self.mixed.total(self.n_internal).chain)


class ConjugacyDecomposition:
    """Stalk complexes per conjugacy class plus the chain-level splitting
    of the coinvariant complex.

    The splitting sends the class of (h | m) to u_h(m) in the stalk of the
    class representative, where u_h conjugates h to the representative; it
    is checked to be a degreewise isomorphism and a chain map, which is
    the computational content of the orbit-module induction step.
    """

    def __init__(self, algebra, group, max_degree):
        self.algebra = algebra
        self.group = group
        self.max_degree = max_degree
        self.n_internal = k = max_degree + 1
        self.conj = conjugacy_data(group)
        self.coinv = CoinvariantComplex(algebra, group, max_degree)
        self.stalks = [
            StalkComplex(algebra, group, rep, cent, max_degree)
            for rep, cent in zip(self.conj.representatives, self.conj.centralizers)
        ]
        # u_h: first group element conjugating h to its class representative
        self.conjugator = []
        for h in range(group.order):
            rep = self.conj.representatives[self.conj.class_of[h]]
            u = next(
                u for u in range(group.order)
                if group.conjugate(u, h) == rep
            )
            self.conjugator.append(u)
        self.split = self._build_splitting()
        self._verify_chain_iso()

    def _sum_pres(self, n):
        return _sum_presentation([st.pres[n] for st in self.stalks])

    def _build_splitting(self):
        """Per degree: coinvariant quotient -> direct sum of stalk quotients."""
        group, ops = self.group, self.coinv.ops
        split = []
        for n in range(self.n_internal + 1):
            basis = self.coinv.bases[n]
            asize = basis.asize
            offsets = []
            off = 0
            for st in self.stalks:
                offsets.append(off)
                off += st.pres[n].ambient_dim
            cols = []
            for (h,) in basis.iter_group():
                cls = self.conj.class_of[h]
                u = self.conjugator[h]
                mat = ops.alg_twist(u, n)
                base = offsets[cls]
                for aidx in range(asize):
                    cols.append({base + r: v for r, v in mat._cols[aidx].items()})
            ambient = QMatrix(off, basis.size, cols, _adopt=True)
            split.append(
                descend_map(
                    ambient, self.coinv.pres[n], self._sum_pres(n),
                    what=f"class splitting at degree {n}",
                )
            )
        return split

    def _verify_chain_iso(self):
        for n in range(self.n_internal + 1):
            v = self.split[n]
            if v.rows != v.cols or rank(v) != v.rows:
                raise ComplexError(
                    "class splitting is not an isomorphism", location=f"degree {n}"
                )
        # chain map against b and B, blockwise over stalks
        for n in range(1, self.n_internal + 1):
            lhs = block_diag([st.mixed.b[n] for st in self.stalks]) @ self.split[n]
            rhs = self.split[n - 1] @ self.coinv.mixed.b[n]
            if lhs != rhs:
                raise ChainMapError(f"class splitting fails b at degree {n}")
        for n in range(self.n_internal):
            lhs = block_diag([st.mixed.B[n] for st in self.stalks]) @ self.split[n]
            rhs = self.split[n + 1] @ self.coinv.mixed.B[n]
            if lhs != rhs:
                raise ChainMapError(f"class splitting fails B at degree {n}")

    def stalk_homologies(self):
        return [st.total_homology() for st in self.stalks]

    def coinvariant_homology(self):
        return self.coinv.total_homology()


def conjugacy_decomposition(algebra, group, max_degree):
    return ConjugacyDecomposition(algebra, group, max_degree)


class TheoremMapReport:
    def __init__(self, degrees):
        self.degrees = degrees  # list of per-degree dicts

    def all_injective(self):
        return all(d["injective"] for d in self.degrees)

    def all_onto_summand(self):
        return all(d["onto_summand"] for d in self.degrees)


def theorem_map_f(algebra, group, g, max_degree):
    """The comparison map from the g-twisted theory into the crossed-product
    theory (coinvariant model), with per-degree rank certificates.

    Chain level: m -> class of (g^{-1} | m).  The induced map lands in the
    stalk of the class of g^{-1}; the report certifies injectivity and
    whether the image is exactly that summand of the decomposition.
    """
    k = max_degree + 1
    hk = HKBicomplex(algebra, group.action[g], max_degree)
    deco = ConjugacyDecomposition(algebra, group, max_degree)
    coinv = deco.coinv
    ginv = group.inverse[g]
    cls = deco.conj.class_of[ginv]

    # ambient embedding m -> (g^{-1} | m), descended through both quotients
    f_mixed = []
    for n in range(k + 1):
        basis = coinv.bases[n]
        asize = basis.asize
        base = ginv * asize
        amb = QMatrix(
            basis.size, asize, [{base + a: QONE} for a in range(asize)], _adopt=True
        )
        f_mixed.append(
            descend_map(amb, hk.presentations[n], coinv.pres[n], what=f"theorem map at degree {n}")
        )
    # chain map against b and B on the mixed complexes
    for n in range(1, k + 1):
        if coinv.mixed.b[n] @ f_mixed[n] != f_mixed[n - 1] @ hk.mixed.b[n]:
            raise ChainMapError(f"theorem map fails b at degree {n}")
    for n in range(k):
        if coinv.mixed.B[n] @ f_mixed[n] != f_mixed[n + 1] @ hk.mixed.B[n]:
            raise ChainMapError(f"theorem map fails B at degree {n}")

    src_tot = hk.mixed.total(k)
    dst_tot = coinv.mixed.total(k)
    f_tot = _total_map(f_mixed)
    srcH = homology(src_tot.chain)
    dstH = homology(dst_tot.chain)
    induced = induced_on_homology(f_tot, srcH, dstH, check=True)

    # composite into the distinguished stalk summand, assembled at the
    # mixed level where the stalk block is contiguous
    stalkH = homology(deco.stalks[cls].mixed.total(k).chain)
    comp_mixed = []
    for n in range(k + 1):
        whole = deco.split[n] @ f_mixed[n]
        pick_off = sum(st.pres[n].quotient_dim for st in deco.stalks[:cls])
        pick_dim = deco.stalks[cls].pres[n].quotient_dim
        proj_cols = []
        for j in range(whole.cols):
            col = {
                r - pick_off: v
                for r, v in whole._cols[j].items()
                if pick_off <= r < pick_off + pick_dim
            }
            proj_cols.append(col)
        comp_mixed.append(QMatrix(pick_dim, whole.cols, proj_cols, _adopt=True))
    stalk_induced = induced_on_homology(_total_map(comp_mixed), srcH, stalkH, check=True)

    degrees = []
    for n in range(max_degree + 1):
        m = induced[n]
        rk = rank(m)
        stalk_rk = rank(stalk_induced[n])
        degrees.append(
            {
                "degree": n,
                "dim_source": srcH.dims[n],
                "dim_target": dstH.dims[n],
                "dim_stalk": stalkH.dims[n],
                "rank": rk,
                "injective": rk == srcH.dims[n],
                "onto_summand": stalk_rk == stalkH.dims[n] and rk == stalk_rk,
            }
        )
    return TheoremMapReport(degrees)


def _total_map(per_degree):
    """Assemble blockwise maps C_m -> D_m into maps on total-complex degrees.

    The total degree n of a cyclic-type bicomplex is the sum of C_{n-2j}
    over ascending column index j; the same per-degree map applies on
    every column.
    """
    out = []
    top = len(per_degree) - 1
    for n in range(top + 1):
        mats = [per_degree[n - 2 * j] for j in range(n // 2 + 1)]
        out.append(block_diag(mats))
    return out


# ---------------------------------------------------------------------
# the group-indexed Connes complex
# ---------------------------------------------------------------------

def lambda_cyclic_operator(algebra, group, n):
    """Signed cyclic rotation t on k[G] (x) A^{(n+1)} (full slots):

    t(g | a_0, ..., a_n) = (-1)^n (g | g^{-1}(a_n), a_0, ..., a_{n-1}).
    Its (n+1)-st power is the diagonal g^{-1}-twist; the sign makes b
    descend to the (1 - t)-quotient.
    """
    basis = tensor_index(group, algebra, 0, n, reduced_flags=(False,) * (n + 1))
    sign = QONE if n % 2 == 0 else -QONE
    cols = []
    for (g0,) in basis.iter_group():
        inv_images = [
            group.action[group.inverse[g0]].image_of_basis(i)
            for i in range(algebra.dim)
        ]
        base = g0 * basis.asize
        for aidx in range(basis.asize):
            a = basis.decode_algebra(aidx)
            col = {}
            for m, w in inv_images[a[n]].items():
                tgt = (m,) + a[:n]
                col[base + basis.encode_algebra(tgt)] = sign * w
            cols.append(col)
    return QMatrix(basis.size, basis.size, cols, _adopt=True)


class LambdaComplex:
    """(k[G] (x) A^{(n+1)}) / (1 - t) [optionally / G], with the stalkwise
    twisted boundary.  Computes the crossed-product cyclic homology when
    the rationals are in the ground ring and coinvariants are enabled.

    With reduced=True the unit-stalk tensors (e | 1, ..., 1) -- the image
    of the ground field's own complex -- are divided out as well, giving
    the cyclic theory reduced relative to k.
    """

    def __init__(self, algebra, group, max_degree, g_coinvariants=True, reduced=False):
        self.algebra = algebra
        self.group = group
        self.max_degree = max_degree
        self.g_coinvariants = g_coinvariants
        self.reduced = reduced
        self.n_internal = k = max_degree + 1
        r = group.order
        self.bases = [
            tensor_index(group, algebra, 0, n, reduced_flags=(False,) * (n + 1))
            for n in range(k + 1)
        ]
        self.pres = []
        for n in range(k + 1):
            basis = self.bases[n]
            size = basis.size
            ops = [lambda_cyclic_operator(algebra, group, n)]
            if g_coinvariants:
                ops.extend(
                    _full_group_action_operator(algebra, group, h, n)
                    for h in range(r)
                )
            rels = coinvariant_relations(size, ops)
            if reduced:
                unit_idx = group.identity_index * basis.asize + basis.encode_algebra(
                    (0,) * (n + 1)
                )
                rels = rels.hstack(QMatrix(size, 1, [{unit_idx: QONE}], _adopt=True))
            self.pres.append(quotient_by(size, rels))
        b = [None]
        for n in range(1, k + 1):
            raw = _full_stalkwise_b(algebra, group, n)
            b.append(descend_map(raw, self.pres[n], self.pres[n - 1], what=f"lambda b_{n}"))
        dims = [p.quotient_dim for p in self.pres]
        self.chain = ChainComplexQ(dims, b)

    def homology(self):
        return homology(self.chain)


def _full_group_action_operator(algebra, group, h, n):
    """h acting on k[G] (x) A^{(n+1)} (full slots): conjugation and diagonal."""
    basis = tensor_index(group, algebra, 0, n, reduced_flags=(False,) * (n + 1))
    alg = twist_matrix(algebra, group.action[h], n, reduced=False)
    cols = []
    for (g0,) in basis.iter_group():
        tgt = group.conjugate(h, g0)
        base = tgt * basis.asize
        for aidx in range(basis.asize):
            cols.append({base + r: v for r, v in alg._cols[aidx].items()})
    return QMatrix(basis.size, basis.size, cols, _adopt=True)


def _full_stalkwise_b(algebra, group, n):
    """Stalkwise twisted boundary on k[G] (x) A^{(n+1)} with full slots."""
    mats = []
    for g0 in range(group.order):
        sigma = group.action[group.inverse[g0]]
        mats.append(twisted_b(algebra, sigma, n, reduced=False))
    return block_diag(mats)


def connes_lambda_complex(algebra, group, max_degree, g_coinvariants=True):
    return LambdaComplex(algebra, group, max_degree, g_coinvariants).homology()


# ---------------------------------------------------------------------
# the u-parameter complex of the coefficients construction
# ---------------------------------------------------------------------

class UComplexReport:
    def __init__(self, dims_u, dims_total, label):
        self.dims_u = dims_u
        self.dims_total = dims_total
        self.label = label

    @property
    def equal(self):
        return self.dims_u == self.dims_total


def u_complex_equivalence(mixed, label=""):
    """Build the u-truncated complex of a mixed complex and compare its
    homology with the bicomplex total-complex route.

    Degree n of the u-complex is sum_j C_{n-2j} u^{-j}; the boundary is
    b + uB, with u-powers above zero discarded.  The bicomplex route goes
    through the generic totalization with its own block bookkeeping.
    """
    k = mixed.top
    dims_per_degree = []
    offsets_per_degree = []
    for n in range(k + 1):
        offs = {}
        off = 0
        for j in range(n // 2 + 1):
            offs[j] = off
            off += mixed.dims[n - 2 * j]
        offsets_per_degree.append(offs)
        dims_per_degree.append(off)
    diffs = [None]
    for n in range(1, k + 1):
        src_offs = offsets_per_degree[n]
        dst_offs = offsets_per_degree[n - 1]
        cols = [dict() for _ in range(dims_per_degree[n])]
        for j, soff in src_offs.items():
            m = n - 2 * j
            if m >= 1:
                bm = mixed.b[m]
                doff = dst_offs[j]
                for c in range(bm.cols):
                    tgt = cols[soff + c]
                    for r, v in bm._cols[c].items():
                        tgt[doff + r] = v
            # u B raises the u-power: u^{-j} -> u^{-j+1}, dropped at j = 0
            if j >= 1 and mixed.B[m] is not None:
                Bm = mixed.B[m]
                doff = dst_offs[j - 1]
                for c in range(Bm.cols):
                    tgt = cols[soff + c]
                    for r, v in Bm._cols[c].items():
                        key = doff + r
                        nv = tgt.get(key)
                        nv = v if nv is None else nv + v
                        if nv:
                            tgt[key] = nv
                        elif key in tgt:
                            del tgt[key]
        diffs.append(QMatrix(dims_per_degree[n - 1], dims_per_degree[n], cols, _adopt=True))
    u_chain = ChainComplexQ(dims_per_degree, diffs)
    dims_u = homology(u_chain).dims
    dims_total = homology(mixed.total(k).chain).dims
    return UComplexReport(dims_u, dims_total, label)

