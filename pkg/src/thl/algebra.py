"""Finite-dimensional Q-algebras, automorphism groups, crossed products,
and enumeration of the tensor-module bases everything else is built on.
"""

from .errors import ActionError, AlgebraError, ReducedBasisError
from .rational import Q, QONE
from .sparse import QMatrix, rank


class Algebra:
    """Unital associative algebra given by structure constants.

    mult[i][j] is the sparse coordinate vector {k: c} of e_i * e_j.
    The unit is a coordinate vector; normalized (reduced) tensor modules
    additionally require it to be the basis vector e_0.
    """

    def __init__(self, dim, basis_names, unit, mult):
        self.dim = dim
        self.basis_names = list(basis_names)
        self.unit = {k: Q(v) for k, v in unit.items() if v}
        self.mult = [
            [{k: Q(v) for k, v in cell.items() if v} for cell in row] for row in mult
        ]

    @property
    def unit_is_basis0(self):
        return self.unit == {0: QONE}

    def multiply(self, a, b):
        """Product of two sparse coordinate vectors."""
        out = {}
        for i, va in a.items():
            row = self.mult[i]
            for j, vb in b.items():
                c = va * vb
                for k, w in row[j].items():
                    nv = out.get(k)
                    nv = c * w if nv is None else nv + c * w
                    if nv:
                        out[k] = nv
                    elif k in out:
                        del out[k]
        return out

    def basis_product(self, i, j):
        return self.mult[i][j]

    def label(self, i):
        return self.basis_names[i]

    def __repr__(self):
        return f"Algebra(dim={self.dim}, basis={self.basis_names})"


def validate_algebra(algebra):
    """Associativity and unit laws, checked exactly over every basis triple."""
    d = algebra.dim
    for i in range(d):
        u_e = algebra.multiply(algebra.unit, {i: QONE})
        e_u = algebra.multiply({i: QONE}, algebra.unit)
        if u_e != {i: QONE} or e_u != {i: QONE}:
            raise AlgebraError(
                f"unit law fails on basis vector {algebra.label(i)}"
            )
    for i in range(d):
        for j in range(d):
            ij = algebra.basis_product(i, j)
            for k in range(d):
                left = algebra.multiply(ij, {k: QONE})
                right = algebra.multiply({i: QONE}, algebra.basis_product(j, k))
                if left != right:
                    raise AlgebraError(
                        "associativity fails on triple "
                        f"({algebra.label(i)}, {algebra.label(j)}, {algebra.label(k)})"
                    )


class AlgebraMap:
    """Algebra automorphism as a dim x dim matrix (columns = images)."""

    def __init__(self, matrix):
        self.matrix = matrix
        self.dim = matrix.rows

    def image_of_basis(self, i):
        return self.matrix._cols[i]

    def apply(self, vec):
        return self.matrix.apply(vec)

    @staticmethod
    def identity(dim):
        return AlgebraMap(QMatrix.identity(dim))

    def __eq__(self, other):
        return isinstance(other, AlgebraMap) and self.matrix == other.matrix


def validate_automorphism(algebra, amap, name="g"):
    """Unit preservation, multiplicativity, invertibility."""
    if amap.matrix.rows != algebra.dim or amap.matrix.cols != algebra.dim:
        raise ActionError(f"{name}: matrix has wrong shape")
    if amap.apply(algebra.unit) != algebra.unit:
        raise ActionError(f"{name}: does not fix the unit")
    for i in range(algebra.dim):
        gi = amap.image_of_basis(i)
        for j in range(algebra.dim):
            lhs = amap.apply(algebra.basis_product(i, j))
            rhs = algebra.multiply(gi, amap.image_of_basis(j))
            if lhs != rhs:
                raise ActionError(
                    f"{name}: not multiplicative on "
                    f"({algebra.label(i)}, {algebra.label(j)})"
                )
    if rank(amap.matrix) != algebra.dim:
        raise ActionError(f"{name}: matrix is singular")


class FiniteGroupAction:
    """Finite group (multiplication table) acting on an algebra.

    mult_table[i][j] is the index of g_i g_j.  action[i] is the
    automorphism attached to g_i.
    """

    def __init__(self, element_names, mult_table, action):
        self.order = len(element_names)
        self.element_names = list(element_names)
        self.mult_table = [list(row) for row in mult_table]
        self.action = list(action)
        self.identity_index = self._find_identity()
        self.inverse = self._find_inverses()

    def _find_identity(self):
        for e in range(self.order):
            if all(
                self.mult_table[e][x] == x and self.mult_table[x][e] == x
                for x in range(self.order)
            ):
                return e
        raise ActionError("multiplication table has no identity element")

    def _find_inverses(self):
        inv = [None] * self.order
        e = self.identity_index
        for x in range(self.order):
            for y in range(self.order):
                if self.mult_table[x][y] == e and self.mult_table[y][x] == e:
                    inv[x] = y
                    break
            if inv[x] is None:
                raise ActionError(f"element {self.element_names[x]} has no inverse")
        return inv

    def mul(self, x, y):
        return self.mult_table[x][y]

    def product(self, indices):
        acc = self.identity_index
        for x in indices:
            acc = self.mult_table[acc][x]
        return acc

    def conjugate(self, h, x):
        """h x h^-1."""
        return self.mul(self.mul(h, x), self.inverse[h])

    def name(self, x):
        return self.element_names[x]

    def index_of(self, name):
        return self.element_names.index(name)


def validate_action(algebra, group):
    """Group laws, per-element automorphisms, and the homomorphism property."""
    r = group.order
    for x in range(r):
        for y in range(r):
            for z in range(r):
                if group.mul(group.mul(x, y), z) != group.mul(x, group.mul(y, z)):
                    raise ActionError(
                        "group table is not associative on "
                        f"({group.name(x)}, {group.name(y)}, {group.name(z)})"
                    )
    for x in range(r):
        validate_automorphism(algebra, group.action[x], name=group.name(x))
    ident = AlgebraMap.identity(algebra.dim)
    if group.action[group.identity_index] != ident:
        raise ActionError("identity element does not act as the identity map")
    for x in range(r):
        for y in range(r):
            comp = group.action[x].matrix @ group.action[y].matrix
            if comp != group.action[group.mul(x, y)].matrix:
                raise ActionError(
                    f"action is not a homomorphism on ({group.name(x)}, {group.name(y)})"
                )


def trivial_group(algebra):
    return FiniteGroupAction(["e"], [[0]], [AlgebraMap.identity(algebra.dim)])


def crossed_product(algebra, group):
    """The crossed product on basis (e_i x g), dim = dim(A) * |G|.

    Product convention: (a x g)(b x h) = a g(b) x gh, extended bilinearly.
    The output passes validate_algebra, which machine-checks associativity
    of the convention on every instance.
    """
    d, r = algebra.dim, group.order
    names = [
        f"{algebra.label(i)}|{group.name(j)}" for i in range(d) for j in range(r)
    ]

    def pair(i, j):
        return i * r + j

    mult = [[{} for _ in range(d * r)] for _ in range(d * r)]
    for i in range(d):
        for gj in range(r):
            act = group.action[gj]
            for k in range(d):
                gk = act.image_of_basis(k)
                prod = algebra.multiply({i: QONE}, gk)
                for hj in range(r):
                    tgt_g = group.mul(gj, hj)
                    cell = {pair(m, tgt_g): v for m, v in prod.items()}
                    mult[pair(i, gj)][pair(k, hj)] = cell
    unit = {pair(i, group.identity_index): v for i, v in algebra.unit.items()}
    out = Algebra(d * r, names, unit, mult)
    validate_algebra(out)
    return out


class ConjugacyData:
    """Conjugacy classes and centralizers of a finite group."""

    def __init__(self, classes, class_of, centralizers):
        self.classes = classes              # list of sorted element lists
        self.class_of = class_of            # element index -> class index
        self.centralizers = centralizers    # per class: sorted subgroup of the rep
        self.representatives = [c[0] for c in classes]


def conjugacy_data(group):
    r = group.order
    seen = [False] * r
    classes = []
    class_of = [None] * r
    for x in range(r):
        if seen[x]:
            continue
        orbit = sorted({group.conjugate(h, x) for h in range(r)})
        for y in orbit:
            seen[y] = True
            class_of[y] = len(classes)
        classes.append(orbit)
    centralizers = []
    for cls in classes:
        g = cls[0]
        cent = [h for h in range(r) if group.mul(h, g) == group.mul(g, h)]
        centralizers.append(cent)
        if len(cent) * len(cls) != r:
            raise ActionError("orbit-stabilizer mismatch in conjugacy data")
    return ConjugacyData(classes, class_of, centralizers)


class TensorBasis:
    """Enumerated basis of k[G^s] (x) A (x) slots, some algebra slots reduced.

    group_slots may be zero (pure algebra tensor modules).  Reduced slots
    range over the basis-aligned complement of the unit, which must then be
    basis vector 0; their values are stored as actual basis indices >= 1.
    Enumeration is lexicographic, group tuple major.
    """

    def __init__(self, group_order, algebra_dim, group_slots, reduced_flags, unit_is_basis0):
        self.r = group_order
        self.d = algebra_dim
        self.group_slots = group_slots
        self.reduced = tuple(reduced_flags)
        if any(self.reduced) and not unit_is_basis0:
            raise ReducedBasisError(
                "reduced tensor slots need the unit to be basis vector 0"
            )
        self.algebra_slots = len(self.reduced)
        self.slot_sizes = [self.d - 1 if f else self.d for f in self.reduced]
        self.asize = 1
        for s in self.slot_sizes:
            self.asize *= s
        self.gsize = self.r ** group_slots
        self.size = self.gsize * self.asize

    def encode_algebra(self, atuple):
        idx = 0
        for val, flag, size in zip(atuple, self.reduced, self.slot_sizes):
            digit = val - 1 if flag else val
            idx = idx * size + digit
        return idx

    def decode_algebra(self, aidx):
        vals = []
        for flag, size in zip(reversed(self.reduced), reversed(self.slot_sizes)):
            digit = aidx % size
            aidx //= size
            vals.append(digit + 1 if flag else digit)
        vals.reverse()
        return tuple(vals)

    def encode_group(self, gtuple):
        idx = 0
        for g in gtuple:
            idx = idx * self.r + g
        return idx

    def decode_group(self, gidx):
        vals = []
        for _ in range(self.group_slots):
            vals.append(gidx % self.r)
            gidx //= self.r
        vals.reverse()
        return tuple(vals)

    def encode(self, gtuple, atuple):
        return self.encode_group(gtuple) * self.asize + self.encode_algebra(atuple)

    def decode(self, idx):
        return self.decode_group(idx // self.asize), self.decode_algebra(idx % self.asize)

    def label(self, idx, group=None, algebra=None):
        gtuple, atuple = self.decode(idx)
        gpart = ",".join(group.name(g) for g in gtuple) if group else ",".join(map(str, gtuple))
        apart = ",".join(algebra.label(a) for a in atuple) if algebra else ",".join(map(str, atuple))
        return f"({gpart}|{apart})" if self.group_slots else f"({apart})"

    def iter_group(self):
        """Group tuples in enumeration order."""
        def rec(prefix, k):
            if k == 0:
                yield tuple(prefix)
                return
            for g in range(self.r):
                prefix.append(g)
                yield from rec(prefix, k - 1)
                prefix.pop()
        yield from rec([], self.group_slots)


def tensor_index(group, algebra, p, q, reduced_flags=None):
    """Basis of k[G^{p+1}] (x) A^{(q+1)} with the given per-slot reduction."""
    if reduced_flags is None:
        reduced_flags = (False,) + (True,) * q
    if len(reduced_flags) != q + 1:
        raise ValueError("need one reduced flag per algebra slot")
    return TensorBasis(
        group.order, algebra.dim, p + 1, reduced_flags, algebra.unit_is_basis0
    )


def algebra_tensor_basis(algebra, slots, reduced_flags=None):
    """Pure algebra tensor basis A^{(slots)} (group_slots = 0)."""
    if reduced_flags is None:
        reduced_flags = (False,) + (True,) * (slots - 1)
    return TensorBasis(1, algebra.dim, 0, reduced_flags, algebra.unit_is_basis0)
