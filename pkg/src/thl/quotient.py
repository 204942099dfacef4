"""Quotient presentations of free Q-modules and maps induced on quotients.

A quotient V/W is presented by the canonical reduced column echelon form
of the relation matrix whose columns span W.  The complement spanned by
the non-pivot coordinates serves as the quotient's coordinate space, which
makes ``projection . section = id`` hold by construction and keeps every
presentation deterministic.
"""

from .errors import WellDefinednessError
from .rational import QONE
from .sparse import QMatrix, rref


class QuotientPresentation:
    """V/W with explicit projection and section matrices.

    Attributes:
        ambient_dim: dim V
        quotient_dim: dim V/W
        relation_basis: canonical basis of W (columns)
        projection: (quotient_dim x ambient_dim), kills W
        section: (ambient_dim x quotient_dim), projection @ section = id
        pivot_rows / free_rows: ambient coordinates eliminated / kept
    """

    __slots__ = (
        "ambient_dim",
        "quotient_dim",
        "relation_basis",
        "projection",
        "section",
        "pivot_rows",
        "free_rows",
    )

    def __init__(self, ambient_dim, relation_basis, projection, section, pivot_rows, free_rows):
        self.ambient_dim = ambient_dim
        self.quotient_dim = len(free_rows)
        self.relation_basis = relation_basis
        self.projection = projection
        self.section = section
        self.pivot_rows = pivot_rows
        self.free_rows = free_rows

    def __repr__(self):
        return f"QuotientPresentation({self.ambient_dim} -> {self.quotient_dim})"


def quotient_by(ambient_dim, relations):
    """Present the quotient of Q^ambient_dim by the column span of relations."""
    if relations.rows != ambient_dim:
        raise ValueError("relation matrix has wrong number of rows")
    # canonical reduced column echelon of the relation span
    pivot_rows, ech_rows = rref(relations.transpose())
    # echelon column k: pivot 1 at row pivot_rows[k], supported off other pivots
    ech_cols = []
    for r in ech_rows:
        ech_cols.append({c: v for c, v in r.items()})
    pivot_set = set(pivot_rows)
    pivot_pos = {r: k for k, r in enumerate(pivot_rows)}
    free_rows = [i for i in range(ambient_dim) if i not in pivot_set]
    free_pos = {r: k for k, r in enumerate(free_rows)}

    relation_basis = QMatrix(ambient_dim, len(ech_cols), ech_cols)

    # projection of e_j: subtract echelon columns to clear pivot rows, keep free rows
    proj_cols = []
    for j in range(ambient_dim):
        if j in pivot_set:
            k = pivot_pos[j]
            col = {}
            for r, v in ech_cols[k].items():
                if r in free_pos:
                    col[free_pos[r]] = -v
            proj_cols.append(col)
        else:
            proj_cols.append({free_pos[j]: QONE})
    projection = QMatrix(len(free_rows), ambient_dim, proj_cols, _adopt=True)

    section = QMatrix(
        ambient_dim, len(free_rows), [{r: QONE} for r in free_rows], _adopt=True
    )
    return QuotientPresentation(
        ambient_dim, relation_basis, projection, section, list(pivot_rows), free_rows
    )


def trivial_quotient(ambient_dim):
    """The identity presentation (no relations)."""
    return quotient_by(ambient_dim, QMatrix.zero(ambient_dim, 0))


def descend_map(f, src, dst, what="map"):
    """Induce f on quotient coordinates, checking well-definedness exactly.

    f maps src ambient to dst ambient.  Requires f(src relations) to land in
    the span of dst relations; otherwise raises WellDefinednessError naming
    the first offending relation column.
    """
    if f.cols != src.ambient_dim or f.rows != dst.ambient_dim:
        raise ValueError("map shape does not match the presentations")
    moved = dst.projection @ (f @ src.relation_basis)
    if not moved.is_zero():
        for j in range(moved.cols):
            if moved._cols[j]:
                raise WellDefinednessError(
                    f"{what} does not descend to the quotient",
                    location=f"relation column {j}",
                )
    return (dst.projection @ f) @ src.section


def coinvariant_relations(dim, operators):
    """Relation columns {m - op(m)} for every basis m and every operator.

    operators: list of (dim x dim) QMatrix.  Used for group coinvariants,
    (1-T) quotients, and friends.
    """
    cols = []
    for op in operators:
        for j in range(dim):
            col = {r: -v for r, v in op._cols[j].items()}
            d = col.get(j)
            d = QONE if d is None else d + QONE
            if d:
                col[j] = d
            elif j in col:
                del col[j]
            cols.append(col)
    return QMatrix(dim, len(cols), cols, _adopt=True)
