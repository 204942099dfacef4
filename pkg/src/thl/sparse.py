"""Sparse exact matrices over Q and the elimination routines behind
ranks, kernels and canonical echelon forms.

Storage is column-major: column j is a dict {row: nonzero rational}.
Matrices are treated as immutable once built; every routine that needs to
mutate works on copies.

Two elimination strategies coexist on purpose:

* ``rank`` uses a structure-guided pivot order (pendant rows/columns
  first, then a Markowitz-style minimum-fill choice with lowest-index tie
  breaks).  Rank is invariant under pivot order, so this is safe, fully
  deterministic, and orders of magnitude faster on the face-map matrices
  this library produces.
* everything that exposes a *basis* (``rref``, ``kernel_basis``,
  ``image_pivot_cols``, quotient presentations) goes through the reduced
  row echelon form, which is canonical -- unique for the row space -- so
  reported bases cannot depend on elimination internals.
"""

from .rational import Q, QONE


class QMatrix:
    """Sparse matrix over Q, column-major dict-of-dicts."""

    __slots__ = ("rows", "cols", "_cols")

    def __init__(self, rows, cols, cols_data=None, _adopt=False):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        if cols_data is None:
            self._cols = [dict() for _ in range(cols)]
        elif _adopt:
            self._cols = cols_data
        else:
            self._cols = [dict(c) for c in cols_data]

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(rows, cols):
        return QMatrix(rows, cols)

    @staticmethod
    def identity(n):
        return QMatrix(n, n, [{i: QONE} for i in range(n)], _adopt=True)

    @staticmethod
    def from_dense(entries, rows=None, cols=None):
        """Build from a row-major list of lists of ints/rationals."""
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        data = [dict() for _ in range(cols)]
        for i, row in enumerate(entries):
            for j, v in enumerate(row):
                if v:
                    data[j][i] = Q(v)
        return QMatrix(rows, cols, data, _adopt=True)

    @staticmethod
    def from_columns(rows, columns):
        """Build from an iterable of {row: value} dicts (values coerced)."""
        data = []
        for col in columns:
            data.append({r: Q(v) for r, v in col.items() if v})
        return QMatrix(rows, len(data), data, _adopt=True)

    # -- accessors ---------------------------------------------------

    def column(self, j):
        return dict(self._cols[j])

    def entry(self, i, j):
        return self._cols[j].get(i, Q(0))

    def nnz(self):
        return sum(len(c) for c in self._cols)

    def is_zero(self):
        return all(not c for c in self._cols)

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._cols == other._cols

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    def to_dense(self):
        out = [[Q(0)] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self._cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        self._shape_check(other)
        data = []
        for a, b in zip(self._cols, other._cols):
            col = dict(a)
            for r, v in b.items():
                nv = col.get(r)
                nv = v if nv is None else nv + v
                if nv:
                    col[r] = nv
                elif r in col:
                    del col[r]
            data.append(col)
        return QMatrix(self.rows, self.cols, data, _adopt=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return QMatrix(
            self.rows, self.cols, [{r: -v for r, v in c.items()} for c in self._cols], _adopt=True
        )

    def scale(self, scalar):
        s = Q(scalar)
        if not s:
            return QMatrix.zero(self.rows, self.cols)
        return QMatrix(
            self.rows, self.cols, [{r: s * v for r, v in c.items()} for c in self._cols], _adopt=True
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        mine = self._cols
        data = []
        for col in other._cols:
            out = {}
            for k, v in col.items():
                for r, w in mine[k].items():
                    nv = out.get(r)
                    nv = v * w if nv is None else nv + v * w
                    if nv:
                        out[r] = nv
                    elif r in out:
                        del out[r]
            data.append(out)
        return QMatrix(self.rows, other.cols, data, _adopt=True)

    def apply(self, vec):
        """Matrix times a sparse vector {index: value} -> sparse vector."""
        out = {}
        for k, v in vec.items():
            for r, w in self._cols[k].items():
                nv = out.get(r)
                nv = v * w if nv is None else nv + v * w
                if nv:
                    out[r] = nv
                elif r in out:
                    del out[r]
        return out

    def transpose(self):
        data = [dict() for _ in range(self.rows)]
        for j, col in enumerate(self._cols):
            for i, v in col.items():
                data[i][j] = v
        return QMatrix(self.cols, self.rows, data, _adopt=True)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return QMatrix(
            self.rows,
            self.cols + other.cols,
            [dict(c) for c in self._cols] + [dict(c) for c in other._cols],
            _adopt=True,
        )

    def select_columns(self, indices):
        return QMatrix(self.rows, len(indices), [dict(self._cols[j]) for j in indices], _adopt=True)

    def _shape_check(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(
                f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )


def block_matrix(blocks, row_dims, col_dims):
    """Assemble from a {(bi, bj): QMatrix} dict of blocks.

    row_dims/col_dims give the block sizes in order; missing blocks are zero.
    """
    row_off = [0]
    for d in row_dims:
        row_off.append(row_off[-1] + d)
    col_off = [0]
    for d in col_dims:
        col_off.append(col_off[-1] + d)
    data = [dict() for _ in range(col_off[-1])]
    for (bi, bj), m in blocks.items():
        if m.rows != row_dims[bi] or m.cols != col_dims[bj]:
            raise ValueError(f"block ({bi},{bj}) has wrong shape")
        ro, co = row_off[bi], col_off[bj]
        for j, col in enumerate(m._cols):
            tgt = data[co + j]
            for i, v in col.items():
                tgt[ro + i] = v
    return QMatrix(row_off[-1], col_off[-1], data, _adopt=True)


def block_diag(mats):
    blocks = {(k, k): m for k, m in enumerate(mats)}
    return block_matrix(blocks, [m.rows for m in mats], [m.cols for m in mats])


# ---------------------------------------------------------------------
# rank: structure-guided sparse elimination
# ---------------------------------------------------------------------

def rank(matrix):
    """Exact rank over Q.

    Pendant (single-entry) rows and columns pivot with zero fill-in and are
    cleared first; the remainder is eliminated with a minimum-degree pivot
    choice.  Deterministic; the value is independent of pivot order.
    """
    cols = [dict(c) for c in matrix._cols]
    live_cols = set(j for j, c in enumerate(cols) if c)
    row_cols = {}
    for j in live_cols:
        for r in cols[j]:
            row_cols.setdefault(r, set()).add(j)

    rk = 0

    def kill_col(j):
        for r in cols[j]:
            s = row_cols.get(r)
            if s is not None:
                s.discard(j)
                if not s:
                    del row_cols[r]
        cols[j] = None
        live_cols.discard(j)

    def eliminate(r, c):
        """Pivot at (r, c): clear row r from the other columns, drop row+col."""
        nonlocal rk
        piv_col = cols[c]
        piv = piv_col[r]
        for j in list(row_cols[r]):
            if j == c:
                continue
            col = cols[j]
            f = col[r] / piv
            del col[r]
            for rr, vv in piv_col.items():
                if rr == r:
                    continue
                nv = col.get(rr)
                nv = -f * vv if nv is None else nv - f * vv
                if nv:
                    if rr not in col:
                        row_cols.setdefault(rr, set()).add(j)
                    col[rr] = nv
                else:
                    if rr in col:
                        del col[rr]
                        s = row_cols.get(rr)
                        if s is not None:
                            s.discard(j)
                            if not s:
                                del row_cols[rr]
            if not col:
                live_cols.discard(j)
                cols[j] = None
        # pivot row now lives only in the pivot column
        del row_cols[r]
        for rr in piv_col:
            if rr == r:
                continue
            s = row_cols.get(rr)
            if s is not None:
                s.discard(c)
                if not s:
                    del row_cols[rr]
        cols[c] = None
        live_cols.discard(c)
        rk += 1

    while live_cols:
        # pendant pass: single-entry columns, then single-entry rows
        progressed = True
        while progressed:
            progressed = False
            singles = sorted(j for j in live_cols if len(cols[j]) == 1)
            for j in singles:
                if cols[j] is not None and len(cols[j]) == 1:
                    (r,) = cols[j]
                    eliminate(r, j)
                    progressed = True
            single_rows = sorted(r for r, s in row_cols.items() if len(s) == 1)
            for r in single_rows:
                s = row_cols.get(r)
                if s is not None and len(s) == 1:
                    (j,) = s
                    eliminate(r, j)
                    progressed = True
        if not live_cols:
            break
        # Markowitz-style: lightest live column, then its lightest row
        best_j = min(live_cols, key=lambda j: (len(cols[j]), j))
        col = cols[best_j]
        best_r = min(col, key=lambda r: (len(row_cols[r]), r))
        eliminate(best_r, best_j)

    return rk


def nullity(matrix):
    return matrix.cols - rank(matrix)


# ---------------------------------------------------------------------
# canonical reduced row echelon form and its consumers
# ---------------------------------------------------------------------

def rref(matrix):
    """Canonical reduced row echelon form.

    Returns (pivot_cols, rows) where rows is a list of {col: value} dicts,
    one per pivot, with a 1 in its pivot column and zeros in every other
    pivot column.  The RREF is unique for the row space, so the output is
    independent of elimination order.

    Rows are bucketed by their leading column, which keeps the pivot
    search linear in the actual reduction work: when column c is reached,
    every unprocessed row with an entry in c has leading column exactly c.
    """
    buckets = {}
    for j, col in enumerate(matrix._cols):
        for i, v in col.items():
            buckets.setdefault(i, {})[j] = v
    rows_by_lead = {}
    for r in buckets.values():
        lead = min(r)
        rows_by_lead.setdefault(lead, []).append(r)
    pivot_rows = []   # list of (col, row-dict), ascending pivot col
    pivot_cols = []
    for col in range(matrix.cols):
        bucket = rows_by_lead.pop(col, None)
        if not bucket:
            continue
        prow = bucket[0]
        piv = prow[col]
        if piv != QONE:
            prow = {c: v / piv for c, v in prow.items()}
        for r in bucket[1:]:
            f = r[col]
            for c, v in prow.items():
                nv = r.get(c)
                nv = -f * v if nv is None else nv - f * v
                if nv:
                    r[c] = nv
                elif c in r:
                    del r[c]
            if r:
                rows_by_lead.setdefault(min(r), []).append(r)
        # full reduction: clear this column from finished pivot rows
        for _, fr in pivot_rows:
            f = fr.get(col)
            if f is None:
                continue
            for c, v in prow.items():
                nv = fr.get(c)
                nv = -f * v if nv is None else nv - f * v
                if nv:
                    fr[c] = nv
                elif c in fr:
                    del fr[c]
        pivot_rows.append((col, prow))
        pivot_cols.append(col)
    return pivot_cols, [r for _, r in pivot_rows]


def kernel_basis(matrix):
    """Canonical basis of ker(matrix) as the columns of a QMatrix."""
    pivot_cols, rows = rref(matrix)
    pivot_set = set(pivot_cols)
    free = [j for j in range(matrix.cols) if j not in pivot_set]
    data = []
    for f in free:
        vec = {f: QONE}
        for pc, r in zip(pivot_cols, rows):
            v = r.get(f)
            if v:
                vec[pc] = -v
        data.append(vec)
    return QMatrix(matrix.cols, len(free), data, _adopt=True)


def image_pivot_cols(matrix):
    """Indices of the canonical maximal independent subset of columns."""
    pivot_cols, _ = rref(matrix)
    return pivot_cols


def image_basis(matrix):
    """Canonical basis of the column space: the pivot columns themselves."""
    return matrix.select_columns(image_pivot_cols(matrix))


def solve_general(matrix, rhs):
    """A particular solution X of matrix @ X = rhs, or None if inconsistent.

    Free variables are set to zero, so the solution is canonical (it only
    depends on the RREF, which is unique).
    """
    if matrix.rows != rhs.rows:
        raise ValueError("row mismatch in solve_general")
    aug = matrix.hstack(rhs)
    pivot_cols, rows = rref(aug)
    na = matrix.cols
    for pc in pivot_cols:
        if pc >= na:
            return None
    data = []
    for t in range(rhs.cols):
        col = {}
        for pc, r in zip(pivot_cols, rows):
            v = r.get(na + t)
            if v:
                col[pc] = v
        data.append(col)
    return QMatrix(na, rhs.cols, data, _adopt=True)


def solve_in_span(basis, targets):
    """Coordinates of each target column in span(basis columns).

    basis must have independent columns.  Returns a (basis.cols x
    targets.cols) coordinate matrix X with basis @ X == targets, or raises
    ValueError if some target leaves the span.
    """
    if basis.rows != targets.rows:
        raise ValueError("row mismatch in solve_in_span")
    aug = basis.hstack(targets)
    pivot_cols, rows = rref(aug)
    nb = basis.cols
    for pc in pivot_cols:
        if pc >= nb:
            raise ValueError("target column outside span")
    if len(pivot_cols) != nb:
        raise ValueError("basis columns are dependent")
    data = []
    for t in range(targets.cols):
        col = {}
        for k, (pc, r) in enumerate(zip(pivot_cols, rows)):
            v = r.get(nb + t)
            if v:
                col[k] = v
        data.append(col)
    return QMatrix(nb, targets.cols, data, _adopt=True)
