"""Chain complexes over Q, bicomplex totalization, homology, and maps
induced on homology.

Truncation contract: a complex built through internal degree K has
trustworthy homology through K-1 ("valid_through"), because degree-n
homology needs the degree-(n+1) differential.
"""

from .errors import ChainMapError, ComplexError
from .sparse import (
    QMatrix,
    block_matrix,
    image_basis,
    image_pivot_cols,
    kernel_basis,
    rank,
    solve_in_span,
)


class ChainComplexQ:
    """Nonnegatively graded complex with differentials d[n]: C_n -> C_{n-1}.

    d[0] is absent (stored as None).  d.d = 0 is checked exactly at
    construction.
    """

    def __init__(self, dims, differentials, check=True):
        self.dims = list(dims)
        self.top = len(self.dims) - 1
        self.d = [None] * (self.top + 1)
        for n, m in enumerate(differentials):
            if m is None:
                continue
            self.d[n] = m
        for n in range(1, self.top + 1):
            m = self.d[n]
            if m is None:
                raise ComplexError(f"missing differential d_{n}")
            if m.cols != self.dims[n] or m.rows != self.dims[n - 1]:
                raise ComplexError(
                    f"d_{n} has shape {m.rows}x{m.cols}, expected "
                    f"{self.dims[n - 1]}x{self.dims[n]}"
                )
        if check:
            self.check_dd_zero()

    def check_dd_zero(self):
        for n in range(1, self.top):
            prod = self.d[n] @ self.d[n + 1]
            if not prod.is_zero():
                j = next(k for k in range(prod.cols) if prod._cols[k])
                raise ComplexError(
                    "d.d != 0", location=f"degree {n + 1}", basis_label=f"basis index {j}"
                )

    def differential(self, n):
        if n <= 0 or n > self.top:
            return QMatrix.zero(self.dims[n - 1] if 0 < n <= self.top + 1 else 0, 0)
        return self.d[n]


class HomologyResult:
    """Per-degree homology dimensions with lazily computed bases.

    dims[n] for n <= valid_through.  cycle_basis(n) and boundary_basis(n)
    are canonical (RREF-derived) and cached; dims are computed from ranks
    alone so that large complexes never pay for explicit bases.
    """

    def __init__(self, complex_):
        self.complex = complex_
        self.valid_through = complex_.top - 1
        self._rank = {}
        self._cycles = {}
        self._boundaries = {}
        self._reps = {}
        dims = []
        for n in range(self.valid_through + 1):
            dims.append(complex_.dims[n] - self._rank_d(n) - self._rank_d(n + 1))
        self.dims = dims

    def _rank_d(self, n):
        if n <= 0 or n > self.complex.top:
            return 0
        r = self._rank.get(n)
        if r is None:
            r = rank(self.complex.d[n])
            self._rank[n] = r
        return r

    def cycle_basis(self, n):
        """Canonical basis of ker d_n (all of C_n when n = 0)."""
        if n not in self._cycles:
            if n == 0:
                self._cycles[n] = QMatrix.identity(self.complex.dims[0])
            else:
                self._cycles[n] = kernel_basis(self.complex.d[n])
        return self._cycles[n]

    def boundary_basis(self, n):
        """Canonical basis of im d_{n+1}."""
        if n not in self._boundaries:
            if n + 1 > self.complex.top:
                self._boundaries[n] = QMatrix.zero(self.complex.dims[n], 0)
            else:
                self._boundaries[n] = image_basis(self.complex.d[n + 1])
        return self._boundaries[n]

    def representatives(self, n):
        """Cycle columns completing the boundaries to a basis of the cycles.

        Returns (reps, frame) with frame = boundaries then reps; homology
        classes are coordinatized against frame's rep block.
        """
        if n not in self._reps:
            bd = self.boundary_basis(n)
            cy = self.cycle_basis(n)
            picked = image_pivot_cols(bd.hstack(cy))
            reps_idx = [j - bd.cols for j in picked if j >= bd.cols]
            reps = cy.select_columns(reps_idx)
            self._reps[n] = (reps, bd.hstack(reps))
        return self._reps[n]

    def class_coordinates(self, n, vectors):
        """Coordinates of cycle columns in the degree-n homology basis."""
        reps, frame = self.representatives(n)
        if frame.cols == 0:
            if not vectors.is_zero():
                raise ChainMapError(f"nonzero vector in zero homology at degree {n}")
            return QMatrix.zero(reps.cols, vectors.cols)
        coords = solve_in_span(frame, vectors)
        nb = frame.cols - reps.cols
        data = []
        for j in range(coords.cols):
            data.append({r - nb: v for r, v in coords._cols[j].items() if r >= nb})
        return QMatrix(reps.cols, vectors.cols, data, _adopt=True)


def homology(complex_):
    """Homology of a chain complex; dims valid through top degree - 1."""
    return HomologyResult(complex_)


class BicomplexSpec:
    """First-quadrant bicomplex data on a truncation p+q <= bound.

    modules: {(p, q): dim}; horiz[(p, q)]: map to (p-1, q);
    vert[(p, q)]: map to (p, q-1).  The assembled total differential on the
    (p, q) block is horiz + (-1)^p vert; callers store maps pre-adjusted so
    that the assembled d.d = 0 check passes.
    """

    def __init__(self, modules, horiz, vert):
        self.modules = dict(modules)
        self.horiz = dict(horiz)
        self.vert = dict(vert)


class TotalComplex:
    """Chain complex of a bicomplex plus block bookkeeping.

    blocks[n] is an ordered list of (p, q, offset, dim) describing how the
    degree-n module decomposes; block order is ascending p.
    """

    def __init__(self, chain, blocks):
        self.chain = chain
        self.blocks = blocks

    def block_offset(self, n, p, q):
        for bp, bq, off, dim in self.blocks[n]:
            if (bp, bq) == (p, q):
                return off, dim
        raise KeyError(f"no block ({p},{q}) in degree {n}")


def total_complex(spec, n_internal):
    """Total complex of a bicomplex through total degree n_internal.

    Raises ComplexError if the assembled differential does not square to
    zero on the truncation.
    """
    blocks = {}
    for n in range(n_internal + 1):
        row = []
        off = 0
        for p in range(n + 1):
            q = n - p
            dim = spec.modules.get((p, q))
            if dim is None:
                continue
            row.append((p, q, off, dim))
            off += dim
        blocks[n] = row
    dims = [sum(b[3] for b in blocks[n]) for n in range(n_internal + 1)]

    diffs = [None]
    for n in range(1, n_internal + 1):
        tgt, src = blocks[n - 1], blocks[n]
        tgt_pos = {(p, q): k for k, (p, q, _, _) in enumerate(tgt)}
        mat_blocks = {}
        for ks, (p, q, _, sdim) in enumerate(src):
            h = spec.horiz.get((p, q))
            if h is not None and (p - 1, q) in tgt_pos:
                mat_blocks[(tgt_pos[(p - 1, q)], ks)] = h
            v = spec.vert.get((p, q))
            if v is not None and (p, q - 1) in tgt_pos:
                sv = v if p % 2 == 0 else -v
                key = (tgt_pos[(p, q - 1)], ks)
                mat_blocks[key] = sv if key not in mat_blocks else mat_blocks[key] + sv
        diffs.append(
            block_matrix(mat_blocks, [b[3] for b in tgt], [b[3] for b in src])
        )
    chain = ChainComplexQ(dims, diffs)
    return TotalComplex(chain, blocks)


class MixedComplex:
    """Modules C_n with b: C_n -> C_{n-1} and B: C_n -> C_{n+1}.

    Checked at construction: b.b = 0, B.B = 0 and bB + Bb = 0 on the given
    truncation.  These are exactly the identities that make the cyclic-type
    bicomplex (columns indexed by B-applications) well defined.
    """

    def __init__(self, dims, b, B, presentations=None, label="", check=True):
        self.dims = list(dims)
        self.top = len(self.dims) - 1
        self.b = list(b)
        self.B = list(B)
        self.presentations = presentations
        self.label = label
        if check:
            self._check_identities()

    def _check_identities(self):
        lbl = self.label or "mixed complex"
        for n in range(2, self.top + 1):
            if not (self.b[n - 1] @ self.b[n]).is_zero():
                raise ComplexError(f"b.b != 0 in {lbl}", location=f"degree {n}")
        for n in range(self.top - 1):
            if self.B[n + 1] is None or self.B[n] is None:
                continue
            if not (self.B[n + 1] @ self.B[n]).is_zero():
                raise ComplexError(f"B.B != 0 in {lbl}", location=f"degree {n}")
        for n in range(1, self.top):
            if self.B[n] is None or self.B[n - 1] is None:
                continue
            bB = self.b[n + 1] @ self.B[n]
            Bb = self.B[n - 1] @ self.b[n]
            if not (bB + Bb).is_zero():
                raise ComplexError(
                    f"bB + Bb != 0 in {lbl} (quotient did not kill the twist)",
                    location=f"degree {n}",
                )

    def bicomplex(self, n_internal):
        """Cyclic-type bicomplex: block (p, q) holds C_{q-p}.

        The vertical map is stored as (-1)^p b so that the assembler's
        (-1)^p convention nets out to plain b; horizontal is B.
        """
        modules = {}
        horiz = {}
        vert = {}
        for p in range(n_internal // 2 + 1):
            for q in range(p, n_internal + 1 - p):
                m = q - p
                if m > self.top:
                    continue
                modules[(p, q)] = self.dims[m]
                if m >= 1:
                    vert[(p, q)] = self.b[m] if p % 2 == 0 else -self.b[m]
                if p >= 1 and m + 1 <= self.top and self.B[m] is not None:
                    horiz[(p, q)] = self.B[m]
        return BicomplexSpec(modules, horiz, vert)

    def total(self, n_internal):
        return total_complex(self.bicomplex(n_internal), n_internal)

    def column_complex(self):
        """The first column (C_*, b) as a plain chain complex."""
        return ChainComplexQ(self.dims, [None] + self.b[1:], check=False)


def check_chain_map(f_per_degree, src, dst, top):
    """Exact check that f commutes with the differentials through degree top."""
    for n in range(1, top + 1):
        lhs = dst.d[n] @ f_per_degree[n]
        rhs = f_per_degree[n - 1] @ src.d[n]
        if lhs != rhs:
            raise ChainMapError(f"chain map fails to commute at degree {n}")


def induced_on_homology(f_per_degree, src_h, dst_h, check=True):
    """Matrices of the induced map on homology, degree by degree.

    f_per_degree[n] maps src C_n to dst C_n.  The chain map property is
    checked exactly unless check=False (use only when already verified).
    """
    src, dst = src_h.complex, dst_h.complex
    top = min(src.top, dst.top)
    if check:
        check_chain_map(f_per_degree, src, dst, top)
    out = {}
    for n in range(min(src_h.valid_through, dst_h.valid_through) + 1):
        reps, _ = src_h.representatives(n)
        images = f_per_degree[n] @ reps
        out[n] = dst_h.class_coordinates(n, images)
    return out


