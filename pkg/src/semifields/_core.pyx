# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled backend for the hot kernels.

Mirrors semifields._core_py function for function; see that module for
the shared data conventions (vector codes, matrix stacks, packed
polynomials).  semifields.kernels selects between the two at import.
"""

import numpy as np

from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memcpy, memset

BACKEND_NAME = "cython"

cdef enum:
    MAXD = 6
    MAXSPAN = 2402          # p^(d-1) never exceeds 7^4 = 2401 within spec bounds
    MAXLEVEL = 21           # (d-2)*(d-1) column choices, d <= 6


cdef long long llpow(long long base, int e):
    cdef long long out = 1
    cdef int i
    for i in range(e):
        out *= base
    return out


cdef class Context:
    cdef public int p, d, n, q
    cdef long long pw_c[MAXD]
    cdef long long ppow_c[MAXD]
    cdef long long enc_pw_c[MAXD * MAXD]
    cdef unsigned char[::1] prim
    cdef int[:, ::1] digits
    cdef int[:, ::1] norm
    cdef int n_norm

    def __init__(self, int p, int d, primitive_mask):
        cdef int r, c, k
        self.p = p
        self.d = d
        self.n = <int> llpow(p, d)
        self.q = self.n - 1
        for r in range(d):
            self.pw_c[r] = llpow(p, d - 1 - r)
        for k in range(d):
            self.ppow_c[k] = llpow(p, k)
        for c in range(1, d):
            for r in range(d):
                self.enc_pw_c[(c - 1) * d + r] = llpow(p, (d - 1 - c) * d + (d - 1 - r))
        prim = np.ascontiguousarray(primitive_mask, dtype=np.uint8)
        if prim.shape != (self.n,):
            raise ValueError("primitive mask must have p^d entries")
        self.prim = prim
        codes = np.arange(self.n, dtype=np.int64)
        digs = np.stack([codes // p ** (d - 1 - r) % p for r in range(d)], axis=1)
        self.digits = np.ascontiguousarray(digs, dtype=np.int32)
        import itertools
        rows = []
        for lead in range(d):
            for rest in itertools.product(range(p), repeat=d - 1 - lead):
                rows.append((0,) * lead + (1,) + rest)
        self.norm = np.ascontiguousarray(np.array(rows, dtype=np.int32))
        self.n_norm = len(rows)


def make_context(p, d, primitive_mask):
    return Context(p, d, primitive_mask)


# ---------------------------------------------------------------------------
# small exact linear algebra on int buffers (row-major, stride d)
# ---------------------------------------------------------------------------


cdef inline int inv_scalar(int a, int p):
    cdef int x
    for x in range(1, p):
        if (a * x) % p == 1:
            return x
    return 0


cdef void mat_mul_c(int d, int p, int* a, int* b, int* out):
    cdef int i, j, k
    cdef long long s
    for i in range(d):
        for j in range(d):
            s = 0
            for k in range(d):
                s += a[i * d + k] * b[k * d + j]
            out[i * d + j] = <int> (s % p)


cdef void mat_vec_c(int d, int p, int* a, int* v, int* out):
    cdef int i, k
    cdef long long s
    for i in range(d):
        s = 0
        for k in range(d):
            s += a[i * d + k] * v[k]
        out[i] = <int> (s % p)


cdef int mat_inv_c(int d, int p, int* a, int* out):
    """Gauss-Jordan inverse; returns 0 if singular, 1 on success."""
    cdef int aug[MAXD * 2 * MAXD]
    cdef int i, j, c, piv, w, factor, t
    w = 2 * d
    for i in range(d):
        for j in range(d):
            aug[i * w + j] = a[i * d + j] % p
            aug[i * w + d + j] = 1 if i == j else 0
    for c in range(d):
        piv = -1
        for i in range(c, d):
            if aug[i * w + c]:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != c:
            for j in range(w):
                t = aug[c * w + j]
                aug[c * w + j] = aug[piv * w + j]
                aug[piv * w + j] = t
        factor = inv_scalar(aug[c * w + c], p)
        for j in range(w):
            aug[c * w + j] = aug[c * w + j] * factor % p
        for i in range(d):
            if i != c and aug[i * w + c]:
                factor = aug[i * w + c]
                for j in range(w):
                    aug[i * w + j] = (aug[i * w + j] - factor * aug[c * w + j]) % p
                    if aug[i * w + j] < 0:
                        aug[i * w + j] += p
    for i in range(d):
        for j in range(d):
            out[i * d + j] = aug[i * w + d + j]
    return 1


cdef int is_full_rank_c(int d, int p, int* a):
    cdef int m[MAXD * MAXD]
    cdef int i, j, c, piv, factor, t
    memcpy(m, a, d * d * sizeof(int))
    for c in range(d):
        piv = -1
        for i in range(c, d):
            if m[i * d + c]:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != c:
            for j in range(d):
                t = m[c * d + j]
                m[c * d + j] = m[piv * d + j]
                m[piv * d + j] = t
        factor = inv_scalar(m[c * d + c], p)
        for j in range(d):
            m[c * d + j] = m[c * d + j] * factor % p
        for i in range(c + 1, d):
            if m[i * d + c]:
                factor = m[i * d + c]
                for j in range(d):
                    m[i * d + j] = (m[i * d + j] - factor * m[c * d + j]) % p
                    if m[i * d + j] < 0:
                        m[i * d + j] += p
    return 1


cdef long long charpoly_c(Context ctx, int* a):
    """Packed char poly (division-free recursion over trailing submatrices)."""
    cdef int d = ctx.d
    cdef int p = ctx.p
    cdef long long prev[MAXD + 1]
    cdef long long vec[MAXD + 1]
    cdef long long nxt[MAXD + 1]
    cdef long long w[MAXD]
    cdef long long w2[MAXD]
    cdef int prev_len = 1
    cdef int k, m, i, j, t, jlo, jhi
    cdef long long s, out
    prev[0] = 1
    for k in range(d - 1, -1, -1):
        m = d - k
        vec[0] = 1
        vec[1] = (p - a[k * d + k]) % p
        if m > 1:
            for i in range(m - 1):
                w[i] = a[(k + 1 + i) * d + k]
            s = 0
            for i in range(m - 1):
                s += a[k * d + k + 1 + i] * w[i]
            vec[2] = (p - s % p) % p
            for t in range(3, m + 1):
                for i in range(m - 1):
                    s = 0
                    for j in range(m - 1):
                        s += a[(k + 1 + i) * d + k + 1 + j] * w[j]
                    w2[i] = s % p
                for i in range(m - 1):
                    w[i] = w2[i]
                s = 0
                for i in range(m - 1):
                    s += a[k * d + k + 1 + i] * w[i]
                vec[t] = (p - s % p) % p
        for i in range(m + 1):
            s = 0
            jlo = i - m if i - m > 0 else 0
            jhi = i if i < prev_len - 1 else prev_len - 1
            for j in range(jlo, jhi + 1):
                s += vec[i - j] * prev[j]
            nxt[i] = s % p
        for i in range(m + 1):
            prev[i] = nxt[i]
        prev_len = m + 1
    out = 0
    for k in range(d):
        out += prev[d - k] * ctx.ppow_c[k]
    return out


cdef long long vec_code_c(Context ctx, int* v):
    cdef long long s = 0
    cdef int r
    for r in range(ctx.d):
        s += v[r] * ctx.pw_c[r]
    return s


cdef long long encode_c(Context ctx, int* mat, int first_col) except? -1:
    cdef int d = ctx.d
    cdef int r, c
    cdef long long s = 0
    for r in range(d):
        if mat[r * d] != (1 if r == first_col else 0):
            raise RuntimeError("rebased matrix lost its standard first column")
    for c in range(1, d):
        for r in range(d):
            s += mat[r * d + c] * ctx.enc_pw_c[(c - 1) * d + r]
    return s


cdef void right_mult_c(Context ctx, int* mats, int* v, int* out):
    """out = sum_i v[i] * A_{i+1}; mats is the (d, d, d) stack."""
    cdef int d = ctx.d
    cdef int i, e
    cdef long long s
    for e in range(d * d):
        s = 0
        for i in range(d):
            s += v[i] * mats[i * d * d + e]
        out[e] = <int> (s % ctx.p)


# ---------------------------------------------------------------------------
# exhaustive backtracking search
# ---------------------------------------------------------------------------


cdef class _Search:
    cdef Context ctx
    cdef int unit
    cdef int mats[MAXD * MAXD * MAXD]
    cdef int nmats
    cdef int curcols[MAXD * MAXD]       # columns of the partial matrix, digit vectors
    cdef int ncols
    cdef long long out_codes[MAXD]
    cdef unsigned char* bad
    cdef int* cand                      # MAXLEVEL rows of n candidate codes
    cdef int span[MAXSPAN * MAXD]
    cdef list results

    def __cinit__(self, Context ctx, int unit):
        self.ctx = ctx
        self.unit = unit
        self.bad = <unsigned char*> calloc(ctx.n, 1)
        self.cand = <int*> malloc(MAXLEVEL * ctx.n * sizeof(int))
        if self.bad == NULL or self.cand == NULL:
            raise MemoryError()
        self.results = []

    def __dealloc__(self):
        if self.bad != NULL:
            free(self.bad)
        if self.cand != NULL:
            free(self.cand)

    cdef void start_matrix(self) except *:
        cdef int d = self.ctx.d
        cdef int r
        cdef list out
        if self.nmats == d:
            self.validate_leaf()
            out = []
            for r in range(d - 2):
                out.append(self.out_codes[r])
            self.results.append(tuple(out))
            return
        for r in range(d):
            self.curcols[r] = 1 if r == self.nmats else 0
        self.ncols = 1
        self.descend()

    cdef void complete_matrix(self) except *:
        """The partial matrix reached d columns: push it and recurse."""
        cdef Context ctx = self.ctx
        cdef int d = ctx.d
        cdef int m = self.nmats
        cdef int saved_cols[MAXD * MAXD]
        cdef int saved_ncols
        cdef int r, c
        cdef long long code = 0
        for c in range(1, d):
            for r in range(d):
                code += self.curcols[c * d + r] * ctx.enc_pw_c[(c - 1) * d + r]
        self.out_codes[m - 2] = code
        for r in range(d):
            for c in range(d):
                self.mats[m * d * d + r * d + c] = self.curcols[c * d + r]
        memcpy(saved_cols, self.curcols, sizeof(saved_cols))
        saved_ncols = self.ncols
        self.nmats += 1
        self.start_matrix()
        self.nmats -= 1
        memcpy(self.curcols, saved_cols, sizeof(saved_cols))
        self.ncols = saved_ncols

    cdef void descend(self) except *:
        cdef Context ctx = self.ctx
        cdef int d = ctx.d
        cdef int p = ctx.p
        cdef int n = ctx.n
        cdef int m = self.nmats
        cdef int k = self.ncols
        cdef int level, lam_count, li, i, j, r, mu, t, c, ncand, span_count, base
        cdef int* cand_row
        cdef int lam[MAXD]
        cdef int tc[MAXD * MAXD]
        cdef int s[MAXD]
        cdef int diff[MAXD]

        if k == d:
            self.complete_matrix()
            return

        level = (m - 2) * (d - 1) + (k - 1)
        cand_row = self.cand + level * n
        lam_count = <int> llpow(p, m)

        memset(self.bad, 0, n)
        for li in range(lam_count):
            t = li
            for i in range(m):
                lam[i] = t % p
                t //= p
            # columns of the lambda-combination joined with the partial matrix
            for j in range(k):
                for r in range(d):
                    t = self.curcols[j * d + r]
                    for i in range(m):
                        t += lam[i] * self.mats[i * d * d + r * d + j]
                    tc[j * d + r] = t % p
            for r in range(d):
                t = 0
                for i in range(m):
                    t += lam[i] * self.mats[i * d * d + r * d + k]
                s[r] = t % p
            # walk the span of the k joined columns, excluding its coset
            for r in range(d):
                self.span[r] = 0
            span_count = 1
            for j in range(k):
                base = span_count
                for mu in range(1, p):
                    for t in range(base):
                        for r in range(d):
                            self.span[span_count * d + r] = (
                                self.span[t * d + r] + mu * tc[j * d + r]
                            ) % p
                        span_count += 1
            for t in range(span_count):
                for r in range(d):
                    diff[r] = self.span[t * d + r] - s[r]
                    if diff[r] < 0:
                        diff[r] += p
                self.bad[vec_code_c(ctx, diff)] = 1

        ncand = 0
        for c in range(n):
            if not self.bad[c]:
                cand_row[ncand] = c
                ncand += 1
        if m == 2 and k == 1 and self.unit >= 0:
            t = 0
            for i in range(ncand):
                if cand_row[i] == self.unit:
                    cand_row[0] = self.unit
                    t = 1
                    break
            ncand = t

        for i in range(ncand):
            c = cand_row[i]
            for r in range(d):
                self.curcols[k * d + r] = ctx.digits[c, r]
            self.ncols = k + 1
            self.descend()
        self.ncols = k

    cdef void validate_leaf(self) except *:
        """Independent invertibility re-check of every normalized combination."""
        cdef Context ctx = self.ctx
        cdef int d = ctx.d
        cdef int combo[MAXD * MAXD]
        cdef int b, e, i
        cdef long long s
        for b in range(ctx.n_norm):
            for e in range(d * d):
                s = 0
                for i in range(d):
                    s += ctx.norm[b, i] * self.mats[i * d * d + e]
                combo[e] = <int> (s % ctx.p)
            if not is_full_rank_c(d, ctx.p, combo):
                raise RuntimeError("search emitted a set with a singular combination")


def search_completions(Context ctx, a2, int unit=-1):
    """All (A_3, ..., A_d) completions of (I, A_2); see _core_py for details."""
    cdef _Search st = _Search(ctx, unit)
    cdef int d = ctx.d
    cdef int r, c
    a2_arr = np.ascontiguousarray(np.asarray(a2, dtype=np.int64) % ctx.p, dtype=np.int32)
    cdef int[:, ::1] a2v = a2_arr
    for r in range(d):
        for c in range(d):
            st.mats[r * d + c] = 1 if r == c else 0
            st.mats[d * d + r * d + c] = a2v[r, c]
    st.nmats = 2
    st.start_matrix()
    return st.results


# ---------------------------------------------------------------------------
# cyclic representations, canonical keys, automorphisms
# ---------------------------------------------------------------------------


cdef int copy_mats(Context ctx, mats_in, int* out) except -1:
    arr = np.ascontiguousarray(np.asarray(mats_in, dtype=np.int64) % ctx.p, dtype=np.int32)
    cdef int d = ctx.d
    if arr.shape != (d, d, d):
        raise ValueError("matrix stack must have shape (d, d, d)")
    cdef int[:, :, ::1] v = arr
    cdef int i, r, c
    for i in range(d):
        for r in range(d):
            for c in range(d):
                out[i * d * d + r * d + c] = v[i, r, c]
    return 0


cdef void power_basis_c(Context ctx, int* op, int* start, int* basis):
    """basis columns: start, op@start, op^2@start, ..."""
    cdef int d = ctx.d
    cdef int col[MAXD]
    cdef int nxt[MAXD]
    cdef int r, k
    for r in range(d):
        col[r] = start[r]
        basis[r * d] = col[r]
    for k in range(1, d):
        mat_vec_c(d, ctx.p, op, col, nxt)
        for r in range(d):
            col[r] = nxt[r]
            basis[r * d + k] = col[r]


cdef int rebase_codes_c(Context ctx, int* basis, int* basis_inv, int* mats,
                        int* ly_inv, int* rz_inv, long long* codes) except -1:
    """Codes of A_2..A_d in the given basis.

    With ly_inv/rz_inv null this rebases the plain product of `mats`;
    otherwise the principal-isotope product they parameterize.
    """
    cdef int d = ctx.d
    cdef int p = ctx.p
    cdef int b[MAXD]
    cdef int u[MAXD]
    cdef int rm[MAXD * MAXD]
    cdef int t1[MAXD * MAXD]
    cdef int t2[MAXD * MAXD]
    cdef int i, r
    for i in range(1, d):
        for r in range(d):
            b[r] = basis[r * d + i]
        if ly_inv == NULL:
            right_mult_c(ctx, mats, b, rm)
        else:
            mat_vec_c(d, p, ly_inv, b, u)
            right_mult_c(ctx, mats, u, t1)
            mat_mul_c(d, p, t1, rz_inv, rm)
        mat_mul_c(d, p, basis_inv, rm, t1)
        mat_mul_c(d, p, t1, basis, t2)
        codes[i - 1] = encode_c(ctx, t2, i)
    return 0


def cyclic_reps(Context ctx, mats_in):
    """Sorted code tuples of every right-power-basis representation."""
    cdef int mats[MAXD * MAXD * MAXD]
    copy_mats(ctx, mats_in, mats)
    cdef int d = ctx.d
    cdef int p = ctx.p
    cdef int v[MAXD]
    cdef int e[MAXD]
    cdef int ry[MAXD * MAXD]
    cdef int basis[MAXD * MAXD]
    cdef int basis_inv[MAXD * MAXD]
    cdef long long codes[MAXD]
    cdef int y, r, i
    keys = set()
    for r in range(d):
        e[r] = 1 if r == 0 else 0
    for y in range(1, ctx.n):
        for r in range(d):
            v[r] = ctx.digits[y, r]
        right_mult_c(ctx, mats, v, ry)
        if not ctx.prim[charpoly_c(ctx, ry)]:
            continue
        power_basis_c(ctx, ry, e, basis)
        if not mat_inv_c(d, p, basis, basis_inv):
            raise RuntimeError("primitive right multiplication gave a dependent power basis")
        rebase_codes_c(ctx, basis, basis_inv, mats, NULL, NULL, codes)
        out = []
        for i in range(d - 1):
            out.append(codes[i])
        keys.add(tuple(out))
    return sorted(keys)


def canonical_key(Context ctx, mats_in):
    """Lexicographic minimum cyclic representation, or None if none exists."""
    reps = cyclic_reps(ctx, mats_in)
    return reps[0] if reps else None


cdef int is_multiplicative_c(Context ctx, int* f, int* mats):
    cdef int d = ctx.d
    cdef int p = ctx.p
    cdef int col[MAXD]
    cdef int rhs[MAXD * MAXD]
    cdef int lhs[MAXD * MAXD]
    cdef int t[MAXD * MAXD]
    cdef int j, r, e
    for j in range(d):
        for r in range(d):
            col[r] = f[r * d + j]
        right_mult_c(ctx, mats, col, rhs)
        mat_mul_c(d, p, rhs, f, t)
        mat_mul_c(d, p, f, mats + j * d * d, lhs)
        for e in range(d * d):
            if lhs[e] != t[e]:
                return 0
    return 1


def aut_order(Context ctx, mats_in):
    """Number of algebra automorphisms; 0 flags a non-right-primitive input."""
    cdef int mats[MAXD * MAXD * MAXD]
    copy_mats(ctx, mats_in, mats)
    cdef int d = ctx.d
    cdef int p = ctx.p
    cdef int v[MAXD]
    cdef int e[MAXD]
    cdef int rm[MAXD * MAXD]
    cdef int base[MAXD * MAXD]
    cdef int base_inv[MAXD * MAXD]
    cdef int image[MAXD * MAXD]
    cdef int f[MAXD * MAXD]
    cdef int y, r, count
    cdef long long poly
    cdef long long anchor_poly = -1
    count = 0
    for r in range(d):
        e[r] = 1 if r == 0 else 0
    for y in range(1, ctx.n):
        for r in range(d):
            v[r] = ctx.digits[y, r]
        right_mult_c(ctx, mats, v, rm)
        poly = charpoly_c(ctx, rm)
        if not ctx.prim[poly]:
            continue
        if anchor_poly < 0:
            anchor_poly = poly
            power_basis_c(ctx, rm, e, base)
            if not mat_inv_c(d, p, base, base_inv):
                raise RuntimeError("primitive right multiplication gave a dependent power basis")
        if poly != anchor_poly:
            continue
        power_basis_c(ctx, rm, e, image)
        mat_mul_c(d, p, image, base_inv, f)
        if is_multiplicative_c(ctx, f, mats):
            count += 1
    return count


# ---------------------------------------------------------------------------
# principal isotopes
# ---------------------------------------------------------------------------


def isotope_keys(Context ctx, mats_in):
    """Canonical key of every principal isotope, with multiplicities.

    The returned counts sum to (p^d - 1)^2, one entry per parameter pair.
    """
    cdef int mats[MAXD * MAXD * MAXD]
    copy_mats(ctx, mats_in, mats)
    cdef int d = ctx.d
    cdef int p = ctx.p
    cdef int q = ctx.q
    cdef int dd = d * d

    cdef int* r_all = <int*> malloc(q * dd * sizeof(int))
    cdef int* r_inv = <int*> malloc(q * dd * sizeof(int))
    cdef int* l_inv = <int*> malloc(q * dd * sizeof(int))
    cdef long long* ucodes = <long long*> malloc(q * sizeof(long long))
    if r_all == NULL or r_inv == NULL or l_inv == NULL or ucodes == NULL:
        if r_all != NULL: free(r_all)
        if r_inv != NULL: free(r_inv)
        if l_inv != NULL: free(l_inv)
        if ucodes != NULL: free(ucodes)
        raise MemoryError()

    cdef int v[MAXD]
    cdef int col[MAXD]
    cdef int u[MAXD]
    cdef int ident[MAXD]
    cdef int ydig[MAXD]
    cdef int lmat[MAXD * MAXD]
    cdef int rcirc[MAXD * MAXD]
    cdef int basis[MAXD * MAXD]
    cdef int basis_inv[MAXD * MAXD]
    cdef long long key[MAXD]
    cdef long long best[MAXD]
    cdef int g, r, j, yi, zi, i, have_best, smaller
    cdef int* ly_inv
    cdef int* rz_inv
    counts = {}
    try:
        for g in range(q):
            for r in range(d):
                v[r] = ctx.digits[g + 1, r]
            right_mult_c(ctx, mats, v, r_all + g * dd)
            if not mat_inv_c(d, p, r_all + g * dd, r_inv + g * dd):
                raise ValueError("input stack has a singular right multiplication")
            for j in range(d):
                mat_vec_c(d, p, mats + j * dd, v, col)
                for r in range(d):
                    lmat[r * d + j] = col[r]
            if not mat_inv_c(d, p, lmat, l_inv + g * dd):
                raise ValueError("input stack has a singular left multiplication")

        for yi in range(q):
            ly_inv = l_inv + yi * dd
            for r in range(d):
                ydig[r] = ctx.digits[yi + 1, r]
            for g in range(q):
                for r in range(d):
                    v[r] = ctx.digits[g + 1, r]
                mat_vec_c(d, p, ly_inv, v, u)
                ucodes[g] = vec_code_c(ctx, u)
            for zi in range(q):
                rz_inv = r_inv + zi * dd
                mat_vec_c(d, p, r_all + zi * dd, ydig, ident)  # y * z
                have_best = 0
                for g in range(q):
                    mat_mul_c(d, p, r_all + (ucodes[g] - 1) * dd, rz_inv, rcirc)
                    if not ctx.prim[charpoly_c(ctx, rcirc)]:
                        continue
                    power_basis_c(ctx, rcirc, ident, basis)
                    if not mat_inv_c(d, p, basis, basis_inv):
                        raise RuntimeError(
                            "primitive right multiplication gave a dependent power basis"
                        )
                    rebase_codes_c(ctx, basis, basis_inv, mats, ly_inv, rz_inv, key)
                    if have_best:
                        smaller = 0
                        for i in range(d - 1):
                            if key[i] != best[i]:
                                smaller = 1 if key[i] < best[i] else 0
                                break
                        if not smaller:
                            continue
                    for i in range(d - 1):
                        best[i] = key[i]
                    have_best = 1
                if not have_best:
                    raise ValueError("principal isotope has no primitive generator")
                kt = tuple(best[i] for i in range(d - 1))
                counts[kt] = counts.get(kt, 0) + 1
    finally:
        free(r_all)
        free(r_inv)
        free(l_inv)
        free(ucodes)
    return counts
