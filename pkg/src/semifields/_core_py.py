"""Pure-Python backend for the hot kernels (numpy-vectorized).

Both backends share these conventions:

* a vector (v_1, ..., v_d) over GF(p) has integer code
  sum v_r * p^(d-r): the first coordinate is the most significant digit;
* a standard set travels as the (d, d, d) integer stack of its
  right-multiplication matrices A_1..A_d (entry order: row, column);
* matrix codes and completion/key tuples use the package-wide integer
  encoding (first column implied, remaining columns as base-p digits);
* a polynomial of degree d is packed as sum coeffs[k] * p^k over k < d
  (the monic leading coefficient is implied).

The compiled backend in _core.pyx mirrors this module function for
function; semifields.kernels picks one of the two at import time.
"""

from __future__ import annotations

import itertools

import numpy as np

BACKEND_NAME = "python"


class Context:
    """Per-(p, d) lookup tables shared by the kernel calls."""

    def __init__(self, p: int, d: int, primitive_mask: np.ndarray):
        self.p = p
        self.d = d
        self.n = p**d
        self.q = self.n - 1
        self.pw = p ** np.arange(d - 1, -1, -1, dtype=np.int64)  # digit weights
        self.ppow = p ** np.arange(d, dtype=np.int64)  # polynomial packing
        codes = np.arange(self.n, dtype=np.int64)
        self.digits = np.stack([codes // p ** (d - 1 - r) % p for r in range(d)], axis=1)
        self.prim = np.asarray(primitive_mask, dtype=bool)
        if self.prim.shape != (self.n,):
            raise ValueError("primitive mask must have p^d entries")
        # encoding weights for columns 2..d flattened column-major
        enc = []
        for c in range(1, d):
            for r in range(d):
                enc.append(p ** ((d - 1 - c) * d + (d - 1 - r)))
        self.enc_pw = np.array(enc, dtype=np.int64)
        # all coefficient tuples of GF(p)^m, used for the search lambda scans
        self.lam = {m: np.array(list(itertools.product(range(p), repeat=m)), dtype=np.int64)
                    for m in range(1, d)}
        norm = []
        for lead in range(d):
            for rest in itertools.product(range(p), repeat=d - 1 - lead):
                norm.append((0,) * lead + (1,) + rest)
        self.norm_tuples = np.array(norm, dtype=np.int64)
        perms = list(itertools.permutations(range(d)))
        self.det_perms = np.array(perms, dtype=np.int64)
        signs = []
        for perm in perms:
            inversions = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
            signs.append(-1 if inversions % 2 else 1)
        self.det_signs = np.array(signs, dtype=np.int64)


def make_context(p: int, d: int, primitive_mask) -> Context:
    return Context(p, d, primitive_mask)


# ---------------------------------------------------------------------------
# small exact linear algebra on int64 arrays
# ---------------------------------------------------------------------------


def _inv_small(arr: np.ndarray, p: int) -> np.ndarray:
    n = arr.shape[0]
    m = np.concatenate([arr % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = -1
        for i in range(c, n):
            if m[i, c]:
                piv = i
                break
        if piv < 0:
            raise ZeroDivisionError("singular matrix in kernel")
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
        m[c] = m[c] * pow(int(m[c, c]), p - 2, p) % p
        for i in range(n):
            if i != c and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[c]) % p
    return m[:, n:]


def _batch_det(ctx: Context, ms: np.ndarray) -> np.ndarray:
    """Determinants mod p of a (B, d, d) batch, by permutation expansion."""
    d = ctx.d
    gathered = ms[:, np.arange(d)[None, :], ctx.det_perms]  # (B, d!, d)
    return (gathered.prod(axis=2) * ctx.det_signs).sum(axis=1) % ctx.p


def _charpoly_batch(ctx: Context, ms: np.ndarray) -> np.ndarray:
    """Packed char polys of a (B, d, d) batch (division-free recursion)."""
    p, d = ctx.p, ctx.d
    B = ms.shape[0]
    prev = np.ones((B, 1), dtype=np.int64)
    for k in range(d - 1, -1, -1):
        m = d - k
        sub = ms[:, k:, k:]
        vec = np.zeros((B, m + 1), dtype=np.int64)
        vec[:, 0] = 1
        vec[:, 1] = (-sub[:, 0, 0]) % p
        if m > 1:
            row = sub[:, 0, 1:]
            inner = sub[:, 1:, 1:]
            w = sub[:, 1:, 0]
            vec[:, 2] = (-np.einsum("bi,bi->b", row, w)) % p
            for t in range(3, m + 1):
                w = np.einsum("bij,bj->bi", inner, w) % p
                vec[:, t] = (-np.einsum("bi,bi->b", row, w)) % p
        new = np.zeros((B, m + 1), dtype=np.int64)
        for i in range(m + 1):
            for j in range(max(0, i - m), min(i, prev.shape[1] - 1) + 1):
                new[:, i] += vec[:, i - j] * prev[:, j]
        prev = new % p
    coeffs = prev[:, ::-1]  # lowest degree first
    return coeffs[:, :d] @ ctx.ppow


def _encode(ctx: Context, mat: np.ndarray, first_col: int) -> int:
    """Matrix code of a rebased right-multiplication matrix."""
    expected = np.zeros(ctx.d, dtype=np.int64)
    expected[first_col] = 1
    if not np.array_equal(mat[:, 0], expected):
        raise RuntimeError("rebased matrix lost its standard first column")
    return int(mat[:, 1:].T.reshape(-1) @ ctx.enc_pw)


# ---------------------------------------------------------------------------
# exhaustive backtracking search
# ---------------------------------------------------------------------------


def search_completions(ctx: Context, a2, unit: int = -1) -> list[tuple[int, ...]]:
    """All (A_3, ..., A_d) completions of (I, A_2), as tuples of matrix codes.

    Depth-first, candidate columns in ascending code order, so the output
    stream is lexicographically sorted.  unit >= 0 restricts column 2 of
    A_3 to that code (the sharding hook); -1 searches the full tree.
    """
    p, d, n = ctx.p, ctx.d, ctx.n
    digits = ctx.digits
    pw = ctx.pw
    mats = [np.eye(d, dtype=np.int64), np.asarray(a2, dtype=np.int64) % p]
    results: list[tuple[int, ...]] = []
    out_codes: list[int] = []
    mu = np.arange(p, dtype=np.int64)

    def start_matrix():
        m = len(mats)
        if m == d:
            _validate_complete_set(ctx, mats)
            results.append(tuple(out_codes))
            return
        lam = ctx.lam[m]
        stack = np.stack(mats)
        col1 = np.zeros(d, dtype=np.int64)
        col1[m] = 1
        t1 = (lam @ stack[:, :, 0] + col1) % p  # first column of every combination
        spans = t1[:, None, :] * mu[None, :, None] % p  # (p^m, p, d)
        descend(1, spans, [col1], lam, stack)

    def descend(k, spans, mcols, lam, stack):
        if k == d:
            mat = np.stack(mcols, axis=1)
            out_codes.append(int(mat[:, 1:].T.reshape(-1) @ ctx.enc_pw))
            mats.append(mat)
            start_matrix()
            mats.pop()
            out_codes.pop()
            return
        s = lam @ stack[:, :, k] % p  # (p^m, d)
        bad = np.zeros(n, dtype=bool)
        bad[((spans - s[:, None, :]) % p @ pw).ravel()] = True
        cand = np.flatnonzero(~bad)
        if k == 1 and len(mats) == 2 and unit >= 0:
            cand = cand[cand == unit]
        for c in cand:
            newcol = (s + digits[c]) % p
            child = np.concatenate(
                [(spans + m_ * newcol[:, None, :]) % p for m_ in mu], axis=1
            )
            mcols.append(digits[c])
            descend(k + 1, child, mcols, lam, stack)
            mcols.pop()

    start_matrix()
    return results


def _validate_complete_set(ctx: Context, mats) -> None:
    """Leaf re-validation, independent of the coset pruning path.

    Checks every normalized nonzero combination for invertibility via
    exact determinants; any failure is a pruning bug, not bad input.
    """
    stack = np.stack(mats)
    combos = np.tensordot(ctx.norm_tuples, stack, axes=([1], [0])) % ctx.p
    if np.any(_batch_det(ctx, combos) == 0):
        raise RuntimeError("search emitted a set with a singular combination")


# ---------------------------------------------------------------------------
# cyclic representations, canonical keys, automorphisms
# ---------------------------------------------------------------------------


def _right_mult_all(ctx: Context, mats: np.ndarray) -> np.ndarray:
    """(q, d, d) stack of right-multiplication matrices of every nonzero element."""
    return np.tensordot(ctx.digits[1:], mats, axes=([1], [0])) % ctx.p


def _power_basis(ctx: Context, op: np.ndarray, start: np.ndarray) -> np.ndarray:
    cols = np.empty((ctx.d, ctx.d), dtype=np.int64)
    cols[:, 0] = start
    for k in range(1, ctx.d):
        cols[:, k] = op @ cols[:, k - 1] % ctx.p
    return cols


def _rebase_codes(ctx: Context, basis: np.ndarray, right_of) -> tuple[int, ...]:
    """Codes of A_2..A_d after rebasing onto the given basis columns."""
    basis_inv = _inv_small(basis, ctx.p)
    codes = []
    for i in range(1, ctx.d):
        ai = basis_inv @ right_of(basis[:, i]) @ basis % ctx.p
        codes.append(_encode(ctx, ai, i))
    return tuple(codes)


def cyclic_reps(ctx: Context, mats) -> list[tuple[int, ...]]:
    """Sorted code tuples of every right-power-basis representation."""
    mats = np.asarray(mats, dtype=np.int64) % ctx.p
    r_all = _right_mult_all(ctx, mats)
    good = np.flatnonzero(ctx.prim[_charpoly_batch(ctx, r_all)])
    e = np.zeros(ctx.d, dtype=np.int64)
    e[0] = 1

    def right_of(v):
        return np.tensordot(v, mats, axes=([0], [0])) % ctx.p

    keys = set()
    for idx in good:
        basis = _power_basis(ctx, r_all[idx], e)
        keys.add(_rebase_codes(ctx, basis, right_of))
    return sorted(keys)


def canonical_key(ctx: Context, mats) -> tuple[int, ...] | None:
    """Lexicographic minimum cyclic representation, or None if none exists."""
    reps = cyclic_reps(ctx, mats)
    return reps[0] if reps else None


def aut_order(ctx: Context, mats) -> int:
    """Number of algebra automorphisms; 0 flags a non-right-primitive input."""
    mats = np.asarray(mats, dtype=np.int64) % ctx.p
    r_all = _right_mult_all(ctx, mats)
    polys = _charpoly_batch(ctx, r_all)
    good = np.flatnonzero(ctx.prim[polys])
    if good.size == 0:
        return 0
    anchor = good[0]
    e = np.zeros(ctx.d, dtype=np.int64)
    e[0] = 1
    base = _power_basis(ctx, r_all[anchor], e)
    base_inv = _inv_small(base, ctx.p)
    count = 0
    for idx in np.flatnonzero(polys == polys[anchor]):
        image = _power_basis(ctx, r_all[idx], e)
        f = image @ base_inv % ctx.p
        if _is_multiplicative(ctx, f, mats):
            count += 1
    return count


def _is_multiplicative(ctx: Context, f: np.ndarray, mats: np.ndarray) -> bool:
    for j in range(ctx.d):
        rhs = np.tensordot(f[:, j], mats, axes=([0], [0])) % ctx.p
        if not np.array_equal(f @ mats[j] % ctx.p, rhs @ f % ctx.p):
            return False
    return True


# ---------------------------------------------------------------------------
# principal isotopes
# ---------------------------------------------------------------------------


def isotope_keys(ctx: Context, mats) -> dict[tuple[int, ...], int]:
    """Canonical key of every principal isotope, with multiplicities.

    The returned counts sum to (p^d - 1)^2, one entry per parameter pair.
    """
    p, d, q = ctx.p, ctx.d, ctx.q
    mats = np.asarray(mats, dtype=np.int64) % p
    digs = ctx.digits[1:]
    r_all = _right_mult_all(ctx, mats)
    l_all = np.einsum("jkl,vl->vkj", mats, digs) % p
    r_inv = np.stack([_inv_small(m, p) for m in r_all])
    l_inv = np.stack([_inv_small(m, p) for m in l_all])
    pw = ctx.pw
    counts: dict[tuple[int, ...], int] = {}
    for yi in range(q):
        ly_inv = l_inv[yi]
        u_all = digs @ ly_inv.T % p  # row g is L_y^{-1} applied to element g+1
        u_codes = u_all @ pw
        for zi in range(q):
            rz_inv = r_inv[zi]
            ident = r_all[zi] @ digs[yi] % p  # y * z
            r_circ = r_all[u_codes - 1] @ rz_inv % p
            good = np.flatnonzero(ctx.prim[_charpoly_batch(ctx, r_circ)])
            if good.size == 0:
                raise ValueError("principal isotope has no primitive generator")

            def right_of(v):
                u = ly_inv @ v % p
                return r_all[int(u @ pw) - 1] @ rz_inv % p

            best = None
            for idx in good:
                basis = _power_basis(ctx, r_circ[idx], ident)
                key = _rebase_codes(ctx, basis, right_of)
                if best is None or key < best:
                    best = key
            counts[best] = counts.get(best, 0) + 1
    return counts
