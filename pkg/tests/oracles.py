"""Independent brute-force oracles used to pin expected values in tests.

Everything here is deliberately naive (cofactor expansions, exhaustive
span walks, full group scans) and shares no code with the package's own
computation paths.
"""

import itertools

import numpy as np


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [(x + y) % p for x, y in zip(a, b)]


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def charpoly_by_cofactors(mat, p):
    """det(xI - M) by recursive cofactor expansion; lowest-degree first."""
    d = len(mat)
    entry = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            const = (-int(mat[i][j])) % p
            entry[i][j] = [const, 1] if i == j else [const]

    def det(rows, cols):
        if len(rows) == 1:
            return entry[rows[0]][cols[0]]
        total = [0]
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1 :])
            term = _poly_mul(entry[rows[0]][c], minor, p)
            if k % 2:
                term = [(-t) % p for t in term]
            total = _poly_add(total, term, p)
        return total

    idx = tuple(range(d))
    out = det(idx, idx)
    out = out + [0] * (d + 1 - len(out))
    return tuple(out)


def order_of_x(coeffs, p):
    """Multiplicative order of x in GF(p)[x]/(f), or None if x is not a unit.

    coeffs is the full monic coefficient tuple, lowest degree first.
    """
    d = len(coeffs) - 1
    if coeffs[0] == 0:
        return None
    one = [1] + [0] * (d - 1)
    cur = list(one)
    for power in range(1, p**d + 1):
        # cur <- x * cur reduced mod f, so cur == x^power after this step
        cur = [0] + cur
        lead = cur[d]
        cur = cur[:d]
        if lead:
            cur = [(c - lead * coeffs[i]) % p for i, c in enumerate(cur)]
        if cur == one:
            return power
    return None


def rank_by_span(mat, p):
    """Rank = log_p of the number of vectors spanned by the columns."""
    mat = np.asarray(mat, dtype=np.int64) % p
    span = {(0,) * mat.shape[0]}
    for j in range(mat.shape[1]):
        col = mat[:, j]
        span |= {tuple((np.array(s) + k * col) % p) for s in span for k in range(1, p)}
    size = len(span)
    r = 0
    while p**r < size:
        r += 1
    assert p**r == size
    return r


def all_invertible_matrices(d, p):
    """Every invertible d x d matrix over GF(p) (exhaustive; tiny d only)."""
    out = []
    for flat in itertools.product(range(p), repeat=d * d):
        m = np.array(flat, dtype=np.int64).reshape(d, d)
        if rank_by_span(m, p) == d:
            out.append(m)
    return out


def is_standard_set(mats, p):
    """Direct check of the standard-set conditions on a list of arrays."""
    d = len(mats)
    if not np.array_equal(np.asarray(mats[0]) % p, np.eye(d, dtype=np.int64)):
        return False
    for i, m in enumerate(mats):
        col = np.zeros(d, dtype=np.int64)
        col[i] = 1
        if not np.array_equal(np.asarray(m)[:, 0] % p, col):
            return False
    for lam in itertools.product(range(p), repeat=d):
        if not any(lam):
            continue
        combo = sum(l * np.asarray(m, dtype=np.int64) for l, m in zip(lam, mats)) % p
        if rank_by_span(combo, p) < d:
            return False
    return True


def brute_force_completions(identity_and_a2, p):
    """All valid third matrices A_3 for d = 3, by exhaustive enumeration."""
    d = 3
    base = [np.asarray(m, dtype=np.int64) for m in identity_and_a2]
    results = []
    for flat in itertools.product(range(p), repeat=d * (d - 1)):
        a3 = np.zeros((d, d), dtype=np.int64)
        a3[2, 0] = 1
        a3[:, 1] = flat[:d]
        a3[:, 2] = flat[d:]
        if is_standard_set(base + [a3], p):
            results.append(a3)
    return results


def brute_force_automorphisms(mats, p):
    """Count linear bijections F with F(ab) = F(a)F(b), by full GL scan."""
    d = len(mats)
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    count = 0
    for F in all_invertible_matrices(d, p):
        ok = True
        for j in range(d):
            # F(x_i x_j) for all i is F @ A_j; F(x_i)F(x_j) is R_{F x_j} @ F
            rhs = sum(int(F[r, j]) * mats[r] for r in range(d)) % p
            if not np.array_equal(F @ mats[j] % p, rhs @ F % p):
                ok = False
                break
        if ok:
            count += 1
    return count


def euler_phi(n):
    result = n
    m = n
    k = 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result
