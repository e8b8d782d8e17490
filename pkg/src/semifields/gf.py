"""Exact arithmetic over small prime fields GF(p).

Dense d x d matrices, characteristic and primitive polynomials, and the
integer encoding of matrices whose first column is a standard basis
vector.  Conventions used throughout the package:

* entries are residues in [0, p); rows and columns are 1-indexed in
  documentation, 0-indexed in arrays;
* a vector (v_1, ..., v_d) has integer code sum v_r * p^(d-r), i.e. the
  first coordinate is the most significant base-p digit;
* a matrix with first column e_i encodes as the integer whose base-p
  digit at position (d-c)*d + (d-r) is the entry in row r, column c,
  for c in [2, d]; the first column is carried separately as i.

All operations are pure functions on immutable values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "FieldSpec",
    "VectorGF",
    "MatrixGF",
    "PolyGF",
    "MatrixCode",
    "SingularMatrix",
    "NotStandardColumn",
    "mat_rank",
    "mat_is_invertible",
    "mat_mul",
    "mat_vec",
    "mat_inv",
    "char_poly",
    "companion_matrix",
    "is_primitive_poly",
    "primitive_polys",
    "encode_matrix",
    "decode_matrix",
    "is_prime",
    "poly_to_int",
]

MAX_PRIME = 13
_U64 = 2**64


class SingularMatrix(ValueError):
    """Inverse requested for a matrix of deficient rank."""


class NotStandardColumn(ValueError):
    """Matrix encoding needs the first column to be a standard basis vector."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Prime modulus p and dimension d of the ambient space GF(p)^d."""

    p: int
    d: int

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p > MAX_PRIME:
            raise ValueError(f"p must be a prime <= {MAX_PRIME}, got {self.p}")
        if not 2 <= self.d <= 6:
            raise ValueError(f"d must be in [2, 6], got {self.d}")
        # one bound implies the other for d >= 2, but both are contractual
        if self.p**self.d - 1 >= _U64 or self.code_bound >= _U64:
            raise ValueError(f"GF({self.p})^{self.d} exceeds 64-bit code range")

    @property
    def order(self) -> int:
        """Number of elements p^d."""
        return self.p**self.d

    @property
    def code_bound(self) -> int:
        """Exclusive upper bound p^(d*(d-1)) for matrix code values."""
        return self.p ** (self.d * (self.d - 1))


def _check_entries(spec: FieldSpec, arr: np.ndarray, shape: tuple) -> np.ndarray:
    a = np.ascontiguousarray(arr, dtype=np.uint8)
    if a.shape != shape:
        raise ValueError(f"expected shape {shape}, got {a.shape}")
    if a.max(initial=0) >= spec.p:
        raise ValueError(f"entries must lie in [0, {spec.p})")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class VectorGF:
    """Coordinate vector over GF(p), length d."""

    spec: FieldSpec
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.spec.d:
            raise ValueError("coordinate count must equal d")
        if any(not 0 <= c < self.spec.p for c in self.coords):
            raise ValueError(f"coordinates must lie in [0, {self.spec.p})")

    @classmethod
    def unit(cls, spec: FieldSpec, i: int) -> "VectorGF":
        """Standard basis vector e_i (1-indexed)."""
        if not 1 <= i <= spec.d:
            raise ValueError(f"unit index out of range: {i}")
        return cls(spec, tuple(1 if r == i - 1 else 0 for r in range(spec.d)))

    @classmethod
    def from_code(cls, spec: FieldSpec, code: int) -> "VectorGF":
        if not 0 <= code < spec.order:
            raise ValueError(f"vector code out of range: {code}")
        digits = []
        for r in range(spec.d):
            digits.append(code // spec.p ** (spec.d - 1 - r) % spec.p)
        return cls(spec, tuple(digits))

    @property
    def code(self) -> int:
        return sum(c * self.spec.p ** (self.spec.d - 1 - r) for r, c in enumerate(self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class MatrixGF:
    """Dense d x d matrix over GF(p), stored row-major and read-only."""

    spec: FieldSpec
    entries: np.ndarray

    def __post_init__(self) -> None:
        d = self.spec.d
        object.__setattr__(self, "entries", _check_entries(self.spec, self.entries, (d, d)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.spec, self.entries.tobytes()))

    @classmethod
    def identity(cls, spec: FieldSpec) -> "MatrixGF":
        return cls(spec, np.eye(spec.d, dtype=np.uint8))

    @classmethod
    def zeros(cls, spec: FieldSpec) -> "MatrixGF":
        return cls(spec, np.zeros((spec.d, spec.d), dtype=np.uint8))

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows) -> "MatrixGF":
        return cls(spec, np.array(rows, dtype=np.uint8))

    @classmethod
    def from_columns(cls, spec: FieldSpec, cols) -> "MatrixGF":
        return cls(spec, np.array(cols, dtype=np.uint8).T)

    def column(self, j: int) -> VectorGF:
        """Column j (1-indexed) as a vector."""
        return VectorGF(self.spec, tuple(int(x) for x in self.entries[:, j - 1]))


@dataclass(frozen=True)
class PolyGF:
    """Monic polynomial of degree d over GF(p); coeffs[k] multiplies x^k."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.spec.d + 1:
            raise ValueError("polynomial must have degree d")
        if self.coeffs[-1] != 1:
            raise ValueError("polynomial must be monic")
        if any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise ValueError(f"coefficients must lie in [0, {self.spec.p})")

    def __str__(self) -> str:
        terms = []
        for k in range(self.spec.d, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                base = "x" if k == 1 else f"x^{k}"
                terms.append(base if c == 1 else f"{c}{base}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class MatrixCode:
    """Integer encoding of a matrix whose first column is e_{first_col_index}."""

    first_col_index: int
    value: int


# ---------------------------------------------------------------------------
# elimination helpers (shared by the public matrix operations)
# ---------------------------------------------------------------------------


def _rank_mod(arr: np.ndarray, p: int) -> int:
    m = (np.array(arr, dtype=np.int64) % p).copy()
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if m[i, c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), p - 2, p) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
        if r == rows:
            break
    return r


def _inv_mod(arr: np.ndarray, p: int) -> np.ndarray:
    n = arr.shape[0]
    m = np.concatenate([np.array(arr, dtype=np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = -1
        for i in range(c, n):
            if m[i, c]:
                piv = i
                break
        if piv < 0:
            raise SingularMatrix("matrix is singular mod p")
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
        m[c] = m[c] * pow(int(m[c, c]), p - 2, p) % p
        for i in range(n):
            if i != c and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[c]) % p
    return m[:, n:]


def _charpoly_ints(arr: np.ndarray, p: int) -> tuple[int, ...]:
    """Coefficients of det(xI - arr) mod p, lowest degree first.

    Division-free (Samuelson/Berkowitz recursion), so the one code path
    serves every prime without pivoting edge cases.
    """
    a = np.array(arr, dtype=np.int64) % p
    n = a.shape[0]
    prev = np.array([1], dtype=np.int64)
    for k in range(n - 1, -1, -1):
        sub = a[k:, k:]
        m = n - k
        vec = np.zeros(m + 1, dtype=np.int64)
        vec[0] = 1
        vec[1] = -sub[0, 0] % p
        if m > 1:
            row = sub[0, 1:]
            inner = sub[1:, 1:]
            w = sub[1:, 0]
            vec[2] = -(row @ w) % p
            for t in range(3, m + 1):
                w = inner @ w % p
                vec[t] = -(row @ w) % p
        prev = np.convolve(vec, prev)[: m + 1] % p
    return tuple(int(c) for c in prev[::-1])


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def mat_rank(M, p: int | None = None) -> int:
    """Rank over GF(p); accepts a MatrixGF or a raw (possibly truncated) array."""
    if isinstance(M, MatrixGF):
        return _rank_mod(M.entries, M.spec.p)
    if p is None:
        raise TypeError("p is required for raw arrays")
    return _rank_mod(np.asarray(M), p)


def mat_is_invertible(M: MatrixGF) -> bool:
    return _rank_mod(M.entries, M.spec.p) == M.spec.d


def mat_mul(A: MatrixGF, B: MatrixGF) -> MatrixGF:
    if A.spec != B.spec:
        raise ValueError("mismatched field specs")
    prod = A.entries.astype(np.int64) @ B.entries.astype(np.int64) % A.spec.p
    return MatrixGF(A.spec, prod.astype(np.uint8))


def mat_vec(A: MatrixGF, v: VectorGF) -> VectorGF:
    if A.spec != v.spec:
        raise ValueError("mismatched field specs")
    out = A.entries.astype(np.int64) @ v.as_array() % A.spec.p
    return VectorGF(A.spec, tuple(int(x) for x in out))


def mat_inv(A: MatrixGF) -> MatrixGF:
    return MatrixGF(A.spec, _inv_mod(A.entries, A.spec.p).astype(np.uint8))


def char_poly(M: MatrixGF) -> PolyGF:
    """Characteristic polynomial det(xI - M) as a monic degree-d polynomial."""
    return PolyGF(M.spec, _charpoly_ints(M.entries, M.spec.p))


def companion_matrix(f: PolyGF) -> MatrixGF:
    """Companion matrix with subdiagonal 1s; column j is e_{j+1} for j < d."""
    spec = f.spec
    d, p = spec.d, spec.p
    m = np.zeros((d, d), dtype=np.uint8)
    for j in range(d - 1):
        m[j + 1, j] = 1
    for r in range(d):
        m[r, d - 1] = (-f.coeffs[r]) % p
    return MatrixGF(spec, m)


# polynomial arithmetic on plain coefficient lists (degree < d, lowest first)


def _poly_mulmod(a: list[int], b: list[int], f: tuple[int, ...], p: int) -> list[int]:
    d = len(f) - 1
    res = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(2 * d - 2, d - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for k in range(d):
                res[i - d + k] = (res[i - d + k] - c * f[k]) % p
    return res[:d]


def _poly_powmod(base: list[int], e: int, f: tuple[int, ...], p: int) -> list[int]:
    result = [1] + [0] * (len(f) - 2)
    acc = list(base)
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, f, p)
        acc = _poly_mulmod(acc, acc, f, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _is_primitive_coeffs(coeffs: tuple[int, ...], p: int, d: int) -> bool:
    if coeffs[0] == 0:
        return False  # x divides f, so x is not even a unit mod f
    order = p**d - 1
    x = [0, 1] + [0] * (d - 2)
    one = [1] + [0] * (d - 1)
    if _poly_powmod(x, order, coeffs, p) != one:
        return False
    return all(_poly_powmod(x, order // r, coeffs, p) != one for r in _prime_factors(order))


def is_primitive_poly(f: PolyGF) -> bool:
    """True iff the residue of x mod f has multiplicative order p^d - 1.

    That forces f irreducible, so this is the usual primitivity test.
    """
    return _is_primitive_coeffs(f.coeffs, f.spec.p, f.spec.d)


@lru_cache(maxsize=None)
def _primitive_coeff_list(p: int, d: int) -> tuple[tuple[int, ...], ...]:
    out = []
    # lexicographic on (c_{d-1}, ..., c_1, c_0), i.e. highest power first
    for t in itertools.product(range(p), repeat=d):
        coeffs = tuple(t[d - 1 - k] for k in range(d)) + (1,)
        if _is_primitive_coeffs(coeffs, p, d):
            out.append(coeffs)
    return tuple(out)


def primitive_polys(spec: FieldSpec) -> list[PolyGF]:
    """All monic primitive polynomials of degree d, in lexicographic coefficient order."""
    return [PolyGF(spec, c) for c in _primitive_coeff_list(spec.p, spec.d)]


def poly_to_int(f: PolyGF) -> int:
    """Pack the non-leading coefficients as sum coeffs[k] * p^k (k < d)."""
    return sum(c * f.spec.p**k for k, c in enumerate(f.coeffs[: f.spec.d]))


def encode_matrix(M: MatrixGF) -> MatrixCode:
    """Integer code of a matrix whose first column is a standard basis vector."""
    spec = M.spec
    d, p = spec.d, spec.p
    col0 = M.entries[:, 0]
    nz = np.flatnonzero(col0)
    if len(nz) != 1 or col0[nz[0]] != 1:
        raise NotStandardColumn(f"first column {col0.tolist()} is not a standard basis vector")
    value = 0
    for c in range(1, d):
        for r in range(d):
            value += int(M.entries[r, c]) * p ** ((d - 1 - c) * d + (d - 1 - r))
    return MatrixCode(int(nz[0]) + 1, value)


def decode_matrix(code: MatrixCode, spec: FieldSpec) -> MatrixGF:
    """Inverse of encode_matrix; the first column is set to e_{first_col_index}."""
    if not 1 <= code.first_col_index <= spec.d:
        raise ValueError(f"first column index out of range: {code.first_col_index}")
    if not 0 <= code.value < spec.code_bound:
        raise ValueError(f"matrix code out of range: {code.value}")
    d, p = spec.d, spec.p
    m = np.zeros((d, d), dtype=np.uint8)
    m[code.first_col_index - 1, 0] = 1
    for c in range(1, d):
        for r in range(d):
            m[r, c] = code.value // p ** ((d - 1 - c) * d + (d - 1 - r)) % p
    return MatrixGF(spec, m)
