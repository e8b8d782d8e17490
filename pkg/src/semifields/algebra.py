"""Semifield data model: standard matrix sets, 3-cubes, and isotopy machinery.

A semifield of order p^d is carried as its standard set: the list
(A_1 = I, A_2, ..., A_d) of right-multiplication matrices, where A_i has
first column e_i and every nonzero linear combination of the A_i is
invertible.  The column-vector convention is used throughout: maps act on
the left of coordinate columns, so a * b = (sum_i b_i A_i) a.

The 3-cube of structure constants uses the index convention
(left factor, right factor, output coordinate):
cube[i1, i2, i3] is the x_{i3}-coordinate of x_{i1} x_{i2}, i.e. the
entry of A_{i2} in row i3, column i1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .gf import (
    FieldSpec,
    MatrixCode,
    MatrixGF,
    VectorGF,
    _check_entries,
    _inv_mod,
    _rank_mod,
    decode_matrix,
    encode_matrix,
    mat_is_invertible,
)

__all__ = [
    "Element",
    "StandardSet",
    "ThreeCube",
    "IsotopyTriple",
    "PermS3",
    "S3_ALL",
    "S3_TRANSPOSITIONS",
    "StandardSetError",
    "NotIdentityFirst",
    "BadFirstColumn",
    "SingularCombination",
    "NoIdentity",
    "IdentityNotPreserved",
    "InvalidTuple",
    "Predicates",
    "validate_standard_set",
    "multiply",
    "cube_from_set",
    "set_from_cube",
    "sigma_transform",
    "isotopy_apply",
    "basis_change",
    "principal_isotope",
    "unitalize",
    "predicates",
]

Element = VectorGF

# permutations of {1, 2, 3} written as (sigma(1), sigma(2), sigma(3))
PermS3 = tuple[int, int, int]
S3_ALL: tuple[PermS3, ...] = (
    (1, 2, 3),
    (1, 3, 2),
    (2, 1, 3),
    (2, 3, 1),
    (3, 1, 2),
    (3, 2, 1),
)
S3_TRANSPOSITIONS: dict[str, PermS3] = {
    "12": (2, 1, 3),
    "13": (3, 2, 1),
    "23": (1, 3, 2),
}


class StandardSetError(ValueError):
    """A matrix list violates one of the standard-set conditions."""


class NotIdentityFirst(StandardSetError):
    pass


class BadFirstColumn(StandardSetError):
    def __init__(self, index: int):
        super().__init__(f"matrix {index} does not have first column e_{index}")
        self.index = index


class SingularCombination(StandardSetError):
    def __init__(self, lambdas: tuple[int, ...]):
        super().__init__(f"combination {lambdas} of the matrices is singular")
        self.lambdas = lambdas


class NoIdentity(ValueError):
    """The cube's basis-1 slices do not encode a two-sided identity."""


class IdentityNotPreserved(ValueError):
    """A basis change moved the identity away from the first basis vector."""


class InvalidTuple(ValueError):
    """Matrix codes that do not decode to a valid standard set."""


@dataclass(frozen=True, eq=False)
class StandardSet:
    """Validated list (A_1 = I, A_2, ..., A_d) of right-multiplication matrices.

    The dataclass constructor trusts its input; route untrusted matrices
    through validate_standard_set or from_codes.
    """

    spec: FieldSpec
    matrices: tuple[MatrixGF, ...]

    @property
    def codes(self) -> tuple[int, ...]:
        """Code values of A_2..A_d (A_1 is implied)."""
        return tuple(encode_matrix(m).value for m in self.matrices[1:])

    def as_array(self) -> np.ndarray:
        """(d, d, d) uint8 stack with [i] = A_{i+1}."""
        return np.stack([m.entries for m in self.matrices])

    @classmethod
    def from_codes(cls, spec: FieldSpec, codes, validate: bool = True) -> "StandardSet":
        """Decode '(a2, ..., ad)' or '(a1, a2, ..., ad)' code tuples.

        With validate=True (the default for untrusted input) the decoded
        matrices go through the full standard-set check and raise
        InvalidTuple on failure.
        """
        codes = tuple(int(c) for c in codes)
        if len(codes) == spec.d:
            ident_value = encode_matrix(MatrixGF.identity(spec)).value
            if codes[0] != ident_value:
                raise InvalidTuple(f"leading code {codes[0]} is not the identity matrix")
            codes = codes[1:]
        if len(codes) != spec.d - 1:
            raise InvalidTuple(f"expected {spec.d - 1} or {spec.d} codes, got {len(codes)}")
        try:
            mats = [MatrixGF.identity(spec)]
            for i, value in enumerate(codes, start=2):
                mats.append(decode_matrix(MatrixCode(i, value), spec))
        except ValueError as exc:
            raise InvalidTuple(str(exc)) from exc
        if not validate:
            return cls(spec, tuple(mats))
        try:
            return validate_standard_set(mats)
        except StandardSetError as exc:
            raise InvalidTuple(str(exc)) from exc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StandardSet):
            return NotImplemented
        return self.spec == other.spec and self.matrices == other.matrices

    def __hash__(self) -> int:
        return hash((self.spec, self.matrices))


@dataclass(frozen=True, eq=False)
class ThreeCube:
    """d^3 structure constants of a (pre)semifield multiplication."""

    spec: FieldSpec
    entries: np.ndarray

    def __post_init__(self) -> None:
        d = self.spec.d
        object.__setattr__(self, "entries", _check_entries(self.spec, self.entries, (d, d, d)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThreeCube):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.spec, self.entries.tobytes()))


@dataclass(frozen=True)
class IsotopyTriple:
    """Triple (F, G, H) of invertible maps with H(ab) = F(a)G(b)."""

    F: MatrixGF
    G: MatrixGF
    H: MatrixGF

    def __post_init__(self) -> None:
        for m in (self.F, self.G, self.H):
            if not mat_is_invertible(m):
                raise ValueError("isotopy components must be invertible")


@dataclass(frozen=True)
class Predicates:
    commutative: bool
    associative: bool


def _normalized_tuples(p: int, d: int):
    """Nonzero tuples with leading nonzero coefficient scaled to 1."""
    for lead in range(d):
        for rest in itertools.product(range(p), repeat=d - 1 - lead):
            yield (0,) * lead + (1,) + rest


def validate_standard_set(matrices) -> StandardSet:
    """Check the three standard-set conditions and wrap the result.

    The invertibility scan normalizes the leading nonzero coefficient
    to 1, testing (p^d - 1)/(p - 1) combinations.
    """
    matrices = tuple(matrices)
    if not matrices:
        raise StandardSetError("empty matrix list")
    spec = matrices[0].spec
    if len(matrices) != spec.d:
        raise StandardSetError(f"expected {spec.d} matrices, got {len(matrices)}")
    if any(m.spec != spec for m in matrices):
        raise StandardSetError("mixed field specs")
    if matrices[0] != MatrixGF.identity(spec):
        raise NotIdentityFirst("first matrix is not the identity")
    for i, m in enumerate(matrices, start=1):
        if m.column(1) != VectorGF.unit(spec, i):
            raise BadFirstColumn(i)
    stack = np.stack([m.entries for m in matrices]).astype(np.int64)
    for lam in _normalized_tuples(spec.p, spec.d):
        combo = np.tensordot(np.array(lam, dtype=np.int64), stack, axes=([0], [0])) % spec.p
        if _rank_mod(combo, spec.p) < spec.d:
            raise SingularCombination(lam)
    return StandardSet(spec, matrices)


def multiply(D: StandardSet, a: Element, b: Element) -> Element:
    """Product a * b = (sum_i b_i A_i) a."""
    p = D.spec.p
    stack = D.as_array().astype(np.int64)
    right = np.tensordot(b.as_array(), stack, axes=([0], [0])) % p
    out = right @ a.as_array() % p
    return VectorGF(D.spec, tuple(int(x) for x in out))


def cube_from_set(D: StandardSet) -> ThreeCube:
    """cube[i1, i2, i3] = entry of A_{i2} in row i3, column i1."""
    stack = D.as_array()  # [j] = A_{j+1}, entry (row, col)
    cube = np.einsum("jki->ijk", stack)
    return ThreeCube(D.spec, np.ascontiguousarray(cube))


def set_from_cube(C: ThreeCube) -> StandardSet:
    """Inverse of cube_from_set; requires a two-sided identity at x_1."""
    spec = C.spec
    d = spec.d
    eye = np.eye(d, dtype=np.uint8)
    if not np.array_equal(C.entries[0], eye) or not np.array_equal(C.entries[:, 0, :], eye):
        raise NoIdentity("basis-1 slices of the cube do not encode an identity")
    mats = [MatrixGF(spec, np.ascontiguousarray(np.einsum("ijk->jki", C.entries)[j]))
            for j in range(d)]
    return validate_standard_set(mats)


def _sigma_axes(sigma: PermS3) -> tuple[int, int, int]:
    # out[t] = in[t o sigma]; numpy.transpose needs the inverse permutation
    zero_based = tuple(s - 1 for s in sigma)
    axes = [0, 0, 0]
    for k, s in enumerate(zero_based):
        axes[s] = k
    return tuple(axes)


def sigma_transform(C: ThreeCube, sigma: PermS3) -> ThreeCube:
    """Permute cube indices: out[i1, i2, i3] = in[i_{sigma(1)}, i_{sigma(2)}, i_{sigma(3)}]."""
    if sorted(sigma) != [1, 2, 3]:
        raise ValueError(f"not a permutation of (1, 2, 3): {sigma}")
    out = np.transpose(C.entries, _sigma_axes(sigma))
    return ThreeCube(C.spec, np.ascontiguousarray(out))


def isotopy_apply(C: ThreeCube, F1: MatrixGF, F2: MatrixGF, F3: MatrixGF) -> ThreeCube:
    """Transform the cube by three invertible maps, one per index."""
    for m in (F1, F2, F3):
        if not mat_is_invertible(m):
            raise ValueError("cube transform components must be invertible")
    p = C.spec.p
    out = np.einsum(
        "ia,jb,kc,abc->ijk",
        F1.entries.astype(np.int64),
        F2.entries.astype(np.int64),
        F3.entries.astype(np.int64),
        C.entries.astype(np.int64),
    ) % p
    return ThreeCube(C.spec, out.astype(np.uint8))


def basis_change(D: StandardSet, P: MatrixGF) -> StandardSet:
    """Rewrite D in the basis whose vectors are the rows of P.

    The identity must stay at the first basis position (first row of P
    equal to e_1), otherwise IdentityNotPreserved is raised.
    """
    spec = D.spec
    if not mat_is_invertible(P):
        raise ValueError("basis change matrix must be invertible")
    p_inv_t = MatrixGF(spec, _inv_mod(P.entries, spec.p).T.astype(np.uint8))
    cube = isotopy_apply(cube_from_set(D), P, P, p_inv_t)
    try:
        return set_from_cube(cube)
    except NoIdentity as exc:
        raise IdentityNotPreserved(str(exc)) from exc


def _right_mult(stack: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Matrix of right multiplication by the element with coordinates v."""
    return np.tensordot(v, stack, axes=([0], [0])) % p


def _left_mult(stack: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Matrix of left multiplication: column j is A_{j+1} v."""
    return np.einsum("jkl,l->kj", stack, v) % p


def _complete_basis(first: np.ndarray, p: int) -> np.ndarray:
    """Invertible matrix whose first column is `first`, completed greedily
    with standard basis vectors in index order."""
    d = len(first)
    cols = [first % p]
    for i in range(d):
        if len(cols) == d:
            break
        cand = np.zeros(d, dtype=np.int64)
        cand[i] = 1
        trial = np.stack(cols + [cand], axis=1)
        if _rank_mod(trial, p) == len(cols) + 1:
            cols.append(cand)
    basis = np.stack(cols, axis=1)
    assert _rank_mod(basis, p) == d
    return basis


def _rebase_product(spec: FieldSpec, right_of, identity_vec: np.ndarray) -> StandardSet:
    """Standard set of a product given its right-multiplication operator.

    right_of(v) must return the matrix of w -> w * v; the product's
    identity element is moved to the first basis position, completing the
    basis greedily with standard basis vectors.
    """
    p, d = spec.p, spec.d
    basis = _complete_basis(identity_vec, p)
    basis_inv = _inv_mod(basis, p)
    mats = [MatrixGF.identity(spec)]
    for i in range(1, d):
        r = right_of(basis[:, i])
        mats.append(MatrixGF(spec, (basis_inv @ r @ basis % p).astype(np.uint8)))
    return validate_standard_set(mats)


def principal_isotope(D: StandardSet, y: Element, z: Element) -> StandardSet:
    """Isotope with product a . b = (a R_z^{-1}) * (b L_y^{-1}), identity y*z.

    The result is expressed in a basis whose first element is y*z.
    """
    if y.is_zero() or z.is_zero():
        raise ValueError("principal isotope parameters must be nonzero")
    spec = D.spec
    p = spec.p
    stack = D.as_array().astype(np.int64)
    rz_inv = _inv_mod(_right_mult(stack, z.as_array(), p), p)
    ly_inv = _inv_mod(_left_mult(stack, y.as_array(), p), p)
    identity_vec = _right_mult(stack, z.as_array(), p) @ y.as_array() % p

    def right_of(v):
        u = ly_inv @ v % p
        return _right_mult(stack, u, p) @ rz_inv % p

    return _rebase_product(spec, right_of, identity_vec)


def unitalize(C: ThreeCube, u: Element | None = None) -> StandardSet:
    """Semifield isotopic to the presemifield cube, with identity u*u at x_1.

    Uses the principal-isotope construction with both parameters equal
    to u (default: the first basis vector).
    """
    spec = C.spec
    p = spec.p
    if u is None:
        u = VectorGF.unit(spec, 1)
    if u.is_zero():
        raise ValueError("unitalize parameter must be nonzero")
    cube = C.entries.astype(np.int64)
    uv = u.as_array()

    def star_right(v):
        # matrix of w -> w * v under the cube product
        return np.einsum("j,ijk->ki", v, cube) % p

    ru = star_right(uv)
    lu = np.einsum("i,ijk->kj", uv, cube) % p
    ru_inv = _inv_mod(ru, p)
    lu_inv = _inv_mod(lu, p)
    identity_vec = ru @ uv % p  # u * u

    def right_of(v):
        return star_right(lu_inv @ v % p) @ ru_inv % p

    return _rebase_product(spec, right_of, identity_vec)


def predicates(D: StandardSet) -> Predicates:
    """Commutativity (cube symmetry in the first two indices) and associativity."""
    cube = cube_from_set(D).entries
    commutative = np.array_equal(cube, cube.transpose(1, 0, 2))
    stack = D.as_array().astype(np.int64)
    p, d = D.spec.p, D.spec.d
    associative = True
    for k in range(d):
        for j in range(d):
            lhs = stack[k] @ stack[j] % p
            rhs = np.tensordot(stack[k][:, j], stack, axes=([0], [0])) % p
            if not np.array_equal(lhs, rhs):
                associative = False
                break
        if not associative:
            break
    return Predicates(bool(commutative), bool(associative))
