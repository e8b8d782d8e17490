import itertools

import numpy as np
import pytest

from semifields.algebra import (
    BadFirstColumn,
    IdentityNotPreserved,
    InvalidTuple,
    NoIdentity,
    NotIdentityFirst,
    Predicates,
    S3_ALL,
    S3_TRANSPOSITIONS,
    SingularCombination,
    StandardSet,
    basis_change,
    cube_from_set,
    isotopy_apply,
    multiply,
    predicates,
    principal_isotope,
    set_from_cube,
    sigma_transform,
    unitalize,
    validate_standard_set,
)
from semifields.gf import (
    FieldSpec,
    MatrixGF,
    PolyGF,
    VectorGF,
    companion_matrix,
    mat_is_invertible,
)

S34 = FieldSpec(3, 4)
S32 = FieldSpec(3, 2)

PLANE_I = (19792, 8866, 186745)
PLANE_II = (19792, 30332, 214473)
PLANE_III = (19818, 9001, 355161)


@pytest.fixture(scope="module")
def plane_i():
    return StandardSet.from_codes(S34, PLANE_I)


@pytest.fixture(scope="module")
def plane_ii():
    return StandardSet.from_codes(S34, PLANE_II)


@pytest.fixture(scope="module")
def plane_iii():
    return StandardSet.from_codes(S34, PLANE_III)


def rand_invertible(rng, spec, first_row_e1=False):
    while True:
        m = rng.integers(0, spec.p, size=(spec.d, spec.d), dtype=np.uint8)
        if first_row_e1:
            m[0] = 0
            m[0, 0] = 1
        mat = MatrixGF(spec, m)
        if mat_is_invertible(mat):
            return mat


def test_validate_plane_i(plane_i):
    assert plane_i.codes == PLANE_I


def test_validate_rejects_duplicate_identity():
    eye = MatrixGF.identity(S34)
    with pytest.raises(BadFirstColumn) as err:
        validate_standard_set([eye, eye, eye, eye])
    assert err.value.index == 2


def test_validate_rejects_non_identity_first():
    f = PolyGF(S32, (2, 2, 1))
    comp = companion_matrix(f)
    with pytest.raises(NotIdentityFirst):
        validate_standard_set([comp, comp])


def test_validate_rejects_singular_combination():
    # f(1) = 0 makes A_2 - I singular; x^2 + x + 1 has 1 + 1 + 1 = 0 mod 3
    comp = companion_matrix(PolyGF(S32, (1, 1, 1)))
    with pytest.raises(SingularCombination):
        validate_standard_set([MatrixGF.identity(S32), comp])


def test_from_codes_accepts_full_form(plane_i):
    full = StandardSet.from_codes(S34, (59293,) + PLANE_I)
    assert full == plane_i
    with pytest.raises(InvalidTuple):
        StandardSet.from_codes(S34, (59294,) + PLANE_I)
    with pytest.raises(InvalidTuple):
        StandardSet.from_codes(S34, (19792, 19792, 186745))


def test_multiply_identity_axioms(plane_iii):
    e = VectorGF.unit(S34, 1)
    rng = np.random.default_rng(2)
    for _ in range(20):
        b = VectorGF(S34, tuple(int(x) for x in rng.integers(0, 3, size=4)))
        assert multiply(plane_iii, e, b) == b
        assert multiply(plane_iii, b, e) == b


def test_plane_i_is_associative_field(plane_i):
    flags = predicates(plane_i)
    assert flags.commutative and flags.associative
    # direct exhaustive associativity scan over basis triples
    units = [VectorGF.unit(S34, i) for i in range(1, 5)]
    for a, b, c in itertools.product(units, repeat=3):
        assert multiply(plane_i, multiply(plane_i, a, b), c) == multiply(
            plane_i, a, multiply(plane_i, b, c)
        )


def test_predicates_of_fixtures(plane_i, plane_ii, plane_iii):
    assert predicates(plane_i) == Predicates(True, True)
    flags3 = predicates(plane_iii)
    assert flags3.commutative and not flags3.associative
    flags2 = predicates(plane_ii)
    assert not flags2.commutative and not flags2.associative


def test_no_zero_divisors_exhaustive(plane_iii):
    # literal scan over all 80 x 80 nonzero pairs
    nz = [VectorGF.from_code(S34, c) for c in range(1, 81)]
    for a in nz:
        for b in nz:
            assert not multiply(plane_iii, a, b).is_zero()


def test_cube_round_trip(plane_i, plane_iii):
    for d in (plane_i, plane_iii):
        assert set_from_cube(cube_from_set(d)) == d


def test_cube_entries_convention(plane_i):
    cube = cube_from_set(plane_i).entries
    stack = plane_i.as_array()
    for i1, i2, i3 in itertools.product(range(4), repeat=3):
        assert cube[i1, i2, i3] == stack[i2][i3, i1]


def test_commutative_cube_symmetry(plane_iii):
    cube = cube_from_set(plane_iii).entries
    assert np.array_equal(cube, cube.transpose(1, 0, 2))


def test_sigma_identity_and_involutions(plane_ii):
    cube = cube_from_set(plane_ii)
    assert sigma_transform(cube, (1, 2, 3)) == cube
    for name, tau in S3_TRANSPOSITIONS.items():
        assert sigma_transform(sigma_transform(cube, tau), tau) == cube


def test_sigma_12_fixes_commutative_cube(plane_i):
    cube = cube_from_set(plane_i)
    assert sigma_transform(cube, (2, 1, 3)) == cube


def test_sigma_explicit_entries(plane_ii):
    cube = cube_from_set(plane_ii).entries
    swapped = sigma_transform(cube_from_set(plane_ii), (2, 1, 3)).entries
    cycled = sigma_transform(cube_from_set(plane_ii), (2, 3, 1)).entries
    for i, j, k in itertools.product(range(4), repeat=3):
        assert swapped[i, j, k] == cube[j, i, k]
        assert cycled[i, j, k] == cube[j, k, i]


def test_sigma_13_breaks_identity(plane_ii):
    cube = sigma_transform(cube_from_set(plane_ii), (3, 2, 1))
    with pytest.raises(NoIdentity):
        set_from_cube(cube)


def test_isotopy_apply_identity(plane_i):
    cube = cube_from_set(plane_i)
    eye = MatrixGF.identity(S34)
    assert isotopy_apply(cube, eye, eye, eye) == cube


def test_isotopy_apply_composition(plane_ii):
    from semifields.gf import mat_mul

    rng = np.random.default_rng(8)
    cube = cube_from_set(plane_ii)
    for _ in range(5):
        fs = [rand_invertible(rng, S34) for _ in range(3)]
        gs = [rand_invertible(rng, S34) for _ in range(3)]
        lhs = isotopy_apply(isotopy_apply(cube, *gs), *fs)
        rhs = isotopy_apply(cube, *(mat_mul(f, g) for f, g in zip(fs, gs)))
        assert lhs == rhs


def test_cube_transform_commutes_with_index_permutation(plane_ii):
    # ( [F1,F2,F3] x C )^sigma = [F_{sigma^-1(1)}, ...] x C^sigma
    rng = np.random.default_rng(21)
    cube = cube_from_set(plane_ii)
    for sigma in S3_ALL:
        inv = [0, 0, 0]
        for k in range(3):
            inv[sigma[k] - 1] = k
        for _ in range(5):
            fs = [rand_invertible(rng, S34) for _ in range(3)]
            lhs = sigma_transform(isotopy_apply(cube, *fs), sigma)
            rhs = isotopy_apply(sigma_transform(cube, sigma), *(fs[i] for i in inv))
            assert lhs == rhs


def test_basis_change_identity(plane_iii):
    assert basis_change(plane_iii, MatrixGF.identity(S34)) == plane_iii


def test_basis_change_permuting_tail_preserves_a2_charpoly(plane_iii):
    from semifields.gf import char_poly

    perm = MatrixGF.from_rows(S34, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    moved = basis_change(plane_iii, perm)
    assert char_poly(moved.matrices[1]) == char_poly(plane_iii.matrices[1])


def test_basis_change_requires_identity_preservation(plane_iii):
    bad = MatrixGF.from_rows(S34, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(IdentityNotPreserved):
        basis_change(plane_iii, bad)


def test_principal_isotope_at_identity(plane_iii):
    e = VectorGF.unit(S34, 1)
    assert principal_isotope(plane_iii, e, e) == plane_iii


def test_principal_isotope_identity_element(plane_ii, plane_iii):
    rng = np.random.default_rng(13)
    for d in (plane_ii, plane_iii):
        for _ in range(6):
            y = VectorGF.from_code(S34, int(rng.integers(1, 81)))
            z = VectorGF.from_code(S34, int(rng.integers(1, 81)))
            iso = principal_isotope(d, y, z)
            e = VectorGF.unit(S34, 1)
            for _ in range(5):
                b = VectorGF.from_code(S34, int(rng.integers(1, 81)))
                assert multiply(iso, e, b) == b
                assert multiply(iso, b, e) == b


def test_unitalize_of_unital_cube_is_same_set(plane_iii):
    cube = cube_from_set(plane_iii)
    assert unitalize(cube) == plane_iii


def test_unitalize_sigma_cubes_validate(plane_ii):
    cube = cube_from_set(plane_ii)
    for sigma in S3_ALL:
        result = unitalize(sigma_transform(cube, sigma))
        assert isinstance(result, StandardSet)  # construction re-validates
