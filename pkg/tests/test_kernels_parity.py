"""The compiled and pure backends must agree bit for bit."""

import numpy as np
import pytest

from semifields import kernels
from semifields.algebra import StandardSet
from semifields.fixtures import PLANES, SPEC_81
from semifields.gf import FieldSpec, companion_matrix, primitive_polys

BACKENDS = kernels.available_backends()

pytestmark = pytest.mark.skipif(
    len(BACKENDS) < 2, reason="compiled backend not built"
)

S32 = FieldSpec(3, 2)
S23 = FieldSpec(2, 3)


def both(fn):
    results = [fn(module) for _, module in BACKENDS]
    assert results[0] == results[1]
    return results[0]


def test_toy_searches_agree():
    for spec in (S23, S32):
        for f in primitive_polys(spec):
            a2 = companion_matrix(f).entries
            both(lambda b: kernels.search_completions(spec, a2, backend=b))


def test_sharded_search_81_agrees():
    a2 = companion_matrix(primitive_polys(SPEC_81)[0]).entries
    total = 0
    for unit in range(12):
        res = both(lambda b: kernels.search_completions(SPEC_81, a2, unit, backend=b))
        total += len(res)
    assert total > 0


def test_keys_and_aut_agree_on_fixtures():
    for fx in PLANES:
        mats = StandardSet.from_codes(SPEC_81, fx.codes).as_array()
        both(lambda b: kernels.canonical_key_codes(SPEC_81, mats, backend=b))
        both(lambda b: kernels.cyclic_rep_codes(SPEC_81, mats, backend=b))
        aut = both(lambda b: kernels.aut_order_of(SPEC_81, mats, backend=b))
        assert aut == fx.expected_aut


def test_isotope_keys_agree_on_toys():
    from semifields.algebra import validate_standard_set
    from semifields.gf import MatrixGF, mat_mul

    for spec in (S32, S23):
        f = primitive_polys(spec)[0]
        mats = [MatrixGF.identity(spec), companion_matrix(f)]
        for _ in range(spec.d - 2):
            mats.append(mat_mul(mats[-1], mats[1]))
        stack = validate_standard_set(mats).as_array()
        counts = both(lambda b: kernels.isotope_key_counts(spec, stack, backend=b))
        assert sum(counts.values()) == (spec.order - 1) ** 2


def test_isotope_keys_agree_on_one_plane():
    mats = StandardSet.from_codes(SPEC_81, PLANES[0].codes).as_array()
    counts = both(lambda b: kernels.isotope_key_counts(SPEC_81, mats, backend=b))
    assert sum(counts.values()) == 6400


def test_pure_batch_charpoly_matches_scalar_path():
    from semifields import _core_py
    from semifields.gf import _charpoly_ints

    rng = np.random.default_rng(4)
    for spec in (S23, S32, SPEC_81, FieldSpec(5, 3)):
        ctx = kernels.get_context(spec, _core_py)
        mats = rng.integers(0, spec.p, size=(40, spec.d, spec.d), dtype=np.int64)
        packed = _core_py._charpoly_batch(ctx, mats)
        for mat, value in zip(mats, packed):
            coeffs = _charpoly_ints(mat, spec.p)
            assert int(value) == sum(c * spec.p**k for k, c in enumerate(coeffs[: spec.d]))


def test_keys_agree_on_search_sample():
    # canonical keys of real search outputs, both backends
    a2 = companion_matrix(primitive_polys(SPEC_81)[0])
    completions = kernels.search_completions(SPEC_81, a2.entries, unit=1)
    from semifields.gf import encode_matrix

    a2_code = encode_matrix(a2).value
    assert completions
    for completion in completions[:40]:
        mats = StandardSet.from_codes(
            SPEC_81, (a2_code,) + tuple(completion), validate=False
        ).as_array()
        both(lambda b: kernels.canonical_key_codes(SPEC_81, mats, backend=b))
