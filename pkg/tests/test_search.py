import io
import itertools
import os

import numpy as np
import pytest

from semifields.gf import (
    FieldSpec,
    MatrixGF,
    VectorGF,
    companion_matrix,
    encode_matrix,
    primitive_polys,
)
from semifields.search import (
    PartialMatrix,
    SearchConfig,
    complete_search,
    format_record,
    iter_records,
    parse_record,
    reference_complete_search,
    run_search_to_file,
    search_all,
    shard_units,
    valid_columns,
    write_stream,
)
from semifields.algebra import validate_standard_set

from oracles import brute_force_completions, rank_by_span

S34 = FieldSpec(3, 4)
S32 = FieldSpec(3, 2)
S23 = FieldSpec(2, 3)


def brute_valid_columns(L, M):
    """Direct transcription of the column condition, via the span-rank oracle."""
    spec = M.spec
    p = spec.p
    k = M.k
    out = []
    for code in range(spec.order):
        c = np.array(VectorGF.from_code(spec, code).coords, dtype=np.int64)
        ok = True
        for lam in itertools.product(range(p), repeat=len(L)):
            combo = np.concatenate(
                [M.as_array(), c[:, None]], axis=1
            ) + sum(
                coef * m.entries[:, : k + 1].astype(np.int64) for coef, m in zip(lam, L)
            )
            if rank_by_span(combo % p, p) != k + 1:
                ok = False
                break
        if ok:
            out.append(code)
    return out


def test_valid_columns_matches_brute_force_81():
    f = primitive_polys(S34)[0]  # x^4 + x + 2
    L = [MatrixGF.identity(S34), companion_matrix(f)]
    M = PartialMatrix(S34, (VectorGF.unit(S34, 3).coords,))
    got = [c.code for c in valid_columns(L, M)]
    assert got == brute_valid_columns(L, M)


def test_valid_columns_matches_brute_force_from_scratch():
    # building A_2 itself: L = (I), M = [e_2]
    L = [MatrixGF.identity(S32)]
    M = PartialMatrix(S32, (VectorGF.unit(S32, 2).coords,))
    got = [c.code for c in valid_columns(L, M)]
    assert got == brute_valid_columns(L, M)
    # every excluded column really collapses the rank for some combination
    excluded = [c for c in range(S32.order) if c not in got]
    assert excluded  # the test is vacuous otherwise


def test_toy_search_matches_brute_force_23():
    for f in primitive_polys(S23):
        a2 = companion_matrix(f)
        config = SearchConfig(S23, a2)
        got = reference_complete_search(config)
        kernel = [s.codes[1:] for s in complete_search(config)]
        brute = brute_force_completions([np.eye(3, dtype=np.int64), a2.entries], 2)
        brute_codes = sorted(
            (encode_matrix(MatrixGF(S23, a3.astype(np.uint8))).value,) for a3 in brute
        )
        assert sorted(got) == brute_codes
        assert sorted(kernel) == brute_codes


def test_toy_search_32():
    # d = 2: the set (I, A_2) is complete as soon as A_2 is fixed
    for f in primitive_polys(S32):
        config = SearchConfig(S32, companion_matrix(f))
        sets = list(complete_search(config))
        assert len(sets) == 1
        assert validate_standard_set(list(sets[0].matrices)) == sets[0]


def test_prune_correctness_toy():
    # a column rejected at the first level of A_3 admits no completion
    f = primitive_polys(S23)[0]
    a2 = companion_matrix(f)
    L = [MatrixGF.identity(S23), a2]
    M = PartialMatrix(S23, (VectorGF.unit(S23, 3).coords,))
    accepted = {c.code for c in valid_columns(L, M)}
    brute = brute_force_completions([np.eye(3, dtype=np.int64), a2.entries], 2)
    used_second_columns = {
        VectorGF(S23, tuple(int(x) for x in a3[:, 1])).code for a3 in brute
    }
    assert used_second_columns <= accepted
    for code in set(range(S23.order)) - accepted:
        assert code not in used_second_columns


def test_search_emits_valid_sorted_sets():
    f = primitive_polys(S34)[5]  # x^4 + 2x^3 + 2, the A_2 = 19792 polynomial
    config = SearchConfig(S34, companion_matrix(f), prefix=None)
    seen = []
    for s in itertools.islice(complete_search(config), 60):
        seen.append(s.codes[1:])
        validate_standard_set(list(s.matrices))
    assert seen == sorted(seen)


def test_sharded_union_equals_full_run():
    f = primitive_polys(S23)[0]
    full = [s.codes for s in complete_search(SearchConfig(S23, companion_matrix(f)))]
    sharded = []
    for unit in shard_units(S23):
        config = SearchConfig(S23, companion_matrix(f), prefix=unit)
        sharded.extend(s.codes for s in complete_search(config))
    assert sharded == full


def test_search_config_rejects_imprimitive_a2():
    from semifields.gf import PolyGF

    with pytest.raises(ValueError):
        SearchConfig(S34, companion_matrix(PolyGF(S34, (1, 0, 0, 0, 1))))


def test_record_round_trip():
    line = format_record(3, (19792, 8866, 186745))
    assert line == "3, 19792, 8866, 186745"
    assert parse_record(line) == (3, (19792, 8866, 186745))
    fh = io.StringIO()
    write_stream(fh, [(1, (5, 6)), (2, (7, 8))])
    fh.seek(0)
    assert list(iter_records(fh)) == [(1, (5, 6)), (2, (7, 8))]


def test_run_search_to_file_and_resume(tmp_path, monkeypatch):
    out = tmp_path / "stream.txt"
    counts = run_search_to_file(S23, [1, 2], str(out), shards=1)
    direct = list(search_all(S23))
    assert sum(counts.values()) == len(direct)
    with open(out) as fh:
        records = list(iter_records(fh))
    assert [(i, s.codes) for i, s in direct] == list(records)

    # interrupted run: crash after a few tasks, leaving checkpoint parts
    import semifields.search as search_mod

    out2 = tmp_path / "resumed.txt"
    real_task = search_mod._search_task
    calls = {"n": 0}

    def flaky_task(args):
        calls["n"] += 1
        if calls["n"] > 3:
            raise KeyboardInterrupt
        return real_task(args)

    monkeypatch.setattr(search_mod, "_search_task", flaky_task)
    with pytest.raises(KeyboardInterrupt):
        run_search_to_file(S23, [1, 2], str(out2), shards=1)
    parts = str(out2) + ".parts"
    kept = os.listdir(parts)
    assert kept, "interrupted run must leave checkpoints behind"
    monkeypatch.setattr(search_mod, "_search_task", real_task)

    counts2 = run_search_to_file(S23, [1, 2], str(out2), shards=1, resume=True)
    assert counts2 == counts
    assert open(out).read() == open(out2).read()
    assert not os.path.exists(parts)

    # without --resume the checkpoints are recomputed, same bytes
    counts3 = run_search_to_file(S23, [1, 2], str(out2), shards=1)
    assert counts3 == counts
    assert open(out).read() == open(out2).read()


def test_sharded_merge_is_deterministic(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    run_search_to_file(S23, [1, 2], str(a), shards=1)
    run_search_to_file(S23, [1, 2], str(b), shards=3)
    assert open(a).read() == open(b).read()
