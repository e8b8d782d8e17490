"""Exhaustive backtracking enumeration of standard sets with a fixed
primitive companion second matrix.

The traversal is depth-first with candidate columns in ascending code
order, which makes every output stream reproducible: completions arrive
in lexicographic order of their (a3, ..., ad) code tuples.  Sharding
splits the tree on the code of the first free column of A_3 (column 2;
column 1 is pinned by the standard-set normal form), so shards are
independent searches whose ordered concatenation equals the full run.
"""

from __future__ import annotations

import itertools
import multiprocessing
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from . import kernels
from .algebra import StandardSet
from .gf import (
    FieldSpec,
    MatrixGF,
    VectorGF,
    char_poly,
    companion_matrix,
    encode_matrix,
    is_primitive_poly,
    mat_rank,
    primitive_polys,
)

__all__ = [
    "PartialMatrix",
    "SearchConfig",
    "valid_columns",
    "complete_search",
    "search_all",
    "reference_complete_search",
    "format_record",
    "parse_record",
    "write_stream",
    "iter_records",
    "shard_units",
    "run_search_to_file",
]


@dataclass(frozen=True)
class PartialMatrix:
    """First k columns of the matrix currently being built."""

    spec: FieldSpec
    columns: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.columns)

    def as_array(self) -> np.ndarray:
        return np.array(self.columns, dtype=np.int64).T


@dataclass(frozen=True)
class SearchConfig:
    """A fixed second matrix plus an optional shard restriction.

    prefix, when given, is the vector code that column 2 of A_3 is pinned
    to; shards with different prefixes partition the search tree.
    """

    spec: FieldSpec
    a2: MatrixGF
    prefix: int | None = None

    def __post_init__(self) -> None:
        if self.a2.spec != self.spec:
            raise ValueError("mismatched field specs")
        if not is_primitive_poly(char_poly(self.a2)):
            raise ValueError("A_2 must have a primitive characteristic polynomial")
        if self.prefix is not None and not 0 <= self.prefix < self.spec.order:
            raise ValueError(f"prefix out of range: {self.prefix}")


def valid_columns(L: Sequence[MatrixGF], M: PartialMatrix) -> list[VectorGF]:
    """Columns c keeping every lambda-combination of [L | M | c] at full column rank.

    The scan fixes the coefficient of the partial matrix to 1; the d x (k+1)
    matrix sum(lambda_i * A_i[:, :k+1]) + [M | c] must have rank k+1 for all
    lambda in GF(p)^m.  Reference implementation; the kernels carry the
    equivalent coset-exclusion form.
    """
    spec = M.spec
    p, d = spec.p, spec.d
    k = M.k
    if k >= d:
        raise ValueError("partial matrix already complete")
    truncs = [m.entries[:, : k + 1].astype(np.int64) for m in L]
    mcols = M.as_array()
    out = []
    for code in range(spec.order):
        c = VectorGF.from_code(spec, code)
        joined = np.concatenate([mcols, np.array(c.coords, dtype=np.int64)[:, None]], axis=1)
        ok = True
        for lam in itertools.product(range(p), repeat=len(L)):
            combo = joined.copy()
            for coef, trunc in zip(lam, truncs):
                combo = combo + coef * trunc
            if mat_rank(combo % p, p=p) != k + 1:
                ok = False
                break
        if ok:
            out.append(c)
    return out


def reference_complete_search(config: SearchConfig) -> list[tuple[int, ...]]:
    """Direct transcription of the backtracking recursion on top of
    valid_columns; used as a cross-check of the kernels at toy scale."""
    spec = config.spec
    d = spec.d
    results: list[tuple[int, ...]] = []

    def complete(L: list[MatrixGF]):
        m = len(L)
        if m == d:
            results.append(tuple(encode_matrix(mat).value for mat in L[2:]))
            return
        first = VectorGF.unit(spec, m + 1)
        complete2(L, PartialMatrix(spec, (first.coords,)))

    def complete2(L: list[MatrixGF], M: PartialMatrix):
        if M.k == d:
            cols = np.array(M.columns, dtype=np.uint8).T
            complete(L + [MatrixGF(spec, cols)])
            return
        for c in valid_columns(L, M):
            if M.k == 1 and len(L) == 2 and config.prefix is not None and c.code != config.prefix:
                continue
            complete2(L, PartialMatrix(spec, M.columns + (c.coords,)))

    complete([MatrixGF.identity(spec), config.a2])
    return results


def complete_search(config: SearchConfig) -> Iterator[StandardSet]:
    """Every standard set extending (I, A_2), in depth-first lexicographic order.

    The kernel re-validates each emitted set independently of its pruning,
    so the StandardSet objects are constructed directly.
    """
    spec = config.spec
    unit = -1 if config.prefix is None else config.prefix
    a2_code = encode_matrix(config.a2).value
    for completion in kernels.search_completions(spec, config.a2.entries, unit):
        yield StandardSet.from_codes(spec, (a2_code,) + tuple(completion), validate=False)


def search_all(spec: FieldSpec) -> Iterator[tuple[int, StandardSet]]:
    """Union of complete_search over all primitive polynomials, tagged 1-based."""
    for index, f in enumerate(primitive_polys(spec), start=1):
        config = SearchConfig(spec, companion_matrix(f))
        for s in complete_search(config):
            yield index, s


# ---------------------------------------------------------------------------
# line-oriented persistence
# ---------------------------------------------------------------------------


def format_record(poly_index: int, codes: Iterable[int]) -> str:
    return ", ".join(str(x) for x in (poly_index, *codes))


def parse_record(line: str) -> tuple[int, tuple[int, ...]]:
    parts = [s for s in line.replace(",", " ").split() if s]
    values = [int(s) for s in parts]
    if len(values) < 2:
        raise ValueError(f"malformed record: {line!r}")
    return values[0], tuple(values[1:])


def iter_records(fh: TextIO) -> Iterator[tuple[int, tuple[int, ...]]]:
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        yield parse_record(line)


def write_stream(fh: TextIO, records: Iterable[tuple[int, Iterable[int]]]) -> int:
    count = 0
    for poly_index, codes in records:
        fh.write(format_record(poly_index, codes) + "\n")
        count += 1
    return count


# ---------------------------------------------------------------------------
# sharded driver with checkpoint/resume
# ---------------------------------------------------------------------------


def shard_units(spec: FieldSpec) -> list[int]:
    """Values column 2 of A_3 ranges over; one independent shard each."""
    if spec.d == 2:
        return [-1]
    return list(range(spec.order))


def _search_task(args) -> tuple[int, int, list[tuple[int, ...]]]:
    p, d, poly_index, unit = args
    spec = FieldSpec(p, d)
    f = primitive_polys(spec)[poly_index - 1]
    completions = kernels.search_completions(spec, companion_matrix(f).entries, unit)
    return poly_index, unit, completions


def _parts_dir(output_path: str) -> str:
    return output_path + ".parts"


def _part_name(poly_index: int, unit: int) -> str:
    return f"poly{poly_index:02d}_unit{unit + 1:05d}.txt"


def run_search_to_file(
    spec: FieldSpec,
    poly_indices: Sequence[int],
    output_path: str,
    shards: int = 1,
    resume: bool = False,
    log=None,
) -> dict[int, int]:
    """Run the search, persist the tuple stream, return per-polynomial counts.

    With shards > 1 the (polynomial, unit) tasks run on a process pool;
    each finished task is checkpointed under <output>.parts/ and skipped
    on --resume.  The merge concatenates parts in task order, so the final
    file is byte-identical however the work was scheduled.
    """
    polys = primitive_polys(spec)
    a2_codes = {i: encode_matrix(companion_matrix(polys[i - 1])).value for i in poly_indices}
    units = shard_units(spec)
    parts = _parts_dir(output_path)
    os.makedirs(parts, exist_ok=True)
    tasks = [
        (spec.p, spec.d, poly_index, unit)
        for poly_index in poly_indices
        for unit in units
    ]
    pending = []
    for task in tasks:
        path = os.path.join(parts, _part_name(task[2], task[3]))
        if resume and os.path.exists(path):
            continue
        pending.append(task)

    def write_part(poly_index, unit, completions):
        path = os.path.join(parts, _part_name(poly_index, unit))
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            write_stream(fh, ((poly_index, (a2_codes[poly_index],) + c) for c in completions))
        os.replace(tmp, path)

    if shards > 1 and len(pending) > 1:
        with multiprocessing.Pool(shards) as pool:
            for poly_index, unit, completions in pool.imap_unordered(_search_task, pending):
                write_part(poly_index, unit, completions)
    else:
        for task in pending:
            write_part(*_search_task(task))

    counts = dict.fromkeys(poly_indices, 0)
    with open(output_path, "w") as out:
        for poly_index in poly_indices:
            for unit in units:
                path = os.path.join(parts, _part_name(poly_index, unit))
                with open(path) as fh:
                    for line in fh:
                        out.write(line)
                        counts[poly_index] += 1
            if log:
                log(f"polynomial ({poly_index}) {polys[poly_index - 1]}: "
                    f"{counts[poly_index]} tuples")
    for name in os.listdir(parts):
        os.remove(os.path.join(parts, name))
    os.rmdir(parts)
    return counts
