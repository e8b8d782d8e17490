"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the same workloads through every importable backend, checks the
outputs agree, and prints wall times with the speedup of the compiled
path.  The default workload keeps the pure backend under a minute; pass
full=True for a full-size search polynomial and plane expansion.
"""

from __future__ import annotations

import time

from . import kernels
from .algebra import StandardSet
from .fixtures import PLANES, SPEC_81
from .gf import FieldSpec, companion_matrix, primitive_polys


def _workloads(full: bool):
    spec23 = FieldSpec(2, 3)
    spec32 = FieldSpec(3, 2)
    plane_vii = StandardSet.from_codes(SPEC_81, PLANES[6].codes).as_array()
    fixture_arrays = [StandardSet.from_codes(SPEC_81, fx.codes).as_array() for fx in PLANES]
    poly = primitive_polys(SPEC_81)[0]
    a2 = companion_matrix(poly).entries

    def search_toy(backend):
        out = []
        for s, f in ((spec23, primitive_polys(spec23)[0]), (spec32, primitive_polys(spec32)[0])):
            out.append(kernels.search_completions(s, companion_matrix(f).entries,
                                                  backend=backend))
        return out

    def search_shard(backend):
        # nine shards of the first order-81 polynomial
        return [kernels.search_completions(SPEC_81, a2, unit, backend=backend)
                for unit in range(9)]

    def search_full(backend):
        return kernels.search_completions(SPEC_81, a2, backend=backend)

    def keys_fixtures(backend):
        return [kernels.canonical_key_codes(SPEC_81, m, backend=backend)
                for m in fixture_arrays]

    def aut_fixtures(backend):
        return [kernels.aut_order_of(SPEC_81, m, backend=backend) for m in fixture_arrays]

    # toy isotope workload: the field GF(9)
    from .gf import encode_matrix

    gf9 = StandardSet.from_codes(
        spec32, (encode_matrix(companion_matrix(primitive_polys(spec32)[0])).value,)
    ).as_array()

    def isotopes_gf9(backend):
        return kernels.isotope_key_counts(spec32, gf9, backend=backend)

    def isotopes_plane_vii(backend):
        return kernels.isotope_key_counts(SPEC_81, plane_vii, backend=backend)

    work = [
        ("toy searches (2,3)+(3,2)", search_toy),
        ("order-81 search, 9 shards", search_shard),
        ("canonical keys, 12 planes", keys_fixtures),
        ("automorphism counts, 12 planes", aut_fixtures),
        ("isotope keys, GF(9)", isotopes_gf9),
    ]
    if full:
        work.append(("order-81 search, polynomial 1", search_full))
        work.append(("isotope keys, plane VII", isotopes_plane_vii))
    return work


def run_benchmarks(full: bool = False) -> int:
    backends = kernels.available_backends()
    names = [name for name, _ in backends]
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    if len(backends) == 1:
        print("compiled backend not built; timing the pure backend only")
    rows = []
    for title, fn in _workloads(full):
        times = {}
        outputs = {}
        for name, module in backends:
            start = time.perf_counter()
            outputs[name] = fn(module)
            times[name] = time.perf_counter() - start
        agree = len({repr(v) for v in outputs.values()}) == 1
        rows.append((title, times, agree))
    width = max(len(r[0]) for r in rows)
    header = "workload".ljust(width) + "  " + "".join(f"{n:>12}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}  match"
    else:
        header += "  match"
    print(header)
    print("-" * len(header))
    ok = True
    for title, times, agree in rows:
        ok &= agree
        line = title.ljust(width) + "  "
        line += "".join(f"{times[n]:>11.3f}s" for n in names)
        if len(names) > 1:
            line += f"{times[names[-1]] / times[names[0]]:>9.1f}x"
        line += f"  {'yes' if agree else 'NO'}"
        print(line)
    if not ok:
        print("error: backend outputs disagree")
        return 1
    return 0
