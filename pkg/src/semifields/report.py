"""Report generation and classification-stage persistence.

Stage outputs are line-oriented text with decimal matrix codes plus a
'#'-prefixed header describing the stage; a JSON-lines sidecar with
self-describing field names is written next to each class file for
tooling.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import StandardSet
from .classify import Census, IsoClassRecord, PlaneClassRecord
from .fixtures import PLANES, KnownPlaneFixture
from .gf import FieldSpec

__all__ = [
    "CensusReport",
    "Table1Row",
    "AmbiguousFixtureMatch",
    "inventory_string",
    "write_iso_class_file",
    "write_plane_class_file",
    "read_header",
    "read_code_tuples",
    "build_table1",
    "render_table1",
    "render_table2",
]


class AmbiguousFixtureMatch(RuntimeError):
    """A fixture matched no class, or several, during label assignment."""


def inventory_string(inventory: Iterable[tuple[int, int]]) -> str:
    """(aut, count) pairs rendered as 'count/aut' terms, e.g. '12/1+2/4'."""
    return "+".join(f"{count}/{aut}" for aut, count in inventory)


def _flags_string(flags) -> str:
    return " ".join(f"{name}:{'y' if flags[name] else 'n'}" for name in ("12", "13", "23"))


def _codes_string(codes: Sequence[int]) -> str:
    return "(" + ", ".join(str(c) for c in codes) + ")"


# ---------------------------------------------------------------------------
# class-record files
# ---------------------------------------------------------------------------


def _write_header(fh, mode: str, spec: FieldSpec, n_classes: int, n_commutative: int) -> None:
    fh.write(f"# semifields classes mode={mode} p={spec.p} d={spec.d} "
             f"classes={n_classes} commutative={n_commutative}\n")


def read_header(path: str) -> dict | None:
    with open(path) as fh:
        first = fh.readline()
    if not first.startswith("# semifields classes"):
        return None
    out = {}
    for part in first.split()[3:]:
        key, value = part.split("=")
        out[key] = value if key == "mode" else int(value)
    return out


def write_iso_class_file(path: str, spec: FieldSpec, records: list[IsoClassRecord]) -> None:
    n_comm = sum(1 for r in records if r.commutative)
    with open(path, "w") as fh:
        _write_header(fh, "isomorphism", spec, len(records), n_comm)
        fh.write("# class_id, representative_codes, aut_order, commutative\n")
        for i, r in enumerate(records, 1):
            fh.write(f"{i}, {_codes_string(r.key.codes)}, {r.aut_order}, "
                     f"{'yes' if r.commutative else 'no'}\n")
    with open(path + ".jsonl", "w") as fh:
        for i, r in enumerate(records, 1):
            fh.write(json.dumps({
                "class_id": i,
                "representative": list(r.key.codes),
                "aut_order": r.aut_order,
                "commutative": r.commutative,
            }) + "\n")


def write_plane_class_file(path: str, spec: FieldSpec, mode: str,
                           records: list[PlaneClassRecord],
                           labels: dict[int, str] | None = None) -> None:
    n_comm = sum(1 for r in records if r.contains_commutative)
    labels = labels or {}
    with open(path, "w") as fh:
        _write_header(fh, mode, spec, len(records), n_comm)
        fh.write("# class_id, representative_codes, aut_order, at_order, "
                 "sa_sum, inventory, orbit_size, flags, plane\n")
        for i, r in enumerate(records, 1):
            sa = f"{r.sa_sum.numerator}/{r.sa_sum.denominator}"
            fh.write(f"{i}, {_codes_string(r.representative.codes)}, "
                     f"{r.representative_aut}, {r.at_order}, {sa}, "
                     f"{inventory_string(r.inventory)}, {r.s3_orbit_size}, "
                     f"{_flags_string(r.sigma_flags)}, {labels.get(i, '-')}\n")
    with open(path + ".jsonl", "w") as fh:
        for i, r in enumerate(records, 1):
            fh.write(json.dumps({
                "class_id": i,
                "representative": list(r.representative.codes),
                "aut_order": r.representative_aut,
                "at_order": r.at_order,
                "sa_sum": [r.sa_sum.numerator, r.sa_sum.denominator],
                "inventory": [list(pair) for pair in r.inventory],
                "orbit_size": r.s3_orbit_size,
                "flags": dict(r.sigma_flags),
                "contains_commutative": r.contains_commutative,
                "plane": labels.get(i),
            }) + "\n")


_PAREN = re.compile(r"\(([^)]*)\)")


def read_code_tuples(path: str, spec: FieldSpec) -> list[tuple[int, ...]]:
    """Code tuples from either a search stream or a class-record file."""
    header = read_header(path)
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is not None:
                match = _PAREN.search(line)
                if not match:
                    raise ValueError(f"malformed class record: {line!r}")
                codes = tuple(int(s) for s in match.group(1).replace(",", " ").split())
            else:
                values = [int(s) for s in line.replace(",", " ").split()]
                codes = tuple(values[1:])  # drop the polynomial index
            if len(codes) not in (spec.d - 1, spec.d):
                raise ValueError(f"record has {len(codes)} codes, expected "
                                 f"{spec.d - 1} or {spec.d}: {line!r}")
            out.append(codes)
    return out


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Table1Row:
    label: str
    status: str
    codes: tuple[int, ...]
    aut_order: int
    at_order: int
    sa_sum: Fraction
    inventory: tuple[tuple[int, int], ...]
    orbit_size: int
    flags: dict


@dataclass(frozen=True)
class CensusReport:
    table1: tuple[Table1Row, ...]
    iso_counts: tuple[int, int] | None
    isotopy_counts: tuple[int, int] | None
    s3_counts: tuple[int, int] | None

    def __post_init__(self) -> None:
        if self.s3_counts is not None and self.table1:
            if self.s3_counts[0] != len(self.table1):
                raise ValueError("plane rows do not match the S3 class count")


def build_table1(census: Census, s3_records: list[PlaneClassRecord],
                 fixtures: Sequence[KnownPlaneFixture] = PLANES) -> list[Table1Row]:
    """Per-plane rows, anchored to the fixture representatives.

    Every fixture must match exactly one S3 class and the match must be
    a bijection; the row's autotopy data describes the fixture's own
    isotopy class (orbit members may differ in autotopy order).
    """
    from collections import Counter

    from .classify import isotope_inventory

    matches = {}
    for fx in fixtures:
        idx = census.s3_class_index(s3_records, fx.standard_set())
        if idx < 0:
            raise AmbiguousFixtureMatch(f"plane {fx.label} matches no class")
        if idx in matches.values():
            raise AmbiguousFixtureMatch(f"plane {fx.label} collides with another fixture")
        matches[fx.label] = idx
    if len(fixtures) == len(s3_records) and len(set(matches.values())) != len(s3_records):
        raise AmbiguousFixtureMatch("fixture matching is not a bijection")

    rows = []
    for fx in fixtures:
        D = fx.standard_set()
        records, sa = isotope_inventory(D, census)
        inventory = tuple(sorted(Counter(r.aut_order for r in records).items()))
        at = Fraction((census.spec.order - 1) ** 2) / sa
        orbit_size, flags = _orbit_of(census, D)
        rows.append(Table1Row(
            label=fx.label,
            status=fx.status,
            codes=fx.codes,
            aut_order=census.aut_of_key(census.key_of(D)),
            at_order=int(at),
            sa_sum=sa,
            inventory=inventory,
            orbit_size=orbit_size,
            flags=flags,
        ))
    return rows


def _orbit_of(census: Census, D: StandardSet):
    from .classify import s3_orbit_structure

    return s3_orbit_structure(D, census)


def render_table1(rows: Sequence[Table1Row]) -> str:
    headers = ("plane", "status", "codes", "|Aut|", "|At|", "S/A sum", "orbit", "flags")
    body = [
        (
            row.label,
            row.status,
            _codes_string(row.codes),
            str(row.aut_order),
            str(row.at_order),
            inventory_string(row.inventory),
            str(row.orbit_size),
            _flags_string(row.flags),
        )
        for row in rows
    ]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for b in body:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(b, widths)))
    return "\n".join(lines) + "\n"


def render_table2(iso_counts, isotopy_counts, s3_counts) -> str:
    headers = ("classes (commutative)", "isomorphism", "isotopy", "S3-action")
    row = ["computed"]
    for counts in (iso_counts, isotopy_counts, s3_counts):
        row.append(f"{counts[0]} ({counts[1]})" if counts else "-")
    widths = [max(len(h), len(r)) for h, r in zip(headers, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.append("  ".join(r.ljust(w) for r, w in zip(row, widths)))
    return "\n".join(lines) + "\n"
