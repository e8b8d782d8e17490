"""Canonical forms, isomorphism dedup, isotopy and S3-orbit classification.

Isomorphism testing rides on a pure canonical form: the lexicographic
minimum over all cyclic representations (rebasings onto right-power
bases of elements whose right multiplication has a primitive
characteristic polynomial).  Two right-primitive semifields are
isomorphic exactly when their keys agree, which replaces the mutable
seen-set of the classical dedup loop with an order-independent key.

Isotopy classes are handled through principal isotopes: every semifield
isotopic to D is isomorphic to some D_{(y,z)}, so the canonical keys of
all (p^d - 1)^2 principal isotopes form a membership set for the whole
isotopy class.  S3-equivalence reuses those sets from the candidate
side: D lies in the orbit of C iff some index-permuted variant of D is
isotopic to C, so six per-candidate keys replace a six-fold expansion
of every class.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .algebra import (
    Element,
    S3_ALL,
    S3_TRANSPOSITIONS,
    StandardSet,
    cube_from_set,
    predicates,
    sigma_transform,
    unitalize,
)
from .gf import FieldSpec, VectorGF, is_primitive_poly, mat_rank

__all__ = [
    "CanonicalKey",
    "IsoClassRecord",
    "PlaneClassRecord",
    "NotRightPrimitive",
    "NonIntegerAtOrder",
    "Census",
    "right_power_basis",
    "cyclic_representations",
    "canonical_key",
    "isomorphism_classes",
    "aut_order",
    "isotope_inventory",
    "at_order",
    "isotopy_classes",
    "s3_classes",
    "s3_orbit_structure",
]


class NotRightPrimitive(ValueError):
    """No element generates the semifield through right powers."""


class NonIntegerAtOrder(ArithmeticError):
    """The counting identity produced a non-integral autotopy order (a bug)."""


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Lexicographically minimal (A_2..A_d) code tuple over all cyclic
    representations; equal keys mean isomorphic semifields."""

    codes: tuple[int, ...]


@dataclass(frozen=True)
class IsoClassRecord:
    key: CanonicalKey
    aut_order: int
    commutative: bool


@dataclass(frozen=True)
class PlaneClassRecord:
    """One projective-plane class: an isotopy class, plus its S3-orbit data."""

    representative: CanonicalKey
    representative_aut: int
    at_order: int
    sa_sum: Fraction
    inventory: tuple[tuple[int, int], ...]  # (aut order, class count), sorted
    s3_orbit_size: int
    sigma_flags: Mapping[str, bool]  # per transposition: "12", "13", "23"
    contains_commutative: bool

    @property
    def n_isomorphism_classes(self) -> int:
        return sum(count for _, count in self.inventory)


def right_power_basis(D: StandardSet, y: Element) -> list[Element] | None:
    """(e, y, y*y, (y*y)*y, ...) when independent with primitive char poly.

    Kept independent of the kernels so it can cross-check them in tests.
    """
    if y.is_zero():
        raise ValueError("generator must be nonzero")
    spec = D.spec
    p = spec.p
    stack = D.as_array().astype(np.int64)
    ry = np.tensordot(y.as_array(), stack, axes=([0], [0])) % p
    from .gf import PolyGF, _charpoly_ints

    poly = PolyGF(spec, _charpoly_ints(ry, p))
    if not is_primitive_poly(poly):
        return None
    cols = [np.eye(spec.d, dtype=np.int64)[:, 0]]
    for _ in range(spec.d - 1):
        cols.append(ry @ cols[-1] % p)
    if mat_rank(np.stack(cols, axis=1), p=p) < spec.d:
        return None
    return [VectorGF(spec, tuple(int(x) for x in col)) for col in cols]


def cyclic_representations(D: StandardSet) -> set[tuple[int, ...]]:
    """Code tuples of D rebased onto every right-power basis."""
    reps = kernels.cyclic_rep_codes(D.spec, D.as_array())
    if not reps:
        raise NotRightPrimitive("no element has a primitive right multiplication")
    return set(reps)


def canonical_key(D: StandardSet) -> CanonicalKey:
    key = kernels.canonical_key_codes(D.spec, D.as_array())
    if key is None:
        raise NotRightPrimitive("no element has a primitive right multiplication")
    return CanonicalKey(tuple(key))


def aut_order(D: StandardSet) -> int:
    """Order of the automorphism group of D."""
    order = kernels.aut_order_of(D.spec, D.as_array())
    if order == 0:
        raise NotRightPrimitive("no element has a primitive right multiplication")
    return order


class Census:
    """Shared classification state for one field spec.

    Caches, per isotopy class, the canonical keys of all principal
    isotopes (the class membership set) and, per isomorphism class, the
    automorphism order and commutativity flag.  All pipeline stages and
    reports can share one instance; results are independent of call
    order.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self._aut: dict[tuple[int, ...], int] = {}
        self._comm: dict[tuple[int, ...], bool] = {}
        self._class_of: dict[tuple[int, ...], int] = {}
        self._class_keys: list[dict[tuple[int, ...], int]] = []

    def decode(self, codes: tuple[int, ...]) -> StandardSet:
        return StandardSet.from_codes(self.spec, codes, validate=False)

    def key_of(self, D: StandardSet) -> tuple[int, ...]:
        return canonical_key(D).codes

    def aut_of_key(self, codes: tuple[int, ...]) -> int:
        out = self._aut.get(codes)
        if out is None:
            out = aut_order(self.decode(codes))
            self._aut[codes] = out
        return out

    def commutative_of_key(self, codes: tuple[int, ...]) -> bool:
        out = self._comm.get(codes)
        if out is None:
            out = predicates(self.decode(codes)).commutative
            self._comm[codes] = out
        return out

    def class_id(self, codes: tuple[int, ...]) -> int:
        """Isotopy class of the isomorphism class `codes`, expanding the
        principal-isotope key set the first time the class is seen."""
        cid = self._class_of.get(codes)
        if cid is not None:
            return cid
        counts = kernels.isotope_key_counts(self.spec, self.decode(codes).as_array())
        counts = {tuple(k): v for k, v in counts.items()}
        expected = (self.spec.order - 1) ** 2
        if sum(counts.values()) != expected:
            raise RuntimeError("isotope expansion lost parameter pairs")
        if codes not in counts:
            raise RuntimeError("isotope expansion does not contain its own seed")
        cid = len(self._class_keys)
        self._class_keys.append(counts)
        for k in counts:
            self._class_of[k] = cid
        return cid

    def class_members(self, cid: int) -> dict[tuple[int, ...], int]:
        return self._class_keys[cid]

    # -- per-class data ----------------------------------------------------

    def sigma_class_ids(self, codes: tuple[int, ...]) -> dict[tuple[int, int, int], int]:
        """Isotopy class of each index-permuted variant of the class of `codes`."""
        cube = cube_from_set(self.decode(codes))
        out = {}
        for sigma in S3_ALL:
            variant = unitalize(sigma_transform(cube, sigma))
            out[sigma] = self.class_id(self.key_of(variant))
        if out[(1, 2, 3)] != self.class_id(codes):
            raise RuntimeError("identity permutation left its isotopy class")
        return out

    def plane_record(self, cid: int) -> PlaneClassRecord:
        members = self._class_keys[cid]
        auts = {k: self.aut_of_key(k) for k in members}
        inventory = tuple(sorted(Counter(auts.values()).items()))
        sa = sum((Fraction(1, a) for a in auts.values()), Fraction(0))
        total = Fraction((self.spec.order - 1) ** 2)
        at = total / sa
        if at.denominator != 1:
            raise NonIntegerAtOrder(f"(p^d - 1)^2 / (S/A sum) = {at} is not an integer")
        representative = min(members)
        sigma_ids = self.sigma_class_ids(representative)
        orbit_size = len(set(sigma_ids.values()))
        flags = {
            name: sigma_ids[tau] == cid for name, tau in S3_TRANSPOSITIONS.items()
        }
        return PlaneClassRecord(
            representative=CanonicalKey(representative),
            representative_aut=self.aut_of_key(representative),
            at_order=int(at),
            sa_sum=sa,
            inventory=inventory,
            s3_orbit_size=orbit_size,
            sigma_flags=flags,
            contains_commutative=any(self.commutative_of_key(k) for k in members),
        )

    # -- sweeps ------------------------------------------------------------

    def isomorphism_classes(self, stream: Iterable[StandardSet]) -> list[IsoClassRecord]:
        seen: set[tuple[int, ...]] = set()
        for D in stream:
            seen.add(self.key_of(D))
        return [
            IsoClassRecord(CanonicalKey(k), self.aut_of_key(k), self.commutative_of_key(k))
            for k in sorted(seen)
        ]

    def isotopy_class_ids(self, reps: Iterable[StandardSet]) -> list[int]:
        """Distinct isotopy classes present, ordered by representative key."""
        keys = sorted({self.key_of(D) for D in reps})
        swept: list[int] = []
        for k in keys:
            cid = self.class_id(k)
            if cid not in swept:
                swept.append(cid)
        return sorted(swept, key=lambda cid: min(self._class_keys[cid]))

    def isotopy_classes(self, reps: Iterable[StandardSet]) -> list[PlaneClassRecord]:
        return [self.plane_record(cid) for cid in self.isotopy_class_ids(reps)]

    def s3_classes(self, reps: Iterable[StandardSet]) -> list[PlaneClassRecord]:
        """One record per S3-orbit of isotopy classes present in `reps`.

        The record describes the orbit member whose representative key is
        lexicographically least.
        """
        cids = self.isotopy_class_ids(reps)
        orbit_of: dict[int, set[int]] = {}
        for cid in cids:
            if cid in orbit_of:
                continue
            rep = min(self._class_keys[cid])
            orbit = set(self.sigma_class_ids(rep).values())
            merged = set(orbit)
            for other in orbit:
                if other in orbit_of:
                    merged |= orbit_of[other]
            for member in merged:
                orbit_of[member] = merged
        groups: list[set[int]] = []
        for cid in cids:
            group = orbit_of[cid]
            if group not in groups:
                groups.append(group)
        groups.sort(key=lambda g: min(min(self._class_keys[cid]) for cid in g))
        records = []
        for group in groups:
            chosen = min(group, key=lambda cid: min(self._class_keys[cid]))
            record = self.plane_record(chosen)
            # commutativity is a property of the whole orbit, not just the
            # member the record happens to describe
            commutative = any(
                self.commutative_of_key(k)
                for cid in group
                for k in self._class_keys[cid]
            )
            records.append(dataclasses.replace(record, contains_commutative=commutative))
        return records

    def find_class_of(self, D: StandardSet) -> int:
        return self.class_id(self.key_of(D))

    def s3_class_index(self, records: list[PlaneClassRecord], D: StandardSet) -> int:
        """Index of the S3 record whose orbit contains D, or -1."""
        sigma_ids = self.sigma_class_ids(self.key_of(D))
        targets = set(sigma_ids.values())
        hits = [
            i
            for i, rec in enumerate(records)
            if self.class_id(rec.representative.codes) in targets
        ]
        if len(hits) > 1:
            raise RuntimeError("plane matches more than one S3 class")
        return hits[0] if hits else -1


# ---------------------------------------------------------------------------
# module-level operation wrappers (fresh shared state per call)
# ---------------------------------------------------------------------------


def isomorphism_classes(stream: Iterable[StandardSet], census: Census | None = None):
    items = iter(stream)
    first = next(items, None)
    if first is None:
        return []
    census = census or Census(first.spec)
    return census.isomorphism_classes(itertools.chain([first], items))


def isotope_inventory(D: StandardSet, census: Census | None = None):
    """Isomorphism classes among the principal isotopes, and the S/A sum."""
    census = census or Census(D.spec)
    cid = census.find_class_of(D)
    members = census.class_members(cid)
    records = [
        IsoClassRecord(CanonicalKey(k), census.aut_of_key(k), census.commutative_of_key(k))
        for k in sorted(members)
    ]
    sa = sum((Fraction(1, r.aut_order) for r in records), Fraction(0))
    return records, sa


def at_order(D: StandardSet, census: Census | None = None) -> int:
    """Order of the autotopy group via the counting identity
    (p^d - 1)^2 = |At| * sum 1/|Aut(E)|."""
    census = census or Census(D.spec)
    _, sa = isotope_inventory(D, census)
    at = Fraction((D.spec.order - 1) ** 2) / sa
    if at.denominator != 1:
        raise NonIntegerAtOrder(f"autotopy order {at} is not an integer")
    return int(at)


def isotopy_classes(reps: Iterable[StandardSet], census: Census | None = None):
    reps = list(reps)
    if not reps:
        return []
    census = census or Census(reps[0].spec)
    return census.isotopy_classes(reps)


def s3_classes(reps: Iterable[StandardSet], census: Census | None = None):
    reps = list(reps)
    if not reps:
        return []
    census = census or Census(reps[0].spec)
    return census.s3_classes(reps)


def s3_orbit_structure(D: StandardSet, census: Census | None = None):
    """(orbit size, per-transposition self-equivalence flags) for D's plane."""
    census = census or Census(D.spec)
    cid = census.find_class_of(D)
    sigma_ids = census.sigma_class_ids(min(census.class_members(cid)))
    flags = {name: sigma_ids[tau] == cid for name, tau in S3_TRANSPOSITIONS.items()}
    return len(set(sigma_ids.values())), flags
