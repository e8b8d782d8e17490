"""Registry of the twelve order-81 plane representatives.

Each fixture carries the coordinatizing matrix-code triple (A_2, A_3,
A_4), the expected automorphism count of that representative, and the
expected autotopy order and semifield/automorphism inventory of its
plane.  Planes I-VII coordinatize previously known families; VIII-XII
were first found by this census.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import StandardSet
from .gf import FieldSpec

__all__ = ["KnownPlaneFixture", "SPEC_81", "PLANES", "COMMUTATIVE_TRIPLES", "fixture_by_label"]

SPEC_81 = FieldSpec(3, 4)


@dataclass(frozen=True)
class KnownPlaneFixture:
    label: str
    codes: tuple[int, int, int]
    expected_aut: int
    expected_at: int
    expected_inventory: tuple[tuple[int, int], ...]  # (aut order, class count)
    status: str  # "known" or "new"
    description: str

    @property
    def expected_sa(self) -> Fraction:
        return sum(
            (Fraction(count, aut) for aut, count in self.expected_inventory), Fraction(0)
        )

    def standard_set(self) -> StandardSet:
        return StandardSet.from_codes(SPEC_81, self.codes)


PLANES: tuple[KnownPlaneFixture, ...] = (
    KnownPlaneFixture("I", (19792, 8866, 186745), 4, 25600, ((4, 1),), "known",
                      "finite field GF(81); Desarguesian plane"),
    KnownPlaneFixture("II", (19792, 30332, 214473), 1, 640, ((1, 10),), "known",
                      "twisted field plane"),
    KnownPlaneFixture("III", (19818, 9001, 355161), 4, 512, ((1, 12), (4, 2)), "known",
                      "Dickson's commutative semifield"),
    KnownPlaneFixture("IV", (19794, 428919, 473210), 8, 2048, ((2, 6), (8, 1)), "known",
                      "Knuth type 1 semifield"),
    KnownPlaneFixture("V", (19801, 191026, 186259), 4, 1024, ((1, 6), (4, 1)), "known",
                      "Knuth type 1 semifield"),
    KnownPlaneFixture("VI", (19794, 409289, 130416), 2, 128, ((1, 42), (2, 16)), "known",
                      "Knuth type 2 semifield"),
    KnownPlaneFixture("VII", (19794, 519711, 29089), 1, 64, ((1, 100),), "known",
                      "Knuth type 2 semifield"),
    KnownPlaneFixture("VIII", (19825, 253482, 243782), 4, 256, ((1, 24), (2, 1), (4, 2)), "new",
                      "new plane"),
    KnownPlaneFixture("IX", (19792, 8841, 198942), 1, 32, ((1, 200),), "new",
                      "new plane"),
    KnownPlaneFixture("X", (19792, 8956, 202821), 1, 32, ((1, 200),), "new",
                      "new plane"),
    KnownPlaneFixture("XI", (19792, 8956, 408532), 1, 16, ((1, 400),), "new",
                      "new plane"),
    KnownPlaneFixture("XII", (19792, 8984, 461005), 1, 64, ((1, 100),), "new",
                      "new plane"),
)

# the three commutative semifields of order 81: the field, Dickson's
# semifield, and one isotope of the latter
COMMUTATIVE_TRIPLES: tuple[tuple[int, int, int], ...] = (
    (19792, 8866, 186745),
    (19818, 9001, 355161),
    (19818, 12291, 359225),
)


def fixture_by_label(label: str) -> KnownPlaneFixture:
    for fx in PLANES:
        if fx.label == label:
            return fx
    raise KeyError(f"unknown plane label: {label}")
