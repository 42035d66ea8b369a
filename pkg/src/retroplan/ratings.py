"""Energy rating labels: the 15-grade fine scale and its 5-group coarse merge."""

from __future__ import annotations

import enum
import functools


@functools.total_ordering
class EnergyRating(enum.Enum):
    """Building energy rating, A1 (best) to G (worst), totally ordered."""

    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    D1 = "D1"
    D2 = "D2"
    E1 = "E1"
    E2 = "E2"
    F = "F"
    G = "G"

    @property
    def index(self) -> int:
        """Position on the scale: 0 for A1 (best) through 14 for G (worst)."""
        return _RATING_ORDER[self]

    @classmethod
    def from_index(cls, i: int) -> "EnergyRating":
        return _RATINGS_BY_INDEX[i]

    @classmethod
    def from_str(cls, s: str) -> "EnergyRating":
        try:
            return cls(s.strip().upper())
        except ValueError:
            raise ValueError(f"unknown energy rating {s!r}") from None

    def better_than(self, other: "EnergyRating") -> bool:
        return self.index < other.index

    def __lt__(self, other: "EnergyRating") -> bool:
        # A1 < A2 < ... < G, i.e. sorting ascending puts the best rating first
        if not isinstance(other, EnergyRating):
            return NotImplemented
        return self.index < other.index

    def __str__(self) -> str:
        return self.value


ALL_RATINGS: tuple[EnergyRating, ...] = tuple(EnergyRating)
_RATING_ORDER = {r: i for i, r in enumerate(ALL_RATINGS)}
_RATINGS_BY_INDEX = ALL_RATINGS
N_RATINGS = len(ALL_RATINGS)


class CoarseRating(enum.Enum):
    """Merged rating group used by the coarse-to-fine classifiers."""

    A = "A"
    B = "B"
    C = "C"
    CD = "CD"
    EFG = "EFG"

    @property
    def members(self) -> tuple[EnergyRating, ...]:
        return COARSE_GROUPS[self]

    @classmethod
    def from_str(cls, s: str) -> "CoarseRating":
        try:
            return cls(s.strip().upper())
        except ValueError:
            raise ValueError(f"unknown coarse rating {s!r}") from None

    def __str__(self) -> str:
        return self.value


ALL_COARSE: tuple[CoarseRating, ...] = tuple(CoarseRating)

COARSE_GROUPS: dict[CoarseRating, tuple[EnergyRating, ...]] = {
    CoarseRating.A: (EnergyRating.A1, EnergyRating.A2, EnergyRating.A3),
    CoarseRating.B: (EnergyRating.B1, EnergyRating.B2, EnergyRating.B3),
    CoarseRating.C: (EnergyRating.C1, EnergyRating.C2),
    CoarseRating.CD: (EnergyRating.C3, EnergyRating.D1, EnergyRating.D2),
    CoarseRating.EFG: (EnergyRating.E1, EnergyRating.E2, EnergyRating.F, EnergyRating.G),
}

_FINE_TO_COARSE: dict[EnergyRating, CoarseRating] = {
    fine: coarse for coarse, fines in COARSE_GROUPS.items() for fine in fines
}


def to_coarse(rating: EnergyRating) -> CoarseRating:
    """Map a fine rating to its coarse group (A, B, C, CD or EFG)."""
    return _FINE_TO_COARSE[rating]
