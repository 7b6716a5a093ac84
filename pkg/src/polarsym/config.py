"""Size caps that keep brute-force work at desk scale."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    """
    Caps enforced by every operation whose cost grows exponentially.

    Attributes
    ----------
    max_matrix_size : int
        Largest block length ``N`` for which ``G_N`` is materialised.
    max_row_space : int
        Largest number of row-space elements enumerated in one sum.
    max_domain : int
        Largest number of received vectors enumerated by brute force.
    max_alphabet : int
        Largest derived (multiset) alphabet.
    max_separation_terms : int
        Largest number of multisets enumerated when the exact independence
        test of ``products_separated`` is inconclusive.
    """

    max_matrix_size: int = 1 << 20
    max_row_space: int = 1 << 24
    max_domain: int = 1 << 22
    max_alphabet: int = 1 << 16
    max_separation_terms: int = 1 << 16

    def __post_init__(self):
        for name in (
            "max_matrix_size",
            "max_row_space",
            "max_domain",
            "max_alphabet",
            "max_separation_terms",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


DEFAULT_LIMITS = Limits()
