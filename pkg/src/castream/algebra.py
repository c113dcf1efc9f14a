"""Equivalences and structural classification of radius-1 rules.

Two transformations preserve the statistical behavior of generated
sequences: conjugation (complement every cell state) and reflection
(mirror left and right).  Together with their composition they partition
the 256 elementary rules into classes of one to four members.

``affine_decomposition`` reports *affine* structure, i.e. an XOR of a
subset of neighborhood variables plus an optional constant 1; rules such
as 105 (all three variables XORed, then complemented) count as affine even
though they are not linear in the strict constant-free sense.
"""
from __future__ import annotations

from dataclasses import dataclass

from .engine import Rule

__all__ = [
    "AffineDecomposition",
    "conjugate",
    "reflect",
    "conjugate_reflect",
    "equivalence_class",
    "affine_decomposition",
]


def _require_radius_1(rule: Rule) -> None:
    if rule.radius != 1:
        raise ValueError("rule equivalences are defined for radius-1 rules only")


def conjugate(rule: Rule) -> Rule:
    """Complement-equivalent rule: g(x) = NOT f(NOT x), per neighborhood bit."""
    _require_radius_1(rule)
    table = tuple(1 - rule.truth_table[x ^ 0b111] for x in range(8))
    return Rule(1, table)


def reflect(rule: Rule) -> Rule:
    """Mirror-equivalent rule: g(x) = f(x with neighborhood order reversed)."""
    _require_radius_1(rule)
    table = tuple(rule.truth_table[_reverse3(x)] for x in range(8))
    return Rule(1, table)


def conjugate_reflect(rule: Rule) -> Rule:
    """Composition of conjugation and reflection (the two commute)."""
    return conjugate(reflect(rule))


def _reverse3(x: int) -> int:
    return ((x & 1) << 2) | (x & 2) | (x >> 2)


def equivalence_class(rule: Rule) -> frozenset[int]:
    """Rule numbers of the closure under conjugation and reflection."""
    _require_radius_1(rule)
    return frozenset(
        (rule.number, conjugate(rule).number, reflect(rule).number, conjugate_reflect(rule).number)
    )


@dataclass(frozen=True)
class AffineDecomposition:
    """Result of testing a rule for affine structure.

    When ``is_affine``, the rule output equals ``constant XOR (XOR of the
    neighborhood variables selected by mask)``; ``mask`` lists one bit per
    neighborhood position, leftmost cell first.
    """

    is_affine: bool
    mask: tuple[int, ...] | None = None
    constant: int | None = None


def affine_decomposition(rule: Rule) -> AffineDecomposition:
    """Exhaustively match the truth table against every affine candidate."""
    n = rule.neighborhood_size
    for mask in range(1 << n):
        for constant in (0, 1):
            if all(
                rule.truth_table[x] == constant ^ (bin(x & mask).count("1") & 1)
                for x in range(1 << n)
            ):
                # mask bit n-1 selects the leftmost neighborhood cell
                bits = tuple((mask >> (n - 1 - j)) & 1 for j in range(n))
                return AffineDecomposition(True, bits, constant)
    return AffineDecomposition(False)
