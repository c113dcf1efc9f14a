"""One-dimensional binary cellular automata on a ring.

Rules are local transition functions of radius 1 or 2, identified by their
Wolfram number: the integer whose binary expansion, read at index
``(left neighbors .. cell .. right neighbors)`` with the leftmost neighbor as
the most significant bit, is the rule's truth table.  Configurations live on
a ring of N cells (indices wrap modulo N).  All operations are pure; every
value is immutable once constructed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Rule",
    "RuleAssignment",
    "Configuration",
    "SpaceTimeDiagram",
    "rule_from_number",
    "apply_rule",
    "step",
    "step_nonuniform",
    "evolve",
    "temporal_sequence",
]

SUPPORTED_RADII = (1, 2)


@dataclass(frozen=True)
class Rule:
    """A local rule: truth table over the 2*radius+1 neighborhood.

    ``truth_table[x]`` is the output for the neighborhood whose cells, read
    left to right, are the bits of ``x`` from most to least significant.
    """

    radius: int
    truth_table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.radius not in SUPPORTED_RADII:
            raise ValueError(f"unsupported radius {self.radius}; must be one of {SUPPORTED_RADII}")
        expected = 1 << (2 * self.radius + 1)
        if len(self.truth_table) != expected:
            raise ValueError(
                f"truth table must have {expected} entries for radius {self.radius}, "
                f"got {len(self.truth_table)}"
            )
        if any(bit not in (0, 1) for bit in self.truth_table):
            raise ValueError("truth table entries must be 0 or 1")

    @property
    def number(self) -> int:
        """Wolfram number: sum of truth_table[x] * 2**x."""
        return sum(bit << x for x, bit in enumerate(self.truth_table))

    @property
    def neighborhood_size(self) -> int:
        return 2 * self.radius + 1

    @classmethod
    def from_number(cls, number: int, radius: int = 1) -> "Rule":
        if radius not in SUPPORTED_RADII:
            raise ValueError(f"unsupported radius {radius}; must be one of {SUPPORTED_RADII}")
        table_size = 1 << (2 * radius + 1)
        if not 0 <= number < (1 << table_size):
            raise ValueError(f"rule number {number} out of range for radius {radius}")
        return cls(radius, tuple((number >> x) & 1 for x in range(table_size)))

    def apply(self, neighborhood: Sequence[int]) -> int:
        """Output bit for one neighborhood, leftmost cell most significant."""
        if len(neighborhood) != self.neighborhood_size:
            raise ValueError(
                f"neighborhood must have {self.neighborhood_size} cells, got {len(neighborhood)}"
            )
        index = 0
        for bit in neighborhood:
            index = (index << 1) | (bit & 1)
        return self.truth_table[index]

    def __repr__(self) -> str:
        return f"Rule({self.number}, radius={self.radius})"


@dataclass(frozen=True)
class RuleAssignment:
    """One rule per ring cell; all rules must share a radius."""

    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("assignment must contain at least one rule")
        radii = {rule.radius for rule in self.rules}
        if len(radii) != 1:
            raise ValueError(f"mixed radii in assignment: {sorted(radii)}")

    @property
    def radius(self) -> int:
        return self.rules[0].radius

    @property
    def width(self) -> int:
        return len(self.rules)

    @classmethod
    def cycle(cls, rules: Sequence[Rule], width: int) -> "RuleAssignment":
        """Tile a rule pattern around a ring of the given width."""
        if not rules:
            raise ValueError("need at least one rule to cycle")
        return cls(tuple(rules[i % len(rules)] for i in range(width)))


@dataclass(frozen=True)
class Configuration:
    """A ring of binary cells; cell indices wrap modulo the width."""

    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("configuration must contain at least one cell")
        if any(bit not in (0, 1) for bit in self.cells):
            raise ValueError("cells must be 0 or 1")

    @property
    def width(self) -> int:
        return len(self.cells)

    @classmethod
    def from_bits(cls, bits: str) -> "Configuration":
        try:
            return cls(tuple(int(c) for c in bits.strip()))
        except ValueError:
            raise ValueError(f"configuration string must contain only 0/1: {bits!r}") from None

    @classmethod
    def zeros(cls, width: int) -> "Configuration":
        return cls((0,) * width)

    @classmethod
    def single(cls, width: int) -> "Configuration":
        """All zeros except a single 1 at the center cell (index (width-1)//2)."""
        cells = [0] * width
        cells[(width - 1) // 2] = 1
        return cls(tuple(cells))

    @classmethod
    def random(cls, width: int, rng: random.Random) -> "Configuration":
        return cls(tuple(rng.getrandbits(1) for _ in range(width)))

    def __str__(self) -> str:
        return "".join(str(bit) for bit in self.cells)


@dataclass(frozen=True)
class SpaceTimeDiagram:
    """Successive ring configurations; row t is the state at time t."""

    rows: tuple[Configuration, ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("diagram must contain at least one row")
        widths = {row.width for row in self.rows}
        if len(widths) != 1:
            raise ValueError("all rows must share one width")

    @property
    def width(self) -> int:
        return self.rows[0].width

    @property
    def steps(self) -> int:
        return len(self.rows) - 1

    def column(self, cell: int) -> tuple[int, ...]:
        """Values of one cell over time (the temporal sequence)."""
        if not 0 <= cell < self.width:
            raise ValueError(f"cell {cell} out of range for width {self.width}")
        return tuple(row.cells[cell] for row in self.rows)


RuleLike = Union[Rule, RuleAssignment]


def rule_from_number(number: int, radius: int = 1) -> Rule:
    """Build the rule whose truth table is the binary expansion of ``number``."""
    return Rule.from_number(number, radius)


def apply_rule(rule: Rule, neighborhood: Sequence[int]) -> int:
    return rule.apply(neighborhood)


class _Stepper:
    """Precompiled one-step update for a fixed width and rule (or assignment)."""

    def __init__(self, width: int, rule: RuleLike):
        needed = 2 * rule.radius + 1
        if width < needed:
            raise ValueError(
                f"ring width {width} too small for radius {rule.radius} (need >= {needed})"
            )
        base = np.arange(width)
        # gather[i] picks the neighbor at each successive offset, leftmost first (MSB)
        self._gathers = [(base + off) % width for off in range(-rule.radius, rule.radius + 1)]
        if isinstance(rule, RuleAssignment):
            if rule.width != width:
                raise ValueError(
                    f"assignment has {rule.width} rules but configuration has {width} cells"
                )
            self._tables = np.array([r.truth_table for r in rule.rules], dtype=np.uint8)
            self._rows = base
        else:
            self._tables = np.array(rule.truth_table, dtype=np.uint8)
            self._rows = None

    def step(self, cells: np.ndarray) -> np.ndarray:
        index = np.zeros(len(cells), dtype=np.intp)
        for gather in self._gathers:
            index = (index << 1) | cells[gather]
        if self._rows is None:
            return self._tables[index]
        return self._tables[self._rows, index]


def step(config: Configuration, rule: Rule) -> Configuration:
    """Advance the ring one time step under a uniform rule."""
    stepper = _Stepper(config.width, rule)
    cells = stepper.step(np.array(config.cells, dtype=np.uint8))
    return Configuration(tuple(int(b) for b in cells))


def step_nonuniform(config: Configuration, assignment: RuleAssignment) -> Configuration:
    """Advance the ring one step with a per-cell rule assignment."""
    stepper = _Stepper(config.width, assignment)
    cells = stepper.step(np.array(config.cells, dtype=np.uint8))
    return Configuration(tuple(int(b) for b in cells))


def evolve(config: Configuration, rule: RuleLike, steps: int) -> SpaceTimeDiagram:
    """Evolve for ``steps`` steps; rows[0] is the initial configuration."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    stepper = _Stepper(config.width, rule)
    cells = np.array(config.cells, dtype=np.uint8)
    rows = [config]
    for _ in range(steps):
        cells = stepper.step(cells)
        rows.append(Configuration(tuple(int(b) for b in cells)))
    return SpaceTimeDiagram(tuple(rows))


def temporal_sequence(config: Configuration, rule: RuleLike, cell: int, length: int) -> tuple[int, ...]:
    """Values of one fixed cell over ``length`` time steps, starting at time 0."""
    if not 0 <= cell < config.width:
        raise ValueError(f"cell {cell} out of range for width {config.width}")
    if length < 1:
        raise ValueError("length must be >= 1")
    stepper = _Stepper(config.width, rule)
    cells = np.array(config.cells, dtype=np.uint8)
    out = [int(cells[cell])]
    for _ in range(length - 1):
        cells = stepper.step(cells)
        out.append(int(cells[cell]))
    return tuple(out)
