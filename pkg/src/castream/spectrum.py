"""Walsh-spectrum analysis of iterated rule functions.

The transform used here is the 0/1-valued convention
``W(omega) = sum_x F(x) * (-1)^<x, omega>``, so ``W(0)`` counts the ones of
the truth table and a function on n variables is balanced exactly when
``W(0) = 2^(n-1)``.  Much of the literature works with the signed function
``1 - 2F`` instead; the two spectra are related by
``W_signed(omega) = -2 * W(omega)`` for ``omega != 0`` and
``W_signed(0) = 2^n - 2 * W(0)``.

Correlation immunity of order k is equivalent to the spectrum vanishing on
every nonzero mask of Hamming weight at most k (Xiao-Massey), and the bias
of the output toward a linear combination of inputs is read off a single
spectral value; both checks are exact integer computations here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .algebra import (
    affine_decomposition,
    conjugate,
    conjugate_reflect,
    equivalence_class,
    reflect,
)
from .engine import Rule

__all__ = [
    "BooleanFunction",
    "WalshSpectrum",
    "RuleScan",
    "ScanReport",
    "iterate_rule",
    "walsh_transform",
    "is_balanced",
    "correlation_immunity_order",
    "correlation_bias",
    "minmax_score",
    "scan_rules",
    "scan_report_csv",
]

MAX_TRANSFORM_VARIABLES = 24
MAX_ITERATION_ORDER = 8


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table over n variables; entry x is the value at x = sum x_i 2^i."""

    truth_table: tuple[int, ...]

    def __post_init__(self) -> None:
        size = len(self.truth_table)
        if size < 2 or size & (size - 1):
            raise ValueError("truth table length must be a power of two >= 2")
        if any(bit not in (0, 1) for bit in self.truth_table):
            raise ValueError("truth table entries must be 0 or 1")

    @property
    def n(self) -> int:
        return len(self.truth_table).bit_length() - 1


@dataclass(frozen=True)
class WalshSpectrum:
    """Integer spectrum indexed by masks omega in [0, 2^n)."""

    values: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.values).bit_length() - 1


def iterate_rule(rule: Rule, order: int) -> BooleanFunction:
    """The rule iterated ``order`` times as a function of its input window.

    The window holds ``2*radius*order + 1`` cells; each iteration is an
    open-boundary step, shrinking the segment by ``radius`` cells per side,
    and leaving exactly the center cell after ``order`` steps.  Variable
    bit ``2*radius*order`` of the function index is the leftmost window
    cell, bit 0 the rightmost, matching the neighborhood convention of the
    rule tables themselves (order 1 reproduces the rule's own table).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    width = 2 * rule.radius * order + 1
    if width > MAX_TRANSFORM_VARIABLES:
        raise ValueError(f"iterated function would need {width} variables (max {MAX_TRANSFORM_VARIABLES})")
    count = 1 << width
    inputs = np.arange(count, dtype=np.uint32)
    state = np.empty((count, width), dtype=np.uint8)
    for column in range(width):
        state[:, column] = (inputs >> (width - 1 - column)) & 1
    table = np.array(rule.truth_table, dtype=np.uint8)
    span = rule.neighborhood_size
    for _ in range(order):
        inner = state.shape[1] - 2 * rule.radius
        index = np.zeros((count, inner), dtype=np.uint8)
        for offset in range(span):
            index = (index << 1) | state[:, offset : offset + inner]
        state = table[index]
    return BooleanFunction(tuple(int(v) for v in state[:, 0]))


def walsh_transform(f: BooleanFunction) -> WalshSpectrum:
    """Exact integer spectrum via the in-place butterfly (n * 2^n adds)."""
    if f.n > MAX_TRANSFORM_VARIABLES:
        raise ValueError(f"function has {f.n} variables (max {MAX_TRANSFORM_VARIABLES})")
    a = np.array(f.truth_table, dtype=np.int64)
    h = 1
    while h < len(a):
        blocks = a.reshape(-1, 2, h)
        upper = blocks[:, 0, :] + blocks[:, 1, :]
        lower = blocks[:, 0, :] - blocks[:, 1, :]
        blocks[:, 0, :] = upper
        blocks[:, 1, :] = lower
        h *= 2
    return WalshSpectrum(tuple(int(v) for v in a))


def is_balanced(f: BooleanFunction) -> bool:
    """True when the function takes value 1 on exactly half its inputs."""
    return walsh_transform(f).values[0] == 1 << (f.n - 1)


def correlation_immunity_order(f: BooleanFunction) -> int:
    """Largest k with a vanishing spectrum on all nonzero masks of weight <= k."""
    values = walsh_transform(f).values
    nonzero_weights = [bin(omega).count("1") for omega in range(1, len(values)) if values[omega]]
    if not nonzero_weights:
        return f.n
    return min(nonzero_weights) - 1


def correlation_bias(f: BooleanFunction, omega: int) -> Fraction:
    """Exact conditional probability P[F = 1 given <x, omega> = 1].

    Computed as ``(W(0) - W(omega)) / 2^n``, which for *balanced* functions
    (the domain where the quantity is used as a bias measure) simplifies to
    ``1/2 - W(omega) / 2^n``.
    """
    if not 1 <= omega < (1 << f.n):
        raise ValueError(f"mask must lie in [1, 2^{f.n}), got {omega}")
    values = walsh_transform(f).values
    return Fraction(values[0] - values[omega], 1 << f.n)


def minmax_score(rule: Rule, order: int) -> tuple[int, int]:
    """Largest absolute spectral value over single-variable masks.

    Returns ``(cfg, val)`` where ``val = max |W(2^k)|`` over all variable
    positions of the order-times iterated rule and ``cfg`` is the mask
    achieving it (ties broken toward the largest mask, i.e. the leftmost
    window cell).  A flat value of 0 is reported as ``(0, 0)``.
    """
    if not 1 <= order <= MAX_ITERATION_ORDER:
        raise ValueError(f"order must lie in [1, {MAX_ITERATION_ORDER}]")
    f = iterate_rule(rule, order)
    values = walsh_transform(f).values
    cfg, val = 0, 0
    for k in range(f.n):
        magnitude = abs(values[1 << k])
        if magnitude >= val and magnitude > 0:
            cfg, val = 1 << k, magnitude
    return cfg, val


@dataclass(frozen=True)
class RuleScan:
    """Per-rule facts gathered by the exhaustive scan."""

    rule: int
    balanced: bool
    affine: bool
    members: frozenset[int]
    conjugate: int
    reflected: int
    conjugate_reflected: int
    scores: Mapping[int, tuple[int, int]]


@dataclass(frozen=True)
class ScanReport:
    """Scan of all 256 radius-1 rules over a range of iteration orders."""

    orders: tuple[int, ...]
    rows: tuple[RuleScan, ...]

    def row(self, rule: int) -> RuleScan:
        return self.rows[rule]

    def balanced_rules(self) -> tuple[int, ...]:
        return tuple(r.rule for r in self.rows if r.balanced)

    def flat_rules(self) -> tuple[int, ...]:
        """Balanced rules whose score is 0 at every scanned order."""
        return tuple(
            r.rule
            for r in self.rows
            if r.balanced and all(r.scores[o][1] == 0 for o in self.orders)
        )

    def best_nonlinear_rules(self) -> frozenset[int]:
        """Balanced non-affine rules minimizing the worst score over all orders."""
        candidates = [r for r in self.rows if r.balanced and not r.affine]
        best = min(max(r.scores[o][1] for o in self.orders) for r in candidates)
        return frozenset(r.rule for r in candidates if max(r.scores[o][1] for o in self.orders) == best)


def scan_rules(orders: Iterable[int]) -> ScanReport:
    """Evaluate balancedness, affinity, equivalences, and scores for all 256 rules."""
    order_list = tuple(orders)
    if not order_list:
        raise ValueError("at least one order is required")
    if any(not 1 <= o <= MAX_ITERATION_ORDER for o in order_list):
        raise ValueError(f"orders must lie in [1, {MAX_ITERATION_ORDER}]")
    rows = []
    for number in range(256):
        rule = Rule.from_number(number)
        balanced = is_balanced(iterate_rule(rule, 1))
        scores = {o: minmax_score(rule, o) for o in order_list} if balanced else {}
        rows.append(
            RuleScan(
                rule=number,
                balanced=balanced,
                affine=affine_decomposition(rule).is_affine,
                members=equivalence_class(rule),
                conjugate=conjugate(rule).number,
                reflected=reflect(rule).number,
                conjugate_reflected=conjugate_reflect(rule).number,
                scores=scores,
            )
        )
    return ScanReport(orders=order_list, rows=tuple(rows))


def scan_report_csv(report: ScanReport, only: Iterable[int] | None = None) -> str:
    """Comma-separated table: rule, cfg/val per order, then equivalence columns.

    Unbalanced rules carry empty cfg/val cells (no score is defined for them).
    """
    selected = sorted(only) if only is not None else range(256)
    header = ["rule"]
    for order in report.orders:
        header += [f"cfg{order}", f"val{order}"]
    header += ["conj", "refl", "cr"]
    lines = [",".join(header)]
    for number in selected:
        row = report.row(number)
        fields = [str(number)]
        for order in report.orders:
            if row.balanced:
                cfg, val = row.scores[order]
                fields += [str(cfg), str(val)]
            else:
                fields += ["", ""]
        fields += [str(row.conjugate), str(row.reflected), str(row.conjugate_reflected)]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"
