"""FIPS 140-2 style statistical battery for 20000-bit keystream samples.

Four tests run on a fixed-size sample: monobit (ones count), poker
(chi-square-like statistic over 4-bit nibbles), runs (counts of maximal
runs by length, both bit values), and long run (no run of 26 or more).
Thresholds are configuration data loaded from a ``test.parameter = value``
file, not constants baked into the test logic; the packaged defaults are
transcribed from the published standard (see ``fips_thresholds.conf``).
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "SAMPLE_BITS",
    "Thresholds",
    "TestResult",
    "TestReport",
    "monobit",
    "poker",
    "runs",
    "long_run",
    "fips_battery",
]

SAMPLE_BITS = 20000
RUN_LENGTHS = (1, 2, 3, 4, 5, 6)  # length 6 pools all runs of 6 or more


@dataclass(frozen=True)
class Thresholds:
    """Pass/fail boundaries for the battery, keyed as in the config file."""

    values: Mapping[str, float]

    REQUIRED = (
        "monobit.min",
        "monobit.max",
        "poker.min",
        "poker.max",
        *(f"runs.length{i}.{side}" for i in RUN_LENGTHS for side in ("min", "max")),
        "long_run.limit",
    )

    def __post_init__(self) -> None:
        missing = [key for key in self.REQUIRED if key not in self.values]
        if missing:
            raise ValueError(f"thresholds missing keys: {missing}")

    def __getitem__(self, key: str) -> float:
        return self.values[key]

    @classmethod
    def parse(cls, text: str) -> "Thresholds":
        values: dict[str, float] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'test.parameter = value', got {raw!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = float(value.strip())
        return cls(values)

    @classmethod
    def from_file(cls, path: str) -> "Thresholds":
        with open(path, encoding="utf-8") as handle:
            return cls.parse(handle.read())

    @classmethod
    def default(cls) -> "Thresholds":
        text = resources.files("castream").joinpath("fips_thresholds.conf").read_text("utf-8")
        return cls.parse(text)


@dataclass(frozen=True)
class TestResult:
    name: str
    passed: bool
    statistics: Mapping[str, float]
    thresholds: Mapping[str, float]


@dataclass(frozen=True)
class TestReport:
    results: tuple[TestResult, ...]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def to_text(self) -> str:
        lines = []
        for result in self.results:
            for key, value in result.statistics.items():
                lines.append(f"{result.name}.{key} = {value:g}")
            for key, value in result.thresholds.items():
                lines.append(f"{key} = {value:g}")
            lines.append(f"{result.name}.pass = {str(result.passed).lower()}")
        lines.append(f"overall.pass = {str(self.passed).lower()}")
        return "\n".join(lines) + "\n"


def _as_sample(stream: Sequence[int]) -> np.ndarray:
    arr = np.asarray(stream, dtype=np.uint8)
    if arr.ndim != 1 or len(arr) != SAMPLE_BITS:
        raise ValueError(f"stream must contain exactly {SAMPLE_BITS} bits, got {len(arr)}")
    if np.any(arr > 1):
        raise ValueError("stream entries must be 0 or 1")
    return arr


def _pick(thresholds: Thresholds | None) -> Thresholds:
    return thresholds if thresholds is not None else Thresholds.default()


def monobit(stream: Sequence[int], thresholds: Thresholds | None = None) -> TestResult:
    """Ones count, strictly inside the configured interval."""
    t = _pick(thresholds)
    ones = int(_as_sample(stream).sum())
    passed = t["monobit.min"] < ones < t["monobit.max"]
    return TestResult(
        "monobit",
        passed,
        {"ones": ones},
        {"monobit.min": t["monobit.min"], "monobit.max": t["monobit.max"]},
    )


def poker(stream: Sequence[int], thresholds: Thresholds | None = None) -> TestResult:
    """Nibble-frequency statistic X = (16/5000) * sum(f_i^2) - 5000, strict bounds."""
    t = _pick(thresholds)
    nibbles = _as_sample(stream).reshape(-1, 4) @ np.array([8, 4, 2, 1], dtype=np.int64)
    counts = np.bincount(nibbles, minlength=16)
    statistic = 16.0 * float(np.sum(counts * counts)) / (SAMPLE_BITS // 4) - (SAMPLE_BITS // 4)
    passed = t["poker.min"] < statistic < t["poker.max"]
    return TestResult(
        "poker",
        passed,
        {"statistic": statistic},
        {"poker.min": t["poker.min"], "poker.max": t["poker.max"]},
    )


def _run_lengths(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Maximal runs: values and lengths, in stream order.
    boundaries = np.flatnonzero(np.diff(arr)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(arr)]))
    return arr[starts], ends - starts


def runs(stream: Sequence[int], thresholds: Thresholds | None = None) -> TestResult:
    """Counts of maximal runs per length (1..5, 6+) and bit value, closed intervals."""
    t = _pick(thresholds)
    values, lengths = _run_lengths(_as_sample(stream))
    statistics: dict[str, float] = {}
    passed = True
    for bit in (0, 1):
        clipped = np.minimum(lengths[values == bit], RUN_LENGTHS[-1])
        for length in RUN_LENGTHS:
            count = int(np.sum(clipped == length))
            statistics[f"bit{bit}.length{length}"] = count
            low = t[f"runs.length{length}.min"]
            high = t[f"runs.length{length}.max"]
            if not low <= count <= high:
                passed = False
    bounds = {
        f"runs.length{i}.{side}": t[f"runs.length{i}.{side}"]
        for i in RUN_LENGTHS
        for side in ("min", "max")
    }
    return TestResult("runs", passed, statistics, bounds)


def long_run(stream: Sequence[int], thresholds: Thresholds | None = None) -> TestResult:
    """Fails as soon as any run of either bit value reaches the configured limit."""
    t = _pick(thresholds)
    _, lengths = _run_lengths(_as_sample(stream))
    longest = int(lengths.max())
    passed = longest < t["long_run.limit"]
    return TestResult("long_run", passed, {"longest": longest}, {"long_run.limit": t["long_run.limit"]})


def fips_battery(stream: Sequence[int], thresholds: Thresholds | None = None) -> TestReport:
    """All four tests; the battery passes only if every test passes."""
    t = _pick(thresholds)
    return TestReport(
        (monobit(stream, t), poker(stream, t), runs(stream, t), long_run(stream, t))
    )
