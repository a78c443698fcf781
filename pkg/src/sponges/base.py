"""Shared vocabulary: point validation, errors, axiom reports and grids."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np


class SpongeError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(SpongeError, ValueError):
    pass


class DomainError(SpongeError, ValueError):
    """A point lies outside the carrier set of the selected family."""


class ConvergenceError(SpongeError, RuntimeError):
    pass


class JoinUnavailable(SpongeError):
    """The set has no right bound, so absorption cannot be checked."""


class NoSeeds(SpongeError, ValueError):
    pass


class ComponentUnbounded(SpongeError):
    def __init__(self, index: int, side: str):
        super().__init__(f"component {index} has no {side}")
        self.index = index
        self.side = side


class GridTooCoarse(SpongeError):
    pass


class InvalidProfile(SpongeError, ValueError):
    pass


class InvalidCone(SpongeError, ValueError):
    pass


class NoLeftBound(SpongeError):
    pass


class BoundaryAmbiguous(SpongeError):
    """Left-boundedness could not be decided within the tolerance band."""


class WindowUnbounded(SpongeError):
    def __init__(self, pixel: tuple[int, int], op: str):
        super().__init__(f"window at pixel {pixel} has no {op}")
        self.pixel = pixel


def as_point(x: Any, dim: int | None = None) -> np.ndarray:
    p = np.array(x, dtype=float).reshape(-1)
    if p.size == 0:
        raise DimensionMismatch("a point needs at least one coordinate")
    if dim is not None and p.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {p.size}")
    if not np.all(np.isfinite(p)):
        raise DomainError("point coordinates must be finite")
    return p


def as_pointset(P: Any, dim: int | None = None) -> np.ndarray:
    """Return P as an (n, dim) float array; rejects empty and ragged input."""
    arr = np.array(P, dtype=float)
    if arr.ndim == 1:
        # a flat list of scalars is a set of 1D points
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DimensionMismatch("point set must be a nonempty list of points")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point coordinates must be finite")
    return arr


@dataclass
class AxiomReport:
    """Outcome of an axiom check.

    ``violations`` holds ``(axiom name, witness)`` pairs; ``notes`` carries
    free-form observations that are not failures (e.g. vacuous passes).
    """

    violations: list[tuple[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, axiom: str, witness: Any) -> None:
        self.violations.append((axiom, witness))

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)
        self.info.update(other.info)
        return self

    def failed_axioms(self) -> list[str]:
        return sorted({name for name, _ in self.violations})

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned box sampled with a uniform step.

    Grid nodes sit on integer multiples of ``step`` so that the origin (and
    any other lattice-aligned point) is represented exactly.
    """

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    step: float

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatch("grid corners differ in dimension")
        if not self.step > 0:
            raise ValueError("grid step must be positive")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def axes(self) -> list[np.ndarray]:
        axes = []
        for lo, hi in zip(self.lo, self.hi):
            k0 = math.floor(lo / self.step + 1e-9)
            k1 = math.ceil(hi / self.step - 1e-9)
            axes.append(np.arange(k0, k1 + 1) * self.step)
        return axes

    def size(self) -> int:
        return int(np.prod([len(a) for a in self.axes()]))

    def points(self, chunk: int = 1 << 20):
        """Yield grid points in chunks of at most ``chunk`` rows."""
        axes = self.axes()
        shape = [len(a) for a in axes]
        total = int(np.prod(shape))
        for start in range(0, total, chunk):
            idx = np.unravel_index(np.arange(start, min(total, start + chunk)), shape)
            yield np.stack([a[i] for a, i in zip(axes, idx)], axis=-1)

    @classmethod
    def around(cls, lo: Sequence[float], hi: Sequence[float], step: float, pad: float = 0.0):
        return cls(tuple(float(v) - pad for v in lo), tuple(float(v) + pad for v in hi), float(step))


def nudge_until(point: np.ndarray, ok, axis: int = -1, direction: float = 1.0,
                max_steps: int = 64) -> np.ndarray:
    """Move one coordinate by single ulps until ``ok(point)`` holds.

    Numerical solvers land on relation boundaries; relation evaluation is
    exact, so results are pushed to the feasible side before being returned.
    """
    p = point.copy()
    target = math.inf if direction > 0 else -math.inf
    if ok(p):
        return p
    p[axis] = np.nextafter(p[axis], target)
    base = max(abs(float(p[axis])), float(np.max(np.abs(p))), 1e-300) * np.finfo(float).eps
    for k in range(max_steps):
        if ok(p):
            return p
        p[axis] = point[axis] + math.copysign(base * 2.0**k, direction)
    raise ConvergenceError("could not move result onto the feasible side of the relation")
