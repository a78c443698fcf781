"""Morphological filtering of vector-valued grids with sponge joins and meets.

Dilation replaces each pixel by the join of its window, erosion by the
meet. Sponges are not lattices, so no adjunction properties are claimed
for the composite operators.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import core
from .base import DimensionMismatch, WindowUnbounded


class BoundaryPolicy(str, Enum):
    CLAMP = "clamp"
    SHRINK = "shrink"
    ERROR = "error"


class UnboundedPolicy(str, Enum):
    ERROR = "error"
    PASSTHROUGH = "passthrough"


@dataclass(frozen=True)
class Field:
    """A ``height x width`` grid of points with ``channels`` coordinates each."""

    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=float)
        if d.ndim != 3 or 0 in d.shape:
            raise DimensionMismatch("field data must have shape (height, width, channels)")
        if not np.all(np.isfinite(d)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "data", d)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @classmethod
    def constant(cls, height: int, width: int, value) -> "Field":
        v = np.asarray(value, dtype=float).reshape(1, 1, -1)
        return cls(np.broadcast_to(v, (height, width, v.shape[-1])).copy())


@dataclass(frozen=True)
class StructuringElement:
    """Pixel offsets ``(dx, dy)``; ``dx`` runs along rows, ``dy`` along columns."""

    offsets: tuple[tuple[int, int], ...] = field(default=((0, 0),))

    def __post_init__(self):
        offs = tuple((int(dx), int(dy)) for dx, dy in self.offsets)
        if not offs:
            raise ValueError("structuring element needs at least one offset")
        if (0, 0) not in offs:
            warnings.warn("structuring element does not contain the origin", stacklevel=3)
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def square(cls, radius: int = 1) -> "StructuringElement":
        r = range(-radius, radius + 1)
        return cls(tuple((dx, dy) for dy in r for dx in r))

    @classmethod
    def cross(cls) -> "StructuringElement":
        return cls(((0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)))


def _window(field_: Field, se: StructuringElement, i: int, j: int, policy: BoundaryPolicy) -> np.ndarray:
    pts = []
    for dx, dy in se.offsets:
        r, c = i + dy, j + dx
        if 0 <= r < field_.height and 0 <= c < field_.width:
            pts.append(field_.data[r, c])
        elif policy is BoundaryPolicy.CLAMP:
            pts.append(field_.data[min(max(r, 0), field_.height - 1), min(max(c, 0), field_.width - 1)])
        elif policy is BoundaryPolicy.ERROR:
            raise IndexError(f"offset ({dx}, {dy}) leaves the field at pixel {(i, j)}")
    return np.array(pts)


def default_unbounded_policy(spec: core.SpongeSpec) -> UnboundedPolicy:
    return UnboundedPolicy.PASSTHROUGH if spec.family == "angle" else UnboundedPolicy.ERROR


@dataclass
class MorphStats:
    unbounded: int = 0


def _apply(field_: Field, se: StructuringElement, spec: core.SpongeSpec, op: str,
           boundary, on_unbounded, workers: int, stats: MorphStats | None) -> Field:
    if field_.channels != spec.dim:
        raise DimensionMismatch(f"field has {field_.channels} channels, spec dimension {spec.dim}")
    boundary = BoundaryPolicy(boundary)
    on_unbounded = UnboundedPolicy(on_unbounded) if on_unbounded is not None else default_unbounded_policy(spec)
    fn = core.join if op == "join" else core.meet
    out = np.empty_like(field_.data)
    counts = np.zeros(field_.height, dtype=int)

    def row(i: int) -> None:
        for j in range(field_.width):
            W = _window(field_, se, i, j, boundary)
            if W.shape[0] == 1 or np.all(W == W[0]):
                out[i, j] = W[0]
                continue
            r = fn(spec, W)
            if r is None:
                if on_unbounded is UnboundedPolicy.ERROR:
                    raise WindowUnbounded((i, j), op)
                counts[i] += 1
                r = field_.data[i, j]
            out[i, j] = r

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(row, range(field_.height)))
    else:
        for i in range(field_.height):
            row(i)
    if stats is not None:
        stats.unbounded += int(counts.sum())
    return Field(out)


def dilate(field_: Field, se: StructuringElement, spec: core.SpongeSpec, boundary="shrink",
           on_unbounded=None, workers: int = 1, stats: MorphStats | None = None) -> Field:
    """Per-pixel join over the window."""
    return _apply(field_, se, spec, "join", boundary, on_unbounded, workers, stats)


def erode(field_: Field, se: StructuringElement, spec: core.SpongeSpec, boundary="shrink",
          on_unbounded=None, workers: int = 1, stats: MorphStats | None = None) -> Field:
    """Per-pixel meet over the window."""
    return _apply(field_, se, spec, "meet", boundary, on_unbounded, workers, stats)


def opening(field_: Field, se, spec, boundary="shrink", on_unbounded=None, workers: int = 1,
            stats: MorphStats | None = None) -> Field:
    e = erode(field_, se, spec, boundary, on_unbounded, workers, stats)
    return dilate(e, se, spec, boundary, on_unbounded, workers, stats)


def closing(field_: Field, se, spec, boundary="shrink", on_unbounded=None, workers: int = 1,
            stats: MorphStats | None = None) -> Field:
    d = dilate(field_, se, spec, boundary, on_unbounded, workers, stats)
    return erode(d, se, spec, boundary, on_unbounded, workers, stats)


OPERATORS = {"dilate": dilate, "erode": erode, "open": opening, "close": closing}


def random_field(spec: core.SpongeSpec, height: int, width: int, seed: int = 0) -> Field:
    """Seeded random field whose pixels lie in the family's domain.

    Inner-product fields cluster around a common direction so windows have
    joins; angle fields stay within a quarter period.
    """
    rng = np.random.default_rng(seed)
    fam = spec.family
    if fam == "inner_product":
        d = rng.normal(scale=0.3, size=(height, width, spec.dim))
        d[..., 0] += 2.0
    elif fam == "hyperbolic":
        d = rng.normal(scale=0.1, size=(height, width, spec.dim))
        d[..., -1] = rng.uniform(0.5, 2.0, size=(height, width))
    elif fam == "angle":
        L = spec.cone.period or 1.0
        d = rng.uniform(0.0, 0.25 * L, size=(height, width, 1))
    else:
        d = rng.normal(size=(height, width, spec.dim))
    return Field(d)
