"""Seeded regression cases for the morphology golden files."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import SpongeSpec
from .morphology import OPERATORS, Field, StructuringElement, random_field


@dataclass(frozen=True)
class GoldenCase:
    name: str
    spec: SpongeSpec
    op: str
    size: int = 64
    seed: int = 0

    def input_field(self) -> Field:
        return random_field(self.spec, self.size, self.size, self.seed)

    def run(self) -> Field:
        return OPERATORS[self.op](self.input_field(), StructuringElement.cross(), self.spec)


GOLDEN_CASES = (
    GoldenCase("inner_product2_dilate", SpongeSpec.inner_product(2), "dilate"),
    GoldenCase("inner_product2_erode", SpongeSpec.inner_product(2), "erode"),
    GoldenCase("epigraph2_p2_dilate", SpongeSpec.epigraph(2, p=2.0), "dilate"),
    GoldenCase("epigraph3_p2_erode", SpongeSpec.epigraph(3, p=2.0), "erode"),
    GoldenCase("hyperbolic2_dilate", SpongeSpec.hyperbolic(2), "dilate"),
    GoldenCase("hyperbolic3_erode", SpongeSpec.hyperbolic(3), "erode"),
    GoldenCase("angle_erode", SpongeSpec.angle(math.pi, 2 * math.pi), "erode"),
    GoldenCase("epigraph2_p2_open", SpongeSpec.epigraph(2, p=2.0), "open", size=16, seed=7),
    GoldenCase("epigraph2_p2_close", SpongeSpec.epigraph(2, p=2.0), "close", size=16, seed=7),
)
