"""Sample left/right cone boundaries and compare joins with the grid oracle.

Writes one CSV per family (label, coordinates) next to --out, ready for
any plotting tool, and prints the exact and grid joins of a small set.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from sponges import core, io
from sponges.cli import cone_boundaries
from sponges.core import SpongeSpec

FAMILIES = {
    "inner_product": (SpongeSpec.inner_product(2), (2.0, 0.0)),
    "epigraph": (SpongeSpec.epigraph(2, p=2), (0.0, 1.0)),
    "hyperbolic": (SpongeSpec.hyperbolic(2), (0.0, 1.0)),
    "angle": (SpongeSpec.angle(math.pi, 2 * math.pi), (1.0,)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("cones"))
    ap.add_argument("--resolution", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    for name, (spec, x) in FAMILIES.items():
        rows = cone_boundaries(spec, np.array(x), args.resolution)
        with open(args.out / f"{name}.csv", "w") as fh:
            for label, z in rows:
                fh.write(label + "," + ("everywhere" if z is None else ",".join("%.12g" % v for v in z)) + "\n")
        if spec.family == "angle":
            P = (1.0 + rng.uniform(0, 2.0, size=(3, 1))) % (2 * math.pi)
        else:
            P = np.array(x) + rng.normal(scale=0.3, size=(3, spec.dim))
            P[:, -1] = np.abs(P[:, -1]) + 0.5
        exact = core.join(spec, P)
        grid = core.brute_force_extremum(spec, P, side="join", step=0.01)
        print(f"{name:14s} join {io.format_point(exact)}   grid {io.format_point(grid)}")


if __name__ == "__main__":
    main()
