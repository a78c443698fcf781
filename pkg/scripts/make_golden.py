"""Regenerate the morphology golden files in tests/golden."""

import argparse
import time
from pathlib import Path

from sponges import io
from sponges.fixtures import GOLDEN_CASES

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "golden")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for case in GOLDEN_CASES:
        t0 = time.perf_counter()
        result = case.run()
        io.write_field(result, args.out / f"{case.name}.field")
        print(f"{case.name}: {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
