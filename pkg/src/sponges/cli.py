"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 unbounded result, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import core, io
from . import morphology as morph
from .base import JoinUnavailable, SpongeError, WindowUnbounded

EXIT_OK, EXIT_INPUT, EXIT_UNBOUNDED, EXIT_INVALID = 0, 1, 2, 3


class InputError(Exception):
    pass


def _file(name: str) -> Path:
    p = Path(name)
    if not p.is_file():
        raise InputError(f"no such file: {name}")
    return p


def _spec(args) -> core.SpongeSpec:
    if not args.spec:
        raise InputError("--spec is required")
    return io.spec_from_json(args.spec)


def _report(rep, out) -> int:
    if rep.passed:
        print("PASS", file=out)
        for n in rep.notes:
            print(f"note: {n}", file=out)
        return EXIT_OK
    print("FAIL " + ",".join(rep.failed_axioms()), file=out)
    for name, witness in rep.violations:
        print(f"  {name}: {json.dumps(witness, default=str)}", file=out)
    return EXIT_INVALID


def cmd_extremum(args, out) -> int:
    spec = _spec(args)
    P = io.read_points(_file(args.points))
    fn = core.join if args.command == "join" else core.meet
    r = fn(spec, P, tol=args.tol)
    if r is None:
        print("UNBOUNDED", file=out)
        return EXIT_UNBOUNDED
    print(io.format_point(r), file=out)
    return EXIT_OK


def cmd_validate(args, out) -> int:
    return _report(core.validate_spec(_spec(args), samples=args.samples, seed=args.seed), out)


def cmd_axioms(args, out) -> int:
    spec = _spec(args)
    P = io.read_points(_file(args.points))
    rep = core.check_orientation(spec, P)
    try:
        rep.merge(core.check_absorption(spec, P, tol=args.tol))
    except JoinUnavailable:
        rep.notes.append("absorption skipped: no right bound")
    if args.y is not None:
        y = io.read_points(_file(args.y))[0]
        rep.merge(core.check_part_preservation(spec, P, y, tol=args.tol))
    return _report(rep, out)


def cmd_oracle(args, out) -> int:
    spec = _spec(args)
    P = io.read_points(_file(args.points))
    side = args.side
    exact = core.join(spec, P, args.tol) if side == "join" else core.meet(spec, P, args.tol)
    if exact is None:
        print("UNBOUNDED", file=out)
        return EXIT_UNBOUNDED
    brute = core.brute_force_extremum(spec, P, side=side, step=args.grid_step)
    print("exact " + io.format_point(exact), file=out)
    print("grid  " + ("none" if brute is None else io.format_point(brute)), file=out)
    if brute is None:
        return EXIT_INVALID
    dist = float(np.max(np.abs(spec.canonical(exact) - spec.canonical(brute))))
    print("max coordinate difference %.12g (allowed %.12g)" % (dist, 5 * args.grid_step), file=out)
    return EXIT_OK if dist <= 5 * args.grid_step else EXIT_INVALID


def cone_boundaries(spec: core.SpongeSpec, x: np.ndarray, n: int):
    """Boundary samples of the left and right cones of ``x`` in the plane of axis 0 and ``h``.

    Returns a list of ``(label, point)`` pairs; ``label`` is ``L`` or ``R``.
    A whole-space cone is reported as a single ``(label, None)`` marker.
    """
    t = np.linspace(0.0, 1.0, n)
    out = []

    def embed(a, b):
        z = x.copy()
        z[0], z[-1] = a, b
        return z

    fam = spec.family
    if fam == "inner_product":
        r = float(np.linalg.norm(x))
        if r == 0.0:
            return [("L", x.copy()), ("R", None)]
        u = x / r
        v = np.zeros_like(x)
        if x.size > 1:
            k = int(np.argmin(np.abs(u)))
            v[k] = 1.0
            v -= (v @ u) * u
            v /= np.linalg.norm(v)
        for s in t:
            a = 2 * np.pi * s
            out.append(("L", 0.5 * x + 0.5 * r * (np.cos(a) * u + np.sin(a) * v)))
        for s in t:
            out.append(("R", x + (4 * s - 2) * r * v))
    elif fam == "hyperbolic":
        xh = x[-1]
        for s in t:
            a = np.pi * s
            out.append(("L", embed(x[0] + xh * np.cos(a), xh * np.sin(a))))
        for s in t:
            c = x[0] + (4 * s - 2) * xh
            out.append(("R", embed(c, float(np.hypot(c - x[0], xh)))))
    elif fam == "epigraph":
        f = spec.profile
        for side, sign in (("L", -1.0), ("R", 1.0)):
            for s in t:
                d = (4 * s - 2)
                out.append((side, embed(x[0] + d, x[-1] + sign * float(f(abs(d))))))
    elif fam == "angle":
        cone = spec.cone
        k = cone.kappa
        ends = [("L", x - k), ("L", x), ("R", x), ("R", x + k)]
        for label, z in ends:
            out.append((label, spec.canonical(z) if cone.period is not None else z))
    else:
        raise InputError("cones are not available for product specs")
    return out


def cmd_cones(args, out) -> int:
    spec = _spec(args)
    x = io.read_points(_file(args.point))[0]
    core.leq(spec, x, x)
    for label, z in cone_boundaries(spec, x, args.resolution):
        if z is None:
            print(f"{label},everywhere", file=out)
        else:
            print(label + "," + ",".join("%.12g" % v for v in z), file=out)
    return EXIT_OK


def cmd_morph(args, out) -> int:
    spec = _spec(args)
    field = io.read_field(_file(args.field))
    se = io.se_from_json(args.se) if args.se else morph.StructuringElement.square(1)
    stats = morph.MorphStats()
    t0 = time.perf_counter()
    try:
        result = morph.OPERATORS[args.op](field, se, spec, boundary=args.boundary,
                                          on_unbounded=args.on_unbounded, workers=args.workers,
                                          stats=stats)
    except WindowUnbounded as e:
        print(f"UNBOUNDED at pixel {e.pixel}", file=out)
        return EXIT_UNBOUNDED
    elapsed = time.perf_counter() - t0
    if args.output:
        io.write_field(result, args.output)
    else:
        out.write(io.dumps_field(result))
    print(f"{args.op}: {field.width}x{field.height} pixels in {elapsed:.3f} s, "
          f"{stats.unbounded} unbounded windows", file=sys.stderr)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors; exit code 2 is reserved for unbounded results
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="sponge spec JSON file or inline JSON")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="sponges", description="Joins, meets and morphology on sponges.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("join", "meet"):
        s = sub.add_parser(name, parents=[common], help=f"{name} of a point set")
        s.add_argument("points", help="CSV file, one point per row")
    s = sub.add_parser("validate", parents=[common], help="run the family's validation suite")
    s.add_argument("--samples", type=int, default=10000)
    s = sub.add_parser("axioms", parents=[common], help="orientation, absorption and part preservation")
    s.add_argument("points")
    s.add_argument("--y", help="CSV with the point for the part-preservation check")
    s = sub.add_parser("oracle", parents=[common], help="compare exact solver with the grid oracle")
    s.add_argument("points")
    s.add_argument("--side", choices=("join", "meet"), default="join")
    s.add_argument("--grid-step", type=float, default=0.01)
    s = sub.add_parser("cones", parents=[common], help="boundary samples of left and right cones")
    s.add_argument("point")
    s.add_argument("--resolution", type=int, default=64)
    s = sub.add_parser("morph", parents=[common], help="morphological filter of a field")
    s.add_argument("field")
    s.add_argument("--op", choices=sorted(morph.OPERATORS), default="dilate")
    s.add_argument("--se", help="structuring element JSON")
    s.add_argument("--boundary", choices=[b.value for b in morph.BoundaryPolicy], default="shrink")
    s.add_argument("--on-unbounded", choices=[b.value for b in morph.UnboundedPolicy], default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("-o", "--output")
    return p


COMMANDS = {"join": cmd_extremum, "meet": cmd_extremum, "validate": cmd_validate,
            "axioms": cmd_axioms, "oracle": cmd_oracle, "cones": cmd_cones, "morph": cmd_morph}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if getattr(args, "tol", 1.0) <= 0 or getattr(args, "grid_step", 1.0) <= 0:
        print("error: tolerances must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except (InputError, SpongeError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
