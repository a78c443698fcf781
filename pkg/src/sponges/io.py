"""File formats: point-set CSV, JSON specs, structuring elements and fields."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .base import DimensionMismatch, as_pointset
from .core import SpongeSpec
from .epigraph import Profile
from .groups import ConeSpec1D
from .morphology import Field, StructuringElement

FIELD_MAGIC = "FIELD v1"


def _text(src) -> str:
    if isinstance(src, Path) or (isinstance(src, str) and "\n" not in src and len(src) < 4096
                                 and not src.lstrip().startswith("{") and Path(src).exists()):
        return Path(src).read_text()
    if hasattr(src, "read"):
        return src.read()
    return str(src)


def read_points(src) -> np.ndarray:
    """Headerless CSV, one point per row; dimension taken from the column count."""
    rows = [r for r in csv.reader(io.StringIO(_text(src))) if r and any(c.strip() for c in r)]
    if not rows:
        raise DimensionMismatch("no points in input")
    if len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("rows have different numbers of columns")
    return as_pointset([[float(c) for c in r] for r in rows])


def format_point(x) -> str:
    return " ".join("%.12g" % (v + 0.0) for v in np.asarray(x, dtype=float).reshape(-1))


def write_points(P, dst=None) -> str:
    P = np.atleast_2d(np.asarray(P, dtype=float))
    text = "".join(",".join(repr(float(v)) for v in row) + "\n" for row in P)
    if dst is not None:
        Path(dst).write_text(text)
    return text


def spec_from_json(obj) -> SpongeSpec:
    if isinstance(obj, (str, Path)):
        obj = json.loads(_text(obj))
    fam = obj.get("family")
    if fam == "inner_product":
        return SpongeSpec.inner_product(int(obj["dim"]))
    if fam == "epigraph":
        return SpongeSpec.epigraph(int(obj["dim"]), Profile.from_json(obj.get("profile", {"p": 2})))
    if fam == "hyperbolic":
        return SpongeSpec.hyperbolic(int(obj["dim"]))
    if fam in ("angle", "line"):
        period = obj.get("period")
        kappa = obj.get("kappa", math.inf)
        return SpongeSpec.angle(float(kappa), None if period is None else float(period),
                                bool(obj.get("closed", False)))
    if fam == "product":
        return SpongeSpec.product([spec_from_json(c) for c in obj["components"]])
    raise ValueError(f"unknown family {fam!r}")


def spec_to_json(spec: SpongeSpec) -> dict:
    if spec.family in ("inner_product", "hyperbolic"):
        return {"family": spec.family, "dim": spec.dim}
    if spec.family == "epigraph":
        return {"family": "epigraph", "dim": spec.dim, "profile": spec.profile.to_json()}
    if spec.family == "angle":
        return {"family": "angle", **spec.cone.to_json()}
    return {"family": "product", "components": [spec_to_json(c) for c in spec.components]}


def cone_from_json(obj) -> ConeSpec1D:
    if isinstance(obj, (str, Path)):
        obj = json.loads(_text(obj))
    return ConeSpec1D(float(obj["kappa"]), obj.get("period"), bool(obj.get("closed", False)))


def se_from_json(obj) -> StructuringElement:
    """``{"offsets": [[dx, dy], ...]}``, or ``{"shape": "square", "radius": r}`` / ``"cross"``."""
    if isinstance(obj, (str, Path)):
        obj = json.loads(_text(obj))
    if "offsets" in obj:
        return StructuringElement(tuple(tuple(o) for o in obj["offsets"]))
    shape = obj.get("shape")
    if shape == "square":
        return StructuringElement.square(int(obj.get("radius", 1)))
    if shape == "cross":
        return StructuringElement.cross()
    raise ValueError("structuring element needs offsets or a known shape")


def dumps_field(f: Field) -> str:
    """Text form; ``repr`` floats make the round trip bit-exact."""
    lines = [FIELD_MAGIC, f"{f.width} {f.height} {f.channels}"]
    for row in f.data:
        for px in row:
            lines.append(" ".join(repr(float(v)) for v in px))
    return "\n".join(lines) + "\n"


def loads_field(text: str) -> Field:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FIELD_MAGIC:
        raise ValueError("not a FIELD v1 file")
    try:
        width, height, channels = (int(t) for t in lines[1].split())
    except (IndexError, ValueError) as e:
        raise ValueError("malformed field header") from e
    body = [ln for ln in lines[2:] if ln.strip()]
    if len(body) != width * height:
        raise ValueError(f"expected {width * height} pixel rows, got {len(body)}")
    data = np.array([[float(t) for t in ln.split()] for ln in body])
    if data.shape[1] != channels:
        raise DimensionMismatch("pixel rows do not match the channel count")
    return Field(data.reshape(height, width, channels))


def read_field(path) -> Field:
    return loads_field(Path(path).read_text())


def write_field(f: Field, path) -> None:
    Path(path).write_text(dumps_field(f))
