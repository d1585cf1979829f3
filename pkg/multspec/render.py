"""JSON, CSV and SVG emission for reports and spectrum estimates."""

import csv
import dataclasses
import io
import json
import math
import xml.etree.ElementTree as ET
from typing import Any, Iterable, Sequence

import numpy as np
from pydantic import BaseModel

from .spaces import SCHEMA_VERSION
from .spectra import SpectrumEstimate

SVG_SIZE = 800
SVG_MARGIN = 0.05


def jsonable(obj: Any) -> Any:
    """Plain JSON values; complex numbers become [re, im], field order is kept."""
    if isinstance(obj, BaseModel):
        return jsonable(obj.model_dump(exclude_none=True))
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_real(obj.real), _real(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _real(obj)
    return obj


def _real(x) -> Any:
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def dump_json(kind: str, payload: Any) -> str:
    body = {"schema_version": SCHEMA_VERSION, "kind": kind, "result": jsonable(payload)}
    return json.dumps(body, ensure_ascii=False, allow_nan=False)


def spectrum_payload(est: SpectrumEstimate) -> dict:
    return {
        "kind": est.kind,
        "curves": jsonable(list(est.boundary_curves)),
        "cloud": jsonable(est.sample_cloud),
        "radius": _real(est.spectral_radius),
        "radius_witness": jsonable(est.radius_witness),
        "preimage": jsonable(est.preimage),
        "membership_mode": est.membership_mode,
        "band": _real(est.band),
        "arc_length": _real(est.arc_length),
        "compact_possible": est.compact_possible,
        "theorem": est.theorem,
        "resolution": jsonable(est.resolution),
    }


def dump_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _cell(value: Any) -> str:
    if isinstance(value, (complex, np.complexfloating)):
        return f"{repr(float(value.real))}{'+' if value.imag >= 0 else '-'}{repr(abs(float(value.imag)))}i"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def spectrum_svg(est: SpectrumEstimate) -> str:
    """800x800 drawing: curves stroked, cloud as dots, dashed unit circle."""
    points = [np.asarray(c, dtype=complex) for c in est.boundary_curves]
    points.append(np.asarray(est.sample_cloud, dtype=complex))
    points.append(np.exp(2j * np.pi * np.arange(256) / 256))
    every = np.concatenate([p.ravel() for p in points if p.size])
    lo_x, hi_x = float(every.real.min()), float(every.real.max())
    lo_y, hi_y = float(every.imag.min()), float(every.imag.max())
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
    scale = SVG_SIZE * (1.0 - 2.0 * SVG_MARGIN) / span
    cx, cy = (lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0

    def project(z: np.ndarray):
        x = SVG_SIZE / 2.0 + (z.real - cx) * scale
        y = SVG_SIZE / 2.0 - (z.imag - cy) * scale
        return x, y

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(SVG_SIZE),
        height=str(SVG_SIZE),
        viewBox=f"0 0 {SVG_SIZE} {SVG_SIZE}",
    )
    ET.SubElement(svg, "title").text = f"{est.kind} ({est.membership_mode})"
    ucx, ucy = project(np.array(0j))
    ET.SubElement(
        svg,
        "circle",
        cx=_fmt(float(ucx)),
        cy=_fmt(float(ucy)),
        r=_fmt(scale),
        fill="none",
        stroke="#888888",
        **{"stroke-width": "1", "stroke-dasharray": "4 4"},
    )
    for curve in est.boundary_curves:
        xs, ys = project(np.asarray(curve, dtype=complex))
        path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
        ET.SubElement(svg, "polygon", points=path, fill="none", stroke="#1f4e9c", **{"stroke-width": "1"})
    if est.sample_cloud.size:
        group = ET.SubElement(svg, "g", fill="#c0392b")
        xs, ys = project(np.asarray(est.sample_cloud, dtype=complex))
        for x, y in zip(xs, ys):
            ET.SubElement(group, "circle", cx=_fmt(x), cy=_fmt(y), r="0.6")
    return ET.tostring(svg, encoding="unicode")


def text_table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    rendered = [[_cell(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in rendered]) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rendered]
    return "\n".join(lines) + "\n"
