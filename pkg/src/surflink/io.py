"""JSON serialization for diagrams and family specifications.

Diagram files extend the plain map format (``vertices`` rotation lists and
``opposite`` dart pairs) with the surface genus and per-vertex decoration.
Family specifications bundle a base diagram (inline or by path), the two
layer curve classes, a layer count, an optional monodromy word, and
optional filling coefficients.  All emitted JSON is deterministic: sorted
keys, fixed indentation.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Optional

from .constructions import (
    LayeredFamily,
    ManifoldLink,
    annular_fill,
    build_doubled,
    build_layered,
    build_mapping_torus,
    build_trivial_torus,
    fill_to_wga,
)
from .curves_mcg import MappingClassWord, parse_curve_word
from .errors import ParseError
from .fal_diagram import Crossing, CrossingCircle, FalDiagram
from .surface_map import map_from_json_dict, map_to_json_dict

__all__ = [
    "diagram_to_json_dict",
    "diagram_from_json_dict",
    "dump_diagram",
    "load_diagram",
    "dumps_json",
    "file_digest",
    "load_family_spec",
    "build_link_from_spec",
]

KINDS = ("DoubledThickenedSurface", "MappingTorus", "TrivialMappingTorus")


def diagram_to_json_dict(diagram: FalDiagram) -> dict:
    data = map_to_json_dict(diagram.map)
    data["genus"] = diagram.genus
    kinds, over, twist, twist_sign = [], [], [], []
    for k in diagram.vertex_kind:
        if isinstance(k, CrossingCircle):
            kinds.append("circle")
            over.append(None)
            twist.append(k.half_twist)
            twist_sign.append(k.half_twist_sign)
        else:
            kinds.append("crossing")
            over.append(k.over_pair)
            twist.append(None)
            twist_sign.append(None)
    data["vertex_kind"] = kinds
    data["over_pair"] = over
    data["half_twist"] = twist
    data["half_twist_sign"] = twist_sign
    return data


def diagram_from_json_dict(data: dict) -> FalDiagram:
    try:
        m = map_from_json_dict(data)
        genus = data["genus"]
        kinds = []
        for i, name in enumerate(data["vertex_kind"]):
            if name == "circle":
                kinds.append(
                    CrossingCircle(
                        half_twist=bool(data["half_twist"][i]),
                        half_twist_sign=int(data["half_twist_sign"][i] or 1),
                    )
                )
            elif name == "crossing":
                kinds.append(Crossing(over_pair=int(data["over_pair"][i])))
            else:
                raise ParseError(f"vertex {i}: unknown kind {name!r}")
        return FalDiagram(m, genus, tuple(kinds))
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed diagram object: {exc}") from exc


def dumps_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def dump_diagram(diagram: FalDiagram, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_json(diagram_to_json_dict(diagram)))


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_diagram(path: str) -> FalDiagram:
    return diagram_from_json_dict(_load_json(path))


def file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _resolve_diagram(entry, spec_dir: str) -> FalDiagram:
    if isinstance(entry, str):
        return load_diagram(os.path.join(spec_dir, entry))
    if isinstance(entry, dict):
        return diagram_from_json_dict(entry)
    raise ParseError(f"diagram entry must be a path or an object, got {type(entry)}")


def load_family_spec(path: str) -> dict:
    spec = _load_json(path)
    if "kind" not in spec or spec["kind"] not in KINDS:
        raise ParseError(f"spec field 'kind' must be one of {KINDS}")
    for required in ("base", "gamma_odd", "gamma_even", "m"):
        if required not in spec:
            raise ParseError(f"spec is missing required field {required!r}")
    spec["_dir"] = os.path.dirname(os.path.abspath(path))
    return spec


def _parse_curve_entry(entry, g: int):
    if isinstance(entry, str):
        return entry  # word text; curve_class handles parsing
    if isinstance(entry, list):
        return tuple(entry)
    raise ParseError(f"curve entry must be a word string or a list, got {type(entry)}")


def _parse_phi(entries, g: int) -> MappingClassWord:
    letters = []
    for item in entries:
        try:
            curve, exp = item
        except (TypeError, ValueError) as exc:
            raise ParseError(f"phi letters must be [curve, exponent] pairs: {item!r}") from exc
        if isinstance(curve, str):
            curve = parse_curve_word(curve, g)
        else:
            curve = tuple(curve)
        letters.append((curve, int(exp)))
    return MappingClassWord(tuple(letters), g)


def build_link_from_spec(spec: dict) -> ManifoldLink:
    """Assemble a ManifoldLink from a parsed family spec, applying any
    annular (t) and crossing-circle (s) fillings it requests."""
    spec_dir = spec.get("_dir", ".")
    base = _resolve_diagram(spec["base"], spec_dir)
    g = base.genus
    gamma_odd = _parse_curve_entry(spec["gamma_odd"], g)
    gamma_even = _parse_curve_entry(spec["gamma_even"], g)
    family = build_layered(
        base,
        gamma_odd,
        gamma_even,
        int(spec["m"]),
        assert_intersection=bool(spec.get("assert_intersection", False)),
    )
    kind = spec["kind"]
    if kind == "DoubledThickenedSurface":
        base2 = _resolve_diagram(spec.get("base2", spec["base"]), spec_dir)
        link = build_doubled(base, base2, family)
    elif kind == "MappingTorus":
        if "phi" not in spec:
            raise ParseError("mapping-torus specs require a 'phi' word")
        phi = _parse_phi(spec["phi"], g)
        link = build_mapping_torus(
            base,
            phi,
            family,
            gamma_even_justification=spec.get("gamma_even_justification"),
        )
    else:
        link = build_trivial_torus(base, family)
    if "t" in spec:
        link = annular_fill(link, tuple(int(x) for x in spec["t"]))
    if "s" in spec:
        link = fill_to_wga(link, tuple(int(x) for x in spec["s"]))
    return link
