"""Dimer files: a JSON document with rationals written as ``"p/q"`` strings.

Canonical output uses sorted keys and no insignificant whitespace, so a
canonical file survives a parse/write round trip byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .catalog import CATALOG
from .dimer import DimerError, TorusDimer
from .exactmath import rat, rat_str

CATALOG_PREFIX = "catalog:"
_CORE_KEYS = {"name", "vertices", "arrows", "faces", "weights"}


class FileFormatError(ValueError):
    pass


@dataclass
class DimerFile:
    dimer: TorusDimer
    weights: dict[str, Fraction] | None = None
    # keys we do not interpret, kept so that writing reproduces them
    extra: dict[str, Any] = field(default_factory=dict)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _need(doc: Mapping, key: str, kind, where: str):
    if key not in doc:
        raise FileFormatError(f"{where}: missing field {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise FileFormatError(f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _read_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise FileFormatError(f"{where}: expected a rational string 'p/q', got {value!r}")
    try:
        return rat(value)
    except (ValueError, ZeroDivisionError):
        raise FileFormatError(f"{where}: cannot read {value!r} as a rational") from None


def read_weights(doc: Mapping, where: str = "weights") -> dict[str, Fraction]:
    if not isinstance(doc, Mapping):
        raise FileFormatError(f"{where}: expected an object mapping arrow ids to rationals")
    out = {}
    for aid, v in doc.items():
        q = _read_rational(v, f"{where}.{aid}")
        if q == 0:
            raise FileFormatError(f"{where}.{aid}: weights must be nonzero")
        out[str(aid)] = q
    return out


def parse_document(doc: Mapping) -> DimerFile:
    if not isinstance(doc, Mapping):
        raise FileFormatError("top level: expected an object")
    vertices = _need(doc, "vertices", list, "top level")
    arrows_raw = _need(doc, "arrows", list, "top level")
    faces = _need(doc, "faces", dict, "top level")
    arrows = []
    for k, a in enumerate(arrows_raw):
        where = f"arrows[{k}]"
        if not isinstance(a, Mapping):
            raise FileFormatError(f"{where}: expected an object")
        h = _need(a, "h", list, where)
        if len(h) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in h):
            raise FileFormatError(f"{where}.h: expected two integers")
        arrows.append(
            (str(_need(a, "id", str, where)), str(_need(a, "tail", str, where)), str(_need(a, "head", str, where)), tuple(h))
        )
    pos = _need(faces, "positive", list, "faces")
    neg = _need(faces, "negative", list, "faces")
    for label, cycles in (("positive", pos), ("negative", neg)):
        for k, c in enumerate(cycles):
            if not isinstance(c, list) or not all(isinstance(x, str) for x in c):
                raise FileFormatError(f"faces.{label}[{k}]: expected a list of arrow ids")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise FileFormatError("top level.name: expected a string")
    dimer = TorusDimer([str(v) for v in vertices], arrows, pos, neg, name)
    weights = None
    if "weights" in doc:
        weights = read_weights(doc["weights"])
        missing = set(dimer.arrows) - set(weights)
        unknown = set(weights) - set(dimer.arrows)
        if missing or unknown:
            raise FileFormatError(f"weights: missing {sorted(missing)}, unknown {sorted(unknown)}")
    extra = {k: v for k, v in doc.items() if k not in _CORE_KEYS}
    return DimerFile(dimer, weights, extra)


def parse(text: str) -> DimerFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_document(doc)


def to_document(f: DimerFile) -> dict:
    doc = dict(f.extra)
    doc.update(f.dimer.to_dict())
    if f.weights is not None:
        doc["weights"] = {a: rat_str(q) for a, q in f.weights.items()}
    return doc


def write(f: DimerFile) -> str:
    return canonical_json(to_document(f))


def load(source: str) -> DimerFile:
    """Read a dimer file from a path, or a built-in entry as ``catalog:NAME``."""
    if source.startswith(CATALOG_PREFIX):
        name = source[len(CATALOG_PREFIX):]
        if name not in CATALOG:
            raise FileFormatError(f"no catalog entry {name!r}; have {', '.join(CATALOG)}")
        return parse_document(CATALOG[name])
    try:
        text = Path(source).read_text()
    except OSError as e:
        raise FileFormatError(f"{source}: {e.strerror}") from None
    try:
        return parse(text)
    except DimerError:
        raise
    except FileFormatError as e:
        raise FileFormatError(f"{source}: {e}") from None
