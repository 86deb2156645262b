"""Command-line front end: ``dimerlab <command> <file|catalog:NAME> [flags]``.

Exit codes: 0 success, 1 domain error (or a failed cross-check), 2 usage
error. Machine format prints one canonical JSON document on stdout.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from typing import Callable

from . import io
from .dimer import DimerError, galois_cover, is_consistent, zigzag_paths, zigzag_polygon
from .exactmath import DegeneratePolygon, LatticePolygon, elementary_stats, format_laurent, rat, rat_str
from .kasteleyn import NoSignSystem, RefNotCorner, count_matchings, hamiltonians, partition_polynomial
from .matchings import UnknownMatching, boundary_counts, classify, enumerate_matchings
from .moves import MoveError, isomorphic, mutate, transport_weights
from .surface import RibbonError, invariants, twist
from .toric import (
    NonGenericTheta,
    NonTriangularSubdivision,
    NoPerfectMatching,
    Triangulation,
    crosscheck_tropical_fan,
    dual_subdivision,
    resolution_fan,
    tropical_polynomial,
)

DOMAIN_ERRORS = (
    io.FileFormatError,
    DimerError,
    RibbonError,
    MoveError,
    NoSignSystem,
    RefNotCorner,
    UnknownMatching,
    NonGenericTheta,
    NonTriangularSubdivision,
    NoPerfectMatching,
    DegeneratePolygon,
)

RANDOM_TRIES = 200


class UsageError(Exception):
    pass


# -- rendering helpers -----------------------------------------------------------


def _pt(p) -> str:
    return f"{p[0]},{p[1]}"


def _polygon(p: LatticePolygon) -> list[list[int]]:
    return [list(v) for v in p.vertices]


def _triangulation(tr: Triangulation) -> dict:
    return {
        "cells": [[list(p) for p in c] for c in sorted(tr.cells)],
        "edges": [[list(p) for p in e] for e in sorted(tr.edges)],
    }


def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, val in obj.items():
        if isinstance(val, dict) and val:
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(val, indent + 1))
        elif isinstance(val, list) and val and all(isinstance(x, (dict, list)) for x in val):
            lines.append(f"{pad}{key}:")
            for x in val:
                lines.append(f"{pad}  - {x}")
        else:
            lines.append(f"{pad}{key}: {val}")
    return lines


# -- flag parsing ------------------------------------------------------------------


def _parse_pair(text: str, flag: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{flag} expects two integers like 1,2; got {text!r}") from None
    return a, b


def _parse_theta(text: str, vertices) -> dict[str, Fraction]:
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"--theta expects v=p/q,...; got {part!r}")
        v, q = part.split("=", 1)
        try:
            out[v.strip()] = rat(q)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--theta: cannot read {q!r} as a rational") from None
    unknown = set(out) - set(vertices)
    if unknown:
        raise UsageError(f"--theta names unknown vertices {sorted(unknown)}")
    missing = [v for v in vertices if v not in out]
    if len(missing) == 1:
        out[missing[0]] = -sum(out.values())
    elif missing:
        raise UsageError(f"--theta is missing vertices {missing}")
    if sum(out.values()) != 0:
        raise UsageError("--theta must sum to zero")
    return {v: out[v] for v in vertices}


def _load_weights(path: str) -> dict[str, Fraction]:
    import json

    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise io.FileFormatError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise io.FileFormatError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if isinstance(doc, dict) and "weights" in doc:
        doc = doc["weights"]
    return io.read_weights(doc, path)


def _weights(args, f: io.DimerFile) -> dict[str, Fraction]:
    if args.weights:
        w = _load_weights(args.weights)
    elif f.weights is not None:
        w = f.weights
    else:
        return {a: Fraction(1) for a in f.dimer.arrows}
    missing = set(f.dimer.arrows) - set(w)
    if missing:
        raise io.FileFormatError(f"weights: missing arrows {sorted(missing)}")
    return {a: w[a] for a in f.dimer.arrows}


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-50, 50), rng.randint(1, 9))


# -- commands --------------------------------------------------------------------


def cmd_validate(f: io.DimerFile, args) -> tuple[dict, int]:
    d = f.dimer
    rep = is_consistent(d)
    out = {
        "name": d.name,
        "vertices": len(d.vertices),
        "arrows": len(d.arrows),
        "positive_cycles": len(d.pos_cycles),
        "negative_cycles": len(d.neg_cycles),
        "euler": d.euler,
        "consistent": bool(rep),
    }
    if not rep:
        kind, idx = rep.cycle
        out["violation"] = {
            "cycle": f"{kind} {idx}",
            "arrows": list((d.pos_cycles if kind == "positive" else d.neg_cycles)[idx]),
            "zigzags": list(rep.zigzags),
            "reason": rep.reason,
        }
    return out, 0


def cmd_info(f: io.DimerFile, args) -> tuple[dict, int]:
    d = f.dimer
    mirror = invariants(twist(d.graph))
    out = {"name": d.name, "vertices": len(d.vertices), "consistent": bool(is_consistent(d))}
    out["zigzags"] = [list(z.homology) for z in zigzag_paths(d)]
    try:
        zp = zigzag_polygon(d)
        out["zigzag_polygon"] = _polygon(zp)
    except DimerError as e:
        out["zigzag_polygon"] = f"unavailable: {e}"
    t = enumerate_matchings(d)
    if t.empty:
        out["matching_polygon"] = None
    else:
        mp = t.polygon.normalized()
        out["matching_polygon"] = _polygon(mp)
        if not mp.degenerate:
            a, b, i = elementary_stats(mp)
            out["area"], out["boundary_points"], out["interior_points"] = a, b, i
            out["pick"] = a == 2 * i + b - 2
    out["mirror_genus"] = mirror.genus
    out["mirror_vertices"] = mirror.faces
    return out, 0


def cmd_matchings(f: io.DimerFile, args) -> tuple[dict, int]:
    d = f.dimer
    t = enumerate_matchings(d)
    if t.empty:
        raise NoPerfectMatching("dimer has no perfect matching")
    pts = {}
    for p, ms in t.by_point.items():
        pts[_pt(p)] = {"kind": classify(t, ms[0]), "matchings": [list(m.key()) for m in ms]}
    out = {
        "total": t.count(),
        "polygon": _polygon(t.polygon),
        "points": pts,
        "sides": [{"from": list(a), "to": list(b), "counts": c} for (a, b), c in boundary_counts(t)],
    }
    return out, 0


def cmd_partition(f: io.DimerFile, args) -> tuple[dict, int]:
    d = f.dimer
    w = _weights(args, f)
    pp = partition_polynomial(d, w)
    out = {
        "polynomial": format_laurent(pp.poly),
        "terms": {_pt(p): rat_str(c) for p, c in pp.poly.items()},
        "count": rat_str(count_matchings(d, w)),
    }
    return out, 0


def cmd_hamiltonians(f: io.DimerFile, args) -> tuple[dict, int]:
    d = f.dimer
    w = _weights(args, f)
    t = enumerate_matchings(d)
    if t.empty:
        raise NoPerfectMatching("dimer has no perfect matching")
    corner = t.polygon.vertices[0]
    ref = t.by_point[corner][0]
    h = hamiltonians(d, w, ref, t)
    return {"reference": list(ref.key()), "reference_point": list(corner), "values": {_pt(p): rat_str(v) for p, v in h.items()}}, 0


def cmd_mutate(f: io.DimerFile, args) -> tuple[dict, int]:
    if args.vertex is None:
        raise UsageError("mutate needs --vertex")
    d = f.dimer
    nd, rec = mutate(d, args.vertex)
    new_weights = transport_weights(d, _weights(args, f), rec) if (args.weights or f.weights) else None
    out = {
        "vertex": args.vertex,
        "isomorphic_to_source": isomorphic(d, nd),
        "consistent": bool(is_consistent(nd)),
        "dimer": io.to_document(io.DimerFile(nd, new_weights)),
    }
    return out, 0


def _energies(args, f: io.DimerFile, rng: random.Random) -> dict[str, Fraction]:
    if args.weights:
        return _weights(args, f)
    return {a: _random_rational(rng) for a in f.dimer.arrows}


def cmd_tropical(f: io.DimerFile, args) -> tuple[dict, int]:
    rng = random.Random(args.seed)
    energy = _energies(args, f, rng)
    tp = tropical_polynomial(f.dimer, energy)
    sub = dual_subdivision(tp)
    out = {
        "energies": {a: rat_str(e) for a, e in energy.items()},
        "coefficients": {_pt(p): rat_str(b) for p, b in sorted(tp.coeffs.items())},
        "subdivision": _triangulation(sub),
    }
    return out, 0


def _random_theta(d, rng: random.Random) -> dict[str, Fraction]:
    from .toric import is_generic

    for _ in range(RANDOM_TRIES):
        th = {v: _random_rational(rng) for v in d.vertices}
        th[d.vertices[-1]] -= sum(th.values())
        if is_generic(d, th):
            return th
    raise NonGenericTheta("no generic random stability parameter found")


def cmd_fan(f: io.DimerFile, args) -> tuple[dict, int]:
    d = f.dimer
    theta = _parse_theta(args.theta, d.vertices) if args.theta else _random_theta(d, random.Random(args.seed))
    fan = resolution_fan(d, theta)
    out = {
        "theta": {v: rat_str(x) for v, x in theta.items()},
        "stable": {_pt(p): list(lab) for p, lab in sorted(fan.labels.items())},
        "fan": _triangulation(fan),
    }
    return out, 0


def cmd_crosscheck(f: io.DimerFile, args) -> tuple[dict, int]:
    d = f.dimer
    rng = random.Random(args.seed)
    t = enumerate_matchings(d)
    if args.weights:
        rep = crosscheck_tropical_fan(d, _weights(args, f), t)
    else:
        rep = None
        for _ in range(RANDOM_TRIES):
            m = {a: _random_rational(rng) for a in d.arrows}
            try:
                rep = crosscheck_tropical_fan(d, m, t)
                break
            except (NonGenericTheta, NonTriangularSubdivision):
                continue
        if rep is None:
            raise NonGenericTheta("no generic random weighting found")
    out = {
        "result": "PASS" if rep else "FAIL",
        "theta": {v: rat_str(x) for v, x in rep.theta.items()},
        "tropical": _triangulation(rep.tropical),
        "fan": _triangulation(rep.fan),
    }
    return out, 0 if rep else 1


def cmd_cover(f: io.DimerFile, args) -> tuple[dict, int]:
    if args.v is None or args.w is None:
        raise UsageError("cover needs --v and --w")
    v, w = _parse_pair(args.v, "--v"), _parse_pair(args.w, "--w")
    if v[0] * w[1] - v[1] * w[0] == 0:
        raise UsageError("--v and --w must span a full-rank sublattice")
    c = galois_cover(f.dimer, v, w)
    t = enumerate_matchings(c)
    out = {"vertices": len(c.vertices), "arrows": len(c.arrows), "euler": c.euler}
    if not t.empty and not t.polygon.degenerate:
        out["matching_area"] = elementary_stats(t.polygon)[0]
    out["dimer"] = io.to_document(io.DimerFile(c))
    return out, 0


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "info": cmd_info,
    "matchings": cmd_matchings,
    "partition": cmd_partition,
    "hamiltonians": cmd_hamiltonians,
    "mutate": cmd_mutate,
    "tropical": cmd_tropical,
    "fan": cmd_fan,
    "crosscheck": cmd_crosscheck,
    "cover": cmd_cover,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dimerlab", description="Exact computations with dimer models on the torus.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("file", help="dimer file, or catalog:NAME for a built-in example")
    p.add_argument("--weights", help="JSON file mapping arrow ids to rationals 'p/q'")
    p.add_argument("--theta", help="stability parameter as v=p/q,... (one vertex may be omitted)")
    p.add_argument("--vertex", help="quiver vertex to mutate at")
    p.add_argument("--v", help="first sublattice generator a,b")
    p.add_argument("--w", help="second sublattice generator c,d")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "machine"], default="text")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        f = io.load(args.file)
        out, code = COMMANDS[args.command](f, args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"dimerlab: error: {e}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if args.format == "machine":
        print(io.canonical_json(out))
    else:
        print("\n".join(_render_text(out)))
    return code


if __name__ == "__main__":
    sys.exit(main())
