"""JSON formats: rationals as ``"num/den"`` strings, polynomials, points, lattices."""
from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from pathlib import Path

from .gap import MWLattice
from .poly import BiPoly, DivisorData

SCHEMA = "dyson-gap/1"


class InputError(ValueError):
    """Malformed or missing input; maps to exit code 2."""


def rat_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InputError(f"expected a rational as string or integer, got {s!r}")
    try:
        return Fraction(s.strip() if isinstance(s, str) else s)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational {s!r}: {e}") from None


def parse_pair(s: str) -> tuple[Fraction, Fraction]:
    parts = s.split(",")
    if len(parts) != 2:
        raise InputError(f"expected 'a,b', got {s!r}")
    return parse_rat(parts[0]), parse_rat(parts[1])


def parse_int_pair(s: str) -> tuple[int, int]:
    a, b = parse_pair(s)
    if a.denominator != 1 or b.denominator != 1 or a < 0 or b < 0:
        raise InputError(f"expected two nonnegative integers, got {s!r}")
    return int(a), int(b)


def poly_to_json(f: BiPoly, bidegree: tuple[int, int] | None = None) -> dict:
    terms = [
        {"i": [i, j], "n": str(c.numerator), "d": str(c.denominator)}
        for (i, j), c in sorted(f.terms.items())
    ]
    return {"terms": terms, "bidegree": list(bidegree if bidegree is not None else f.bidegree)}


def poly_from_json(obj) -> tuple[BiPoly, tuple[int, int]]:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise InputError("polynomial JSON needs a 'terms' list")
    acc = []
    for t in obj["terms"]:
        try:
            i1, i2 = t["i"]
            n, d = int(t["n"]), int(t.get("d", "1"))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad term {t!r}: {e}") from None
        if not (isinstance(i1, int) and isinstance(i2, int)) or i1 < 0 or i2 < 0 or d <= 0:
            raise InputError(f"bad term {t!r}")
        acc.append(((i1, i2), Fraction(n, d)))
    f = BiPoly.from_terms(acc)
    bd = obj.get("bidegree")
    if bd is None:
        bd = f.bidegree
    try:
        bd = (int(bd[0]), int(bd[1]))
    except (TypeError, ValueError, IndexError):
        raise InputError(f"bad bidegree {obj.get('bidegree')!r}") from None
    return f, bd


def points_from_json(obj) -> list[tuple[Fraction, Fraction]]:
    if isinstance(obj, dict):
        obj = obj.get("points")
    if not isinstance(obj, list):
        raise InputError("points JSON must be a list of [p, q] pairs or {'points': [...]}")
    out = []
    for pt in obj:
        if not isinstance(pt, (list, tuple)) or len(pt) != 2:
            raise InputError(f"bad point {pt!r}")
        out.append((parse_rat(pt[0]), parse_rat(pt[1])))
    return out


def points_to_json(points) -> dict:
    return {"points": [[rat_str(p), rat_str(q)] for p, q in points]}


def lattice_from_json(obj, points_obj=None) -> MWLattice:
    if not isinstance(obj, dict) or "gram" not in obj:
        raise InputError("lattice JSON needs a 'gram' matrix")
    gram = [[parse_rat(v) for v in row] for row in obj["gram"]]
    pts = obj.get("points", {})
    if points_obj is not None:
        pts = points_obj.get("points", points_obj) if isinstance(points_obj, dict) else points_obj
    if isinstance(pts, list):
        pts = {str(i): v for i, v in enumerate(pts)}
    if not isinstance(pts, dict):
        raise InputError("lattice points must be a mapping label -> coordinates")
    labels = tuple(pts)
    coords = tuple(tuple(parse_rat(v) for v in pts[k]) for k in labels)
    try:
        return MWLattice(gram, labels, coords)
    except ValueError as e:
        raise InputError(str(e)) from None


def lattice_to_json(L: MWLattice) -> dict:
    return {
        "gram": [[rat_str(v) for v in row] for row in L.gram],
        "points": {k: [rat_str(v) for v in c] for k, c in zip(L.point_labels, L.coords)},
    }


def encode(obj):
    """Convert report objects to JSON-ready data; rationals become ``"num/den"``."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, BiPoly):
        return poly_to_json(obj)
    if isinstance(obj, DivisorData):
        return {
            "poly": poly_to_json(obj.poly, obj.designated_bidegree),
            "components": [encode(c) for c in obj.components],
            "e_of_D": obj.e_of_D,
            "intersections": {"D.D": obj.self_intersection, "D.F1": obj.dot_F1, "D.F2": obj.dot_F2},
        }
    if isinstance(obj, MWLattice):
        return lattice_to_json(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def load_json(path) -> object:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}") from None
