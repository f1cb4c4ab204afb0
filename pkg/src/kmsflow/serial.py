"""JSON (de)serialization; rationals travel as decimal-free "p/q" strings."""

from __future__ import annotations

from fractions import Fraction

from .affine import AffineElement, Face, Simplex
from .dimgroup import GroupElement, Scenario
from .laurent import AdmissibleSet, LaurentPoly


def rational_to_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def rational_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or "." in s:
        raise ValueError(f"rationals must be decimal-free p/q strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {s!r}: {exc}") from None


def laurent_to_json(p: LaurentPoly) -> dict:
    return {str(k): rational_to_str(v) for k, v in sorted(p.coeffs.items())}


def laurent_from_json(obj: dict) -> LaurentPoly:
    return LaurentPoly({int(k): rational_from_str(v) for k, v in obj.items()})


def admissible_set_to_json(s: AdmissibleSet) -> dict:
    return {
        "intervals": [[rational_to_str(a), rational_to_str(b)]
                      for a, b in s.intervals],
        "points": [rational_to_str(p) for p in s.points],
        "ray_from": None if s.ray_from is None else rational_to_str(s.ray_from),
    }


def admissible_set_from_json(obj: dict) -> AdmissibleSet:
    ray = obj.get("ray_from")
    return AdmissibleSet(
        intervals=[(rational_from_str(a), rational_from_str(b))
                   for a, b in obj.get("intervals", [])],
        points=[rational_from_str(p) for p in obj.get("points", [])],
        ray_from=None if ray is None else rational_from_str(ray),
    )


def affine_to_json(a: AffineElement) -> list:
    return [rational_to_str(v) for v in a.values]


def affine_from_json(obj) -> AffineElement:
    return AffineElement([rational_from_str(v) for v in obj])


def group_element_to_json(g: GroupElement) -> dict:
    return {str(k): affine_to_json(a) for k, a in sorted(g.coeffs.items())}


def group_element_from_json(obj: dict, vertex_count: int) -> GroupElement:
    return GroupElement(vertex_count,
                        {int(k): affine_from_json(v) for k, v in obj.items()})


def scenario_to_json(sc: Scenario, seed=None, caps=None) -> dict:
    out = {
        "simplex_vertices": sc.simplex.vertex_count,
        "face": sorted(sc.face.vertices),
        "L": admissible_set_to_json(sc.L),
        "mode": sc.mode,
    }
    if seed is not None:
        out["seed"] = seed
    if caps:
        out["caps"] = caps
    return out


def scenario_from_json(obj: dict) -> Scenario:
    simplex = Simplex(int(obj["simplex_vertices"]))
    face = Face(simplex, obj["face"])
    return Scenario(simplex, face, admissible_set_from_json(obj["L"]),
                    obj["mode"])


def witness_to_json(w) -> dict:
    return {"point": rational_to_str(w.point), "value": rational_to_str(w.value)}


def verdict_to_json(v) -> dict:
    out = {"kind": v.kind}
    if v.margin is not None:
        out["margin"] = rational_to_str(v.margin)
    if v.vertex is not None:
        out["vertex"] = v.vertex
    if v.witness is not None:
        out["witness"] = witness_to_json(v.witness)
    if v.reason is not None:
        out["reason"] = v.reason
    if v.leading_value is not None:
        out["leading_value"] = rational_to_str(v.leading_value)
    if v.certificates:
        certs = []
        for c in v.certificates:
            certs.append({k: (rational_to_str(val) if isinstance(val, Fraction)
                              else val) for k, val in c.items()})
        out["certificates"] = certs
    return out
