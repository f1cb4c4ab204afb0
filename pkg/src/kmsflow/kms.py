"""Eigen-functionals phi with phi(rho(g)) = s^{-1} phi(g) and their spectrum.

A normalised positive eigen-functional exists exactly for s in the admissible
set; when it exists its base point lives on the face F (or anywhere on the
simplex when s = 1).  For s outside the set, nonexistence is certified by an
explicit Laurent polynomial p with p > 0 on the set (Sturm-certified) but
p(s) < 0: no positive normalised functional can assign t -> p(t) behaviour a
negative value at s, so the certificate is checkable by pure substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .affine import AffineElement, Rat, rat
from .dimgroup import (COMPACT, GroupElement, Scenario, order_test, shift)
from .laurent import LaurentPoly, sturm_positive_on
from .lp import OPTIMAL, solve_lp

FACE_PARAM = "face"
SIMPLEX_PARAM = "simplex"


class CertificateSearchFailed(Exception):
    """No certificate found within the monomial budget."""

    def __init__(self, max_degree: int):
        self.max_degree = max_degree
        super().__init__(f"certificate search exhausted {max_degree} monomials")


@dataclass(frozen=True)
class KmsFunctional:
    """Positive normalised eigen-functional, stored by base point and s.

    The base point is a barycentric weight vector over the simplex vertices;
    for s != 1 it must be supported on the face.  Normalisation (value 1 on
    the order unit) is equivalent to the weights summing to 1 and is checked
    by eigen_verify rather than trusted.
    """

    base_point: tuple
    s: Fraction

    def __init__(self, base_point: Sequence[Rat], s: Rat):
        object.__setattr__(self, "base_point", tuple(rat(x) for x in base_point))
        object.__setattr__(self, "s", rat(s))
        if self.s <= 0:
            raise ValueError("s must be positive")


def kms_eval(f: KmsFunctional, g: GroupElement) -> Fraction:
    """Exact value sum_m g_m(base) * s^m."""
    out = Fraction(0)
    for m, a in g.coeffs.items():
        val = sum((w * x for w, x in zip(f.base_point, a.values)), Fraction(0))
        out += val * f.s ** m
    return out


def eigen_verify(f: KmsFunctional, gens: Sequence[GroupElement]) -> bool:
    """Check the eigen-equation on the generators and the normalisation."""
    if not f.base_point:
        return False
    unit = GroupElement.unit(len(f.base_point))
    if kms_eval(f, unit) != 1 or any(w < 0 for w in f.base_point):
        return False
    for g in gens:
        if g.vertex_count != len(f.base_point):
            return False
        if kms_eval(f, shift(g, 1)) * f.s != kms_eval(f, g):
            return False
    return True


def canonical_functional(sc: Scenario, s: Rat) -> KmsFunctional:
    """The sample functional backing an Exists verdict.

    Base point: the first face vertex for s != 1, the barycentre of the whole
    simplex for s = 1.
    """
    s = rat(s)
    if not sc.L.contains(s):
        raise ValueError(f"s = {s} is not in the admissible set")
    n = sc.vertex_count
    if s == 1:
        return KmsFunctional([Fraction(1, n)] * n, s)
    weights = [Fraction(0)] * n
    weights[min(sc.face.vertices)] = Fraction(1)
    return KmsFunctional(weights, s)


def generator_battery(vertex_count: int) -> list:
    """Deterministic generators exercised by eigen_verify."""
    h = AffineElement([Fraction(2 + (v % 3), 3) for v in range(vertex_count)])
    battery = [
        GroupElement.unit(vertex_count),
        GroupElement.pair(h, 2, 0),
        GroupElement.pair(h, 1, -1),
        GroupElement.single(h, -2) + GroupElement.unit(vertex_count).scale(3),
    ]
    return battery


# ---------------------------------------------------------------------------
# nonexistence certificates
# ---------------------------------------------------------------------------

def _certificate_samples(sc: Scenario, per_interval: int) -> list:
    import math as _math
    out = {Fraction(1)}
    for comp in sc.L.components():
        if comp[0] == "point":
            out.add(comp[1])
        elif comp[0] == "interval":
            a, b = comp[1], comp[2]
            out |= {a, b}
            for j in range(1, per_interval):
                x = Fraction(_math.cos(_math.pi * j / per_interval)).limit_denominator(64)
                out.add(a + (b - a) * (x + 1) / 2)
        else:
            t = comp[1]
            for _ in range(8):
                out.add(t)
                t *= 2
    return sorted(out)


def nonexistence_certificate(s: Rat, sc: Scenario, max_degree: int = 64) -> LaurentPoly:
    """Laurent p, certified p > 0 on the set and p(s) < 0, for s outside it.

    Search: exact LP over growing monomial windows, maximising -p(s) subject
    to strict positivity at sample points (with the constant coefficient
    pinned positive in unbounded mode so the ray sign is right), then exact
    Sturm certification; failures refine the samples and widen the window.
    """
    s = rat(s)
    if s <= 0:
        raise ValueError("s must be positive")
    if sc.L.contains(s):
        raise ValueError(f"s = {s} belongs to the admissible set")

    width = 1
    while True:
        if sc.mode == COMPACT:
            exps = list(range(-width, width + 1))
        else:
            exps = list(range(-(width * 2 - 1), 1))
        if len(exps) > max_degree:
            raise CertificateSearchFailed(max_degree)
        samples = _certificate_samples(sc, 4 * len(exps))
        for _ in range(6):
            rows, rhs = [], []
            for t in samples:
                rows.append([-(t ** k) for k in exps])
                rhs.append(Fraction(-1))  # p(t) >= 1
            if sc.mode != COMPACT:
                rows.append([Fraction(-1) if k == 0 else Fraction(0) for k in exps])
                rhs.append(Fraction(-1))  # constant coefficient >= 1
            for k in range(len(exps)):   # |c_k| <= 1024 keeps the LP bounded
                unit = [Fraction(0)] * len(exps)
                unit[k] = Fraction(1)
                rows.append(list(unit))
                rhs.append(Fraction(1024))
                rows.append([-u for u in unit])
                rhs.append(Fraction(1024))
            objective = [-(s ** k) for k in exps]
            status, x = solve_lp(objective, rows, rhs)
            if status != OPTIMAL:
                break
            p = LaurentPoly({k: c for k, c in zip(exps, x)})
            for denom_cap in (1 << 10, 1 << 24, None):
                cand = p if denom_cap is None else LaurentPoly(
                    {k: v.limit_denominator(denom_cap) for k, v in p.coeffs.items()})
                if cand.is_zero() or cand(s) >= 0:
                    continue
                w = sturm_positive_on(cand, sc.L)
                if w is None:
                    return cand
                if sc.L.contains(w.point):
                    snapped = w.point.limit_denominator(1 << 24)
                    samples.append(snapped if sc.L.contains(snapped) else w.point)
            samples = sorted(set(samples))
        width += 1


def verification_transcript(p: LaurentPoly, sc: Scenario, s: Rat) -> dict:
    """Endpoint values and Sturm root counts backing an Absent certificate."""
    from .laurent import _count_roots, _sturm_chain
    from .serial import rational_to_str
    s = rat(s)
    cleared = p.cleared()
    chain = _sturm_chain(cleared) if len(cleared) > 1 else None
    endpoints, counts = [], []
    for comp in sc.L.components():
        if comp[0] == "point":
            endpoints.append((comp[1], p(comp[1])))
        elif comp[0] == "interval":
            a, b = comp[1], comp[2]
            endpoints += [(a, p(a)), (b, p(b))]
            counts.append({"interval": [rational_to_str(a), rational_to_str(b)],
                           "roots": _count_roots(chain, a, b) if chain else 0})
        else:
            r = comp[1]
            endpoints.append((r, p(r)))
            counts.append({"ray_from": rational_to_str(r),
                           "leading_sign": 1 if p.leading_coeff > 0 else -1})
    endpoints.append((Fraction(1), p(1)))
    return {
        "endpoint_values": [[rational_to_str(t), rational_to_str(v)]
                            for t, v in endpoints],
        "root_counts": counts,
        "value_at_s": rational_to_str(p(s)),
        "s": rational_to_str(s),
    }


@dataclass(frozen=True)
class SpectrumVerdict:
    exists: bool
    parameter_space: Optional[str] = None      # 'face' | 'simplex'
    functional: Optional[KmsFunctional] = None
    certificate: Optional[LaurentPoly] = None
    transcript: Optional[dict] = None


def spectrum_query(s: Rat, sc: Scenario, max_degree: int = 64) -> SpectrumVerdict:
    """Decide existence of a normalised positive eigen-functional at s.

    For s in the set the verdict names the parameter space (the whole simplex
    at s = 1, the face otherwise) and ships a sample functional that passes
    eigen_verify; otherwise it carries an independently checkable
    nonexistence certificate.
    """
    s = rat(s)
    if s <= 0:
        raise ValueError("s must be positive")
    if sc.L.contains(s):
        f = canonical_functional(sc, s)
        if not eigen_verify(f, generator_battery(sc.vertex_count)):
            raise AssertionError("canonical functional failed eigen_verify")
        space = SIMPLEX_PARAM if s == 1 else FACE_PARAM
        return SpectrumVerdict(True, parameter_space=space, functional=f)
    p = nonexistence_certificate(s, sc, max_degree=max_degree)
    return SpectrumVerdict(False, certificate=p,
                           transcript=verification_transcript(p, sc, s))


def face_separation_witness(x0: int, s: Rat, sc: Scenario,
                            eta: Rat = Fraction(1, 2)) -> GroupElement:
    """Order-positive element with a negative value at (x0, s), x0 off the face.

    Compact mode: b (x) (t-1)^2 + eta [[u]] with b vanishing on F and pushed
    down at x0 until the evaluation clears -1; unbounded mode multiplies the
    square by t^{-4} so the unit supplies the leading coefficient.
    """
    s, eta = rat(s), rat(eta)
    if x0 in sc.face.vertices:
        raise ValueError(f"vertex {x0} lies in the face")
    if not sc.L.contains(s):
        raise ValueError(f"s = {s} is not in the admissible set")
    if s == 1:
        raise ValueError("separation witnesses exist only for s != 1")
    if eta <= 0:
        raise ValueError("eta must be positive")
    n = sc.vertex_count
    if sc.mode == COMPACT:
        scale_back = (s - 1) ** 2
        shift_by = 0
    else:
        scale_back = (s - 1) ** 2 * s ** (-4)
        shift_by = -4
    c = (eta + 1) / scale_back
    b = AffineElement([Fraction(0)] * n)
    vals = list(b.values)
    vals[x0] = -c
    b = AffineElement(vals)
    square = {2 + shift_by: b, 1 + shift_by: b.scale(-2), 0 + shift_by: b}
    g = GroupElement(n, square) + GroupElement.unit(n).scale(eta)
    vd = order_test(g, sc)
    if not vd.is_positive:
        raise AssertionError("separation witness failed its own order test")
    return g
