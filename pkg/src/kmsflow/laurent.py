"""Exact Laurent polynomials over Q with certified positivity on subsets of (0, oo).

Positivity is decided by Sturm sequences on pole-cleared integer polynomials:
endpoint signs plus an exact interior root count.  Rays are reduced to a
compact interval through a Cauchy root bound; beyond the bound the sign is the
leading sign.  Every NotPositive answer is backed by a rational witness point
with p(witness) <= 0, found by root isolation (odd-multiplicity roots give a
sign change; rational tangencies are recovered with a Stern-Brocot simplest-
fraction search).  No floating point touches any certificate; floats are used
only to seed least-squares fits whose output is re-certified exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

from .affine import Rat, rat


class WitnessExtractionError(Exception):
    """No rational witness found: positivity fails only at an irrational tangency."""


class ApproximationFailed(Exception):
    """Certified fit did not reach the requested bound within the escalation cap."""

    def __init__(self, achieved_bound):
        self.achieved_bound = achieved_bound
        super().__init__(f"approximation stalled at certified bound {achieved_bound}")


# ---------------------------------------------------------------------------
# dense integer/rational polynomial helpers (coefficient lists, low -> high)
# ---------------------------------------------------------------------------

def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_eval(c: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _poly_deriv(c: Sequence) -> list:
    return _trim([i * c[i] for i in range(1, len(c))])


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return _trim(out)


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if va == 0:
            continue
        for j, vb in enumerate(b):
            out[i + j] += va * vb
    return _trim(out)


def _primitive(c: Sequence) -> list:
    """Scale by a positive rational so coefficients are coprime integers."""
    c = _trim([Fraction(v) for v in c])
    if not c:
        return []
    den = 1
    for v in c:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in c]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    return [v // g for v in ints]


def _poly_rem(a: Sequence, b: Sequence) -> list:
    """Remainder of a by b over Q (b non-zero)."""
    r = [Fraction(v) for v in a]
    db, lb = len(b) - 1, Fraction(b[-1])
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        q = r[-1] / lb
        for i in range(len(b)):
            r[i + k] -= q * b[i]
        r.pop()
        _trim(r)
    return _trim(r)


def _poly_divexact(a: Sequence, b: Sequence) -> list:
    """Exact quotient a/b; raises if the division leaves a remainder."""
    r = [Fraction(v) for v in a]
    db, lb = len(b) - 1, Fraction(b[-1])
    out = [Fraction(0)] * (len(r) - db) if len(r) > db else []
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        q = r[-1] / lb
        out[k] = q
        for i in range(len(b)):
            r[i + k] -= q * b[i]
        r.pop()
        _trim(r)
    if _trim(r):
        raise ArithmeticError("division is not exact")
    return _trim(out)


def _poly_gcd(a: Sequence, b: Sequence) -> list:
    """Primitive gcd with positive leading coefficient."""
    a, b = _primitive(a), _primitive(b)
    while b:
        a, b = b, _primitive(_poly_rem(a, b))
    if a and a[-1] < 0:
        a = [-v for v in a]
    return a


def _sturm_chain(p: Sequence) -> list:
    """Canonical Sturm chain, each member reduced to a primitive integer poly."""
    chain = [_primitive(p)]
    d = _poly_deriv(chain[0])
    if d:
        chain.append(_primitive(d))
        while len(chain[-1]) > 1:
            r = _poly_rem(chain[-2], chain[-1])
            if not r:
                break
            chain.append(_primitive([-v for v in r]))
    return chain


def _sign_variations(chain: Sequence, x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = _poly_eval(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _count_roots(chain: Sequence, a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b); requires p(a) != 0 != p(b)."""
    return _sign_variations(chain, a) - _sign_variations(chain, b)


def _cauchy_bound(p: Sequence) -> Fraction:
    """All real roots of p lie strictly inside (-B, B)."""
    lead = abs(Fraction(p[-1]))
    m = max((abs(Fraction(v)) for v in p[:-1]), default=Fraction(0))
    return 1 + m / lead


def _yun_squarefree(p: Sequence) -> list:
    """Yun's algorithm: [(factor, multiplicity)] with factors squarefree, primitive."""
    p = _primitive(p)
    if len(p) <= 1:
        return []
    d = _poly_deriv(p)
    a = _poly_gcd(p, d)
    b = _poly_divexact(p, a)
    c = _poly_divexact(d, a)
    out = []
    i = 1
    while len(b) > 1:
        d2 = _poly_sub(c, _poly_deriv(b))
        ai = _poly_gcd(b, d2) if d2 else _primitive(b)
        if len(ai) > 1:
            out.append((ai, i))
        b = _poly_divexact(b, ai)
        c = _poly_divexact(d2, ai) if d2 else []
        i += 1
    return out


def _parity_part(p: Sequence, odd: bool) -> list:
    """Product of the squarefree factors of p with odd (or even) multiplicity."""
    out = [1]
    for fac, mult in _yun_squarefree(p):
        if (mult % 2 == 1) == odd:
            out = _poly_mul(out, fac)
    return _primitive(out)


def _simplest_in(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator strictly inside (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    z = lo.numerator // lo.denominator  # floor
    if z + 1 < hi:
        return Fraction(z + 1)
    if lo == z:  # open at an integer endpoint
        w = hi - z
        m = (w.denominator // w.numerator) + 1
        return z + Fraction(1, m)
    return z + 1 / _simplest_in(1 / (hi - z), 1 / (lo - z))


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Finitely supported map exponent -> rational; empty map is zero."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for k, v in (coeffs.items() if hasattr(coeffs, "items") else coeffs):
                v = rat(v)
                if v != 0:
                    clean[int(k)] = v
        self.coeffs = clean

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def constant(c: Rat) -> "LaurentPoly":
        return LaurentPoly({0: rat(c)})

    @staticmethod
    def monomial(c: Rat, k: int) -> "LaurentPoly":
        return LaurentPoly({k: rat(c)})

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Top exponent, -inf for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else float("-inf")

    @property
    def valuation(self):
        return min(self.coeffs) if self.coeffs else float("inf")

    @property
    def leading_coeff(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[max(self.coeffs)]

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                out[k] = out.get(k, Fraction(0)) + a * b
        return LaurentPoly(out)

    def scale(self, c: Rat) -> "LaurentPoly":
        c = rat(c)
        return LaurentPoly({k: c * v for k, v in self.coeffs.items()})

    def shift_exponents(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly({e + k: v for e, v in self.coeffs.items()})

    def __call__(self, t: Rat) -> Fraction:
        t = rat(t)
        if t <= 0 and self.valuation < 0:
            raise ValueError("negative exponents need t > 0")
        return sum((v * t ** k for k, v in self.coeffs.items()), Fraction(0))

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: k * v for k, v in self.coeffs.items() if k != 0})

    def abs_coeffs(self) -> "LaurentPoly":
        return LaurentPoly({k: abs(v) for k, v in self.coeffs.items()})

    def cleared(self) -> list:
        """Integer coefficient list of t^{-valuation} * p (a plain polynomial)."""
        if not self.coeffs:
            return []
        v = min(self.coeffs)
        dense = [Fraction(0)] * (max(self.coeffs) - v + 1)
        for k, c in self.coeffs.items():
            dense[k - v] = c
        return _primitive(dense)

    def slope_bound(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Exact bound for |p'| on [lo, hi] (0 < lo <= hi)."""
        m = Fraction(0)
        for k, c in self.coeffs.items():
            if k == 0:
                continue
            e = k - 1
            m += abs(k * c) * max(lo ** e, hi ** e)
        return m

    def __repr__(self):
        if not self.coeffs:
            return "LaurentPoly(0)"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            term = f"{c}" if k == 0 else (f"{c}*t^{k}" if c != 1 else f"t^{k}")
            parts.append(term)
        return "LaurentPoly(" + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# admissible sets  L = {e^beta : beta in K}
# ---------------------------------------------------------------------------

class AdmissibleSet:
    """Closed subset of (0, oo): intervals, isolated points, optional ray.

    Always contains 1 (the set is L = e^K with 0 in K).  Components are
    normalized: merged, disjoint, sorted; a ray absorbs everything beyond it.
    """

    __slots__ = ("intervals", "points", "ray_from")

    def __init__(self, intervals=(), points=(), ray_from=None):
        ray = rat(ray_from) if ray_from is not None else None
        ivs = sorted((rat(a), rat(b)) for a, b in intervals)
        pts = sorted(rat(p) for p in points)
        for a, b in ivs:
            if a <= 0 or a > b:
                raise ValueError(f"bad interval [{a}, {b}]")
        if any(p <= 0 for p in pts):
            raise ValueError("points must be positive")
        if ray is not None and ray <= 0:
            raise ValueError("ray must start at a positive point")
        # merge touching/overlapping intervals
        merged = []
        for a, b in ivs:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        if ray is not None:
            kept = []
            for a, b in merged:
                if b >= ray:
                    ray = min(ray, a)
                else:
                    kept.append((a, b))
            merged = kept
            pts = [p for p in pts if p < ray]
        pts = [p for p in pts if not any(a <= p <= b for a, b in merged)]
        # degenerate intervals become points
        real, extra = [], []
        for a, b in merged:
            (real if a < b else extra).append((a, b))
        pts = sorted(set(pts) | {a for a, _ in extra})
        self.intervals = tuple(real)
        self.points = tuple(pts)
        self.ray_from = ray
        if not self.contains(1):
            raise ValueError("admissible set must contain 1")

    def contains(self, t: Rat) -> bool:
        t = rat(t)
        if t <= 0:
            return False
        if self.ray_from is not None and t >= self.ray_from:
            return True
        if t in self.points:
            return True
        return any(a <= t <= b for a, b in self.intervals)

    @property
    def is_compact(self) -> bool:
        return self.ray_from is None

    @property
    def min_point(self) -> Fraction:
        cands = [a for a, _ in self.intervals] + list(self.points)
        if self.ray_from is not None:
            cands.append(self.ray_from)
        return min(cands)

    @property
    def max_point(self) -> Fraction:
        if not self.is_compact:
            raise ValueError("unbounded set has no maximum")
        return max([b for _, b in self.intervals] + list(self.points))

    def components(self):
        """Yield ('point', t), ('interval', a, b), ('ray', r) in ascending order."""
        items = [("point", p, p) for p in self.points]
        items += [("interval", a, b) for a, b in self.intervals]
        items.sort(key=lambda c: c[1])
        for kind, a, b in items:
            yield (kind, a) if kind == "point" else (kind, a, b)
        if self.ray_from is not None:
            yield ("ray", self.ray_from)

    def truncate(self, top: Rat) -> "AdmissibleSet":
        """Intersect with (0, top]; top must keep the set non-empty with 1."""
        top = rat(top)
        if top < 1:
            raise ValueError("truncation must keep the point 1")
        ivs = [(a, min(b, top)) for a, b in self.intervals if a <= top]
        pts = [p for p in self.points if p <= top]
        if self.ray_from is not None and self.ray_from <= top:
            ivs.append((self.ray_from, top))
        return AdmissibleSet(ivs, pts, None)

    def __eq__(self, other):
        return (isinstance(other, AdmissibleSet)
                and self.intervals == other.intervals
                and self.points == other.points
                and self.ray_from == other.ray_from)

    def __repr__(self):
        bits = [f"[{a}, {b}]" for a, b in self.intervals]
        bits += [f"{{{p}}}" for p in self.points]
        if self.ray_from is not None:
            bits.append(f"[{self.ray_from}, oo)")
        return "AdmissibleSet(" + " u ".join(sorted(bits, key=len)) + ")"


@dataclass(frozen=True)
class PositivityWitness:
    """Point of the constraint set where the polynomial fails to be positive."""

    point: Fraction
    value: Fraction


SetLike = Union[AdmissibleSet, Tuple[Rat, Rat]]


def _as_components(s: SetLike):
    if isinstance(s, AdmissibleSet):
        return list(s.components())
    lo, hi = rat(s[0]), rat(s[1])
    if lo <= 0 or lo > hi:
        raise ValueError(f"bad interval [{lo}, {hi}]")
    return [("point", lo)] if lo == hi else [("interval", lo, hi)]


def _first_point(comps) -> Fraction:
    kind = comps[0]
    return kind[1]


# ---------------------------------------------------------------------------
# certified positivity
# ---------------------------------------------------------------------------

def _bisect_sign_change(p: LaurentPoly, part: Sequence, a: Fraction, b: Fraction,
                        cap: int = 10000) -> Optional[PositivityWitness]:
    """Refine a bracket of a simple root of `part`, testing p <= 0 at midpoints."""
    sa = _poly_eval(part, a)
    for _ in range(cap):
        m = (a + b) / 2
        vm = p(m)
        if vm <= 0:
            return PositivityWitness(m, vm)
        sm = _poly_eval(part, m)
        if sm == 0:
            return PositivityWitness(m, p(m))
        if (sa > 0) != (sm > 0):
            b = m
        else:
            a, sa = m, sm
    return None


def _rational_tangency(p: LaurentPoly, part: Sequence, a: Fraction, b: Fraction,
                       rounds: int = 300) -> Optional[PositivityWitness]:
    """Hunt an exact rational root of `part` inside a sign-change bracket."""
    sa = _poly_eval(part, a)
    for _ in range(rounds):
        c = _simplest_in(a, b)
        vc = _poly_eval(part, c)
        if vc == 0:
            return PositivityWitness(c, p(c))
        pv = p(c)
        if pv <= 0:
            return PositivityWitness(c, pv)
        if (sa > 0) != (vc > 0):
            b = c
        else:
            a, sa = c, vc
    return None


def _isolate_and_witness(p: LaurentPoly, cleared: Sequence, lo: Fraction,
                         hi: Fraction) -> PositivityWitness:
    """Produce a witness given >= 1 root of `cleared` in (lo, hi), p > 0 at ends."""
    for odd in (True, False):
        part = _parity_part(cleared, odd)
        if len(part) <= 1:
            continue
        chain = _sturm_chain(part)
        stack = [(lo, hi)]
        while stack:
            a, b = stack.pop()
            va, vb = _poly_eval(part, a), _poly_eval(part, b)
            if va == 0:
                return PositivityWitness(a, p(a))
            if vb == 0:
                return PositivityWitness(b, p(b))
            n = _count_roots(chain, a, b)
            if n == 0:
                continue
            if n == 1:
                if (va > 0) != (vb > 0):
                    w = (_bisect_sign_change(p, part, a, b) if odd
                         else _rational_tangency(p, part, a, b))
                    if w is not None:
                        return w
                    raise WitnessExtractionError(
                        f"tangency of {p!r} in ({a}, {b}) has no rational witness")
                # single root without sign change cannot happen for squarefree parts
                raise WitnessExtractionError("inconsistent root isolation state")
            m = (a + b) / 2
            if _poly_eval(part, m) == 0:
                return PositivityWitness(m, p(m))
            stack.extend([(a, m), (m, b)])
    raise WitnessExtractionError("root count positive but no parity part had roots")


def _interval_witness(p: LaurentPoly, lo: Fraction, hi: Fraction) -> Optional[PositivityWitness]:
    v_lo = p(lo)
    if v_lo <= 0:
        return PositivityWitness(lo, v_lo)
    if hi == lo:
        return None
    v_hi = p(hi)
    if v_hi <= 0:
        return PositivityWitness(hi, v_hi)
    cleared = p.cleared()
    if len(cleared) <= 1:
        return None
    if _count_roots(_sturm_chain(cleared), lo, hi) == 0:
        return None
    return _isolate_and_witness(p, cleared, lo, hi)


def sturm_positive_on(p: LaurentPoly, s: SetLike) -> Optional[PositivityWitness]:
    """Certified strict positivity of p on the set.

    Returns None when p(t) > 0 for every t in the set (exact, via endpoint
    signs and Sturm root counts), otherwise a PositivityWitness with a
    rational point of the set where p <= 0.
    """
    comps = _as_components(s)
    if p.is_zero():
        return PositivityWitness(_first_point(comps), Fraction(0))
    for comp in comps:
        if comp[0] == "point":
            v = p(comp[1])
            if v <= 0:
                return PositivityWitness(comp[1], v)
        elif comp[0] == "interval":
            w = _interval_witness(p, comp[1], comp[2])
            if w is not None:
                return w
        else:  # ray
            w = positive_on_ray(p, comp[1])
            if w is not None:
                return w
    return None


def positive_on_ray(p: LaurentPoly, r: Rat) -> Optional[PositivityWitness]:
    """Certified strict positivity of p on [r, oo); None means positive."""
    r = rat(r)
    if r <= 0:
        raise ValueError("ray must start at a positive point")
    if p.is_zero():
        return PositivityWitness(r, Fraction(0))
    if p.leading_coeff < 0:
        t = max(r, _cauchy_bound(p.cleared()))
        v = p(t)
        if v <= 0:
            return PositivityWitness(t, v)
        raise AssertionError("negative leading sign past the root bound")
    hi = max(r, _cauchy_bound(p.cleared()))
    return _interval_witness(p, r, hi)


def verify_lower_bound(p: LaurentPoly, m: Rat, s: SetLike) -> bool:
    """Exact check that p(t) >= m for every t in the set.

    Unlike sturm_positive_on this allows touching the bound: the test is
    endpoint values plus absence of sign crossings (roots of odd multiplicity)
    of p - m inside each interval.
    """
    m = rat(m)
    e = p - LaurentPoly.constant(m)
    comps = _as_components(s)
    if e.is_zero():
        return True
    for comp in comps:
        if comp[0] == "point":
            if e(comp[1]) < 0:
                return False
        elif comp[0] == "interval":
            lo, hi = comp[1], comp[2]
            if e(lo) < 0 or e(hi) < 0:
                return False
            cleared = e.cleared()
            if len(cleared) <= 1:
                continue
            odd = _parity_part(cleared, odd=True)
            if len(odd) > 1 and _count_roots(_sturm_chain(odd), lo, hi) > 0:
                return False
        else:
            r = comp[1]
            if e.is_zero():
                continue
            if e.leading_coeff < 0:
                return False
            hi = max(r, _cauchy_bound(e.cleared()))
            if e(r) < 0 or e(hi) < 0:
                return False
            cleared = e.cleared()
            odd = _parity_part(cleared, odd=True)
            if len(odd) > 1 and _count_roots(_sturm_chain(odd), r, hi) > 0:
                return False
    return True


# ---------------------------------------------------------------------------
# certified minimum on a compact admissible set
# ---------------------------------------------------------------------------

def _radical(p: Sequence) -> list:
    """Squarefree radical (all distinct roots, simple)."""
    p = _primitive(p)
    if len(p) <= 1:
        return p
    g = _poly_gcd(p, _poly_deriv(p))
    return _poly_divexact(p, g) if len(g) > 1 else p


def _critical_brackets(p: LaurentPoly, a: Fraction, b: Fraction):
    """Brackets around the distinct interior critical points of p on [a, b].

    Yields exact critical points as ('point', t) and sign-change brackets of
    the squarefree radical of p' as ('bracket', lo, hi, rad).
    """
    dp = p.derivative()
    cleared = dp.cleared()
    if len(cleared) <= 1:
        return
    rad = _radical(cleared)
    # divide out roots sitting exactly at the endpoints (covered by p(a), p(b))
    for root in (a, b):
        while len(rad) > 1 and _poly_eval(rad, root) == 0:
            rad = _primitive(_poly_divexact(rad, [-root, Fraction(1)]))
    if len(rad) <= 1:
        return
    chain = _sturm_chain(rad)
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        n = _count_roots(chain, lo, hi)
        if n == 0:
            continue
        vlo, vhi = _poly_eval(rad, lo), _poly_eval(rad, hi)
        if n == 1 and (vlo > 0) != (vhi > 0):
            yield ("bracket", lo, hi, rad)
            continue
        m = (lo + hi) / 2
        while _poly_eval(rad, m) == 0:
            yield ("point", m)
            m = (lo + m) / 2
        stack.extend([(lo, m), (m, hi)])


def certified_min(p: LaurentPoly, s: SetLike, refine_cap: int = 4000) -> Fraction:
    """Certified rational lower bound m with p >= m on the compact set s.

    On each interval the minimum is bracketed at the endpoints and at the
    isolated critical points; each bracket is refined with exact slope bounds
    until its certified bound clears zero.  The bound is positive whenever p
    is strictly positive on s, and always valid.
    """
    comps = _as_components(s)
    if any(c[0] == "ray" for c in comps):
        raise ValueError("certified_min needs a compact set")
    if p.is_zero():
        return Fraction(0)

    positive = sturm_positive_on(p, s) is None
    vals = [p(c[1]) for c in comps if c[0] == "point"]
    for c in comps:
        if c[0] != "interval":
            continue
        a, b = c[1], c[2]
        vals += [p(a), p(b)]
        for item in _critical_brackets(p, a, b):
            if item[0] == "point":
                vals.append(p(item[1]))
                continue
            _, lo, hi, rad = item
            slo = _poly_eval(rad, lo)
            steps = 0
            while True:
                lb = min(p(lo), p(hi)) - p.slope_bound(lo, hi) * (hi - lo) / 2
                steps += 1
                if (positive and lb > 0) or (not positive and steps > 64):
                    vals.append(lb)
                    break
                if steps > refine_cap:
                    raise RuntimeError("certified_min bracket refinement stalled")
                m = (lo + hi) / 2
                sm = _poly_eval(rad, m)
                if sm == 0:
                    vals.append(p(m))
                    break
                if (slo > 0) != (sm > 0):
                    hi = m
                else:
                    lo, slo = m, sm
    out = min(vals)
    if positive and out <= 0:
        raise RuntimeError("certified_min positive case produced m <= 0")
    return out


def certified_sup_bound(p: LaurentPoly, s: SetLike) -> Fraction:
    """Cheap certified upper bound for |p| on a compact set (endpoints + slope)."""
    comps = _as_components(s)
    out = Fraction(0)
    for c in comps:
        if c[0] == "point":
            out = max(out, abs(p(c[1])))
        elif c[0] == "interval":
            a, b = c[1], c[2]
            out = max(out, max(abs(p(a)), abs(p(b))) + p.slope_bound(a, b) * (b - a))
        else:
            raise ValueError("compact set required")
    return out


# ---------------------------------------------------------------------------
# piecewise-linear targets and certified approximation
# ---------------------------------------------------------------------------

class PiecewiseLinear:
    """Rational piecewise-linear target on a compact set.

    `pieces` is a list of breakpoint lists [(t, y), ...] with ascending t,
    one per interval component; `points` maps isolated t to values.
    """

    def __init__(self, pieces=(), points=()):
        self.pieces = tuple(tuple((rat(t), rat(y)) for t, y in piece) for piece in pieces)
        self.points = tuple((rat(t), rat(y)) for t, y in points)
        for piece in self.pieces:
            if len(piece) < 2:
                raise ValueError("interval pieces need at least two breakpoints")
            ts = [t for t, _ in piece]
            if any(u >= v for u, v in zip(ts, ts[1:])):
                raise ValueError("breakpoints must be strictly ascending")

    def __call__(self, t: Rat) -> Fraction:
        t = rat(t)
        for pt, y in self.points:
            if pt == t:
                return y
        for piece in self.pieces:
            if piece[0][0] <= t <= piece[-1][0]:
                for (a, ya), (b, yb) in zip(piece, piece[1:]):
                    if a <= t <= b:
                        return ya + (yb - ya) * (t - a) / (b - a)
        raise ValueError(f"{t} outside the target's domain")

    def segments(self):
        for piece in self.pieces:
            yield from zip(piece, piece[1:])

    def domain_nodes(self):
        out = [t for piece in self.pieces for t, _ in piece]
        out += [t for t, _ in self.points]
        return sorted(set(out))

    def is_globally_linear(self):
        """(a, b) with target == a + b*t on its whole domain, else None."""
        pts = [(t, y) for piece in self.pieces for t, y in piece] + list(self.points)
        if len(pts) == 1:
            return pts[0][1], Fraction(0)
        (t0, y0), (t1, y1) = pts[0], pts[1]
        if t0 == t1:
            return None
        b = (y1 - y0) / (t1 - t0)
        a = y0 - b * t0
        if all(y == a + b * t for t, y in pts):
            return a, b
        return None


def _chebyshev_nodes(a: Fraction, b: Fraction, n: int) -> list:
    if n <= 1:
        return [(a + b) / 2]
    out = []
    for j in range(n):
        x = math.cos(math.pi * j / (n - 1))
        node = (a + b) / 2 + (b - a) / 2 * Fraction(x).limit_denominator(10 ** 6)
        out.append(min(max(node, a), b))
    return sorted(set(out))


def _fit_float(target: PiecewiseLinear, exps: Sequence[int], samples: Sequence[Fraction]):
    """Weighted Chebyshev-basis least squares, converted back to monomials.

    Fitting target * t^{-lo} as an ordinary polynomial in a Chebyshev basis
    keeps the normal equations well conditioned even for all-negative
    exponent windows; the weight t^{lo} restores the original error scale.
    The output is a heuristic candidate only; callers certify it exactly.
    """
    import numpy as np
    flipped = max(exps) <= 0  # work in tau = 1/t for all-negative windows
    if flipped:
        lo = min(-e for e in exps)
        deg = max(-e for e in exps) - lo
        ts = np.array([1.0 / float(t) for t in samples], dtype=float)
    else:
        lo = min(exps)
        deg = max(exps) - lo
        ts = np.array([float(t) for t in samples], dtype=float)
    r = np.array([float(target(t)) for t in samples], dtype=float) / ts ** lo
    with np.errstate(over="ignore", under="ignore"):
        w = ts ** lo
        w = np.clip(w / w.max(), 1e-12, None)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            cheb = np.polynomial.Chebyshev.fit(ts, r, deg, w=w)
            poly = cheb.convert(kind=np.polynomial.Polynomial)
            coef = list(poly.coef)
        except Exception:
            rows = np.array([[t ** j for j in range(deg + 1)] for t in ts])
            sol, *_ = np.linalg.lstsq(rows * w[:, None], r * w, rcond=None)
            coef = list(sol)
    coeffs = {}
    for j, c in enumerate(coef):
        if np.isfinite(c) and c != 0:
            e = -(lo + j) if flipped else lo + j
            coeffs[e] = Fraction(float(c)).limit_denominator(10 ** 12)
    return LaurentPoly(coeffs)


def _fit_newton(target: PiecewiseLinear, exps: Sequence[int], nodes: Sequence[Fraction]):
    """Exact interpolation of target / t^{min_exp} at the nodes (Newton form)."""
    lo = min(exps)
    n = len(exps)
    xs = list(nodes)[:n]
    ys = [target(x) / x ** lo for x in xs]
    coef = list(ys)
    for j in range(1, len(xs)):
        for i in range(len(xs) - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Horner expansion of the Newton form into monomials
    dense = [coef[-1]]
    for i in range(len(xs) - 2, -1, -1):
        new = [Fraction(0)] * (len(dense) + 1)
        for j, c in enumerate(dense):
            new[j + 1] += c
            new[j] += -xs[i] * c
        new[0] += coef[i]
        dense = new
    return LaurentPoly({lo + j: c for j, c in enumerate(dense)})


def _certify_fit(p: LaurentPoly, target: PiecewiseLinear, eps: Fraction) -> bool:
    epoly = LaurentPoly.constant(eps)
    for (a, ya), (b, yb) in target.segments():
        slope = (yb - ya) / (b - a)
        line = LaurentPoly({0: ya - slope * a, 1: slope})
        err = p - line
        if sturm_positive_on(epoly - err, (a, b)) is not None:
            return False
        if sturm_positive_on(epoly + err, (a, b)) is not None:
            return False
    for t, y in target.points:
        if abs(p(t) - y) > eps:
            return False
    return True


def _certified_error_bound(p: LaurentPoly, target: PiecewiseLinear) -> Fraction:
    out = Fraction(0)
    for (a, ya), (b, yb) in target.segments():
        slope = (yb - ya) / (b - a)
        line = LaurentPoly({0: ya - slope * a, 1: slope})
        out = max(out, certified_sup_bound(p - line, (a, b)))
    for t, y in target.points:
        out = max(out, abs(p(t) - y))
    return out


def approx_on(target: PiecewiseLinear, epsilon: Rat,
              degree_window: Tuple[int, int], max_rounds: int = 5) -> LaurentPoly:
    """Laurent polynomial with certified sup error <= epsilon against the target.

    Fits on the window's monomials (least squares over a sample grid, with an
    exact interpolation fallback) and certifies the bound by Sturm checks on
    every linear segment; the grid is refined up to a cap before giving up.
    """
    epsilon = rat(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lo, hi = int(degree_window[0]), int(degree_window[1])
    if lo > hi:
        raise ValueError("empty degree window")
    exps = list(range(lo, hi + 1))

    linear = target.is_globally_linear()
    if linear is not None:
        a, b = linear
        cand = {}
        if a != 0:
            cand[0] = a
        if b != 0:
            cand[1] = b
        if all(k in exps for k in cand):
            p = LaurentPoly(cand)
            if _certify_fit(p, target, epsilon):
                return p

    best = None
    oversample = 3
    for round_no in range(max_rounds):
        samples = []
        for piece in target.pieces:
            a, b = piece[0][0], piece[-1][0]
            samples += [t for t, _ in piece]
            samples += _chebyshev_nodes(a, b, oversample * len(exps))
        samples += [t for t, _ in target.points]
        samples = sorted(set(samples))
        if round_no == 2 and len(samples) >= len(exps):
            n = len(exps)
            idx = [i * (len(samples) - 1) // (n - 1) for i in range(n)] if n > 1 else [0]
            nodes = [samples[i] for i in sorted(set(idx))]
            p = _fit_newton(target, exps, nodes) if len(nodes) == n else _fit_float(
                target, exps, samples)
        else:
            p = _fit_float(target, exps, samples)
        if _certify_fit(p, target, epsilon):
            return p
        bound = _certified_error_bound(p, target)
        if best is None or bound < best:
            best = bound
        oversample *= 2
    raise ApproximationFailed(best)


# ---------------------------------------------------------------------------
# the g_{k,l} = t^k - t^l span of functions vanishing at 1
# ---------------------------------------------------------------------------

def vanish_at_one_basis(f: LaurentPoly) -> dict:
    """Write f with f(1) = 0 as sum of c_{k,l} (t^k - t^l), keys (k, l).

    Uses the exact identity f = sum a_k (t^k - t^0) when the coefficients sum
    to zero; reconstruction via basis_reconstruct is exact.
    """
    if sum(f.coeffs.values(), Fraction(0)) != 0:
        raise ValueError("f(1) must vanish exactly")
    return {(k, 0): v for k, v in f.coeffs.items() if k != 0}


def basis_reconstruct(coeffs: dict) -> LaurentPoly:
    out = LaurentPoly.zero()
    for (k, l), c in coeffs.items():
        out = out + LaurentPoly({k: c}) - LaurentPoly({l: c})
    return out
