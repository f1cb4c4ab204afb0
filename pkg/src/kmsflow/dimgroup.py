"""The shift group G = (+)_Z H with its compact and unbounded order cones.

An element g is a finitely supported map exponent -> AffineElement; its
evaluation Sigma(g)(x, t) = sum_m g_m(x) t^m is affine in x for fixed t, so
strict positivity over a face is decided at the face's vertices and every
order question reduces to certified positivity of per-vertex Laurent
polynomials on the admissible set.

Compact cone: Sigma(g) > 0 on (F x L) u (Delta x {1}).
Unbounded cone: additionally the leading coefficient (at the top exponent)
must be strictly positive on the whole simplex, and positivity along the ray
is certified through root bounds.

Reported margins are certified lower bounds: for the unbounded cone the
normalised function t^{-L} Sigma(g) can still dip below its limit past the
Cauchy root bound, so the certified range is extended to also cover every
critical point of the normalised tail before the monotone-tail argument is
applied.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .affine import AffineElement, Face, Rat, Simplex, rat
from .laurent import (AdmissibleSet, LaurentPoly, PositivityWitness,
                      _cauchy_bound, certified_min, sturm_positive_on)

COMPACT = "compact"
UNBOUNDED = "unbounded"

SEARCH_CAP = 2 ** 64  # doubling searches beyond this signal a bug


@dataclass(frozen=True)
class Scenario:
    """Ambient data: simplex, face, admissible set and cone mode."""

    simplex: Simplex
    face: Face
    L: AdmissibleSet
    mode: str

    def __post_init__(self):
        if self.mode not in (COMPACT, UNBOUNDED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.face.parent != self.simplex:
            raise ValueError("face does not belong to the scenario simplex")
        if (self.mode == UNBOUNDED) != (self.L.ray_from is not None):
            raise ValueError("unbounded mode iff the set has a ray")
        if not self.L.contains(1):
            raise ValueError("the admissible set must contain 1")

    @property
    def vertex_count(self) -> int:
        return self.simplex.vertex_count


class GroupElement:
    """Element of G: finitely supported map exponent -> AffineElement."""

    __slots__ = ("coeffs", "vertex_count")

    def __init__(self, vertex_count: int, coeffs=None):
        self.vertex_count = int(vertex_count)
        clean: Dict[int, AffineElement] = {}
        if coeffs:
            for k, a in (coeffs.items() if hasattr(coeffs, "items") else coeffs):
                if not isinstance(a, AffineElement):
                    a = AffineElement(a)
                if a.vertex_count != self.vertex_count:
                    raise ValueError("coefficient lives on the wrong simplex")
                if not a.is_zero():
                    clean[int(k)] = a
        self.coeffs = clean

    # constructors ----------------------------------------------------------
    @staticmethod
    def zero(vertex_count: int) -> "GroupElement":
        return GroupElement(vertex_count)

    @staticmethod
    def unit(vertex_count: int) -> "GroupElement":
        """[[u]]: the constant 1 at exponent 0 (the order unit)."""
        return GroupElement(vertex_count, {0: AffineElement.constant(1, vertex_count)})

    @staticmethod
    def single(h: AffineElement, k: int) -> "GroupElement":
        """h^{(k)}: h at exponent k."""
        return GroupElement(h.vertex_count, {k: h})

    @staticmethod
    def pair(h: AffineElement, k: int, l: int) -> "GroupElement":
        """[[h]]^{k,l}: h at exponent k, -h at exponent l."""
        if k == l:
            raise ValueError("pair element needs distinct exponents")
        return GroupElement(h.vertex_count, {k: h, l: -h})

    @staticmethod
    def from_vertex_polys(polys: Sequence[LaurentPoly]) -> "GroupElement":
        exps = set()
        for p in polys:
            exps |= set(p.coeffs)
        return GroupElement(len(polys), {
            m: AffineElement([p.coefficient(m) for p in polys]) for m in exps})

    # structure -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def support(self) -> list:
        return sorted(self.coeffs)

    def coefficient(self, k: int) -> AffineElement:
        return self.coeffs.get(k, AffineElement.zero(self.vertex_count))

    def vertex_poly(self, v: int) -> LaurentPoly:
        return LaurentPoly({m: a.values[v] for m, a in self.coeffs.items()})

    def vertex_polys(self) -> list:
        return [self.vertex_poly(v) for v in range(self.vertex_count)]

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "GroupElement"):
        if self.vertex_count != other.vertex_count:
            raise ValueError("elements live on different simplexes")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        out = dict(self.coeffs)
        for k, a in other.coeffs.items():
            out[k] = out[k] + a if k in out else a
        return GroupElement(self.vertex_count, out)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.vertex_count, {k: -a for k, a in self.coeffs.items()})

    def scale(self, c: Rat) -> "GroupElement":
        return GroupElement(self.vertex_count,
                            {k: a.scale(c) for k, a in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupElement)
                and self.vertex_count == other.vertex_count
                and self.coeffs == other.coeffs)

    def __repr__(self):
        items = ", ".join(f"{k}: {list(map(str, a.values))}"
                          for k, a in sorted(self.coeffs.items()))
        return f"GroupElement({{{items}}})"


def sigma_eval(g: GroupElement, v: int, t: Rat) -> Fraction:
    """Exact value of Sigma(g)(vertex v, t) = sum_m g_m(v) t^m; needs t > 0."""
    t = rat(t)
    if t <= 0:
        raise ValueError("sigma is defined for t > 0")
    return g.vertex_poly(v)(t)


def degree_and_leading(g: GroupElement):
    """(top exponent, leading AffineElement); (-inf, None) for zero."""
    if g.is_zero():
        return float("-inf"), None
    top = max(g.coeffs)
    return top, g.coeffs[top]


def shift(g: GroupElement, k: int) -> GroupElement:
    """The automorphism rho^k: (shift(g, k))_n = g_{n+k}."""
    return GroupElement(g.vertex_count, {m - k: a for m, a in g.coeffs.items()})


# ---------------------------------------------------------------------------
# order decision
# ---------------------------------------------------------------------------

ZERO = "zero"
POSITIVE = "positive"
NOT_POSITIVE = "not_positive"
SET_VIOLATION = "set_violation"
LEADING_COEFF_VIOLATION = "leading_coeff_violation"


@dataclass(frozen=True)
class OrderVerdict:
    kind: str
    margin: Optional[Fraction] = None
    certificates: tuple = ()
    vertex: Optional[int] = None
    witness: Optional[PositivityWitness] = None
    reason: Optional[str] = None
    leading_value: Optional[Fraction] = None

    @property
    def is_positive(self) -> bool:
        return self.kind == POSITIVE

    @property
    def is_zero(self) -> bool:
        return self.kind == ZERO

    @property
    def is_nonnegative(self) -> bool:
        return self.kind in (ZERO, POSITIVE)


def _tail_split(p: LaurentPoly, ray_from: Fraction):
    """(T, m) with t^{-deg} p >= m > lead/2 on [T, oo), by coefficient decay.

    Every non-leading term of t^{-deg} p has a negative exponent, so the tail
    sum is dominated by its value at T; T doubles until that value is at most
    half the (positive) leading coefficient.
    """
    top = p.degree
    lead = p.leading_coeff
    t_cut = max(ray_from, Fraction(1))

    def tail(t):
        return sum(abs(c) * t ** (k - top)
                   for k, c in p.coeffs.items() if k != top)

    while tail(t_cut) > lead / 2:
        t_cut *= 2
    return t_cut, lead - tail(t_cut)


def order_test(g: GroupElement, sc: Scenario) -> OrderVerdict:
    """Decide membership of g in the scenario's positivity cone, with margins.

    Positive verdicts carry a certified margin: a rational lower bound for
    Sigma(g) (compact mode) or t^{-L} Sigma(g) (unbounded mode) over the full
    constraint set, together with the per-check certificates.
    """
    if g.vertex_count != sc.vertex_count:
        raise ValueError("element and scenario have different simplexes")
    if g.is_zero():
        return OrderVerdict(ZERO)

    certs = []
    # (Delta x {1}): coefficient sums per vertex, exact
    sums = [sum((a.values[w] for a in g.coeffs.values()), Fraction(0))
            for w in range(g.vertex_count)]
    for w, sval in enumerate(sums):
        if sval <= 0:
            return OrderVerdict(NOT_POSITIVE, vertex=w,
                                witness=PositivityWitness(Fraction(1), sval),
                                reason=SET_VIOLATION)
        certs.append({"type": "vertex_sum", "vertex": w, "value": sval})

    top, leading = degree_and_leading(g)
    if sc.mode == UNBOUNDED:
        for w in range(g.vertex_count):
            lv = leading.values[w]
            if lv <= 0:
                witness = None
                if w in sc.face.vertices and lv < 0:
                    p = g.vertex_poly(w)
                    t_star = max(sc.L.ray_from, _cauchy_bound(p.cleared()))
                    witness = PositivityWitness(t_star, p(t_star))
                return OrderVerdict(NOT_POSITIVE, vertex=w, witness=witness,
                                    reason=LEADING_COEFF_VIOLATION, leading_value=lv)
            certs.append({"type": "leading", "vertex": w, "value": lv})

    # (F x L): certified per-face-vertex strict positivity
    for v in sorted(sc.face.vertices):
        p = g.vertex_poly(v)
        w = sturm_positive_on(p, sc.L)
        if w is not None:
            return OrderVerdict(NOT_POSITIVE, vertex=v, witness=w,
                                reason=SET_VIOLATION)

    # margin
    margins = []
    if sc.mode == COMPACT:
        margins.extend(sums)
        for v in sorted(sc.face.vertices):
            p = g.vertex_poly(v)
            m = certified_min(p, sc.L)
            certs.append({"type": "face_curve", "vertex": v, "bound": m,
                          "normalized": False, "set": repr(sc.L)})
            margins.append(m)
    else:
        margins.extend(sums)
        margins.extend(leading.values)
        for v in sorted(sc.face.vertices):
            p = g.vertex_poly(v)
            q = p.shift_exponents(-top)
            t_top, tail_margin = _tail_split(p, sc.L.ray_from)
            trunc = sc.L.truncate(t_top)
            m = min(certified_min(q, trunc), tail_margin)
            certs.append({"type": "face_curve", "vertex": v, "bound": m,
                          "normalized": True, "truncated_at": t_top,
                          "set": repr(trunc)})
            margins.append(m)
    return OrderVerdict(POSITIVE, margin=min(margins), certificates=tuple(certs))


def _minimal_by_doubling(check, cap: int = SEARCH_CAP) -> int:
    """Smallest positive integer passing `check`, by doubling then bisection."""
    m = 1
    while not check(m):
        m *= 2
        if m > cap:
            raise RuntimeError("doubling search exceeded cap; this is a bug sentinel")
    lo, hi = m // 2, m  # check(lo) failed (or lo = 0), check(hi) passed
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if check(mid):
            hi = mid
        else:
            lo = mid
    return hi


def large_denominators(g: GroupElement, n: int, sc: Scenario):
    """(h, l, m) with n * h^{(l)} <= g <= m * h^{(l)}, both sides certified.

    h is a constant function sized from the certified margin of g so that the
    lower comparison holds with slack; m is the least multiple (found by a
    doubling-then-bisection search) whose difference passes order_test.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    vd = order_test(g, sc)
    if not vd.is_positive:
        raise ValueError("large_denominators needs an order-positive element")
    eps = vd.margin
    l = max(g.coeffs)
    if sc.mode == COMPACT:
        lo_t, hi_t = sc.L.min_point, sc.L.max_point
        t_max = max(lo_t ** l, hi_t ** l)
        h_val = eps / (2 * n * max(Fraction(1), t_max))
    else:
        h_val = eps / (2 * n)
    while True:
        h = AffineElement.constant(h_val, g.vertex_count)
        lower = order_test(g - GroupElement.single(h, l).scale(n), sc)
        if lower.is_positive:
            break
        h_val /= 2  # unreachable for certified margins; kept as a safety valve

    step = GroupElement.single(h, l)
    m = _minimal_by_doubling(
        lambda k: order_test(step.scale(k) - g, sc).is_positive)
    return h, l, m


def ideal_absorption(g: GroupElement, h: AffineElement, sc: Scenario):
    """(i', N) with h^{(i')} <= N*g strictly, certified by order_test.

    Realizes the rho-invariant ideal argument: any order-positive g absorbs
    every positive h placed at the top exponent of Sigma(g).
    """
    if not all(v > 0 for v in h.values):
        raise ValueError("h must be strictly positive on the simplex")
    vd = order_test(g, sc)
    if not vd.is_positive:
        raise ValueError("ideal_absorption needs an order-positive element")
    i_prime = max(g.coeffs)
    target = GroupElement.single(h, i_prime)
    n_found = _minimal_by_doubling(
        lambda k: order_test(g.scale(k) - target, sc).is_positive)
    return i_prime, n_found


# ---------------------------------------------------------------------------
# brute-force grid oracle (confirms NotPositive only; Sturm owns Positive)
# ---------------------------------------------------------------------------

def _barycentric_grid(k: int, target: int) -> list:
    """About `target` rational probability vectors over k coordinates."""
    if k == 1:
        return [(Fraction(1),)]
    m = 1
    while True:
        count = 1
        for i in range(1, k):
            count = count * (m + i) // i
        if count >= target or m > 400:
            break
        m += 1
    out = []
    for comp in itertools.combinations_with_replacement(range(k), m):
        weights = [Fraction(0)] * k
        for c in comp:
            weights[c] += Fraction(1, m)
        out.append(tuple(weights))
        if len(out) >= 4 * target:
            break
    return out


def grid_scan(g: GroupElement, sc: Scenario, n: int = 200):
    """Exact grid search for a violation of strict positivity on the set.

    Scans an n x n rational grid of (F x compact part of L) u (Delta x {1}).
    Floating point only screens candidates; any reported violation is
    confirmed by exact evaluation, so a non-None result refutes positivity.
    Returns (weights, t, exact_value <= 0) or None.
    """
    import numpy as np

    t_grid = []
    for comp in sc.L.components():
        if comp[0] == "point":
            t_grid.append(comp[1])
        elif comp[0] == "interval":
            a, b = comp[1], comp[2]
            t_grid += [a + (b - a) * Fraction(i, n - 1) for i in range(n)]
    t_grid = sorted(set(t_grid))

    polys = g.vertex_polys()
    vals = np.array([[float(p(t)) for t in t_grid] for p in polys])
    mags = np.array([[float(p.abs_coeffs()(t)) for t in t_grid] for p in polys])

    def screen(weight_rows, rows):
        w = np.array([[float(x) for x in wr] for wr in weight_rows])
        approx = w @ vals[rows]
        bound = 64 * 2.2e-16 * (w @ mags[rows]) + 1e-300
        return np.argwhere(approx <= bound)

    face_rows = sorted(sc.face.vertices)
    face_grid = _barycentric_grid(len(face_rows), n)
    for i, j in screen(face_grid, face_rows):
        weights = face_grid[i]
        t = t_grid[j]
        exact = sum((wv * polys[v](t) for wv, v in zip(weights, face_rows)),
                    Fraction(0))
        if exact <= 0:
            full = [Fraction(0)] * g.vertex_count
            for wv, v in zip(weights, face_rows):
                full[v] = wv
            return tuple(full), t, exact

    delta_grid = _barycentric_grid(g.vertex_count, n)
    sums = [sum((a.values[w] for a in g.coeffs.values()), Fraction(0))
            for w in range(g.vertex_count)]
    for weights in delta_grid:
        exact = sum((wv * s for wv, s in zip(weights, sums)), Fraction(0))
        if exact <= 0:
            return tuple(weights), Fraction(1), exact
    return None
