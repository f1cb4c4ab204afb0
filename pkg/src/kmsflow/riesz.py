"""Constructive Riesz interpolation in (G, G+) for both cones.

Given c^i <= d^j (i, j in {1, 2}) the engines produce g with c^i <= g <= d^j,
all four relations certified by order_test; acceptance is always by this
post-verification, never by construction alone.

Compact cone: certified gap -> node targets midway between the envelopes ->
piecewise-linear partition-of-unity target per vertex -> Laurent fit ->
verify; nodes are refined adaptively at the certified failure points.

Unbounded cone: the top exponents are threaded level by level in the
lexicographic order (midpoint at the first level where a strict gap opens,
forced values at levels where a lower ties an upper), which yields an element
g dominating in the ray order beyond a computed bound R with margin eps.  A
correction h with all exponents below the separation structure is then built
by the compact machinery on the truncated set and faded out past R, and the
splice g + h is verified.  The correction sits strictly below every
difference's leading exponent, so the tail data of g is preserved exactly.

An independent exact-LP engine (per-vertex simplex over sampled constraints,
slack maximised, post-certified) serves as a cross-check oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .affine import AffineElement, Rat, rat
from .dimgroup import (COMPACT, UNBOUNDED, GroupElement, OrderVerdict,
                       Scenario, degree_and_leading, order_test)
from .laurent import (AdmissibleSet, ApproximationFailed, LaurentPoly,
                      PiecewiseLinear, approx_on, positive_on_ray,
                      _fit_float, _fit_newton)
from .lp import OPTIMAL, solve_lp


class PreconditionViolated(Exception):
    """Some upper minus lower failed the order test."""

    def __init__(self, pairs):
        self.pairs = pairs
        super().__init__(f"interpolation precondition fails for pairs {pairs}")


class RetriesExhausted(Exception):
    """The constructive engine ran out of retries; a bug sentinel."""

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super().__init__(f"interpolation retries exhausted: {diagnostics}")


class Infeasible(Exception):
    """LP engine: no interpolant in the given exponent window."""

    def __init__(self, window):
        self.window = window
        super().__init__(f"no interpolant with support in {window}")


@dataclass(frozen=True)
class InterpolationProblem:
    lowers: tuple
    uppers: tuple
    scenario: Scenario

    def __post_init__(self):
        if len(self.lowers) != 2 or len(self.uppers) != 2:
            raise ValueError("two lowers and two uppers required")

    def pair_verdicts(self) -> Dict[Tuple[int, int], OrderVerdict]:
        out = {}
        for i, c in enumerate(self.lowers):
            for j, d in enumerate(self.uppers):
                out[(i, j)] = order_test(d - c, self.scenario)
        return out

    def violations(self, verdicts=None) -> list:
        verdicts = verdicts or self.pair_verdicts()
        return [pair for pair, v in verdicts.items() if not v.is_nonnegative]


@dataclass
class InterpolationTrace:
    """Diagnostics consumed by the test suite; see the JSON report schema."""

    engine: str
    delta: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None
    kappa: Optional[Fraction] = None
    ray_cutoff: Optional[Fraction] = None  # R
    support_radius: Optional[int] = None   # J
    correction_depth: Optional[int] = None  # J'
    retries: int = 0
    internal_g: Optional[GroupElement] = None
    levels: tuple = ()

    def as_dict(self) -> dict:
        from .serial import group_element_to_json
        out = {
            "engine": self.engine,
            "delta": None if self.delta is None else str(self.delta),
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "kappa": None if self.kappa is None else str(self.kappa),
            "R": None if self.ray_cutoff is None else str(self.ray_cutoff),
            "J": self.support_radius,
            "J_prime": self.correction_depth,
            "retries": self.retries,
        }
        if self.internal_g is not None:
            out["internal_g"] = group_element_to_json(self.internal_g)
        return out


# ---------------------------------------------------------------------------
# lexicographic interpolation on F-restricted sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LexSequence:
    """Finitely supported sequence of F-restricted affine elements.

    Index 0 is the most significant entry; comparison is lexicographic with
    the strict order of Aff(F) at each level.
    """

    vertex_count: int
    entries: tuple

    def __init__(self, vertex_count: int, entries: Sequence[AffineElement] = ()):
        ents = []
        for a in entries:
            if not isinstance(a, AffineElement):
                a = AffineElement(a)
            if a.vertex_count != vertex_count:
                raise ValueError("entry lives on the wrong face")
            ents.append(a)
        while ents and ents[-1].is_zero():
            ents.pop()
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "entries", tuple(ents))

    def entry(self, k: int) -> AffineElement:
        if 0 <= k < len(self.entries):
            return self.entries[k]
        return AffineElement.zero(self.vertex_count)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class LexEqual:
    """Signals that the interpolant would collide with the named input."""

    side: str
    index: int


def _level_cmp(a: AffineElement, b: AffineElement) -> str:
    """'eq', 'lt' (a < b strictly everywhere), 'gt', or 'mixed'."""
    if a.values == b.values:
        return "eq"
    if all(x < y for x, y in zip(a.values, b.values)):
        return "lt"
    if all(x > y for x, y in zip(a.values, b.values)):
        return "gt"
    return "mixed"


def _lex_leq(lo: LexSequence, hi: LexSequence) -> bool:
    for k in range(max(len(lo), len(hi))):
        c = _level_cmp(lo.entry(k), hi.entry(k))
        if c == "eq":
            continue
        return c == "lt"
    return True  # equal sequences


def lex_interpolate(lowers: Sequence[LexSequence], uppers: Sequence[LexSequence]):
    """Strict lexicographic interpolant between two lower and two upper
    sequences, or LexEqual when the interpolant would collide with an input.

    Levels are processed from the most significant index: a level where some
    remaining lower ties a remaining upper forces that common value; the
    first level with no cross ties admits a vertex-wise midpoint that beats
    every remaining constraint strictly, and all lower entries are free.
    """
    lowers, uppers = list(lowers), list(uppers)
    vc = lowers[0].vertex_count
    for lo in lowers:
        for hi in uppers:
            if not _lex_leq(lo, hi):
                raise ValueError("inputs are not lex-ordered")
    tl, tu = {0, 1}, {0, 1}
    depth = max([len(s) for s in lowers + uppers] + [0])
    out = []
    for k in range(depth + 1):
        lo_k = {i: lowers[i].entry(k) for i in tl}
        up_k = {j: uppers[j].entry(k) for j in tu}
        tie = next(((i, j) for i in sorted(tl) for j in sorted(tu)
                    if lo_k[i].values == up_k[j].values), None)
        if tie is None:
            if tl and tu:
                z = AffineElement([
                    (max(lo_k[i].values[w] for i in tl)
                     + min(up_k[j].values[w] for j in tu)) / 2
                    for w in range(vc)])
            elif tl:
                z = AffineElement([max(lo_k[i].values[w] for i in tl) + 1
                                   for w in range(vc)])
            else:
                z = AffineElement([min(up_k[j].values[w] for j in tu) - 1
                                   for w in range(vc)])
            return LexSequence(vc, out + [z])
        z = up_k[tie[1]]
        out.append(z)
        tl = {i for i in tl if lo_k[i].values == z.values}
        tu = {j for j in tu if up_k[j].values == z.values}
    i, j = next((i, j) for i in sorted(tl) for j in sorted(tu))
    return LexEqual(side=f"lower:{i}=upper:{j}", index=i)


# ---------------------------------------------------------------------------
# shared threading machinery
# ---------------------------------------------------------------------------

def _snap(t: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    """Round a witness point to a moderate denominator inside [lo, hi]."""
    s = Fraction(t).limit_denominator(1 << 20)
    return min(max(s, lo), hi)


def _refined_nodes(nodes, failures, clip) -> set:
    """Witness points plus midpoints of the segments around each witness."""
    out = set()
    ordered = sorted(nodes)
    for v in failures:
        if v.witness is None:
            continue
        t = _snap(v.witness.point, clip[0], clip[1])
        out.add(t)
        for a, b in zip(ordered, ordered[1:]):
            if a <= t <= b:
                out |= {(a + b) / 2, (a + t) / 2, (t + b) / 2}
                break
    return out


def _pick_inside(lo: Fraction, hi: Fraction, clamp_zero: bool) -> Fraction:
    gap = hi - lo
    if clamp_zero and lo + gap / 4 <= 0 <= hi - gap / 4:
        return Fraction(0)
    return (lo + hi) / 2


def _build_targets(vertex_count: int, face_rows: Sequence[int],
                   curve_lo: Callable, curve_hi: Callable,
                   sum_lo: Callable, sum_hi: Callable,
                   cset: AdmissibleSet, nodes: Sequence[Fraction],
                   clamp_zero: bool, fade: Optional[Tuple[Fraction, Fraction]]):
    """Per-vertex PiecewiseLinear targets threading the constraint tube."""
    nodes = sorted(set(list(nodes) + [Fraction(1)]))
    face_vals: Dict[Fraction, Dict[int, Fraction]] = {}
    for t in nodes:
        vals = {}
        for v in face_rows:
            if t == 1:
                vals[v] = _pick_inside(sum_lo(v), sum_hi(v), clamp_zero)
            else:
                vals[v] = _pick_inside(curve_lo(v, t), curve_hi(v, t), clamp_zero)
        face_vals[t] = vals

    targets = []
    for w in range(vertex_count):
        def value_at(t, w=w):
            if w in face_rows:
                return face_vals[t][w]
            if t == 1:
                return _pick_inside(sum_lo(w), sum_hi(w), clamp_zero)
            return max(face_vals[t].values())  # plain face extension
        pieces, points = [], []
        for comp in cset.components():
            if comp[0] == "point":
                points.append((comp[1], value_at(comp[1])))
            elif comp[0] == "interval":
                a, b = comp[1], comp[2]
                ts = sorted({a, b} | {t for t in nodes if a <= t <= b})
                pieces.append([(t, value_at(t)) for t in ts])
            else:
                raise ValueError("threading needs a compact set")
        if fade is not None:
            r, r1 = fade
            pieces.append([(r, value_at(r)), (r1, Fraction(0)), (r1 + 2, Fraction(0))])
        targets.append(PiecewiseLinear(pieces, points))
    return targets


def _fit_targets(targets: Sequence[PiecewiseLinear], window: Tuple[int, int],
                 fit_eps: Optional[Fraction], round_no: int) -> GroupElement:
    """Fit each vertex target on the window; certification is the caller's
    final order_test, so fit failures here only feed escalation."""
    polys = []
    exps = list(range(window[0], window[1] + 1))
    for target in targets:
        p = None
        if fit_eps is not None:
            try:
                p = approx_on(target, fit_eps, window, max_rounds=2)
            except ApproximationFailed:
                p = None
        if p is None:
            samples = sorted(set(target.domain_nodes()))
            from .laurent import _chebyshev_nodes
            for piece in target.pieces:
                samples += _chebyshev_nodes(piece[0][0], piece[-1][0],
                                            3 * len(exps) + 4 * round_no)
            samples = sorted(set(samples))
            p = _fit_float(target, exps, samples)
        polys.append(p)
    return GroupElement.from_vertex_polys(polys)


# ---------------------------------------------------------------------------
# compact engine
# ---------------------------------------------------------------------------

def _support_window(elements: Sequence[GroupElement], pad: int = 1) -> Tuple[int, int]:
    exps = [k for g in elements for k in g.support] + [0]
    return min(exps) - pad, max(exps) + pad


def _equal_pair(problem: InterpolationProblem) -> Optional[GroupElement]:
    for c in problem.lowers:
        for d in problem.uppers:
            if c == d:
                return c
    return None


def interpolate_compact(problem: InterpolationProblem, max_retries: int = 25,
                        with_trace: bool = False):
    """Certified interpolant for the compact cone.

    Follows the gap/partition-of-unity construction: delta is half the
    certified minimum gap of the four differences, node values are envelope
    midpoints (extended off the face), each vertex target is fitted by a
    Laurent polynomial, and the result must pass order_test for all four
    relations.  Failed verifications refine the nodes at the witness points.
    """
    sc = problem.scenario
    if sc.mode != COMPACT:
        raise ValueError("compact engine needs a compact scenario")
    verdicts = problem.pair_verdicts()
    bad = problem.violations(verdicts)
    if bad:
        raise PreconditionViolated(bad)
    trace = InterpolationTrace(engine="compact")

    equal = _equal_pair(problem)
    if equal is not None:
        return (equal, trace) if with_trace else equal

    delta = min(v.margin for v in verdicts.values()) / 2
    trace.delta = delta
    face_rows = sorted(sc.face.vertices)
    lo_polys = [[c.vertex_poly(v) for v in range(sc.vertex_count)]
                for c in problem.lowers]
    hi_polys = [[d.vertex_poly(v) for v in range(sc.vertex_count)]
                for d in problem.uppers]
    sums_lo = [max(sum(p.coeffs.values()) if p.coeffs else Fraction(0)
                   for p in (cp[w] for cp in lo_polys))
               for w in range(sc.vertex_count)]
    sums_hi = [min(sum(p.coeffs.values()) if p.coeffs else Fraction(0)
                   for p in (dp[w] for dp in hi_polys))
               for w in range(sc.vertex_count)]

    def curve_lo(v, t):
        return max(cp[v](t) for cp in lo_polys)

    def curve_hi(v, t):
        return min(dp[v](t) for dp in hi_polys)

    window = _support_window(list(problem.lowers) + list(problem.uppers))
    nodes = set()
    for comp in sc.L.components():
        if comp[0] == "point":
            nodes.add(comp[1])
        else:
            a, b = comp[1], comp[2]
            nodes |= {a, b, (a + b) / 2, (3 * a + b) / 4, (a + 3 * b) / 4}
    nodes.add(Fraction(1))
    fit_eps = delta / 8

    for round_no in range(max_retries):
        trace.retries = round_no
        targets = _build_targets(sc.vertex_count, face_rows, curve_lo, curve_hi,
                                 lambda w: sums_lo[w], lambda w: sums_hi[w],
                                 sc.L, sorted(nodes), clamp_zero=False, fade=None)
        g = _fit_targets(targets, window, fit_eps, round_no)
        failures = []
        for c in problem.lowers:
            v = order_test(g - c, sc)
            if not v.is_nonnegative:
                failures.append(v)
        for d in problem.uppers:
            v = order_test(d - g, sc)
            if not v.is_nonnegative:
                failures.append(v)
        if not failures:
            trace.kappa = fit_eps
            return (g, trace) if with_trace else g
        nodes |= _refined_nodes(nodes, failures,
                                (sc.L.min_point, sc.L.max_point))
        fit_eps /= 2
        if round_no % 2 == 1:
            window = (window[0] - 1, window[1] + 1)
    raise RetriesExhausted({"engine": "compact", "delta": str(delta),
                            "nodes": len(nodes), "window": window})


# ---------------------------------------------------------------------------
# unbounded engine
# ---------------------------------------------------------------------------

def _thread_top_structure(problem: InterpolationProblem):
    """Level-by-level threading of the top exponents (the lex construction).

    Returns (g, None) on strict separation, or (None, (i, j)) when a lower
    ties an upper through every level, in which case the caller pads the tied
    lower with a small positive constant at a fresh low exponent.
    """
    sc = problem.scenario
    vc = sc.vertex_count
    face = sorted(sc.face.vertices)
    lowers, uppers = problem.lowers, problem.uppers
    sup = [k for g in list(lowers) + list(uppers) for k in g.support]
    n_rad = 1 + max((abs(k) for k in sup), default=0)
    tl, tu = {0, 1}, {0, 1}
    out: Dict[int, AffineElement] = {}
    for e in range(n_rad - 1, -n_rad - 1, -1):
        lo_e = {i: lowers[i].coefficient(e) for i in tl}
        up_e = {j: uppers[j].coefficient(e) for j in tu}
        tie = next(((i, j) for i in sorted(tl) for j in sorted(tu)
                    if all(lo_e[i].values[w] == up_e[j].values[w] for w in face)),
                   None)
        if tie is None:
            if tl and tu:
                z = AffineElement([
                    (max(lo_e[i].values[w] for i in tl)
                     + min(up_e[j].values[w] for j in tu)) / 2
                    for w in range(vc)])
            elif tl:
                z = AffineElement([max(lo_e[i].values[w] for i in tl) + 1
                                   for w in range(vc)])
            else:
                z = AffineElement([min(up_e[j].values[w] for j in tu) - 1
                                   for w in range(vc)])
            if not z.is_zero():
                out[e] = z
            return GroupElement(vc, out), None
        z = up_e[tie[1]]
        if not z.is_zero():
            out[e] = z
        tl = {i for i in tl if all(lo_e[i].values[w] == z.values[w] for w in face)}
        tu = {j for j in tu if all(up_e[j].values[w] == z.values[w] for w in face)}
    pair = next((i, j) for i in sorted(tl) for j in sorted(tu))
    return None, pair


def _ray_bounds(diffs: Sequence[GroupElement], face_rows: Sequence[int]):
    """(R, eps) with t^{-L} * diff >= eps on F x [R, oo) for every difference,
    certified through root bounds and tightened by halving."""
    eps = None
    r_bound = Fraction(1)
    per_diff = []
    for d in diffs:
        top, lead = degree_and_leading(d)
        for v in face_rows:
            lv = lead.values[v]
            if lv <= 0:
                raise RetriesExhausted({"stage": "ray_bounds",
                                        "reason": "non-positive leading value"})
            tail = sum(abs(a.values[v]) for k, a in d.coeffs.items() if k < top)
            r_v = max(Fraction(1), 2 * tail / lv)
            r_bound = max(r_bound, r_v)
            eps = lv / 2 if eps is None else min(eps, lv / 2)
        per_diff.append((d, top))
    # tighten R by halving while the certified ray bound still holds
    while r_bound > 1:
        cand = max(Fraction(1), r_bound / 2)
        ok = True
        for d, top in per_diff:
            for v in face_rows:
                q = d.vertex_poly(v) - LaurentPoly.monomial(eps, top)
                if positive_on_ray(q, cand) is not None:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            break
        r_bound = cand
    return r_bound, eps


def interpolate_unbounded(problem: InterpolationProblem, max_retries: int = 25,
                          with_trace: bool = False):
    """Certified interpolant for the unbounded cone.

    Pipeline: (1) thread the top exponents lexicographically into g whose
    four differences dominate on the ray beyond a certified R with margin
    eps; (2) on the set truncated at R, build a correction h with all
    exponents below every difference's leading exponent, threading the
    shifted tube and fading to zero past the cutoff; (3) verify g + h with
    order_test, shrinking the correction budget and refining nodes on retry.
    The splice leaves the tail data of g untouched, so L(Sigma(g+h) -
    Sigma(u)) equals L(Sigma(g) - Sigma(u)) for every input u.
    """
    sc = problem.scenario
    if sc.mode != UNBOUNDED:
        raise ValueError("unbounded engine needs an unbounded scenario")
    verdicts = problem.pair_verdicts()
    bad = problem.violations(verdicts)
    if bad:
        raise PreconditionViolated(bad)
    trace = InterpolationTrace(engine="unbounded")

    equal = _equal_pair(problem)
    if equal is not None:
        return (equal, trace) if with_trace else equal

    face_rows = sorted(sc.face.vertices)
    g, collision = _thread_top_structure(problem)
    if g is None:
        i0, _ = collision
        base = problem.lowers[i0]
        sup = [k for el in list(problem.lowers) + list(problem.uppers)
               for k in el.support]
        e_pad = min(sup + [0]) - 1
        t_min = sc.L.min_point
        pad = None
        for j, d in enumerate(problem.uppers):
            vd = verdicts[(i0, j)]
            l_j = max((d - base).coeffs)
            cand = vd.margin * t_min ** (l_j - e_pad) / 4
            pad = cand if pad is None else min(pad, cand)
        g = base + GroupElement.single(
            AffineElement.constant(pad, sc.vertex_count), e_pad)

    def all_diffs(candidate):
        return ([candidate - c for c in problem.lowers]
                + [d - candidate for d in problem.uppers])

    diffs = all_diffs(g)
    r_cut, eps = _ray_bounds(diffs, face_rows)
    trace.ray_cutoff, trace.epsilon = r_cut, eps
    trace.internal_g = g
    sup_all = [k for el in list(problem.lowers) + list(problem.uppers) + [g]
               for k in el.support]
    j_rad = max((abs(k) for k in sup_all), default=0)
    l_min = min(max(d.coeffs) for d in diffs)
    depth = 1 + max(j_rad, -min(l_min, 0))
    trace.support_radius = j_rad
    trace.correction_depth = depth
    trace.delta = min(v.margin for v in verdicts.values()) / 2

    # quick path: g alone may already interpolate
    if all(order_test(d, sc).is_nonnegative for d in diffs):
        trace.kappa = Fraction(0)
        return (g, trace) if with_trace else g

    t_cut = max(r_cut, Fraction(1))
    trunc = sc.L.truncate(t_cut)
    sums_lo = [max(sum(c.coefficient(k).values[w] for k in c.support)
                   - sum(g.coefficient(k).values[w] for k in g.support)
                   for c in problem.lowers) for w in range(sc.vertex_count)]
    sums_hi = [min(sum(d.coefficient(k).values[w] for k in d.support)
                   - sum(g.coefficient(k).values[w] for k in g.support)
                   for d in problem.uppers) for w in range(sc.vertex_count)]
    g_polys = g.vertex_polys()
    lo_polys = [[c.vertex_poly(v) for v in range(sc.vertex_count)]
                for c in problem.lowers]
    hi_polys = [[d.vertex_poly(v) for v in range(sc.vertex_count)]
                for d in problem.uppers]

    def curve_lo(v, t):
        return max(cp[v](t) for cp in lo_polys) - g_polys[v](t)

    def curve_hi(v, t):
        return min(dp[v](t) for dp in hi_polys) - g_polys[v](t)

    width = depth + 9
    nodes = set()
    for comp in trunc.components():
        if comp[0] == "point":
            nodes.add(comp[1])
        else:
            a, b = comp[1], comp[2]
            nodes |= {a, b, (a + b) / 2}
    nodes |= {Fraction(1), t_cut}
    kappa = min(eps, trace.delta) / 8
    trace.kappa = kappa

    for round_no in range(max_retries):
        trace.retries = round_no
        window = (-width, -depth)
        targets = _build_targets(sc.vertex_count, face_rows, curve_lo, curve_hi,
                                 lambda w: sums_lo[w], lambda w: sums_hi[w],
                                 trunc, sorted(nodes), clamp_zero=True,
                                 fade=(max(nodes), max(nodes) + 1))
        h = _fit_targets(targets, window, None, round_no)
        candidate = g + h
        failures = [v for v in (order_test(d, sc)
                                for d in all_diffs(candidate))
                    if not v.is_nonnegative]
        if not failures:
            return (candidate, trace) if with_trace else candidate
        nodes |= _refined_nodes(
            nodes, [v for v in failures
                    if v.witness is not None and v.witness.point <= t_cut],
            (trunc.min_point, t_cut))
        width += 3
        if round_no % 3 == 2:
            depth += 1
            trace.correction_depth = depth
        kappa /= 2
    raise RetriesExhausted({"engine": "unbounded", "R": str(r_cut),
                            "eps": str(eps), "depth": depth,
                            "nodes": len(nodes)})


# ---------------------------------------------------------------------------
# exact-LP oracle
# ---------------------------------------------------------------------------

def _lp_samples(sc: Scenario, count: int) -> list:
    import math as _math
    out = {Fraction(1)}
    for comp in sc.L.components():
        if comp[0] == "point":
            out.add(comp[1])
        elif comp[0] == "interval":
            a, b = comp[1], comp[2]
            out |= {a, b}
            for j in range(1, count):
                x = Fraction(_math.cos(_math.pi * j / count)).limit_denominator(64)
                out.add(a + (b - a) * (x + 1) / 2)
        else:
            t = comp[1]
            for _ in range(8):
                out.add(t)
                t = t * 2
    return sorted(out)


def _lp_patterns(problem: InterpolationProblem, window: Tuple[int, int]):
    """Candidate top-exponent patterns for the unbounded leading constraints."""
    degs = sorted({max(el.coeffs) for el in
                   list(problem.lowers) + list(problem.uppers)}, reverse=True)
    cands = [d for d in degs if window[0] <= d <= window[1]]
    bottom = min(degs) - 1
    if window[0] <= bottom <= window[1]:
        cands.append(bottom)
    return cands or [window[1]]


def interpolate_lp(problem: InterpolationProblem, support: Tuple[int, int],
                   with_trace: bool = False):
    """Independent LP engine: exact simplex over sampled strict constraints.

    Per vertex, coefficients in the support window are chosen to maximise the
    worst slack against the sampled envelopes (plus leading-coefficient
    constraints in unbounded mode); the candidate is certified by order_test
    and samples are refined at the certified failure points.
    """
    sc = problem.scenario
    verdicts = problem.pair_verdicts()
    bad = problem.violations(verdicts)
    if bad:
        raise PreconditionViolated(bad)
    trace = InterpolationTrace(engine="lp")
    equal = _equal_pair(problem)
    if equal is not None:
        return (equal, trace) if with_trace else equal

    window = (int(support[0]), int(support[1]))
    face_rows = sorted(sc.face.vertices)
    lo_polys = [[c.vertex_poly(v) for v in range(sc.vertex_count)]
                for c in problem.lowers]
    hi_polys = [[d.vertex_poly(v) for v in range(sc.vertex_count)]
                for d in problem.uppers]
    width = window[1] - window[0] + 1
    samples = _lp_samples(sc, 4 * width)
    patterns = _lp_patterns(problem, window) if sc.mode == UNBOUNDED else [None]

    for pattern in patterns:
        top = window[1] if pattern is None else pattern
        exps = list(range(window[0], top + 1))
        extra: Dict[int, list] = {v: [] for v in range(sc.vertex_count)}
        if pattern is not None:
            skip = False
            for el, sign in ([(c, "lower") for c in problem.lowers]
                             + [(d, "upper") for d in problem.uppers]):
                el_top, el_lead = degree_and_leading(el)
                if el_top > top:
                    vals = el_lead.values
                    good = all(v < 0 for v in vals) if sign == "lower" \
                        else all(v > 0 for v in vals)
                    if not good:
                        skip = True
                        break
                else:
                    for v in range(sc.vertex_count):
                        lv = el.coefficient(top).values[v]
                        if sign == "lower":
                            extra[v].append(("ge_top", lv))
                        else:
                            extra[v].append(("le_top", lv))
            if skip:
                continue
        for round_no in range(6):
            polys, feasible = [], True
            for v in range(sc.vertex_count):
                rows, rhs = [], []

                def add_ge(coeffs_row, bound):  # row . x >= bound + sigma
                    rows.append([-c for c in coeffs_row] + [1])
                    rhs.append(-bound)

                def add_le(coeffs_row, bound):
                    rows.append(list(coeffs_row) + [1])
                    rhs.append(bound)

                for t in samples:
                    on_face_curve = v in face_rows and sc.L.contains(t)
                    if not on_face_curve and t != 1:
                        continue
                    row = [t ** k for k in exps]
                    add_ge(row, max(cp[v](t) for cp in lo_polys))
                    add_le(row, min(dp[v](t) for dp in hi_polys))
                for kind, bound in extra[v]:
                    unit = [Fraction(1) if k == top else Fraction(0) for k in exps]
                    if kind == "ge_top":
                        add_ge(unit, bound)
                    else:
                        add_le(unit, bound)
                # sigma <= 1 keeps the objective bounded
                rows.append([Fraction(0)] * len(exps) + [1])
                rhs.append(Fraction(1))
                objective = [Fraction(0)] * len(exps) + [Fraction(1)]
                status, x = solve_lp(objective, rows, rhs)
                if status != OPTIMAL or x[-1] <= 0:
                    feasible = False
                    break
                polys.append(LaurentPoly({k: c for k, c in zip(exps, x[:-1])}))
            if not feasible:
                break
            failures = []
            g = None
            for denom_cap in (1 << 10, 1 << 20, None):
                if denom_cap is None:
                    cand_polys = polys
                else:
                    cand_polys = [LaurentPoly({k: v.limit_denominator(denom_cap)
                                               for k, v in p.coeffs.items()})
                                  for p in polys]
                cand = GroupElement.from_vertex_polys(cand_polys)
                failures = []
                for c in problem.lowers:
                    vv = order_test(cand - c, sc)
                    if not vv.is_nonnegative:
                        failures.append(vv)
                for d in problem.uppers:
                    vv = order_test(d - cand, sc)
                    if not vv.is_nonnegative:
                        failures.append(vv)
                if not failures:
                    g = cand
                    break
            if g is not None:
                trace.retries = round_no
                return (g, trace) if with_trace else g
            added = False
            for vv in failures:
                if vv.witness is not None:
                    t = vv.witness.point
                    if sc.L.contains(t):
                        s = _snap(t, sc.L.min_point, max(t, 1))
                        if sc.L.contains(s) and s not in samples:
                            samples.append(s)
                            samples.sort()
                            added = True
            if not added:
                break
    raise Infeasible(window)
