"""Coboundaries of id - rho and the quotient K0(C) = G / (id - rho)G.

The coefficient-sum map classifies cosets exactly: an element is a coboundary
iff its per-vertex coefficient sums vanish, and the induced isomorphism sends
the class of g to sum_m g_m.  Classes are therefore stored by that affine
image, which makes equality and positivity decidable with no coset normal
forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .affine import AffineElement
from .dimgroup import GroupElement, shift


class SumNotZero(Exception):
    """Input to the coboundary solver has a non-vanishing coefficient sum."""

    def __init__(self, residual: AffineElement):
        self.residual = residual
        super().__init__(f"coefficient sum is {list(map(str, residual.values))}, not 0")


def coefficient_sum(g: GroupElement) -> AffineElement:
    out = AffineElement.zero(g.vertex_count)
    for a in g.coeffs.values():
        out = out + a
    return out


def solve_coboundary(d: GroupElement) -> GroupElement:
    """y with (id - rho)(y) = d, i.e. y_n - y_{n+1} = d_n for all n.

    Telescoping from the top of the support: y_n = sum_{k >= n} d_k, which is
    finitely supported exactly because the total sum vanishes.
    """
    residual = coefficient_sum(d)
    if not residual.is_zero():
        raise SumNotZero(residual)
    if d.is_zero():
        return GroupElement.zero(d.vertex_count)
    top, bottom = max(d.coeffs), min(d.coeffs)
    y = {}
    acc = AffineElement.zero(d.vertex_count)
    for n in range(top, bottom - 1, -1):
        acc = acc + d.coefficient(n)
        if not acc.is_zero():
            y[n] = acc
    return GroupElement(d.vertex_count, y)


def coboundary_apply(y: GroupElement) -> GroupElement:
    """(id - rho)(y) = y - shift(y, 1)."""
    return y - shift(y, 1)


@dataclass(frozen=True)
class QuotientClass:
    """Class in K0(C), stored by its image under the coefficient-sum map."""

    representative_sum: AffineElement

    @property
    def is_zero(self) -> bool:
        return self.representative_sum.is_zero()

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuotientClass)
                and self.representative_sum == other.representative_sum)


def class_of(g: GroupElement) -> QuotientClass:
    return QuotientClass(coefficient_sum(g))


def k0_positive(c: QuotientClass) -> bool:
    """Membership in K0(C)+ = (strictly positive sums) together with 0.

    The zero class is positive as the zero element; report it distinctly via
    ``c.is_zero``.
    """
    if c.is_zero:
        return True
    return all(v > 0 for v in c.representative_sum.values)
