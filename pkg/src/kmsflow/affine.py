"""Finite-dimensional simplex model and the group H of rational affine functions.

The simplex is the standard simplex on ``vertex_count`` vertices; closed faces
are spanned by vertex subsets.  An element of H is stored by its (exact,
rational) vertex values, so an affine function is strictly positive on a face
exactly when it is strictly positive at the face's vertices.  Everything here
is immutable and exact; no floats enter at any point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Union[Fraction, int, str]


def rat(x: Rat) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class Simplex:
    """Standard simplex with vertices 0..vertex_count-1."""

    vertex_count: int

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("simplex needs at least one vertex")

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)


@dataclass(frozen=True)
class Face:
    """Closed face spanned by a non-empty subset of the parent's vertices."""

    parent: Simplex
    vertices: frozenset

    def __init__(self, parent: Simplex, vertices: Iterable[int]):
        vs = frozenset(int(v) for v in vertices)
        if not vs:
            raise ValueError("face must be non-empty")
        if not vs <= set(parent.vertices):
            raise ValueError(f"face vertices {sorted(vs)} outside simplex")
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "vertices", vs)

    @property
    def sorted_vertices(self) -> list:
        return sorted(self.vertices)

    def is_whole_simplex(self) -> bool:
        return len(self.vertices) == self.parent.vertex_count


@dataclass(frozen=True)
class AffineElement:
    """Element of H: a rational-valued affine function, stored by vertex values."""

    values: tuple

    def __init__(self, values: Sequence[Rat]):
        object.__setattr__(self, "values", tuple(rat(v) for v in values))

    @staticmethod
    def constant(c: Rat, vertex_count: int) -> "AffineElement":
        return AffineElement([rat(c)] * vertex_count)

    @staticmethod
    def zero(vertex_count: int) -> "AffineElement":
        return AffineElement.constant(0, vertex_count)

    @property
    def vertex_count(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __add__(self, other: "AffineElement") -> "AffineElement":
        self._check_dim(other)
        return AffineElement([a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "AffineElement") -> "AffineElement":
        self._check_dim(other)
        return AffineElement([a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> "AffineElement":
        return AffineElement([-a for a in self.values])

    def scale(self, c: Rat) -> "AffineElement":
        c = rat(c)
        return AffineElement([c * a for a in self.values])

    def min_value(self, vertices: Iterable[int] | None = None) -> Fraction:
        vs = list(vertices) if vertices is not None else range(len(self.values))
        return min(self.values[v] for v in vs)

    def max_value(self, vertices: Iterable[int] | None = None) -> Fraction:
        vs = list(vertices) if vertices is not None else range(len(self.values))
        return max(self.values[v] for v in vs)

    def _check_dim(self, other: "AffineElement"):
        if len(self.values) != len(other.values):
            raise ValueError("affine elements live on different simplexes")


def affine_eval(a: AffineElement, weights: Sequence[Rat]) -> Fraction:
    """Evaluate a at a barycentric point: sum of weight_v * value_v.

    Weights must be a rational probability vector over the vertices.
    """
    w = [rat(x) for x in weights]
    if len(w) != a.vertex_count:
        raise ValueError(f"{len(w)} weights for {a.vertex_count} vertices")
    if any(x < 0 for x in w):
        raise ValueError("weights must be non-negative")
    if sum(w) != 1:
        raise ValueError("weights must sum to 1")
    return sum((wi * vi for wi, vi in zip(w, a.values)), Fraction(0))


def affine_strictly_positive(a: AffineElement, on: Face) -> bool:
    """True iff a > 0 everywhere on the closed face (iff > 0 at its vertices)."""
    if a.vertex_count != on.parent.vertex_count:
        raise ValueError("affine element and face live on different simplexes")
    return all(a.values[v] > 0 for v in on.vertices)


def extend_from_face(values_on_face: Sequence[Rat], face: Face, x0: int,
                     excess: Rat) -> AffineElement:
    """Extend a function on F to the whole simplex, exceeding it at x0.

    The input lists the values on ``face.sorted_vertices`` in that order.  The
    extension b agrees with the input on F, takes max_F + excess at x0, and
    max_F at every other vertex outside F, so b(x0) > a(y) for all y in F.
    """
    excess = rat(excess)
    if excess <= 0:
        raise ValueError("excess must be positive")
    if x0 in face.vertices:
        raise ValueError(f"vertex {x0} lies inside the face")
    fv = face.sorted_vertices
    vals = [rat(v) for v in values_on_face]
    if len(vals) != len(fv):
        raise ValueError("one value per face vertex required")
    top = max(vals)
    out = [top] * face.parent.vertex_count
    for v, a in zip(fv, vals):
        out[v] = a
    out[x0] = top + excess
    return AffineElement(out)
