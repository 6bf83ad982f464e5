"""Rational polyhedral cones with both descriptions kept in sync.

A :class:`Cone` stores primitive integer generators together with its facet
normals and the equations cutting out its linear span.  Facets are found by
the brute-force "hyperplane through k-1 generators" test, which is exact and
fine for the small ambient dimensions used here; the H-to-V direction goes
through the dual cone.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .lattice import IntMatrix, kernel_saturated, primitive, rational_nullspace, rank

__all__ = [
    "Cone",
    "ConeError",
    "cone_from_generators",
    "cone_from_inequalities",
    "contains",
    "relint_contains",
    "intersect",
    "intersect_all",
    "faces",
    "is_face",
    "zero_cone",
    "full_space",
]


class ConeError(ValueError):
    pass


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


class Cone:
    """A rational polyhedral cone in R^d.

    Equality and hashing are by point set (canonical facets plus span
    equations), so two cones built from different generating sets compare
    equal when they coincide.
    """

    __slots__ = ("ambient_dim", "generators", "facets", "span_equations", "lineality_dim", "dim", "_key")

    def __init__(self, ambient_dim, generators, facets, span_equations, lineality_dim, dim):
        self.ambient_dim = ambient_dim
        self.generators = generators
        self.facets = facets
        self.span_equations = span_equations
        self.lineality_dim = lineality_dim
        self.dim = dim
        self._key = (ambient_dim, span_equations, facets)

    # -- predicates ---------------------------------------------------------

    def is_strongly_convex(self) -> bool:
        return self.lineality_dim == 0

    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        """Extremal rays; only meaningful for a strongly convex cone."""
        if self.lineality_dim:
            raise ConeError("cone contains a line, rays are not unique")
        return self.generators

    def _check(self, w: Sequence):
        if len(w) != self.ambient_dim:
            raise ConeError(f"dimension mismatch: vector of length {len(w)} in R^{self.ambient_dim}")

    def contains(self, w: Sequence) -> bool:
        self._check(w)
        return all(_dot(e, w) == 0 for e in self.span_equations) and all(
            _dot(h, w) >= 0 for h in self.facets
        )

    def relint_contains(self, w: Sequence) -> bool:
        self._check(w)
        return all(_dot(e, w) == 0 for e in self.span_equations) and all(
            _dot(h, w) > 0 for h in self.facets
        )

    def contains_cone(self, other: "Cone") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ConeError("dimension mismatch")
        return all(self.contains(g) for g in other.generators)

    def interior_point(self) -> tuple[Fraction, ...]:
        """A point of the relative interior (sum of the generators)."""
        return tuple(Fraction(sum(g[i] for g in self.generators)) for i in range(self.ambient_dim))

    def lineality_basis(self) -> list[tuple[int, ...]]:
        rows = list(self.facets) + list(self.span_equations)
        if not rows:
            return [tuple(int(i == j) for j in range(self.ambient_dim)) for i in range(self.ambient_dim)]
        return [primitive(v) for v in rational_nullspace(rows, self.ambient_dim)]

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __le__(self, other: "Cone") -> bool:
        return other.contains_cone(self)

    def __repr__(self) -> str:
        if self.lineality_dim:
            return f"Cone(dim={self.dim}, lineality={self.lineality_dim}, facets={list(self.facets)})"
        return f"Cone(rays={[list(g) for g in self.generators]})"


def _hyperplane_normals(gens: list[tuple[int, ...]], eqs: list[tuple[int, ...]], d: int, k: int):
    """Facet normals (inside the span) of the cone generated by ``gens``."""
    facets: set[tuple[int, ...]] = set()
    seen: list[tuple[int, ...]] = []
    for S in combinations(range(len(gens)), k - 1):
        sub = [gens[i] for i in S]
        if any(all(_dot(h, g) == 0 for g in sub) for h in seen):
            continue
        if k > 1 and rank(sub) != k - 1:
            continue
        ns = rational_nullspace(sub + eqs, d)
        if len(ns) != 1:
            continue
        h = primitive(ns[0])
        seen.append(h)
        vals = [_dot(h, g) for g in gens]
        if all(v >= 0 for v in vals):
            facets.add(h)
        elif all(v <= 0 for v in vals):
            facets.add(tuple(-x for x in h))
    return facets


def zero_cone(d: int) -> Cone:
    eqs = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    return Cone(d, (), (), eqs, 0, 0)


def full_space(d: int) -> Cone:
    return cone_from_generators(
        [tuple(s * int(i == j) for j in range(d)) for i in range(d) for s in (1, -1)], d
    )


def cone_from_generators(vectors: Iterable[Sequence], ambient_dim: int) -> Cone:
    """Cone generated by the given (rational or integer) vectors."""
    d = ambient_dim
    gens: list[tuple[int, ...]] = []
    for v in vectors:
        if len(v) != d:
            raise ConeError(f"generator {tuple(v)} does not live in R^{d}")
        if any(x != 0 for x in v):
            p = primitive(v)
            if p not in gens:
                gens.append(p)
    if not gens:
        return zero_cone(d)
    E = kernel_saturated(IntMatrix(gens, ncols=d))
    eqs = [E.row(i) for i in range(E.nrows)]
    k = d - len(eqs)
    facets = _hyperplane_normals(gens, eqs, d, k)
    facets_t = tuple(sorted(facets))
    null_rows = list(facets_t) + eqs
    lin = rational_nullspace(null_rows, d)
    lineality = len(lin)
    if lineality == 0:
        extremal = []
        for g in gens:
            tight = [h for h in facets_t if _dot(h, g) == 0] + eqs
            if rank(tight) == d - 1:
                extremal.append(g)
        out = tuple(sorted(extremal))
    else:
        lin_basis = [primitive(v) for v in lin]
        kept = set()
        for b in lin_basis:
            kept.add(b)
            kept.add(tuple(-x for x in b))
        lin_rows = list(facets_t) + eqs
        for g in gens:
            if not all(_dot(h, g) == 0 for h in lin_rows):
                kept.add(g)
        out = tuple(sorted(kept))
    return Cone(d, out, facets_t, tuple(eqs), lineality, k)


def cone_from_inequalities(
    inequalities: Iterable[Sequence], equations: Iterable[Sequence] = (), ambient_dim: int | None = None
) -> Cone:
    """The cone ``{x : h.x >= 0 for h in inequalities, e.x = 0 for e in equations}``."""
    ineqs = [tuple(primitive(h)) for h in inequalities if any(x != 0 for x in h)]
    eqs = [tuple(primitive(e)) for e in equations if any(x != 0 for x in e)]
    if ambient_dim is None:
        if not ineqs and not eqs:
            raise ConeError("ambient dimension required")
        ambient_dim = len((ineqs + eqs)[0])
    d = ambient_dim
    if not ineqs and not eqs:
        return full_space(d)
    dual = cone_from_generators(ineqs + eqs + [tuple(-x for x in e) for e in eqs], d)
    gens = list(dual.facets)
    for e in dual.span_equations:
        gens.append(e)
        gens.append(tuple(-x for x in e))
    return cone_from_generators(gens, d)


def contains(C: Cone, w: Sequence) -> bool:
    return C.contains(w)


def relint_contains(C: Cone, w: Sequence) -> bool:
    return C.relint_contains(w)


def intersect(C1: Cone, C2: Cone) -> Cone:
    if C1.ambient_dim != C2.ambient_dim:
        raise ConeError("dimension mismatch")
    if C1 == C2:
        return C1
    return cone_from_inequalities(
        list(C1.facets) + list(C2.facets),
        list(C1.span_equations) + list(C2.span_equations),
        C1.ambient_dim,
    )


def intersect_all(cones: Iterable[Cone], ambient_dim: int | None = None) -> Cone:
    cones = list(cones)
    if not cones:
        if ambient_dim is None:
            raise ConeError("ambient dimension required for an empty intersection")
        return full_space(ambient_dim)
    d = cones[0].ambient_dim
    if any(c.ambient_dim != d for c in cones):
        raise ConeError("dimension mismatch")
    uniq = list(dict.fromkeys(cones))
    if len(uniq) == 1:
        return uniq[0]
    ineqs = sorted({h for c in uniq for h in c.facets})
    eqs = sorted({e for c in uniq for e in c.span_equations})
    return cone_from_inequalities(ineqs, eqs, d)


def _face_at(C: Cone, w: Sequence) -> Cone:
    """Smallest face of ``C`` containing the point ``w`` of ``C``."""
    tight = [h for h in C.facets if _dot(h, w) == 0]
    return cone_from_generators(
        [g for g in C.generators if all(_dot(h, g) == 0 for h in tight)], C.ambient_dim
    )


def faces(C: Cone, k: int | None = None) -> list[Cone]:
    """All faces of ``C`` (of dimension ``k`` when given), sorted canonically."""
    found: dict[Cone, None] = {C: None}
    frontier = [C]
    while frontier:
        nxt = []
        for F in frontier:
            for h in F.facets:
                G = cone_from_generators([g for g in F.generators if _dot(h, g) == 0], C.ambient_dim)
                if G not in found:
                    found[G] = None
                    nxt.append(G)
        frontier = nxt
    out = [F for F in found if k is None or F.dim == k]
    out.sort(key=lambda F: (F.dim, F.generators))
    return out


def is_face(F: Cone, C: Cone) -> bool:
    if F.ambient_dim != C.ambient_dim:
        raise ConeError("dimension mismatch")
    w = F.interior_point()
    if not C.contains(w):
        return False
    return _face_at(C, w) == F


def supporting_normal(F: Cone, C: Cone) -> tuple[int, ...]:
    """A normal ``h`` in the dual of ``C`` with ``F = C ∩ h^⊥`` (requires ``is_face``)."""
    w = F.interior_point()
    tight = [h for h in C.facets if _dot(h, w) == 0]
    return tuple(sum(h[i] for h in tight) for i in range(C.ambient_dim))
