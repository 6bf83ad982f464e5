"""Graded Cox presentations and the chamber-walk view of the MMP.

Only the free part of a class enters cone computations; torsion residues
are carried through degrees and homogeneity checks.  Relations are used
for their degrees alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .cone import Cone
from .fanbunch import Fan, FanError, MonomialIdeal, eff_cone, fan_from_ideal, mov_cone, nef_cone
from .gkz import GkzCone, chambers, gkz_decomposition, sigma_gamma
from .lattice import IntMatrix, gale_dual, rank

__all__ = [
    "Term",
    "GradedPresentation",
    "DivisorClass",
    "MmpReport",
    "PresentationError",
    "degree_of_monomial",
    "check_homogeneous",
    "canonical_ambient",
    "anticanonical_class",
    "is_big",
    "is_movable",
    "mmp_trace",
    "sqm_targets",
    "STATUSES",
]

STATUSES = ("not_effective", "already_nef", "minimal_model", "fiber_type_boundary")


class PresentationError(ValueError):
    pass


class Term(NamedTuple):
    coeff: Fraction
    exponents: tuple


@dataclass(frozen=True)
class DivisorClass:
    free: tuple
    torsion: tuple = ()

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if len(self.free) != len(other.free) or len(self.torsion) != len(other.torsion):
            raise ValueError("classes live in different groups")
        return DivisorClass(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def reduced(self, moduli: Sequence[int]) -> "DivisorClass":
        return DivisorClass(self.free, tuple(t % k for t, k in zip(self.torsion, moduli)))

    def __str__(self) -> str:
        s = "(" + ",".join(str(x) for x in self.free) + ")"
        if self.torsion:
            s += " + torsion (" + ",".join(str(x) for x in self.torsion) + ")"
        return s


@dataclass(frozen=True)
class GradedPresentation:
    Q: IntMatrix
    relations: tuple = ()
    irrelevant: MonomialIdeal | None = None
    torsion_moduli: tuple = ()
    torsion_matrix: IntMatrix | None = None
    name: str = ""

    def __post_init__(self):
        Q = IntMatrix.coerce(self.Q)
        object.__setattr__(self, "Q", Q)
        m = Q.ncols
        rels = []
        for k, rel in enumerate(self.relations):
            terms = []
            for t in rel:
                coeff, exps = (t.coeff, t.exponents) if isinstance(t, Term) else t
                exps = tuple(int(e) for e in exps)
                if len(exps) != m or any(e < 0 for e in exps):
                    raise PresentationError(f"relation {k + 1}: exponent vector {exps} invalid for {m} variables")
                terms.append(Term(Fraction(coeff), exps))
            if not _combine(terms):
                raise PresentationError(f"relation {k + 1} is the zero polynomial")
            rels.append(tuple(terms))
        object.__setattr__(self, "relations", tuple(rels))
        if self.torsion_moduli:
            moduli = tuple(int(t) for t in self.torsion_moduli)
            if any(t < 2 for t in moduli):
                raise PresentationError("torsion moduli must be at least 2")
            G = IntMatrix.coerce(self.torsion_matrix)
            if G.shape != (len(moduli), m):
                raise PresentationError("torsion matrix shape does not match moduli and variables")
            G = IntMatrix([[x % moduli[i] for x in G.row(i)] for i in range(G.nrows)], ncols=m)
            object.__setattr__(self, "torsion_moduli", moduli)
            object.__setattr__(self, "torsion_matrix", G)

    @property
    def m(self) -> int:
        return self.Q.ncols

    @property
    def r(self) -> int:
        return self.Q.nrows


def _combine(terms: Sequence[Term]) -> dict:
    acc: dict[tuple, Fraction] = {}
    for t in terms:
        acc[t.exponents] = acc.get(t.exponents, Fraction(0)) + t.coeff
    return {e: c for e, c in acc.items() if c != 0}


def degree_of_monomial(p: GradedPresentation, e: Sequence[int]) -> DivisorClass:
    if len(e) != p.m:
        raise PresentationError(f"exponent vector has length {len(e)}, expected {p.m}")
    free = p.Q.apply(e)
    tors = ()
    if p.torsion_moduli:
        tors = tuple(x % k for x, k in zip(p.torsion_matrix.apply(e), p.torsion_moduli))
    return DivisorClass(tuple(free), tors)


def check_homogeneous(p: GradedPresentation) -> tuple[bool, list]:
    """Per relation: its degree, or the first pair of conflicting degrees."""
    ok = True
    out = []
    for rel in p.relations:
        degs = [(e, degree_of_monomial(p, e)) for e in sorted(_combine(rel))]
        first = degs[0][1]
        clash = next((d for _, d in degs if d != first), None)
        if clash is None:
            out.append(first)
        else:
            ok = False
            out.append((first, clash))
    return ok, out


def canonical_ambient(p: GradedPresentation) -> tuple[IntMatrix, Fan]:
    if p.irrelevant is None:
        raise PresentationError("presentation has no irrelevant ideal")
    if rank(p.Q) != p.r or p.r >= p.m:
        raise PresentationError("weight matrix must have full rank r < m")
    V = gale_dual(p.Q)
    return V, fan_from_ideal(p.irrelevant, V, p.Q)


def anticanonical_class(p: GradedPresentation, subtract_relations: bool = False) -> DivisorClass:
    """Sum of the variable degrees (the toric anticanonical class).

    With ``subtract_relations`` the relation degrees are subtracted, which is
    the complete-intersection formula; homogeneity is required then.
    """
    c = degree_of_monomial(p, [1] * p.m)
    if subtract_relations and p.relations:
        ok, degs = check_homogeneous(p)
        if not ok:
            raise PresentationError("relations are not homogeneous")
        free = list(c.free)
        tors = list(c.torsion)
        for d in degs:
            free = [a - b for a, b in zip(free, d.free)]
            tors = [a - b for a, b in zip(tors, d.torsion)]
        c = DivisorClass(tuple(free), tuple(tors)).reduced(p.torsion_moduli)
    return c


def _free(c) -> tuple:
    return tuple(c.free) if isinstance(c, DivisorClass) else tuple(c)


def is_big(c, Q) -> bool:
    return eff_cone(Q).relint_contains(_free(c))


def is_movable(c, Q) -> bool:
    return mov_cone(Q).contains(_free(c))


@dataclass
class MmpReport:
    input_class: DivisorClass
    status: str
    target_chamber: GkzCone | None = None
    target_fan: Fan | None = None
    target_is_fan: bool = False
    is_sqm: bool = False
    semiample_flag: bool = False
    incident_chambers: list = field(default_factory=list)


def mmp_trace(p: GradedPresentation, c: DivisorClass) -> MmpReport:
    """Endpoint of a D-MMP read off from the GKZ decomposition of Eff.

    Order of resolution: outside Eff; inside a chamber; in Nef of the
    ambient fan; on the boundary of Eff; on a wall.  On walls the chamber
    with the smallest ray list is chosen.
    """
    Q = p.Q
    w = _free(c)
    if len(w) != p.r:
        raise PresentationError(f"class has {len(w)} entries, expected {p.r}")
    V, W = canonical_ambient(p)
    eff = eff_cone(Q)
    if not eff.contains(w):
        return MmpReport(c, "not_effective")
    decomp = gkz_decomposition(Q)
    incident = [ch for ch in decomp.chambers if ch.cone.contains(w)]
    inner = [ch for ch in incident if ch.cone.relint_contains(w)]
    mov = mov_cone(Q)
    if inner:
        return _model(c, "minimal_model", inner[0], V, mov, incident)
    if nef_cone(W).contains(w):
        return MmpReport(c, "already_nef", incident_chambers=incident)
    chosen = min(incident, key=lambda ch: ch.cone.generators)
    status = "fiber_type_boundary" if not eff.relint_contains(w) else "minimal_model"
    return _model(c, status, chosen, V, mov, incident)


def _model(c, status, gamma: GkzCone, V, mov: Cone, incident) -> MmpReport:
    fan, is_fan = sigma_gamma(gamma, V)
    return MmpReport(
        c,
        status,
        target_chamber=gamma,
        target_fan=fan,
        target_is_fan=is_fan,
        is_sqm=mov.contains_cone(gamma.cone),
        semiample_flag=True,
        incident_chambers=incident,
    )


def _covers(cells: list[Cone], base: Cone) -> bool:
    """Do the full-dimensional ``cells`` (pairwise relint-disjoint) cover ``base``?"""
    from .cone import faces

    d = base.ambient_dim
    count: dict[Cone, int] = {}
    for C in cells:
        if not base.contains_cone(C):
            return False
        for F in faces(C, d - 1):
            count[F] = count.get(F, 0) + 1
    bfacets = set(faces(base, d - 1))
    for F, k in count.items():
        on_boundary = any(B.contains_cone(F) for B in bfacets)
        if k != (1 if on_boundary else 2):
            return False
    return True


def sqm_targets(p: GradedPresentation) -> list[tuple[GkzCone, Fan]]:
    """One (chamber, fan) pair per chamber of the decomposition of Mov."""
    V = gale_dual(p.Q)
    chs = chambers(p.Q, V)
    if not _covers([ch.cell.cone for ch in chs], mov_cone(p.Q)):
        raise AssertionError("chambers do not cover the moving cone")
    return [(ch.cell, ch.fan) for ch in chs]
