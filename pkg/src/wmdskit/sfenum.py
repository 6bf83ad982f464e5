"""Census of complete simplicial fans on a fixed set of rays, and filling cells.

The search works on candidate cones: ``n``-subsets of columns that are
linearly independent and contain no other column.  Pairwise compatibility
(meeting in a common face) is precomputed.  Starting from every candidate
that holds a fixed interior point, the search repeatedly picks the smallest
interior ridge covered only once and branches on the compatible candidates
across it.  Every complete fan is reached this way, since its cone on the
far side of such a ridge is unique.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .cone import Cone, cone_from_generators
from .fanbunch import (
    Fan,
    FanError,
    MonomialIdeal,
    _ridge_normal,
    _simplex_contains,
    _simplicial_pair_ok,
    irrelevant_ideal,
    nef_cone,
    support_is,
    validate_fan,
)
from .gkz import GkzCone, GkzError, chambers, gkz_cone_at
from .lattice import IntMatrix, det, gale_dual

__all__ = [
    "BudgetExceeded",
    "FanCensus",
    "CompletionResult",
    "LowRankReport",
    "enumerate_SF",
    "enumerate_PSF",
    "nu",
    "filling_cells",
    "is_fillable",
    "sharp_completion",
    "low_rank_checks",
    "MAX_RAYS",
    "MAX_CANDIDATES",
]

MAX_RAYS = 9
MAX_CANDIDATES = 60


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class FanCensus:
    V: IntMatrix
    Q: IntMatrix
    all_fans: list = field(default_factory=list)
    projective_flags: list = field(default_factory=list)
    nef_cones: list = field(default_factory=list)
    nef_cells: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.all_fans)

    def projective_fans(self) -> list[Fan]:
        return [F for F, p in zip(self.all_fans, self.projective_flags) if p]


@dataclass
class CompletionResult:
    filling_cell: GkzCone
    completed_fan: Fan
    irrelevant_ideal: MonomialIdeal
    sharp: bool
    complete: bool


def _candidates(cols, n: int) -> list[frozenset]:
    m = len(cols)
    out = []
    for J in combinations(range(m), n):
        if det([[cols[j][i] for j in J] for i in range(n)]) == 0:
            continue
        if any(_simplex_contains(cols, J, cols[k], n) for k in range(m) if k not in J):
            continue
        out.append(frozenset(J))
    return out


def _side(h, v) -> int:
    s = sum(a * b for a, b in zip(h, v))
    return (s > 0) - (s < 0)


@lru_cache(maxsize=16)
def _census(V: IntMatrix, Q: IntMatrix) -> FanCensus:
    n, m = V.shape
    if m > MAX_RAYS:
        raise BudgetExceeded(f"{m} rays exceeds the enumeration budget of {MAX_RAYS}")
    cols = V.columns()
    target = cone_from_generators(cols, n)
    cands = _candidates(cols, n)
    if len(cands) > MAX_CANDIDATES:
        raise BudgetExceeded(f"{len(cands)} candidate cones exceeds the budget of {MAX_CANDIDATES}")
    compat = [[_simplicial_pair_ok(cols, a, b) for b in cands] for a in cands]
    normals: dict[frozenset, tuple] = {}
    boundary: dict[frozenset, bool] = {}
    for c in cands:
        for i in c:
            R = c - {i}
            if R not in normals:
                h = _ridge_normal(cols, sorted(R), n)
                normals[R] = h
                vals = [_side(h, g) for g in target.generators]
                boundary[R] = all(v >= 0 for v in vals) or all(v <= 0 for v in vals)
    by_ridge: dict[frozenset, list[int]] = {}
    for k, c in enumerate(cands):
        for i in c:
            by_ridge.setdefault(c - {i}, []).append(k)

    found: set[frozenset] = set()
    chosen: list[int] = []
    count: dict[frozenset, int] = {}

    def add(k: int):
        chosen.append(k)
        for i in cands[k]:
            R = cands[k] - {i}
            count[R] = count.get(R, 0) + 1

    def remove(k: int):
        chosen.pop()
        for i in cands[k]:
            R = cands[k] - {i}
            count[R] -= 1

    def open_ridge():
        best = None
        for R, c in count.items():
            if c == 1 and not boundary[R]:
                key = tuple(sorted(R))
                if best is None or key < best[0]:
                    best = (key, R)
        return None if best is None else best[1]

    def search():
        R = open_ridge()
        if R is None:
            found.add(frozenset(cands[k] for k in chosen))
            return
        (owner,) = [k for k in chosen if R <= cands[k]]
        h = normals[R]
        (apex,) = cands[owner] - R
        own_side = _side(h, cols[apex])
        for k in by_ridge[R]:
            if k in chosen:
                continue
            (other,) = cands[k] - R
            if _side(h, cols[other]) != -own_side:
                continue
            if not all(compat[k][j] for j in chosen):
                continue
            if any(count.get(cands[k] - {i}, 0) >= 2 for i in cands[k]):
                continue
            add(k)
            search()
            remove(k)

    p = target.interior_point()
    for k, c in enumerate(cands):
        if _simplex_contains(cols, c, p, n):
            add(k)
            search()
            remove(k)

    fans = []
    for S in found:
        F = Fan(V, S, Q)
        if F.used_rays() != frozenset(range(m)):
            continue
        rep = validate_fan(F)
        if not rep.ok:
            raise AssertionError(f"enumeration produced an invalid fan: {rep.diagnostics}")
        if not support_is(F, target):
            raise AssertionError(f"enumeration produced a fan with the wrong support: {F}")
        fans.append(F)
    fans.sort(key=lambda F: F.max_cones_1based())
    nefs = [nef_cone(F) for F in fans]
    proj = [c.is_full_dimensional() for c in nefs]
    cells = [gkz_cone_at(Q, c.interior_point()) for c in nefs]
    for c, cell in zip(nefs, cells):
        if cell.cone != c:
            raise AssertionError(f"nef cone {c} is not a GKZ cell")
    return FanCensus(V, Q, fans, proj, nefs, cells)


def enumerate_SF(V, Q=None) -> FanCensus:
    """All simplicial fans using every column of V as a ray with support <V>."""
    V = IntMatrix.coerce(V)
    Q = gale_dual(V) if Q is None else IntMatrix.coerce(Q)
    return _census(V, Q)


def enumerate_PSF(V, Q=None) -> FanCensus:
    """Projective fans, one per chamber of Mov, built as Σ_γ (no enumeration)."""
    V = IntMatrix.coerce(V)
    Q = gale_dual(V) if Q is None else IntMatrix.coerce(Q)
    chs = chambers(Q, V)
    fans = [ch.fan for ch in chs]
    return FanCensus(V, Q, fans, [True] * len(fans), [ch.cell.cone for ch in chs], [ch.cell for ch in chs])


def nu(F: Fan, require_support: bool = True) -> GkzCone:
    """The GKZ cell equal to the nef cone of ``F``."""
    if require_support:
        target = cone_from_generators(F.columns, F.n)
        if not support_is(F, target):
            raise FanError("fan support is not the cone generated by its rays")
    nef = nef_cone(F)
    if nef.dim == 0:
        raise GkzError("nef cone is trivial")
    cell = gkz_cone_at(F.weights, nef.interior_point())
    if cell.cone != nef:
        raise AssertionError(f"nef cone {nef} is not a GKZ cell")
    return cell


def _filling_fans(W: Fan, census: FanCensus):
    for F, nef in zip(census.all_fans, census.nef_cones):
        if W.issubfan(F):
            yield F, nef


def filling_cells(W: Fan) -> list[tuple[GkzCone, list[Fan]]]:
    """Cells ν(Σ') for the complete fans Σ' containing W, grouped by cell."""
    census = enumerate_SF(W.V, W.weights)
    W_nef = nef_cone(W)
    groups: dict[Cone, list[Fan]] = {}
    for F, nef in _filling_fans(W, census):
        if not W_nef.contains_cone(nef):
            raise AssertionError("filling cell is not inside Nef(W)")
        groups.setdefault(nef, []).append(F)
    out = []
    for nef, fans in groups.items():
        if nef.dim == 0:
            continue
        out.append((gkz_cone_at(W.weights, nef.interior_point()), fans))
    out.sort(key=lambda t: (-t[0].dim, t[0].cone.generators))
    return out


def is_fillable(W: Fan) -> bool:
    return bool(filling_cells(W))


def sharp_completion(W: Fan, gamma: GkzCone) -> CompletionResult:
    """Fan Σ' ⊇ W with Nef(Σ') = γ and the irrelevant ideal of the completion."""
    matches = [fans for cell, fans in filling_cells(W) if cell == gamma]
    if not matches:
        raise FanError("not a filling cell")
    fans = matches[0]
    if gamma.is_chamber and len(fans) != 1:
        raise AssertionError("a chamber must have a unique filling fan")
    F = fans[0]
    irr_z, irr_w = irrelevant_ideal(F), irrelevant_ideal(W)
    if not irr_z.contains_ideal(irr_w):
        raise AssertionError("irrelevant ideal of the completion does not contain that of W")
    complete = support_is(F)
    return CompletionResult(gamma, F, irr_z, True, complete)


@dataclass
class LowRankReport:
    r: int
    n_fans: int
    counterexamples: list
    ok: bool


def low_rank_checks(V, Q=None) -> LowRankReport:
    """For r <= 2 every complete simplicial fan should be projective."""
    V = IntMatrix.coerce(V)
    Q = gale_dual(V) if Q is None else IntMatrix.coerce(Q)
    r = Q.nrows
    if r > 2:
        raise ValueError(f"low-rank check needs r <= 2, got r = {r}")
    if cone_from_generators(V.columns(), V.nrows).lineality_dim != V.nrows:
        raise ValueError("columns do not positively span the whole space")
    census = enumerate_SF(V, Q)
    bad = [F for F, p in zip(census.all_fans, census.projective_flags) if not p]
    return LowRankReport(r, len(census), bad, not bad)
