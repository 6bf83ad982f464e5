import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from examples_data import (
    CELLS_Q, CELLS_V, R2_GAMMA1, R2_GAMMA2, R2_Q, R2_SIGMA1, R2_SIGMA2, R2_V, R3_CHAMBER_FANS, R3_Q, R3_V,
)
from wmdskit.cone import cone_from_generators, faces, intersect, intersect_all, is_face
from wmdskit.fanbunch import Fan, mov_cone, nef_cone, support_is, validate_fan
from wmdskit.gkz import (
    GkzError,
    chambers,
    gkz_cone_at,
    gkz_decomposition,
    is_geometric_cell,
    is_union_of_chambers,
    sigma_gamma,
)
from wmdskit.lattice import IntMatrix


def cone(*rays):
    return cone_from_generators(rays, len(rays[0]))


def test_gkz_cone_at_examples():
    assert gkz_cone_at(CELLS_Q, (1, 1, 1)).cone == cone((1, 1, 1))
    g = gkz_cone_at(R2_Q, (3, 2))
    assert g.cone == cone(*R2_GAMMA1) and g.is_chamber
    assert gkz_cone_at(R3_Q, (1, 1, 1)).cone == cone((1, 1, 1))
    with pytest.raises(GkzError, match="outside"):
        gkz_cone_at(R2_Q, (1, -1))


def test_chamber_counts():
    assert len(gkz_decomposition(CELLS_Q, True).chambers) == 6
    assert len(gkz_decomposition(R3_Q, True).chambers) == 6
    d = gkz_decomposition(R2_Q, True)
    assert [c.cone for c in d.chambers] == [cone(*R2_GAMMA1), cone(*R2_GAMMA2)]
    assert len(chambers(R2_Q)) == 2


def test_full_decomposition_rank_two():
    d = gkz_decomposition(R2_Q)
    # rays (1,0),(2,1),(1,1),(1,2),(0,1) cut Eff into four chambers
    assert len(d.chambers) == 4
    assert sum(1 for c in d.cells if c.dim == 1) == 5


def test_mov_must_be_full_dimensional():
    with pytest.raises(GkzError, match="moving cone"):
        gkz_decomposition([[1, 1, 0], [0, 0, 1]], True)


def test_sigma_gamma_listed_fans():
    ch = chambers(R2_Q, R2_V)
    assert ch[0].fan.max_cones_1based() == R2_SIGMA1
    assert ch[1].fan.max_cones_1based() == R2_SIGMA2
    assert all(c.is_fan for c in ch)
    got = sorted(c.fan.max_cones_1based() for c in chambers(R3_Q, R3_V))
    assert got == sorted(sorted(f) for f in R3_CHAMBER_FANS)


@pytest.mark.parametrize("V,Q", [(CELLS_V, CELLS_Q), (R2_V, R2_Q), (R3_V, R3_Q)])
def test_chamber_fans_are_complete_and_recover_the_chamber(V, Q):
    for ch in chambers(Q, V):
        F = ch.fan
        assert validate_fan(F).ok and F.is_simplicial()
        assert support_is(F, cone_from_generators(F.columns, F.n))
        assert nef_cone(F) == ch.cell.cone


@pytest.mark.parametrize("Q", [CELLS_Q, R2_Q, R3_Q])
@pytest.mark.parametrize("restrict", [False, True])
def test_cells_form_a_fan(Q, restrict):
    d = gkz_decomposition(Q, restrict)
    cells = [c.cone for c in d.cells]
    for A, B in combinations(cells, 2):
        C = intersect(A, B)
        assert is_face(C, A) and is_face(C, B)
    # every face of a cell is a cell
    s = set(cells)
    for A in cells:
        assert all(F in s for F in faces(A))


@pytest.mark.parametrize("Q", [CELLS_Q, R2_Q, R3_Q])
def test_cells_stable_under_interior_points(Q):
    rng = random.Random(11)
    d = gkz_decomposition(Q)
    for c in d.cells:
        assert c.cone.relint_contains(c.witness)
        for _ in range(3):
            w = [Fraction(0)] * c.cone.ambient_dim
            for g in c.cone.generators:
                t = Fraction(rng.randint(1, 50), rng.randint(1, 7))
                w = [a + t * b for a, b in zip(w, g)]
            assert gkz_cone_at(Q, w).cone == c.cone


def test_chambers_cover_mov():
    for Q in (CELLS_Q, R2_Q, R3_Q):
        d = gkz_decomposition(Q, True)
        assert is_union_of_chambers(mov_cone(Q), d)
        assert not is_union_of_chambers(cone((1, 1, 1)), d) if len(Q) == 3 else True


def test_geometric_cells():
    ray = gkz_cone_at(CELLS_Q, (1, 1, 1))
    ok, witnesses = is_geometric_cell(ray, CELLS_V)
    assert ok and len(witnesses) >= 2
    for ch in chambers(R2_Q, R2_V):
        ok, w = is_geometric_cell(ch.cell, R2_V)
        assert ok and w == [ch.fan]
    # rank 2: one-dimensional cells are never nef cones of complete fans
    ok, w = is_geometric_cell(gkz_cone_at(R2_Q, (1, 1)), R2_V)
    assert not ok and w == []


@settings(max_examples=40, derandomize=True, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_point_lies_in_relint_of_its_cell(w):
    if not any(w):
        return
    g = gkz_cone_at(CELLS_Q, w)
    assert g.cone.relint_contains(w)
    # both characterisations agree: the relint bunch intersects to gamma
    cols = IntMatrix(CELLS_Q).columns()
    inter = intersect_all([cone_from_generators([cols[j] for j in J], 3) for J in g.column_sets])
    assert inter == g.cone
