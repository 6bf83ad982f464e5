from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from examples_data import CELLS_Q, R2_Q, R3_Q
from oracles import in_cone_lp
from wmdskit.cone import (
    ConeError,
    cone_from_generators,
    cone_from_inequalities,
    faces,
    full_space,
    intersect,
    intersect_all,
    is_face,
    supporting_normal,
    zero_cone,
)
from wmdskit.fanbunch import eff_cone
from wmdskit.lattice import IntMatrix

vec3 = st.lists(st.integers(-3, 3), min_size=3, max_size=3)
gensets = st.lists(vec3, min_size=0, max_size=6)


def cols(Q, idx):
    C = IntMatrix(Q).columns()
    return [C[i - 1] for i in idx]


def test_orthant():
    C = cone_from_generators([(1, 0), (0, 1)], 2)
    assert set(C.facets) == {(1, 0), (0, 1)}
    assert C.dim == 2 and C.is_strongly_convex()
    assert C.contains((1, 1)) and C.relint_contains((1, 1))
    assert C.contains((1, 0)) and not C.relint_contains((1, 0))


def test_line_has_lineality():
    C = cone_from_generators([(1, 0), (-1, 0)], 2)
    assert C.lineality_dim == 1 and C.dim == 1
    assert not C.is_strongly_convex()
    with pytest.raises(ConeError):
        C.rays


def test_two_weight_columns():
    # <q2, q4> of the rank-2 example
    C = cone_from_generators(cols(R2_Q, [2, 4]), 2)
    assert C.rays == ((1, 2), (2, 1))


def test_membership():
    assert cone_from_generators(cols(R3_Q, [4]), 3).contains((1, 1, 1))
    assert not cone_from_generators(cols(R2_Q, [2, 3]), 2).contains((1, 2))
    ray = cone_from_generators([(1, 1, 1)], 3)
    assert ray.relint_contains((2, 2, 2))
    g23 = cone_from_generators(cols(R2_Q, [2, 3]), 2)
    assert g23.relint_contains((3, 2))
    with pytest.raises(ConeError):
        g23.contains((1, 2, 3))


def test_zero_and_full():
    Z = zero_cone(3)
    assert Z.dim == 0 and Z.contains((0, 0, 0)) and not Z.contains((1, 0, 0))
    assert cone_from_generators([], 3) == Z
    F = full_space(3)
    assert F.lineality_dim == 3 and F.contains((-5, 2, 7))


def test_intersections_of_listed_cones():
    C = eff_cone(CELLS_Q)
    assert intersect(C, C) == C
    # the 14 bunch cones of the rank-3 example meet in the ray (1,1,1)
    from examples_data import R3_SIGMA_MAX

    m = 7
    bunch = [cone_from_generators(cols(R3_Q, sorted(set(range(1, m + 1)) - set(I))), 3) for I in R3_SIGMA_MAX]
    assert intersect_all(bunch).rays == ((1, 1, 1),)


def test_faces_and_strong_convexity():
    assert cone_from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3).dim == 3
    assert eff_cone(R3_Q).is_strongly_convex()
    F = faces(cone_from_generators([(1, 0), (0, 1)], 2), 1)
    assert F == [cone_from_generators([(0, 1)], 2), cone_from_generators([(1, 0)], 2)]
    C = cone_from_generators([(1, 0, 0), (0, 1, 0), (1, 1, 1)], 3)
    assert len(faces(C, 2)) == 3 and len(faces(C, 1)) == 3 and len(faces(C, 0)) == 1
    assert is_face(cone_from_generators([(1, 0, 0)], 3), C)
    assert not is_face(cone_from_generators([(1, 1, 0)], 3), C)


@settings(max_examples=120, derandomize=True)
@given(gensets, st.lists(vec3, min_size=4, max_size=4))
def test_membership_agrees_with_lp(gens, points):
    C = cone_from_generators(gens, 3)
    for g in gens:
        assert C.contains(g)
    for w in points + [[a + b for a, b in zip(gens[0], gens[-1])]] if gens else points:
        assert C.contains(w) == in_cone_lp(gens, w)
        if C.relint_contains(w):
            assert C.contains(w)


@settings(max_examples=120, derandomize=True)
@given(gensets)
def test_double_description_round_trip(gens):
    C = cone_from_generators(gens, 3)
    assert cone_from_inequalities(C.facets, C.span_equations, 3) == C
    assert cone_from_generators(C.generators, 3) == C
    assert C.lineality_dim + len(C.lineality_basis()) >= 0
    assert (C.lineality_dim == 0) == C.is_strongly_convex()


@settings(max_examples=80, derandomize=True)
@given(st.lists(st.frozensets(st.integers(0, 5), min_size=1, max_size=4), min_size=3, max_size=3))
def test_intersection_commutative_associative(subsets):
    cs = IntMatrix(CELLS_Q).columns()
    A, B, C = (cone_from_generators([cs[j] for j in s], 3) for s in subsets)
    assert intersect(A, B) == intersect(B, A)
    assert intersect(intersect(A, B), C) == intersect(A, intersect(B, C))
    AB = intersect(A, B)
    for g in AB.generators:
        assert A.contains(g) and B.contains(g)


@settings(max_examples=60, derandomize=True)
@given(st.lists(vec3, min_size=1, max_size=6))
def test_faces_are_supported(gens):
    C = cone_from_generators(gens, 3)
    for F in faces(C):
        assert is_face(F, C)
        h = supporting_normal(F, C)
        cut = cone_from_inequalities(list(C.facets) + [tuple(-x for x in h)], C.span_equations, 3)
        assert cut == F


def test_strongly_convex_rays_unique():
    A = cone_from_generators([(1, 0), (3, 1), (0, 1), (2, 2)], 2)
    B = cone_from_generators([(0, 5), (7, 0)], 2)
    assert A == B and A.rays == B.rays == ((0, 1), (1, 0))
