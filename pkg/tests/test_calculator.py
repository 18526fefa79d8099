import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowcalc.abelian import DiagGroup, FgAbGroup, PresentedGroup, int_matrix, zeros
from chowcalc.calculator import (
    D1NotComplex,
    ExactSequence,
    HypothesisFailed,
    InvalidResolutionData,
    MixedGroup,
    ShapeMismatch,
    ch1_smooth,
    chc1_divisor,
    chc1_smooth_2resolution,
    chc1_surface,
    chc1_variety,
    pic_row,
    units_row,
)
from chowcalc.complexes import cohomology, torus_cohomology

from generators import (
    closure,
    cycle_graph,
    random_matrix,
    random_tree,
    random_variety_data,
    resolution_data,
)
from oracles import cokernel_oracle, q_rank

seeds = st.integers(0, 2 ** 32 - 1)
Z = FgAbGroup
HOLLOW = [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]


def all_ones(cells):
    return {c: 1 for c in cells}


def hollow_triangle(**kwargs):
    return resolution_data(3, HOLLOW, all_ones(HOLLOW), **kwargs)


def solid_simplex():
    cells = closure([(1, 2, 3)])
    pics = {c: 1 for c in cells if len(c) < 3}
    restr = {(f, c): [[1]] for c in cells if len(c) == 2 for f in closure([c]) if len(f) == 1}
    return resolution_data(3, cells, pics, restr, user_contractible=True)


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("pi0, pic, m, expected", [
    (1, Z(5), 0, MixedGroup(discrete=Z(5))),
    (3, Z(2), 1, MixedGroup(torus_rank=3)),
    (2, Z(2), 7, MixedGroup()),
    (1, Z(1), -1, MixedGroup()),
])
def test_ch1_smooth(pi0, pic, m, expected):
    assert ch1_smooth(pi0, pic, m) == expected


def test_ch1_smooth_needs_a_component():
    with pytest.raises(ValueError):
        ch1_smooth(0, Z(), 0)


def test_mixed_group_rendering():
    assert str(MixedGroup(1, (), Z(3))) == "Z^3 + C*"
    g = MixedGroup.graded_of([("E2^(1,-1)", DiagGroup(1)), ("E2^(0,0)", Z(3))])
    assert g.graded and g.rank == 4
    assert str(g) == "gr: C* <E2^(1,-1)> | Z^3 <E2^(0,0)>"
    # a single nonzero piece is not graded
    assert not MixedGroup.graded_of([("a", Z()), ("b", Z(2))]).graded


@given(st.integers(0, 3), st.lists(st.integers(2, 12), max_size=2), st.integers(0, 3),
       st.lists(st.integers(2, 12), max_size=2), st.booleans())
def test_mixed_group_dict_round_trip(t, fin, r, tors, graded):
    g = MixedGroup(t, tuple(fin), Z.from_divisors(r, tors))
    if graded:
        g = MixedGroup.graded_of([("sub", MixedGroup(t, tuple(fin))),
                                  ("quot", Z.from_divisors(r, tors))])
    back = MixedGroup.from_dict(g.to_dict())
    assert back == g and str(back) == str(g)


def test_exact_sequence_checks():
    ok = ExactSequence("ok", (("a", MixedGroup(discrete=Z(0, (2,)))),
                              ("b", MixedGroup(discrete=Z(0, (4,)))),
                              ("c", MixedGroup(discrete=Z(0, (2,))))))
    assert ok.rank_balance() == 0 and ok.torsion_consistent()
    bad = ExactSequence("bad", (("a", MixedGroup(discrete=Z(0, (3,)))),
                                ("b", MixedGroup(discrete=Z(0, (4,))))))
    assert not bad.torsion_consistent()


# ---------------------------------------------------------------------------
# rows
# ---------------------------------------------------------------------------

def test_pic_row_single_component():
    row = pic_row(resolution_data(3, [(1,)], {(1,): 1}))
    assert row.terms == (PresentedGroup.free(1),)


def test_pic_row_two_components():
    cells = [(1,), (2,), (1, 2)]
    data = resolution_data(3, cells, all_ones(cells),
                           {((1,), (1, 2)): [[1]], ((2,), (1, 2)): [[1]]})
    row = pic_row(data)
    assert cohomology(row, 0) == Z(1)
    assert cohomology(row, 1) == Z()
    # delta on (a, b) is b - a: face_0 of {1,2} is {2}
    assert row.differential(0).tolist() == [[-1, 1]]


def test_pic_row_zero_maps():
    row = pic_row(hollow_triangle())
    assert cohomology(row, 0) == Z(3) and cohomology(row, 1) == Z(3)


def test_pic_row_rejects_non_complex():
    cells = closure([(1, 2, 3)])
    pics = all_ones(cells)
    restr = {(f, c): [[1]] for c in cells if len(c) > 1 for f in closure([c])
             if len(f) == len(c) - 1}
    restr[((1, 2), (1, 2, 3))] = [[2]]
    with pytest.raises(D1NotComplex):
        pic_row(resolution_data(4, cells, pics, restr))


def test_units_row():
    single = units_row(resolution_data(3, [(1,)], {(1,): 1}).gamma)
    assert single.torus and torus_cohomology(single, 0) == DiagGroup(1)
    tri = units_row(hollow_triangle().gamma)
    assert torus_cohomology(tri, 0) == DiagGroup(1)
    assert torus_cohomology(tri, 1) == DiagGroup(1)


@settings(max_examples=30)
@given(seeds)
def test_units_row_of_tree(seed):
    cells = random_tree(random.Random(seed))
    row = units_row(resolution_data(2, cells, all_ones([c for c in cells if len(c) == 1])).gamma)
    assert torus_cohomology(row, 0) == DiagGroup(1)
    assert torus_cohomology(row, 1) == DiagGroup()


# ---------------------------------------------------------------------------
# divisor
# ---------------------------------------------------------------------------

def test_divisor_solid_simplex():
    out = chc1_divisor(solid_simplex())
    assert out[1] == MixedGroup(torus_rank=1)
    assert out[0] == MixedGroup(discrete=Z(1))
    # the point has no Picard group, so H^1 of the row is Z^3 / im(delta) = Z
    assert out[-1] == MixedGroup(discrete=Z(1))
    assert out[-2].is_trivial() and out[2].is_trivial()
    assert "acyclic" in out.report.rule


def test_divisor_hollow_triangle():
    out = chc1_divisor(hollow_triangle())
    assert out[1] == MixedGroup(torus_rank=1)
    assert out[0].graded and out[0] == MixedGroup(1, (), Z(3), True)
    assert out[-1] == MixedGroup(discrete=Z(3))
    assert out[-2].is_trivial()
    assert out.report.checklist["h2_gamma_vanishes"]
    assert out.report.balanced()


def test_divisor_single_component():
    out = chc1_divisor(resolution_data(3, [(1,)], {(1,): 2}))
    assert out[0] == MixedGroup(discrete=Z(2))
    assert out[1] == MixedGroup(torus_rank=1)
    assert all(out[m].is_trivial() for m in out.degrees() if m not in (0, 1))


def test_divisor_boundary_tetrahedron_fails():
    cells = closure([c for c in closure([(1, 2, 3, 4)]) if len(c) == 3])
    data = resolution_data(3, cells, {c: 1 for c in cells if len(c) < 3})
    with pytest.raises(HypothesisFailed) as info:
        chc1_divisor(data)
    assert info.value.checklist["h2_gamma_vanishes"] is False
    assert info.value.page.entry(2, -1) == DiagGroup(1)


def test_divisor_reducible_fails():
    from chowcalc.calculator import PicData, ResolutionData
    from chowcalc.dualcomplex import Stratum, build_dual_complex
    gamma = build_dual_complex([
        Stratum("A", (1,)), Stratum("B", (2,)),
        Stratum("C1", (1, 2), irreducible=False), Stratum("C2", (1, 2), irreducible=False)])
    groups = {s: PresentedGroup.free(1) for s in gamma.strata}
    restr = {(f, s): int_matrix([[1]]) for s in ("C1", "C2") for f in gamma.face_ids[s]}
    with pytest.raises(HypothesisFailed):
        chc1_divisor(ResolutionData(3, gamma, PicData(groups, restr)))


def test_contractible_claim_is_checked():
    out = chc1_divisor(hollow_triangle(user_contractible=True))
    assert any("contractible" in c for c in out.report.caveats)


# ---------------------------------------------------------------------------
# variety
# ---------------------------------------------------------------------------

def single_vertex(d=3):
    return resolution_data(d, [(1,)], {(1,): 1}, resolution=2, to_components={(1,): [[1, 0]]})


def test_variety_single_vertex():
    out = chc1_variety(single_vertex())
    assert out[1] == MixedGroup(torus_rank=1)
    assert out[0] == MixedGroup(discrete=Z(1))
    assert out[-1].is_trivial() and out[-2].is_trivial() and out[2].is_trivial()
    assert out.report.balanced()


def test_variety_hollow_triangle_shift():
    out = chc1_variety(hollow_triangle(resolution=0, to_components={}))
    assert out[-2] == MixedGroup(discrete=Z(3))
    assert out[-2] == out.divisor[-1]
    assert out[-3].is_trivial()
    # nothing from Pic(X~): degree -1 is all of CHC^1(E), torus piece included
    assert out[-1] == MixedGroup(1, (), Z(3), True)


def test_variety_explicit_matrix_arguments():
    data = resolution_data(3, [(1,)], {(1,): 1})
    out = chc1_variety(data, PresentedGroup.free(2), [[1, 0]])
    assert out[0] == MixedGroup(discrete=Z(1))
    with pytest.raises(ShapeMismatch):
        chc1_variety(data, PresentedGroup.free(2), [[1, 0, 0]])
    with pytest.raises(InvalidResolutionData):
        chc1_variety(data, PresentedGroup.free(2))


def test_variety_rejects_disagreeing_restrictions():
    cells = [(1,), (2,), (1, 2)]
    restr = {((1,), (1, 2)): [[1]], ((2,), (1, 2)): [[1]]}
    data = resolution_data(3, cells, all_ones(cells), restr, resolution=1,
                           to_components={(1,): [[1]], (2,): [[2]]})
    with pytest.raises(D1NotComplex):
        chc1_variety(data)


@settings(max_examples=40)
@given(seeds)
def test_variety_random_inputs(seed):
    data = random_variety_data(random.Random(seed))
    d = data.dimension
    out = chc1_variety(data)
    assert out.report.balanced()
    for m in range(2, 5):
        assert out[m].is_trivial()
    for m in range(-d, 1 - d - 3, -1):
        assert out[m].is_trivial()
    for m in range(-d + 1, -1):
        assert out[m] == out.divisor[m + 1]
    assert out[1] == MixedGroup(torus_rank=1)


@settings(max_examples=60)
@given(seeds)
def test_single_vertex_matches_smooth_2resolution(seed):
    rng = random.Random(seed)
    n, r = rng.randint(0, 4), rng.randint(0, 3)
    R = random_matrix(rng, r, n, -4, 4)
    data = resolution_data(3, [(1,)], {(1,): r}, resolution=n, to_components={(1,): R})
    var = chc1_variety(data)
    two = chc1_smooth_2resolution(PresentedGroup.free(n), PresentedGroup.free(0),
                                  PresentedGroup.free(r), (R, zeros(r, 0)), (1, 1, 1))
    for m in (1, 0, -1):
        assert var[m] == two[m]
    free, torsion = cokernel_oracle(R, r)
    assert var[-1] == MixedGroup(discrete=Z(free, torsion))
    assert var[0] == MixedGroup(discrete=Z(n - q_rank(R, n)))


def test_units_degree_with_several_points():
    # two points, one component each: E is disconnected, the units degree still computes
    data = resolution_data(3, [(1,), (2,)], {(1,): 1, (2,): 1}, resolution=0,
                           to_components={}, singular_points=2,
                           incidence={0: ("E1",), 1: ("E2",)})
    with pytest.raises(HypothesisFailed) as info:
        chc1_variety(data)
    # 1 + k - rank [[1, -1, 0], [1, 0, -1]] = 1
    assert info.value.partial[1] == MixedGroup(torus_rank=1)


def test_incidence_validation():
    with pytest.raises(InvalidResolutionData):
        resolution_data(3, [(1,), (2,)], {(1,): 1, (2,): 1}, singular_points=2)
    with pytest.raises(InvalidResolutionData):
        resolution_data(3, [(1,), (2,), (1, 2)], {(1,): 1, (2,): 1}, singular_points=2,
                        incidence={0: ("E1",), 1: ("E2",)})


def test_input_validation():
    with pytest.raises(InvalidResolutionData):
        resolution_data(1, [(1,)], {(1,): 1})
    with pytest.raises(InvalidResolutionData):
        resolution_data(2, closure([(1, 2, 3)]), {(1,): 1})
    with pytest.raises(InvalidResolutionData):
        resolution_data(2, [(1,), (2,), (1, 2)], {(1,): 1, (2,): 1, (1, 2): 1})
    with pytest.raises(ShapeMismatch):
        resolution_data(3, [(1,), (2,), (1, 2)], all_ones([(1,), (2,), (1, 2)]),
                        {((1,), (1, 2)): [[1, 1]]})


# ---------------------------------------------------------------------------
# surface
# ---------------------------------------------------------------------------

def test_surface_tree_surjection():
    cells = [(1,), (2,), (3,), (1, 2), (2, 3)]
    R = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    comps = {(i,): [R[i - 1]] for i in (1, 2, 3)}
    out = chc1_surface(resolution_data(2, cells, {(i,): 1 for i in (1, 2, 3)},
                                       resolution=4, to_components=comps))
    assert out[0] == MixedGroup(discrete=Z(1))
    assert out[-1].is_trivial()
    assert out[1] == MixedGroup(torus_rank=1)
    assert all(out[m].is_trivial() for m in out.degrees() if m not in (1, 0, -1))


def test_surface_cycle_has_torus():
    cells = cycle_graph(3)
    data = resolution_data(2, cells, {(i,): 1 for i in (1, 2, 3)}, resolution=3,
                           to_components={(i,): [[int(i == j) for j in (1, 2, 3)]]
                                          for i in (1, 2, 3)})
    out = chc1_surface(data)
    assert out.divisor[0].torus_rank == 1
    assert out[-1].torus_rank == 1


def test_surface_single_curve():
    data = resolution_data(2, [(1,)], {(1,): 1}, resolution=1, to_components={(1,): [[1]]})
    out = chc1_surface(data)
    assert out[0].is_trivial() and out[-1].is_trivial()


def test_surface_mode_requirements():
    with pytest.raises(InvalidResolutionData):
        chc1_surface(single_vertex(3))
    data = resolution_data(2, [(1,), (2,)], {(1,): 1, (2,): 1}, resolution=0, to_components={})
    with pytest.raises(InvalidResolutionData):
        chc1_surface(data)


# ---------------------------------------------------------------------------
# smooth 2-resolution
# ---------------------------------------------------------------------------

def test_smooth_2res_identity_maps():
    out = chc1_smooth_2resolution(PresentedGroup.free(1), PresentedGroup.free(1),
                                  PresentedGroup.free(1), ([[1]], [[1]]), (1, 1, 1))
    assert out[0] == MixedGroup(discrete=Z(1))
    assert out[-1].is_trivial()
    assert out[1] == MixedGroup(torus_rank=1)
    assert out.report.balanced()


def test_smooth_2res_zero_maps():
    out = chc1_smooth_2resolution(PresentedGroup.free(1), PresentedGroup.free(1),
                                  PresentedGroup.free(1), ([[0]], [[0]]), (1, 1, 1))
    assert out[0] == MixedGroup(discrete=Z(2))
    assert out[-1] == MixedGroup(discrete=Z(1))


def test_smooth_2res_trivial_groups():
    zero = PresentedGroup.free(0)
    out = chc1_smooth_2resolution(zero, zero, zero, (zeros(0, 0), zeros(0, 0)), (1, 1, 1))
    assert out[1] == MixedGroup(torus_rank=1)
    assert all(out[m].is_trivial() for m in out.degrees() if m != 1)


def test_smooth_2res_shape_checks():
    one = PresentedGroup.free(1)
    with pytest.raises(ShapeMismatch):
        chc1_smooth_2resolution(one, one, one, ([[1, 0]], [[1]]), (1, 1, 1))
    with pytest.raises(ShapeMismatch):
        chc1_smooth_2resolution(one, one, one, ([[1]], [[1]]), (2, 1, 1))
    out = chc1_smooth_2resolution(one, one, one, ([[1]], [[1]]), (2, 1, 1),
                                  units_matrix=[[1, 0, -1]])
    assert out[1] == MixedGroup(torus_rank=2)
