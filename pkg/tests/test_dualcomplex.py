import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowcalc.abelian import FgAbGroup
from chowcalc.dualcomplex import (
    AmbiguousFace,
    DualComplexError,
    DuplicateId,
    MissingFace,
    Stratum,
    build_dual_complex,
    coboundary_complex,
    connected_components,
    export_dot,
    gamma_cohomology,
    is_acyclic,
)

from generators import closure, random_connected_graph, random_downward_closed, strata_from_cells

seeds = st.integers(0, 2 ** 32 - 1)


def complex_of(cells):
    return build_dual_complex(strata_from_cells(cells))


def test_hollow_triangle():
    g = complex_of([(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)])
    assert gamma_cohomology(g, 0) == FgAbGroup(1)
    assert gamma_cohomology(g, 1) == FgAbGroup(1)
    assert not is_acyclic(g)
    assert g.euler_characteristic() == 0


def test_solid_simplex_is_acyclic():
    g = complex_of(closure([(1, 2, 3)]))
    assert is_acyclic(g)
    assert gamma_cohomology(g, 2) == FgAbGroup()


def test_edge_coboundary_sign():
    g = complex_of([(1,), (2,), (1, 2)])
    d = coboundary_complex(g).differential(0)
    # face_0 omits index 1 (vertex 2) with sign +, face_1 omits index 2 (vertex 1) with sign -
    assert np.array_equal(d, np.array([[-1, 1]], dtype=object))


def doubled_edge():
    return build_dual_complex([
        Stratum("A", (1,)), Stratum("B", (2,)),
        Stratum("C1", (1, 2), irreducible=False), Stratum("C2", (1, 2), irreducible=False),
    ])


def test_parallel_edges():
    g = doubled_edge()
    assert g.edges() == ("C1", "C2")
    assert gamma_cohomology(g, 1) == FgAbGroup(1)
    assert not g.all_irreducible
    dot = export_dot(g)
    assert dot.count(" -- ") == 2
    assert '"A" -- "B" [label="C1"];' in dot
    assert dot.startswith("graph dual_complex {")


def test_disjoint_vertices():
    g = complex_of([(1,), (2,)])
    comps = connected_components(g)
    assert [c.vertices() for c in comps] == [("E1",), ("E2",)]
    assert gamma_cohomology(g, 0) == FgAbGroup(2)


def test_validation_errors():
    with pytest.raises(MissingFace):
        complex_of([(1,), (1, 2)])
    with pytest.raises(DuplicateId):
        build_dual_complex([Stratum("A", (1,)), Stratum("A", (2,))])
    with pytest.raises(AmbiguousFace):
        build_dual_complex([
            Stratum("A", (1,), irreducible=False), Stratum("A2", (1,), irreducible=False),
            Stratum("B", (2,)), Stratum("E", (1, 2)),
        ])
    with pytest.raises(DualComplexError):
        build_dual_complex([Stratum("A", (1,)), Stratum("A2", (1,))])
    with pytest.raises(DualComplexError):
        Stratum("X", (1, 1))


def test_named_face_resolves_reducible_vertex():
    g = build_dual_complex([
        Stratum("A", (1,), irreducible=False), Stratum("A2", (1,), irreducible=False),
        Stratum("B", (2,)), Stratum("E", (1, 2), faces={2: "A2"}),
    ])
    assert g.face_ids["E"] == ("B", "A2")
    assert gamma_cohomology(g, 0) == FgAbGroup(2)
    with pytest.raises(MissingFace):
        build_dual_complex([Stratum("A", (1,)), Stratum("B", (2,)),
                            Stratum("E", (1, 2), faces={2: "B"})])


@settings(max_examples=100)
@given(seeds)
def test_input_order_does_not_matter(seed):
    rng = random.Random(seed)
    cells = random_downward_closed(rng)
    strata = strata_from_cells(cells)
    shuffled = strata[:]
    rng.shuffle(shuffled)
    a, b = build_dual_complex(strata), build_dual_complex(shuffled)
    assert a.cells == b.cells
    assert export_dot(a) == export_dot(b)


@settings(max_examples=100)
@given(seeds)
def test_relabelling_components_preserves_cohomology(seed):
    rng = random.Random(seed)
    cells = random_downward_closed(rng)
    n = max(i for c in cells for i in c)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    relabelled = [tuple(sorted(perm[i - 1] for i in c)) for c in cells]
    a, b = complex_of(cells), complex_of(relabelled)
    for t in range(a.dimension + 1):
        assert gamma_cohomology(a, t) == gamma_cohomology(b, t)


@settings(max_examples=100)
@given(seeds)
def test_euler_characteristic_and_components(seed):
    g = complex_of(random_downward_closed(random.Random(seed)))
    ranks = [gamma_cohomology(g, t).free_rank for t in range(g.dimension + 1)]
    assert g.euler_characteristic() == sum((-1) ** t * r for t, r in enumerate(ranks))
    assert ranks[0] == len(connected_components(g))


@settings(max_examples=60)
@given(seeds)
def test_cone_is_acyclic(seed):
    base = random_connected_graph(random.Random(seed), 6)
    cells = closure([(1,) + tuple(i + 1 for i in c) for c in base])
    assert is_acyclic(complex_of(cells))
