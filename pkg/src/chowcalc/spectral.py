"""E1 and E2 pages of the column-filtration spectral sequence.

For a fourth-quadrant double complex ``D`` the first page is the vertical
cohomology, ``E1[p, q] = H^q(column p)``, with ``d1`` induced by the
horizontal maps; ``E2`` is the cohomology of the rows of ``E1``. The
sequence converges to ``H^(p+q)(Tot D)``.

Only two-row pages are taken further. With rows ``q = 0`` and ``q = -1``
the sole higher differential is ``d2: E2[t, 0] -> E2[t+2, -1]``, so when
each of those vanishes for degree reasons ``E2 = E_infinity`` and every
total degree ``n`` has the two graded pieces ``E2[n+1, -1]`` (sub) and
``E2[n, 0]`` (quotient).

Rows can carry torus coefficients (``CochainComplex.torus``); their
entries are :class:`~chowcalc.abelian.DiagGroup` values and they never
exchange differentials with integral rows here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .abelian import (
    DiagGroup,
    FgAbGroup,
    PresentedGroup,
    lattice_coordinates,
    matmul,
    zeros,
)
from .complexes import (
    CochainComplex,
    DoubleComplex,
    NotAComplexError,
    cohomology,
    cohomology_presentation,
    torus_cohomology,
)

__all__ = [
    "AbutmentReport",
    "GradedPiece",
    "Page",
    "e1_page",
    "e2_page",
    "two_row_abutment",
]

Group = Union[FgAbGroup, DiagGroup]


@dataclass(frozen=True)
class Page:
    """One page of a spectral sequence.

    On page 1 the rows are stored as complexes (``row_complexes``), so the
    entries keep their presentations and ``d1`` is available as integer
    matrices. Page 2 only records isomorphism classes.
    """

    index: int
    entries: Mapping[tuple[int, int], Group]
    row_complexes: Mapping[int, CochainComplex] = field(default_factory=dict)
    torus_rows: frozenset = frozenset()

    def __post_init__(self):
        for p, q in self.entries:
            if p < 0 or q > 0:
                raise ValueError(f"entry ({p}, {q}) outside the fourth quadrant")

    @classmethod
    def from_rows(cls, rows: Mapping[int, CochainComplex]) -> Page:
        """Assemble an E1 page from its row complexes (degree = column ``p``)."""
        entries = {}
        for q, C in rows.items():
            for p in C.degrees():
                g = C.term(p)
                entries[(p, q)] = DiagGroup(g.generators) if C.torus else g.invariants()
        torus = frozenset(q for q, C in rows.items() if C.torus)
        return cls(1, entries, dict(rows), torus)

    def entry(self, p: int, q: int) -> Group:
        if (p, q) in self.entries:
            return self.entries[(p, q)]
        return DiagGroup() if q in self.torus_rows else FgAbGroup()

    def rows(self) -> list[int]:
        return sorted({q for _, q in self.entries})

    def columns(self) -> list[int]:
        return sorted({p for p, _ in self.entries})

    def differential(self, p: int, q: int) -> np.ndarray:
        """``d1`` out of ``(p, q)``; page 1 only."""
        if self.index != 1:
            raise ValueError("only page 1 stores differentials")
        return self.row_complexes[q].differential(p)

    def presentation(self, p: int, q: int) -> PresentedGroup:
        if self.index != 1:
            raise ValueError("only page 1 stores presentations")
        return self.row_complexes[q].term(p)

    def nonzero(self) -> dict[tuple[int, int], Group]:
        return {k: g for k, g in sorted(self.entries.items()) if not g.is_trivial()}


def e1_page(D: DoubleComplex) -> Page:
    """Vertical cohomology of each column with the induced horizontal ``d1``."""
    pres: dict[tuple[int, int], PresentedGroup] = {}
    cocycles: dict[tuple[int, int], np.ndarray] = {}
    for p in D.columns():
        col = D.column(p)
        for q in col.degrees():
            pres[(p, q)], cocycles[(p, q)] = cohomology_presentation(col, q)
    rows = {}
    for q in D.rows():
        ps = sorted(p for (p, qq) in pres if qq == q)
        lo, hi = ps[0], ps[-1]
        terms, diffs = [], []
        for p in range(lo, hi + 1):
            terms.append(pres.get((p, q), PresentedGroup.free(0)))
        for p in range(lo, hi):
            src, dst = (p, q), (p + 1, q)
            if src not in pres or dst not in pres:
                diffs.append(None)
                continue
            image = matmul(D.h(p, q), cocycles[src])
            coords = lattice_coordinates(cocycles[dst], image)
            if coords is None:
                raise NotAComplexError(f"horizontal map at {src} does not preserve cocycles")
            diffs.append(coords)
        diffs = [d if d is not None else zeros(terms[i + 1].generators, terms[i].generators)
                 for i, d in enumerate(diffs)]
        rows[q] = CochainComplex(lo, tuple(terms), tuple(diffs))
    return Page.from_rows(rows)


def e2_page(P: Page) -> Page:
    """Cohomology of each row of an E1 page."""
    if P.index != 1:
        raise ValueError("e2_page expects an E1 page")
    entries = {}
    for q, C in P.row_complexes.items():
        for p in C.degrees():
            entries[(p, q)] = torus_cohomology(C, p) if C.torus else cohomology(C, p)
    return Page(2, entries, {}, P.torus_rows)


@dataclass(frozen=True)
class GradedPiece:
    p: int
    q: int
    group: Group

    def __str__(self):
        return f"{self.group} [E2^({self.p},{self.q})]"


@dataclass(frozen=True)
class AbutmentReport:
    """Graded pieces of ``H^n`` for each total degree ``n``.

    ``degrees[n]`` lists pieces in filtration order: the subobject
    ``E[n+1, -1]`` first, then the quotient ``E[n, 0]``. When
    ``degenerate`` is false the pieces are ``E2`` entries only and say
    nothing definite about the abutment.
    """

    degrees: Mapping[int, tuple[GradedPiece, ...]]
    degenerate: bool
    caveats: tuple[str, ...] = ()
    page: Page | None = None
    blocking: tuple[tuple[int, int], ...] = ()

    def pieces(self, n: int) -> tuple[GradedPiece, ...]:
        return self.degrees.get(n, ())

    def nonzero_pieces(self, n: int) -> tuple[GradedPiece, ...]:
        return tuple(x for x in self.pieces(n) if not x.group.is_trivial())


def two_row_abutment(P2: Page, d: int) -> AbutmentReport:
    """Read off the abutment of a two-row ``E2`` page.

    ``d`` is the dimension of the ambient variety; total degrees
    ``-1 .. d - 1`` are always reported. A ``d2`` out of ``(t, 0)`` is
    treated as forced zero when its source or its target is trivial.

    Raises:
        ValueError: the page has entries outside rows ``0`` and ``-1``.
    """
    if P2.index != 2:
        raise ValueError("two_row_abutment expects an E2 page")
    extra = [k for k, g in P2.entries.items() if k[1] not in (0, -1) and not g.is_trivial()]
    if extra:
        raise ValueError(f"entries outside rows 0 and -1: {sorted(extra)}")
    blocking = []
    for (p, q), g in sorted(P2.entries.items()):
        if q == 0 and not g.is_trivial() and not P2.entry(p + 2, -1).is_trivial():
            blocking.append((p, q))
    degenerate = not blocking
    totals = {p + q for p, q in P2.entries}
    lo = min([-1, *totals])
    hi = max([d - 1, *totals])
    degrees = {}
    for n in range(lo, hi + 1):
        degrees[n] = (GradedPiece(n + 1, -1, P2.entry(n + 1, -1)),
                      GradedPiece(n, 0, P2.entry(n, 0)))
    caveats = ()
    if not degenerate:
        caveats = tuple(
            f"indeterminate: d2 from E2^({p},0) to E2^({p + 2},-1) may be nonzero"
            for p, _ in blocking)
    return AbutmentReport(degrees, degenerate, caveats, P2, tuple(blocking))
