"""Codimension-one cohomological Chow groups from resolution data.

Input is combinatorial: the dual complex of the exceptional divisor
``E``, a presentation of ``Pic`` for every stratum, the restriction maps
between them and, for the variety, ``Pic`` of the resolution together
with its restriction to the components of ``E``.

The divisor is handled by the two-row spectral sequence of ``E^[*]``:

* row ``q = 0`` is the Picard row ``Pic(E^[0]) -> Pic(E^[1]) -> ...``;
* row ``q = -1`` is the units row, the cochains of the dual complex with
  coefficients in ``C*`` (one ``C*`` per stratum).

Group values are :class:`MixedGroup`: a diagonalizable part, a finitely
generated part and a ``graded`` flag for values only known up to an
extension. Results carry a :class:`SequenceReport` recording the rule
that was applied, the hypothesis checklist and the exact sequences used.

Degrees follow ``CHC^1(-, m)``; ``m = 1`` is the units degree and the
total degree of the spectral sequence is ``n = -m``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .abelian import (
    DiagGroup,
    FgAbGroup,
    PresentedGroup,
    direct_sum,
    in_lattice,
    int_matrix,
    lattice_coordinates,
    map_kernel_cokernel,
    matmul,
    rank,
    respects_relations,
    torus_map_ker_coker,
    zeros,
)
from .complexes import (
    CochainComplex,
    NotAComplexError,
    cohomology,
    cohomology_presentation,
)
from .dualcomplex import (
    DualComplex,
    coboundary_complex,
    connected_components,
    gamma_cohomology,
    is_acyclic,
)
from .spectral import GradedPiece, Page, e2_page, two_row_abutment

__all__ = [
    "ChowCalcError",
    "ChowResult",
    "D1NotComplex",
    "ExactSequence",
    "HypothesisFailed",
    "InvalidResolutionData",
    "MixedGroup",
    "PicData",
    "ResolutionData",
    "SequenceReport",
    "ShapeMismatch",
    "ch1_smooth",
    "chc1_divisor",
    "chc1_smooth_2resolution",
    "chc1_surface",
    "chc1_variety",
    "divisor_e2_page",
    "pic_row",
    "units_row",
]

log = logging.getLogger(__name__)

RULE_HIGH = "vanishing: CHC^1(-, m) = 0 for m >= 2"
RULE_LOW = "vanishing: CHC^1(X, m) = 0 for m < 1 - d"
RULE_LOW_E = "vanishing: CHC^1(E, m) = 0 for m < 2 - d"
RULE_SHIFT = "shift: CHC^1(X, m) = CHC^1(E, m + 1) for m <= -2"


class ChowCalcError(Exception):
    pass


class InvalidResolutionData(ChowCalcError, ValueError):
    """Structurally inconsistent input (missing groups, bad incidences)."""


class ShapeMismatch(InvalidResolutionData):
    """A matrix does not fit the generator counts it connects."""


class D1NotComplex(ChowCalcError):
    """The assembled Picard row does not square to zero."""


class HypothesisFailed(ChowCalcError):
    """No computation rule applies; the E2 page is attached instead.

    ``partial`` holds whatever values remain sound without the failed
    hypotheses (for instance the units degree).
    """

    def __init__(self, message: str, checklist: Mapping[str, bool] | None = None,
                 page: Page | None = None, partial: Mapping[int, MixedGroup] | None = None):
        super().__init__(message)
        self.checklist = dict(checklist or {})
        self.page = page
        self.partial = dict(partial or {})


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedGroup:
    """``(C*)^torus_rank x finite x discrete``, possibly only as an associated graded.

    ``finite`` is the torsion chain of the finite diagonalizable part (roots
    of unity). When ``graded`` is true the value is the list ``pieces`` of
    filtration quotients, subobject first, and the extensions are unknown.
    """

    torus_rank: int = 0
    finite: tuple[int, ...] = ()
    discrete: FgAbGroup = FgAbGroup()
    graded: bool = False
    pieces: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        chain = FgAbGroup.from_divisors(0, self.finite).torsion
        object.__setattr__(self, "finite", chain)
        if self.torus_rank < 0:
            raise ValueError("negative torus rank")

    @classmethod
    def of(cls, g: Union[FgAbGroup, DiagGroup, MixedGroup]) -> MixedGroup:
        if isinstance(g, MixedGroup):
            return g
        if isinstance(g, DiagGroup):
            return cls(g.torus_rank, g.finite.torsion)
        return cls(discrete=g)

    @classmethod
    def graded_of(cls, pieces: Sequence[tuple[str, Union[FgAbGroup, DiagGroup, MixedGroup]]]
                  ) -> MixedGroup:
        """Combine filtration quotients (subobject first) into one value."""
        parts = [(label, cls.of(g)) for label, g in pieces]
        nonzero = [(label, g) for label, g in parts if not g.is_trivial()]
        if len(nonzero) <= 1:
            return nonzero[0][1] if nonzero else cls()
        torus = sum(g.torus_rank for _, g in nonzero)
        finite = tuple(d for _, g in nonzero for d in g.finite)
        discrete = FgAbGroup()
        for _, g in nonzero:
            discrete = discrete + g.discrete
        return cls(torus, finite, discrete, True,
                   tuple((label, str(g)) for label, g in nonzero))

    @property
    def rank(self) -> int:
        """Torus rank plus free rank; the additive count used in rank balances."""
        return self.torus_rank + self.discrete.free_rank

    @property
    def torsion_order(self) -> int:
        return prod(self.finite) * self.discrete.torsion_order

    def is_trivial(self) -> bool:
        return self.torus_rank == 0 and not self.finite and self.discrete.is_trivial()

    def _plain(self) -> str:
        parts = []
        if not self.discrete.is_trivial():
            parts.append(str(self.discrete))
        if self.torus_rank or self.finite:
            parts.append(str(DiagGroup(self.torus_rank, FgAbGroup(0, self.finite))))
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        if self.graded:
            return "gr: " + " | ".join(f"{g} <{label}>" for label, g in self.pieces)
        return self._plain()

    def to_dict(self) -> dict:
        out = {
            "torus_rank": self.torus_rank,
            "finite": list(self.finite),
            "free_rank": self.discrete.free_rank,
            "torsion": list(self.discrete.torsion),
            "graded": self.graded,
            "text": str(self),
        }
        if self.graded:
            out["pieces"] = [{"origin": label, "group": g} for label, g in self.pieces]
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> MixedGroup:
        pieces = tuple((p["origin"], p["group"]) for p in d.get("pieces", ()))
        return cls(int(d["torus_rank"]), tuple(d["finite"]),
                   FgAbGroup(int(d["free_rank"]), tuple(d["torsion"])),
                   bool(d["graded"]), pieces)


TRIVIAL_MIXED = MixedGroup()


def ch1_smooth(pi0: int, pic: FgAbGroup, m: int) -> MixedGroup:
    """``CH^1(Y, m)`` of a smooth projective ``Y`` with ``pi0`` components."""
    if pi0 < 1:
        raise ValueError("a smooth variety needs at least one component")
    if m == 1:
        return MixedGroup(torus_rank=pi0)
    if m == 0:
        return MixedGroup.of(pic)
    return TRIVIAL_MIXED


@dataclass(frozen=True)
class ExactSequence:
    """A finite exact sequence ``0 -> t_1 -> ... -> t_k -> 0`` of computed terms."""

    label: str
    terms: tuple[tuple[str, MixedGroup], ...]

    def rank_balance(self) -> int:
        return sum((-1) ** i * g.rank for i, (_, g) in enumerate(self.terms))

    def torsion_consistent(self) -> bool:
        """Necessary torsion conditions for exactness.

        The first term injects, so its torsion order divides the second's
        (skipped when the second contains a torus, whose torsion is
        infinite). When every term is finite the alternating product of
        orders is 1.
        """
        groups = [g for _, g in self.terms]
        if (len(groups) >= 2 and groups[1].torus_rank == 0
                and groups[1].torsion_order % groups[0].torsion_order):
            return False
        if all(g.rank == 0 for g in groups):
            num = prod(g.torsion_order for g in groups[0::2])
            den = prod(g.torsion_order for g in groups[1::2])
            return num == den
        return True

    def __str__(self):
        inner = " -> ".join(f"{name} = {g}" for name, g in self.terms)
        return f"0 -> {inner} -> 0"


@dataclass(frozen=True)
class SequenceReport:
    rule: str
    checklist: Mapping[str, bool]
    sequences: tuple[ExactSequence, ...] = ()
    caveats: tuple[str, ...] = ()

    def balanced(self) -> bool:
        return all(s.rank_balance() == 0 and s.torsion_consistent() for s in self.sequences)


@dataclass(frozen=True)
class ChowResult:
    """Values ``m -> CHC^1(-, m)`` with the rule that produced each one."""

    values: Mapping[int, MixedGroup]
    rules: Mapping[int, str]
    report: SequenceReport
    page: Page | None = None
    divisor: ChowResult | None = None

    def __getitem__(self, m: int) -> MixedGroup:
        return self.values.get(m, TRIVIAL_MIXED)

    def degrees(self) -> list[int]:
        return sorted(self.values, reverse=True)


# ---------------------------------------------------------------------------
# Input data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PicData:
    """Picard presentations and restriction matrices.

    ``restrictions[(face, coface)]`` is the pull-back ``Pic(face) ->
    Pic(coface)`` on generators, shape ``(coface gens, face gens)``; it may
    be omitted when either side has no generators. ``to_components[v]`` is
    the restriction ``Pic(X~) -> Pic(E_v)`` for each vertex ``v``.
    ``continuous`` holds free-form labels for parts of ``Pic`` that are not
    finitely generated; they are echoed, never computed with.
    """

    groups: Mapping[str, PresentedGroup]
    restrictions: Mapping[tuple[str, str], np.ndarray] = field(default_factory=dict)
    resolution: PresentedGroup | None = None
    to_components: Mapping[str, np.ndarray] | None = None
    continuous: Mapping[str, str] = field(default_factory=dict)

    def group(self, sid: str) -> PresentedGroup:
        return self.groups.get(sid, PresentedGroup.free(0))


@dataclass(frozen=True)
class ResolutionData:
    """A resolution ``X~ -> X`` with exceptional divisor ``E`` over ``k`` points.

    ``incidence`` maps each singular point (``0 .. k-1``) to the vertices of
    the dual complex lying over it; it may be omitted when ``k = 1``.
    """

    dimension: int
    gamma: DualComplex
    pic: PicData
    singular_points: int = 1
    irreducible_intersections: bool | None = None
    user_contractible: bool | None = None
    incidence: Mapping[int, tuple[str, ...]] | None = None

    def __post_init__(self):
        d = self.dimension
        if d < 2:
            raise InvalidResolutionData(f"dimension must be at least 2, got {d}")
        if not self.gamma.cells or not self.gamma.vertices():
            raise InvalidResolutionData("the dual complex is empty")
        if self.gamma.dimension > d - 1:
            raise InvalidResolutionData(
                f"a {self.gamma.dimension}-cell needs {self.gamma.dimension + 1} "
                f"components to meet, impossible in dimension {d}")
        if self.singular_points < 1:
            raise InvalidResolutionData("at least one singular point is required")
        if self.irreducible_intersections and not self.gamma.all_irreducible:
            raise InvalidResolutionData(
                "irreducible_intersections is set but some strata are reducible")
        self._check_pic()
        object.__setattr__(self, "incidence", self._resolve_incidence())

    def _check_pic(self):
        gamma, pic = self.gamma, self.pic
        for sid in pic.groups:
            if sid not in gamma.strata:
                raise InvalidResolutionData(f"Picard data for unknown stratum {sid!r}")
        for sid, s in gamma.strata.items():
            if sid not in pic.groups and s.dim < self.dimension - 1:
                raise InvalidResolutionData(f"stratum {sid!r} has no Picard group")
            if s.dim == self.dimension - 1 and not pic.group(sid).invariants().is_trivial():
                raise InvalidResolutionData(
                    f"stratum {sid!r} is a point; its Picard group must be trivial")
        for (face, coface), M in pic.restrictions.items():
            for sid in (face, coface):
                if sid not in gamma.strata:
                    raise InvalidResolutionData(f"restriction names unknown stratum {sid!r}")
            if face not in gamma.face_ids[coface]:
                raise InvalidResolutionData(f"{face!r} is not a face of {coface!r}")
            src, dst = pic.group(face), pic.group(coface)
            M = np.asarray(M, dtype=object)
            if M.shape != (dst.generators, src.generators):
                raise ShapeMismatch(
                    f"restriction {face} -> {coface} has shape {M.shape}, "
                    f"expected {(dst.generators, src.generators)}")
            if not respects_relations(M, src, dst):
                raise InvalidResolutionData(
                    f"restriction {face} -> {coface} does not respect relations")
        for coface in gamma.strata:
            for face in set(gamma.face_ids[coface]):
                if (face, coface) in pic.restrictions:
                    continue
                if pic.group(face).generators and pic.group(coface).generators:
                    raise InvalidResolutionData(
                        f"missing restriction {face} -> {coface}")
        if pic.to_components is not None:
            for v in pic.to_components:
                if v not in gamma.vertices():
                    raise InvalidResolutionData(
                        f"restriction to {v!r}, which is not a component of E")

    def _resolve_incidence(self):
        verts = self.gamma.vertices()
        k = self.singular_points
        if self.incidence is None:
            if k != 1:
                raise InvalidResolutionData(
                    "with several singular points the incidence must be given")
            return {0: tuple(verts)}
        inc = {int(p): tuple(vs) for p, vs in self.incidence.items()}
        if sorted(inc) != list(range(k)):
            raise InvalidResolutionData(f"incidence must list points 0..{k - 1}")
        seen = [v for vs in inc.values() for v in vs]
        if sorted(seen) != sorted(verts):
            raise InvalidResolutionData(
                "every component of E must lie over exactly one singular point")
        for p, vs in inc.items():
            if not vs:
                raise InvalidResolutionData(f"no component of E lies over point {p}")
        owner = {v: p for p, vs in inc.items() for v in vs}
        for e in self.gamma.edges():
            a, b = self.gamma.face_ids[e]
            if owner[a] != owner[b]:
                raise InvalidResolutionData(
                    f"edge {e!r} joins components over different singular points")
        return inc

    def components_matrix(self) -> np.ndarray:
        """``Pic(X~) -> Pic(E^[0])`` stacked in vertex order."""
        res = self.pic.resolution
        if res is None or self.pic.to_components is None:
            raise InvalidResolutionData("Pic of the resolution and its restrictions are required")
        blocks = []
        for v in self.gamma.vertices():
            g = self.pic.group(v)
            M = self.pic.to_components.get(v)
            if M is None:
                if g.generators and res.generators:
                    raise InvalidResolutionData(f"missing restriction X~ -> {v}")
                M = zeros(g.generators, res.generators)
            blocks.append(int_matrix(M, rows=g.generators, cols=res.generators))
        total = sum(b.shape[0] for b in blocks)
        return int_matrix(np.vstack(blocks), rows=total, cols=res.generators) if blocks \
            else zeros(0, res.generators)


# ---------------------------------------------------------------------------
# Rows of the E1 page
# ---------------------------------------------------------------------------

def pic_row(data: ResolutionData) -> CochainComplex:
    """``Pic(E^[0]) -> Pic(E^[1]) -> ...`` with alternating sums of restrictions.

    Raises:
        D1NotComplex: the restriction matrices do not give ``d o d = 0``.
    """
    gamma, pic = data.gamma, data.pic
    terms = [direct_sum([pic.group(s) for s in cells]) for cells in gamma.cells]
    offsets = []
    for cells in gamma.cells:
        off, acc = {}, 0
        for s in cells:
            off[s] = acc
            acc += pic.group(s).generators
        offsets.append(off)
    diffs = []
    for t in range(gamma.dimension):
        M = zeros(terms[t + 1].generators, terms[t].generators)
        for r in gamma.cells[t + 1]:
            rows = slice(offsets[t + 1][r], offsets[t + 1][r] + pic.group(r).generators)
            for j, c in enumerate(gamma.face_ids[r]):
                R = pic.restrictions.get((c, r))
                if R is None:
                    continue
                cols = slice(offsets[t][c], offsets[t][c] + pic.group(c).generators)
                M[rows, cols] = M[rows, cols] + (-1) ** j * int_matrix(R)
        diffs.append(M)
    try:
        return CochainComplex(0, tuple(terms), tuple(diffs))
    except NotAComplexError as exc:
        raise D1NotComplex(f"Picard row is not a complex: {exc}") from exc


def units_row(gamma: DualComplex) -> CochainComplex:
    """Cochains of ``gamma`` read as character lattices: ``C^*(gamma) (x) C*``.

    Raises:
        HypothesisFailed: some stratum is reducible, so the units of
            ``E^[t]`` are not one ``C*`` per cell.
    """
    if not gamma.all_irreducible:
        raise HypothesisFailed(
            "units row needs irreducible intersections",
            {"irreducible_intersections": False})
    C = coboundary_complex(gamma)
    return CochainComplex(C.min_degree, C.terms, C.differentials, torus=True)


def divisor_e2_page(data: ResolutionData) -> Page:
    """E2 page of ``E^[*]``; the units row is left out when strata are reducible."""
    rows = {0: pic_row(data)}
    if data.gamma.all_irreducible:
        rows[-1] = units_row(data.gamma)
    return e2_page(Page.from_rows(rows))


# ---------------------------------------------------------------------------
# Divisor
# ---------------------------------------------------------------------------

def _checklist(data: ResolutionData) -> dict[str, bool]:
    g = data.gamma
    return {
        "irreducible_intersections": g.all_irreducible,
        "connected": gamma_cohomology(g, 0) == FgAbGroup(1),
        "h2_gamma_vanishes": gamma_cohomology(g, 2).is_trivial(),
        "acyclic": is_acyclic(g),
        "user_contractible": bool(data.user_contractible),
    }


def _label(p: GradedPiece) -> str:
    return f"E2^({p.p},{p.q})"


def _value(pieces: Iterable[GradedPiece]) -> MixedGroup:
    return MixedGroup.graded_of([(_label(p), p.group) for p in pieces])


def chc1_divisor(data: ResolutionData) -> ChowResult:
    """``CHC^1(E, m)`` for the exceptional divisor.

    Applies when ``gamma`` is acyclic (any dimension), or when ``d <= 3``
    and ``gamma`` is connected with ``H^2(gamma) = 0``. In both cases
    every ``d2`` vanishes and each degree is read off the E2 page.

    Raises:
        HypothesisFailed: neither rule applies; the E2 page is attached.
    """
    d = data.dimension
    checks = _checklist(data)
    page = divisor_e2_page(data)
    if not checks["irreducible_intersections"]:
        raise HypothesisFailed("dual complex has reducible intersections", checks, page)
    if checks["acyclic"]:
        rule = "divisor: acyclic dual complex, CHC^1(E, m) = H^-m(Pic row) for m <= 0"
    elif d <= 3 and checks["connected"] and checks["h2_gamma_vanishes"]:
        rule = "divisor: two-row degeneration, H^2(gamma) = 0"
    else:
        raise HypothesisFailed(
            "dual complex is neither acyclic nor (d <= 3, connected, H^2 = 0)", checks, page)
    ab = two_row_abutment(page, d)
    if not ab.degenerate:
        raise HypothesisFailed("d2 may be nonzero: " + "; ".join(ab.caveats), checks, page)
    caveats = []
    if data.user_contractible and not checks["acyclic"]:
        caveats.append("contractible asserted by input but the dual complex is not acyclic")
    values, rules, sequences = {}, {}, []
    for m in range(1, 1 - d - 1, -1):
        if m < 2 - d:
            values[m], rules[m] = TRIVIAL_MIXED, RULE_LOW_E
            continue
        pieces = ab.pieces(-m)
        values[m] = _value(pieces)
        rules[m] = "E2 pieces " + ", ".join(_label(p) for p in pieces)
        if values[m].graded:
            sub, quot = pieces
            sequences.append(ExactSequence(
                f"filtration of CHC^1(E, {m})",
                ((_label(sub), MixedGroup.of(sub.group)), (f"CHC^1(E,{m})", values[m]),
                 (_label(quot), MixedGroup.of(quot.group)))))
    values[2], rules[2] = TRIVIAL_MIXED, RULE_HIGH
    for n, pieces in ab.degrees.items():
        if not all(p.group.is_trivial() for p in pieces) and not (2 - d <= -n <= 1):
            caveats.append(f"nonzero E2 piece in total degree {n}, outside the expected range")
    if checks["acyclic"]:
        row = pic_row(data)
        for m in range(2 - d, 1):
            if MixedGroup.of(cohomology(row, -m)) != values[m]:
                caveats.append(f"degree {m} differs from H^{-m} of the Picard row")
    continuous = sorted(data.pic.continuous)
    if continuous:
        caveats.append("non-finitely-generated Picard parts ignored: "
                       + ", ".join(f"{s}: {data.pic.continuous[s]}" for s in continuous))
    report = SequenceReport(rule, checks, tuple(sequences), tuple(caveats))
    log.debug("divisor rule %s", rule)
    return ChowResult(dict(sorted(values.items(), reverse=True)), rules, report, page)


# ---------------------------------------------------------------------------
# Variety
# ---------------------------------------------------------------------------

def _units_matrix(data: ResolutionData) -> np.ndarray:
    """Exponents of ``(C*)^(1+k) -> (C*)^pi0(E)``: ``X~`` enters with +1, points with -1."""
    comps = connected_components(data.gamma)
    owner = {v: p for p, vs in data.incidence.items() for v in vs}
    k = data.singular_points
    M = zeros(len(comps), 1 + k)
    for r, c in enumerate(comps):
        M[r, 0] = 1
        M[r, 1 + owner[c.vertices()[0]]] -= 1
    return M


def _units_degree(data: ResolutionData) -> tuple[MixedGroup, MixedGroup, ExactSequence]:
    M = _units_matrix(data)
    ker, coker = torus_map_ker_coker(M)
    k = data.singular_points
    seq = ExactSequence("units", (
        ("CHC^1(X,1)", MixedGroup.of(ker)),
        (f"CH^1(X~,1) + CH^1(X_sing,1)", MixedGroup(torus_rank=1 + k)),
        ("CHC^1(E,1)", MixedGroup(torus_rank=M.shape[0])),
        ("coker", MixedGroup.of(coker))))
    return MixedGroup.of(ker), MixedGroup.of(coker), seq


def _partial_units(data: ResolutionData) -> dict[int, MixedGroup]:
    try:
        return {1: _units_degree(data)[0]}
    except ChowCalcError:
        return {}


def chc1_variety(data: ResolutionData, pic_resolution: PresentedGroup | None = None,
                 restrictions_to_components=None) -> ChowResult:
    """``CHC^1(X, m)`` for ``X`` with isolated singularities.

    ``m = 1`` is the kernel of the units map; ``m = 0`` and ``m = -1`` are
    the kernel and cokernel of ``Pic(X~) -> E2^(0,0)``, the discrete
    quotient of ``CHC^1(E)``; the torus part ``E2^(1,-1)`` of ``CHC^1(E)``
    enters ``CHC^1(X, -1)`` as a graded piece. Lower degrees follow the
    shift ``CHC^1(X, m) = CHC^1(E, m + 1)``.

    Raises:
        HypothesisFailed: the divisor rules do not apply (including
            disconnected ``E``); ``partial`` carries the units degree.
        ShapeMismatch: the restriction matrix does not fit.
    """
    d = data.dimension
    res = pic_resolution if pic_resolution is not None else data.pic.resolution
    if res is None:
        raise InvalidResolutionData("Pic of the resolution is required")
    e0 = direct_sum([data.pic.group(v) for v in data.gamma.vertices()])
    if restrictions_to_components is None:
        if pic_resolution is not None and data.pic.resolution is not pic_resolution:
            raise InvalidResolutionData("restrictions to the components are required")
        R = data.components_matrix()
    else:
        R = int_matrix(restrictions_to_components)
    if R.shape != (e0.generators, res.generators):
        raise ShapeMismatch(
            f"restriction to components has shape {R.shape}, "
            f"expected {(e0.generators, res.generators)}")
    if not respects_relations(R, res, e0):
        raise InvalidResolutionData("restriction to components does not respect relations")

    try:
        div = chc1_divisor(data)
    except HypothesisFailed as exc:
        exc.partial.update(_partial_units(data))
        raise
    checks = dict(div.report.checklist)
    caveats = list(div.report.caveats)

    units, units_coker, units_seq = _units_degree(data)
    if units.torus_rank != 1 or units.finite:
        caveats.append(f"units degree is {units}, not a rank-one torus")

    row = pic_row(data)
    H, Z = cohomology_presentation(row, 0)
    if not in_lattice(matmul(row.differential(0), R), row.term(1).relations):
        raise D1NotComplex("restrictions of Pic(X~) disagree on double intersections")
    X = lattice_coordinates(Z, R)
    if X is None:
        raise D1NotComplex("restrictions of Pic(X~) do not land in E2^(0,0)")
    ker, coker = map_kernel_cokernel(X, res, H)

    e_zero = div[0]
    e2_00 = MixedGroup.of(H.invariants())
    e2_1m1 = MixedGroup.of(div.page.entry(1, -1))
    if not e2_1m1.is_trivial() and rank(R):
        caveats.append("the image of Pic(X~) may meet H^1(gamma) (x) C*; "
                       "CHC^1(X, -1) is reported as a graded value")

    values, rules = {}, {}
    values[1], rules[1] = units, "kernel of the units map"
    values[0] = MixedGroup.graded_of([("coker units", units_coker), ("ker Pic", ker)])
    rules[0] = "kernel of Pic(X~) -> E2^(0,0)"
    values[-1] = MixedGroup.graded_of([("E2^(1,-1)", e2_1m1), ("coker Pic", coker)])
    rules[-1] = "cokernel of Pic(X~) -> E2^(0,0)"
    for m in range(-2, -d - 1, -1):
        if m < 1 - d:
            values[m], rules[m] = TRIVIAL_MIXED, RULE_LOW
        else:
            values[m], rules[m] = div[m + 1], RULE_SHIFT
    values[2], rules[2] = TRIVIAL_MIXED, RULE_HIGH
    if not div[1 - d].is_trivial():
        caveats.append(f"CHC^1(E, {1 - d}) is nonzero but CHC^1(X, {-d}) must vanish")

    four = ExactSequence("four-term", (
        ("CHC^1(X)", values[0]),
        ("CH^1(X~)", MixedGroup.of(res.invariants())),
        ("CHC^1(E)", e_zero),
        ("CHC^1(X,-1)", values[-1])))
    quotient = ExactSequence("discrete quotient", (
        ("ker", MixedGroup.of(ker)),
        ("CH^1(X~)", MixedGroup.of(res.invariants())),
        ("E2^(0,0)", e2_00),
        ("coker", MixedGroup.of(coker))))
    rule = "variety: four-term sequence through CHC^1(E); " + div.report.rule
    report = SequenceReport(rule, checks, (units_seq, four, quotient) + div.report.sequences,
                            tuple(caveats))
    return ChowResult(dict(sorted(values.items(), reverse=True)), rules, report, div.page, div)


def chc1_surface(data: ResolutionData) -> ChowResult:
    """Normal surfaces: the variety computation with a connected dual graph.

    Raises:
        InvalidResolutionData: ``d != 2`` or the dual complex is not a
            connected graph.
    """
    if data.dimension != 2:
        raise InvalidResolutionData("surface mode needs dimension 2")
    if not data.gamma.is_graph():
        raise InvalidResolutionData("surface mode needs a dual graph")
    if len(connected_components(data.gamma)) != 1:
        raise InvalidResolutionData("surface mode needs a connected dual graph")
    out = chc1_variety(data)
    rep = out.report
    rule = "surface: dual graph sequence; " + rep.rule
    return ChowResult(out.values, out.rules,
                      SequenceReport(rule, rep.checklist, rep.sequences, rep.caveats),
                      out.page, out.divisor)


def chc1_smooth_2resolution(pic_xtilde: PresentedGroup, pic_xsing: PresentedGroup,
                            pic_e: PresentedGroup, maps: tuple, units_pi0: tuple[int, int, int],
                            units_matrix=None) -> ChowResult:
    """One-step hyperresolution ``E => X~ + X_sing`` with ``E`` and ``X_sing`` smooth.

    ``maps`` is the pair of restrictions ``Pic(X~) -> Pic(E)`` and
    ``Pic(X_sing) -> Pic(E)``. ``units_pi0`` counts components of ``X~``,
    ``X_sing`` and ``E``; the units map is built from it when ``X~`` is
    connected and ``E`` either has one component per component of
    ``X_sing`` or ``X_sing`` is connected. Otherwise pass ``units_matrix``
    (exponents, shape ``(pi0 E, pi0 X~ + pi0 X_sing)``).

    Raises:
        ShapeMismatch: a matrix does not fit its groups.
    """
    a, b, c = units_pi0
    if min(a, b, c) < 1:
        raise ShapeMismatch("component counts must be positive")
    if units_matrix is None:
        if a != 1 or not (b == 1 or b == c):
            raise ShapeMismatch("units map is ambiguous; pass units_matrix")
        U = zeros(c, 1 + b)
        for j in range(c):
            U[j, 0] = 1
            U[j, 1 + (j if b == c else 0)] -= 1
    else:
        U = int_matrix(units_matrix)
        if U.shape != (c, a + b):
            raise ShapeMismatch(f"units matrix has shape {U.shape}, expected {(c, a + b)}")
    r1, r2 = (int_matrix(m) for m in maps)
    for name, M, src in (("X~", r1, pic_xtilde), ("X_sing", r2, pic_xsing)):
        if M.shape != (pic_e.generators, src.generators):
            raise ShapeMismatch(
                f"restriction {name} -> E has shape {M.shape}, "
                f"expected {(pic_e.generators, src.generators)}")
    block = int_matrix(np.hstack([r1, -r2]), rows=pic_e.generators,
                       cols=r1.shape[1] + r2.shape[1])
    src = direct_sum([pic_xtilde, pic_xsing])
    if not respects_relations(block, src, pic_e):
        raise InvalidResolutionData("restrictions do not respect relations")
    ker, coker = map_kernel_cokernel(block, src, pic_e)
    uker, ucoker = torus_map_ker_coker(U)
    values = {
        2: TRIVIAL_MIXED,
        1: MixedGroup.of(uker),
        0: MixedGroup.graded_of([("coker units", ucoker), ("ker Pic", ker)]),
        -1: MixedGroup.of(coker),
        -2: TRIVIAL_MIXED,
    }
    rules = {2: RULE_HIGH, 1: "kernel of the units map",
             0: "kernel of [r1, -r2]", -1: "cokernel of [r1, -r2]",
             -2: "vanishing: smooth pieces have no negative degrees"}
    seq = ExactSequence("long exact sequence", (
        ("CHC^1(X,1)", values[1]),
        ("CH^1(X0,1)", MixedGroup(torus_rank=a + b)),
        ("CH^1(E,1)", MixedGroup(torus_rank=c)),
        ("CHC^1(X)", values[0]),
        ("CH^1(X0)", MixedGroup.of(src.invariants())),
        ("CH^1(E)", MixedGroup.of(pic_e.invariants())),
        ("CHC^1(X,-1)", values[-1])))
    report = SequenceReport("smooth 2-resolution: kernel/cokernel of restrictions",
                            {"smooth_strata": True}, (seq,))
    return ChowResult(values, rules, report)
