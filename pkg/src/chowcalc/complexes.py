"""Bounded cochain complexes of presented abelian groups.

Every term is a :class:`~chowcalc.abelian.PresentedGroup` ``Z^n / im(R)``
and every differential is an integer matrix on generators. A differential
must send relations into relations, and ``d o d`` must land in the
relations of the target; both are checked when a complex is built.

Sign conventions, fixed once here:

* ``shift(C, k)`` has ``term_t = C.term_{t+k}`` and differential
  ``(-1)^k d``.
* ``mapping_cone(f)`` is the cone already shifted by ``[-1]``:
  ``term_t = source^t + target^(t-1)`` with differential
  ``(a, b) |-> (d a, -f a - d b)``, so cohomology fits in
  ``... -> H^t(cone) -> H^t(source) -> H^t(target) -> H^(t+1)(cone) -> ...``.
* Double complexes store commuting squares; :func:`total_complex` uses
  ``d_horizontal + (-1)^p d_vertical``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .abelian import (
    DiagGroup,
    FgAbGroup,
    PresentedGroup,
    direct_sum,
    in_lattice,
    int_matrix,
    kernel_basis,
    lattice_basis,
    lattice_coordinates,
    matmul,
    subquotient,
    zeros,
)

__all__ = [
    "ChainMap",
    "CochainComplex",
    "DoubleComplex",
    "NotAComplexError",
    "cohomology",
    "cohomology_presentation",
    "euler_characteristic",
    "hstack",
    "mapping_cone",
    "shift",
    "torus_cohomology",
    "total_complex",
]


class NotAComplexError(ValueError):
    """A differential squares to something nonzero or ignores relations."""


def hstack(blocks: Sequence[np.ndarray], rows: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return zeros(rows, 0)
    return np.hstack(blocks)


def _as_group(g) -> PresentedGroup:
    if isinstance(g, PresentedGroup):
        return g
    return PresentedGroup.free(int(g))


_ZERO = PresentedGroup.free(0)


def _check_map(M, src: PresentedGroup, dst: PresentedGroup, what: str) -> np.ndarray:
    M = int_matrix(M, rows=dst.generators, cols=src.generators) if not isinstance(M, np.ndarray) \
        else int_matrix(M)
    if M.shape != (dst.generators, src.generators):
        raise NotAComplexError(
            f"{what}: shape {M.shape}, expected {(dst.generators, src.generators)}")
    if src.relations.shape[1] and not in_lattice(matmul(M, src.relations), dst.relations):
        raise NotAComplexError(f"{what}: does not respect relations")
    M.setflags(write=False)
    return M


@dataclass(frozen=True)
class CochainComplex:
    """A bounded cochain complex ``term_min -> ... -> term_max``.

    ``differentials[i]`` maps ``terms[i]`` to ``terms[i + 1]``. ``torus``
    marks a complex whose terms are read as character lattices of tori,
    i.e. the complex ``C (x) C*``; see :func:`torus_cohomology`.
    """

    min_degree: int
    terms: tuple[PresentedGroup, ...]
    differentials: tuple[np.ndarray, ...] = ()
    torus: bool = False

    def __post_init__(self):
        terms = tuple(_as_group(g) for g in self.terms)
        object.__setattr__(self, "terms", terms)
        diffs = list(self.differentials)
        if not diffs and len(terms) > 1:
            diffs = [zeros(terms[i + 1].generators, terms[i].generators)
                     for i in range(len(terms) - 1)]
        if len(diffs) != max(len(terms) - 1, 0):
            raise NotAComplexError(f"{len(terms)} terms need {len(terms) - 1} differentials")
        diffs = tuple(
            _check_map(d, terms[i], terms[i + 1], f"d^{self.min_degree + i}")
            for i, d in enumerate(diffs))
        object.__setattr__(self, "differentials", diffs)
        if self.torus and any(not g.is_free() for g in terms):
            raise NotAComplexError("torus complexes need free character lattices")
        for i in range(len(diffs) - 1):
            dd = matmul(diffs[i + 1], diffs[i])
            if not in_lattice(dd, terms[i + 2].relations):
                raise NotAComplexError(f"d o d != 0 at degree {self.min_degree + i}")

    @classmethod
    def free(cls, ranks: Sequence[int], differentials: Sequence = (), min_degree: int = 0,
             torus: bool = False) -> CochainComplex:
        return cls(min_degree, tuple(PresentedGroup.free(r) for r in ranks),
                   tuple(differentials), torus)

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.terms) - 1

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def term(self, t: int) -> PresentedGroup:
        if self.min_degree <= t <= self.max_degree:
            return self.terms[t - self.min_degree]
        return _ZERO

    def differential(self, t: int) -> np.ndarray:
        """The matrix of ``d^t: term_t -> term_(t+1)`` (zero outside the band)."""
        if self.min_degree <= t < self.max_degree:
            return self.differentials[t - self.min_degree]
        return zeros(self.term(t + 1).generators, self.term(t).generators)


def cohomology_presentation(C: CochainComplex, t: int) -> tuple[PresentedGroup, np.ndarray]:
    """Present ``H^t(C)`` on a basis of the cocycle lattice.

    Returns ``(H, Z)`` where the columns of ``Z`` are a basis of
    ``{x : d x in relations}`` and ``H`` is generated by those columns.
    """
    src, dst = C.term(t), C.term(t + 1)
    n = src.generators
    d = C.differential(t)
    K = kernel_basis(hstack([d, dst.relations], dst.generators))
    Z = lattice_basis(K[:n, :])
    B = hstack([C.differential(t - 1), src.relations], n)
    X = lattice_coordinates(Z, B)
    if X is None:
        raise NotAComplexError(f"image of d^{t - 1} is not inside the cocycles")
    return PresentedGroup(Z.shape[1], X), Z


def cohomology(C: CochainComplex, t: int) -> FgAbGroup:
    """``H^t(C)`` as an isomorphism class; trivial outside the degree band."""
    if not C.min_degree <= t <= C.max_degree:
        return FgAbGroup()
    return cohomology_presentation(C, t)[0].invariants()


def torus_cohomology(C: CochainComplex, t: int) -> DiagGroup:
    """``H^t(C (x) C*)`` for a complex of free lattices.

    ``(C*)^n = Hom(Z^n, C*)``, and the map with exponent matrix ``d`` is
    dual to ``d.T`` on characters. Since ``Hom(-, C*)`` is exact the
    cohomology is ``Hom(H_t, C*)`` where ``H_t`` is the homology of the
    transposed chain complex: a torus of rank ``rank H_t`` times the
    torsion of ``H_t``.
    """
    if any(not C.term(s).is_free() for s in (t - 1, t, t + 1)):
        raise NotAComplexError("torus cohomology needs free terms")
    cycles = kernel_basis(C.differential(t - 1).T.copy())
    boundaries = C.differential(t).T.copy()
    H = subquotient(cycles, boundaries)
    return DiagGroup(H.free_rank, FgAbGroup(0, H.torsion))


def euler_characteristic(C: CochainComplex) -> int:
    return sum((-1) ** t * C.term(t).invariants().free_rank for t in C.degrees())


def shift(C: CochainComplex, k: int) -> CochainComplex:
    """``C[k]``: ``term_t = C.term_(t+k)``, differentials times ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    return CochainComplex(C.min_degree - k, C.terms,
                          tuple(sign * d for d in C.differentials), C.torus)


@dataclass(frozen=True)
class ChainMap:
    """Per-degree matrices ``f^t: source.term(t) -> target.term(t)``.

    Degrees missing from ``components`` are zero maps.
    """

    source: CochainComplex
    target: CochainComplex
    components: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for t, M in self.components.items():
            comps[t] = _check_map(M, self.source.term(t), self.target.term(t), f"f^{t}")
        object.__setattr__(self, "components", comps)
        lo = min(self.source.min_degree, self.target.min_degree) - 1
        hi = max(self.source.max_degree, self.target.max_degree) + 1
        for t in range(lo, hi):
            lhs = matmul(self.target.differential(t), self.component(t))
            rhs = matmul(self.component(t + 1), self.source.differential(t))
            if not in_lattice(lhs - rhs, self.target.term(t + 1).relations):
                raise NotAComplexError(f"chain map does not commute at degree {t}")

    def component(self, t: int) -> np.ndarray:
        if t in self.components:
            return self.components[t]
        return zeros(self.target.term(t).generators, self.source.term(t).generators)


def mapping_cone(f: ChainMap) -> CochainComplex:
    S, T = f.source, f.target
    lo = min(S.min_degree, T.min_degree + 1)
    hi = max(S.max_degree, T.max_degree + 1)
    terms = [direct_sum([S.term(t), T.term(t - 1)]) for t in range(lo, hi + 1)]
    diffs = []
    for t in range(lo, hi):
        a0, b0 = S.term(t).generators, T.term(t - 1).generators
        a1, b1 = S.term(t + 1).generators, T.term(t).generators
        M = zeros(a1 + b1, a0 + b0)
        M[:a1, :a0] = S.differential(t)
        M[a1:, :a0] = -f.component(t)
        M[a1:, a0:] = -T.differential(t - 1)
        diffs.append(M)
    return CochainComplex(lo, tuple(terms), tuple(diffs))


@dataclass(frozen=True)
class DoubleComplex:
    """Fourth-quadrant double complex with commuting squares.

    ``entries[(p, q)]`` for ``p >= 0``, ``q <= 0``; ``horizontal[(p, q)]``
    maps ``(p, q) -> (p + 1, q)`` and ``vertical[(p, q)]`` maps
    ``(p, q) -> (p, q + 1)``. Missing entries are zero.
    """

    entries: Mapping[tuple[int, int], PresentedGroup]
    horizontal: Mapping[tuple[int, int], np.ndarray] = field(default_factory=dict)
    vertical: Mapping[tuple[int, int], np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        entries = {k: _as_group(v) for k, v in self.entries.items()}
        for p, q in entries:
            if p < 0 or q > 0:
                raise NotAComplexError(f"entry ({p}, {q}) outside the fourth quadrant")
        object.__setattr__(self, "entries", entries)
        h = {k: _check_map(M, self.entry(*k), self.entry(k[0] + 1, k[1]), f"horizontal {k}")
             for k, M in self.horizontal.items()}
        v = {k: _check_map(M, self.entry(*k), self.entry(k[0], k[1] + 1), f"vertical {k}")
             for k, M in self.vertical.items()}
        object.__setattr__(self, "horizontal", h)
        object.__setattr__(self, "vertical", v)
        for p, q in entries:
            rel = self.entry
            checks = [
                (matmul(self.h(p + 1, q), self.h(p, q)), rel(p + 2, q), "horizontal d o d"),
                (matmul(self.v(p, q + 1), self.v(p, q)), rel(p, q + 2), "vertical d o d"),
                (matmul(self.v(p + 1, q), self.h(p, q)) - matmul(self.h(p, q + 1), self.v(p, q)),
                 rel(p + 1, q + 1), "squares do not commute"),
            ]
            for M, target, what in checks:
                if not in_lattice(M, target.relations):
                    raise NotAComplexError(f"{what} at ({p}, {q})")

    def entry(self, p: int, q: int) -> PresentedGroup:
        return self.entries.get((p, q), _ZERO)

    def h(self, p: int, q: int) -> np.ndarray:
        if (p, q) in self.horizontal:
            return self.horizontal[(p, q)]
        return zeros(self.entry(p + 1, q).generators, self.entry(p, q).generators)

    def v(self, p: int, q: int) -> np.ndarray:
        if (p, q) in self.vertical:
            return self.vertical[(p, q)]
        return zeros(self.entry(p, q + 1).generators, self.entry(p, q).generators)

    def columns(self) -> list[int]:
        return sorted({p for p, _ in self.entries})

    def rows(self) -> list[int]:
        return sorted({q for _, q in self.entries})

    def column(self, p: int) -> CochainComplex:
        """Column ``p`` as a complex in the vertical degree ``q``."""
        qs = [q for (pp, q) in self.entries if pp == p]
        if not qs:
            return CochainComplex(0, ())
        lo, hi = min(qs), max(qs)
        return CochainComplex(lo, tuple(self.entry(p, q) for q in range(lo, hi + 1)),
                              tuple(self.v(p, q) for q in range(lo, hi)))

    def row(self, q: int) -> CochainComplex:
        ps = [p for (p, qq) in self.entries if qq == q]
        if not ps:
            return CochainComplex(0, ())
        lo, hi = min(ps), max(ps)
        return CochainComplex(lo, tuple(self.entry(p, q) for p in range(lo, hi + 1)),
                              tuple(self.h(p, q) for p in range(lo, hi)))


def total_complex(D: DoubleComplex) -> CochainComplex:
    """``Tot(D)^n = + over p+q=n of D[p, q]``, differential ``h + (-1)^p v``."""
    if not D.entries:
        return CochainComplex(0, ())
    totals = [p + q for p, q in D.entries]
    lo, hi = min(totals), max(totals)
    ps = D.columns()

    def summands(n):
        return [(p, n - p) for p in ps if (p, n - p) in D.entries]

    terms, offsets = [], []
    for n in range(lo, hi + 1):
        parts = summands(n)
        terms.append(direct_sum([D.entry(*k) for k in parts]))
        off, acc = {}, 0
        for k in parts:
            off[k] = acc
            acc += D.entry(*k).generators
        offsets.append(off)
    diffs = []
    for i, n in enumerate(range(lo, hi)):
        M = zeros(terms[i + 1].generators, terms[i].generators)
        src_off, dst_off = offsets[i], offsets[i + 1]
        for (p, q), c0 in src_off.items():
            w = D.entry(p, q).generators
            if (p + 1, q) in dst_off:
                r0 = dst_off[(p + 1, q)]
                H = D.h(p, q)
                M[r0:r0 + H.shape[0], c0:c0 + w] = H
            if (p, q + 1) in dst_off:
                r0 = dst_off[(p, q + 1)]
                V = D.v(p, q)
                M[r0:r0 + V.shape[0], c0:c0 + w] = V if p % 2 == 0 else -V
        diffs.append(M)
    return CochainComplex(lo, tuple(terms), tuple(diffs))
