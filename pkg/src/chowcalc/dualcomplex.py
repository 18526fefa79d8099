"""Dual complexes of simple normal crossing divisors.

A *stratum* is one irreducible component of an intersection
``E_i0 ∩ ... ∩ E_it``; it becomes a ``t``-cell. Cells are oriented by
their sorted component indices, and omitting the ``j``-th index gives the
``j``-th face. When an intersection is reducible several strata share an
index set and the result is a Δ-complex; a coface then has to say which
of them it attaches to (``Stratum.faces``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .abelian import FgAbGroup, zeros
from .complexes import CochainComplex, cohomology

__all__ = [
    "AmbiguousFace",
    "DualComplex",
    "DualComplexError",
    "DuplicateId",
    "MissingFace",
    "Stratum",
    "build_dual_complex",
    "coboundary_complex",
    "connected_components",
    "export_dot",
    "gamma_cohomology",
    "is_acyclic",
]


class DualComplexError(ValueError):
    pass


class MissingFace(DualComplexError):
    pass


class AmbiguousFace(DualComplexError):
    pass


class DuplicateId(DualComplexError):
    pass


@dataclass(frozen=True)
class Stratum:
    """One cell of the dual complex.

    ``faces`` maps an omitted component index to the id of the face
    stratum; it is only required where that face's index set is shared by
    several strata.
    """

    id: str
    indices: tuple[int, ...]
    irreducible: bool = True
    faces: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if not idx:
            raise DualComplexError(f"stratum {self.id!r} has no component indices")
        if len(set(idx)) != len(idx):
            raise DualComplexError(f"stratum {self.id!r} repeats a component index")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "faces", {int(k): v for k, v in dict(self.faces).items()})

    @property
    def dim(self) -> int:
        return len(self.indices) - 1


@dataclass(frozen=True)
class DualComplex:
    """Validated cells and face incidences.

    ``cells[t]`` lists ``t``-cells sorted by ``(indices, id)``;
    ``face_ids[id][j]`` is the face omitting the ``j``-th index.
    """

    strata: Mapping[str, Stratum]
    cells: tuple[tuple[str, ...], ...]
    face_ids: Mapping[str, tuple[str, ...]]

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, t: int) -> int:
        return len(self.cells[t]) if 0 <= t < len(self.cells) else 0

    def position(self, sid: str) -> int:
        return self.cells[self.strata[sid].dim].index(sid)

    def vertices(self) -> tuple[str, ...]:
        return self.cells[0] if self.cells else ()

    def edges(self) -> tuple[str, ...]:
        return self.cells[1] if len(self.cells) > 1 else ()

    @property
    def all_irreducible(self) -> bool:
        return all(s.irreducible for s in self.strata.values())

    def is_graph(self) -> bool:
        return self.dimension <= 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** t * len(c) for t, c in enumerate(self.cells))

    def closure(self, ids: Iterable[str]) -> set[str]:
        out, stack = set(), list(ids)
        while stack:
            s = stack.pop()
            if s not in out:
                out.add(s)
                stack.extend(self.face_ids[s])
        return out

    def subcomplex(self, ids: Iterable[str]) -> DualComplex:
        """The downward-closed subcomplex generated by ``ids``."""
        keep = self.closure(ids)
        return build_dual_complex([self.strata[s] for s in sorted(keep)],
                                  _resolved={s: self.face_ids[s] for s in keep})


def build_dual_complex(strata: Iterable[Stratum], _resolved=None) -> DualComplex:
    """Validate strata and resolve every face incidence.

    Raises:
        DuplicateId: two strata share an id.
        MissingFace: a face index set has no stratum, or a named face is unknown.
        AmbiguousFace: a face index set is reducible and the coface does not
            name which component it attaches to.
    """
    by_id: dict[str, Stratum] = {}
    for s in strata:
        if s.id in by_id:
            raise DuplicateId(f"duplicate stratum id {s.id!r}")
        by_id[s.id] = s
    by_indices: dict[tuple[int, ...], list[str]] = {}
    for s in by_id.values():
        by_indices.setdefault(s.indices, []).append(s.id)
    for idx, ids in by_indices.items():
        if len(ids) > 1 and any(by_id[i].irreducible for i in ids):
            raise DualComplexError(
                f"strata {sorted(ids)} share indices {list(idx)} but are flagged irreducible")

    face_ids: dict[str, tuple[str, ...]] = {}
    for s in by_id.values():
        if _resolved is not None:
            face_ids[s.id] = tuple(_resolved[s.id])
            continue
        faces = []
        if s.dim > 0:
            for j, omitted in enumerate(s.indices):
                face_idx = s.indices[:j] + s.indices[j + 1:]
                candidates = by_indices.get(face_idx, [])
                if omitted in s.faces:
                    named = s.faces[omitted]
                    if named not in by_id or by_id[named].indices != face_idx:
                        raise MissingFace(
                            f"stratum {s.id!r} names face {named!r}, which is not a "
                            f"stratum with indices {list(face_idx)}")
                    faces.append(named)
                elif not candidates:
                    raise MissingFace(
                        f"stratum {s.id!r}: no stratum with indices {list(face_idx)}")
                elif len(candidates) > 1:
                    raise AmbiguousFace(
                        f"stratum {s.id!r}: face {list(face_idx)} is reducible "
                        f"({sorted(candidates)}); name it in 'faces'")
                else:
                    faces.append(candidates[0])
        face_ids[s.id] = tuple(faces)

    # simplicial identities: face_i face_j = face_(j-1) face_i for i < j
    for s in by_id.values():
        f = face_ids[s.id]
        if s.dim < 2:
            continue
        for j in range(len(f)):
            for i in range(j):
                a = face_ids[f[j]][i]
                b = face_ids[f[i]][j - 1]
                if a != b:
                    raise DualComplexError(
                        f"stratum {s.id!r}: face assignments disagree on a codimension-2 "
                        f"face ({a!r} vs {b!r})")

    top = max((s.dim for s in by_id.values()), default=-1)
    cells = tuple(
        tuple(sid for sid in sorted((x for x in by_id if by_id[x].dim == t),
                                    key=lambda x: (by_id[x].indices, x)))
        for t in range(top + 1))
    return DualComplex(by_id, cells, face_ids)


def coboundary_complex(gamma: DualComplex) -> CochainComplex:
    """Integral cochains: ``(delta f)(sigma) = sum_j (-1)^j f(face_j sigma)``."""
    if not gamma.cells:
        return CochainComplex(0, ())
    diffs = []
    for t in range(gamma.dimension):
        M = zeros(gamma.n_cells(t + 1), gamma.n_cells(t))
        pos = {sid: k for k, sid in enumerate(gamma.cells[t])}
        for r, sid in enumerate(gamma.cells[t + 1]):
            for j, fid in enumerate(gamma.face_ids[sid]):
                M[r, pos[fid]] += (-1) ** j
        diffs.append(M)
    return CochainComplex.free([len(c) for c in gamma.cells], diffs)


def gamma_cohomology(gamma: DualComplex, t: int) -> FgAbGroup:
    return cohomology(coboundary_complex(gamma), t)


def is_acyclic(gamma: DualComplex) -> bool:
    """``H^0 = Z`` and ``H^t = 0`` for ``t >= 1``."""
    if not gamma.cells:
        return False
    C = coboundary_complex(gamma)
    if cohomology(C, 0) != FgAbGroup(1):
        return False
    return all(cohomology(C, t).is_trivial() for t in range(1, gamma.dimension + 1))


def connected_components(gamma: DualComplex) -> list[DualComplex]:
    """Connected components, each as its own dual complex, ordered by first vertex."""
    parent = {v: v for v in gamma.vertices()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in gamma.edges():
        a, b = (find(v) for v in gamma.face_ids[e])
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[str, list[str]] = {}
    for v in gamma.vertices():
        groups.setdefault(find(v), []).append(v)
    comps = []
    for verts in groups.values():
        vs = set(verts)
        members = [sid for sid in gamma.strata
                   if _vertex_set(gamma, sid) <= vs]
        comps.append(gamma.subcomplex(members))
    comps.sort(key=lambda g: gamma.vertices().index(g.vertices()[0]))
    return comps


def _vertex_set(gamma: DualComplex, sid: str) -> set[str]:
    return {x for x in gamma.closure([sid]) if gamma.strata[x].dim == 0}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(gamma: DualComplex) -> str:
    """Graphviz text for the 1-skeleton; parallel edges are kept."""
    lines = ["graph dual_complex {"]
    for v in sorted(gamma.vertices()):
        label = ",".join(str(i) for i in gamma.strata[v].indices)
        lines.append(f"  {_quote(v)} [label={_quote('{' + label + '}')}];")
    for e in sorted(gamma.edges()):
        a, b = gamma.face_ids[e]
        # face_ids are ordered by omitted position: (omit first, omit second)
        lines.append(f"  {_quote(b)} -- {_quote(a)} [label={_quote(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
