"""Finitely generated abelian groups and diagonalizable groups.

Integer matrices are numpy arrays with ``dtype=object`` holding Python
ints, so every computation is exact regardless of entry size. A matrix
``M`` of shape ``(rows, cols)`` is read as the homomorphism
``Z^cols -> Z^rows``, x |-> M @ x, and lattices are spanned by columns.

>>> cokernel([[2, 0], [0, 3]])
FgAbGroup(free_rank=0, torsion=(6,))
>>> str(cokernel(int_matrix([], rows=2, cols=0)))
'Z^2'
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DiagGroup",
    "FgAbGroup",
    "NotASubgroupError",
    "PresentedGroup",
    "TRIVIAL",
    "cokernel",
    "direct_sum",
    "direct_sum_matrix",
    "identity",
    "in_lattice",
    "int_matrix",
    "kernel_basis",
    "lattice_basis",
    "lattice_coordinates",
    "map_kernel_cokernel",
    "matmul",
    "rank",
    "respects_relations",
    "snf",
    "subquotient",
    "tensor_torus",
    "torus_map_ker_coker",
    "zeros",
]


class NotASubgroupError(ValueError):
    """Raised when a lattice expected to be a sublattice is not one."""


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------

def int_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``data`` to a 2-d object array of Python ints.

    ``rows``/``cols`` are needed to give empty matrices a shape, e.g.
    ``int_matrix([], rows=2, cols=0)``.
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        out = np.empty(data.shape, dtype=object)
        for idx, v in np.ndenumerate(data):
            out[idx] = _as_int(v)
    else:
        data = [list(r) for r in data]
        if not data:
            r = 0 if rows is None else rows
            c = 0 if cols is None else cols
            if r and c:
                raise ValueError("empty data for a non-empty shape")
            return np.zeros((r, c), dtype=object)
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix rows")
        out = np.empty((len(data), width), dtype=object)
        for i, r in enumerate(data):
            for j, v in enumerate(r):
                out[i, j] = _as_int(v)
    if rows is not None and out.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {out.shape[0]}")
    if cols is not None and out.shape[1] != cols:
        raise ValueError(f"expected {cols} columns, got {out.shape[1]}")
    return out


def _as_int(v) -> int:
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("booleans are not matrix entries")
    iv = int(v)
    if iv != v:
        raise ValueError(f"non-integer entry {v!r}")
    return iv


def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def direct_sum_matrix(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Block-diagonal matrix of ``blocks``."""
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; numpy's object matmul mishandles inner dimension 0."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return int_matrix(a.dot(b))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

class _Reducer:
    """Elementary-operation reduction of ``A`` tracking ``U, U^-1, V, V^-1``.

    Invariant: ``U @ A0 @ V == A`` for the original matrix ``A0``.
    """

    def __init__(self, M: np.ndarray):
        self.A = int_matrix(M)
        m, n = self.A.shape
        self.U, self.Uinv = identity(m), identity(m)
        self.V, self.Vinv = identity(n), identity(n)

    def swap_rows(self, i, j):
        if i == j:
            return
        for X in (self.A, self.U):
            X[[i, j]] = X[[j, i]]
        self.Uinv[:, [i, j]] = self.Uinv[:, [j, i]]

    def add_row(self, i, j, c):
        # row_i += c * row_j
        self.A[i] = self.A[i] + c * self.A[j]
        self.U[i] = self.U[i] + c * self.U[j]
        self.Uinv[:, j] = self.Uinv[:, j] - c * self.Uinv[:, i]

    def negate_row(self, i):
        self.A[i] = -self.A[i]
        self.U[i] = -self.U[i]
        self.Uinv[:, i] = -self.Uinv[:, i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for X in (self.A, self.V):
            X[:, [i, j]] = X[:, [j, i]]
        self.Vinv[[i, j]] = self.Vinv[[j, i]]

    def add_col(self, i, j, c):
        # col_i += c * col_j
        self.A[:, i] = self.A[:, i] + c * self.A[:, j]
        self.V[:, i] = self.V[:, i] + c * self.V[:, j]
        self.Vinv[j] = self.Vinv[j] - c * self.Vinv[i]

    def _min_pivot(self, t):
        A = self.A
        best = None
        for i in range(t, A.shape[0]):
            for j in range(t, A.shape[1]):
                v = A[i, j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        return best
        return best

    def reduce(self):
        A = self.A
        m, n = A.shape
        for t in range(min(m, n)):
            found = self._min_pivot(t)
            if found is None:
                break
            _, i, j = found
            self.swap_rows(t, i)
            self.swap_cols(t, j)
            while True:
                clean = True
                p = A[t, t]
                for i in range(t + 1, m):
                    if A[i, t]:
                        q = A[i, t] // p
                        if q:
                            self.add_row(i, t, -q)
                        if A[i, t]:
                            clean = False
                for j in range(t + 1, n):
                    if A[t, j]:
                        q = A[t, j] // p
                        if q:
                            self.add_col(j, t, -q)
                        if A[t, j]:
                            clean = False
                if not clean:
                    # a nonzero remainder is smaller than the pivot
                    best = (abs(p), t, t)
                    for i in range(t + 1, m):
                        if A[i, t] and abs(A[i, t]) < best[0]:
                            best = (abs(A[i, t]), i, t)
                    for j in range(t + 1, n):
                        if A[t, j] and abs(A[t, j]) < best[0]:
                            best = (abs(A[t, j]), t, j)
                    self.swap_rows(t, best[1])
                    self.swap_cols(t, best[2])
                    continue
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i, j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if A[t, t] < 0:
                self.negate_row(t)
        return self


def _reduce(M) -> _Reducer:
    return _Reducer(M).reduce()


def snf(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d1 | d2 | ...``, nonzero ones first.
    """
    r = _reduce(M)
    return r.U, r.A, r.V


def _diagonal(D: np.ndarray) -> list[int]:
    return [D[i, i] for i in range(min(D.shape))]


def rank(M) -> int:
    return sum(1 for d in _diagonal(_reduce(M).A) if d)


def cokernel(M) -> FgAbGroup:
    """Invariants of ``Z^rows / im(M)``."""
    M = int_matrix(M)
    D = _reduce(M).A
    diag = _diagonal(D)
    nonzero = [d for d in diag if d]
    return FgAbGroup(M.shape[0] - len(nonzero), tuple(d for d in nonzero if d > 1))


def kernel_basis(M) -> np.ndarray:
    """Columns form a Z-basis of ``ker(M)`` inside ``Z^cols``."""
    r = _reduce(M)
    k = sum(1 for d in _diagonal(r.A) if d)
    return r.V[:, k:].copy()


def lattice_basis(G) -> np.ndarray:
    """A basis (independent columns) of the lattice spanned by the columns of ``G``."""
    r = _reduce(G)
    diag = [d for d in _diagonal(r.A) if d]
    out = r.Uinv[:, :len(diag)].copy()
    for j, d in enumerate(diag):
        out[:, j] = out[:, j] * d
    return out


def lattice_coordinates(basis, vectors) -> np.ndarray | None:
    """Integer ``X`` with ``basis @ X == vectors``, or ``None`` if impossible.

    ``basis`` must have linearly independent columns.
    """
    basis = int_matrix(basis)
    vectors = int_matrix(vectors)
    if vectors.shape[0] != basis.shape[0]:
        raise ValueError("ambient dimensions differ")
    r = _reduce(basis)
    diag = _diagonal(r.A)
    k = sum(1 for d in diag if d)
    if k != basis.shape[1]:
        raise ValueError("basis columns are linearly dependent")
    Y = matmul(r.U, vectors)
    if any(Y[i, j] for i in range(k, Y.shape[0]) for j in range(Y.shape[1])):
        return None
    Z = zeros(k, Y.shape[1])
    for i in range(k):
        for j in range(Y.shape[1]):
            q, rem = divmod(Y[i, j], diag[i])
            if rem:
                return None
            Z[i, j] = q
    return matmul(r.V, Z)


def in_lattice(vectors, G) -> bool:
    """True when every column of ``vectors`` lies in the column lattice of ``G``."""
    G = int_matrix(G)
    vectors = int_matrix(vectors)
    if vectors.shape[1] == 0:
        return True
    return lattice_coordinates(lattice_basis(G), vectors) is not None


def subquotient(Z, B) -> FgAbGroup:
    """Invariants of (column lattice of Z) / (column lattice of B).

    Raises:
        NotASubgroupError: a column of ``B`` is outside the lattice of ``Z``.
    """
    Z = int_matrix(Z)
    B = int_matrix(B)
    X = subquotient_relations(Z, B)[1]
    return cokernel(X)


def subquotient_relations(Z, B) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(basis, X)``: a basis of lat(Z) and B's coordinates in it."""
    basis = lattice_basis(Z)
    if B.shape[0] != Z.shape[0]:
        raise ValueError("ambient dimensions differ")
    X = lattice_coordinates(basis, B)
    if X is None:
        raise NotASubgroupError("image lattice is not contained in the cycle lattice")
    return basis, X


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------

def _canonical_torsion(divisors: Iterable[int]) -> tuple[int, ...]:
    divs = [abs(int(d)) for d in divisors]
    if any(d == 0 for d in divs):
        raise ValueError("zero is not a torsion divisor")
    divs = [d for d in divs if d > 1]
    if not divs:
        return ()
    D = zeros(len(divs), len(divs))
    for i, d in enumerate(divs):
        D[i, i] = d
    return cokernel(D).torsion


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``, each ``di >= 2``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a canonical divisor chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_divisors(cls, free_rank: int, divisors: Iterable[int]) -> FgAbGroup:
        """Normalize an arbitrary list of cyclic orders (1s are dropped)."""
        return cls(free_rank, _canonical_torsion(divisors))

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other: FgAbGroup) -> FgAbGroup:
        return FgAbGroup.from_divisors(self.free_rank + other.free_rank,
                                       self.torsion + other.torsion)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


TRIVIAL = FgAbGroup()


@dataclass(frozen=True)
class DiagGroup:
    """A diagonalizable group ``(C*)^torus_rank x finite``."""

    torus_rank: int = 0
    finite: FgAbGroup = TRIVIAL

    def __post_init__(self):
        if self.torus_rank < 0:
            raise ValueError("negative torus rank")
        if self.finite.free_rank:
            raise ValueError("finite part must have free rank 0")

    def is_trivial(self) -> bool:
        return self.torus_rank == 0 and self.finite.is_trivial()

    def __add__(self, other: DiagGroup) -> DiagGroup:
        return DiagGroup(self.torus_rank + other.torus_rank, self.finite + other.finite)

    def __str__(self):
        parts = []
        if self.torus_rank:
            parts.append("C*" if self.torus_rank == 1 else f"(C*)^{self.torus_rank}")
        parts += [f"mu_{d}" for d in self.finite.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PresentedGroup:
    """``Z^generators / im(relations)``; ``relations`` has ``generators`` rows."""

    generators: int
    relations: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        rel = self.relations
        if rel is None:
            rel = zeros(self.generators, 0)
        else:
            rel = int_matrix(rel, rows=self.generators) if not isinstance(rel, np.ndarray) \
                else int_matrix(rel)
        if rel.shape[0] != self.generators:
            raise ValueError(
                f"relation matrix has {rel.shape[0]} rows for {self.generators} generators")
        rel.setflags(write=False)
        object.__setattr__(self, "relations", rel)

    @classmethod
    def free(cls, n: int) -> PresentedGroup:
        return cls(n)

    @classmethod
    def from_relation_vectors(cls, generators: int, vectors: Sequence[Sequence[int]]):
        """Build from a list of relation vectors, each of length ``generators``."""
        rel = int_matrix(vectors, rows=len(vectors), cols=generators).T.copy() if vectors \
            else zeros(generators, 0)
        return cls(generators, rel)

    def invariants(self) -> FgAbGroup:
        return cokernel(self.relations)

    def is_free(self) -> bool:
        return self.relations.shape[1] == 0

    def __eq__(self, other):
        if not isinstance(other, PresentedGroup):
            return NotImplemented
        return (self.generators == other.generators
                and np.array_equal(self.relations, other.relations))

    def __hash__(self):
        return hash((self.generators, tuple(self.relations.flat)))

    def __str__(self):
        return str(self.invariants())


def direct_sum(groups: Sequence[PresentedGroup]) -> PresentedGroup:
    return PresentedGroup(sum(g.generators for g in groups),
                          direct_sum_matrix([g.relations for g in groups]))


def respects_relations(M, src: PresentedGroup, dst: PresentedGroup) -> bool:
    """True when ``M`` (on generators) sends every relation of ``src`` into those of ``dst``."""
    M = int_matrix(M)
    if M.shape != (dst.generators, src.generators):
        return False
    return in_lattice(matmul(M, src.relations), dst.relations)


def map_kernel_cokernel(M, src: PresentedGroup, dst: PresentedGroup
                        ) -> tuple[FgAbGroup, FgAbGroup]:
    """Kernel and cokernel of the homomorphism ``src -> dst`` given on generators.

    Raises:
        ValueError: ``M`` has the wrong shape or does not respect relations.
    """
    M = int_matrix(M, rows=dst.generators, cols=src.generators)
    if not respects_relations(M, src, dst):
        raise ValueError("matrix does not define a homomorphism of the presented groups")
    n = src.generators
    stacked = int_matrix(np.hstack([M, dst.relations]), rows=dst.generators,
                         cols=n + dst.relations.shape[1])
    coker = cokernel(stacked)
    # preimage of the target relations, projected to the source generators
    pre = kernel_basis(stacked)[:n, :]
    ker = subquotient(lattice_basis(pre), src.relations)
    return ker, coker


def tensor_torus(A: FgAbGroup) -> DiagGroup:
    """``A (x) C*``: torsion dies because ``C*`` is divisible."""
    return DiagGroup(A.free_rank)


def torus_map_ker_coker(M) -> tuple[DiagGroup, DiagGroup]:
    """Kernel and cokernel of the torus map ``(C*)^cols -> (C*)^rows``.

    ``M`` is the exponent matrix: ``x |-> (prod_i x_i^M[j, i])_j``. On
    character lattices the map is ``M.T``, and ``Hom(-, C*)`` is exact, so
    ``ker = Hom(coker M.T, C*)`` and ``coker = Hom(ker M.T, C*)``.
    """
    M = int_matrix(M)
    rows, cols = M.shape
    characters = cokernel(M.T.copy())
    ker = DiagGroup(characters.free_rank, FgAbGroup(0, characters.torsion))
    coker = DiagGroup(rows - rank(M))
    return ker, coker
