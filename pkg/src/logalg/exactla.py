"""Exact integer linear algebra.

Smith normal form with transforms, cokernels as canonical finitely
generated abelian groups, kernels, Hilbert bases of ``{x in N^m : Ax = 0}``,
homology of integer chain complexes and (co)cartesian tests for squares of
finitely generated abelian groups.  Everything uses Python integers, so
nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _accel, limits
from .errors import NonCommuting, NotAComplex, ResourceExceeded

DEFAULT_HILBERT_CAP = 100_000


class IntMatrix:
    """Immutable row-major integer matrix with explicit shape."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: int | None = None, cols: int | None = None):
        d = tuple(tuple(int(x) for x in r) for r in data)
        if rows is None:
            rows = len(d)
        if cols is None:
            cols = len(d[0]) if d else 0
        if len(d) != rows or any(len(r) != cols for r in d):
            raise ValueError(f"inconsistent matrix shape {rows}x{cols}")
        self.rows, self.cols, self.data = rows, cols, d

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        if not columns:
            return cls.zeros(rows, 0)
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def coerce(cls, A) -> "IntMatrix":
        if isinstance(A, IntMatrix):
            return A
        A = list(A)
        return cls(A)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([self.column(j) for j in range(self.cols)], self.cols, self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            oc = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in oc] for r in self.data], self.rows, other.cols
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.rows, self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self.data], self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.shape, self.data))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.data]}, {self.rows}, {self.cols})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack row mismatch")
        return IntMatrix([a + b for a, b in zip(self.data, other.data)], self.rows, self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack column mismatch")
        return IntMatrix(self.data + other.data, self.rows + other.rows, self.cols)

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[r[j] for j in idx] for r in self.data], self.rows, len(idx))

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([self.data[i] for i in idx], len(idx), self.cols)


def block_diag(*mats: IntMatrix) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return IntMatrix(out, rows, cols)


def det(A: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    A = IntMatrix.coerce(A)
    n = A.rows
    if n != A.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(r) for r in A.data]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNF:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _snf_full(A: IntMatrix) -> SNF:
    r, c = A.shape
    D = [list(row) for row in A.data]
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    Ui = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]
    Vi = [[int(i == j) for j in range(c)] for i in range(c)]

    # elementary operations, mirrored on the transforms and their inverses
    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q == 0:
            return
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= q * row[dst]

    def neg_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q == 0:
            return
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = D[i][j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            p = D[t][t]
            for i in range(t + 1, r):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, c):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            rest = [(abs(D[i][t]), i, t) for i in range(t + 1, r) if D[i][t]]
            rest += [(abs(D[t][j]), t, j) for j in range(t + 1, c) if D[t][j]]
            if rest:
                _, i, j = min(rest)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            neg_row(t)
        t += 1
    return SNF(IntMatrix(U, r, r), IntMatrix(D, r, c), IntMatrix(V, c, c), IntMatrix(Ui, r, r), IntMatrix(Vi, c, c))


def snf(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` in Smith normal form."""
    s = _snf_full(IntMatrix.coerce(A))
    return s.U, s.D, s.V


def smith(A) -> SNF:
    """Smith normal form together with the inverse transforms."""
    return _snf_full(IntMatrix.coerce(A))


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank + Z/torsion[0] + ...`` in canonical coordinates.

    Canonical coordinates list the torsion summands first, then the free
    ones.  ``presentation_map`` has one column per canonical generator,
    written in ambient coordinates; ``coordinate_map`` sends an ambient
    vector to canonical coordinates (reduce with :meth:`reduce`).
    """

    free_rank: int
    torsion: tuple[int, ...]
    presentation_map: IntMatrix = field(compare=True)
    coordinate_map: IntMatrix = field(compare=True)

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_isomorphic(self, other: "FgAbelianGroup") -> bool:
        return self.invariants == other.invariants

    def order(self) -> int | None:
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return self.torsion + (0,) * self.free_rank

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % m if m else x for x, m in zip(coords, self.moduli()))

    def element(self, ambient: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(self.coordinate_map @ ambient)

    def relation_matrix(self) -> IntMatrix:
        """Relations among canonical generators (columns)."""
        cols = []
        for i, d in enumerate(self.torsion):
            v = [0] * self.ngens
            v[i] = d
            cols.append(v)
        return IntMatrix.from_columns(cols, self.ngens)

    def elements(self) -> list[tuple[int, ...]]:
        if self.free_rank:
            raise ValueError("infinite group")
        return [tuple(t) for t in product(*[range(d) for d in self.torsion])]

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}


def _group_from_snf(s: SNF, rows: int) -> FgAbelianGroup:
    diag = s.diagonal
    rank = s.rank
    keep = [i for i in range(rank) if diag[i] != 1] + list(range(rank, rows))
    torsion = tuple(diag[i] for i in range(rank) if diag[i] != 1)
    return FgAbelianGroup(
        free_rank=rows - rank,
        torsion=torsion,
        presentation_map=s.U_inv.select_columns(keep),
        coordinate_map=s.U.select_rows(keep),
    )


def cokernel(A) -> FgAbelianGroup:
    """``Z^rows / column-span(A)`` in canonical form."""
    A = IntMatrix.coerce(A)
    return _group_from_snf(smith(A), A.rows)


def cokernel_of(rows: int, columns: Sequence[Sequence[int]]) -> FgAbelianGroup:
    return cokernel(IntMatrix.from_columns(list(columns), rows))


def kernel_basis(A) -> IntMatrix:
    """Columns form a basis of the lattice ``{x : Ax = 0}``."""
    A = IntMatrix.coerce(A)
    s = smith(A)
    cols = []
    for j in range(s.rank, A.cols):
        v = list(s.V.column(j))
        lead = next((x for x in v if x), 0)
        if lead < 0:
            v = [-x for x in v]
        cols.append(v)
    return IntMatrix.from_columns(cols, A.cols)


def solve_integer(A, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution of ``A x = b`` or ``None``."""
    A = IntMatrix.coerce(A)
    s = smith(A)
    ub = s.U @ tuple(b)
    diag = s.diagonal
    y = [0] * A.cols
    for i, v in enumerate(ub):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if v != 0:
                return None
        else:
            if v % d:
                return None
            y[i] = v // d
    return s.V @ y


def lattice_contains(L: IntMatrix, v: Sequence[int]) -> bool:
    """Is ``v`` an integer combination of the columns of ``L``?"""
    if not any(v):
        return True
    if L.cols == 0:
        return False
    return solve_integer(L, v) is not None


def lattice_rank(L: IntMatrix) -> int:
    return smith(L).rank


# ---------------------------------------------------------------------------
# Hilbert bases


def hilbert_basis(A, cap: int = DEFAULT_HILBERT_CAP, stats: dict | None = None, *, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Minimal generating set of ``{x in N^m : A x = 0}``.

    Contejean-Devie completion: grow candidates from the unit vectors,
    stepping along ``e_j`` only when it decreases the defect ``A x``
    (``<Ax, Ae_j> < 0``), and drop any candidate that dominates a solution
    already found.  ``stats`` (if given) receives ``rounds`` (the degree
    bound reached) and ``peak`` (largest candidate frontier).
    Raises :class:`ResourceExceeded` past ``cap`` live candidates.
    """
    A = IntMatrix.coerce(A)
    m = A.cols if ncols is None else ncols
    if A.rows == 0:
        A = IntMatrix.zeros(0, m)
    cols = [A.column(j) for j in range(m)]
    basis: list[tuple[int, ...]] = []
    # each candidate stored with its defect A x
    frontier = {tuple(int(i == j) for j in range(m)): cols[i] for i in range(m)}
    rounds = peak = 0
    cap = limits.hilbert_cap(cap)
    while frontier:
        rounds += 1
        limits.check_deadline()
        peak = max(peak, len(frontier))
        if len(frontier) > cap:
            raise ResourceExceeded(f"Hilbert basis completion exceeded {cap} candidates")
        solved = [x for x, ax in frontier.items() if not any(ax)]
        basis.extend(solved)
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for x, ax in frontier.items():
            if not any(ax):
                continue
            for j in range(m):
                # <Ax, Ae_j> computed from the defect
                if sum(a * b for a, b in zip(ax, cols[j])) < 0:
                    y = x[:j] + (x[j] + 1,) + x[j + 1 :]
                    if y not in nxt:
                        nxt[y] = tuple(a + b for a, b in zip(ax, cols[j]))
        if nxt and basis:
            keys = list(nxt)
            mask = _accel.dominated(np.array(keys, dtype=np.int64), np.array(basis, dtype=np.int64))
            nxt = {k: nxt[k] for k, bad in zip(keys, mask) if not bad}
        frontier = nxt
    if stats is not None:
        stats["rounds"] = rounds
        stats["peak"] = peak
    return sorted(set(basis))


def hilbert_basis_bruteforce(A, bound: int, *, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Oracle: minimal nonzero solutions with every coordinate ``<= bound``."""
    A = IntMatrix.coerce(A)
    m = A.cols if ncols is None else ncols
    arr = np.array(A.data, dtype=np.int64).reshape(A.rows, m)
    sols = _accel.box_solutions(arr, bound)
    mins = _accel.minimal_nonzero(sols)
    return sorted(tuple(int(x) for x in r) for r in mins)


# ---------------------------------------------------------------------------
# homology


def complex_homology(d1, d0) -> FgAbelianGroup:
    """Homology ``ker(d0) / im(d1)`` of ``C2 --d1--> C1 --d0--> C0``.

    The result is expressed in ``C1`` coordinates: ``presentation_map``
    lists cycle representatives, ``coordinate_map`` is valid on cycles.
    """
    d1 = IntMatrix.coerce(d1)
    d0 = IntMatrix.coerce(d0)
    n = d1.rows if d1.rows or d1.cols else d0.cols
    if d0.cols != n and not (d0.rows == 0 and d0.cols == 0):
        raise ValueError("d0 and d1 are not composable")
    if d0.rows == 0 and d0.cols == 0:
        d0 = IntMatrix.zeros(0, n)
    if d1.rows == 0 and d1.cols == 0:
        d1 = IntMatrix.zeros(n, 0)
    if not (d0 @ d1).is_zero():
        raise NotAComplex("d0 . d1 != 0")
    s = smith(d0)
    kidx = list(range(s.rank, n))
    K = s.V.select_columns(kidx)  # saturated kernel basis
    Kleft = s.V_inv.select_rows(kidx)  # integer left inverse on the kernel
    Y = Kleft @ d1
    h = cokernel(Y)
    return FgAbelianGroup(h.free_rank, h.torsion, K @ h.presentation_map, h.coordinate_map @ Kleft)


# ---------------------------------------------------------------------------
# squares of abelian groups


@dataclass(frozen=True)
class AbelianSquare:
    """Commutative square

        A --top--> B
        |          |
       left      right
        v          v
        C --bottom-> D

    Maps are integer matrices between canonical coordinates.
    """

    A: FgAbelianGroup
    B: FgAbelianGroup
    C: FgAbelianGroup
    D: FgAbelianGroup
    top: IntMatrix
    left: IntMatrix
    right: IntMatrix
    bottom: IntMatrix

    def commutes(self) -> bool:
        diff = self.right @ self.top - self.bottom @ self.left
        R = self.D.relation_matrix()
        return all(lattice_contains(R, diff.column(j)) for j in range(diff.cols))


def _in_span(L: IntMatrix, v) -> bool:
    return lattice_contains(L, v)


def _kernel_mod(M: IntMatrix, rel_target: IntMatrix) -> list[tuple[int, ...]]:
    """Generators of ``{x : M x in span(rel_target)}``."""
    n = M.cols
    K = kernel_basis(M.hstack(-rel_target) if rel_target.cols else M)
    return [K.column(j)[:n] for j in range(K.cols)]


def _exactness(S: AbelianSquare) -> tuple[bool, bool, bool]:
    """(alpha injective, exact at B+C, beta surjective) for
    0 -> A --(top,left)--> B+C --(right,-bottom)--> D -> 0."""
    if not S.commutes():
        raise NonCommuting("square does not commute")
    alpha = S.top.vstack(S.left)
    beta = S.right.hstack(-S.bottom)
    rel_bc = block_diag(S.B.relation_matrix(), S.C.relation_matrix())
    rel_a = S.A.relation_matrix()
    rel_d = S.D.relation_matrix()
    inj = all(_in_span(rel_a, v) for v in _kernel_mod(alpha, rel_bc))
    img = alpha.hstack(rel_bc)
    mid = all(_in_span(img, v) for v in _kernel_mod(beta, rel_d))
    span_d = beta.hstack(rel_d)
    surj = all(_in_span(span_d, tuple(int(i == j) for j in range(S.D.ngens))) for i in range(S.D.ngens))
    return inj, mid, surj


def square_is_cartesian(S: AbelianSquare) -> bool:
    inj, mid, _ = _exactness(S)
    return inj and mid


def square_is_cocartesian(S: AbelianSquare) -> bool:
    _, mid, surj = _exactness(S)
    return mid and surj


def hom_matrix(images: Sequence[Sequence[int]], target: FgAbelianGroup) -> IntMatrix:
    """Matrix whose j-th column is the (reduced) image of generator j."""
    return IntMatrix.from_columns([target.reduce(v) for v in images], target.ngens)


def is_group_isomorphism(M: IntMatrix, source: FgAbelianGroup, target: FgAbelianGroup) -> bool:
    """Is the map with canonical-coordinate matrix ``M`` bijective?"""
    rel_s, rel_t = source.relation_matrix(), target.relation_matrix()
    inj = all(_in_span(rel_s, v) for v in _kernel_mod(M, rel_t))
    span = M.hstack(rel_t) if rel_t.cols else M
    surj = all(_in_span(span, tuple(int(i == j) for j in range(target.ngens))) for i in range(target.ngens))
    return inj and surj
