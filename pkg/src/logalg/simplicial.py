"""Truncated simplicial abelian groups and monoids, bar constructions and
their homotopy and homology at small levels.

Levels are indexed ``0..n``.  ``faces[k][i]`` maps level ``k`` to level
``k-1`` and ``degens[k][j]`` maps level ``k`` to level ``k+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _accel
from . import monoid as mon
from .errors import TooLarge, TruncationTooLow
from .exactla import (
    FgAbelianGroup,
    IntMatrix,
    cokernel,
    complex_homology,
    kernel_basis,
    lattice_contains,
    smith,
    solve_integer,
)
from .monoid import MonoidHom, MonoidPresentation

BAR_MAX_ORDER = 32
BAR_MAX_DEGREE = 4
BAR_MAX_CELLS = 200_000  # entries of the largest boundary matrix


# ---------------------------------------------------------------------------
# simplicial abelian groups


@dataclass(frozen=True)
class TruncSimplicialAb:
    levels: tuple[FgAbelianGroup, ...]
    faces: tuple[tuple[IntMatrix, ...], ...]  # faces[0] is empty
    degens: tuple[tuple[IntMatrix, ...], ...]  # degens[n] is empty

    @property
    def n(self) -> int:
        return len(self.levels) - 1

    def _eq(self, A: IntMatrix, B: IntMatrix, k: int) -> bool:
        """Equality of two maps into level ``k``."""
        R = self.levels[k].relation_matrix()
        D = A - B
        return all(lattice_contains(R, D.column(j)) for j in range(D.cols))

    def check_identities(self) -> bool:
        return not simplicial_identity_failures(self.faces, self.degens, self.n, lambda a, b: a @ b, self._eq)


def simplicial_identity_failures(faces, degens, n: int, comp, eq) -> list[str]:
    """Names of violated simplicial identities (``comp(a, b)`` is ``a`` after ``b``)."""
    bad = []
    for k in range(2, n + 1):
        for j in range(k + 1):
            for i in range(j):
                if not eq(comp(faces[k - 1][i], faces[k][j]), comp(faces[k - 1][j - 1], faces[k][i]), k - 2):
                    bad.append(f"d{i} d{j} = d{j - 1} d{i} at level {k}")
    for k in range(n):
        m = k + 1
        for j in range(k + 1):
            s = degens[k][j]
            for i in range(m + 1):
                lhs = comp(faces[m][i], s)
                if i < j:
                    rhs = comp(degens[k - 1][j - 1], faces[k][i]) if k >= 1 else None
                elif i in (j, j + 1):
                    rhs = "id"
                else:
                    rhs = comp(degens[k - 1][j], faces[k][i - 1]) if k >= 1 else None
                if rhs is None:
                    continue
                if rhs == "id":
                    if not eq(lhs, _identity_like(lhs), k):
                        bad.append(f"d{i} s{j} = id at level {k}")
                elif not eq(lhs, rhs, k):
                    bad.append(f"d{i} s{j} at level {k}")
    for k in range(n - 1):
        for j in range(k + 1):
            for i in range(j + 1):
                if not eq(comp(degens[k + 1][i], degens[k][j]), comp(degens[k + 1][j + 1], degens[k][i]), k + 2):
                    bad.append(f"s{i} s{j} = s{j + 1} s{i} at level {k}")
    return bad


def _identity_like(A):
    if isinstance(A, IntMatrix):
        return IntMatrix.identity(A.rows)
    return MonoidHom.identity(A.source)


def constant_ab(G: FgAbelianGroup, n: int) -> TruncSimplicialAb:
    I = IntMatrix.identity(G.ngens)
    faces = tuple(tuple(I for _ in range(k + 1)) if k else () for k in range(n + 1))
    degens = tuple(tuple(I for _ in range(k + 1)) if k < n else () for k in range(n + 1))
    return TruncSimplicialAb(tuple(G for _ in range(n + 1)), faces, degens)


def _subquotient(K: IntMatrix, L: Sequence[Sequence[int]]) -> FgAbelianGroup:
    """``span(K) / span(L)`` for a basis ``K`` (columns) and ``L`` inside it."""
    coords = []
    for v in L:
        c = solve_integer(K, v)
        if c is None:  # pragma: no cover - L lies in span(K) by construction
            raise ValueError("sublattice is not contained in the lattice")
        coords.append(c)
    return cokernel(IntMatrix.from_columns(coords, K.cols))


def moore_homotopy(X: TruncSimplicialAb, i: int) -> FgAbelianGroup:
    """``pi_i`` as homology of the alternating-face complex (same as the
    normalized Moore complex) at degree ``i``; needs level ``i + 1``."""
    if i + 1 > X.n:
        raise TruncationTooLow(f"pi_{i} needs level {i + 1}, truncation is {X.n}")

    def boundary(k):
        G = X.levels[k]
        D = IntMatrix.zeros(X.levels[k - 1].ngens, G.ngens)
        for j, d in enumerate(X.faces[k]):
            D = D + d if j % 2 == 0 else D - d
        return D

    Gi = X.levels[i]
    Ri = Gi.relation_matrix()
    if i == 0:
        K = IntMatrix.identity(Gi.ngens)
    else:
        Rl = X.levels[i - 1].relation_matrix()
        D = boundary(i)
        # x with D x in span(Rl)
        M = D.hstack(-Rl) if Rl.cols else D
        B = kernel_basis(M)
        K = _lattice_basis_of([B.column(j)[: Gi.ngens] for j in range(B.cols)] + [Ri.column(j) for j in range(Ri.cols)], Gi.ngens)
    Dn = boundary(i + 1)
    L = [Dn.column(j) for j in range(Dn.cols)] + [Ri.column(j) for j in range(Ri.cols)]
    return _subquotient(K, L)


def _lattice_basis_of(vectors, n: int) -> IntMatrix:
    if not vectors:
        return IntMatrix.zeros(n, 0)
    A = IntMatrix.from_columns(vectors, n)
    s = smith(A)
    cols = [tuple(d * x for x in s.U_inv.column(i)) for i, d in enumerate(s.diagonal) if d]
    return IntMatrix.from_columns(cols, n)


# ---------------------------------------------------------------------------
# simplicial monoids


@dataclass(frozen=True)
class TruncSimplicialMonoid:
    levels: tuple[MonoidPresentation, ...]
    faces: tuple[tuple[MonoidHom, ...], ...]
    degens: tuple[tuple[MonoidHom, ...], ...]

    @property
    def n(self) -> int:
        return len(self.levels) - 1

    def check_identities(self) -> list[str]:
        def comp(a, b):
            return b.compose(a)

        def eq(f, g, k):
            return all(mon.equivalent(f.target, x, y) for x, y in zip(f.images, g.images))

        return simplicial_identity_failures(self.faces, self.degens, self.n, comp, eq)


def power(M: MonoidPresentation, k: int) -> MonoidPresentation:
    """``M^k`` (block generators ``g_c`` for copy ``c``)."""
    g = M.n_gens
    rels = []
    for c in range(k):
        for a, b in M.relations:
            pa = [0] * (g * k)
            pb = [0] * (g * k)
            pa[c * g : (c + 1) * g] = a
            pb[c * g : (c + 1) * g] = b
            rels.append((tuple(pa), tuple(pb)))
    names = tuple(f"{x}_{c}" for c in range(k) for x in M.names)
    return MonoidPresentation(g * k, tuple(rels), names)


def _block(g: int, k: int, c: int, v: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (g * k)
    out[c * g : (c + 1) * g] = v
    return tuple(out)


def bar(M: MonoidPresentation, n: int) -> TruncSimplicialMonoid:
    g = M.n_gens
    levels = tuple(power(M, k) for k in range(n + 1))
    faces = [()]
    for k in range(1, n + 1):
        fk = []
        for i in range(k + 1):
            imgs = []
            for c in range(k):
                for x in range(g):
                    e = M.unit(x)
                    if i == 0:
                        imgs.append(_block(g, k - 1, c - 1, e) if c >= 1 else (0,) * (g * (k - 1)))
                    elif i == k:
                        imgs.append(_block(g, k - 1, c, e) if c < k - 1 else (0,) * (g * (k - 1)))
                    else:
                        tgt = c if c < i else c - 1
                        imgs.append(_block(g, k - 1, tgt, e))
            fk.append(MonoidHom(levels[k], levels[k - 1], tuple(imgs)))
        faces.append(tuple(fk))
    degens = []
    for k in range(n + 1):
        if k == n:
            degens.append(())
            continue
        sk = []
        for j in range(k + 1):
            imgs = []
            for c in range(k):
                tgt = c if c < j else c + 1
                for x in range(g):
                    imgs.append(_block(g, k + 1, tgt, M.unit(x)))
            sk.append(MonoidHom(levels[k], levels[k + 1], tuple(imgs)))
        degens.append(tuple(sk))
    return TruncSimplicialMonoid(levels, tuple(faces), tuple(degens))


def constant_monoid(M: MonoidPresentation, n: int) -> TruncSimplicialMonoid:
    I = MonoidHom.identity(M)
    faces = tuple(tuple(I for _ in range(k + 1)) if k else () for k in range(n + 1))
    degens = tuple(tuple(I for _ in range(k + 1)) if k < n else () for k in range(n + 1))
    return TruncSimplicialMonoid(tuple(M for _ in range(n + 1)), faces, degens)


def degreewise_gp(X: TruncSimplicialMonoid) -> TruncSimplicialAb:
    levels = tuple(mon.group_completion(L).group for L in X.levels)
    faces = tuple(tuple(mon.gp_hom_matrix(d) for d in fk) for fk in X.faces)
    degens = tuple(tuple(mon.gp_hom_matrix(s) for s in sk) for sk in X.degens)
    return TruncSimplicialAb(levels, faces, degens)


def pi0_monoid(X: TruncSimplicialMonoid) -> MonoidPresentation:
    """Coequalizer of ``d0, d1`` from level 1 to level 0."""
    L0 = X.levels[0]
    if X.n < 1:
        return L0
    d0, d1 = X.faces[1]
    extra = tuple((d0(X.levels[1].unit(i)), d1(X.levels[1].unit(i))) for i in range(X.levels[1].n_gens))
    extra = tuple((a, b) for a, b in extra if a != b)
    return MonoidPresentation(L0.n_gens, tuple(L0.relations) + extra, L0.names)


def is_grouplike(X: TruncSimplicialMonoid) -> bool:
    P = pi0_monoid(X)
    return len(mon.unit_generators(P)) == P.n_gens


# ---------------------------------------------------------------------------
# bar construction invariants


def pi1_of_bar(M: MonoidPresentation) -> FgAbelianGroup:
    """``pi_1`` of the classifying space: the abelian group on the generators
    of ``M`` modulo its relations (Eckmann-Hilton makes it abelian)."""
    cols = [tuple(a - b for a, b in zip(x, y)) for x, y in M.relations]
    return cokernel(IntMatrix.from_columns(cols, M.n_gens))


def normalized_bar_boundary(table: np.ndarray, identity: int, k: int) -> IntMatrix:
    """Boundary ``N_k -> N_{k-1}`` of the normalized bar complex."""
    n = table.shape[0]
    if k == 0:
        return IntMatrix.zeros(0, 0)
    full = _accel.bar_boundary(table, k)

    def nondeg(m):
        out = []
        for idx in range(n**m):
            t, ok = idx, True
            for _ in range(m):
                if t % n == identity:
                    ok = False
                    break
                t //= n
            if ok:
                out.append(idx)
        return out

    rows, cols = nondeg(k - 1), nondeg(k)
    sub = full[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64)
    return IntMatrix(sub.tolist(), len(rows), len(cols))


def bar_homology(M: MonoidPresentation, d: int) -> list[FgAbelianGroup]:
    """``H_0 .. H_d`` of the classifying space of a finite monoid."""
    if d > BAR_MAX_DEGREE:
        raise TooLarge(f"degree {d} exceeds {BAR_MAX_DEGREE}")
    elems = mon.finite_elements(M)
    if elems is None:
        raise TooLarge("monoid is not finite")
    if len(elems) > BAR_MAX_ORDER:
        raise TooLarge(f"order {len(elems)} exceeds {BAR_MAX_ORDER}")
    m = len(elems) - 1
    if m ** (d + 1) * max(m**d, 1) > BAR_MAX_CELLS and m > 1:
        raise TooLarge("bar complex too large for exact Smith normal form")
    elems, table = mon.multiplication_table(M, elems)
    table = np.array(table, dtype=np.int64)
    ident = elems.index(mon.normal_form(M, M.zero()) if M.n_gens else ())
    D = [normalized_bar_boundary(table, ident, k) for k in range(d + 2)]
    out = []
    for i in range(d + 1):
        d_in = D[i + 1]
        d_out = D[i] if i > 0 else IntMatrix.zeros(0, d_in.rows)
        out.append(complex_homology(d_in, d_out))
    return out


def group_as_monoid(G: FgAbelianGroup) -> MonoidPresentation:
    """A finite abelian group presented as a monoid (``Z/n = <a | n a = 0>``)."""
    if G.free_rank:
        raise ValueError("only finite groups are presented this way")
    n = len(G.torsion)
    rels = tuple((tuple(d * int(i == j) for j in range(n)), (0,) * n) for i, d in enumerate(G.torsion))
    return MonoidPresentation(n, rels, tuple(f"g{i}" for i in range(n)))
