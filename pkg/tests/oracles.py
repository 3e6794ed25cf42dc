"""Independent reference implementations used only by the tests.

Nothing here imports the algorithms under test: each oracle is either a
brute-force search or a call into sympy.
"""

from __future__ import annotations

from collections import deque
from itertools import product

import sympy
from sympy.matrices.normalforms import smith_normal_form


def invariant_factors(rows: list[list[int]], ncols: int | None = None) -> list[int]:
    """Nonzero diagonal of the Smith form, via sympy."""
    if not rows or (ncols == 0):
        return []
    M = sympy.Matrix(rows)
    D = smith_normal_form(M, domain=sympy.ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)


def cokernel_invariants(rows: list[list[int]], nrows: int) -> tuple[int, tuple[int, ...]]:
    """(free rank, nontrivial torsion) of Z^nrows / column span."""
    if not rows or not rows[0]:
        return nrows, ()
    d = invariant_factors(rows)
    return nrows - len(d), tuple(x for x in d if x != 1)


def monoid_cokernel(n: int, relations) -> tuple[int, tuple[int, ...]]:
    """Group completion of <x_1..x_n | a = b> as Z^n / span(a - b)."""
    cols = [[x - y for x, y in zip(a, b)] for a, b in relations]
    if not cols:
        return n, ()
    rows = [[c[i] for c in cols] for i in range(n)]
    return cokernel_invariants(rows, n)


def bfs_congruent(relations, u, v, max_degree: int = 8) -> bool:
    """Breadth-first congruence closure on words of degree at most ``max_degree``."""
    u, v = tuple(u), tuple(v)
    if u == v:
        return True
    moves = [(tuple(a), tuple(b)) for a, b in relations] + [(tuple(b), tuple(a)) for a, b in relations]
    seen = {u}
    todo = deque([u])
    while todo:
        w = todo.popleft()
        for a, b in moves:
            if all(x >= y for x, y in zip(w, a)):
                z = tuple(x - y + t for x, y, t in zip(w, a, b))
                if sum(z) > max_degree or z in seen:
                    continue
                if z == v:
                    return True
                seen.add(z)
                todo.append(z)
    return False


def minimal_solutions(A: list[list[int]], bound: int) -> list[tuple[int, ...]]:
    """Minimal nonzero x in {0..bound}^m with A x = 0, sorted."""
    m = len(A[0])
    sols = [x for x in product(range(bound + 1), repeat=m) if any(x) and all(sum(r[j] * x[j] for j in range(m)) == 0 for r in A)]
    out = []
    for x in sols:
        if not any(y != x and all(a <= b for a, b in zip(y, x)) for y in sols):
            out.append(x)
    return sorted(out)


def binomial_ideal_contains(nvars: int, relations, u, v) -> bool:
    """Is x^u - x^v in the ideal generated by x^a - x^b?  (sympy Groebner)"""
    xs = sympy.symbols(f"x0:{nvars}")

    def mono(e):
        return sympy.Mul(*[x**k for x, k in zip(xs, e)])

    gens = [mono(a) - mono(b) for a, b in relations]
    target = mono(u) - mono(v)
    if not gens:
        return sympy.expand(target) == 0
    G = sympy.groebner(gens, *xs, order="grevlex")
    return G.contains(target)


def jacobian_corank(polys: list[str], names: list[str], point: list, modulus: int | None = None) -> int:
    """dim_k of Omega_{k[x]/(f)} at a point: n minus the Jacobian rank there."""
    xs = sympy.symbols(names)
    fs = [sympy.sympify(p, locals=dict(zip(names, xs))) for p in polys]
    n = len(xs)
    if not fs:
        return n
    J = sympy.Matrix([[sympy.diff(f, x) for x in xs] for f in fs]).subs(dict(zip(xs, point)))
    if modulus:
        J = J.applyfunc(lambda e: sympy.Integer(e) % modulus)
        from sympy.polys.matrices import DomainMatrix

        r = DomainMatrix.from_Matrix(J).convert_to(sympy.GF(modulus)).rank()
        return n - r
    return n - J.rank()


def finite_group_homology(torsion: tuple[int, ...], degree: int) -> list[tuple[int, tuple[int, ...]]]:
    """Integral homology H_0..H_degree of a finite abelian group given by its
    cyclic factors, by the Kunneth formula applied to cyclic groups.

    Each group is returned as (free rank, sorted torsion).  Handles at most
    two cyclic factors, which is all the corpus needs."""
    from math import gcd

    def cyclic(n, k):
        if k == 0:
            return (1, ())
        return (0, (n,)) if k % 2 == 1 else (0, ())

    if not torsion:
        return [(1, ())] + [(0, ())] * degree
    if len(torsion) == 1:
        return [cyclic(torsion[0], k) for k in range(degree + 1)]
    a, b = torsion
    g = gcd(a, b)
    out = []
    for k in range(degree + 1):
        free, tors = 0, []
        for i in range(k + 1):
            # tensor part
            x, y = cyclic(a, i), cyclic(b, k - i)
            if x[0] and y[0]:
                free += 1
            elif x[0]:
                tors += list(y[1])
            elif y[0]:
                tors += list(x[1])
            elif x[1] and y[1]:
                tors.append(g)
        for i in range(k):
            # Tor part in degree i + j = k - 1
            x, y = cyclic(a, i), cyclic(b, k - 1 - i)
            if x[1] and y[1]:
                tors.append(g)
        out.append((free, tuple(sorted(t for t in tors if t != 1))))
    return out


# corpus maps between free monoid charts, where toric_dims applies
FREE_TORIC = ["id A1", "pt -> A1", "x2", "x3", "x5", "node", "A1 -> A2"]


def toric_dims(a_images, b: int, p: int) -> tuple[int, int]:
    """For a map N^a -> N^b of free monoids with the monomial ring map, the
    log cotangent complex at a point is Z^a -> Z^b tensored with k.
    Returns (dim coker, dim ker) of that matrix over k of characteristic p."""
    if not a_images:
        return b, 0
    Mx = sympy.Matrix([list(v) for v in a_images]).T
    if p:
        from sympy.polys.matrices import DomainMatrix

        r = DomainMatrix.from_Matrix(Mx).convert_to(sympy.GF(p)).rank()
    else:
        r = Mx.rank()
    return b - r, len(a_images) - r
