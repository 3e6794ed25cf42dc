"""Finite-dimensional quotient algebras ``k[x]/I`` with an explicit k-basis.

The basis consists of standard monomials for a degree-compatible order,
found from a Macaulay matrix.  A basis is only accepted after a closure
check: the multiplication matrices commute, kill the relations on ``1``,
and send ``1`` to each basis monomial, which proves ``k[x]/I`` is
isomorphic to the span of the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

from .errors import ResourceExceeded, TooLarge
from .ring import Echelon, Field, Poly, Ring, field_kernel, field_rank, monomials_up_to, solve_dense

Exp = tuple[int, ...]
Vec = tuple  # coordinates in the basis


def _order_key(e: Exp):
    # smallest key = largest monomial (degree first, then reverse lexicographic)
    return (-sum(e), tuple(reversed(e)))


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    ring: Ring
    basis: tuple[Exp, ...]
    mult: tuple[tuple[Vec, ...], ...]  # mult[i][s] = coordinates of x_i * basis[s]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def zero(self) -> Vec:
        F = self.field
        return tuple(F(0) for _ in self.basis)

    def one(self) -> Vec:
        return self.unit_vector(0) if self.dim else ()

    def unit_vector(self, k: int) -> Vec:
        F = self.field
        return tuple(F(int(i == k)) for i in range(self.dim))

    def add(self, a: Vec, b: Vec) -> Vec:
        F = self.field
        return tuple(F(x + y) for x, y in zip(a, b))

    def sub(self, a: Vec, b: Vec) -> Vec:
        F = self.field
        return tuple(F(x - y) for x, y in zip(a, b))

    def scale(self, c, a: Vec) -> Vec:
        F = self.field
        return tuple(F(c * x) for x in a)

    def is_zero(self, a: Vec) -> bool:
        return all(x == 0 for x in a)

    def mul_var(self, i: int, a: Vec) -> Vec:
        out = self.zero()
        for s, c in enumerate(a):
            if c:
                out = self.add(out, self.scale(c, self.mult[i][s]))
        return out

    def monomial(self, e: Exp) -> Vec:
        key = ("mono", e)
        if key in self._cache:
            return self._cache[key]
        if e in self._index:
            v = self.unit_vector(self._index[e])
        else:
            i = next(k for k, x in enumerate(e) if x)
            v = self.mul_var(i, self.monomial(tuple(x - (k == i) for k, x in enumerate(e))))
        self._cache[key] = v
        return v

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.basis)}

    @cached_property
    def table(self) -> tuple[tuple[Vec, ...], ...]:
        return tuple(tuple(self.monomial(tuple(x + y for x, y in zip(a, b))) for b in self.basis) for a in self.basis)

    def mul(self, a: Vec, b: Vec) -> Vec:
        out = self.zero()
        for s, x in enumerate(a):
            if not x:
                continue
            for t, y in enumerate(b):
                if y:
                    out = self.add(out, self.scale(x * y, self.table[s][t]))
        return out

    def power(self, a: Vec, k: int) -> Vec:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def vec(self, p: Poly) -> Vec:
        """Coordinates of the class of ``p``."""
        out = self.zero()
        for e, c in p.terms.items():
            out = self.add(out, self.scale(c, self.monomial(e)))
        return out

    def poly(self, a: Vec) -> Poly:
        return Poly(self.field, self.nvars, {e: c for e, c in zip(self.basis, a) if c})

    def evaluate(self, p: Poly, images: Sequence[Vec]) -> Vec:
        """``p(images)``: substitute algebra elements for the variables of ``p``."""
        out = self.zero()
        for e, c in p.terms.items():
            t = self.one()
            for i, k in enumerate(e):
                if k:
                    t = self.mul(t, self.power(images[i], k))
            out = self.add(out, self.scale(c, t))
        return out

    def mult_matrix(self, a: Vec) -> list[list]:
        """Matrix of multiplication by ``a`` (rows = output coordinates)."""
        cols = [self.mul(a, self.unit_vector(s)) for s in range(self.dim)]
        return [[cols[s][r] for s in range(self.dim)] for r in range(self.dim)]

    def is_unit(self, a: Vec) -> bool:
        return field_rank(self.field, self.mult_matrix(a)) == self.dim

    def inverse(self, a: Vec) -> Vec | None:
        x = solve_dense(self.field, self.mult_matrix(a), self.one())
        return None if x is None else tuple(x)

    def elements(self, cap: int = 6561):
        q = self.field.char
        if not q:
            raise ValueError("infinite field")
        if q**self.dim > cap:
            raise TooLarge(f"{q}^{self.dim} elements exceed the cap {cap}")
        F = self.field
        for t in product(range(q), repeat=self.dim):
            yield tuple(F(x) for x in t)

    def radical_basis(self) -> list[Vec]:
        """Basis of the nilradical (trace form radical; characteristic 0 only)."""
        if self.field.char:
            raise ValueError("trace form radical needs characteristic 0")
        F = self.field
        mats = [self.mult_matrix(self.unit_vector(s)) for s in range(self.dim)]

        def trace_prod(A, B):
            n = self.dim
            return F(sum(A[i][k] * B[k][i] for i in range(n) for k in range(n)))

        rows = [[trace_prod(mats[s], mats[t]) for t in range(self.dim)] for s in range(self.dim)]
        return [tuple(v) for v in field_kernel(F, rows, self.dim)]

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": [self.ring.fmt(Poly.monomial(self.field, self.nvars, e)) for e in self.basis]}


def _macaulay(ring: Ring, D: int) -> Echelon:
    F = ring.field
    E = Echelon(F)
    n = ring.nvars
    for g in ring.relations:
        if g.is_zero():
            continue
        dg = g.degree()
        for m in monomials_up_to(n, max(0, D - dg)):
            E.add({_order_key(tuple(a + b for a, b in zip(e, m))): c for e, c in g.terms.items()})
    return E


def finite_algebra(ring: Ring, max_degree: int = 12) -> FiniteAlgebra:
    """The quotient as a finite-dimensional algebra; raises ResourceExceeded
    if no certified basis is found below ``max_degree``."""
    n = ring.nvars
    F = ring.field
    for D in range(1, max_degree + 1):
        E = _macaulay(ring, D)
        lead = set(E.basis)
        top = [e for e in monomials_up_to(n, D) if sum(e) == D]
        if any(_order_key(e) not in lead for e in top):
            continue
        std = sorted((e for e in monomials_up_to(n, D - 1) if _order_key(e) not in lead), key=lambda e: (sum(e), e))
        idx = {e: i for i, e in enumerate(std)}

        def coords(e):
            k = _order_key(e)
            if k not in lead:
                return tuple(F(int(j == idx[e])) for j in range(len(std)))
            rest, _ = E._reduce({k: F(1)}, {})
            out = [F(0)] * len(std)
            for kk, c in rest.items():
                out[idx[_key_to_exp(kk)]] = F(c)
            return tuple(out)

        if not std:
            return FiniteAlgebra(ring, (), tuple(() for _ in range(n)))
        mult = tuple(tuple(coords(tuple(x + (k == i) for k, x in enumerate(s))) for s in std) for i in range(n))
        A = FiniteAlgebra(ring, tuple(std), mult)
        if _closure_ok(A):
            return A
    raise ResourceExceeded(f"no certified finite basis up to degree {max_degree}")


def _key_to_exp(k) -> Exp:
    return tuple(reversed(k[1]))


def _closure_ok(A: FiniteAlgebra) -> bool:
    if A.basis[0] != (0,) * A.nvars:
        return False
    n = A.nvars
    for i in range(n):
        for j in range(i + 1, n):
            for s in range(A.dim):
                u = A.unit_vector(s)
                if A.mul_var(i, A.mul_var(j, u)) != A.mul_var(j, A.mul_var(i, u)):
                    return False
    # each basis monomial is x^s applied to 1, computed through the matrices
    for s, e in enumerate(A.basis):
        v = A.one()
        for i, k in enumerate(e):
            for _ in range(k):
                v = A.mul_var(i, v)
        if v != A.unit_vector(s):
            return False
    for g in A.ring.relations:
        acc = A.zero()
        for e, c in g.terms.items():
            v = A.one()
            for i, k in enumerate(e):
                for _ in range(k):
                    v = A.mul_var(i, v)
            acc = A.add(acc, A.scale(c, v))
        if not A.is_zero(acc):
            return False
    return True


def is_finite(ring: Ring, max_degree: int = 12) -> bool:
    try:
        finite_algebra(ring, max_degree)
        return True
    except ResourceExceeded:
        return False


def linear_map_matrix(A: FiniteAlgebra, B: FiniteAlgebra, images: Sequence[Poly]) -> list[list]:
    """Matrix (rows = B coordinates) of the k-linear map induced by the ring
    map sending variable i of ``A.ring`` to ``images[i]`` (polys over B.ring)."""
    imgs = [B.vec(p) for p in images]
    cols = [B.evaluate(Poly.monomial(A.field, A.nvars, e), imgs) for e in A.basis]
    return [[cols[s][r] for s in range(A.dim)] for r in range(B.dim)]


def ring_map_is_well_defined(A: FiniteAlgebra, B: FiniteAlgebra, images: Sequence[Poly]) -> bool:
    imgs = [B.vec(p) for p in images]
    return all(B.is_zero(B.evaluate(g, imgs)) for g in A.ring.relations)
