"""Exact coefficient fields, polynomials, quotient rings and presented modules.

Rings are quotients ``k[x_1..x_n]/(g_1..g_m)``.  Membership questions
(ideal or submodule) are answered with degree-capped Macaulay matrices:
a positive answer always comes with explicit cofactors, so it is a
certificate; a negative answer only means "not found below the cap".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from . import _accel
from .errors import NotAPoint

Exp = tuple[int, ...]

DEFAULT_LIFT_DEGREE = 4


class Field:
    """``QQ`` (char 0) or ``GF(p)``.  Elements are Fractions resp. ints in [0, p)."""

    __slots__ = ("char",)

    def __init__(self, char: int = 0):
        char = int(char)
        if char < 0 or (char and not _is_prime(char)):
            raise ValueError(f"characteristic must be 0 or a prime, got {char}")
        if char >= 2**31:
            raise ValueError("prime characteristic must be below 2**31")
        self.char = char

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def __call__(self, x):
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
        return int(x) % self.char

    def inv(self, x):
        if self.char == 0:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.char)

    def is_zero(self, x) -> bool:
        return self(x) == 0

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# polynomials as {exponent: coefficient}


class Poly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: Mapping[Exp, object] | None = None):
        self.field = field
        self.nvars = nvars
        out = {}
        for e, c in (terms or {}).items():
            c = field(c)
            if c != 0:
                out[tuple(e)] = c
        self.terms = out

    @classmethod
    def const(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, field, nvars, e, c=1):
        return cls(field, nvars, {tuple(e): c})

    @classmethod
    def var(cls, field, nvars, i):
        return cls.monomial(field, nvars, tuple(int(j == i) for j in range(nvars)))

    def _new(self, terms):
        p = Poly.__new__(Poly)
        p.field, p.nvars, p.terms = self.field, self.nvars, terms
        return p

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.field, self.nvars, other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(self.field, self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        F = self.field
        for e, c in other.terms.items():
            v = F(t.get(e, 0) + c)
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._new({e: F(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(F, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        F = self.field
        return Poly(F, self.nvars, {e: v * c for e, v in self.terms.items()})

    def shift(self, m: Exp) -> "Poly":
        return self._new({tuple(a + b for a, b in zip(e, m)): c for e, c in self.terms.items()})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def diff(self, i: int) -> "Poly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return Poly(self.field, self.nvars, t)

    def evaluate(self, point: Sequence) -> object:
        F = self.field
        total = F(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * F(x) ** k
            total = F(total + v)
        return total

    def substitute(self, images: Sequence["Poly"], target_nvars: int | None = None) -> "Poly":
        """Replace variable i by images[i]."""
        n = target_nvars if target_nvars is not None else images[0].nvars if images else 0
        out = Poly(self.field, n)
        for e, c in self.terms.items():
            m = Poly.const(self.field, n, c)
            for img, k in zip(images, e):
                if k:
                    m = m * img**k
            out = out + m
        return out

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def to_str(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), e)):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif self.field.char == 0 and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.to_str([f'x{i}' for i in range(self.nvars)])})"


def monomials_up_to(nvars: int, degree: int) -> list[Exp]:
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


# ---------------------------------------------------------------------------
# exact linear algebra over a field


class Echelon:
    """Incremental column echelon form with combination tracking.

    Vectors are sparse dicts ``key -> coefficient``.  After adding columns
    ``c_0, c_1, ...`` one can ask whether a vector lies in their span and
    get the coefficients."""

    def __init__(self, field: Field):
        self.F = field
        self.basis: dict = {}  # pivot key -> (vector, combination)
        self.count = 0

    def _reduce(self, v: dict, comb: dict) -> tuple[dict, dict]:
        F = self.F
        v = dict(v)
        comb = dict(comb)
        changed = True
        while changed:
            changed = False
            for key in list(v):
                if key in self.basis and v.get(key):
                    bv, bc = self.basis[key]
                    f = v[key]
                    for k2, c2 in bv.items():
                        nv = F(v.get(k2, 0) - f * c2)
                        if nv:
                            v[k2] = nv
                        else:
                            v.pop(k2, None)
                    for k2, c2 in bc.items():
                        nc = F(comb.get(k2, 0) - f * c2)
                        if nc:
                            comb[k2] = nc
                        else:
                            comb.pop(k2, None)
                    changed = True
        return v, comb

    def add(self, v: dict) -> bool:
        """Add a column; returns True if it increased the rank."""
        idx = self.count
        self.count += 1
        v, comb = self._reduce({k: c for k, c in v.items() if c}, {idx: self.F(1)})
        if not v:
            return False
        piv = min(v, key=_sort_key)
        inv = self.F.inv(v[piv])
        v = {k: self.F(c * inv) for k, c in v.items()}
        comb = {k: self.F(c * inv) for k, c in comb.items()}
        # keep basis fully reduced with respect to the new pivot
        for key, (bv, bc) in list(self.basis.items()):
            f = bv.get(piv)
            if f:
                nbv = dict(bv)
                for k2, c2 in v.items():
                    x = self.F(nbv.get(k2, 0) - f * c2)
                    if x:
                        nbv[k2] = x
                    else:
                        nbv.pop(k2, None)
                nbc = dict(bc)
                for k2, c2 in comb.items():
                    x = self.F(nbc.get(k2, 0) - f * c2)
                    if x:
                        nbc[k2] = x
                    else:
                        nbc.pop(k2, None)
                self.basis[key] = (nbv, nbc)
        self.basis[piv] = (v, comb)
        return True

    @property
    def rank(self) -> int:
        return len(self.basis)

    def solve(self, v: dict) -> dict | None:
        """Coefficients ``{column index: c}`` with ``sum c_i col_i = v``."""
        rest, comb = self._reduce({k: c for k, c in v.items() if c}, {})
        if rest:
            return None
        return {k: self.F(-c) for k, c in comb.items() if c}


def _sort_key(k):
    return (repr(type(k)), k)


def field_rank(F: Field, rows: Sequence[Sequence]) -> int:
    """Rank of a dense matrix over ``F``."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if F.char and F.char < 2**31:
        return _accel.rank_mod_p([[F(x) for x in r] for r in rows], F.char)
    E = Echelon(F)
    for j in range(len(rows[0])):
        E.add({i: F(r[j]) for i, r in enumerate(rows) if F(r[j])})
    return E.rank


def field_kernel(F: Field, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of ``{x : A x = 0}`` over ``F`` (from the reduced row echelon form)."""
    A = [[F(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F(x * inv) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [F(x - f * y) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    out = []
    for c in range(ncols):
        if c in pivots:
            continue
        v = [F(0)] * ncols
        v[c] = F(1)
        for i, pc in enumerate(pivots):
            v[pc] = F(-A[i][c])
        out.append(v)
    return out


def solve_dense(F: Field, rows: Sequence[Sequence], b: Sequence) -> list | None:
    """One solution of ``A x = b`` over ``F`` (dense input)."""
    ncols = len(rows[0]) if rows else 0
    E = Echelon(F)
    for j in range(ncols):
        E.add({i: F(r[j]) for i, r in enumerate(rows) if F(r[j])})
    sol = E.solve({i: F(x) for i, x in enumerate(b) if F(x)})
    if sol is None:
        return None
    x = [F(0)] * ncols
    for k, c in sol.items():
        x[k] = c
    return x


# ---------------------------------------------------------------------------
# quotient rings


@dataclass(frozen=True)
class Ring:
    field: Field
    names: tuple[str, ...]
    relations: tuple[Poly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "relations", tuple(r for r in self.relations if not r.is_zero()))

    def __hash__(self):
        return hash((self.field, self.names, self.relations))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> Poly:
        return Poly(self.field, self.nvars)

    def one(self) -> Poly:
        return Poly.const(self.field, self.nvars, 1)

    def const(self, c) -> Poly:
        return Poly.const(self.field, self.nvars, c)

    def var(self, i: int) -> Poly:
        return Poly.var(self.field, self.nvars, i)

    def gen(self, name: str) -> Poly:
        return self.var(self.names.index(name))

    def monomial(self, e: Exp, c=1) -> Poly:
        return Poly.monomial(self.field, self.nvars, e, c)

    def poly(self, terms: Mapping[Exp, object]) -> Poly:
        return Poly(self.field, self.nvars, terms)

    def fmt(self, p: Poly) -> str:
        return p.to_str(self.names)

    # -- points ------------------------------------------------------------
    def is_point(self, pt: Sequence) -> bool:
        return len(pt) == self.nvars and all(r.evaluate(pt) == 0 for r in self.relations)

    def check_point(self, pt: Sequence) -> tuple:
        pt = tuple(self.field(x) for x in pt)
        if not self.is_point(pt):
            raise NotAPoint(f"{pt} does not satisfy the ring relations")
        return pt

    def unit_point(self) -> tuple:
        return tuple(self.field(1) for _ in range(self.nvars))

    def zero_one_points(self) -> list[tuple]:
        """All points with coordinates in {0, 1} (at most 2**12 candidates)."""
        n = self.nvars
        if n > 12:
            return [p for p in [self.unit_point()] if self.is_point(p)]
        out = []
        for mask in range(2**n):
            pt = tuple(self.field((mask >> (n - 1 - i)) & 1) for i in range(n))
            if self.is_point(pt):
                out.append(pt)
        # unit point first
        out.sort(key=lambda p: tuple(-int(x) for x in p))
        return out

    def default_points(self) -> list[tuple]:
        return self.zero_one_points()

    # -- ideal membership ----------------------------------------------------
    def equal(self, a: Poly, b: Poly, max_degree: int = DEFAULT_LIFT_DEGREE) -> bool:
        d = a - b
        if d.is_zero():
            return True
        return self.ideal_lift(d, (), max_degree) is not None

    def ideal_lift(self, f: Poly, gens: Sequence[Poly], max_degree: int = DEFAULT_LIFT_DEGREE):
        """Cofactors ``c`` with ``f = sum c_i gens_i`` modulo the ring ideal."""
        res = module_lift(self, [(g,) for g in gens], (f,), max_degree)
        if res is None:
            return None
        return res


def polynomial_ring(field: Field, names: Sequence[str]) -> Ring:
    return Ring(field, tuple(names), ())


def _vec_terms(vec: Sequence[Poly]) -> dict:
    out = {}
    for i, p in enumerate(vec):
        for e, c in p.terms.items():
            out[(i, e)] = c
    return out


def module_lift(
    ring: Ring,
    gens: Sequence[Sequence[Poly]],
    target: Sequence[Poly],
    max_degree: int = DEFAULT_LIFT_DEGREE,
) -> list[Poly] | None:
    """Cofactors ``c_j`` with ``target = sum_j c_j gens_j`` in ``R^r``,
    modulo ``(ring ideal) R^r``, searching cofactors of degree <= max_degree.

    The returned cofactors are certificates: the identity holds exactly in
    the polynomial ring up to a combination of ring relations."""
    r = len(target)
    F = ring.field
    n = ring.nvars
    tv = _vec_terms(target)
    if not tv:
        return [ring.zero() for _ in gens]
    extra = max(0, max((sum(e) for (_, e) in tv), default=0))
    # cofactors may need the target's degree on top of the cap
    for D in range(0, max_degree + extra + 1):
        E = Echelon(F)
        labels = []
        monos = monomials_up_to(n, D)
        for j, g in enumerate(gens):
            gt = _vec_terms(g)
            if not gt:
                continue
            for m in monos:
                E.add({(i, tuple(a + b for a, b in zip(e, m))): c for (i, e), c in gt.items()})
                labels.append(("g", j, m))
        rel_monos = monomials_up_to(n, D + extra) if ring.relations else []
        for h in ring.relations:
            for i in range(r):
                for m in rel_monos:
                    E.add({(i, tuple(a + b for a, b in zip(e, m))): c for e, c in h.terms.items()})
                    labels.append(("h", i, m))
        sol = E.solve(tv)
        if sol is not None:
            cof = [dict() for _ in gens]
            for k, c in sol.items():
                kind, j, m = labels[k]
                if kind == "g":
                    cof[j][m] = F(cof[j].get(m, 0) + c)
            return [ring.poly(c) for c in cof]
    return None


def vec_add(a: Sequence[Poly], b: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(c: Poly, a: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(c * x for x in a)


def vec_zero(ring: Ring, r: int) -> tuple[Poly, ...]:
    return tuple(ring.zero() for _ in range(r))


def vec_unit(ring: Ring, r: int, i: int, c=None) -> tuple[Poly, ...]:
    c = ring.one() if c is None else c
    return tuple(c if j == i else ring.zero() for j in range(r))


def vec_combine(ring: Ring, coeffs: Sequence[Poly], vectors: Sequence[Sequence[Poly]], r: int) -> tuple[Poly, ...]:
    out = vec_zero(ring, r)
    for c, v in zip(coeffs, vectors):
        if not c.is_zero():
            out = vec_add(out, vec_scale(c, v))
    return out


# ---------------------------------------------------------------------------
# presented modules


@dataclass(frozen=True)
class ModulePresentation:
    """``R^labels / (relations)``; each relation is a vector of length ``len(labels)``."""

    ring: Ring
    labels: tuple[str, ...]
    relations: tuple[tuple[Poly, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        rels = tuple(tuple(v) for v in self.relations if any(not p.is_zero() for p in v))
        for v in rels:
            if len(v) != len(self.labels):
                raise ValueError("relation length does not match generator count")
        object.__setattr__(self, "relations", rels)

    def __hash__(self):
        return hash((self.ring, self.labels, self.relations))

    @property
    def ngens(self) -> int:
        return len(self.labels)

    def unit(self, i: int) -> tuple[Poly, ...]:
        return vec_unit(self.ring, self.ngens, i)

    def zero(self) -> tuple[Poly, ...]:
        return vec_zero(self.ring, self.ngens)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def lift(self, v: Sequence[Poly], max_degree: int = DEFAULT_LIFT_DEGREE):
        """Cofactors expressing ``v`` in the relation submodule, or None."""
        return module_lift(self.ring, self.relations, v, max_degree)

    def is_zero_element(self, v: Sequence[Poly], max_degree: int = DEFAULT_LIFT_DEGREE) -> bool:
        if all(p.is_zero() for p in v):
            return True
        return self.lift(v, max_degree) is not None

    def is_zero_module(self, max_degree: int = DEFAULT_LIFT_DEGREE) -> bool:
        return all(self.is_zero_element(self.unit(i), max_degree) for i in range(self.ngens))

    def evaluate(self, pt: Sequence) -> int:
        """``dim_k (M ⊗ k(pt))``."""
        pt = self.ring.check_point(pt)
        rows = [[p.evaluate(pt) for p in rel] for rel in self.relations]
        if not rows:
            return self.ngens
        # relation vectors are rows; rank over k
        return self.ngens - field_rank(self.ring.field, rows)

    def relation_matrix_at(self, pt: Sequence) -> list[list]:
        pt = self.ring.check_point(pt)
        return [[p.evaluate(pt) for p in rel] for rel in self.relations]

    def with_relations(self, extra: Iterable[Sequence[Poly]]) -> "ModulePresentation":
        return ModulePresentation(self.ring, self.labels, self.relations + tuple(tuple(v) for v in extra))

    def to_json(self) -> dict:
        f = self.ring.fmt
        return {"gens": list(self.labels), "rels": [[f(p) for p in v] for v in self.relations]}

    def __str__(self):
        f = self.ring.fmt
        rels = []
        for v in self.relations:
            terms = [_coef_str(f(p), lab, len(p.terms)) for p, lab in zip(v, self.labels) if not p.is_zero()]
            rels.append(" + ".join(terms))
        return f"<{', '.join(self.labels)} | {'; '.join(rels)}>"


def _coef_str(c: str, lab: str, nterms: int) -> str:
    if nterms > 1:
        return f"({c})*{lab}"
    if c == "1":
        return lab
    if c == "-1":
        return f"-{lab}"
    return f"{c}*{lab}"


def free_module(ring: Ring, labels: Sequence[str]) -> ModulePresentation:
    return ModulePresentation(ring, tuple(labels), ())


def direct_sum(*mods: ModulePresentation) -> ModulePresentation:
    ring = mods[0].ring
    labels = tuple(l for M in mods for l in M.labels)
    rels = []
    off = 0
    total = len(labels)
    for M in mods:
        for v in M.relations:
            w = [ring.zero()] * total
            w[off : off + M.ngens] = v
            rels.append(tuple(w))
        off += M.ngens
    return ModulePresentation(ring, labels, tuple(rels))


@dataclass(frozen=True)
class ModuleMap:
    source: ModulePresentation
    target: ModulePresentation
    images: tuple[tuple[Poly, ...], ...]

    def __call__(self, v: Sequence[Poly]) -> tuple[Poly, ...]:
        return vec_combine(self.target.ring, v, self.images, self.target.ngens)

    def violation(self, max_degree: int = DEFAULT_LIFT_DEGREE):
        """A source relation whose image is not certified zero, or None."""
        for rel in self.source.relations:
            if not self.target.is_zero_element(self(rel), max_degree):
                return rel
        return None

    def is_well_defined(self, max_degree: int = DEFAULT_LIFT_DEGREE) -> bool:
        return self.violation(max_degree) is None

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``other`` after ``self``."""
        return ModuleMap(self.source, other.target, tuple(other(v) for v in self.images))


@dataclass
class IsoCertificate:
    ok: bool
    forward: ModuleMap
    backward: ModuleMap
    failure: str = ""


def certify_isomorphism(f: ModuleMap, g: ModuleMap, max_degree: int = DEFAULT_LIFT_DEGREE) -> IsoCertificate:
    """Check that ``f`` and ``g`` are well-defined and mutually inverse."""
    if f.violation(max_degree) is not None:
        return IsoCertificate(False, f, g, "forward map does not respect relations")
    if g.violation(max_degree) is not None:
        return IsoCertificate(False, f, g, "backward map does not respect relations")
    A, B = f.source, f.target
    for i in range(A.ngens):
        d = tuple(x - y for x, y in zip(g(f.images[i]), A.unit(i)))
        if not A.is_zero_element(d, max_degree):
            return IsoCertificate(False, f, g, f"g∘f differs from the identity on {A.labels[i]}")
    for j in range(B.ngens):
        d = tuple(x - y for x, y in zip(f(g.images[j]), B.unit(j)))
        if not B.is_zero_element(d, max_degree):
            return IsoCertificate(False, f, g, f"f∘g differs from the identity on {B.labels[j]}")
    return IsoCertificate(True, f, g)


def identity_map(M: ModulePresentation) -> ModuleMap:
    return ModuleMap(M, M, tuple(M.unit(i) for i in range(M.ngens)))


def base_change_module(M: ModulePresentation, ring: Ring, images: Sequence[Poly]) -> ModulePresentation:
    """``S ⊗_R M`` along the ring map sending variable i of R to images[i]."""
    rels = tuple(tuple(p.substitute(images, ring.nvars) for p in v) for v in M.relations)
    return ModulePresentation(ring, M.labels, rels)
