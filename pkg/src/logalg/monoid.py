"""Finitely presented commutative monoids and their homomorphisms.

A monoid is written additively: generators ``e_1..e_n`` and relations
``a = b`` between exponent vectors.  The word problem is solved by the
reduced Groebner basis of the pure-difference ideal ``(x^a - x^b)``.
Constructions that need lattice geometry (saturation, exactness,
repletion, fiber products) work inside the group completion, which must
then be torsion free or carry its torsion explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Callable, Sequence

from . import binomial
from .binomial import BinomialGB
from .errors import (
    IllDefinedMap,
    NotIntegral,
    NotVirtuallySurjective,
    ResourceExceeded,
    TorsionGp,
)
from .exactla import (
    DEFAULT_HILBERT_CAP,
    FgAbelianGroup,
    IntMatrix,
    cokernel,
    hilbert_basis,
    kernel_basis,
    smith,
)

Exp = tuple[int, ...]


def _vec(v) -> Exp:
    return tuple(int(x) for x in v)


def _default_names(n: int) -> tuple[str, ...]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if n <= len(letters):
        return tuple(letters[:n])
    return tuple(f"g{i}" for i in range(n))


@dataclass(frozen=True)
class MonoidPresentation:
    n_gens: int
    relations: tuple[tuple[Exp, Exp], ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        rels = tuple((_vec(a), _vec(b)) for a, b in self.relations)
        for a, b in rels:
            if len(a) != self.n_gens or len(b) != self.n_gens:
                raise ValueError("relation dimension does not match generator count")
            if min(a + b, default=0) < 0:
                raise ValueError("relations must use nonnegative exponents")
        object.__setattr__(self, "relations", rels)
        names = tuple(self.names) or _default_names(self.n_gens)
        if len(names) != self.n_gens:
            raise ValueError("names do not match generator count")
        object.__setattr__(self, "names", names)

    # -- constructors ---------------------------------------------------------
    @classmethod
    def free(cls, n: int, names: Sequence[str] = ()) -> "MonoidPresentation":
        return cls(n, (), tuple(names))

    @classmethod
    def trivial(cls) -> "MonoidPresentation":
        return cls(0)

    def unit(self, i: int) -> Exp:
        return tuple(int(j == i) for j in range(self.n_gens))

    def zero(self) -> Exp:
        return (0,) * self.n_gens

    # -- caches (write-once) -------------------------------------------------
    @cached_property
    def gb(self) -> BinomialGB:
        return binomial.groebner(self.n_gens, self.relations)

    @cached_property
    def lattice_gb(self) -> BinomialGB:
        return binomial.saturate_all(self.n_gens, self.relations)

    @cached_property
    def _gp(self) -> "GroupCompletionData":
        return _group_completion(self)

    def sorted_relations(self) -> tuple[tuple[Exp, Exp], ...]:
        return tuple(sorted(self.relations))

    def __str__(self) -> str:
        def word(v):
            parts = []
            for c, nm in zip(v, self.names):
                if c == 1:
                    parts.append(nm)
                elif c:
                    parts.append(f"{c} {nm}")
            return " + ".join(parts) or "0"

        rels = ", ".join(f"{word(a)} = {word(b)}" for a, b in self.relations)
        return f"<{','.join(self.names)} | {rels}>"

    def to_json(self) -> dict:
        return {"gens": list(self.names), "rels": [[list(a), list(b)] for a, b in self.sorted_relations()]}


def presentation_from_gb(n: int, gb: BinomialGB, names=()) -> MonoidPresentation:
    return MonoidPresentation(n, tuple(sorted((l, t) for l, t in gb.rules if t is not None)), tuple(names))


# ---------------------------------------------------------------------------
# word problem


def normal_form(M: MonoidPresentation, w: Sequence[int]) -> Exp:
    w = _vec(w)
    if len(w) != M.n_gens:
        raise ValueError("dimension mismatch")
    return M.gb.reduce(w)


def equivalent(M: MonoidPresentation, u, v) -> bool:
    return normal_form(M, u) == normal_form(M, v)


def add(u: Sequence[int], v: Sequence[int]) -> Exp:
    return tuple(a + b for a, b in zip(u, v))


def scale(c: int, u: Sequence[int]) -> Exp:
    return tuple(c * a for a in u)


def combine(coeffs: Sequence[int], vectors: Sequence[Sequence[int]], dim: int) -> Exp:
    out = [0] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                out[i] += c * x
    return tuple(out)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class MonoidHom:
    source: MonoidPresentation
    target: MonoidPresentation
    images: tuple[Exp, ...]

    def __post_init__(self):
        imgs = tuple(_vec(v) for v in self.images)
        if len(imgs) != self.source.n_gens or any(len(v) != self.target.n_gens for v in imgs):
            raise ValueError("image vectors have the wrong shape")
        object.__setattr__(self, "images", imgs)

    def __call__(self, w: Sequence[int]) -> Exp:
        return combine(w, self.images, self.target.n_gens)

    def check(self) -> None:
        for a, b in self.source.relations:
            if not equivalent(self.target, self(a), self(b)):
                raise IllDefinedMap(f"relation {a} = {b} not respected")

    def is_well_defined(self) -> bool:
        try:
            self.check()
        except IllDefinedMap:
            return False
        return True

    def compose(self, other: "MonoidHom") -> "MonoidHom":
        """``other`` after ``self``."""
        return MonoidHom(self.source, other.target, tuple(other(v) for v in self.images))

    @classmethod
    def identity(cls, M: MonoidPresentation) -> "MonoidHom":
        return cls(M, M, tuple(M.unit(i) for i in range(M.n_gens)))


def hom(source, target, images, check: bool = True) -> MonoidHom:
    f = MonoidHom(source, target, tuple(images))
    if check:
        f.check()
    return f


# ---------------------------------------------------------------------------
# group completion


@dataclass(frozen=True)
class GroupCompletionData:
    group: FgAbelianGroup
    unit_map: Callable[[Sequence[int]], tuple[int, ...]] = field(compare=False)
    generator_images: tuple[tuple[int, ...], ...] = ()


def _group_completion(M: MonoidPresentation) -> GroupCompletionData:
    cols = [tuple(x - y for x, y in zip(a, b)) for a, b in M.relations]
    G = cokernel(IntMatrix.from_columns(cols, M.n_gens))
    imgs = tuple(G.element(M.unit(i)) for i in range(M.n_gens))
    return GroupCompletionData(G, G.element, imgs)


def group_completion(M: MonoidPresentation) -> GroupCompletionData:
    return M._gp


def gp_hom_matrix(f: MonoidHom) -> IntMatrix:
    """Induced map ``source^gp -> target^gp`` in canonical coordinates."""
    Gs = group_completion(f.source).group
    Gt = group_completion(f.target).group
    cols = []
    for j in range(Gs.ngens):
        amb = Gs.presentation_map.column(j)
        cols.append(Gt.element(f(amb) if min(amb, default=0) >= 0 else _signed_apply(f, amb)))
    return IntMatrix.from_columns(cols, Gt.ngens)


def _signed_apply(f: MonoidHom, amb: Sequence[int]) -> Exp:
    return combine(amb, f.images, f.target.n_gens)


# ---------------------------------------------------------------------------
# integrality


def is_integral(M: MonoidPresentation) -> bool:
    return M.gb.key() == M.lattice_gb.key()


def integralize(M: MonoidPresentation) -> MonoidPresentation:
    return presentation_from_gb(M.n_gens, M.lattice_gb, M.names)


def require_integral(*Ms: MonoidPresentation) -> None:
    for M in Ms:
        if not is_integral(M):
            raise NotIntegral(f"{M} is not integral")


# ---------------------------------------------------------------------------
# monoids embedded in a finitely generated abelian group


@dataclass(frozen=True)
class EmbeddedMonoid:
    """Submonoid of ``Z^k / (moduli)`` generated by ``vectors``.

    ``moduli[i] == 0`` marks a free coordinate.  Vectors are kept reduced."""

    vectors: tuple[Exp, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        mods = tuple(int(m) for m in self.moduli)
        vecs = tuple(_reduce(v, mods) for v in self.vectors)
        object.__setattr__(self, "moduli", mods)
        object.__setattr__(self, "vectors", vecs)

    @property
    def dim(self) -> int:
        return len(self.moduli)

    @property
    def torsion_free(self) -> bool:
        return all(m == 0 for m in self.moduli)

    def relation_columns(self) -> list[Exp]:
        return [tuple(m if j == i else 0 for j in range(self.dim)) for i, m in enumerate(self.moduli) if m]

    def reduce(self, v) -> Exp:
        return _reduce(v, self.moduli)

    def decompose(self, x: Sequence[int], cap: int = DEFAULT_HILBERT_CAP) -> Exp | None:
        return decompose(self, x, cap)

    def contains(self, x: Sequence[int], cap: int = DEFAULT_HILBERT_CAP) -> bool:
        return decompose(self, x, cap) is not None

    def to_presentation(self, names=()) -> MonoidPresentation:
        return embedded_to_presentation(self, names)


def _reduce(v, mods) -> Exp:
    return tuple(int(x) % m if m else int(x) for x, m in zip(v, mods))


_DECOMP_CACHE: dict = {}


def decompose(E: EmbeddedMonoid, x: Sequence[int], cap: int = DEFAULT_HILBERT_CAP) -> Exp | None:
    """Coefficients ``a >= 0`` with ``sum a_i v_i = x`` (mod torsion), or None.

    Decided on the homogenization ``sum a_i v_i - t x + (torsion) = 0``:
    a solution with ``t = 1`` exists iff some Hilbert basis element has
    ``t = 1``."""
    x = E.reduce(x)
    n = len(E.vectors)
    if not any(x):
        return (0,) * n
    key = (E.vectors, E.moduli, x)
    if key in _DECOMP_CACHE:
        return _DECOMP_CACHE[key]
    rels = E.relation_columns()
    cols = [list(v) for v in E.vectors] + [[-c for c in x]]
    for r in rels:
        cols.append(list(r))
        cols.append([-c for c in r])
    A = IntMatrix.from_columns(cols, E.dim)
    result = None
    for h in hilbert_basis(A, cap=cap):
        if h[n] == 1:
            result = h[:n]
            break
    _DECOMP_CACHE[key] = result
    return result


def lattice_relations(E: EmbeddedMonoid) -> list[Exp]:
    """Basis of ``{u in Z^n : sum u_i v_i = 0}`` (mod torsion)."""
    n = len(E.vectors)
    cols = [list(v) for v in E.vectors] + [list(r) for r in E.relation_columns()]
    A = IntMatrix.from_columns(cols, E.dim) if cols else IntMatrix.zeros(E.dim, 0)
    K = kernel_basis(A)
    out = []
    for j in range(K.cols):
        u = K.column(j)[:n]
        if any(u):
            out.append(u)
    return out


def embedded_to_presentation(E: EmbeddedMonoid, names=()) -> MonoidPresentation:
    """Presentation of the monoid generated by ``E.vectors``: the toric
    ideal is the saturation of the lattice-basis ideal."""
    n = len(E.vectors)
    binoms = []
    for u in lattice_relations(E):
        binoms.append((tuple(max(c, 0) for c in u), tuple(max(-c, 0) for c in u)))
    gb = binomial.saturate_all(n, binoms)
    return presentation_from_gb(n, gb, names)


def embedding(M: MonoidPresentation) -> EmbeddedMonoid:
    """Image of ``M`` in its group completion (canonical coordinates).

    This is isomorphic to ``M`` exactly when ``M`` is integral."""
    gc = group_completion(M)
    return EmbeddedMonoid(gc.generator_images, gc.group.moduli())


def torsion_free_embedding(M: MonoidPresentation) -> EmbeddedMonoid:
    E = embedding(M)
    if not E.torsion_free:
        raise TorsionGp(f"group completion of {M} has torsion {group_completion(M).group.torsion}")
    return E


def _hilbert_projection(cols: list[list[int]], dim: int, free_vars: int, keep: int, mods, cap):
    """Hilbert basis of a system with ``free_vars`` integer (sign-free)
    variables in front, projected to the first ``free_vars`` (after
    combining +/- parts) or to the first ``keep`` nonneg variables."""
    A = IntMatrix.from_columns(cols, dim)
    out = set()
    for h in hilbert_basis(A, cap=cap):
        if free_vars:
            x = tuple(h[i] - h[free_vars + i] for i in range(free_vars))
        else:
            x = h[:keep]
        x = _reduce(x, mods) if mods is not None else x
        if any(x):
            out.add(x)
    return sorted(out)


# ---------------------------------------------------------------------------
# saturation


def _cone_member(gens: list[Exp], x: Exp) -> bool:
    """Is ``x`` in the rational cone spanned by ``gens`` (Caratheodory)?"""
    if not any(x):
        return True
    r = len(x)
    for k in range(1, r + 1):
        for S in combinations(range(len(gens)), k):
            sol = _solve_rational([gens[i] for i in S], x)
            if sol is not None and all(c >= 0 for c in sol):
                return True
    return False


def _solve_rational(vectors: list[Exp], x: Exp) -> list[Fraction] | None:
    """Unique solution of ``sum c_i v_i = x`` for independent ``v_i``."""
    k, r = len(vectors), len(x)
    M = [[Fraction(vectors[j][i]) for j in range(k)] + [Fraction(x[i])] for i in range(r)]
    row = 0
    piv = []
    for c in range(k):
        p = next((i for i in range(row, r) if M[i][c] != 0), None)
        if p is None:
            return None
        M[row], M[p] = M[p], M[row]
        inv = 1 / M[row][c]
        M[row] = [v * inv for v in M[row]]
        for i in range(r):
            if i != row and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[row])]
        piv.append(c)
        row += 1
    if any(M[i][k] != 0 for i in range(row, r)):
        return None
    return [M[i][k] for i in range(k)]


def _parallelepiped_points(S: list[Exp]) -> list[Exp]:
    r = len(S)
    G = IntMatrix.from_columns(S, r)
    s = smith(G)
    diag = s.diagonal
    pts = set()
    for c in product(*[range(d) for d in diag]):
        p = s.U_inv @ c
        t = _solve_rational(S, p)
        fl = [int(v.numerator // v.denominator) for v in t]
        q = tuple(pi - sum(fl[j] * S[j][i] for j in range(r)) for i, pi in enumerate(p))
        if any(q):
            pts.add(q)
    return sorted(pts)


def saturation_generators(E: EmbeddedMonoid, cap: int = DEFAULT_HILBERT_CAP) -> list[Exp]:
    """Minimal generating set of ``cone(E) ∩ Z^k`` for a full-rank
    torsion-free embedding."""
    if not E.torsion_free:
        raise TorsionGp("saturation needs a torsion-free group completion")
    gens = [v for v in E.vectors if any(v)]
    r = E.dim
    cands = set(gens)
    total = 0
    for S in combinations(gens, r):
        if smith(IntMatrix.from_columns(list(S), r)).rank < r:
            continue
        pts = _parallelepiped_points(list(S))
        total += len(pts)
        if total > cap:
            raise ResourceExceeded("parallelepiped enumeration exceeded cap")
        cands.update(pts)
    return _minimize(sorted(cands, key=lambda v: (sum(abs(c) for c in v), v)), cap)


def _minimize(cands: list[Exp], cap: int, mods: Sequence[int] | None = None) -> list[Exp]:
    """Drop generators that are sums of the remaining ones (largest first)."""
    keep = list(cands)
    for x in sorted(cands, key=lambda v: (-sum(abs(c) for c in v), v)):
        others = [v for v in keep if v != x]
        if not others:
            continue
        if decompose(EmbeddedMonoid(tuple(others), tuple(mods) if mods is not None else (0,) * len(x)), x, cap) is not None:
            keep = others
    return sorted(keep)


def saturate(M: MonoidPresentation) -> MonoidPresentation:
    require_integral(M)
    E = torsion_free_embedding(M)
    return embedded_to_presentation(EmbeddedMonoid(tuple(saturation_generators(E)), E.moduli))


def saturation_map(M: MonoidPresentation) -> MonoidHom:
    """The canonical inclusion ``M -> saturate(M)``."""
    require_integral(M)
    E = torsion_free_embedding(M)
    S = EmbeddedMonoid(tuple(saturation_generators(E)), E.moduli)
    P = embedded_to_presentation(S)
    return hom(M, P, [decompose(S, v) for v in E.vectors])


def is_saturated(M: MonoidPresentation) -> bool:
    E = torsion_free_embedding(M)
    return all(E.contains(v) for v in saturation_generators(E))


# ---------------------------------------------------------------------------
# virtual surjectivity, exactness, repletion


def is_virtually_surjective(f: MonoidHom) -> bool:
    F = gp_hom_matrix(f)
    Gt = group_completion(f.target).group
    return cokernel(F.hstack(Gt.relation_matrix())).is_trivial()


def _exactness_fiber_generators(f: MonoidHom, cap: int = DEFAULT_HILBERT_CAP) -> tuple[EmbeddedMonoid, list[Exp]]:
    """Generators of ``N x_{N^gp} M^gp`` as vectors of ``M^gp``."""
    Gm = group_completion(f.source).group
    En = embedding(f.target)
    F = gp_hom_matrix(f)
    km = Gm.ngens
    dim = En.dim
    cols: list[list[int]] = []
    for j in range(km):
        cols.append(list(F.column(j)))
    for j in range(km):
        cols.append([-c for c in F.column(j)])
    for v in En.vectors:
        cols.append([-c for c in v])
    for r in En.relation_columns():
        cols.append(list(r))
        cols.append([-c for c in r])
    if not cols:
        return EmbeddedMonoid((), Gm.moduli()), []
    gens = _hilbert_projection(cols, dim, km, 0, Gm.moduli(), cap)
    return embedding(f.source), gens


def exactness_witness(f: MonoidHom) -> Exp | None:
    """An element of ``N x_{N^gp} M^gp`` not in ``M``, or None if exact."""
    require_integral(f.source, f.target)
    Em, gens = _exactness_fiber_generators(f)
    for x in gens:
        if not Em.contains(x):
            return x
    return None


def is_exact(f: MonoidHom) -> bool:
    return exactness_witness(f) is None


@dataclass(frozen=True)
class Repletion:
    monoid: MonoidPresentation
    embedded: EmbeddedMonoid
    unit: MonoidHom  # M -> M^rep
    augmentation: MonoidHom  # M^rep -> N

    def __iter__(self):
        return iter((self.monoid, self.unit, self.augmentation))


def repletion(f: MonoidHom) -> Repletion:
    require_integral(f.source, f.target)
    if not is_virtually_surjective(f):
        raise NotVirtuallySurjective("the induced map of group completions is not surjective")
    Em, gens = _exactness_fiber_generators(f)
    gens = _minimize(gens, DEFAULT_HILBERT_CAP, Em.moduli)
    R = EmbeddedMonoid(tuple(gens), Em.moduli)
    P = embedded_to_presentation(R)
    unit = hom(f.source, P, [decompose(R, v) for v in Em.vectors])
    En = embedding(f.target)
    F = gp_hom_matrix(f)
    aug_imgs = []
    for x in gens:
        b = decompose(En, F @ x)
        if b is None:  # pragma: no cover - guaranteed by construction
            raise RuntimeError("repletion generator does not map into N")
        aug_imgs.append(b)
    aug = hom(P, f.target, aug_imgs)
    return Repletion(P, R, unit, aug)


# ---------------------------------------------------------------------------
# pushouts, fiber products, units


def pushout(f: MonoidHom, g: MonoidHom) -> tuple[MonoidPresentation, MonoidHom, MonoidHom]:
    """``M ⊔_K N`` with its two structure maps."""
    if f.source != g.source:
        raise ValueError("pushout needs a common source")
    M, N = f.target, g.target
    m, n = M.n_gens, N.n_gens
    zm, zn = (0,) * m, (0,) * n
    rels = [(a + zn, b + zn) for a, b in M.relations]
    rels += [(zm + a, zm + b) for a, b in N.relations]
    for k in range(f.source.n_gens):
        rels.append((f.images[k] + zn, zm + g.images[k]))
    names = _disjoint_names(M.names, N.names)
    P = MonoidPresentation(m + n, tuple(sorted(set(rels))), names)
    iM = MonoidHom(M, P, tuple(M.unit(i) + zn for i in range(m)))
    iN = MonoidHom(N, P, tuple(zm + N.unit(i) for i in range(n)))
    return P, iM, iN


def _disjoint_names(a, b):
    if set(a) & set(b):
        return tuple(f"{x}1" for x in a) + tuple(f"{x}2" for x in b)
    return tuple(a) + tuple(b)


@dataclass(frozen=True)
class FiberProduct:
    monoid: MonoidPresentation
    embedded: EmbeddedMonoid
    proj_left: MonoidHom
    proj_right: MonoidHom


def fiber_product(f: MonoidHom, g: MonoidHom, cap: int = DEFAULT_HILBERT_CAP) -> FiberProduct:
    """``M x_Q N`` for integral monoids, generated inside ``M^gp + N^gp``."""
    if f.target != g.target:
        raise ValueError("fiber product needs a common target")
    M, N, Q = f.source, g.source, f.target
    require_integral(M, N, Q)
    EQ = embedding(Q)
    Em, En = embedding(M), embedding(N)
    fq = [EQ.reduce(group_completion(Q).unit_map(v)) for v in f.images]
    gq = [EQ.reduce(group_completion(Q).unit_map(v)) for v in g.images]
    cols = [list(v) for v in fq] + [[-c for c in v] for v in gq]
    for r in EQ.relation_columns():
        cols += [list(r), [-c for c in r]]
    m, n = M.n_gens, N.n_gens
    mods = Em.moduli + En.moduli
    vecs = set()
    pairs = {}
    if cols:
        A = IntMatrix.from_columns(cols, EQ.dim) if EQ.dim else IntMatrix.zeros(0, len(cols))
        basis = hilbert_basis(A, cap=cap, ncols=len(cols))
    else:
        basis = []
    for h in basis:
        a, b = h[:m], h[m : m + n]
        if not any(a) and not any(b):
            continue
        v = _reduce(combine(a, Em.vectors, Em.dim) + combine(b, En.vectors, En.dim), mods)
        if any(v) and v not in vecs:
            vecs.add(v)
            pairs[v] = (a, b)
    gens = sorted(vecs)
    E = EmbeddedMonoid(tuple(gens), mods)
    P = embedded_to_presentation(E)
    pl = hom(P, M, [pairs[v][0] for v in gens])
    pr = hom(P, N, [pairs[v][1] for v in gens])
    return FiberProduct(P, E, pl, pr)


def unit_generators(M: MonoidPresentation) -> list[int]:
    """Indices ``i`` such that ``e_i`` is invertible in ``M``.

    ``e_i`` is a unit iff ``1 ∈ I + (x_i)`` for the pure-difference ideal
    ``I``, i.e. iff ``0`` is congruent to a word containing ``e_i``."""
    out = []
    for i in range(M.n_gens):
        gb = binomial.groebner(M.n_gens, M.relations, [M.unit(i)])
        if gb.has_unit():
            out.append(i)
    return out


@dataclass(frozen=True)
class UnitsData:
    group: FgAbelianGroup
    generators: tuple[int, ...]  # indices of invertible generators
    embedding: tuple[tuple[int, ...], ...]  # their images in M^gp


def units(M: MonoidPresentation) -> UnitsData:
    """``M^x``, generated by the invertible generators.

    The group is computed as their image in ``M^gp``, which is ``M^x``
    itself when ``M`` is integral."""
    idx = tuple(unit_generators(M))
    gc = group_completion(M)
    imgs = tuple(gc.generator_images[i] for i in idx)
    E = EmbeddedMonoid(imgs, gc.group.moduli())
    rels = [u for u in lattice_relations(E)] if imgs else []
    grp = cokernel(IntMatrix.from_columns(rels, len(idx))) if idx else cokernel(IntMatrix.zeros(0, 0))
    return UnitsData(grp, idx, imgs)


def is_sharp(M: MonoidPresentation) -> bool:
    return not unit_generators(M)


# ---------------------------------------------------------------------------
# isomorphisms


def isomorphism_inverse(f: MonoidHom) -> MonoidHom | None:
    """An inverse of ``f`` between integral monoids, certified by normal
    forms, or None when ``f`` is not an isomorphism."""
    require_integral(f.source, f.target)
    F = gp_hom_matrix(f)
    Gs = group_completion(f.source).group
    Gt = group_completion(f.target).group
    if not Gs.is_isomorphic(Gt):
        return None
    imgs = EmbeddedMonoid(tuple(Gt.element(v) for v in f.images), Gt.moduli())
    inv = []
    for j in range(f.target.n_gens):
        a = decompose(imgs, Gt.element(f.target.unit(j)))
        if a is None:
            return None
        inv.append(a)
    g = MonoidHom(f.target, f.source, tuple(inv))
    if not g.is_well_defined():
        return None
    for i in range(f.source.n_gens):
        if not equivalent(f.source, g(f.images[i]), f.source.unit(i)):
            return None
    for j in range(f.target.n_gens):
        if not equivalent(f.target, f(g.images[j]), f.target.unit(j)):
            return None
    del F
    return g


def is_isomorphism(f: MonoidHom) -> bool:
    return isomorphism_inverse(f) is not None


# ---------------------------------------------------------------------------
# brute-force oracles


def bfs_equivalent(M: MonoidPresentation, u, v, max_degree: int = 8) -> bool:
    """Oracle: congruence closure restricted to words of degree <= max_degree."""
    from . import _accel

    if M.n_gens == 0:
        return True
    if not M.relations:
        return tuple(u) == tuple(v)
    lhs = [a for a, _ in M.relations]
    rhs = [b for _, b in M.relations]
    cls = _accel.bfs_class(u, lhs, rhs, max_degree)
    return any(tuple(int(x) for x in row) == tuple(v) for row in cls)


def finite_elements(M: MonoidPresentation, max_degree: int = 16) -> list[Exp] | None:
    """Normal forms of all elements if ``M`` is finite (every element is
    represented by a word of degree <= max_degree), else None."""
    seen = {normal_form(M, M.zero())} if M.n_gens else {()}
    frontier = list(seen)
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(M.n_gens):
                y = normal_form(M, add(w, M.unit(i)))
                if y not in seen:
                    if sum(y) > max_degree:
                        return None
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def multiplication_table(M: MonoidPresentation, elems: list[Exp] | None = None):
    """Element list and addition table (as indices) of a finite monoid."""
    if elems is None:
        elems = finite_elements(M)
        if elems is None:
            raise ValueError("monoid is not finite")
    idx = {e: i for i, e in enumerate(elems)}
    table = [[idx[normal_form(M, add(a, b))] for b in elems] for a in elems]
    return elems, table
