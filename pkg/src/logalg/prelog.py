"""Discrete pre-log rings in chart form.

A chart ring is ``k[Q][y]/(extra relations)``: the monoid algebra of an
integral monoid ``Q`` (its generators are the first ring variables),
optionally adjoined by further variables ``y`` with polynomial relations.
The pre-log structure is a monoid ``P`` with ``alpha(p)`` a monomial in
the ring variables or ``0``.

Units of the ring are only detected among ``Q``-monomials, i.e. the unit
group is taken to be ``k^x * Q^x``.  For ``k[Q]`` with ``Q^gp``
torsion free this is exact; with extra variables it is the documented
scope of the toolkit (the ``k^x`` factor is carried formally).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import monoid as mon
from .errors import IllDefinedMap, NotIntegral, NotMonomial, TorsionGp, UnsupportedPresentation
from .monoid import EmbeddedMonoid, MonoidHom, MonoidPresentation
from .ring import QQ, Field, Poly, Ring

Exp = tuple[int, ...]


@dataclass(frozen=True)
class ChartPreLogRing:
    field: Field
    Q: MonoidPresentation
    P: MonoidPresentation
    alpha: tuple  # per P generator: exponent over all ring variables, or None for 0
    extra_names: tuple[str, ...] = ()
    extra_relations: tuple[Poly, ...] = ()
    name: str = ""
    # formal tag: the monoid also contains the field units k^x (mapping identically)
    field_units: bool = False

    def __post_init__(self):
        nv = self.Q.n_gens + len(self.extra_names)
        al = []
        for a in self.alpha:
            if a is None:
                al.append(None)
            else:
                a = tuple(int(x) for x in a)
                if len(a) == self.Q.n_gens and len(a) != nv:
                    a = a + (0,) * len(self.extra_names)
                if len(a) != nv or min(a, default=0) < 0:
                    raise ValueError("alpha image has the wrong shape")
                al.append(a)
        if len(al) != self.P.n_gens:
            raise ValueError("alpha needs one image per pre-log generator")
        object.__setattr__(self, "alpha", tuple(al))
        object.__setattr__(self, "extra_names", tuple(self.extra_names))
        object.__setattr__(self, "extra_relations", tuple(self.extra_relations))

    def __hash__(self):
        return hash((self.field, self.Q, self.P, self.alpha, self.extra_names, self.extra_relations, self.field_units))

    # -- ring --------------------------------------------------------------
    @cached_property
    def ring(self) -> Ring:
        names = tuple(self.Q.names) + self.extra_names
        n = len(names)
        rels = []
        q = self.Q.n_gens
        for a, b in self.Q.relations:
            pa = a + (0,) * (n - q)
            pb = b + (0,) * (n - q)
            rels.append(Poly(self.field, n, {pa: 1}) - Poly(self.field, n, {pb: 1}))
        rels.extend(self.extra_relations)
        return Ring(self.field, names, tuple(rels))

    @property
    def nvars(self) -> int:
        return self.Q.n_gens + len(self.extra_names)

    @property
    def is_monoid_algebra(self) -> bool:
        return not self.extra_names

    def alpha_poly(self, i: int) -> Poly:
        a = self.alpha[i]
        if a is None:
            return self.ring.zero()
        return self.ring.monomial(a)

    def alpha_of(self, w: Sequence[int]) -> Poly:
        out = self.ring.one()
        for c, i in zip(w, range(self.P.n_gens)):
            if c:
                out = out * self.alpha_poly(i) ** c
        return out

    def alpha_exp(self, w: Sequence[int]) -> Exp | None:
        """Exponent of ``alpha(w)``, or None if it is zero."""
        out = [0] * self.nvars
        for c, i in zip(w, range(self.P.n_gens)):
            if c:
                a = self.alpha[i]
                if a is None:
                    return None
                for j, x in enumerate(a):
                    out[j] += c * x
        return tuple(out)

    # -- validation ---------------------------------------------------------
    def validate(self) -> None:
        if not mon.is_integral(self.Q):
            raise NotIntegral("ring monoid Q must be integral")
        if mon.group_completion(self.Q).group.torsion:
            raise TorsionGp("ring monoid Q must have torsion-free group completion")
        for a, b in self.P.relations:
            if not self.ring.equal(self.alpha_of(a), self.alpha_of(b)):
                raise IllDefinedMap(f"alpha does not respect the relation {a} = {b}")

    def to_json(self) -> dict:
        return {
            "field": repr(self.field),
            "ring": {"Q": self.Q.to_json(), "extra": list(self.extra_names), "relations": [self.ring.fmt(r) for r in self.extra_relations]},
            "P": self.P.to_json(),
            "alpha": [None if a is None else self.ring.fmt(self.ring.monomial(a)) for a in self.alpha],
        }


def chart(
    Q: MonoidPresentation,
    P: MonoidPresentation | None = None,
    alpha: Sequence | None = None,
    *,
    field: Field = QQ,
    extra_names: Sequence[str] = (),
    extra_relations: Sequence = (),
    name: str = "",
    field_units: bool = False,
    check: bool = True,
) -> ChartPreLogRing:
    """Build a chart.  ``P`` defaults to ``Q`` with ``alpha`` the identity.

    ``extra_relations`` may be Polys or callables ``ring -> Poly``."""
    if P is None:
        P = Q
        alpha = [Q.unit(i) for i in range(Q.n_gens)]
    if alpha is None:
        raise ValueError("alpha is required when P is given")
    X = ChartPreLogRing(field, Q, P, tuple(alpha), tuple(extra_names), (), name, field_units)
    if extra_relations:
        base = Ring(field, tuple(Q.names) + tuple(extra_names))
        rels = tuple(r(base) if callable(r) else r for r in extra_relations)
        X = ChartPreLogRing(field, Q, P, X.alpha, X.extra_names, rels, name, field_units)
    if check:
        X.validate()
    return X


def trivial_structure(X: ChartPreLogRing) -> ChartPreLogRing:
    """Same ring with the trivial pre-log structure ``P = 0``."""
    return ChartPreLogRing(X.field, X.Q, MonoidPresentation.trivial(), (), X.extra_names, X.extra_relations, X.name)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class PreLogMorphism:
    source: ChartPreLogRing
    target: ChartPreLogRing
    ring_images: tuple[Poly, ...]  # one per source ring variable, in the target ring
    monoid: MonoidHom  # source.P -> target.P
    name: str = ""

    def __hash__(self):
        return hash((self.source, self.target, self.ring_images, self.monoid))

    def apply(self, p: Poly) -> Poly:
        return p.substitute(self.ring_images, self.target.nvars)

    def check(self) -> None:
        self.monoid.check()
        T = self.target.ring
        for r in self.source.ring.relations:
            if not T.equal(self.apply(r), T.zero()):
                raise IllDefinedMap("ring map does not respect the source relations")
        for i in range(self.source.P.n_gens):
            lhs = self.target.alpha_of(self.monoid.images[i])
            rhs = self.apply(self.source.alpha_poly(i))
            if not T.equal(lhs, rhs):
                raise IllDefinedMap(f"structure maps do not commute on generator {self.source.P.names[i]}")

    def compose(self, g: "PreLogMorphism") -> "PreLogMorphism":
        """``g`` after ``self``."""
        imgs = tuple(g.apply(p) for p in self.ring_images)
        return PreLogMorphism(self.source, g.target, imgs, self.monoid.compose(g.monoid))

    @property
    def ring_monoid_images(self) -> tuple[Exp, ...]:
        """Exponents of the images of the Q generators (monomial ring parts only)."""
        out = []
        for i in range(self.source.Q.n_gens):
            p = self.ring_images[i]
            if not p.is_monomial() or list(p.terms.values())[0] != 1:
                raise NotMonomial("ring part is not monomial")
            out.append(next(iter(p.terms)))
        return tuple(out)


def morphism(source, target, ring_images, monoid_images, name: str = "", check: bool = True) -> PreLogMorphism:
    """``ring_images`` entries may be Polys, exponent vectors (monomials) or callables ``ring -> Poly``."""
    T = target.ring
    imgs = []
    for img in ring_images:
        if isinstance(img, Poly):
            imgs.append(img)
        elif callable(img):
            imgs.append(img(T))
        else:
            e = tuple(int(x) for x in img)
            if len(e) == target.Q.n_gens and len(e) != target.nvars:
                e = e + (0,) * len(target.extra_names)
            imgs.append(T.monomial(e))
    h = MonoidHom(source.P, target.P, tuple(tuple(v) for v in monoid_images))
    f = PreLogMorphism(source, target, tuple(imgs), h, name)
    if check:
        f.check()
    return f


def identity(X: ChartPreLogRing) -> PreLogMorphism:
    return PreLogMorphism(X, X, tuple(X.ring.var(i) for i in range(X.nvars)), MonoidHom.identity(X.P), "id")


# ---------------------------------------------------------------------------
# units and the log condition


def _is_unit_exp(X: ChartPreLogRing, a: Exp | None, unit_gens: set[int]) -> bool:
    if a is None:
        return False
    q = X.Q.n_gens
    if any(a[q:]):
        return False
    return all(i in unit_gens for i in range(q) if a[i])


@dataclass(frozen=True)
class UnitGroupData:
    presentation: MonoidPresentation  # Q^x as a monoid
    generators: tuple[int, ...]  # indices of the invertible Q generators
    embedded: EmbeddedMonoid


def ring_units(X: ChartPreLogRing) -> UnitGroupData:
    """``Q^x``, the monomial part of the unit group of the ring."""
    U = mon.units(X.Q)
    E = EmbeddedMonoid(U.embedding, mon.group_completion(X.Q).group.moduli())
    names = tuple(X.Q.names[i] for i in U.generators)
    pres = mon.embedded_to_presentation(E, names) if U.generators else MonoidPresentation.trivial()
    return UnitGroupData(pres, U.generators, E)


@dataclass(frozen=True)
class AlphaPreimage:
    monoid: MonoidPresentation
    inclusion: MonoidHom  # into P
    generators: tuple[int, ...]  # P generators whose image is a unit


def alpha_preimage_units(X: ChartPreLogRing) -> AlphaPreimage:
    """``alpha^{-1}(units)``: a face of ``P``, generated by the generators
    mapping to units (a sum is a unit only if every summand is)."""
    unit_q = set(mon.unit_generators(X.Q))
    face = tuple(i for i in range(X.P.n_gens) if _is_unit_exp(X, X.alpha[i], unit_q))
    names = tuple(X.P.names[i] for i in face)
    if not face:
        K = MonoidPresentation.trivial()
    elif mon.is_integral(X.P):
        gc = mon.group_completion(X.P)
        E = EmbeddedMonoid(tuple(gc.generator_images[i] for i in face), gc.group.moduli())
        K = mon.embedded_to_presentation(E, names)
    else:
        # non-integral P: fall back to the congruence restricted to the face
        rels = [(tuple(a[i] for i in face), tuple(b[i] for i in face)) for a, b in X.P.relations if all(a[j] == 0 == b[j] for j in range(X.P.n_gens) if j not in face)]
        K = MonoidPresentation(len(face), tuple(rels), names)
    inc = MonoidHom(K, X.P, tuple(X.P.unit(i) for i in face))
    return AlphaPreimage(K, inc, face)


def sharpen(M: MonoidPresentation) -> tuple[MonoidPresentation, MonoidHom]:
    """``M / M^x`` presented on the non-invertible generators, with the projection."""
    units = set(mon.unit_generators(M))
    keep = [i for i in range(M.n_gens) if i not in units]
    rels = set()
    for a, b in M.relations:
        ra, rb = tuple(a[i] for i in keep), tuple(b[i] for i in keep)
        if ra != rb:
            rels.add((ra, rb))
    S = MonoidPresentation(len(keep), tuple(sorted(rels)), tuple(M.names[i] for i in keep))
    proj = MonoidHom(M, S, tuple(tuple(int(i == j) for j in keep) if i in keep else (0,) * len(keep) for i in range(M.n_gens)))
    return S, proj


@dataclass(frozen=True)
class LogifyResult:
    characteristic: MonoidPresentation
    is_already_log: bool
    chart: ChartPreLogRing  # the associated log structure in chart form
    to_char: MonoidHom  # P -> characteristic
    pushout: MonoidPresentation

    def __iter__(self):
        return iter((self.characteristic, self.is_already_log))


def _express_unit(X: ChartPreLogRing, U: UnitGroupData, a: Exp) -> Exp:
    gc = mon.group_completion(X.Q)
    v = gc.unit_map(a[: X.Q.n_gens])
    d = mon.decompose(U.embedded, v)
    if d is None:  # pragma: no cover - a is a unit by construction
        raise RuntimeError("unit monomial not generated by unit generators")
    return d


def logify(X: ChartPreLogRing) -> LogifyResult:
    """Associated log structure ``P ⊔_{alpha^{-1}(units)} Q^x`` and its
    characteristic (the pushout modulo its units)."""
    U = ring_units(X)
    A = alpha_preimage_units(X)
    G = U.presentation
    K = MonoidPresentation.free(len(A.generators))
    f = MonoidHom(K, X.P, tuple(X.P.unit(i) for i in A.generators))
    g = MonoidHom(K, G, tuple(_express_unit(X, U, X.alpha[i]) for i in A.generators))
    Pa, iP, iG = mon.pushout(f, g)
    # chart of the associated log structure
    nv = X.nvars
    alpha = list(X.alpha)
    for j, qi in enumerate(U.generators):
        alpha.append(tuple(int(k == qi) for k in range(nv)))
    Xa = ChartPreLogRing(X.field, X.Q, Pa, tuple(alpha), X.extra_names, X.extra_relations, X.name + "^a" if X.name else "", True)
    C, proj = sharpen(Pa)
    to_char = iP.compose(proj)
    # log condition: alpha^{-1}(units) -> k^x * Q^x is an isomorphism
    a_trivial = all(mon.equivalent(A.monoid, A.monoid.unit(i), A.monoid.zero()) for i in range(A.monoid.n_gens))
    u_trivial = not U.generators
    if not X.field_units:
        already = False
    elif a_trivial and u_trivial:
        already = True
    elif a_trivial or u_trivial:
        already = False
    else:
        h = MonoidHom(A.monoid, G, tuple(_express_unit(X, U, X.alpha[i]) for i in A.generators))
        try:
            already = h.is_well_defined() and mon.is_isomorphism(h)
        except NotIntegral:
            already = False
    return LogifyResult(C, already, Xa, to_char, Pa)


def characteristic_map(f: PreLogMorphism) -> MonoidHom:
    """Induced map of characteristic monoids ``char(source) -> char(target)``."""
    ls, lt = logify(f.source), logify(f.target)
    Us, Ut = ring_units(f.source), ring_units(f.target)
    # generators of the source pushout: P gens then unit gens of Q
    imgs = []
    for i in range(f.source.P.n_gens):
        imgs.append(_pushout_vec_from_P(lt, f.target, f.monoid.images[i]))
    qimgs = f.ring_monoid_images if Us.generators else ()
    for j, qi in enumerate(Us.generators):
        a = qimgs[qi]
        imgs.append(_pushout_vec_from_unit(lt, f.target, Ut, a))
    h = MonoidHom(ls.pushout, lt.pushout, tuple(imgs))
    _, ps = sharpen(ls.pushout)
    _, pt = sharpen(lt.pushout)
    kept = [i for i in range(ls.pushout.n_gens) if any(ps.images[i])]
    # generator i of char(source) is generator kept[i] of the pushout
    return MonoidHom(ls.characteristic, lt.characteristic, tuple(pt(h.images[i]) for i in kept))


def _pushout_vec_from_P(l: LogifyResult, X: ChartPreLogRing, w: Exp) -> Exp:
    return tuple(w) + (0,) * (l.pushout.n_gens - X.P.n_gens)


def _pushout_vec_from_unit(l: LogifyResult, X: ChartPreLogRing, U: UnitGroupData, a: Exp) -> Exp:
    d = _express_unit(X, U, a + (0,) * (X.nvars - len(a)))
    return (0,) * X.P.n_gens + tuple(d)


def characteristics_isomorphic(h: MonoidHom) -> bool:
    """Is the given map of characteristic monoids an isomorphism?"""
    if h.source.n_gens == 0 and h.target.n_gens == 0:
        return True
    return mon.is_isomorphism(h)


# ---------------------------------------------------------------------------
# trivial locus, inverse and direct image


def trivial_locus(X: ChartPreLogRing) -> tuple[ChartPreLogRing, PreLogMorphism]:
    """``(A[P^{-1}], P^gp)`` with the localization map from ``X``."""
    q = X.Q.n_gens
    gq = mon.group_completion(X.Q)
    imgs = []
    for i in range(X.P.n_gens):
        a = X.alpha[i]
        if a is None:
            raise UnsupportedPresentation("cannot invert a pre-log generator mapping to 0")
        if any(a[q:]):
            raise UnsupportedPresentation("trivial locus needs alpha to land in Q-monomials")
        imgs.append(gq.unit_map(a[:q]))
    Qv = list(gq.generator_images)
    plus = list(imgs)
    minus = [tuple(-x for x in v) for v in imgs]
    names_q = tuple(X.Q.names) + tuple(f"{X.P.names[i]}_p" for i in range(X.P.n_gens)) + tuple(f"{X.P.names[i]}_m" for i in range(X.P.n_gens))
    EQ = EmbeddedMonoid(tuple(Qv + plus + minus), gq.group.moduli())
    Q2 = mon.embedded_to_presentation(EQ, names_q)
    # P^gp as a monoid generated by +/- the generators
    gp = mon.group_completion(X.P)
    EP = EmbeddedMonoid(tuple(list(gp.generator_images) + [tuple(-x for x in v) for v in gp.generator_images]), gp.group.moduli())
    names_p = tuple(f"{n}" for n in X.P.names) + tuple(f"-{n}" for n in X.P.names)
    P2 = mon.embedded_to_presentation(EP, names_p)
    n2 = Q2.n_gens + len(X.extra_names)
    m = X.P.n_gens
    alpha = []
    for i in range(m):
        alpha.append(tuple(int(k == q + i) for k in range(n2)))
    for i in range(m):
        alpha.append(tuple(int(k == q + m + i) for k in range(n2)))
    # extra relations re-indexed into the larger ring
    def remap(p: Poly) -> Poly:
        t = {}
        for e, c in p.terms.items():
            t[e[:q] + (0,) * (2 * m) + e[q:]] = c
        return Poly(X.field, n2, t)

    Y = ChartPreLogRing(X.field, Q2, P2, tuple(alpha), X.extra_names, tuple(remap(r) for r in X.extra_relations), (X.name + "[P^-1]") if X.name else "", X.field_units)
    ring_imgs = [Y.ring.var(i) for i in range(q)] + [Y.ring.var(q + 2 * m + j) for j in range(len(X.extra_names))]
    h = PreLogMorphism(X, Y, tuple(ring_imgs), MonoidHom(X.P, P2, tuple(P2.unit(i) for i in range(m))))
    return Y, h


def inverse_image(X: ChartPreLogRing, target: ChartPreLogRing, ring_images: Sequence[Poly]) -> tuple[ChartPreLogRing, PreLogMorphism]:
    """Pre-log structure on ``target``'s ring given by ``P -> A -> B``."""
    T = target.ring
    imgs = [p if isinstance(p, Poly) else T.monomial(tuple(p) + (0,) * (target.nvars - len(p))) for p in ring_images]
    alpha = []
    for i in range(X.P.n_gens):
        img = X.alpha_poly(i).substitute(imgs, target.nvars)
        if img.is_zero():
            alpha.append(None)
        elif img.is_monomial() and list(img.terms.values())[0] == 1:
            alpha.append(next(iter(img.terms)))
        else:
            raise NotMonomial("inverse image of a chart needs monomial images")
    Y = ChartPreLogRing(target.field, target.Q, X.P, tuple(alpha), target.extra_names, target.extra_relations, "", X.field_units)
    h = PreLogMorphism(X, Y, tuple(imgs), MonoidHom.identity(X.P))
    return Y, h


def direct_image(X: ChartPreLogRing, ring_images: Sequence, Y: ChartPreLogRing) -> ChartPreLogRing:
    """Pre-log structure ``P' x_{Q'} Q`` on ``X``'s ring, for a monomial
    ring map ``k[Q] -> k[Q']`` and a chart ``Y`` with ``alpha`` in ``Q'``."""
    if X.extra_names or Y.extra_names:
        raise UnsupportedPresentation("direct image needs pure monoid-algebra charts")
    if any(a is None for a in Y.alpha):
        raise UnsupportedPresentation("direct image needs alpha to land in Q'")
    fQ = MonoidHom(X.Q, Y.Q, tuple(tuple(e) for e in ring_images))
    phi = MonoidHom(Y.P, Y.Q, Y.alpha)
    fp = mon.fiber_product(phi, fQ)
    return ChartPreLogRing(X.field, X.Q, fp.monoid, fp.proj_right.images, (), (), X.name, Y.field_units)


def is_strict(f: PreLogMorphism) -> bool:
    """``f^* (source log structure) -> target`` is an isomorphism on
    characteristic monoids."""
    Y, h = inverse_image(f.source, f.target, f.ring_images)
    g = PreLogMorphism(Y, f.target, tuple(f.target.ring.var(i) for i in range(f.target.nvars)), f.monoid)
    return characteristics_isomorphic(characteristic_map(g))
