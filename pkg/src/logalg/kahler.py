"""Log Kaehler differentials of chart morphisms, as presented modules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotMonomial
from .exactla import IntMatrix, smith
from .prelog import ChartPreLogRing, PreLogMorphism
from .ring import (
    DEFAULT_LIFT_DEGREE,
    ModuleMap,
    ModulePresentation,
    Poly,
    Ring,
    certify_isomorphism,
    field_kernel,
    vec_combine,
    vec_zero,
)


def gradient(p: Poly, indices: Sequence[int]) -> tuple[Poly, ...]:
    return tuple(p.diff(i) for i in indices)


def d_labels(ring: Ring) -> tuple[str, ...]:
    return tuple(f"d{n}" for n in ring.names)


def dlog_labels(X: ChartPreLogRing) -> tuple[str, ...]:
    return tuple(f"dlog {n}" for n in X.P.names)


def omega_ring(A: Ring, B: Ring, images: Sequence[Poly]) -> ModulePresentation:
    """``Omega_{B/A}`` for ``B = k[x]/(g)`` over ``A`` via ``images`` of A's variables."""
    idx = range(B.nvars)
    rels = [gradient(g, idx) for g in B.relations]
    rels += [gradient(p, idx) for p in images]
    return ModulePresentation(B, d_labels(B), tuple(rels))


def omega_log(f: PreLogMorphism) -> ModulePresentation:
    """``Omega_{(B,N)/(A,M)}`` on generators ``dx_i`` and ``dlog n_j``."""
    X, Y = f.source, f.target
    B = Y.ring
    nb, nn = B.nvars, Y.P.n_gens
    total = nb + nn
    zero = B.zero()
    rels: list[tuple[Poly, ...]] = []

    def pad(v, off):
        w = [zero] * total
        w[off : off + len(v)] = v
        return tuple(w)

    for r in omega_ring(X.ring, B, f.ring_images).relations:
        rels.append(pad(r, 0))
    # exchange relations alpha(n) dlog n = d alpha(n)
    for j in range(nn):
        a = Y.alpha_poly(j)
        if a.is_zero():
            continue
        v = [zero] * total
        for i, c in enumerate(gradient(a, range(nb))):
            v[i] = -c
        v[nb + j] = a
        rels.append(tuple(v))
    # dlog of the image of M
    for w in f.monoid.images:
        rels.append(pad(tuple(B.const(c) for c in w), nb))
    # lattice relations of N
    for a, b in Y.P.relations:
        rels.append(pad(tuple(B.const(x - y) for x, y in zip(a, b)), nb))
    return ModulePresentation(B, d_labels(B) + dlog_labels(Y), tuple(rels))


def evaluate_at_point(M: ModulePresentation, pt: Sequence | str = "unit") -> int:
    if isinstance(pt, str):
        if pt != "unit":
            raise ValueError("only the named point 'unit' is supported")
        pt = M.ring.unit_point()
    return M.evaluate(pt)


def is_free_chart_morphism(f: PreLogMorphism) -> bool:
    """Pure monoid algebras with ``P = Q`` charts and a monomial ring part equal to the monoid part."""
    for X in (f.source, f.target):
        if X.extra_names or X.P != X.Q:
            return False
        if any(a != X.Q.unit(i) for i, a in enumerate(X.alpha)):
            return False
    try:
        return f.ring_monoid_images == f.monoid.images
    except NotMonomial:
        return False


def monomial_closed_form(f: PreLogMorphism) -> ModulePresentation:
    """``B ⊗ coker(M^gp -> N^gp)`` presented on the ``dlog`` generators."""
    if not is_free_chart_morphism(f):
        raise NotMonomial("closed form needs P = Q charts and a monomial morphism")
    Y = f.target
    B = Y.ring
    cols = [tuple(x - y for x, y in zip(a, b)) for a, b in Y.P.relations]
    cols += list(f.monoid.images)
    rels = [tuple(B.const(c) for c in v) for v in cols]
    return ModulePresentation(B, dlog_labels(Y), tuple(rels))


def closed_form_invariants(f: PreLogMorphism) -> tuple[int, tuple[int, ...]]:
    """Rank and torsion of ``coker(M^gp -> N^gp)`` via Smith normal form."""
    Y = f.target
    cols = [tuple(x - y for x, y in zip(a, b)) for a, b in Y.P.relations] + list(f.monoid.images)
    A = IntMatrix.from_columns(cols, Y.P.n_gens) if cols else IntMatrix.zeros(Y.P.n_gens, 0)
    s = smith(A)
    tors = tuple(d for d in s.diagonal if d > 1)
    return Y.P.n_gens - s.rank, tors


def closed_form_comparison(f: PreLogMorphism, max_degree: int = DEFAULT_LIFT_DEGREE):
    """Certified isomorphism between ``omega_log(f)`` and the closed form."""
    Om = omega_log(f)
    C = monomial_closed_form(f)
    B = f.target.ring
    nb = B.nvars
    fwd = []
    for i in range(nb):
        v = list(vec_zero(B, C.ngens))
        v[i] = B.var(i)  # dx_i = x_i dlog x_i
        fwd.append(tuple(v))
    for j in range(C.ngens):
        fwd.append(C.unit(j))
    bwd = [Om.unit(nb + j) for j in range(C.ngens)]
    return certify_isomorphism(ModuleMap(Om, C, tuple(fwd)), ModuleMap(C, Om, tuple(bwd)), max_degree)


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class LogDerivation:
    morphism: PreLogMorphism
    module: ModulePresentation  # over the target ring
    d: tuple[tuple[Poly, ...], ...]  # image of dx_i
    d_flat: tuple[tuple[Poly, ...], ...]  # image of dlog n_j

    def apply_d(self, p: Poly) -> tuple[Poly, ...]:
        B = self.module.ring
        return vec_combine(B, gradient(p, range(B.nvars)), self.d, self.module.ngens)

    def apply_flat(self, w: Sequence[int]) -> tuple[Poly, ...]:
        B = self.module.ring
        return vec_combine(B, [B.const(c) for c in w], self.d_flat, self.module.ngens)

    def as_module_map(self) -> ModuleMap:
        return ModuleMap(omega_log(self.morphism), self.module, self.d + self.d_flat)


@dataclass(frozen=True)
class DerivationCheck:
    ok: bool
    witness: str = ""

    def __bool__(self):
        return self.ok


def zero_derivation(f: PreLogMorphism, J: ModulePresentation) -> LogDerivation:
    z = vec_zero(J.ring, J.ngens)
    return LogDerivation(f, J, tuple(z for _ in range(f.target.nvars)), tuple(z for _ in range(f.target.P.n_gens)))


def check_derivation(D: LogDerivation, max_degree: int = DEFAULT_LIFT_DEGREE) -> DerivationCheck:
    """Leibniz on ring relations, A-linearity, log compatibility and
    vanishing on the image of ``M``, each checked exactly."""
    f, J = D.morphism, D.module
    Y = f.target
    B = Y.ring
    z = J.is_zero_element
    for g in B.relations:
        if not z(D.apply_d(g), max_degree):
            return DerivationCheck(False, f"Leibniz fails on relation {B.fmt(g)}")
    for i, p in enumerate(f.ring_images):
        if not z(D.apply_d(p), max_degree):
            return DerivationCheck(False, f"d does not kill the image of {f.source.ring.names[i]}")
    for j in range(Y.P.n_gens):
        a = Y.alpha_poly(j)
        lhs = tuple(a * x for x in D.d_flat[j])
        rhs = D.apply_d(a)
        if not z(tuple(x - y for x, y in zip(lhs, rhs)), max_degree):
            return DerivationCheck(False, f"alpha(n) dlog n != d alpha(n) for n = {Y.P.names[j]}")
    for i, w in enumerate(f.monoid.images):
        if not z(D.apply_flat(w), max_degree):
            return DerivationCheck(False, f"d_flat does not vanish on the image of {f.source.P.names[i]}")
    for a, b in Y.P.relations:
        diff = tuple(x - y for x, y in zip(a, b))
        if not z(D.apply_flat(diff), max_degree):
            return DerivationCheck(False, f"d_flat is not additive on relation {a} = {b}")
    return DerivationCheck(True)


def derivation_space_dimension(f: PreLogMorphism, pt: Sequence, r: int) -> int:
    """``dim Der((B,N)/(A,M), k(pt)^r)`` computed directly from the
    derivation rules (unknowns: values of d on ring and dlog generators)."""
    Y = f.target
    B = Y.ring
    F = B.field
    pt = B.check_point(pt)
    nb, nn = B.nvars, Y.P.n_gens
    eqs = []  # each equation: coefficient row over the nb + nn unknowns (per J-coordinate)
    for g in B.relations:
        eqs.append([g.diff(i).evaluate(pt) for i in range(nb)] + [F(0)] * nn)
    for p in f.ring_images:
        eqs.append([p.diff(i).evaluate(pt) for i in range(nb)] + [F(0)] * nn)
    for j in range(nn):
        a = Y.alpha_poly(j)
        row = [F(-a.diff(i).evaluate(pt)) for i in range(nb)] + [F(0)] * nn
        row[nb + j] = F(row[nb + j] + a.evaluate(pt))
        eqs.append(row)
    for w in f.monoid.images:
        eqs.append([F(0)] * nb + [F(c) for c in w])
    for a, b in Y.P.relations:
        eqs.append([F(0)] * nb + [F(x - y) for x, y in zip(a, b)])
    # the constraints act coordinatewise on k^r
    return r * len(field_kernel(F, eqs, nb + nn))
