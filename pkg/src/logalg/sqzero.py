"""Strict square-zero extensions of discrete log rings.

An extension is a chart morphism ``pi: (R, P) -> (S, Q)`` with ``R`` and
``S`` finite-dimensional over k, ``pi`` surjective with kernel ``J``,
``J^2 = 0``, and ``pi_flat`` an isomorphism of chart monoids.  Charts are
sharp (no chart generator maps to a unit), so the log monoids are
``P ⊕ R^x`` and ``Q ⊕ S^x``.

Classes of extensions are recorded at chain level on the presentation of
``S``: a value in ``J`` for every ring relation (the map ``I/I^2 -> J``)
and one for every log generator (the ``d_flat`` part).  Two classes agree
when they differ by a trivial derivation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

from . import monoid as mon
from .errors import NotADerivation, NotIntegral, NotSquareZero, NotStrict, TooLarge, UnsupportedPresentation
from .exactla import AbelianSquare, FgAbelianGroup, IntMatrix, cokernel, square_is_cartesian, square_is_cocartesian
from .finalg import FiniteAlgebra, finite_algebra, linear_map_matrix, ring_map_is_well_defined
from .monoid import MonoidHom, MonoidPresentation
from .prelog import ChartPreLogRing, PreLogMorphism
from .ring import Field, ModulePresentation, Poly, Ring, field_kernel, field_rank, solve_dense

Vec = tuple


def _mat_vec(F: Field, M: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(F(sum(a * b for a, b in zip(row, v))) for row in M)


# ---------------------------------------------------------------------------
# J as a finite-dimensional S-module


@dataclass(frozen=True)
class JModule:
    """``J`` with a k-basis; ``action[i]`` is the matrix of the i-th variable of S."""

    field: Field
    dim: int
    action: tuple[tuple[tuple, ...], ...]
    labels: tuple[str, ...] = ()

    def zero(self) -> Vec:
        return tuple(self.field(0) for _ in range(self.dim))

    def act(self, h: Poly, v: Vec) -> Vec:
        """``h . v`` for a polynomial ``h`` in the variables of S."""
        F = self.field
        out = [F(0)] * self.dim
        for e, c in h.terms.items():
            w = tuple(v)
            for i, k in enumerate(e):
                for _ in range(k):
                    w = _mat_vec(F, self.action[i], w)
            out = [F(a + c * b) for a, b in zip(out, w)]
        return tuple(out)


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True, eq=False)
class LogSquareZero:
    projection: PreLogMorphism
    name: str = ""

    @property
    def R(self) -> ChartPreLogRing:
        return self.projection.source

    @property
    def S(self) -> ChartPreLogRing:
        return self.projection.target

    @property
    def field(self) -> Field:
        return self.R.field

    @cached_property
    def R_alg(self) -> FiniteAlgebra:
        return finite_algebra(self.R.ring)

    @cached_property
    def S_alg(self) -> FiniteAlgebra:
        return finite_algebra(self.S.ring)

    @cached_property
    def pi_matrix(self) -> list[list]:
        return linear_map_matrix(self.R_alg, self.S_alg, self.projection.ring_images)

    def pi(self, r: Vec) -> Vec:
        return _mat_vec(self.field, self.pi_matrix, r)

    @cached_property
    def J_basis(self) -> tuple[Vec, ...]:
        """Basis of ``ker(pi)`` in R coordinates."""
        return tuple(tuple(v) for v in field_kernel(self.field, self.pi_matrix, self.R_alg.dim))

    def j_coords(self, r: Vec) -> Vec:
        """Coordinates of an element of ``J`` (given in R coordinates)."""
        F = self.field
        if not self.J_basis:
            if any(r):
                raise ValueError("element is not in J")
            return ()
        rows = [[b[i] for b in self.J_basis] for i in range(self.R_alg.dim)]
        x = solve_dense(F, rows, r)
        if x is None:
            raise ValueError("element is not in J")
        return tuple(x)

    def j_elem(self, c: Vec) -> Vec:
        out = self.R_alg.zero()
        for x, b in zip(c, self.J_basis):
            if x:
                out = self.R_alg.add(out, self.R_alg.scale(x, b))
        return out

    def lift(self, s: Vec) -> Vec:
        """Some preimage under ``pi`` (a linear section)."""
        x = solve_dense(self.field, self.pi_matrix, s)
        if x is None:
            raise NotSquareZero("projection is not surjective")
        return tuple(x)

    @cached_property
    def variable_lifts(self) -> tuple[Vec, ...]:
        """Lifts of the variables of S, preferring variables of R mapping onto them."""
        out = []
        for i in range(self.S.nvars):
            target = self.S.ring.var(i)
            r = next((k for k, p in enumerate(self.projection.ring_images) if p == target), None)
            if r is not None:
                out.append(self.R_alg.vec(self.R.ring.var(r)))
            else:
                out.append(self.lift(self.S_alg.vec(target)))
        return tuple(out)

    @cached_property
    def J(self) -> JModule:
        acts = []
        for i in range(self.S.nvars):
            cols = [self.j_coords(self.R_alg.mul(self.variable_lifts[i], b)) for b in self.J_basis]
            acts.append(tuple(tuple(cols[c][r] for c in range(len(cols))) for r in range(len(self.J_basis))))
        labels = tuple(self.R.ring.fmt(self.R_alg.poly(b)) for b in self.J_basis)
        return JModule(self.field, len(self.J_basis), tuple(acts), labels)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "R": self.R.to_json(),
            "S": self.S.to_json(),
            "pi": [self.S.ring.fmt(p) for p in self.projection.ring_images],
            "dim_R": self.R_alg.dim,
            "dim_S": self.S_alg.dim,
            "dim_J": len(self.J_basis),
        }


def square_zero(R: ChartPreLogRing, S: ChartPreLogRing, ring_images: Sequence, monoid_images: Sequence | None = None, name: str = "") -> LogSquareZero:
    if monoid_images is None:
        monoid_images = [S.P.unit(i) for i in range(S.P.n_gens)]
    if len(ring_images) != R.nvars:
        raise ValueError(f"need {R.nvars} ring images, got {len(ring_images)}")
    imgs = [p if isinstance(p, Poly) else (S.ring.monomial(p) if p is not None else S.ring.zero()) for p in ring_images]
    pi = PreLogMorphism(R, S, tuple(imgs), MonoidHom(R.P, S.P, tuple(tuple(x) for x in monoid_images)), name)
    E = LogSquareZero(pi, name)
    check_square_zero(E)
    return E


def check_square_zero(E: LogSquareZero) -> None:
    """Ring map well defined, surjective, kernel squares to zero."""
    if not ring_map_is_well_defined(E.R_alg, E.S_alg, E.projection.ring_images):
        raise NotSquareZero("projection does not respect the ring relations")
    if field_rank(E.field, E.pi_matrix) != E.S_alg.dim:
        raise NotSquareZero("projection is not surjective")
    for a in E.J_basis:
        for b in E.J_basis:
            if not E.R_alg.is_zero(E.R_alg.mul(a, b)):
                raise NotSquareZero("J^2 != 0")
    E.projection.check()


def exp(E: LogSquareZero, xi: Vec) -> Vec:
    """``xi -> 1 + xi`` from J (in J coordinates) to the units of R."""
    return E.R_alg.add(E.R_alg.one(), E.j_elem(xi))


# ---------------------------------------------------------------------------
# trivial extensions


def _var_name(label: str, k: int, taken: set[str]) -> str:
    name = label if label.isidentifier() and label not in taken else f"e{k}"
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def trivial_extension(X: ChartPreLogRing, J: ModulePresentation, name: str = "") -> LogSquareZero:
    """``(B ⊕ J, N)`` with ``J`` adjoined as square-zero variables; the
    additive part of the log monoid is ``exp(J) ⊂ (B ⊕ J)^x``."""
    B = X.ring
    taken = set(B.names)
    enames = tuple(_var_name(l, k, taken) for k, l in enumerate(J.labels))
    nb, m = B.nvars, len(enames)
    n = nb + m
    F = X.field

    def lift(p: Poly) -> Poly:
        return Poly(F, n, {e + (0,) * m: c for e, c in p.terms.items()})

    def evar(a):
        return Poly.var(F, n, nb + a)

    extra_rel = [lift(r) for r in X.extra_relations]
    for rel in J.relations:
        acc = Poly(F, n)
        for a, p in enumerate(rel):
            acc = acc + lift(p) * evar(a)
        if not acc.is_zero():
            extra_rel.append(acc)
    for a in range(m):
        for b in range(a, m):
            extra_rel.append(evar(a) * evar(b))
    alpha = [None if a is None else tuple(a) + (0,) * m for a in X.alpha]
    R = ChartPreLogRing(F, X.Q, X.P, tuple(alpha), tuple(X.extra_names) + enames, tuple(extra_rel), name or f"{X.name}+J")
    imgs = tuple(B.var(i) for i in range(nb)) + tuple(B.zero() for _ in range(m))
    pi = PreLogMorphism(R, X, imgs, MonoidHom.identity(X.P), name)
    return LogSquareZero(pi, name)


def unit_check(E: LogSquareZero, ring: Ring | None = None) -> bool:
    """``(1 + x)(1 - x) = 1`` for every adjoined square-zero variable, checked
    in the presentation (no finiteness needed)."""
    R = E.R.ring
    ok = True
    for k, p in enumerate(E.projection.ring_images):
        if p.is_zero():
            x = R.var(k)
            ok = ok and R.equal((R.one() + x) * (R.one() - x), R.one())
    return ok


# ---------------------------------------------------------------------------
# strict exactness


@dataclass
class StrictExactReport:
    ok: bool
    certificate: dict = field(default_factory=dict)
    witness: object = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "certificate": self.certificate, "witness": None if self.witness is None else list(self.witness)}


def _sharp_chart(E: LogSquareZero) -> bool:
    for X, A in ((E.R, E.R_alg), (E.S, E.S_alg)):
        for j in range(X.P.n_gens):
            if A.is_unit(A.vec(X.alpha_poly(j))):
                return False
    return True


def verify_strict_exact(E: LogSquareZero) -> StrictExactReport:
    """``P ≅ Q x_{Q^gp} P^gp`` with certified mutual maps, plus strictness."""
    P, Q = E.R.P, E.S.P
    if not (mon.is_integral(P) and mon.is_integral(Q)):
        raise NotIntegral("log monoids must be integral")
    check_square_zero(E)
    cert: dict = {}
    cert["sharp_charts"] = _sharp_chart(E)
    inv = mon.isomorphism_inverse(E.projection.monoid) if mon.is_integral(P) else None
    cert["strict"] = inv is not None
    if not cert["sharp_charts"]:
        return StrictExactReport(False, cert)
    witness = mon.exactness_witness(E.projection.monoid)
    if witness is not None:
        cert["exact"] = False
        return StrictExactReport(False, cert, witness)
    rep = mon.repletion(E.projection.monoid)
    back = mon.isomorphism_inverse(rep.unit)
    cert["exact"] = back is not None
    if back is not None:
        there = rep.unit.compose(back)
        again = back.compose(rep.unit)
        cert["mutual_maps"] = all(mon.equivalent(P, x, P.unit(i)) for i, x in enumerate(there.images)) and all(
            mon.equivalent(rep.monoid, x, rep.monoid.unit(i)) for i, x in enumerate(again.images)
        )
    ok = cert["strict"] and cert["exact"] and cert.get("mutual_maps", False)
    return StrictExactReport(ok, cert)


# ---------------------------------------------------------------------------
# the exp squares


@dataclass
class ExpSquareResult:
    left: AbelianSquare
    right: AbelianSquare
    model: str
    groups: dict

    @property
    def cartesian(self) -> tuple[bool, bool]:
        return square_is_cartesian(self.left), square_is_cartesian(self.right)

    @property
    def cocartesian(self) -> tuple[bool, bool]:
        return square_is_cocartesian(self.left), square_is_cocartesian(self.right)

    @property
    def verdict(self) -> tuple[bool, bool]:
        c, k = self.cartesian, self.cocartesian
        return (c[0] and k[0], c[1] and k[1])

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "groups": {k: str(v) for k, v in self.groups.items()},
            "cartesian": list(self.cartesian),
            "cocartesian": list(self.cocartesian),
            "commutes": [self.left.commutes(), self.right.commutes()],
        }


@dataclass(frozen=True)
class _Presented:
    """An abelian group as ``Z^n / span(rel)`` with its canonical form."""

    n: int
    rel: tuple[tuple[int, ...], ...]

    @cached_property
    def group(self) -> FgAbelianGroup:
        return cokernel(IntMatrix.from_columns(list(self.rel), self.n))


def _canon_map(amb: Sequence[Sequence[int]], src: _Presented, tgt: _Presented) -> IntMatrix:
    """Canonical-coordinate matrix of the map whose j-th ambient generator goes to ``amb[j]``."""
    A = IntMatrix.from_columns(list(amb), tgt.n) if amb else IntMatrix.zeros(tgt.n, 0)
    M = tgt.group.coordinate_map @ A @ src.group.presentation_map
    G = tgt.group
    return IntMatrix.from_columns([G.reduce(M.column(j)) for j in range(M.cols)], G.ngens)


def _direct_sum(a: _Presented, b: _Presented) -> _Presented:
    rel = [tuple(r) + (0,) * b.n for r in a.rel] + [(0,) * a.n + tuple(r) for r in b.rel]
    return _Presented(a.n + b.n, tuple(rel))


def _unit_group_finite(A: FiniteAlgebra):
    """Units of a finite algebra as ``Z^r / relations`` on a small generating set.

    A breadth-first search of the Cayley graph gives every unit a coordinate
    vector along a spanning tree; the relation lattice is spanned by the
    tree-closing vectors ``c(x) + e_g - c(xg)``.  Returns the coordinate map
    and the presentation."""
    units = [a for a in A.elements() if A.is_unit(a)]
    gens: list[Vec] = []
    coord: dict[Vec, tuple[int, ...]] = {A.one(): ()}
    for u in units:
        if u in coord:
            continue
        gens.append(u)
        r = len(gens)
        coord = {x: c + (0,) * (r - len(c)) for x, c in coord.items()}
        frontier = list(coord)
        while frontier:
            nxt = []
            for x in frontier:
                for k, g in enumerate(gens):
                    y = A.mul(x, g)
                    if y not in coord:
                        coord[y] = tuple(c + int(i == k) for i, c in enumerate(coord[x]))
                        nxt.append(y)
            frontier = nxt
    r = len(gens)
    rel = set()
    for x, c in coord.items():
        for k, g in enumerate(gens):
            v = tuple(a + int(i == k) - b for i, (a, b) in enumerate(zip(c, coord[A.mul(x, g)])))
            if any(v):
                rel.add(v)
    return coord, _Presented(r, tuple(sorted(rel)))


def _lattice_part(M: MonoidPresentation) -> _Presented:
    return _Presented(M.n_gens, tuple(tuple(x - y for x, y in zip(a, b)) for a, b in M.relations))


def exp_square(E: LogSquareZero) -> ExpSquareResult:
    """The squares ``J -> R^x -> P^gp`` over ``1 -> S^x -> Q^gp``."""
    rep = verify_strict_exact(E)
    if not rep.ok:
        raise NotStrict(f"extension is not strict and exact: {rep.certificate}")
    F = E.field
    Pm, Qm = E.R.P, E.S.P
    LP, LQ = _lattice_part(Pm), _lattice_part(Qm)
    dj = len(E.J_basis)
    if F.char:
        p = F.char
        Jp = _Presented(dj, tuple(tuple(p * int(i == j) for i in range(dj)) for j in range(dj)))
        Rc, RU = _unit_group_finite(E.R_alg)
        Sc, SU = _unit_group_finite(E.S_alg)
        Rgens = [u for u, c in Rc.items() if sum(c) == 1 and max(c) == 1]
        Rgens.sort(key=lambda u: Rc[u].index(1))
        exp_amb = [list(Rc[exp(E, tuple(F(int(i == j)) for i in range(dj)))]) for j in range(dj)]
        pix_amb = [list(Sc[E.pi(g)]) for g in Rgens]
        model = "materialized"
    else:
        # log coordinates on 1 + rad: a basis of rad(R) extending the J basis
        rad = E.R_alg.radical_basis()
        basis = list(E.J_basis)
        for v in rad:
            trial = basis + [v]
            if field_rank(F, [[b[i] for b in trial] for i in range(E.R_alg.dim)]) == len(trial):
                basis = trial
        comp = basis[dj:]
        images = [E.pi(v) for v in comp]
        rs, ss = len(basis), len(images)
        Jp = _Presented(dj, ())
        RU = _Presented(rs, ())
        SU = _Presented(ss, ())
        exp_amb = [[int(i == j) for i in range(rs)] for j in range(dj)]
        pix_amb = [[0] * ss for _ in range(dj)] + [[int(i == k) for i in range(ss)] for k in range(ss)]
        model = "formal k^x (log coordinates on 1 + rad)"
    one = _Presented(0, ())
    Pgp = _direct_sum(LP, RU)
    Qgp = _direct_sum(LQ, SU)
    cR = [[0] * LP.n + list(v) for v in _units_ambient(RU.n)]
    cS = [[0] * LQ.n + list(v) for v in _units_ambient(SU.n)]
    pif = [list(E.projection.monoid.images[j]) + [0] * SU.n for j in range(LP.n)] + [[0] * LQ.n + list(v) for v in pix_amb]
    left = AbelianSquare(
        Jp.group, RU.group, one.group, SU.group,
        top=_canon_map(exp_amb, Jp, RU),
        left=_canon_map([[] for _ in range(dj)], Jp, one),
        right=_canon_map(pix_amb, RU, SU),
        bottom=_canon_map([], one, SU),
    )
    right = AbelianSquare(
        RU.group, Pgp.group, SU.group, Qgp.group,
        top=_canon_map(cR, RU, Pgp),
        left=_canon_map(pix_amb, RU, SU),
        right=_canon_map(pif, Pgp, Qgp),
        bottom=_canon_map(cS, SU, Qgp),
    )
    groups = {"J": Jp.group, "R^x": RU.group, "S^x": SU.group, "P^gp": Pgp.group, "Q^gp": Qgp.group}
    return ExpSquareResult(left, right, model, groups)


def _units_ambient(n: int) -> list[list[int]]:
    return [[int(i == j) for i in range(n)] for j in range(n)]


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class SquareZeroDerivation:
    """Chain-level log derivation ``(S, Q) -> (S ⊕ J[1], Q ⊕ J[1])``:
    ``relation_values[k]`` is the value on the k-th ring relation of S and
    ``log_values[j]`` the value of ``d_flat`` on the j-th log generator."""

    base: ChartPreLogRing
    J: JModule
    relation_values: tuple[Vec, ...]
    log_values: tuple[Vec, ...]
    route: str = ""

    def to_json(self) -> dict:
        return {
            "route": self.route,
            "J_dim": self.J.dim,
            "relations": [[str(x) for x in v] for v in self.relation_values],
            "log": [[str(x) for x in v] for v in self.log_values],
        }


@dataclass(frozen=True)
class SquareZeroRing:
    """``R ≅ S ⊕ J`` through a linear section, with the symmetric cocycle
    ``c(a, b) = s(a) s(b) - s(ab)`` on the basis of S."""

    S: FiniteAlgebra
    J: JModule
    section: tuple[Vec, ...]  # R coordinates of s(basis element)
    cocycle: tuple[tuple[Vec, ...], ...]  # J coordinates

    def mul(self, x: tuple[Vec, Vec], y: tuple[Vec, Vec]) -> tuple[Vec, Vec]:
        (s, j), (t, k) = x, y
        S, F = self.S, self.S.field
        st = S.mul(s, t)
        out = [F(0)] * self.J.dim
        sp, tp = S.poly(s), S.poly(t)
        for a, b in ((sp, k), (tp, j)):
            w = self.J.act(a, b)
            out = [F(u + v) for u, v in zip(out, w)]
        for a, x_a in enumerate(s):
            if not x_a:
                continue
            for b, y_b in enumerate(t):
                if y_b:
                    out = [F(u + x_a * y_b * c) for u, c in zip(out, self.cocycle[a][b])]
        return st, tuple(out)

    def evaluate(self, p: Poly, images: Sequence[tuple[Vec, Vec]]) -> tuple[Vec, Vec]:
        F = self.S.field
        acc = (self.S.zero(), self.J.zero())
        one = (self.S.one(), self.J.zero())
        for e, c in p.terms.items():
            t = one
            for i, k in enumerate(e):
                for _ in range(k):
                    t = self.mul(t, images[i])
            acc = (tuple(F(a + c * b) for a, b in zip(acc[0], t[0])), tuple(F(a + c * b) for a, b in zip(acc[1], t[1])))
        return acc

    def is_symmetric(self) -> bool:
        n = self.S.dim
        return all(self.cocycle[a][b] == self.cocycle[b][a] for a in range(n) for b in range(n))


def ring_part(E: LogSquareZero) -> SquareZeroRing:
    check_square_zero(E)
    S = E.S_alg
    section = tuple(E.lift(S.unit_vector(a)) for a in range(S.dim))
    R = E.R_alg

    def sigma(s):
        out = R.zero()
        for x, v in zip(s, section):
            if x:
                out = R.add(out, R.scale(x, v))
        return out

    table = []
    for a in range(S.dim):
        row = []
        for b in range(S.dim):
            prod = R.mul(section[a], section[b])
            ab = sigma(S.table[a][b])
            row.append(E.j_coords(R.sub(prod, ab)))
        table.append(tuple(row))
    return SquareZeroRing(S, E.J, section, tuple(table))


def _to_sum(E: LogSquareZero, Z: SquareZeroRing, r: Vec) -> tuple[Vec, Vec]:
    s = E.pi(r)
    sig = E.R_alg.zero()
    for x, v in zip(s, Z.section):
        if x:
            sig = E.R_alg.add(sig, E.R_alg.scale(x, v))
    return s, E.j_coords(E.R_alg.sub(r, sig))


def classify(E: LogSquareZero, route: str = "tor") -> SquareZeroDerivation:
    """Chain-level class of ``E``.

    ``route="tor"`` works in ``S ⊕_c J`` with the cocycle of a linear
    section (any characteristic); ``route="cdga"`` evaluates the relations
    of S on generator lifts in R, i.e. the derivation on the free
    resolution ``k[x, y | dy = g]`` (characteristic 0)."""
    rep = verify_strict_exact(E)
    if not rep.ok:
        raise NotStrict(f"extension is not strict and exact: {rep.certificate}")
    S = E.S
    rels = S.ring.relations
    if route == "cdga":
        if E.field.char:
            raise UnsupportedPresentation("the cdga route needs characteristic 0")
        R = E.R_alg
        lifts = E.variable_lifts
        rv = tuple(E.j_coords(R.evaluate(g, lifts)) for g in rels)
        lv = []
        for j in range(S.P.n_gens):
            a = R.vec(E.R.alpha_poly(j))
            b = R.evaluate(S.alpha_poly(j), lifts)
            lv.append(E.j_coords(R.sub(a, b)))
        return SquareZeroDerivation(S, E.J, rv, tuple(lv), "cdga")
    if route != "tor":
        raise ValueError(f"unknown route {route!r}")
    Z = ring_part(E)
    gens = [(E.S_alg.vec(S.ring.var(i)), E.J.zero()) for i in range(S.nvars)]
    rv = tuple(Z.evaluate(g, gens)[1] for g in rels)
    lv = []
    F = E.field
    for j in range(S.P.n_gens):
        _, ja = _to_sum(E, Z, E.R_alg.vec(E.R.alpha_poly(j)))
        _, jb = Z.evaluate(S.alpha_poly(j), gens)
        lv.append(tuple(F(x - y) for x, y in zip(ja, jb)))
    return SquareZeroDerivation(S, E.J, rv, tuple(lv), "tor")


def _trivial_columns(base: ChartPreLogRing, J: JModule) -> tuple[list[list], int]:
    """Columns (flattened class vectors) spanned by trivial derivations, and
    the number of unknowns; unknowns are (D_i, xi_j) with xi additive."""
    F = J.field
    S = base.ring
    rels = S.relations
    nv, nl, d = S.nvars, base.P.n_gens, J.dim
    cols = []
    # the xi must satisfy the lattice relations of the log monoid
    cons = []
    for a, b in base.P.relations:
        for t in range(d):
            row = [F(0)] * ((nv + nl) * d)
            for j in range(nl):
                row[(nv + j) * d + t] = F(a[j] - b[j])
            cons.append(row)
    dom = field_kernel(F, cons, (nv + nl) * d) if cons else [[F(int(i == k)) for i in range((nv + nl) * d)] for k in range((nv + nl) * d)]
    for x in dom:
        D = [tuple(x[i * d : (i + 1) * d]) for i in range(nv)]
        xi = [tuple(x[(nv + j) * d : (nv + j + 1) * d]) for j in range(nl)]
        vec = []
        for g in rels:
            acc = J.zero()
            for i in range(nv):
                w = J.act(g.diff(i), D[i])
                acc = tuple(F(u + v) for u, v in zip(acc, w))
            vec.extend(acc)
        for j in range(nl):
            beta = base.alpha_poly(j)
            acc = J.act(beta, xi[j])
            for i in range(nv):
                w = J.act(beta.diff(i), D[i])
                acc = tuple(F(u - v) for u, v in zip(acc, w))
            vec.extend(acc)
        cols.append(vec)
    return cols, len(dom)


def _flat(D: SquareZeroDerivation) -> list:
    return [x for v in D.relation_values for x in v] + [x for v in D.log_values for x in v]


def same_class(D1: SquareZeroDerivation, D2: SquareZeroDerivation) -> bool:
    """``D1 - D2`` is a trivial derivation."""
    F = D1.J.field
    diff = [F(a - b) for a, b in zip(_flat(D1), _flat(D2))]
    if not any(diff):
        return True
    cols, _ = _trivial_columns(D1.base, D1.J)
    if not cols:
        return False
    rows = [[c[i] for c in cols] for i in range(len(diff))]
    return solve_dense(F, rows, diff) is not None


def is_trivial_class(D: SquareZeroDerivation) -> bool:
    zero = SquareZeroDerivation(D.base, D.J, tuple(D.J.zero() for _ in D.relation_values), tuple(D.J.zero() for _ in D.log_values))
    return same_class(D, zero)


def zero_derivation(X: ChartPreLogRing, J: JModule) -> SquareZeroDerivation:
    return SquareZeroDerivation(X, J, tuple(J.zero() for _ in X.ring.relations), tuple(J.zero() for _ in range(X.P.n_gens)), "zero")


# ---------------------------------------------------------------------------
# reconstruction


def _normalize(D: SquareZeroDerivation) -> tuple[SquareZeroDerivation, bool]:
    """Move the class representative so that ``d_flat`` vanishes, if possible."""
    F = D.J.field
    cols, _ = _trivial_columns(D.base, D.J)
    nrel = len(D.relation_values) * D.J.dim
    target = [F(-x) for v in D.log_values for x in v]
    if not any(target):
        return D, True
    if not cols:
        return D, False
    rows = [[c[nrel + i] for c in cols] for i in range(len(target))]
    x = solve_dense(F, rows, target)
    if x is None:
        return D, False
    shift = [F(sum(xk * c[i] for xk, c in zip(x, cols))) for i in range(len(cols[0]))]
    flat = [F(a + b) for a, b in zip(_flat(D), shift)]
    d = D.J.dim
    rv = tuple(tuple(flat[k * d : (k + 1) * d]) for k in range(len(D.relation_values)))
    lv = tuple(tuple(flat[nrel + j * d : nrel + (j + 1) * d]) for j in range(len(D.log_values)))
    return SquareZeroDerivation(D.base, D.J, rv, lv, D.route), True


def reconstruct(X: ChartPreLogRing, D: SquareZeroDerivation, name: str = "") -> LogSquareZero:
    """``(S ⊕_d J, Q ⊕_{d_flat} J)`` as an explicit chart extension of ``X``."""
    if D.base != X:
        raise NotADerivation("derivation is defined on a different base")
    D, flat_zero = _normalize(D)
    S = X.ring
    F = X.field
    nv, d = S.nvars, D.J.dim
    taken = set(S.names)
    enames = [_var_name(f"e{a}", a, taken) for a in range(d)]
    zidx = [j for j, v in enumerate(D.log_values) if any(v)]
    znames = [_var_name(f"z{j}", j, taken) for j in zidx]
    n = nv + d + len(zidx)

    def up(p: Poly) -> Poly:
        return Poly(F, n, {e + (0,) * (n - nv): c for e, c in p.terms.items()})

    def ev(a):
        return Poly.var(F, n, nv + a)

    def jpoly(v):
        acc = Poly(F, n)
        for a, c in enumerate(v):
            if c:
                acc = acc + ev(a).scale(c)
        return acc

    rels = []
    for g, val in zip(S.relations, D.relation_values):
        rels.append(up(g) - jpoly(val))
    for i in range(nv):
        for a in range(d):
            col = [D.J.action[i][b][a] for b in range(d)]
            rels.append(Poly.var(F, n, i) * ev(a) - jpoly(col))
    for a in range(d):
        for b in range(a, d):
            rels.append(ev(a) * ev(b))
    alpha = []
    for j in range(X.P.n_gens):
        if j in zidx:
            k = zidx.index(j)
            z = Poly.var(F, n, nv + d + k)
            rels.append(z - up(X.alpha_poly(j)) - jpoly(D.log_values[j]))
            alpha.append(tuple(int(i == nv + d + k) for i in range(n)))
        else:
            a = X.alpha[j]
            alpha.append(None if a is None else tuple(a) + (0,) * (n - nv))
    names = tuple(S.names) + tuple(enames) + tuple(znames)
    R = ChartPreLogRing(F, MonoidPresentation.trivial(), X.P, tuple(alpha), names, tuple(rels), name or f"{X.name}+_dJ")
    imgs = tuple(S.var(i) for i in range(nv)) + tuple(S.zero() for _ in range(d)) + tuple(X.alpha_poly(j) for j in zidx)
    pi = PreLogMorphism(R, X, imgs, MonoidHom.identity(X.P), name)
    E = LogSquareZero(pi, name)
    try:
        A = E.R_alg
    except Exception as exc:  # pragma: no cover - finite_algebra failure
        raise NotADerivation(f"reconstruction is not finite: {exc}") from exc
    if A.dim != E.S_alg.dim + d:
        raise NotADerivation(f"the relation values are not a cocycle (dimension {A.dim} != {E.S_alg.dim} + {d})")
    for a, b in X.P.relations:
        if not A.is_zero(A.sub(A.vec(R.alpha_of(a)), A.vec(R.alpha_of(b)))):
            raise NotADerivation("d_flat is not compatible with the log relations")
    return E


# ---------------------------------------------------------------------------
# isomorphisms over (S, Q)


@dataclass
class ExtensionIso:
    ok: bool
    chi: tuple[Poly, ...] = ()  # R -> R'
    chi_inverse: tuple[Poly, ...] = ()
    chi_flat_units: tuple[Vec, ...] = ()  # alpha'(chi_flat p) = chi(alpha(p)) / (1 + xi_p)
    failure: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "failure": self.failure, "chi": [str(p) for p in self.chi], "chi_flat_units": [[str(x) for x in v] for v in self.chi_flat_units]}


def certify_extension_iso(E: LogSquareZero, E2: LogSquareZero, inverse_images: Sequence[Poly]) -> ExtensionIso:
    """Given a ring map ``R' -> R`` (images of the variables of R'), certify
    that it is an isomorphism over S and produce ``chi, chi_flat``."""
    A, B = E.R_alg, E2.R_alg
    F = E.field
    if E.S != E2.S:
        return ExtensionIso(False, failure="different bases")
    if not ring_map_is_well_defined(B, A, inverse_images):
        return ExtensionIso(False, failure="inverse map does not respect relations")
    M = linear_map_matrix(B, A, inverse_images)
    if A.dim != B.dim or field_rank(F, M) != A.dim:
        return ExtensionIso(False, failure="inverse map is not bijective")
    chi = []
    for i in range(E.R.nvars):
        x = solve_dense(F, M, A.vec(E.R.ring.var(i)))
        chi.append(B.poly(tuple(x)))
    if not ring_map_is_well_defined(A, B, chi):  # pragma: no cover - inverse of a ring iso
        return ExtensionIso(False, failure="chi does not respect relations")
    # over S
    for i in range(E.R.nvars):
        lhs = E2.S_alg.vec(chi[i].substitute(E2.projection.ring_images, E2.S.nvars))
        if lhs != E.S_alg.vec(E.projection.ring_images[i]):
            return ExtensionIso(False, failure="chi is not a map over S")
    # compose both ways to the identity on generators
    for i in range(E.R.nvars):
        back = A.evaluate(chi[i], [A.vec(p) for p in inverse_images])
        if back != A.vec(E.R.ring.var(i)):
            return ExtensionIso(False, failure="chi_inverse . chi != id")
    for k in range(E2.R.nvars):
        there = B.evaluate(inverse_images[k], [B.vec(p) for p in chi])
        if there != B.vec(E2.R.ring.var(k)):
            return ExtensionIso(False, failure="chi . chi_inverse != id")
    # chi_flat: identity on log generators up to units 1 + xi
    units = []
    for j in range(E.R.P.n_gens):
        target = B.evaluate(E.R.alpha_poly(j), [B.vec(p) for p in chi])
        a2 = B.vec(E2.R.alpha_poly(j))
        diff = B.sub(target, a2)
        cols = [B.mul(a2, b) for b in E2.J_basis]
        if cols:
            rows = [[c[r] for c in cols] for r in range(B.dim)]
            x = solve_dense(F, rows, diff)
        else:
            x = [] if B.is_zero(diff) else None
        if x is None:
            return ExtensionIso(False, failure=f"chi_flat has no unit factor for log generator {j}")
        units.append(tuple(x))
    for a, b in E.R.P.relations:
        for t in range(len(E2.J_basis)):
            if F(sum((x - y) * u[t] for x, y, u in zip(a, b, units))) != 0:
                return ExtensionIso(False, failure="chi_flat unit factors are not additive")
    return ExtensionIso(True, tuple(chi), tuple(inverse_images), tuple(units))


@dataclass
class RoundTrip:
    ok: bool
    derivation: SquareZeroDerivation
    reconstructed: LogSquareZero
    iso: ExtensionIso

    def to_json(self) -> dict:
        return {"ok": self.ok, "derivation": self.derivation.to_json(), "iso": self.iso.to_json(), "reconstructed": self.reconstructed.to_json()}


def roundtrip(E: LogSquareZero, route: str | None = None) -> RoundTrip:
    """``reconstruct(classify(E)) ≅ E`` over ``(S, Q)`` with certified ``chi, chi_flat``."""
    route = route or ("cdga" if E.field.char == 0 else "tor")
    D = classify(E, route)
    E2 = reconstruct(E.S, D, E.name)
    Dn, _ = _normalize(D)
    # R' -> R: variables of S go to lifts shifted by the normalization, e_a to
    # the J basis, z_j to the lifted log images
    inv = _reconstruction_inverse(E, D, Dn, E2)
    iso = certify_extension_iso(E, E2, inv)
    return RoundTrip(iso.ok, D, E2, iso)


def _lifts_for(E: LogSquareZero, D: SquareZeroDerivation) -> list[Vec]:
    if D.route == "cdga":
        return list(E.variable_lifts)
    Z = ring_part(E)
    out = []
    for i in range(E.S.nvars):
        s = E.S_alg.vec(E.S.ring.var(i))
        sig = E.R_alg.zero()
        for x, v in zip(s, Z.section):
            if x:
                sig = E.R_alg.add(sig, E.R_alg.scale(x, v))
        out.append(sig)
    return out


def _reconstruction_inverse(E: LogSquareZero, D: SquareZeroDerivation, Dn: SquareZeroDerivation, E2: LogSquareZero) -> list[Poly]:
    """Images in R of the variables of the reconstruction of ``D``."""
    A = E.R_alg
    F = E.field
    lifts = _lifts_for(E, D)
    # find the normalization shift (D_i, xi_j) with Dn = D + T(D_i, xi_j)
    cols, _ = _trivial_columns(D.base, D.J)
    diff = [F(a - b) for a, b in zip(_flat(Dn), _flat(D))]
    shift_D = [D.J.zero() for _ in range(E.S.nvars)]
    if any(diff):
        rows = [[c[i] for c in cols] for i in range(len(diff))]
        x = solve_dense(F, rows, diff)
        # recover the parameter vector from the combination of domain vectors
        dom = _trivial_domain(D.base, D.J)
        param = [F(sum(xk * v[i] for xk, v in zip(x, dom))) for i in range(len(dom[0]))]
        d = D.J.dim
        shift_D = [tuple(param[i * d : (i + 1) * d]) for i in range(E.S.nvars)]
    images = [A.add(lifts[i], E.j_elem(shift_D[i])) for i in range(E.S.nvars)]
    out = [A.poly(v) for v in images]
    out += [A.poly(b) for b in E.J_basis]
    for j, v in enumerate(Dn.log_values):
        if any(v):
            val = A.add(A.evaluate(E.S.alpha_poly(j), images), E.j_elem(v))
            out.append(A.poly(val))
    return out


def _trivial_domain(base: ChartPreLogRing, J: JModule) -> list[list]:
    F = J.field
    nv, nl, d = base.ring.nvars, base.P.n_gens, J.dim
    cons = []
    for a, b in base.P.relations:
        for t in range(d):
            row = [F(0)] * ((nv + nl) * d)
            for j in range(nl):
                row[(nv + j) * d + t] = F(a[j] - b[j])
            cons.append(row)
    if cons:
        return field_kernel(F, cons, (nv + nl) * d)
    return [[F(int(i == k)) for i in range((nv + nl) * d)] for k in range((nv + nl) * d)]


# ---------------------------------------------------------------------------
# lifting tests


@dataclass
class LiftResult:
    verdict: str  # UniqueLift, LiftExistsNotUnique, NoLift
    squares: int
    max_solution_dim: int = 0
    obstruction: tuple = ()
    mode: str = "etale"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "squares": self.squares,
            "max_solution_dim": self.max_solution_dim,
            "obstruction": [str(x) for x in self.obstruction],
            "mode": self.mode,
        }


def _small_elements(M: MonoidPresentation, bound: int = 2) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for w in product(range(bound + 1), repeat=M.n_gens):
        if sum(w) > bound:
            continue
        nf = mon.normal_form(M, w) if M.n_gens else ()
        if nf not in seen:
            seen.add(nf)
            out.append(tuple(w))
    return out


def _candidate_squares(f: PreLogMorphism, E: LogSquareZero, max_squares: int):
    """Maps ``v: (B, N) -> (S, Q)`` whose log part lands in the chart
    (no unit factors), from a small pool of ring elements."""
    Bc = f.target
    S = E.S
    SA = E.S_alg
    pool: list[Vec] = []
    for p in [S.ring.zero(), S.ring.one()] + [S.ring.var(i) for i in range(S.nvars)] + [S.alpha_poly(j) for j in range(S.P.n_gens)]:
        v = SA.vec(p)
        if v not in pool:
            pool.append(v)
    small = _small_elements(S.P)
    flats = []
    for imgs in product(small, repeat=Bc.P.n_gens):
        h = MonoidHom(Bc.P, S.P, tuple(imgs))
        if h.is_well_defined():
            flats.append(h)
    rings = []
    for combo in product(pool, repeat=Bc.nvars):
        if all(SA.is_zero(SA.evaluate(g, combo)) for g in Bc.ring.relations):
            rings.append(combo)
    count = 0
    for h in flats:
        for combo in rings:
            ok = True
            for n in range(Bc.P.n_gens):
                lhs = SA.evaluate(Bc.alpha_poly(n), combo)
                rhs = SA.vec(S.alpha_of(h.images[n]))
                if lhs != rhs:
                    ok = False
                    break
            if ok:
                yield combo, h
                count += 1
                if count >= max_squares:
                    return


def _solve_affine(F: Field, cols: list[list], rhs: list) -> tuple[list | None, list[list]]:
    """A particular solution of ``sum x_k cols_k = rhs`` and a kernel basis."""
    nrow = len(rhs)
    if not cols:
        return ([] if not any(rhs) else None), []
    rows = [[c[i] for c in cols] for i in range(nrow)]
    x = solve_dense(F, rows, rhs) if nrow else [F(0)] * len(cols)
    ker = field_kernel(F, rows, len(cols)) if nrow else [[F(int(i == k)) for i in range(len(cols))] for k in range(len(cols))]
    return x, ker


def lifting_test(f: PreLogMorphism, E: LogSquareZero, mode: str = "etale", max_squares: int = 24, max_unknowns: int = 400) -> LiftResult:
    """Lifts ``h: (B, N) -> (R, P)`` in commutative squares with ``f`` and ``E``.

    For a square ``(u, v)`` the conditions on ``h = lift(v) + eps`` with log
    unit factors ``1 + eta`` are affine-linear in ``(eps, eta)`` with values
    in ``J``; the ``u`` lifting ``v f`` form an affine space, and since the
    right-hand side depends affinely on ``u`` it suffices to test a particular
    ``u`` and each direction of the homogeneous solution space."""
    A_c, B_c = f.source, f.target
    R = E.R_alg
    F = E.field
    Jb = E.J_basis
    dJ = len(Jb)
    nA, nB = A_c.nvars, B_c.nvars
    nM, nN = A_c.P.n_gens, B_c.P.n_gens
    if (nB + nN) * dJ > max_unknowns or (nA + nM) * dJ > max_unknowns:
        raise TooLarge("lifting system exceeds the unknown cap")
    squares = 0
    worst = 0
    for v_ring, v_flat in _candidate_squares(f, E, max_squares):
        vt = [E.lift(s) for s in v_ring]
        # u = w + eps', unit factors 1 + zeta
        vf_imgs = [R.evaluate(p, vt) for p in f.ring_images]  # a lift of v f
        c_m = [v_flat(w) for w in f.monoid.images]
        ucols, urhs = _u_system(f, E, vf_imgs, c_m)
        u0, uker = _solve_affine(F, ucols, urhs)
        if u0 is None:
            continue  # no square over this v
        squares += 1
        hcols, hrhs0 = _h_system(f, E, vt, v_flat, vf_imgs, [R.zero()] * nM, [tuple(F(0) for _ in range(dJ))] * nM)

        def rhs_for(x):
            eps = [E.j_elem(tuple(x[k * dJ : (k + 1) * dJ])) for k in range(nA)]
            zeta = [tuple(x[(nA + m) * dJ : (nA + m + 1) * dJ]) for m in range(nM)]
            u_imgs = [R.add(vf_imgs[k], eps[k]) for k in range(nA)]
            return _h_system(f, E, vt, v_flat, u_imgs, None, zeta)[1]

        base_rhs = rhs_for(u0)
        dirs = []
        for kv in uker:
            shifted = [F(a + b) for a, b in zip(u0, kv)]
            dirs.append([F(a - b) for a, b in zip(rhs_for(shifted), base_rhs)])
        for rhs in [base_rhs] + dirs:
            x, _ = _solve_affine(F, hcols, rhs)
            if x is None:
                return LiftResult("NoLift", squares, worst, tuple(rhs), mode)
        _, ker = _solve_affine(F, hcols, base_rhs)
        worst = max(worst, len(ker))
    verdict = "UniqueLift" if worst == 0 else "LiftExistsNotUnique"
    return LiftResult(verdict, squares, worst, (), mode)


def _u_system(f, E, w, c_m):
    """Conditions on ``u = w + eps'`` and ``zeta``: A relations, log compatibility, M relations."""
    A_c = f.source
    R = E.R_alg
    F = E.field
    Jb = E.J_basis
    dJ = len(Jb)
    nA, nM = A_c.nvars, A_c.P.n_gens
    blocks_cols = [[] for _ in range((nA + nM) * dJ)]
    rhs = []

    def add_eq(lin, const):
        # lin(k, b) -> R vector for unknown (k, b); const R vector moved to rhs
        for u in range((nA + nM) * dJ):
            blocks_cols[u].extend(lin(u))
        rhs.extend(F(-x) for x in const)

    for g in A_c.ring.relations:
        const = R.evaluate(g, w)
        grads = [R.evaluate(g.diff(k), w) for k in range(nA)]

        def lin(u, grads=grads):
            k, b = divmod(u, dJ)
            if k < nA:
                return R.mul(grads[k], Jb[b])
            return R.zero()

        add_eq(lin, const)
    for m in range(nM):
        am = A_c.alpha_poly(m)
        target = R.vec(E.R.alpha_of(c_m[m]))
        const = R.sub(R.evaluate(am, w), target)
        grads = [R.evaluate(am.diff(k), w) for k in range(nA)]

        def lin(u, grads=grads, target=target, m=m):
            k, b = divmod(u, dJ)
            if k < nA:
                return R.mul(grads[k], Jb[b])
            if k - nA == m:
                return R.scale(-1, R.mul(target, Jb[b]))
            return R.zero()

        add_eq(lin, const)
    for a, b_ in A_c.P.relations:
        for t in range(dJ):

            def lin(u, a=a, b_=b_, t=t):
                k, b = divmod(u, dJ)
                if k >= nA and b == t:
                    return (F(a[k - nA] - b_[k - nA]),)
                return (F(0),)

            add_eq(lin, (F(0),))
    return blocks_cols, rhs


def _h_system(f, E, vt, v_flat, u_imgs, _unused, zeta):
    """Conditions on ``h = vt + eps`` and ``eta`` (unknowns), given ``u``."""
    B_c = f.target
    R = E.R_alg
    F = E.field
    Jb = E.J_basis
    dJ = len(Jb)
    nB, nN = B_c.nvars, B_c.P.n_gens
    cols = [[] for _ in range((nB + nN) * dJ)]
    rhs = []

    def add_eq(lin, const):
        for u in range((nB + nN) * dJ):
            cols[u].extend(lin(u))
        rhs.extend(F(-x) for x in const)

    def ring_eq(p, const):
        grads = [R.evaluate(p.diff(i), vt) for i in range(nB)]

        def lin(u):
            k, b = divmod(u, dJ)
            if k < nB:
                return R.mul(grads[k], Jb[b])
            return R.zero()

        add_eq(lin, const)

    for g in B_c.ring.relations:
        ring_eq(g, R.evaluate(g, vt))
    for k, p in enumerate(f.ring_images):
        ring_eq(p, R.sub(R.evaluate(p, vt), u_imgs[k]))
    for n in range(nN):
        bn = B_c.alpha_poly(n)
        target = R.vec(E.R.alpha_of(v_flat.images[n]))
        grads = [R.evaluate(bn.diff(i), vt) for i in range(nB)]

        def lin(u, grads=grads, target=target, n=n):
            k, b = divmod(u, dJ)
            if k < nB:
                return R.mul(grads[k], Jb[b])
            if k - nB == n:
                return R.scale(-1, R.mul(target, Jb[b]))
            return R.zero()

        add_eq(lin, R.sub(R.evaluate(bn, vt), target))
    for m, w in enumerate(f.monoid.images):
        for t in range(dJ):

            def lin(u, w=w, t=t):
                k, b = divmod(u, dJ)
                if k >= nB and b == t:
                    return (F(w[k - nB]),)
                return (F(0),)

            add_eq(lin, (F(-zeta[m][t]),))
    for a, b_ in B_c.P.relations:
        for t in range(dJ):

            def lin(u, a=a, b_=b_, t=t):
                k, b = divmod(u, dJ)
                if k >= nB and b == t:
                    return (F(a[k - nB] - b_[k - nB]),)
                return (F(0),)

            add_eq(lin, (F(0),))
    return cols, rhs
