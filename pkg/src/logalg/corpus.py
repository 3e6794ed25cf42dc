"""The shipped corpus and the property suites that run over it.

Everything is built lazily and cached, so importing this module is cheap.
Suites never raise on a failed property: each check is recorded with a
witness and the suite reports pass/fail per invariant.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from . import cotangent as ct
from . import monoid as mon
from . import prelog as pl
from . import simplicial as simp
from . import sqzero as sz
from .errors import LogAlgError
from .exactla import hilbert_basis, hilbert_basis_bruteforce, is_group_isomorphism
from .monoid import EmbeddedMonoid, MonoidHom, MonoidPresentation
from .ring import GF, QQ, Field, ModulePresentation, Poly


def _mp(n: int, rels, names) -> MonoidPresentation:
    return MonoidPresentation(n, tuple((tuple(a), tuple(b)) for a, b in rels), tuple(names))


def _embedded(vectors, names) -> MonoidPresentation:
    E = EmbeddedMonoid(tuple(tuple(v) for v in vectors), (0,) * len(vectors[0]))
    return mon.embedded_to_presentation(E, tuple(names))


# ---------------------------------------------------------------------------
# monoids


@lru_cache(maxsize=None)
def monoids() -> dict[str, MonoidPresentation]:
    return {
        "N": MonoidPresentation.free(1, ("t",)),
        "N2": MonoidPresentation.free(2, ("x", "y")),
        "N3": MonoidPresentation.free(3, ("u", "v", "w")),
        "N<2,3>": _embedded([(2,), (3,)], ("a", "b")),
        "N<3,5,7>": _embedded([(3,), (5,), (7,)], ("a", "b", "c")),
        "cone<(2,0),(1,1),(0,2)>": _embedded([(2, 0), (1, 1), (0, 2)], ("a", "b", "c")),
        "<a,b|2a=2b>": _mp(2, [((2, 0), (0, 2))], "ab"),
        "<a,b|a+b=a>": _mp(2, [((1, 1), (1, 0))], "ab"),
        "Z": _mp(2, [((1, 1), (0, 0))], "ab"),
        "N+Z/2": _mp(2, [((0, 2), (0, 0))], "ab"),
        # finite ones
        "trivial": MonoidPresentation.trivial(),
        "<a|2a=a>": _mp(1, [((2,), (1,))], "a"),
        "Z/2": _mp(1, [((2,), (0,))], "a"),
        "Z/3": _mp(1, [((3,), (0,))], "a"),
        "<a|3a=2a>": _mp(1, [((3,), (2,))], "a"),
        "(Z/2)^2": _mp(2, [((2, 0), (0, 0)), ((0, 2), (0, 0))], "ab"),
        "<a,b|2a=a,2b=b>": _mp(2, [((2, 0), (1, 0)), ((0, 2), (0, 1))], "ab"),
    }


@lru_cache(maxsize=None)
def finite_monoids() -> tuple[str, ...]:
    return tuple(k for k, M in monoids().items() if mon.finite_elements(M) is not None)


# systems A x = 0 for Hilbert bases; every basis vector has coordinates <= 6
HILBERT_SYSTEMS: dict[str, list[list[int]]] = {
    "x=y": [[1, -1]],
    "x+y=2z": [[1, 1, -2]],
    "2x=y+z": [[2, -1, -1]],
    "x+2y=3z": [[1, 2, -3]],
    "x+y=z+w": [[1, 1, -1, -1]],
    "3x=2y+z": [[3, -2, -1]],
    "2x+3y=5z": [[2, 3, -5]],
    "x+y=z, y+z=w": [[1, 1, -1, 0], [0, 1, 1, -1]],
    "x+y=2z+w": [[1, 1, -2, -1]],
}


# ---------------------------------------------------------------------------
# virtually surjective maps


@lru_cache(maxsize=None)
def virtually_surjective_maps() -> dict[str, MonoidHom]:
    M = monoids()
    N, N2, N3 = M["N"], M["N2"], M["N3"]
    return {
        "sum N2->N": MonoidHom(N2, N, ((1,), (1,))),
        "proj N2->N": MonoidHom(N2, N, ((1,), (0,))),
        "N<2,3> -> N": MonoidHom(M["N<2,3>"], N, ((2,), (3,))),
        "N<3,5,7> -> N": MonoidHom(M["N<3,5,7>"], N, ((3,), (5,), (7,))),
        "N2 -> N<2,3>": MonoidHom(N2, M["N<2,3>"], ((1, 0), (0, 1))),
        "N3 -> cone": MonoidHom(N3, M["cone<(2,0),(1,1),(0,2)>"], ((1, 0, 0), (0, 1, 0), (0, 0, 1))),
        "N -> Z": MonoidHom(N, M["Z"], ((1, 0),)),
        "id N2": MonoidHom.identity(N2),
    }


# ---------------------------------------------------------------------------
# charts and morphisms


def _dual_relation(R):
    return R.var(R.nvars - 1) ** 2


@lru_cache(maxsize=None)
def charts(F: Field = QQ) -> dict[str, pl.ChartPreLogRing]:
    M = monoids()
    T = MonoidPresentation.trivial()
    return {
        "pt": pl.chart(T, field=F, name="k"),
        "A1": pl.chart(M["N"], field=F, name="k[t]"),
        "A1s": pl.chart(MonoidPresentation.free(1, ("s",)), field=F, name="k[s]"),
        "A2": pl.chart(M["N2"], field=F, name="k[x,y]"),
        "cusp": pl.chart(M["N<2,3>"], field=F, name="k[t^2,t^3]"),
        "cone": pl.chart(M["cone<(2,0),(1,1),(0,2)>"], field=F, name="k[x^2,xy,y^2]"),
        "A1 trivial": pl.chart(M["N"], T, [], field=F, name="k[t] trivial"),
        "A2 trivial": pl.chart(M["N2"], T, [], field=F, name="k[x,y] trivial"),
        "A1 units": pl.chart(M["N"], field=F, name="k[t] with units", field_units=True),
        "Gm": pl.chart(M["Z"], field=F, name="k[t,1/t]", field_units=True),
        "A1 at 0": pl.chart(M["N"], M["N2"], [(1,), (0,)], field=F, name="k[t], N2 -> t, 1"),
        "idem": pl.chart(M["N"], field=F, extra_names=("x",), extra_relations=[lambda R: R.var(1) ** 2 - R.var(1)], name="k[t,x]/(x^2-x)"),
        "three points": pl.chart(M["N"], field=F, extra_names=("x",), extra_relations=[lambda R: R.var(1) ** 3 - R.var(1)], name="k[t,x]/(x^3-x)"),
        "dual": pl.chart(T, field=F, extra_names=("e",), extra_relations=[_dual_relation], name="k[e]/(e^2)"),
    }


# charts whose structure map lands in Q-monomials (the logification suite)
LOG_CHARTS = ("pt", "A1", "A2", "cusp", "cone", "A1 trivial", "A1 units", "Gm", "A1 at 0")


def times_n(n: int, F: Field = QQ) -> pl.PreLogMorphism:
    C = charts(F)
    return pl.morphism(C["A1"], C["A1s"], [(n,)], [(n,)], name=f"x{n}")


@lru_cache(maxsize=None)
def morphisms(F: Field = QQ) -> dict[str, pl.PreLogMorphism]:
    C = charts(F)
    A2 = C["A2"]
    return {
        "id A1": pl.identity(C["A1"]),
        "pt -> A1": pl.morphism(C["pt"], C["A1"], [], [], name="(k,0) -> (k[t],N)"),
        "x2": times_n(2, F),
        "x3": times_n(3, F),
        "x5": times_n(5, F),
        "node": pl.morphism(C["A1"], A2, [A2.ring.monomial((1, 1))], [(1, 1)], name="t -> xy"),
        "node underlying": pl.morphism(C["A1 trivial"], C["A2 trivial"], [C["A2 trivial"].ring.monomial((1, 1))], [], name="t -> xy, trivial"),
        "A1 -> A2": pl.morphism(C["A1"], A2, [(1, 0)], [(1, 0)], name="t -> x"),
        "A1 -> cusp": pl.morphism(C["A1"], C["cusp"], [(1, 0)], [(1, 0)], name="t -> t^2"),
        "A1 -> cone": pl.morphism(C["A1"], C["cone"], [(0, 1, 0)], [(0, 1, 0)], name="t -> xy"),
        "idem": pl.morphism(C["A1"], C["idem"], [C["idem"].ring.var(0)], [(1,)], name="k[t] -> k[t,x]/(x^2-x)"),
        "three points": pl.morphism(C["A1"], C["three points"], [C["three points"].ring.var(0)], [(1,)], name="k[t] -> k[t,x]/(x^3-x)"),
        "pt -> dual": pl.morphism(C["pt"], C["dual"], [], [], name="k -> k[e]/(e^2)"),
    }


# composable pairs (f, g) for the Jacobi-Zariski checks
CHAINS = (("pt -> A1", "x2"), ("id A1", "x2"), ("pt -> A1", "node"), ("x2", "x3"))
# pairs (f, g) out of a common monomial base chart, for base change
PUSHOUT_SQUARES = (("x2", "x2"), ("node", "x2"), ("x5", "A1 -> A2"), ("x3", "node"))
STRICT_ETALE = ("idem", "three points")
ETALE_FACTORS = (2, 3, 5)


def chain(name_f: str, name_g: str, F: Field = QQ) -> tuple[pl.PreLogMorphism, pl.PreLogMorphism]:
    m = morphisms(F)
    f, g = m[name_f], m[name_g]
    if f.target != g.source:
        # re-target g onto f's codomain (same chart up to variable names)
        g = pl.PreLogMorphism(f.target, g.target, g.ring_images, MonoidHom(f.target.P, g.target.P, g.monoid.images), g.name)
        g.check()
    return f, g


# ---------------------------------------------------------------------------
# square-zero extensions


@lru_cache(maxsize=None)
def square_zero_family(F: Field = QQ) -> dict[str, sz.LogSquareZero]:
    N = monoids()["N"]
    P = MonoidPresentation.free(1, ("p",))
    X = MonoidPresentation.free(1, ("x",))
    T = MonoidPresentation.trivial()
    k_log = pl.ChartPreLogRing(F, T, P, (None,), (), (), "k, N -> 0")
    dual = pl.ChartPreLogRing(F, T, P, ((1,),), ("e",), (Poly.monomial(F, 1, (2,)),), "k[e]/(e^2), N -> e")
    x3 = pl.ChartPreLogRing(F, X, P, ((1,),), (), (Poly.monomial(F, 1, (3,)),), "k[x]/(x^3)")
    x2 = pl.ChartPreLogRing(F, X, P, ((1,),), (), (Poly.monomial(F, 1, (2,)),), "k[x]/(x^2)")
    pt = pl.ChartPreLogRing(F, T, T, (), (), (), "k")
    del N
    return {
        "dual numbers": sz.square_zero(dual, k_log, [k_log.ring.zero()], name="dual numbers"),
        "twist x^3 -> x^2": sz.square_zero(x3, x2, [x2.ring.var(0)], name="twist x^3 -> x^2"),
        "trivial k + k": sz.trivial_extension(pt, ModulePresentation(pt.ring, ("j",), ()), "trivial k + k"),
        "trivial k[x]/(x^2) + J": sz.trivial_extension(x2, ModulePresentation(x2.ring, ("j",), ((x2.ring.var(0),),)), "trivial k[x]/(x^2) + J"),
    }


SQZ_FIELDS = (QQ, GF(3))


def square_zero_corpus() -> list[tuple[str, sz.LogSquareZero]]:
    return [(f"{k} over {F!r}", E) for F in SQZ_FIELDS for k, E in square_zero_family(F).items()]


# ---------------------------------------------------------------------------
# suites


@dataclass
class Check:
    subject: str
    invariant: str
    ok: bool
    witness: object = None

    def to_json(self) -> dict:
        return {"subject": self.subject, "invariant": self.invariant, "ok": self.ok, "witness": self.witness}


@dataclass
class SuiteReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def add(self, subject: str, invariant: str, fn: Callable[[], object]) -> None:
        """Run ``fn``; truthy is a pass, a ``(bool, witness)`` pair carries a witness."""
        try:
            r = fn()
        except LogAlgError as exc:
            self.checks.append(Check(subject, invariant, False, f"{type(exc).__name__}: {exc}"))
            return
        if isinstance(r, tuple):
            self.checks.append(Check(subject, invariant, bool(r[0]), r[1]))
        else:
            self.checks.append(Check(subject, invariant, bool(r)))

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "passed": sum(c.ok for c in self.checks),
            "total": len(self.checks),
            "checks": [c.to_json() for c in self.checks],
        }


def _suite_group_completion(rep: SuiteReport, **_) -> None:
    for name, M in monoids().items():
        def pi1(M=M):
            G, H = mon.group_completion(M).group, simp.pi1_of_bar(M)
            return G.is_isomorphic(H), {"gp": str(G), "pi1": str(H)}

        rep.add(name, "group_completion = pi1_of_bar", pi1)
    for name in finite_monoids():
        M = monoids()[name]

        def bar(M=M):
            H = simp.bar_homology(M, 3)
            G = mon.group_completion(M).group
            Hg = simp.bar_homology(simp.group_as_monoid(G), 3)
            return all(a.is_isomorphic(b) for a, b in zip(H, Hg)), {"M": [str(h) for h in H], "gp": [str(h) for h in Hg]}

        rep.add(name, "bar_homology(M, 3) = bar_homology(M^gp, 3)", bar)


def _suite_repletion(rep: SuiteReport, **_) -> None:
    for name, f in virtually_surjective_maps().items():
        def exact(f=f):
            r = mon.repletion(f)
            w = mon.exactness_witness(r.augmentation)
            return w is None, None if w is None else list(w)

        def gp_iso(f=f):
            r = mon.repletion(f)
            G = mon.group_completion(f.source).group
            H = mon.group_completion(r.monoid).group
            return is_group_isomorphism(mon.gp_hom_matrix(r.unit), G, H), {"M^gp": str(G), "M^rep gp": str(H)}

        rep.add(name, "M^rep -> N is exact", exact)
        rep.add(name, "M^gp -> (M^rep)^gp is an isomorphism", gp_iso)


def logify_idempotent(X: pl.ChartPreLogRing) -> tuple[bool, dict]:
    """``logify(logify(X))`` has the same characteristic, through the canonical map."""
    l1 = pl.logify(X)
    Xa = l1.chart
    l2 = pl.logify(Xa)
    ring = tuple(Xa.ring.var(i) for i in range(Xa.nvars))
    inc = MonoidHom(Xa.P, l2.pushout, tuple(Xa.P.unit(i) + (0,) * (l2.pushout.n_gens - Xa.P.n_gens) for i in range(Xa.P.n_gens)))
    f = pl.PreLogMorphism(Xa, l2.chart, ring, inc)
    h = pl.characteristic_map(f)
    ok = pl.characteristics_isomorphic(h) and l2.is_already_log
    return ok, {"char": str(l1.characteristic), "char twice": str(l2.characteristic)}


def trivial_locus_is_trivial(X: pl.ChartPreLogRing) -> tuple[bool, dict]:
    Y, _ = pl.trivial_locus(X)
    c = pl.logify(Y).characteristic
    ok = all(i in mon.unit_generators(c) for i in range(c.n_gens))
    return ok, {"char": str(c)}


def _suite_logification(rep: SuiteReport, **_) -> None:
    C = charts(QQ)
    for name in LOG_CHARTS:
        X = C[name]
        rep.add(name, "logify . logify = logify on characteristics", lambda X=X: logify_idempotent(X))
        rep.add(name, "trivial_locus logifies to the trivial characteristic", lambda X=X: trivial_locus_is_trivial(X))


def _suite_cotangent(rep: SuiteReport, **_) -> None:
    for name, f in morphisms(QQ).items():
        def cmp(f=f):
            c = ct.pi0_comparison(f)
            return c.ok, c.failure or None

        rep.add(name, "pi0(rognes_pushout) = omega_log", cmp)
    for a, b in CHAINS:
        def trans(a=a, b=b):
            f, g = chain(a, b)
            r = ct.transitivity_check(f, g)
            return r.ok, r.checks

        rep.add(f"{a} ; {b}", "Jacobi-Zariski pi0 exactness", trans)
    for a, b in PUSHOUT_SQUARES:
        def bc(a=a, b=b):
            m = morphisms(QQ)
            r = ct.base_change_check(m[a], m[b])
            return r.ok, r.checks

        rep.add(f"{a} along {b}", "base change pi0 isomorphism", bc)


def _etale_factor_checks(rep: SuiteReport, fields) -> None:
    for F in fields:
        fam = square_zero_family(F) if F in SQZ_FIELDS or F.char == 5 else {}
        for n in ETALE_FACTORS:
            f = times_n(n, F)
            v = ct.is_derived_log_etale(f)
            expect = "No" if F.char and n % F.char == 0 else "Yes"
            rep.add(f"x{n} over {F!r}", f"is_derived_log_etale = {expect}", lambda v=v, expect=expect: (v.kind == expect, v.to_json()))
            if v.kind == "Yes":
                for ename, E in fam.items():
                    rep.add(f"x{n} over {F!r} vs {ename}", "etale Yes => UniqueLift", lambda f=f, E=E: _lift_is(f, E, "etale", ("UniqueLift",)))


def _lift_is(f, E, mode, allowed) -> tuple[bool, dict]:
    r = sz.lifting_test(f, E, mode)
    return r.verdict in allowed and r.squares > 0, r.to_json()


def _suite_etale(rep: SuiteReport, **_) -> None:
    _etale_factor_checks(rep, (QQ, GF(3), GF(5)))
    m = morphisms(QQ)
    for name in ("pt -> A1", "node", "id A1"):
        f = m[name]
        v = ct.is_derived_log_smooth(f)
        rep.add(name, "is_derived_log_smooth = Yes", lambda v=v: (v.kind == "Yes", v.to_json()))
        if v.kind == "Yes":
            for ename, E in square_zero_family(QQ).items():
                rep.add(f"{name} vs {ename}", "smooth Yes => a lift exists", lambda f=f, E=E: _lift_is(f, E, "smooth", ("UniqueLift", "LiftExistsNotUnique")))
    v = ct.is_derived_log_smooth(m["node underlying"])
    rep.add("node underlying", "is_derived_log_smooth = No", lambda: (v.kind == "No", v.to_json()))


def _suite_strict_etale(rep: SuiteReport, **_) -> None:
    for F in (QQ, GF(5)):
        m = morphisms(F)
        for name in STRICT_ETALE:
            f = m[name]
            rep.add(f"{name} over {F!r}", "strict", lambda f=f: pl.is_strict(f))

            def vanish(f=f):
                T = ct.rognes_pushout(f).complex
                inv = ct.invariants(T)
                v = ct.is_derived_log_etale(f)
                zero = all(d == 0 for _, d in inv.pi0_at_points) and all(d == 0 for _, d in inv.pi1_at_points)
                return zero and v.kind == "Yes", v.to_json()

            rep.add(f"{name} over {F!r}", "truncated cotangent complex vanishes, verdict Yes", vanish)


def _suite_square_zero(rep: SuiteReport, **_) -> None:
    for name, E in square_zero_corpus():
        rep.add(name, "verify_strict_exact", lambda E=E: (lambda r: (r.ok, r.certificate))(sz.verify_strict_exact(E)))
        rep.add(name, "exp_square = (true, true)", lambda E=E: (lambda x: (x.verdict == (True, True), x.to_json()))(sz.exp_square(E)))
        rep.add(name, "reconstruct(classify(E)) = E over (S, Q)", lambda E=E: (lambda r: (r.ok, r.iso.failure or None))(sz.roundtrip(E)))
        if E.field.char == 0:
            rep.add(name, "cdga and tor classes agree", lambda E=E: sz.same_class(sz.classify(E, "cdga"), sz.classify(E, "tor")))


def random_word_pairs(M: MonoidPresentation, count: int, rng: random.Random, max_degree: int = 8) -> list[tuple[tuple, tuple]]:
    """Half the pairs come from random rewriting walks (mostly equivalent),
    half are independent random words."""
    n = M.n_gens
    rels = [(a, b) for a, b in M.relations] + [(b, a) for a, b in M.relations]

    def word():
        d = rng.randint(0, max_degree)
        w = [0] * n
        for _ in range(d):
            w[rng.randrange(n)] += 1
        return tuple(w)

    out = []
    for k in range(count):
        u = word()
        if k % 2 == 0 and rels:
            v = list(u)
            for _ in range(rng.randint(1, 6)):
                a, b = rng.choice(rels)
                if all(x >= y for x, y in zip(v, a)):
                    cand = [x - y + z for x, y, z in zip(v, a, b)]
                    if sum(cand) <= max_degree:
                        v = cand
            out.append((u, tuple(v)))
        else:
            out.append((u, word()))
    return out


def _suite_word_problem(rep: SuiteReport, seed: int = 0, pairs: int = 1000, **_) -> None:
    rng = random.Random(seed)
    for name, M in monoids().items():
        if M.n_gens == 0:
            continue

        def agree(M=M):
            bad = []
            for u, v in random_word_pairs(M, pairs, rng):
                if mon.equivalent(M, u, v) != mon.bfs_equivalent(M, u, v, 8):
                    bad.append([list(u), list(v)])
            return not bad, {"disagreements": bad[:5], "pairs": pairs}

        rep.add(name, "normal form = BFS congruence closure (degree <= 8)", agree)


def _suite_hilbert(rep: SuiteReport, **_) -> None:
    for name, A in HILBERT_SYSTEMS.items():
        def agree(A=A):
            hb = hilbert_basis(A)
            bf = hilbert_basis_bruteforce(A, 6)
            return hb == bf, {"hilbert_basis": [list(v) for v in hb]}

        rep.add(name, "hilbert_basis = bounded enumeration (coordinates <= 6)", agree)


SUITES: dict[str, Callable[..., None]] = {
    "group-completion": _suite_group_completion,
    "repletion": _suite_repletion,
    "logification": _suite_logification,
    "cotangent": _suite_cotangent,
    "etale-smooth": _suite_etale,
    "strict-etale": _suite_strict_etale,
    "square-zero-roundtrip": _suite_square_zero,
    "word-problem": _suite_word_problem,
    "hilbert-basis": _suite_hilbert,
}


def verify_corpus(name: str, seed: int = 0, **options) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    rep = SuiteReport(name)
    t0 = time.perf_counter()
    SUITES[name](rep, seed=seed, **options)
    rep.seconds = time.perf_counter() - t0
    return rep
