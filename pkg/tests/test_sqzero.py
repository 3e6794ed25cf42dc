from itertools import product

import pytest

from logalg import corpus
from logalg import sqzero as sz
from logalg.errors import NotADerivation, NotSquareZero, NotStrict, TooLarge, UnsupportedPresentation
from logalg.monoid import MonoidPresentation
from logalg.prelog import ChartPreLogRing
from logalg.ring import GF, QQ, ModulePresentation, Poly

CORPUS = corpus.square_zero_corpus()
IDS = [name for name, _ in CORPUS]


@pytest.mark.parametrize("E", [E for _, E in CORPUS], ids=IDS)
def test_strict_exact(E):
    r = sz.verify_strict_exact(E)
    assert r.ok, r.to_json()
    assert all(r.certificate[k] for k in ("sharp_charts", "strict", "exact"))


@pytest.mark.parametrize("E", [E for _, E in CORPUS], ids=IDS)
def test_exp_square_is_bicartesian(E):
    x = sz.exp_square(E)
    assert x.verdict == (True, True)
    assert x.left.commutes() and x.right.commutes()


@pytest.mark.parametrize("E", [E for _, E in CORPUS], ids=IDS)
def test_roundtrip(E):
    rt = sz.roundtrip(E)
    assert rt.ok, rt.iso.failure
    assert sz.verify_strict_exact(rt.reconstructed).ok


@pytest.mark.parametrize("E", [E for _, E in CORPUS if E.field.char == 0], ids=[n for n, E in CORPUS if E.field.char == 0])
def test_routes_agree_over_q(E):
    assert sz.same_class(sz.classify(E, "cdga"), sz.classify(E, "tor"))


def test_cdga_route_needs_characteristic_zero():
    E = corpus.square_zero_family(GF(3))["dual numbers"]
    with pytest.raises(UnsupportedPresentation):
        sz.classify(E, "cdga")


@pytest.mark.parametrize("F", corpus.SQZ_FIELDS, ids=repr)
def test_classes(F):
    fam = corpus.square_zero_family(F)
    assert not sz.is_trivial_class(sz.classify(fam["dual numbers"]))
    assert not sz.is_trivial_class(sz.classify(fam["twist x^3 -> x^2"]))
    assert sz.is_trivial_class(sz.classify(fam["trivial k + k"]))
    assert sz.is_trivial_class(sz.classify(fam["trivial k[x]/(x^2) + J"]))


def test_square_zero_kernel():
    E = corpus.square_zero_family(QQ)["twist x^3 -> x^2"]
    sz.check_square_zero(E)
    assert E.J.dim == 1
    j = E.J_basis[0]
    assert E.R_alg.is_zero(E.R_alg.mul(j, j))
    assert E.R_alg.is_zero(E.pi(j))


def test_not_square_zero_is_rejected():
    F = QQ
    X = MonoidPresentation.free(1, ("x",))
    T = MonoidPresentation.trivial()
    x4 = ChartPreLogRing(F, X, T, (), (), (Poly.monomial(F, 1, (4,)),), "k[x]/(x^4)")
    pt = ChartPreLogRing(F, T, T, (), (), (), "k")
    with pytest.raises(NotSquareZero):
        sz.square_zero(x4, pt, [pt.ring.zero()], name="x^4 -> k")
    with pytest.raises(ValueError):
        sz.square_zero(x4, pt, [], name="missing image")


def test_non_strict_extension_has_witness():
    F = QQ
    N2 = MonoidPresentation.free(2)
    N = MonoidPresentation.free(1)
    T = MonoidPresentation.trivial()
    dual = ChartPreLogRing(F, T, N2, ((1,), (1,)), ("e",), (Poly.monomial(F, 1, (2,)),), "dual, N2")
    k = ChartPreLogRing(F, T, N, (None,), (), (), "k, N")
    E = sz.square_zero(dual, k, [k.ring.zero()], [(1,), (1,)], name="sum")
    r = sz.verify_strict_exact(E)
    assert not r.ok
    assert r.witness is not None
    with pytest.raises(NotStrict):
        sz.exp_square(E)


def test_reconstruct_rejects_non_derivation():
    E = corpus.square_zero_family(QQ)["dual numbers"]
    D = sz.classify(E)
    other = corpus.square_zero_family(QQ)["twist x^3 -> x^2"].S
    with pytest.raises(NotADerivation):
        sz.reconstruct(other, D)


def test_exp_is_multiplicative_on_j():
    E = corpus.square_zero_family(QQ)["dual numbers"]
    R = E.R_alg
    xi = E.j_coords(E.J_basis[0])
    e = sz.exp(E, xi)
    # exp(j) = 1 + j, and (1 + j)(1 - j) = 1 because j^2 = 0
    minus = sz.exp(E, tuple(-c for c in xi))
    assert R.mul(e, minus) == R.one()


# -- lifting ---------------------------------------------------------------


@pytest.mark.parametrize("n", corpus.ETALE_FACTORS)
def test_times_n_unique_lift_over_q(n):
    f = corpus.times_n(n, QQ)
    for E in corpus.square_zero_family(QQ).values():
        r = sz.lifting_test(f, E, "etale")
        assert r.verdict == "UniqueLift"
        assert r.squares > 0


def test_times_p_fails_to_lift_in_characteristic_p():
    F = GF(5)
    r = sz.lifting_test(corpus.times_n(5, F), corpus.square_zero_family(F)["dual numbers"], "etale")
    assert r.verdict == "NoLift"
    assert r.obstruction


def test_smooth_map_lifts_non_uniquely():
    f = corpus.morphisms(QQ)["pt -> A1"]
    r = sz.lifting_test(f, corpus.square_zero_family(QQ)["dual numbers"], "smooth")
    assert r.verdict == "LiftExistsNotUnique"
    assert r.max_solution_dim == 1


def _brute_idempotent_lifts(p, deg):
    """Lifts of x with x^deg = x along GF(p)[e]/(e^2) -> GF(p), by enumeration."""
    counts = {}
    for a, b in product(range(p), repeat=2):
        # (a + b e)^k = a^k + k a^(k-1) b e
        ok = (pow(a, deg, p) - a) % p == 0 and (deg * pow(a, deg - 1, p) * b - b) % p == 0
        if ok:
            counts[a] = counts.get(a, 0) + 1
    return counts


@pytest.mark.parametrize("name, deg", [("idem", 2), ("three points", 3)])
def test_strict_etale_lifts_match_enumeration(name, deg):
    F = GF(3)
    counts = _brute_idempotent_lifts(3, deg)
    assert set(counts.values()) == {1}
    f = corpus.morphisms(F)[name]
    r = sz.lifting_test(f, corpus.square_zero_family(F)["dual numbers"], "etale")
    assert r.verdict == "UniqueLift"


def test_lift_unknown_cap():
    f = corpus.morphisms(QQ)["node"]
    E = corpus.square_zero_family(QQ)["dual numbers"]
    with pytest.raises(TooLarge):
        sz.lifting_test(f, E, "smooth", max_unknowns=1)


def test_trivial_extension_json():
    X = corpus.charts(QQ)["pt"]
    E = sz.trivial_extension(X, ModulePresentation(X.ring, ("j",), ()), "k + k")
    d = E.to_json()
    assert d["name"] == "k + k"
