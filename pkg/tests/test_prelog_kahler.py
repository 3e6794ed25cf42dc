import pytest

from logalg import corpus
from logalg import kahler
from logalg import monoid as mon
from logalg import prelog as pl
from logalg.ring import GF, QQ

from oracles import FREE_TORIC, jacobian_corank, toric_dims

C = corpus.charts(QQ)
M = corpus.morphisms(QQ)


def test_chart_ring_and_alpha():
    X = C["A1 at 0"]
    assert X.ring.names == ("t",)
    assert X.alpha_poly(1) == X.ring.one()
    assert X.alpha_of((2, 3)) == X.ring.var(0) ** 2
    with pytest.raises(ValueError):
        pl.chart(corpus.monoids()["N"], corpus.monoids()["N2"], [(1,)])


def test_morphism_composition():
    f, g = corpus.chain("x2", "x3")
    h = f.compose(g)
    assert h.monoid.images == ((6,),)
    assert h.ring_images[0] == h.target.ring.var(0) ** 6


@pytest.mark.parametrize(
    "name, char",
    [("pt", "0"), ("A1", "N"), ("A2", "N^2"), ("A1 trivial", "0"), ("Gm", "0"), ("A1 at 0", "N"), ("A1 units", "N"), ("cusp", "N<2,3>")],
)
def test_logify_characteristic(name, char):
    c = pl.logify(C[name]).characteristic
    gp = mon.group_completion(c).group
    sharp = mon.is_sharp(c) or all(i in mon.unit_generators(c) for i in range(c.n_gens))
    assert sharp
    expect = {"0": "0", "N": "Z", "N^2": "Z^2", "N<2,3>": "Z"}[char]
    assert str(gp) == expect
    if char == "N<2,3>":
        assert not mon.is_saturated(c)


def test_already_log_flags():
    # a bare chart lacks the field units, so it is only pre-log
    assert not pl.logify(C["A1"]).is_already_log
    assert pl.logify(C["A1 units"]).is_already_log
    assert pl.logify(pl.logify(C["A1 at 0"]).chart).is_already_log
    # on Gm every chart element is a unit: logifying collapses nothing new
    assert pl.logify(pl.logify(C["Gm"]).chart).is_already_log


@pytest.mark.parametrize("name", corpus.LOG_CHARTS)
def test_logify_idempotent_and_trivial_locus(name):
    assert corpus.logify_idempotent(C[name])[0]
    assert corpus.trivial_locus_is_trivial(C[name])[0]


def test_strictness():
    assert pl.is_strict(M["idem"])
    assert pl.is_strict(M["id A1"])
    assert not pl.is_strict(M["x2"])


def test_inverse_image_is_strict():
    X = C["A1"]
    Y, f = pl.inverse_image(X, C["idem"], [C["idem"].ring.var(0)])
    assert pl.is_strict(f)


# -- differentials ---------------------------------------------------------

RING_CASES = [
    # (chart, jacobian polys, var names, points)
    ("idem", ["x**2 - x"], ["t", "x"], [(1, 0), (1, 1), (0, 0)]),
    ("three points", ["x**3 - x"], ["t", "x"], [(1, 0), (1, 1), (2, -1)]),
    ("dual", ["e**2"], ["e"], [(0,)]),
    ("A2", [], ["x", "y"], [(1, 1), (0, 0)]),
]


@pytest.mark.parametrize("name, polys, names, points", RING_CASES, ids=[c[0] for c in RING_CASES])
def test_omega_ring_matches_jacobian(name, polys, names, points):
    X = C[name]
    pt = C["pt"]
    Om = kahler.omega_ring(pt.ring, X.ring, [])
    for p in points:
        assert Om.evaluate(p) == jacobian_corank(polys, names, list(p))


@pytest.mark.parametrize("F", [QQ, GF(2), GF(3), GF(5)], ids=repr)
@pytest.mark.parametrize("name", FREE_TORIC)
def test_log_differentials_of_toric_maps(name, F):
    f = corpus.morphisms(F)[name]
    Om = kahler.omega_log(f)
    h0, _ = toric_dims(f.monoid.images, f.target.P.n_gens, F.char)
    assert Om.evaluate(f.target.ring.unit_point()) == h0
    assert kahler.closed_form_comparison(f).ok


def test_exchange_relation_in_omega_log():
    f = M["pt -> A1"]
    Om = kahler.omega_log(f)
    # at t = 0, dt dies but dlog t survives
    assert Om.evaluate((0,)) == 1
    assert Om.evaluate((1,)) == 1
    assert kahler.d_labels(f.target.ring) == ("dt",)
    assert kahler.dlog_labels(f.target) == ("dlog t",)


def test_zero_derivation_checks():
    from logalg.ring import ModulePresentation

    f = M["pt -> A1"]
    J = ModulePresentation(f.target.ring, ("j",), ())
    D = kahler.zero_derivation(f, J)
    assert kahler.check_derivation(D).ok


def test_derivation_space_dimension():
    f = M["pt -> A1"]
    # derivations into k at t = 1: d t and dlog t are tied by t dlog t = dt
    assert kahler.derivation_space_dimension(f, (1,), 1) == 1
