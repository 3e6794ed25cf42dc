import pytest

from logalg import corpus
from logalg import cotangent as ct
from logalg.ring import GF, QQ

from oracles import FREE_TORIC, toric_dims

FIELDS = [QQ, GF(2), GF(3), GF(5)]


@pytest.mark.parametrize("F", FIELDS, ids=repr)
@pytest.mark.parametrize("name", FREE_TORIC)
def test_toric_cotangent_dimensions(name, F):
    f = corpus.morphisms(F)[name]
    T = ct.rognes_pushout(f).complex
    pt = f.target.ring.unit_point()
    h0, h1 = toric_dims(f.monoid.images, f.target.P.n_gens, F.char)
    assert T.h0_at(pt) == h0
    assert T.h1_at(pt) == h1
    assert T.is_complex_at(pt)


@pytest.mark.parametrize("name", list(corpus.morphisms(QQ)))
def test_pi0_is_omega_log(name):
    assert ct.pi0_comparison(corpus.morphisms(QQ)[name]).ok


@pytest.mark.parametrize("pair", corpus.CHAINS, ids=" ; ".join)
def test_jacobi_zariski(pair):
    f, g = corpus.chain(*pair)
    assert ct.transitivity_check(f, g).ok


@pytest.mark.parametrize("pair", corpus.PUSHOUT_SQUARES, ids=" along ".join)
def test_base_change(pair):
    m = corpus.morphisms(QQ)
    assert ct.base_change_check(m[pair[0]], m[pair[1]]).ok


@pytest.mark.parametrize("n", corpus.ETALE_FACTORS)
@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_times_n_etale_iff_n_invertible(n, F):
    v = ct.is_derived_log_etale(corpus.times_n(n, F))
    if F.char and n % F.char == 0:
        assert v.kind == "No"
        assert v.witness["pi0_dim"] == 1
    else:
        assert v.kind == "Yes"


def test_log_smooth_but_singular_node():
    m = corpus.morphisms(QQ)
    assert ct.is_derived_log_smooth(m["node"]).kind == "Yes"
    assert ct.is_derived_log_etale(m["node"]).kind == "No"
    v = ct.is_derived_log_smooth(m["node underlying"])
    assert v.kind == "No"


@pytest.mark.parametrize("F", [QQ, GF(5)], ids=repr)
@pytest.mark.parametrize("name", corpus.STRICT_ETALE)
def test_strict_etale_vanishing(name, F):
    f = corpus.morphisms(F)[name]
    T = ct.rognes_pushout(f).complex
    inv = ct.invariants(T)
    assert all(d == 0 for _, d in inv.pi0_at_points)
    assert all(d == 0 for _, d in inv.pi1_at_points)
    assert ct.is_derived_log_etale(f).kind == "Yes"


def test_naive_cotangent_of_hypersurface():
    X = corpus.charts(QQ)["idem"]
    pt = corpus.charts(QQ)["pt"]
    T = ct.naive_cotangent(pt.ring, X.ring, [])
    # k[t, x]/(x^2 - x): smooth of dimension 1, H1 = 0
    for p in [(0, 0), (3, 1)]:
        assert T.h0_at(p) == 1
        assert T.h1_at(p) == 0
    assert T.to_json()["provenance"] == "naive-cotangent"


def test_dual_numbers_cotangent_has_h1():
    X = corpus.charts(QQ)["dual"]
    pt = corpus.charts(QQ)["pt"]
    T = ct.naive_cotangent(pt.ring, X.ring, [])
    # k[e]/(e^2): the relation e^2 has zero differential at e = 0
    assert T.h0_at((0,)) == 1
    assert T.h1_at((0,)) == 1


def test_regular_sequence_certificate():
    X = corpus.charts(QQ)["three points"]
    amb = corpus.charts(QQ)["A2"].ring
    assert ct.regular_sequence_certificate(amb, [amb.var(1) ** 3 - amb.var(1)])
    assert X.ring.nvars == 2


def test_invariants_json_shape():
    f = corpus.morphisms(GF(5))["x5"]
    T = ct.rognes_pushout(f).complex
    d = ct.invariants(T, [(1,)]).to_json()
    assert d["pi0_at_points"] == [[["1"], 1]]
    assert d["pi1_at_points"] == [[["1"], 1]]
    assert {"gens", "rels"} <= set(d["pi0"])
