import random

import pytest

from logalg import corpus
from logalg import monoid as mon
from logalg.errors import IllDefinedMap, NotIntegral, NotVirtuallySurjective
from logalg.exactla import is_group_isomorphism
from logalg.monoid import MonoidHom, MonoidPresentation

from oracles import bfs_congruent, monoid_cokernel

MONOIDS = corpus.monoids()


@pytest.mark.parametrize("name", list(MONOIDS))
def test_group_completion_matches_sympy_cokernel(name):
    M = MONOIDS[name]
    G = mon.group_completion(M).group
    assert (G.free_rank, G.torsion) == monoid_cokernel(M.n_gens, M.relations)


def test_group_completion_known_values():
    gc = mon.group_completion
    assert str(gc(MONOIDS["N"]).group) == "Z"
    assert str(gc(MONOIDS["<a,b|2a=2b>"]).group) == "Z + Z/2"
    assert str(gc(MONOIDS["<a,b|a+b=a>"]).group) == "Z"
    assert str(gc(MONOIDS["<a|2a=a>"]).group) == "0"
    assert str(gc(MONOIDS["cone<(2,0),(1,1),(0,2)>"]).group) == "Z^2"


@pytest.mark.parametrize("name", [n for n, M in MONOIDS.items() if M.n_gens])
def test_word_problem_against_bfs(name):
    M = MONOIDS[name]
    rng = random.Random(11)
    for u, v in corpus.random_word_pairs(M, 200, rng):
        assert mon.equivalent(M, u, v) == bfs_congruent(M.relations, u, v, 8), (u, v)


def test_integrality():
    assert mon.is_integral(MONOIDS["N2"])
    assert mon.is_integral(MONOIDS["<a,b|2a=2b>"])
    assert not mon.is_integral(MONOIDS["<a,b|a+b=a>"])
    assert not mon.is_integral(MONOIDS["<a|2a=a>"])
    with pytest.raises(NotIntegral):
        mon.require_integral(MONOIDS["<a,b|a+b=a>"])
    I = mon.integralize(MONOIDS["<a,b|a+b=a>"])
    assert mon.is_integral(I)


def test_hom_checks_relations():
    N = MonoidPresentation.free(1)
    Z2 = MONOIDS["Z/2"]
    mon.hom(Z2, N, [(0,)])
    with pytest.raises(IllDefinedMap):
        mon.hom(Z2, N, [(1,)])


def test_saturation():
    N23 = MONOIDS["N<2,3>"]
    assert not mon.is_saturated(N23)
    S = mon.saturate(N23)
    assert mon.is_saturated(S)
    assert mon.group_completion(S).group.is_isomorphic(mon.group_completion(N23).group)
    assert mon.is_saturated(MONOIDS["cone<(2,0),(1,1),(0,2)>"])


def test_virtual_surjectivity_and_exactness():
    N2, N = MONOIDS["N2"], MONOIDS["N"]
    s = mon.hom(N2, N, [(1,), (1,)])
    assert mon.is_virtually_surjective(s)
    assert mon.exactness_witness(s) is not None
    assert mon.is_exact(MonoidHom.identity(N2))
    inc = mon.hom(N, N2, [(1, 0)])
    assert not mon.is_virtually_surjective(inc)
    with pytest.raises(NotVirtuallySurjective):
        mon.repletion(inc)


@pytest.mark.parametrize("name", list(corpus.virtually_surjective_maps()))
def test_repletion_is_exact_and_keeps_group(name):
    f = corpus.virtually_surjective_maps()[name]
    r = mon.repletion(f)
    assert mon.is_exact(r.augmentation)
    G = mon.group_completion(f.source).group
    H = mon.group_completion(r.monoid).group
    assert is_group_isomorphism(mon.gp_hom_matrix(r.unit), G, H)
    g = r.unit.compose(r.augmentation)
    assert all(mon.equivalent(f.target, a, b) for a, b in zip(g.images, f.images))


def test_repletion_of_sum_map():
    f = corpus.virtually_surjective_maps()["sum N2->N"]
    r = mon.repletion(f)
    # {(a, b) in Z^2 : a + b >= 0}: generated by (1, 0) and +-(1, -1)
    gens = {tuple(v) for v in r.embedded.vectors}
    assert gens == {(1, 0), (1, -1), (-1, 1)}
    for x in [(0, 1), (3, -2), (-5, 5), (2, 2)]:
        assert r.embedded.contains(x)
    assert not r.embedded.contains((-1, 0))


def test_pushout_and_fiber_product():
    N, N2 = MONOIDS["N"], MONOIDS["N2"]
    d = mon.hom(N, N2, [(1, 1)])
    P, i, j = mon.pushout(d, d)
    assert str(mon.group_completion(P).group) == "Z^3"
    s = mon.hom(N2, N, [(1,), (1,)])
    fp = mon.fiber_product(s, s)
    assert str(mon.group_completion(fp.monoid).group) == "Z^3"


def test_units_and_sharpness():
    assert mon.is_sharp(MONOIDS["N2"])
    assert not mon.is_sharp(MONOIDS["Z"])
    assert not mon.is_sharp(MONOIDS["N+Z/2"])
    assert mon.unit_generators(MONOIDS["N"]) == []


def test_finite_elements_and_table():
    assert len(mon.finite_elements(MONOIDS["<a|3a=2a>"])) == 3
    assert len(mon.finite_elements(MONOIDS["(Z/2)^2"])) == 4
    assert mon.finite_elements(MONOIDS["N"], max_degree=5) is None
    elems, table = mon.multiplication_table(MONOIDS["Z/3"])
    assert sorted(map(sorted, table)) == [[0, 1, 2]] * 3


def test_isomorphism_inverse():
    N2 = MONOIDS["N2"]
    swap = mon.hom(N2, N2, [(0, 1), (1, 0)])
    inv = mon.isomorphism_inverse(swap)
    assert inv is not None and mon.is_isomorphism(swap)
    assert mon.isomorphism_inverse(mon.hom(N2, N2, [(2, 0), (0, 1)])) is None
