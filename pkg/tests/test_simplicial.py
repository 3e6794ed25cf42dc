import pytest

from logalg import corpus
from logalg import monoid as mon
from logalg import simplicial as simp
from logalg.errors import TooLarge, TruncationTooLow
from logalg.exactla import IntMatrix, cokernel

from oracles import finite_group_homology

MONOIDS = corpus.monoids()


def _inv(G):
    return (G.free_rank, G.torsion)


@pytest.mark.parametrize("name", ["Z/2", "Z/3", "(Z/2)^2", "trivial"])
def test_bar_homology_of_finite_groups(name):
    M = MONOIDS[name]
    G = mon.group_completion(M).group
    H = simp.bar_homology(M, 3)
    assert [_inv(h) for h in H] == finite_group_homology(G.torsion, 3)


@pytest.mark.parametrize("name", ["<a|2a=a>", "<a|3a=2a>", "<a,b|2a=a,2b=b>"])
def test_monoids_with_absorbing_element_are_acyclic(name):
    H = simp.bar_homology(MONOIDS[name], 3)
    assert [_inv(h) for h in H] == [(1, ())] + [(0, ())] * 3


@pytest.mark.parametrize("name", corpus.finite_monoids())
def test_h1_of_bar_is_group_completion(name):
    M = MONOIDS[name]
    H1 = simp.bar_homology(M, 1)[1]
    assert H1.is_isomorphic(mon.group_completion(M).group)


@pytest.mark.parametrize("name", list(MONOIDS))
def test_pi1_of_bar(name):
    M = MONOIDS[name]
    assert simp.pi1_of_bar(M).is_isomorphic(mon.group_completion(M).group)


@pytest.mark.parametrize("name", ["N", "N2", "<a,b|2a=2b>", "Z/2"])
def test_bar_satisfies_simplicial_identities(name):
    X = simp.bar(MONOIDS[name], 3)
    assert X.check_identities() == []
    assert simp.degreewise_gp(X).check_identities()


def test_bar_is_grouplike_and_constant_is_not():
    N = MONOIDS["N"]
    assert simp.is_grouplike(simp.bar(N, 2))
    assert not simp.is_grouplike(simp.constant_monoid(N, 2))
    assert simp.pi0_monoid(simp.constant_monoid(N, 2)) == N


def test_moore_homotopy_of_constant_object():
    G = cokernel(IntMatrix([[2]]))
    X = simp.constant_ab(G, 3)
    assert X.check_identities()
    assert simp.moore_homotopy(X, 0).is_isomorphic(G)
    assert simp.moore_homotopy(X, 1).is_trivial()
    with pytest.raises(TruncationTooLow):
        simp.moore_homotopy(X, 3)


def test_moore_homotopy_of_degreewise_bar():
    # pi_1 of the degreewise group completion of the bar construction
    X = simp.degreewise_gp(simp.bar(MONOIDS["<a,b|2a=2b>"], 3))
    assert simp.moore_homotopy(X, 1).is_isomorphic(mon.group_completion(MONOIDS["<a,b|2a=2b>"]).group)


def test_group_as_monoid_roundtrip():
    G = cokernel(IntMatrix([[2, 0], [0, 3]]))
    M = simp.group_as_monoid(G)
    assert mon.group_completion(M).group.is_isomorphic(G)
    assert len(mon.finite_elements(M)) == 6
    with pytest.raises(ValueError):
        simp.group_as_monoid(cokernel(IntMatrix.zeros(1, 0)))


def test_size_caps():
    with pytest.raises(TooLarge):
        simp.bar_homology(MONOIDS["N"], 2)
    with pytest.raises(TooLarge):
        simp.bar_homology(MONOIDS["Z/3"], 99)
