import random

import pytest

from logalg import binomial
from logalg.errors import ResourceExceeded
from logalg.limits import limited

from oracles import binomial_ideal_contains

SYSTEMS = {
    "2a=2b": (2, [((2, 0), (0, 2))]),
    "a+b=a": (2, [((1, 1), (1, 0))]),
    "twisted cubic": (4, [((0, 2, 0, 0), (1, 0, 1, 0)), ((0, 0, 2, 0), (0, 1, 0, 1)), ((0, 1, 1, 0), (1, 0, 0, 1))]),
    "3a=2a": (1, [((3,), (2,))]),
    "ab=c, bc=d": (4, [((1, 1, 0, 0), (0, 0, 1, 0)), ((0, 1, 1, 0), (0, 0, 0, 1))]),
}


def _word(rng, n, d=4):
    w = [0] * n
    for _ in range(rng.randint(0, d)):
        w[rng.randrange(n)] += 1
    return tuple(w)


@pytest.mark.parametrize("name", list(SYSTEMS))
def test_membership_agrees_with_sympy(name):
    n, rels = SYSTEMS[name]
    gb = binomial.groebner(n, rels)
    assert binomial.is_confluent(gb)
    rng = random.Random(7)
    for _ in range(40):
        u, v = _word(rng, n), _word(rng, n)
        assert (gb.reduce(u) == gb.reduce(v)) == binomial_ideal_contains(n, rels, u, v), (u, v)


def test_reduced_basis_is_order_independent():
    n, rels = SYSTEMS["twisted cubic"]
    a = binomial.groebner(n, rels)
    b = binomial.groebner(n, list(reversed(rels)))
    assert a.key() == b.key()


def test_monomial_rules_and_unit():
    gb = binomial.groebner(1, [], [(0,)])
    assert gb.has_unit()
    assert gb.reduce((3,)) is None
    gb = binomial.groebner(2, [((1, 0), (0, 1))], [(0, 2)])
    assert gb.reduce((2, 0)) is None
    assert gb.reduce((1, 0)) is not None


def test_saturation_gives_the_lattice_ideal():
    # x^2 - y^2 is already a lattice ideal: a and b stay distinct
    gb = binomial.saturate_all(2, [((2, 0), (0, 2))])
    assert gb.reduce((1, 0)) != gb.reduce((0, 1))
    assert gb.reduce((3, 0)) == gb.reduce((1, 2))
    # x^2 y - x y^2 = x y (x - y): saturating removes the monomial factor
    gb = binomial.saturate_all(2, [((2, 1), (1, 2))])
    assert gb.reduce((1, 0)) == gb.reduce((0, 1))
    # a + b = a saturates to b = 0
    gb = binomial.saturate_all(2, [((1, 1), (1, 0))])
    assert gb.reduce((0, 1)) == gb.reduce((0, 0))


def test_gb_cap_and_context_limit():
    n, rels = SYSTEMS["twisted cubic"]
    with pytest.raises(ResourceExceeded):
        binomial.groebner(n, rels, cap=1)
    with limited(max_gb=1), pytest.raises(ResourceExceeded):
        binomial.groebner(n, rels)
    binomial.groebner(n, rels)  # the limit does not leak


def test_deadline():
    n, rels = SYSTEMS["twisted cubic"]
    with limited(deadline_ms=0):
        import time

        time.sleep(0.001)
        from logalg.limits import check_deadline

        with pytest.raises(ResourceExceeded):
            check_deadline()
