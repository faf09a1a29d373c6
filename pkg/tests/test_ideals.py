from fractions import Fraction

import pytest

from pycartier.exceptions import NotMonomial
from pycartier.ideals import (
    Ideal,
    RingCtx,
    bracket_power,
    colon,
    gauge_slice,
    ideal_equals,
    ideal_power,
    intersect,
    lift,
    member,
    minimal_monomials,
    monomial_minimal_primes,
    monomial_radical,
    power_exponents,
    saturate,
    twist_exponent,
    twist_power,
)


def test_ideal_prints_reduced_basis(plane3):
    assert str(plane3.ideal("x^2", "x*y", "x^2 + x*y")) == "(x^2, x*y)"
    assert str(plane3.zero()) == "(0)"
    assert str(plane3.unit()) == "(1)"


def test_ring_repr():
    assert repr(RingCtx(5, ["x", "y"], ["x^2*y"])) == "F_5[x, y]/(x^2*y)"


def test_membership_and_order(plane3):
    ideal = plane3.ideal("x^2", "y")
    assert member("x^3 + x*y^2", ideal)
    assert "x" not in ideal
    assert plane3.ideal("x^2*y") <= ideal
    assert not ideal <= plane3.ideal("x")


def test_equality_ignores_generators(plane3):
    assert plane3.ideal("x", "y") == plane3.ideal("x + y", "x - y")
    assert plane3.ideal("x", "y") != plane3.ideal("x")
    assert ideal_equals(plane3.ideal("x^2", "x*y"), plane3.ideal("x*y", "x^2 + x*y"))


def test_equality_needs_one_ring(plane3, plane5):
    with pytest.raises(ValueError):
        ideal_equals(plane3.maximal(), plane5.maximal())


def test_sum_and_product(plane3):
    x, y = plane3.ideal("x"), plane3.ideal("y")
    assert x + y == plane3.maximal()
    assert x * y == plane3.ideal("x*y")


def test_colon(plane3):
    assert colon(plane3.ideal("x^2", "x*y"), plane3.ideal("x")) == plane3.ideal("x", "y")
    assert colon(plane3.ideal("x^2 - y^2"), plane3.ideal("x - y")) == plane3.ideal("x + y")
    assert colon(plane3.ideal("x"), plane3.ideal("x")).is_unit()


def test_intersect(plane3):
    assert intersect(plane3.ideal("x"), plane3.ideal("y")) == plane3.ideal("x*y")
    assert intersect(plane3.ideal("x + y"), plane3.ideal("x - y")) == plane3.ideal("x^2 - y^2")


def test_saturate(plane3):
    assert saturate(plane3.ideal("x^2*y"), "x") == plane3.ideal("y")


def test_quotient_ideals(cross3):
    x = cross3.ideal("x")
    assert cross3.ideal("x*y").is_zero()
    assert colon(cross3.zero(), x) == cross3.ideal("y")
    assert str(x + cross3.ideal("y")) == "(x, y)"


def test_powers(plane3):
    assert ideal_power(plane3.maximal(), 2) == plane3.ideal("x^2", "x*y", "y^2")
    assert bracket_power(plane3.ideal("x + y"), 1) == plane3.ideal("x^3 + y^3")
    assert ideal_power(plane3.maximal(), 0).is_unit()


def test_minimal_monomials():
    assert minimal_monomials([(2, 0), (1, 1), (2, 1), (0, 3), (1, 1)]) == [(0, 3), (1, 1), (2, 0)]
    kept = minimal_monomials([(1, 1, 0), (1, 1, 1), (0, 2, 0), (2, 1, 0), (0, 0, 3)])
    assert sorted(kept) == [(0, 0, 3), (0, 2, 0), (1, 1, 0)]


def test_power_exponents(plane3):
    assert power_exponents(((1, 0), (0, 1)), 2, 2) == ((0, 2), (1, 1), (2, 0))
    assert power_exponents(((1, 1),), 0, 2) == ((0, 0),)
    cube = ideal_power(plane3.ideal("x^2", "x*y^3"), 3)
    assert set(power_exponents(((2, 0), (1, 3)), 3, 2)) == {g.LM for g in cube.elements()}


def test_twist_power(plane3):
    assert twist_exponent(Fraction(5, 2), 3, 1) == 5
    assert twist_exponent(Fraction(1, 3), 3, 2) == 3
    assert twist_power(plane3.maximal(), Fraction(5, 2), 1) == ideal_power(plane3.maximal(), 5)


def test_monomial_radical_and_primes(plane3):
    assert monomial_radical(plane3.ideal("x^2*y")) == plane3.ideal("x*y")
    space = RingCtx(3, ["x", "y", "z"])
    primes = monomial_minimal_primes(space.ideal("x*y", "x*z"))
    assert primes == [space.ideal("x"), space.ideal("y", "z")]
    assert monomial_minimal_primes(plane3.zero()) == [plane3.zero()]
    assert monomial_minimal_primes(plane3.unit()) == []


def test_monomial_routines_reject_binomials(plane3):
    with pytest.raises(NotMonomial) as error:
        monomial_radical(plane3.ideal("x^2 + y^3"))
    assert error.value.offending == ["y^3 + x^2"]


def test_lift(plane3):
    cofactors = lift("x^2 + y^2", ["x", "y"], 1, plane3)
    assert cofactors is not None
    x, y = plane3.gens()
    assert cofactors[0] * x + cofactors[1] * y == plane3.coerce("x^2 + y^2")
    assert lift(1, ["x", "y"], 4, plane3) is None


def test_foreign_polynomials_rejected(plane3, plane5):
    with pytest.raises(ValueError):
        Ideal(plane3, [plane5.coerce("x")])


def test_gauge_slice(line3, plane3):
    line_slice = gauge_slice(line3.ideal("x"), 2)
    assert len(line_slice) == 2
    assert line3.ideal(*line_slice) == line3.ideal("x")
    (product,) = gauge_slice(plane3.ideal("x*y"), 1)
    assert plane3.ideal(product) == plane3.ideal("x*y")
    assert gauge_slice(plane3.ideal("x^2"), 1) == []
