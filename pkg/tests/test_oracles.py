from fractions import Fraction

import pytest

from pycartier.cartier import CartierAlgebra
from pycartier.exceptions import NotMonomial
from pycartier.ideals import RingCtx
from pycartier.jumping import tau_t
from pycartier.oracles import (
    NewtonPolyhedron,
    bruteforce_closed_ideals,
    membership_by_linear_algebra,
    minimalize,
    monomial_tau,
    nu_interval,
    nu_value,
)
from pycartier.polyring import format_poly, parse_poly, polynomial_ring


def polys(ring, *texts):
    return [parse_poly(text, ring) for text in texts]


@pytest.mark.parametrize(
    "p, variables, f, e, expected",
    [
        (3, ("x",), "x", 1, 2),
        (7, ("x", "y"), "x^2 + y^3", 1, 5),
        (7, ("x", "y"), "x^2 + y^3", 2, 40),
        (2, ("x", "y"), "x*y", 2, 3),
    ],
)
def test_nu(p, variables, f, e, expected):
    assert nu_value(parse_poly(f, polynomial_ring(variables, p)), e) == expected


def test_nu_interval():
    ring = polynomial_ring(("x", "y"), 7)
    assert nu_interval(parse_poly("x^2 + y^3", ring), 2) == (Fraction(40, 49), Fraction(41, 49))


def test_nu_needs_vanishing_at_origin():
    ring = polynomial_ring(("x",), 3)
    with pytest.raises(ValueError):
        nu_value(parse_poly("x + 1", ring), 1)


def test_minimalize():
    assert minimalize([(2, 0), (1, 1), (2, 1), (0, 3), (1, 1)]) == [(2, 0), (1, 1), (0, 3)]


def test_newton_polyhedron_facets():
    polyhedron = NewtonPolyhedron.from_points([(2, 0), (0, 3)])
    assert set(polyhedron.facets) == {
        ((Fraction(1), Fraction(0)), Fraction(0)),
        ((Fraction(0), Fraction(1)), Fraction(0)),
        ((Fraction(3), Fraction(2)), Fraction(6)),
    }
    assert polyhedron.interior_contains([Fraction(1), Fraction(2)], 1)
    assert not polyhedron.interior_contains([Fraction(1), Fraction(1)], 1)


@pytest.mark.parametrize(
    "gens, t, expected",
    [
        (("x", "y"), Fraction(5, 2), ["x", "y"]),
        (("x", "y"), Fraction(0), ["1"]),
        (("x", "y"), Fraction(3), ["x^2", "x*y", "y^2"]),
        (("x^2", "y^3"), Fraction(1), ["x", "y"]),
        (("x^2", "y^3"), Fraction(1, 2), ["1"]),
    ],
)
def test_monomial_tau(gens, t, expected):
    ring = polynomial_ring(("x", "y"), 3)
    assert [format_poly(g) for g in monomial_tau(polys(ring, *gens), t)] == expected


def test_monomial_tau_rejects_binomials():
    ring = polynomial_ring(("x", "y"), 3)
    with pytest.raises(NotMonomial):
        monomial_tau(polys(ring, "x + y"), 1)


@pytest.mark.parametrize("t", [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(5, 2)])
def test_monomial_tau_agrees_with_engine(t):
    plane = RingCtx(3, ["x", "y"])
    algebra = CartierAlgebra.from_pairs(plane, [(1, 1)])
    engine = tau_t(algebra, plane.unit(), plane.maximal(), t)
    assert engine == plane.ideal(*monomial_tau(plane.maximal().elements(), t))


@pytest.mark.parametrize(
    "p, f, bound, expected",
    [
        (3, "x^2", 8, ["1", "x", "0"]),
        (3, "1", 8, ["1", "0"]),
        (2, "x^64", 12, ["0"]),
    ],
)
def test_closed_ideals(p, f, bound, expected):
    ring = polynomial_ring(("x",), p)
    closed = bruteforce_closed_ideals([(1, parse_poly(f, ring))], bound)
    assert [format_poly(g) for g in closed] == expected


def test_closed_ideals_one_variable_only():
    ring = polynomial_ring(("x", "y"), 3)
    with pytest.raises(ValueError):
        bruteforce_closed_ideals([(1, ring.one)], 3)


def test_membership_by_linear_algebra():
    ring = polynomial_ring(("x", "y"), 5)
    x, y = ring.gens
    cofactors = membership_by_linear_algebra(x**3 + y**2, [x, y], 2)
    assert cofactors[0] * x + cofactors[1] * y == x**3 + y**2
    assert membership_by_linear_algebra(ring.one, [x, y], 2) is None
