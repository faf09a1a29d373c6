"""Randomised laws of the engine, each checked on a few hundred seeded cases."""

import random
from fractions import Fraction

import pytest

from pycartier.cartier import CartierAlgebra, CartierOp, gauge_bound, image_generators, op_compose, op_descends
from pycartier.fpure import annihilator, check_reduced_annihilator, cplus, is_fpure, underline
from pycartier.ideals import Ideal, RingCtx, bracket_power, colon, gauge_slice, member, monomial_radical
from pycartier.jumping import TauCurve, grid, jumps_in_range, tau_t
from pycartier.oracles import membership_by_linear_algebra, monomial_tau
from pycartier.polyring import (
    format_poly,
    frob_decompose,
    frobenius_power,
    gauge,
    monomial,
    parse_poly,
    recompose,
)
from pycartier.testideal import closure, in_r_circ, skoda_check, tau

CASES = 200
PRIMES = (2, 3, 5)
PLANES = {p: RingCtx(p, ["x", "y"]) for p in (2, 3, 5, 7)}


def random_poly(ctx: RingCtx, rng: random.Random, terms: int = 3, top: int = 5):
    size = len(ctx.variables)
    return ctx.ring.from_dict(
        {tuple(rng.randrange(top + 1) for _ in range(size)): rng.randrange(1, ctx.p) for _ in range(terms)}
    )


def random_monomial(ctx: RingCtx, rng: random.Random, top: int = 3):
    return monomial(ctx.ring, [rng.randrange(top + 1) for _ in ctx.variables])


def random_monomial_ideal(ctx: RingCtx, rng: random.Random, count: int = 3, top: int = 3) -> Ideal:
    """Proper non-zero monomial ideal with at most ``count`` generators."""
    while True:
        ideal = Ideal(ctx, [random_monomial(ctx, rng, top) for _ in range(rng.randint(1, count))])
        if not ideal.is_unit():
            return ideal


def descending_multiplier(ctx: RingCtx, quotient: Ideal, rng: random.Random):
    """Random element of ``(I^[p] : I)``, so the operator it defines descends to ``S/I``."""
    allowed = colon(bracket_power(quotient, 1), quotient)
    return rng.choice(allowed.elements()) * random_monomial(ctx, rng, 1)


def test_operators_are_p_inverse_linear(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice(PRIMES)]
        e = rng.choice((1, 2)) if ctx.p < 5 else 1
        op = CartierOp(e, random_poly(ctx, rng, 2, 4), ctx)
        a, b = random_poly(ctx, rng, 2, 2), random_poly(ctx, rng, 3, 6)
        assert op(frobenius_power(a, e) * b) == a * op(b)
        assert op(a + b) == op(a) + op(b)


def test_decomposition_recomposes_within_gauge(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice(PRIMES)]
        e = rng.choice((1, 2))
        q = ctx.p**e
        f = random_poly(ctx, rng, 4, 12)
        components = frob_decompose(f, e)
        assert recompose(components, e) == f
        for residue, root in components.items():
            assert all(0 <= j < q for j in residue)
            assert gauge(root) <= gauge(f) // q


def test_images_contract_gauge(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice(PRIMES)]
        op = CartierOp(rng.choice((1, 2)), random_poly(ctx, rng, 2, 6), ctx)
        g = random_poly(ctx, rng, 3, 10)
        limit = (gauge(g) + gauge(op.f)) // ctx.p**op.e
        assert gauge(op(g)) <= limit
        assert all(gauge(r) <= limit for r in image_generators(op, [g]))
        word = op_compose(op, CartierOp(1, random_poly(ctx, rng, 2, 4), ctx))
        assert gauge(word(g)) <= (gauge(g) + gauge(word.f)) // ctx.p**word.e


def test_composition_is_coherent(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice((2, 3))]
        outer = CartierOp(1, random_poly(ctx, rng, 2, 3), ctx)
        inner = CartierOp(rng.choice((1, 2)), random_poly(ctx, rng, 2, 3), ctx)
        m = random_poly(ctx, rng, 3, 12)
        assert op_compose(outer, inner)(m) == outer(inner(m))


def test_descent_is_consistent(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice(PRIMES)]
        quotient = random_monomial_ideal(ctx, rng)
        f = descending_multiplier(ctx, quotient, rng)
        ambient = CartierOp(1, f, ctx)
        assert op_descends(ambient, quotient)
        assert not op_descends(CartierOp(1, 1, ctx), quotient)
        m = rng.choice(quotient.elements()) * random_poly(ctx, rng, 2, 3)
        assert member(ambient(m), quotient)
        ring = RingCtx(ctx.p, ctx.variables, [format_poly(g) for g in quotient.elements()])
        induced = CartierOp(1, format_poly(f), ring)
        g = random_poly(ring, rng, 3, 6)
        shifted = g + ring.coerce(format_poly(m))
        assert induced(g) == induced(shifted)


def random_algebra(rng: random.Random) -> CartierAlgebra:
    """One or two operators on a plane, monomial multipliers with an occasional binomial."""
    ctx = PLANES[rng.choice((2, 3))]
    pairs = []
    for _ in range(rng.randint(1, 2)):
        f = random_monomial(ctx, rng, 2 * ctx.p)
        if rng.random() < 0.25:
            f *= ctx.coerce("x + y")
        pairs.append((rng.choice((1, 2)), f))
    return CartierAlgebra.from_pairs(ctx, pairs)


def test_underline_is_a_fixed_point(rng):
    for _ in range(CASES):
        algebra = random_algebra(rng)
        report = underline(algebra, algebra.ctx.unit())
        stable = report.underline
        assert all(later <= earlier for earlier, later in zip(report.chain, report.chain[1:]))
        assert cplus(algebra, stable) == stable
        assert is_fpure(algebra, stable)
        assert underline(algebra, stable).underline == stable
        assert Ideal(algebra.ctx, gauge_slice(stable, gauge_bound(algebra).B)) == stable
        inner = underline(algebra, random_monomial_ideal(algebra.ctx, rng)).underline
        assert inner <= stable


def test_fpure_annihilators_are_radical(rng):
    for _ in range(CASES):
        plane = PLANES[rng.choice((2, 3))]
        quotient = random_monomial_ideal(plane, rng, 2, 3)
        f = descending_multiplier(plane, quotient, rng)
        ring = RingCtx(plane.p, plane.variables, [format_poly(g) for g in quotient.elements()])
        algebra = CartierAlgebra.from_pairs(ring, [(1, format_poly(f))])
        stable = underline(algebra, ring.unit()).underline
        if stable.is_zero():
            continue
        ann = annihilator(stable)
        assert ann == monomial_radical(ann)
        assert check_reduced_annihilator(algebra, stable)


def test_polynomials_survive_formatting(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice((2, 3, 5, 7))]
        f = random_poly(ctx, rng, rng.randint(1, 6), 9)
        assert parse_poly(format_poly(f), ctx.ring) == f


def test_gauge_is_subadditive(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice(PRIMES)]
        f, g = random_poly(ctx, rng, 3, 8), random_poly(ctx, rng, 3, 8)
        assert gauge(f * g) <= gauge(f) + gauge(g)
        assert f + g == 0 or gauge(f + g) <= max(gauge(f), gauge(g))
        assert gauge(frobenius_power(f, 1)) == ctx.p * gauge(f)


def random_reduced_algebra(rng: random.Random) -> CartierAlgebra:
    """Untwisted algebra on a plane or on two crossing lines."""
    p = rng.choice((2, 3))
    if rng.random() < 0.5:
        plane = PLANES[p]
        return CartierAlgebra.from_pairs(plane, [(1, random_monomial(plane, rng, 2 * p))])
    lines = RingCtx(p, ["x", "y"], ["x*y"])
    f = PLANES[p].coerce(f"x^{p - 1}*y^{p - 1}") * random_monomial(PLANES[p], rng, 1)
    return CartierAlgebra.from_pairs(lines, [(1, format_poly(f))])


@pytest.mark.slow
def test_test_ideals_are_fpure_and_independent_of_c(rng):
    for _ in range(CASES):
        algebra = random_reduced_algebra(rng)
        ctx = algebra.ctx
        result = tau(algebra)
        assert result.tau <= result.underline
        assert cplus(algebra, result.tau) == result.tau
        if result.underline.is_zero():
            continue
        assert result.test_element.verified.passed
        c = result.test_element.c
        for k in (1, 2, 3):
            assert closure(algebra, Ideal(ctx, [c**k * g for g in result.underline.elements()])) == result.tau
        other = ctx.reduce(result.test_element.c * (ctx.coerce("x + y") ** rng.randint(1, 2)))
        if in_r_circ(other, result.primes, ctx):
            assert tau(algebra, c=other).tau == result.tau


@pytest.mark.slow
def test_skoda_containment(rng):
    for _ in range(CASES):
        plane = PLANES[rng.choice((2, 3))]
        algebra = CartierAlgebra.from_pairs(plane, [(1, 1)])
        ideal = random_monomial_ideal(plane, rng, 3, 3)
        t = rng.choice([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)])
        report = skoda_check(algebra, ideal, t)
        assert report.containment
        if report.equality_expected:
            assert report.equality


@pytest.mark.slow
def test_grid_values_descend_and_match_newton_polyhedron(rng):
    seen = 0
    while seen < CASES:
        plane = PLANES[rng.choice((2, 3))]
        algebra = CartierAlgebra.from_pairs(plane, [(1, 1)])
        ideal = random_monomial_ideal(plane, rng, 3, 4)
        points = grid(Fraction(2), plane.p, 1)
        curve = TauCurve(algebra, plane.unit(), ideal)
        values = curve.evaluate_many(points)
        for t, value in zip(points, values):
            assert value == Ideal(plane, monomial_tau(ideal.elements(), t))
        assert all(later <= earlier for earlier, later in zip(values, values[1:]))
        report = jumps_in_range(algebra, plane.unit(), ideal, Fraction(2))
        for jump, after in zip(report.jumps, report.ideals[1:]):
            assert after == Ideal(plane, monomial_tau(ideal.elements(), jump))
        seen += len(points)


def test_reduced_bases_ignore_generator_order(rng):
    for _ in range(CASES):
        ctx = PLANES[rng.choice((3, 5))]
        gens = [random_poly(ctx, rng, rng.randint(2, 3), 3) for _ in range(rng.randint(2, 3))]
        basis = Ideal(ctx, gens).gb
        assert Ideal(ctx, rng.sample(gens, len(gens))).gb == basis
        assert Ideal(ctx, gens + [gens[0] * random_poly(ctx, rng, 2, 2) + gens[1]]).gb == basis
        for g in basis:
            assert g.LC == 1
            assert not any(
                all(a >= b for a, b in zip(monom, h.LM)) for h in basis if h != g for monom in g.itermonoms()
            )


def test_membership_agrees_with_linear_algebra(rng):
    for _ in range(100):
        ctx = PLANES[rng.choice((3, 5))]
        gens = [random_poly(ctx, rng, 2, 2) for _ in range(2)]
        ideal = Ideal(ctx, gens)
        f = sum((random_poly(ctx, rng, 2, 1) * g for g in gens), ctx.ring.zero)
        if f:
            assert member(f, ideal)
            assert membership_by_linear_algebra(f, gens, 2) is not None
        g = random_poly(ctx, rng, 3, 3)
        if membership_by_linear_algebra(g, gens, 3) is not None:
            assert member(g, ideal)
        if not member(g, ideal):
            assert membership_by_linear_algebra(g, gens, 3) is None


def test_monomial_test_ideals_sample(rng):
    plane = PLANES[3]
    algebra = CartierAlgebra.from_pairs(plane, [(1, 1)])
    for _ in range(3):
        ideal = random_monomial_ideal(plane, rng, 3, 4)
        for t in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
            assert tau_t(algebra, plane.unit(), ideal, t) == Ideal(plane, monomial_tau(ideal.elements(), t))


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3])
def test_monomial_test_ideals_sweep(p, rng):
    plane = PLANES[p]
    algebra = CartierAlgebra.from_pairs(plane, [(1, 1)])
    for _ in range(20):
        ideal = random_monomial_ideal(plane, rng, 3, 6)
        for k in range(33):
            t = Fraction(k, 8)
            assert tau_t(algebra, plane.unit(), ideal, t) == Ideal(plane, monomial_tau(ideal.elements(), t))
