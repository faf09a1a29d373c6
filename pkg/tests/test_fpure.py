from fractions import Fraction

import pytest

from pycartier.cartier import CartierAlgebra, algebra_words
from pycartier.exceptions import IterationCapExceeded
from pycartier.fpure import (
    _degree_step,
    _monomial_data,
    _monomial_degree_step,
    check_reduced_annihilator,
    cplus,
    cplus_certified,
    fpure_witness,
    is_fpure,
    is_nilpotent,
    nukleus,
    single_step,
    underline,
    unit_witness,
)
from pycartier.ideals import Ideal, RingCtx
from pycartier.polyring import format_poly
from pycartier.settings import DEFAULT_SETTINGS, Settings


def test_trace_is_fpure(line3, trace_line3):
    assert is_fpure(trace_line3, line3.unit())
    witness = fpure_witness(trace_line3)
    assert str(witness) == "e=1, g=x^2"
    ((word, g),) = witness.terms
    assert word.op(g) == line3.ring.one


def test_cplus_ascends(line3):
    algebra = CartierAlgebra.from_pairs(line3, [(1, "x^3")])
    assert single_step(algebra, line3.unit()) == line3.ideal("x")
    assert cplus(algebra, line3.unit()) == line3.ideal("x")
    report = underline(algebra, line3.unit())
    assert report.underline == line3.ideal("x")
    assert report.stable_at == 1
    assert not report.is_fpure
    assert report.nilpotency_order is None
    assert report.certified


def test_nilpotent_chain():
    ctx = RingCtx(3, ["x"], ["x^2"])
    algebra = CartierAlgebra.from_pairs(ctx, [(1, "x^5")])
    report = underline(algebra, ctx.unit())
    assert [str(ideal) for ideal in report.chain] == ["(1)", "(x)", "(0)"]
    assert report.nilpotency_order == 2
    assert is_nilpotent(algebra, ctx.unit()) == 2


def test_nonreduced_underline(nonreduced5):
    report = underline(nonreduced5, nonreduced5.ctx.unit())
    assert report.underline == nonreduced5.ctx.ideal("x")
    assert str(report.underline) == "(x)"


def test_crossing_lines(cross3):
    algebra = CartierAlgebra.from_pairs(cross3, [(1, "x^2*y^2")])
    assert is_fpure(algebra, cross3.unit())
    assert str(fpure_witness(algebra)) == "e=1, g=1"
    assert check_reduced_annihilator(algebra, cross3.ideal("x"))


def test_reduced_annihilator_needs_fpure_module(line3):
    algebra = CartierAlgebra.from_pairs(line3, [(1, "x^3")])
    with pytest.raises(ValueError):
        check_reduced_annihilator(algebra, line3.unit())


def test_nukleus(trace_line3, line3):
    assert {format_poly(g) for g in nukleus(trace_line3, line3.unit())} == {"1", "x"}


def test_twisted_cplus_is_certified(line3, trace_line3):
    twisted = trace_line3.twisted(line3.ideal("x"), 2)
    ideal, certificate = cplus_certified(twisted, line3.unit())
    assert ideal == line3.ideal("x")
    assert certificate.certified
    assert certificate.degree >= 2


def test_twisted_underline(line3, trace_line3):
    assert underline(trace_line3.twisted(line3.ideal("x"), 2), line3.unit()).underline == line3.ideal("x")
    assert underline(trace_line3.twisted(line3.ideal("x"), 1), line3.unit()).is_fpure
    assert underline(trace_line3.twisted(line3.ideal("x"), Fraction(1, 2)), line3.unit()).is_fpure


def test_unit_witness_through_element(line3, trace_line3):
    assert str(unit_witness(trace_line3, "x")) == "e=1, g=x"
    algebra = CartierAlgebra.from_pairs(line3, [(1, "x^3")])
    assert unit_witness(algebra, 1, e_cap=2) is None


def test_parallel_images_agree(plane3):
    algebra = CartierAlgebra.from_pairs(plane3, [(1, "x^2"), (1, "y^2"), (1, "x*y")])
    serial = cplus(algebra, plane3.maximal())
    parallel = cplus(algebra, plane3.maximal(), settings=Settings(max_workers=3))
    assert serial == parallel


def test_iteration_cap(line3):
    algebra = CartierAlgebra.from_pairs(line3, [(1, "x^3")])
    with pytest.raises(IterationCapExceeded):
        underline(algebra, line3.unit(), settings=Settings(max_iterations=1))


def test_twisted_degree_rises_past_the_cap(line3, trace_line3):
    algebra = trace_line3.twisted(line3.ideal("x"), 1)
    module = line3.ideal("x^20")
    ideal, certificate = cplus_certified(algebra, module, e_cap=1)
    assert ideal == line3.ideal("x")
    assert certificate.certified
    assert certificate.degree == 4
    with pytest.raises(IterationCapExceeded):
        cplus(algebra, module, settings=Settings(e_cap=1, e_ceiling=1))


def test_monomial_steps_match_generic_images(plane3):
    base = CartierAlgebra.from_pairs(plane3, [(1, "x^2"), (1, "y")])
    algebra = base.twisted(plane3.ideal("x^2", "x*y^3"), Fraction(3, 2))
    module = plane3.ideal("x*y", "y^4")
    data = _monomial_data(algebra, module)
    assert data is not None
    words = algebra_words(algebra, 2)
    for e in (1, 2):
        fast = Ideal(plane3, _monomial_degree_step(algebra, data, words[e], e))
        generic = Ideal(plane3, _degree_step(algebra, module, words[e], e, DEFAULT_SETTINGS))
        assert fast == generic
    assert _monomial_data(algebra, plane3.ideal("x + y")) is None
