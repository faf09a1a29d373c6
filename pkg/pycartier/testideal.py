"""Test ideals through test elements: ``tau = C-closure of c * underline(M)``.

A candidate ``c`` is accepted only after it passes four recorded checks: it avoids every relevant
minimal prime, ``c`` and ``c^2`` give the same closure, the closure is F-pure and the closure agrees
with the stable submodule at every relevant prime.

>>> TauResult

"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from pycartier.cartier import CartierAlgebra, CartierOp
from pycartier.exceptions import ConfigError, DescentError, MissingMinimalPrimes, NoTestElement
from pycartier.fpure import (
    Certificate,
    FpureWitness,
    annihilator,
    cplus_certified,
    underline,
    unit_witness,
)
from pycartier.ideals import (
    Ideal,
    PolyLike,
    RingCtx,
    colon,
    ideal_product,
    member,
    monomial_minimal_primes,
    monomial_radical,
)
from pycartier.polyring import Poly, format_poly, gauge
from pycartier.settings import DEFAULT_SETTINGS, Settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Verification:
    """Outcome of each test element check.

    >>> Verification

    """

    in_r_circ: bool
    t_independent: bool
    fpure: bool
    generic: bool

    @property
    def passed(self) -> bool:
        """``True`` when every check passed."""
        return self.in_r_circ and self.t_independent and self.fpure and self.generic

    def summary(self) -> str:
        """Checks as ``name=pass|fail`` pairs."""
        checks = {
            "R°": self.in_r_circ,
            "t-independence": self.t_independent,
            "F-pure": self.fpure,
            "generic": self.generic,
        }
        return " ".join(f"{name}={'pass' if value else 'fail'}" for name, value in checks.items())


VACUOUS = Verification(in_r_circ=True, t_independent=True, fpure=True, generic=True)


@dataclass(frozen=True)
class TestElement:
    """Candidate test element with its recorded checks.

    >>> TestElement

    """

    __test__ = False

    c: Poly
    verified: Verification


@dataclass
class TauResult:
    """Test ideal with the test element and caps that produced it.

    >>> TauResult

    """

    tau: Ideal
    test_element: TestElement
    e_cap_used: int
    fpure_certified: bool
    underline: Ideal
    primes: List[Ideal] = field(default_factory=list)


@dataclass(frozen=True)
class SkodaReport:
    """Both sides of ``a * tau(a^(t-1)) ⊆ tau(a^t)``.

    >>> SkodaReport

    """

    lhs: Ideal
    rhs: Ideal
    containment: bool
    equality: bool
    equality_expected: bool


def closure_certified(
    algebra: CartierAlgebra,
    ideal: Ideal,
    e_cap: int = None,
    e_min: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Tuple[Ideal, Certificate]:
    """Smallest C-stable ideal containing ``G``, that is ``G + C+ G``, with the certificate of ``C+ G``."""
    plus, certificate = cplus_certified(algebra, ideal, e_cap, e_min, settings)
    return ideal + plus, certificate


def closure(
    algebra: CartierAlgebra,
    ideal: Ideal,
    e_cap: int = None,
    e_min: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Ideal:
    """Smallest C-stable ideal containing ``G``."""
    return closure_certified(algebra, ideal, e_cap, e_min, settings)[0]


def relevant_primes(
    stable: Ideal, minimal_primes: Sequence[Ideal] = None, domain: bool = False
) -> List[Ideal]:
    """Minimal primes of the support of ``M``, i.e. of ``Ann M``.

    Args:
        stable: The module, usually the stable submodule.
        minimal_primes: Minimal primes of the ring, required when the annihilator is not monomial.
        domain: Asserts that the ring is a domain, so the only relevant prime is zero.

    Returns:
        List[Ideal]:
        Relevant primes, empty for the zero module.
    """
    if stable.is_zero():
        return []
    ann = annihilator(stable)
    if ann.is_monomial():
        return monomial_minimal_primes(ann)
    if domain:
        return [stable.ctx.zero()]
    if minimal_primes:
        containing = [prime for prime in minimal_primes if ann <= prime]
        return [prime for prime in containing if not any(other <= prime and other != prime for other in containing)]
    raise MissingMinimalPrimes(
        f"annihilator {ann} is not monomial; supply minimal_primes or declare the ring a domain"
    )


def in_r_circ(c: PolyLike, primes: Sequence[Ideal], ctx: RingCtx) -> bool:
    """``c`` is non-zero and avoids every given prime."""
    c = ctx.reduce(c)
    return bool(c) and not any(member(c, prime) for prime in primes)


def _determinant(rows: List[List[Poly]]) -> Poly:
    if len(rows) == 1:
        return rows[0][0]
    total = rows[0][0].ring.zero
    for column, entry in enumerate(rows[0]):
        if entry:
            minor = [row[:column] + row[column + 1 :] for row in rows[1:]]
            total += (-1) ** column * entry * _determinant(minor)
    return total


def jacobian_candidates(ctx: RingCtx) -> List[Poly]:
    """Elements of the Jacobian ideal of the quotient, which cut out its singular locus.

    Args:
        ctx: Ring whose quotient is differentiated.

    Returns:
        List[Poly]:
        ``1`` for a polynomial ring, the partial derivatives for a hypersurface, otherwise the
        maximal minors of the height, followed by their sum.
    """
    ring = ctx.ring
    if not ctx.is_quotient:
        return [ring.one]
    gens = list(ctx.quotient)
    jacobian = [[g.diff(x) for x in ring.gens] for g in gens]
    if len(gens) == 1:
        elements = jacobian[0]
    else:
        quotient = ctx.quotient_ideal()
        if quotient.is_monomial():
            height = min(len(prime.gb) for prime in monomial_minimal_primes(quotient))
        else:
            height = min(len(gens), len(ring.gens))
        elements = [
            _determinant([[jacobian[r][c] for c in columns] for r in rows])
            for rows in itertools.combinations(range(len(gens)), height)
            for columns in itertools.combinations(range(len(ring.gens)), height)
        ]
    elements = [ctx.reduce(g) for g in elements]
    elements = [g for g in elements if g]
    if len(elements) > 1:
        elements.append(ctx.reduce(sum(elements, ring.zero)))
    return [g for g in elements if g]


def _unique(polys: Iterable[Poly]) -> List[Poly]:
    seen, kept = set(), []
    for g in polys:
        key = format_poly(g)
        if key not in seen:
            seen.add(key)
            kept.append(g)
    return kept


def _into_twist(candidates: Sequence[Poly], ideal: Ideal, primes: Sequence[Ideal], ctx: RingCtx) -> List[Poly]:
    """Moves every candidate into ``a``, multiplying those outside it by elements of ``a`` in ``R°``."""
    elements = list(ideal.elements())
    factors = [a for a in elements if in_r_circ(a, primes, ctx)]
    if len(elements) > 1:
        total = ctx.reduce(sum(elements, ctx.ring.zero))
        if in_r_circ(total, primes, ctx):
            factors.append(total)
    factors.sort(key=gauge)
    moved = []
    for g in candidates:
        if member(g, ideal):
            moved.append(g)
        else:
            moved.extend(ctx.reduce(g * a) for a in factors)
    return moved


def test_element_candidates(
    algebra: CartierAlgebra,
    primes: Sequence[Ideal],
    c: PolyLike = None,
    jacobian_ctx: RingCtx = None,
) -> List[Poly]:
    """Ordered candidates: the supplied ``c``, the product of every default candidate in ``R°``, then each one.

    Default candidates are the Jacobian elements and the generator multipliers. Under a twist by a
    proper ideal ``a`` every candidate is moved into ``a``, so no unit is ever offered.
    """
    ctx = algebra.ctx
    pool = [ctx.reduce(g) for g in jacobian_candidates(jacobian_ctx or ctx)]
    pool += [ctx.reduce(op.f) for op in algebra.generators]
    inside = [g for g in _unique(pool) if in_r_circ(g, primes, ctx)]
    product = ctx.ring.one
    for g in inside:
        product = ctx.reduce(product * g)
    ordered = ([ctx.coerce(c)] if c is not None else []) + [product] + inside
    if algebra.is_twisted and not algebra.twist.ideal.is_unit():
        ordered = _into_twist([g for g in ordered if g], algebra.twist.ideal, primes, ctx)
    return [g for g in _unique(ordered) if g]


test_element_candidates.__test__ = False


def _verify(
    algebra: CartierAlgebra,
    stable: Ideal,
    c: Poly,
    primes: Sequence[Ideal],
    e_cap: int,
    e_min: int,
    settings: Settings,
) -> Tuple[TestElement, Optional[Ideal], Optional[Certificate]]:
    ctx = algebra.ctx
    c = ctx.reduce(c)
    if not in_r_circ(c, primes, ctx):
        return TestElement(c, Verification(False, False, False, False)), None, None
    principal = ctx.ideal(c)
    once, certificate = closure_certified(algebra, ideal_product(principal, stable), e_cap, e_min, settings)
    twice = closure(algebra, ideal_product(ideal_product(principal, principal), stable), e_cap, e_min, settings)
    again, recheck = cplus_certified(algebra, once, e_cap, e_min, settings)
    quotient = colon(once, stable)
    generic = all(not quotient <= prime for prime in primes)
    verified = Verification(in_r_circ=True, t_independent=once == twice, fpure=again == once, generic=generic)
    merged = Certificate(
        degree=max(certificate.degree, recheck.degree),
        certified=certificate.certified and recheck.certified,
        rounds=certificate.rounds + recheck.rounds,
    )
    return TestElement(c, verified), once, merged


def verify_test_element(
    algebra: CartierAlgebra,
    stable: Ideal,
    c: PolyLike,
    primes: Sequence[Ideal],
    e_cap: int = None,
    e_min: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TestElement:
    """Runs the necessary checks for ``c`` to be a test element of the stable submodule.

    Args:
        algebra: The algebra.
        stable: The stable submodule.
        c: Candidate element.
        primes: Relevant minimal primes.
        e_cap: Degree cap for twisted algebras.
        e_min: Degree the twisted truncation must reach before it may stop.
        settings: Engine settings.

    Returns:
        TestElement:
        The candidate with each check recorded.
    """
    return _verify(algebra, stable, algebra.ctx.coerce(c), primes, e_cap, e_min, settings)[0]


def _tau_from_stable(
    algebra: CartierAlgebra,
    stable: Ideal,
    primes: Sequence[Ideal],
    candidates: Sequence[Poly],
    e_cap: int,
    e_min: int,
    settings: Settings,
) -> TauResult:
    ctx = algebra.ctx
    if stable.is_zero():
        return TauResult(stable, TestElement(ctx.ring.one, VACUOUS), 0, True, stable, [])
    for c in candidates:
        element, tau_ideal, certificate = _verify(algebra, stable, c, primes, e_cap, e_min, settings)
        if element.verified.passed:
            logger.info("test element %s accepted, tau = %s", format_poly(element.c), tau_ideal)
            return TauResult(
                tau=tau_ideal,
                test_element=element,
                e_cap_used=certificate.degree,
                fpure_certified=certificate.certified,
                underline=stable,
                primes=list(primes),
            )
        logger.warning("candidate %s rejected: %s", format_poly(element.c), element.verified.summary())
    raise NoTestElement(format_poly(c) for c in candidates)


def _require_reduced(ctx: RingCtx) -> None:
    if not ctx.is_quotient:
        return
    quotient = ctx.quotient_ideal()
    if quotient.is_monomial() and monomial_radical(quotient) != quotient:
        raise ConfigError(f"{ctx} is not reduced; use tau_nonreduced")


def tau(
    algebra: CartierAlgebra,
    module: Ideal = None,
    c: PolyLike = None,
    minimal_primes: Sequence[Ideal] = None,
    domain: bool = False,
    e_cap: int = None,
    e_min: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TauResult:
    """Test ideal ``tau(M, C)`` of a reduced ring, twisted when the algebra carries a twist.

    Args:
        algebra: The algebra.
        module: C-submodule ``M``, the whole ring by default.
        c: Preferred test element, tried before the default candidates.
        minimal_primes: Minimal primes of the ring, needed for non-monomial quotients.
        domain: Asserts that the ring is a domain.
        e_cap: Degree cap for twisted algebras.
        e_min: Degree the twisted truncation must reach before it may stop.
        settings: Engine settings.

    Returns:
        TauResult:
        The test ideal with its test element and certificates.
    """
    ctx = algebra.ctx
    _require_reduced(ctx)
    module = ctx.unit() if module is None else module
    stable = underline(algebra, module, e_cap, e_min, settings).underline
    primes = relevant_primes(stable, minimal_primes, domain)
    candidates = test_element_candidates(algebra, primes, c)
    return _tau_from_stable(algebra, stable, primes, candidates, e_cap, e_min, settings)


def tau_nonreduced(
    algebra: CartierAlgebra,
    radical: Iterable[PolyLike] = None,
    c: PolyLike = None,
    minimal_primes: Sequence[Ideal] = None,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TauResult:
    """Test ideal of a non-reduced quotient through its reduced quotient ``S / sqrt(I)``.

    The stable submodule of ``R`` is computed first, the generators are checked to descend to the
    reduced quotient, and the test ideal is the closure of ``c`` times the stable submodule inside
    ``R``, with candidates taken from the Jacobian of ``sqrt(I)``.

    Args:
        algebra: Algebra over ``R = S/I``.
        radical: Generators of ``sqrt(I)``, computed when ``I`` is monomial.
        c: Preferred test element.
        minimal_primes: Minimal primes of ``R``, needed when annihilators are not monomial.
        e_cap: Degree cap for twisted algebras.
        settings: Engine settings.

    Returns:
        TauResult:
        The test ideal as an ideal of ``R``.
    """
    ctx = algebra.ctx
    if not ctx.is_quotient:
        return tau(algebra, c=c, minimal_primes=minimal_primes, e_cap=e_cap, settings=settings)
    quotient = ctx.quotient_ideal()
    root = Ideal(quotient.ctx, radical) if radical is not None else monomial_radical(quotient)
    if root == quotient:
        return tau(algebra, c=c, minimal_primes=minimal_primes, e_cap=e_cap, settings=settings)
    reduced_ctx = RingCtx(ctx.p, ctx.variables, root.gb)
    for op in algebra.generators:
        try:
            CartierOp(op.e, op.f, reduced_ctx)
        except DescentError:
            logger.error("generator %s does not induce an operator on %s", op, reduced_ctx)
            raise
    stable = underline(algebra, ctx.unit(), e_cap, settings=settings).underline
    primes = relevant_primes(stable, minimal_primes)
    candidates = test_element_candidates(algebra, primes, c, jacobian_ctx=reduced_ctx)
    return _tau_from_stable(algebra, stable, primes, candidates, e_cap, None, settings)


def is_fregular(
    algebra: CartierAlgebra,
    module: Ideal = None,
    minimal_primes: Sequence[Ideal] = None,
    domain: bool = False,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> bool:
    """``True`` when ``tau(M, C) == underline(M) == M``."""
    module = algebra.ctx.unit() if module is None else module
    if module.is_zero():
        return True
    result = tau(algebra, module, minimal_primes=minimal_primes, domain=domain, e_cap=e_cap, settings=settings)
    return result.tau == result.underline == module


def fregular_witness(
    algebra: CartierAlgebra, d: PolyLike, e_cap: int = None, settings: Settings = DEFAULT_SETTINGS
) -> Optional[FpureWitness]:
    """Operator of one degree with ``phi(d R) = R``, as words and elements ``g`` with ``phi(d g) = 1``."""
    return unit_witness(algebra, d, e_cap, settings)


def skoda_check(
    algebra: CartierAlgebra,
    ideal: Ideal,
    t: Fraction,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> SkodaReport:
    """Compares ``a * tau(a^(t-1))`` with ``tau(a^t)`` on the whole ring.

    Args:
        algebra: Untwisted algebra.
        ideal: The ideal ``a``.
        t: Exponent, at least one.
        e_cap: Degree cap for twisted algebras.
        settings: Engine settings.

    Returns:
        SkodaReport:
        Both sides, containment, equality, and whether equality is expected from the generator count.
    """
    t = Fraction(t)
    if t < 1:
        raise ValueError(f"Skoda comparison needs t >= 1, got {t}")
    base = algebra.untwisted()
    lower = tau(base.twisted(ideal, t - 1), e_cap=e_cap, settings=settings).tau
    upper = tau(base.twisted(ideal, t), e_cap=e_cap, settings=settings).tau
    lhs = ideal_product(ideal, lower)
    return SkodaReport(
        lhs=lhs,
        rhs=upper,
        containment=lhs <= upper,
        equality=lhs == upper,
        equality_expected=t >= min(len(ideal.generators), len(ideal.elements())),
    )
