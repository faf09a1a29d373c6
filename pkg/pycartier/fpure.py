"""Fixed point engine: ``C+ N``, the descending chain ``C+^n M``, its stable member and F-purity.

>>> FpureReport

"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pycartier.cartier import (
    CartierAlgebra,
    Word,
    algebra_words,
    extend_words,
    gauge_bound,
    image_generators,
    multiplied,
    twist_degree_floor,
    twist_gauge,
)
from pycartier.exceptions import IterationCapExceeded
from pycartier.ideals import (
    Ideal,
    PolyLike,
    colon,
    exponent_product,
    gauge_slice,
    lift,
    minimal_monomials,
    monomial_radical,
    power_exponents,
    twist_exponent,
)
from pycartier.polyring import (
    Monomial,
    Poly,
    format_poly,
    frob_decompose,
    frobenius_power,
    gauge,
    is_monomial,
    monomial,
)
from pycartier.settings import DEFAULT_SETTINGS, Settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Certificate:
    """How far a ``C+`` computation went and whether its stopping rule certified the result.

    >>> Certificate

    """

    degree: int
    certified: bool
    rounds: int


@dataclass
class FpureReport:
    """Descending chain ``M ⊇ C+ M ⊇ C+^2 M ⊇ ...`` up to its stable member.

    >>> FpureReport

    """

    underline: Ideal
    chain: List[Ideal]
    stable_at: int
    is_fpure: bool
    nilpotency_order: Optional[int]
    certificates: List[Certificate] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        """``True`` when every ``C+`` step in the chain was certified."""
        return all(certificate.certified for certificate in self.certificates)


@dataclass(frozen=True)
class FpureWitness:
    """Operator ``sum(w_i g_i)`` of a single degree sending ``d`` to ``1``.

    >>> FpureWitness

    """

    e: int
    terms: Tuple[Tuple[Word, Poly], ...]

    def __str__(self) -> str:
        if len(self.terms) == 1:
            return f"e={self.e}, g={format_poly(self.terms[0][1])}"
        parts = "; ".join(f"word {word}: g={format_poly(g)}" for word, g in self.terms)
        return f"e={self.e}, {parts}"


def _images_in_parallel(tasks: Sequence[Callable[[], List[Poly]]], max_workers: int) -> List[Poly]:
    """Runs image computations, concatenating results in task order."""
    if max_workers <= 1 or len(tasks) <= 1:
        return [g for task in tasks for g in task()]
    results: Dict[int, List[Poly]] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {executor.submit(task): index for index, task in enumerate(tasks)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return [g for index in range(len(tasks)) for g in results[index]]


def _untwisted_step(algebra: CartierAlgebra, ideal: Ideal, settings: Settings) -> List[Poly]:
    tasks = [lambda op=op: image_generators(op, ideal.gb) for op in algebra.generators]
    return _images_in_parallel(tasks, settings.max_workers)


def _degree_step(
    algebra: CartierAlgebra, ideal: Ideal, words: Sequence[Word], e: int, settings: Settings
) -> List[Poly]:
    """Image generators of ``a_e N`` under the degree ``e`` words."""
    gens = multiplied(algebra, ideal, e).gb
    tasks = [lambda word=word: image_generators(word.op, gens) for word in words]
    return _images_in_parallel(tasks, settings.max_workers)


def _monomial_data(
    algebra: CartierAlgebra, ideal: Ideal
) -> Optional[Tuple[Tuple[Monomial, ...], List[Monomial]]]:
    """Exponents of ``a`` and ``N`` when a twisted step can run on exponent vectors alone."""
    if not (ideal.is_monomial() and algebra.twist.ideal.is_monomial()):
        return None
    if not all(is_monomial(op.f) for op in algebra.generators if op.f):
        return None
    return tuple(g.LM for g in algebra.twist.ideal.elements()), [g.LM for g in ideal.elements()]


def _monomial_degree_step(
    algebra: CartierAlgebra,
    data: Tuple[Tuple[Monomial, ...], List[Monomial]],
    words: Sequence[Word],
    e: int,
) -> List[Poly]:
    """Degree ``e`` images when ``a``, ``N`` and every multiplier are monomials.

    ``T_e(x^w S)`` is generated by ``x^floor(w / p^e)``, so only minimal exponents of ``a_e N`` matter.
    """
    ctx = algebra.ctx
    twist, module = data
    q = ctx.p**e
    n = twist_exponent(algebra.twist.t, ctx.p, e)
    acting = exponent_product(power_exponents(twist, n, len(ctx.variables)), module)
    shifts = {word.op.f.LM for word in words if word.op.f}
    images = minimal_monomials(
        tuple((a + b) // q for a, b in zip(w, shift)) for w in acting for shift in shifts
    )
    return [monomial(ctx.ring, m) for m in images]


def _generated_below(ideal: Ideal, bound: int) -> bool:
    """``True`` when the members of gauge at most ``bound`` generate the ideal."""
    if all(gauge(g) <= bound for g in ideal.elements()):
        return True
    if ideal.is_monomial():
        return False
    return Ideal(ideal.ctx, gauge_slice(ideal, bound)) == ideal


def _twisted_step(
    algebra: CartierAlgebra,
    ideal: Ideal,
    data: Optional[Tuple[Tuple[Monomial, ...], List[Monomial]]],
    words: Sequence[Word],
    e: int,
    settings: Settings,
) -> List[Poly]:
    if data is not None:
        return _monomial_degree_step(algebra, data, words, e)
    return _degree_step(algebra, ideal, words, e, settings)


def single_step(
    algebra: CartierAlgebra, ideal: Ideal, e_cap: int = None, settings: Settings = DEFAULT_SETTINGS
) -> Ideal:
    """One application ``U(N)`` of the algebra.

    Untwisted, the sum of the generator images of ``N``. Twisted, the sum over degrees ``e <= e_cap``
    of the images of ``a_e N`` under every degree ``e`` word.

    Args:
        algebra: The algebra.
        ideal: The ideal ``N``.
        e_cap: Degree cap for twisted algebras.
        settings: Engine settings.

    Returns:
        Ideal:
        The ideal ``U(N)``.
    """
    if not algebra.is_twisted:
        return Ideal(ideal.ctx, _untwisted_step(algebra, ideal, settings))
    e_cap = e_cap or settings.e_cap
    words = algebra_words(algebra, e_cap, settings.word_limit)
    data = _monomial_data(algebra, ideal)
    gens = [g for e in range(1, e_cap + 1) for g in _twisted_step(algebra, ideal, data, words[e], e, settings)]
    return Ideal(ideal.ctx, gens)


def slice_bound(algebra: CartierAlgebra, ideal: Ideal) -> int:
    """Gauge ``B'`` below which every partial sum of the twisted ``C+ N`` is generated."""
    p = algebra.ctx.p
    ideal_gauge = max((gauge(g) for g in ideal.elements()), default=0)
    extra = twist_gauge(algebra.twist) if algebra.is_twisted else 0
    return gauge_bound(algebra).B + math.ceil((extra + ideal_gauge) / p)


def cplus_certified(
    algebra: CartierAlgebra,
    ideal: Ideal,
    e_cap: int = None,
    e_min: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Tuple[Ideal, Certificate]:
    """Computes ``C+ N`` together with the certificate of its stopping rule.

    Twisted, partial sums over degrees ``1..e`` are taken until, past ``e_min``, one degree adds nothing
    and the sum is generated in gauge at most ``slice_bound``. Degrees keep rising past ``e_cap`` up to
    ``settings.e_ceiling``; an uncertified truncation is never returned.

    Args:
        algebra: The algebra.
        ideal: The ideal ``N``.
        e_cap: Degree cap for twisted algebras.
        e_min: Degree the twisted truncation must reach before it may stop.
        settings: Engine settings.

    Returns:
        Tuple[Ideal, Certificate]:
        The ideal ``C+ N`` and its certificate.

    Raises:
        IterationCapExceeded:
        When the untwisted ascent outlasts ``max_iterations`` or the twisted sum is still uncertified at
        the degree ceiling.
    """
    ctx = ideal.ctx
    if not algebra.is_twisted:
        current = Ideal(ctx, _untwisted_step(algebra, ideal, settings))
        top = max(op.e for op in algebra.generators)
        for rounds in range(1, settings.max_iterations + 1):
            following = Ideal(ctx, list(current.elements()) + _untwisted_step(algebra, current, settings))
            if following == current:
                logger.debug("C+ settled after %d rounds at %s", rounds, current)
                return current, Certificate(degree=rounds * top, certified=True, rounds=rounds)
            current = following
        raise IterationCapExceeded("C+ ascent", settings.max_iterations)

    spread = max((gauge(g) for g in ideal.elements()), default=0) + twist_gauge(algebra.twist)
    e_min = max(e_min or 1, twist_degree_floor(algebra.twist.t, ctx.p, spread))
    e_cap = max(e_cap or settings.e_cap, e_min)
    ceiling = max(settings.e_ceiling, e_cap)
    bound = slice_bound(algebra, ideal)
    data = _monomial_data(algebra, ideal)
    words: Dict[int, List[Word]] = {}
    previous = ctx.zero()
    for e in range(1, ceiling + 1):
        degree_words = extend_words(algebra, words, e, settings.word_limit)
        images = _twisted_step(algebra, ideal, data, degree_words, e, settings)
        current = Ideal(ctx, list(previous.elements()) + images)
        logger.debug("twisted C+ partial sum at degree %d: %s", e, current)
        if e >= e_min and current == previous and _generated_below(current, bound):
            return current, Certificate(degree=e, certified=True, rounds=e)
        if e == e_cap:
            logger.info("twisted C+ of %s not settled by degree %d, raising the degree", ideal, e)
        previous = current
    raise IterationCapExceeded(f"twisted C+ of {ideal} (degree ceiling)", ceiling)


def cplus(
    algebra: CartierAlgebra,
    ideal: Ideal,
    e_cap: int = None,
    e_min: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Ideal:
    """``C+ N``: the submodule generated by all positive degree operators applied to ``N``."""
    return cplus_certified(algebra, ideal, e_cap, e_min, settings)[0]


def underline(
    algebra: CartierAlgebra,
    module: Ideal,
    e_cap: int = None,
    e_min: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> FpureReport:
    """Iterates ``M -> C+ M`` until it stabilises at the largest F-pure submodule.

    Args:
        algebra: The algebra.
        module: A C-submodule ``M`` of the ring.
        e_cap: Degree cap for twisted algebras.
        e_min: Degree the twisted truncation must reach before it may stop.
        settings: Engine settings.

    Returns:
        FpureReport:
        The chain, its stable member and the nilpotency order when the stable member is zero.
    """
    chain = [module]
    certificates = []
    for _ in range(settings.max_iterations):
        following, certificate = cplus_certified(algebra, chain[-1], e_cap, e_min, settings)
        certificates.append(certificate)
        if following == chain[-1]:
            break
        if not following <= chain[-1]:
            raise ValueError(f"{module} is not stable under {algebra}")
        chain.append(following)
    else:
        raise IterationCapExceeded("descending chain C+^n M", settings.max_iterations)
    stable = chain[-1]
    stable_at = len(chain) - 1
    nilpotency = stable_at if stable.is_zero() else None
    logger.debug("underline %s stable after %d steps", stable, stable_at)
    return FpureReport(
        underline=stable,
        chain=chain,
        stable_at=stable_at,
        is_fpure=stable_at == 0,
        nilpotency_order=nilpotency,
        certificates=certificates,
    )


def is_fpure(
    algebra: CartierAlgebra, module: Ideal, e_cap: int = None, settings: Settings = DEFAULT_SETTINGS
) -> bool:
    """``C+ M == M``."""
    return cplus(algebra, module, e_cap, settings=settings) == module


def is_nilpotent(
    algebra: CartierAlgebra, module: Ideal, e_cap: int = None, settings: Settings = DEFAULT_SETTINGS
) -> Optional[int]:
    """Smallest ``n`` with ``C+^n M = 0``, or ``None`` when the stable member is not zero."""
    return underline(algebra, module, e_cap, settings=settings).nilpotency_order


def _lift_unit(ideal_gens: List[Poly], algebra: CartierAlgebra, settings: Settings) -> List[Poly]:
    """Cofactors expressing ``1`` through generators known to span the unit ideal."""
    for degree in range(settings.max_iterations + 1):
        if (cofactors := lift(1, ideal_gens, degree, algebra.ctx)) is not None:
            return cofactors
    raise IterationCapExceeded("unit lift", settings.max_iterations)


def unit_witness(
    algebra: CartierAlgebra, d: PolyLike = 1, e_cap: int = None, settings: Settings = DEFAULT_SETTINGS
) -> Optional[FpureWitness]:
    """Finds words ``w_i`` and elements ``g_i`` of one degree with ``sum(w_i(d g_i)) == 1``.

    A degree ``e`` word applied to ``d a S`` has image generated by the Frobenius components ``r_j``
    of ``f d a``. Once ``1 = sum(h r_j)``, the element ``g = sum(h^(p^e) a x^(p^e - 1 - j))``
    satisfies ``w(d g) = 1``.

    Args:
        algebra: The algebra.
        d: Element the operator is applied through.
        e_cap: Largest degree to search.
        settings: Engine settings.

    Returns:
        Optional[FpureWitness]:
        The witness of the lowest degree, or ``None`` when no degree up to the cap has one.
    """
    ctx = algebra.ctx
    d = ctx.coerce(d)
    e_cap = e_cap or settings.e_cap
    words = algebra_words(algebra, e_cap, settings.word_limit)
    for e in range(1, e_cap + 1):
        q = ctx.p**e
        pieces = []
        for word in words[e]:
            for a in algebra.multiplier(e).elements():
                product = word.op.f * d * a
                if product:
                    for residue, root in frob_decompose(product, e).items():
                        pieces.append((word, a, residue, root))
        if not pieces or not Ideal(ctx, [root for *_, root in pieces]).is_unit():
            continue
        cofactors = _lift_unit([root for *_, root in pieces], algebra, settings)
        collected: Dict[Tuple[int, ...], Tuple[Word, Poly]] = {}
        for (word, a, residue, _), h in zip(pieces, cofactors):
            if not h:
                continue
            term = frobenius_power(h, e) * a * monomial(ctx.ring, [q - 1 - j for j in residue])
            previous = collected.get(word.letters, (word, ctx.ring.zero))[1]
            collected[word.letters] = (word, previous + term)
        terms = tuple((word, ctx.reduce(g)) for word, g in collected.values() if ctx.reduce(g))
        logger.info("unit witness found in degree %d", e)
        return FpureWitness(e=e, terms=terms)
    return None


def fpure_witness(
    algebra: CartierAlgebra, e_cap: int = None, settings: Settings = DEFAULT_SETTINGS
) -> Optional[FpureWitness]:
    """Operator of one degree with ``phi(R) = R``, given as words and elements ``g`` with ``phi(g) = 1``."""
    return unit_witness(algebra, 1, e_cap, settings)


def annihilator(module: Ideal) -> Ideal:
    """``Ann_R M = (0 : M)``."""
    return colon(module.ctx.zero(), module)


def check_reduced_annihilator(
    algebra: CartierAlgebra,
    module: Ideal,
    radical: Ideal = None,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> bool:
    """Checks that the annihilator of an F-pure module is a radical ideal.

    Args:
        algebra: The algebra.
        module: F-pure module ``M``.
        radical: Radical of the annihilator, when it is not a monomial ideal.
        e_cap: Degree cap for twisted algebras.
        settings: Engine settings.

    Returns:
        bool:
        ``True`` when ``Ann M`` equals its radical.
    """
    if not is_fpure(algebra, module, e_cap, settings):
        raise ValueError(f"{module} is not F-pure under {algebra}")
    ann = annihilator(module)
    return ann == (radical if radical is not None else monomial_radical(ann))


def nukleus(
    algebra: CartierAlgebra, module: Ideal, e_cap: int = None, settings: Settings = DEFAULT_SETTINGS
) -> List[Poly]:
    """Basis over ``GF(p)`` of the members of the stable submodule with gauge at most ``B``."""
    stable = underline(algebra, module, e_cap, settings=settings).underline
    return gauge_slice(stable, gauge_bound(algebra).B)
