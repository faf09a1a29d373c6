"""Cartier operators ``m -> T_e(f m)``, the algebras they generate and their gauge bounds.

``T_e`` is the fundamental operator of degree ``e``: it sends ``x^a`` to ``x^((a + 1)/p^e - 1)`` when
every exponent is congruent to ``-1`` modulo ``p^e`` and to zero otherwise.

>>> CartierOp

"""

import functools
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from pycartier.exceptions import DescentError, WordLimitExceeded
from pycartier.ideals import Ideal, PolyLike, RingCtx, bracket_power, ideal_product, member, twist_power
from pycartier.polyring import Poly, format_poly, frob_decompose, frobenius_power, gauge
from pycartier.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CartierOp:
    """The ``p^-e``-linear operator ``m -> T_e(f m)`` on a ring context.

    >>> CartierOp

    """

    e: int
    f: Poly
    ctx: RingCtx = field(compare=True, repr=False)

    def __post_init__(self):
        """Coerces ``f`` and checks that the operator descends to the quotient."""
        if self.e < 1:
            raise ValueError(f"operator degree must be at least 1, got {self.e}")
        object.__setattr__(self, "f", self.ctx.coerce(self.f))
        if self.ctx.is_quotient and not op_descends(self, self.ctx.quotient_ideal()):
            raise DescentError(str(self), [format_poly(g) for g in self.ctx.quotient])

    def __call__(self, m: PolyLike) -> Poly:
        return op_apply_poly(self, m)

    def __str__(self) -> str:
        return f"(e={self.e}, f={format_poly(self.f)})"


@dataclass(frozen=True)
class Twist:
    """F-graded system ``a^t`` whose degree ``e`` member is ``a^ceil(t(p^e - 1))``.

    >>> Twist

    """

    ideal: Ideal
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if self.t < 0:
            raise ValueError(f"twist exponent must be non-negative, got {self.t}")


class Word(NamedTuple):
    """Composition of algebra generators, letters listed outermost first."""

    letters: Tuple[int, ...]
    op: CartierOp

    def __str__(self) -> str:
        return ".".join(str(letter + 1) for letter in self.letters)


@dataclass(frozen=True)
class GaugeBound:
    """Contraction constant ``K`` and nukleus gauge ``B`` of a Cartier algebra.

    >>> GaugeBound

    """

    K: int
    B: int


@dataclass(frozen=True)
class CartierAlgebra:
    """Algebra generated by finitely many Cartier operators, optionally twisted by ``a^t``.

    >>> CartierAlgebra

    """

    ctx: RingCtx
    generators: Tuple[CartierOp, ...]
    twist: Optional[Twist] = None

    def __post_init__(self):
        """Validates that generators and twist share the context."""
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise ValueError("a Cartier algebra needs at least one generator")
        for op in self.generators:
            if op.ctx != self.ctx:
                raise ValueError(f"generator {op} lives in {op.ctx}, expected {self.ctx}")
        if self.twist is not None and self.twist.ideal.ctx != self.ctx:
            raise ValueError("twist ideal lives in a different ring")

    @classmethod
    def from_pairs(cls, ctx: RingCtx, pairs: Iterable[Tuple[int, PolyLike]]) -> "CartierAlgebra":
        """Builds the algebra generated by the operators ``(e, f)``."""
        return cls(ctx, tuple(CartierOp(e, f, ctx) for e, f in pairs))

    @property
    def is_twisted(self) -> bool:
        """``True`` when a twist with non-zero exponent is attached."""
        return self.twist is not None and self.twist.t != 0

    def twisted(self, ideal: Ideal, t: Fraction) -> "CartierAlgebra":
        """The same generators twisted by ``ideal^t``."""
        return replace(self, twist=Twist(ideal, Fraction(t)))

    def untwisted(self) -> "CartierAlgebra":
        """The same generators without a twist."""
        return replace(self, twist=None)

    def multiplier(self, e: int) -> Ideal:
        """Ideal that degree ``e`` words are applied through, the unit ideal without a twist."""
        if not self.is_twisted:
            return self.ctx.unit()
        return twist_power(self.twist.ideal, self.twist.t, e)

    def __str__(self) -> str:
        gens = ", ".join(str(op) for op in self.generators)
        if self.twist is None:
            return f"<{gens}>"
        return f"<{gens}> twisted by {self.twist.ideal}^{self.twist.t}"


def fundamental_operator(ctx: RingCtx, e: int = 1) -> CartierOp:
    """The operator ``T_e`` itself, ``f = 1``."""
    return CartierOp(e, ctx.ring.one, ctx)


def op_apply_poly(op: CartierOp, m: PolyLike) -> Poly:
    """Applies the operator to one element.

    Args:
        op: Operator ``(e, f)``.
        m: Element of the ring.

    Returns:
        Poly:
        ``T_e(f m)``, the Frobenius component of ``f m`` at the corner residue, reduced mod the quotient.
    """
    ctx = op.ctx
    m = ctx.coerce(m)
    product = op.f * m
    if not product:
        return ctx.ring.zero
    corner = (ctx.p**op.e - 1,) * len(ctx.variables)
    return ctx.reduce(frob_decompose(product, op.e).get(corner, ctx.ring.zero))


def image_generators(op: CartierOp, gens: Iterable[Poly]) -> List[Poly]:
    """Generators of ``op(N)`` for ``N`` generated by ``gens``.

    ``T_e(g S)`` is generated by the Frobenius components of ``g``, so the image of ``N`` is generated by
    the components of every ``f n_k``.
    """
    images: List[Poly] = []
    for n in gens:
        product = op.f * n
        if product:
            images.extend(frob_decompose(product, op.e).values())
    return images


def op_apply_ideal(op: CartierOp, ideal: Ideal) -> Ideal:
    """Image ideal ``op(N)``."""
    if op.ctx != ideal.ctx:
        raise ValueError("operator and ideal live in different rings")
    return Ideal(ideal.ctx, image_generators(op, ideal.gb))


def op_compose(outer: CartierOp, inner: CartierOp) -> CartierOp:
    """Composition ``outer ∘ inner``, represented as ``(e + e', f^(p^e') f')``.

    Args:
        outer: Operator ``(e, f)`` applied last.
        inner: Operator ``(e', f')`` applied first.

    Returns:
        CartierOp:
        The composite operator.
    """
    if outer.ctx != inner.ctx:
        raise ValueError("cannot compose operators on different rings")
    return CartierOp(outer.e + inner.e, frobenius_power(outer.f, inner.e) * inner.f, outer.ctx)


@functools.lru_cache(maxsize=512)
def _descends(e: int, f: Poly, quotient: Ideal) -> bool:
    target = bracket_power(quotient, e)
    return all(member(f * g, target) for g in quotient.gb)


def op_descends(op: CartierOp, quotient: Ideal) -> bool:
    """Fedder type criterion ``f I ⊆ I^[p^e]`` for ``I`` an ideal of the ambient ring."""
    if quotient.ctx.is_quotient:
        raise ValueError("descent is checked against an ideal of the polynomial ring")
    return _descends(op.e, op.f, quotient)


def extend_words(
    algebra: CartierAlgebra,
    words: Dict[int, List[Word]],
    degree: int,
    word_limit: int = DEFAULT_SETTINGS.word_limit,
) -> List[Word]:
    """Adds the words of ``degree`` to ``words``, which must already hold every lower degree.

    Args:
        algebra: The algebra.
        words: Words keyed by degree, extended in place.
        degree: Degree to enumerate.
        word_limit: Largest number of words allowed over all degrees.

    Returns:
        List[Word]:
        The words of ``degree``, in lexicographic order of their letters.
    """
    if degree in words:
        return words[degree]
    added: List[Word] = []
    for index, generator in enumerate(algebra.generators):
        rest = degree - generator.e
        if rest == 0:
            added.append(Word((index,), generator))
        elif rest > 0:
            for tail in words[rest]:
                added.append(Word((index,) + tail.letters, op_compose(generator, tail.op)))
    words[degree] = added
    count = sum(len(group) for group in words.values())
    if count > word_limit:
        raise WordLimitExceeded(count, word_limit, degree)
    return added


def algebra_words(
    algebra: CartierAlgebra, e_cap: int, word_limit: int = DEFAULT_SETTINGS.word_limit
) -> Dict[int, List[Word]]:
    """Every composition of generators of total degree at most ``e_cap``, grouped by degree.

    Args:
        algebra: The algebra.
        e_cap: Largest total degree.
        word_limit: Largest number of words allowed over all degrees.

    Returns:
        Dict[int, List[Word]]:
        Words keyed by degree ``1..e_cap``, in lexicographic order of their letters.
    """
    if e_cap < 1:
        raise ValueError(f"degree cap must be at least 1, got {e_cap}")
    words: Dict[int, List[Word]] = {}
    for degree in range(1, e_cap + 1):
        extend_words(algebra, words, degree, word_limit)
    logger.debug("%d words up to degree %d", sum(len(group) for group in words.values()), e_cap)
    return words


def twist_gauge(twist: Twist) -> int:
    """Largest gauge among the generators of the twisting ideal."""
    return max((gauge(g) for g in twist.ideal.elements()), default=0)


def gauge_bound(algebra: CartierAlgebra) -> GaugeBound:
    """Gauge bound ``B = floor(K / (p - 1)) + 1``, enlarged by ``ceil(t d)`` under a twist.

    Args:
        algebra: The algebra.

    Returns:
        GaugeBound:
        ``K`` is the largest gauge of a generator multiplier.
    """
    p = algebra.ctx.p
    K = max([0] + [gauge(op.f) for op in algebra.generators if op.f])
    B = K // (p - 1) + 1
    if algebra.is_twisted:
        B += math.ceil(algebra.twist.t * twist_gauge(algebra.twist))
    return GaugeBound(K=K, B=B)


def twist_degree_floor(t: Fraction, p: int, spread: int = 0) -> int:
    """First degree a truncated twist is trusted at.

    That is the smallest ``e`` with ``p^e - 1 >= max(4, spread + 1) * denominator(t)``, where ``spread``
    bounds the gauge of the generators the twist acts on plus the gauge of the twisting ideal. Below it
    the rounding of ``t (p^e - 1)`` can hold a partial sum still for a few degrees before it shrinks.
    """
    target = max(4, spread + 1) * Fraction(t).denominator
    e = 1
    while p**e - 1 < target:
        e += 1
    return e


def multiplied(algebra: CartierAlgebra, ideal: Ideal, e: int) -> Ideal:
    """``a_e N``, the ideal degree ``e`` words act on."""
    if not algebra.is_twisted:
        return ideal
    return ideal_product(algebra.multiplier(e), ideal)
