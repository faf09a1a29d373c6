"""Gröbner bases, canonical ideals and the ideal arithmetic built on top of them.

Every ideal is stored through its reduced Gröbner basis in the ambient polynomial ring. Ideals of a
quotient ``R = S/I`` are stored as their full preimage in ``S``, so equality in ``R`` is equality of
preimage bases.

>>> Ideal

"""

import functools
import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import sympy
from sympy.polys.domains import GF
from sympy.polys.orderings import ProductOrder, grevlex, lex
from sympy.polys.rings import PolyRing

from pycartier.exceptions import IterationCapExceeded, NotMonomial
from pycartier.polyring import (
    Monomial,
    Poly,
    coefficients,
    format_poly,
    frobenius_power,
    is_monomial,
    monomial,
    monomials_up_to,
    nullspace_mod_p,
    parse_poly,
    poly_power,
    polynomial_ring,
    solve_cofactors,
)

logger = logging.getLogger(__name__)

PolyLike = Union[Poly, str, int]


# Buchberger


def spoly(f: Poly, g: Poly) -> Poly:
    """Returns the s-polynomial of two monic polynomials."""
    ring = f.ring
    lcm = ring.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(ring.monomial_div(lcm, f.LM)) - g.mul_monom(ring.monomial_div(lcm, g.LM))


def update(basis: List[Poly], pairs: Set[Tuple[int, int]], f: Poly) -> Tuple[List[Poly], Set[Tuple[int, int]]]:
    """Adds ``f`` to the basis and prunes the pair set with the Gebauer-Möller criteria.

    Args:
        basis: Current basis.
        pairs: Pending index pairs.
        f: Monic polynomial joining the basis.

    Returns:
        Tuple[List[Poly], Set[Tuple[int, int]]]:
        Extended basis and the surviving pair set.
    """
    ring = f.ring
    lcm, mul, div = ring.monomial_lcm, ring.monomial_mul, ring.monomial_div
    lmf = f.LM
    leads = [g.LM for g in basis]
    pairs = {
        (i, j)
        for i, j in pairs
        if not div(lcm(leads[i], leads[j]), lmf)
        or lcm(leads[i], leads[j]) == lcm(leads[i], lmf)
        or lcm(leads[i], leads[j]) == lcm(leads[j], lmf)
    }
    by_lcm: Dict[Monomial, List[int]] = {}
    for i, lead in enumerate(leads):
        by_lcm.setdefault(lcm(lead, lmf), []).append(i)
    minimal: List[Monomial] = []
    for candidate in sorted(by_lcm, key=ring.order):
        if all(not div(candidate, kept) for kept in minimal):
            minimal.append(candidate)
    fresh = set()
    for candidate in minimal:
        # coprime leading monomials reduce to zero
        if not any(lcm(leads[i], lmf) == mul(leads[i], lmf) for i in by_lcm[candidate]):
            fresh.add((min(by_lcm[candidate]), len(basis)))
    return basis + [f], pairs | fresh


def select(basis: List[Poly], pairs: Set[Tuple[int, int]]) -> Tuple[int, int]:
    """Normal selection strategy, ties broken by the pair indices."""
    ring = basis[0].ring
    return min(pairs, key=lambda pair: (ring.order(ring.monomial_lcm(basis[pair[0]].LM, basis[pair[1]].LM)), pair))


def minimalize(basis: Sequence[Poly]) -> List[Poly]:
    """Drops every element whose leading monomial is divisible by another one."""
    if not basis:
        return []
    ring = basis[0].ring
    kept: List[Poly] = []
    for f in sorted(basis, key=lambda h: ring.order(h.LM)):
        if all(not ring.monomial_div(f.LM, g.LM) for g in kept):
            kept.append(f)
    return kept


def interreduce(basis: Sequence[Poly]) -> List[Poly]:
    """Turns a minimal Gröbner basis into the reduced one."""
    reduced = []
    for i, g in enumerate(basis):
        others = list(basis[:i]) + list(basis[i + 1 :])
        reduced.append((g.rem(others) if others else g).monic())
    return reduced


def canonical_order(basis: Iterable[Poly]) -> Tuple[Poly, ...]:
    """Lists polynomials by decreasing leading monomial."""
    basis = list(basis)
    if not basis:
        return ()
    ring = basis[0].ring
    return tuple(sorted(basis, key=lambda g: ring.order(g.LM), reverse=True))


def minimal_monomials(monomials: Iterable[Monomial]) -> List[Monomial]:
    """Minimal generators of a monomial ideal, from any generating set of exponent vectors.

    Two variables are swept once in lexicographic order; more variables fall back to pairwise
    divisibility against the generators kept so far.
    """
    unique = sorted(set(monomials))
    if unique and len(unique[0]) == 2:
        kept, lowest = [], math.inf
        for vector in unique:
            if vector[1] < lowest:
                kept.append(vector)
                lowest = vector[1]
        return kept
    kept = []
    for candidate in sorted(unique, key=sum):
        if not any(all(a >= b for a, b in zip(candidate, other)) for other in kept):
            kept.append(candidate)
    return kept


def exponent_product(left: Iterable[Monomial], right: Iterable[Monomial]) -> List[Monomial]:
    """Minimal exponent vectors of the product of two monomial ideals."""
    right = list(right)
    return minimal_monomials(tuple(a + b for a, b in zip(u, v)) for u in left for v in right)


@functools.lru_cache(maxsize=1024)
def power_exponents(exponents: Tuple[Monomial, ...], n: int, size: int) -> Tuple[Monomial, ...]:
    """Minimal exponent vectors of the ``n``-th power of the monomial ideal spanned by ``exponents``.

    Args:
        exponents: Exponent vectors of the generators.
        n: Non-negative power.
        size: Number of variables, used for the empty product.

    Returns:
        Tuple[Monomial, ...]:
        The minimal generators, empty when the ideal is zero and ``n`` is positive.
    """
    if n == 0:
        return ((0,) * size,)
    result, base = None, minimal_monomials(exponents)
    while n:
        n, bit = divmod(n, 2)
        if bit:
            result = base if result is None else exponent_product(result, base)
        if n:
            base = exponent_product(base, base)
    return tuple(result)


def groebner(polys: Iterable[Poly], ring: PolyRing) -> Tuple[Poly, ...]:
    """Reduced Gröbner basis of the ideal spanned by ``polys``, in the order of ``ring``.

    Args:
        polys: Generators, zeros allowed.
        ring: Ring the generators live in.

    Returns:
        Tuple[Poly, ...]:
        Reduced basis sorted by decreasing leading monomial, empty for the zero ideal.
    """
    polys = [f.monic() for f in polys if f]
    if not polys:
        return ()
    if all(is_monomial(f) for f in polys):
        return canonical_order(ring.from_dict({m: 1}) for m in minimal_monomials(f.LM for f in polys))
    basis: List[Poly] = []
    pairs: Set[Tuple[int, int]] = set()
    for f in polys:
        basis, pairs = update(basis, pairs, f)
    while pairs:
        i, j = select(basis, pairs)
        pairs.remove((i, j))
        remainder = spoly(basis[i], basis[j]).rem(basis)
        if remainder:
            basis, pairs = update(basis, pairs, remainder.monic())
    result = canonical_order(interreduce(minimalize(basis)))
    logger.debug("Gröbner basis with %d elements from %d generators", len(result), len(polys))
    return result


# contexts and ideals


class RingCtx:
    """Ambient polynomial ring ``S`` or a quotient ``S/I``, with the quotient basis cached.

    >>> RingCtx

    """

    def __init__(self, p: int, variables: Sequence[str], quotient: Iterable[PolyLike] = ()):
        """Validates the ring and computes the reduced Gröbner basis of the quotient ideal.

        Args:
            p: Prime characteristic.
            variables: Ordered variable names.
            quotient: Generators of ``I``; empty for the polynomial ring itself.
        """
        self.p = p
        self.variables = tuple(variables)
        self.ring = polynomial_ring(self.variables, p)
        self.quotient = groebner([self.coerce(g) for g in quotient], self.ring)

    @functools.cached_property
    def ambient(self) -> "RingCtx":
        """The polynomial ring ``S`` this context is a quotient of."""
        return self if not self.quotient else RingCtx(self.p, self.variables)

    @property
    def is_quotient(self) -> bool:
        """``True`` for ``S/I`` with ``I`` non-zero."""
        return bool(self.quotient)

    def coerce(self, value: PolyLike) -> Poly:
        """Parses strings and lifts integers into the ring, rejecting foreign polynomials."""
        if isinstance(value, str):
            return parse_poly(value, self.ring)
        if isinstance(value, int):
            return self.ring(value % self.p)
        if getattr(value, "ring", None) != self.ring:
            raise ValueError(f"{value!r} does not belong to {self}")
        return value

    def reduce(self, f: PolyLike) -> Poly:
        """Normal form modulo the quotient ideal."""
        f = self.coerce(f)
        return f.rem(list(self.quotient)) if self.quotient and f else f

    def gens(self) -> Tuple[Poly, ...]:
        """The variables as polynomials."""
        return tuple(self.ring.gens)

    def ideal(self, *generators: PolyLike) -> "Ideal":
        """Shorthand for ``Ideal(self, generators)``."""
        return Ideal(self, generators)

    def unit(self) -> "Ideal":
        """The whole ring."""
        return Ideal(self, [1])

    def zero(self) -> "Ideal":
        """The zero ideal."""
        return Ideal(self, ())

    def maximal(self) -> "Ideal":
        """The homogeneous maximal ideal generated by the variables."""
        return Ideal(self, self.gens())

    def quotient_ideal(self) -> "Ideal":
        """``I`` as an ideal of the ambient ring."""
        return Ideal(self.ambient, self.quotient)

    def _key(self) -> tuple:
        return self.p, self.variables, self.quotient

    def __eq__(self, other) -> bool:
        return isinstance(other, RingCtx) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        base = f"F_{self.p}[{', '.join(self.variables)}]"
        if self.quotient:
            return f"{base}/({', '.join(format_poly(g) for g in self.quotient)})"
        return base


class Ideal:
    """Finitely generated ideal of a ``RingCtx``, canonicalised by its reduced Gröbner basis.

    >>> Ideal

    """

    def __init__(self, ctx: RingCtx, generators: Iterable[PolyLike] = ()):
        """Computes the reduced Gröbner basis of the preimage eagerly.

        Args:
            ctx: Ring the ideal belongs to.
            generators: Generators as polynomials, strings or integers.
        """
        polys = [ctx.coerce(g) for g in generators]
        self.ctx = ctx
        self.generators = tuple(g for g in (ctx.reduce(f) for f in polys) if g)
        self.gb = groebner(polys + list(ctx.quotient), ctx.ring)

    def elements(self) -> Tuple[Poly, ...]:
        """Basis elements that are non-zero in the quotient, by decreasing leading monomial."""
        if not self.ctx.quotient:
            return self.gb
        return tuple(g for g in self.gb if g.rem(list(self.ctx.quotient)))

    def is_zero(self) -> bool:
        """``True`` for the zero ideal of the context."""
        return self.gb == self.ctx.quotient

    def is_unit(self) -> bool:
        """``True`` for the whole ring."""
        return len(self.gb) == 1 and self.gb[0] == self.ctx.ring.one

    def is_monomial(self) -> bool:
        """``True`` when every basis element of the preimage is a monomial."""
        return all(is_monomial(g) for g in self.gb)

    def __contains__(self, f: PolyLike) -> bool:
        return member(f, self)

    def __le__(self, other: "Ideal") -> bool:
        _same_context(self, other)
        return all(member(g, other) for g in self.gb)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and self.ctx == other.ctx and self.gb == other.gb

    def __hash__(self) -> int:
        return hash((self.ctx, self.gb))

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __str__(self) -> str:
        return format_ideal(self)

    def __repr__(self) -> str:
        return f"Ideal({format_ideal(self)} in {self.ctx})"


def format_ideal(ideal: Ideal) -> str:
    """Prints the reduced basis as ``(g1, g2, ...)``, ``(0)`` for the zero ideal."""
    if ideal.is_zero():
        return "(0)"
    return "(" + ", ".join(format_poly(g) for g in ideal.elements()) + ")"


def _same_context(*ideals: Ideal) -> RingCtx:
    ctx = ideals[0].ctx
    for ideal in ideals[1:]:
        if ideal.ctx != ctx:
            raise ValueError(f"ideals live in different rings: {ctx} and {ideal.ctx}")
    return ctx


# operations


def buchberger(gens: Iterable[PolyLike], ctx: RingCtx) -> Tuple[Poly, ...]:
    """Reduced Gröbner basis of the preimage in ``S`` of the ideal generated by ``gens`` in ``ctx``."""
    return groebner([ctx.coerce(g) for g in gens] + list(ctx.quotient), ctx.ring)


def member(f: PolyLike, ideal: Ideal) -> bool:
    """Decides membership by reducing to the normal form modulo the preimage basis."""
    f = ideal.ctx.coerce(f)
    if not f:
        return True
    if not ideal.gb:
        return False
    return not f.rem(list(ideal.gb))


def ideal_equals(left: Ideal, right: Ideal) -> bool:
    """Equality of reduced bases."""
    _same_context(left, right)
    return left.gb == right.gb


def ideal_sum(*ideals: Ideal) -> Ideal:
    """Sum of any number of ideals, with a single Gröbner basis computation."""
    ctx = _same_context(*ideals)
    return Ideal(ctx, itertools.chain.from_iterable(ideal.elements() for ideal in ideals))


def ideal_product(left: Ideal, right: Ideal) -> Ideal:
    """Product ideal, from pairwise products of the basis elements."""
    ctx = _same_context(left, right)
    left_elements, right_elements = left.elements(), right.elements()
    if all(is_monomial(g) for g in left_elements + right_elements):
        products = exponent_product([g.LM for g in left_elements], [h.LM for h in right_elements])
        return Ideal(ctx, [monomial(ctx.ring, m) for m in products])
    return Ideal(ctx, [ctx.reduce(g * h) for g in left_elements for h in right_elements])


@functools.lru_cache(maxsize=256)
def ideal_power(ideal: Ideal, n: int) -> Ideal:
    """Raises an ideal to a non-negative power, ``J**0`` being the unit ideal.

    Args:
        ideal: Base ideal.
        n: Exponent.

    Returns:
        Ideal:
        The power ``J**n``.
    """
    if n < 0:
        raise ValueError(f"ideal power must be non-negative, got {n}")
    ctx = ideal.ctx
    if n == 0:
        return ctx.unit()
    elements = ideal.elements()
    if len(elements) <= 1:
        return Ideal(ctx, [ctx.reduce(poly_power(g, n)) for g in elements])
    if all(is_monomial(g) for g in elements):
        exponents = power_exponents(tuple(g.LM for g in elements), n, len(ctx.variables))
        return Ideal(ctx, [monomial(ctx.ring, m) for m in exponents])
    result, base = None, ideal
    while n:
        n, bit = divmod(n, 2)
        if bit:
            result = base if result is None else ideal_product(result, base)
        if n:
            base = ideal_product(base, base)
    return result


@functools.lru_cache(maxsize=256)
def bracket_power(ideal: Ideal, e: int) -> Ideal:
    """Frobenius bracket power ``J^[p^e]``, generated by ``p^e``-th powers of any generating set."""
    if e < 1:
        raise ValueError(f"bracket power needs e >= 1, got {e}")
    return Ideal(ideal.ctx, [frobenius_power(g, e) for g in ideal.gb])


def twist_exponent(t: Fraction, p: int, e: int) -> int:
    """Exact ``ceil(t * (p**e - 1))``."""
    return math.ceil(Fraction(t) * (p**e - 1))


def twist_power(ideal: Ideal, t: Fraction, e: int) -> Ideal:
    """Degree ``e`` member of the F-graded system ``a^t``: the power ``a^ceil(t(p^e - 1))``.

    Args:
        ideal: The ideal ``a``.
        t: Non-negative rational exponent.
        e: Degree, at least one.

    Returns:
        Ideal:
        Unit ideal for ``t = 0``, otherwise the power of ``a``.
    """
    if t < 0:
        raise ValueError(f"twist exponent must be non-negative, got {t}")
    if e < 1:
        raise ValueError(f"twist degree must be at least 1, got {e}")
    return ideal_power(ideal, twist_exponent(t, ideal.ctx.p, e))


@functools.lru_cache(maxsize=None)
def _elimination_ring(variables: Tuple[str, ...], p: int) -> PolyRing:
    """Ring with one extra leading variable eliminated by a block order."""
    polynomial_ring(variables, p)
    order = ProductOrder((lex, lambda m: m[:1]), (grevlex, lambda m: m[1:]))
    symbols = [sympy.Symbol("@t")] + [sympy.Symbol(name) for name in variables]
    return PolyRing(symbols, GF(p, symmetric=False), order)


def _lift_into(f: Poly, ring: PolyRing, shift: int) -> Poly:
    return ring.from_dict({(shift,) + monom: coeff for monom, coeff in f.items()})


def _intersect_bases(left: Sequence[Poly], right: Sequence[Poly], ctx: RingCtx) -> List[Poly]:
    """Intersection of two ideals of the ambient ring given by bases."""
    if not left or not right:
        return []
    if all(is_monomial(g) for g in itertools.chain(left, right)):
        lcms = {ctx.ring.monomial_lcm(g.LM, h.LM) for g in left for h in right}
        return [monomial(ctx.ring, m) for m in minimal_monomials(lcms)]
    ring = _elimination_ring(ctx.variables, ctx.p)
    t = ring.gens[0]
    gens = [t * _lift_into(g, ring, 0) for g in left] + [(ring.one - t) * _lift_into(h, ring, 0) for h in right]
    eliminated = [g for g in groebner(gens, ring) if g.LM[0] == 0]
    return [ctx.ring.from_dict({monom[1:]: coeff for monom, coeff in g.items()}) for g in eliminated]


def intersect(left: Ideal, right: Ideal) -> Ideal:
    """Intersection of two ideals of the same context, through an elimination variable."""
    ctx = _same_context(left, right)
    return Ideal(ctx, _intersect_bases(left.gb, right.gb, ctx.ambient))


def _colon_element(basis: Sequence[Poly], g: Poly, ctx: RingCtx) -> List[Poly]:
    """Basis of ``(J : g)`` in the ambient ring, from ``(J ∩ (g)) / g``."""
    if basis and not g.rem(list(basis)):
        return [ctx.ring.one]
    if is_monomial(g) and all(is_monomial(h) for h in basis):
        shifted = [tuple(max(a - b, 0) for a, b in zip(h.LM, g.LM)) for h in basis]
        return [monomial(ctx.ring, m) for m in minimal_monomials(shifted)]
    return [h.exquo(g) for h in _intersect_bases(basis, groebner([g], ctx.ring), ctx)]


def colon(left: Ideal, right: Ideal) -> Ideal:
    """Ideal quotient ``(J : K) = {f : f K ⊆ J}``.

    Args:
        left: The ideal ``J``.
        right: The ideal ``K``.

    Returns:
        Ideal:
        The colon ideal, the unit ideal when ``K`` is zero.
    """
    ctx = _same_context(left, right)
    ambient = ctx.ambient
    result: Optional[List[Poly]] = None
    for g in right.elements():
        part = groebner(_colon_element(left.gb, g, ambient), ambient.ring)
        result = list(part) if result is None else _intersect_bases(result, part, ambient)
    if result is None:
        return ctx.unit()
    return Ideal(ctx, result)


def saturate(ideal: Ideal, c: PolyLike, max_iterations: int = 64) -> Ideal:
    """Saturation ``(J : c^∞)`` by iterated colon until the chain stops growing."""
    principal = Ideal(ideal.ctx, [c])
    current = ideal
    for _ in range(max_iterations):
        following = colon(current, principal)
        if following == current:
            return current
        current = following
    raise IterationCapExceeded("saturation", max_iterations)


def require_monomial(ideal: Ideal) -> None:
    """Raises ``NotMonomial`` unless every basis element of the preimage is a monomial."""
    offending = [format_poly(g) for g in ideal.gb if not is_monomial(g)]
    if offending:
        raise NotMonomial(offending)


def monomial_radical(ideal: Ideal) -> Ideal:
    """Radical of a monomial ideal, squashing every exponent to one."""
    require_monomial(ideal)
    ring = ideal.ctx.ring
    return Ideal(ideal.ctx, [monomial(ring, [min(a, 1) for a in g.LM]) for g in ideal.gb])


def monomial_minimal_primes(ideal: Ideal) -> List[Ideal]:
    """Minimal primes of a monomial ideal: the minimal variable subsets meeting every generator's support.

    Args:
        ideal: Monomial ideal.

    Returns:
        List[Ideal]:
        Primes generated by variables, ordered by size and then by variable position.
    """
    require_monomial(ideal)
    if ideal.is_unit():
        return []
    supports = [frozenset(i for i, a in enumerate(g.LM) if a) for g in ideal.gb]
    n = len(ideal.ctx.variables)
    chosen: List[Tuple[int, ...]] = []
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            if any(set(kept) <= set(subset) for kept in chosen):
                continue
            if all(support & set(subset) for support in supports):
                chosen.append(subset)
    gens = ideal.ctx.gens()
    return [Ideal(ideal.ctx, [gens[i] for i in subset]) for subset in chosen]


def gauge_slice(ideal: Ideal, bound: int) -> List[Poly]:
    """Basis over ``GF(p)`` of the members of ``J`` whose gauge is at most ``bound``.

    Normal forms of the monomials in the box ``[0, bound]^n`` are computed and the kernel of the
    normal form map is read off by exact linear algebra.

    Args:
        ideal: Ideal to slice.
        bound: Gauge bound.

    Returns:
        List[Poly]:
        Echelonised basis of the slice.
    """
    ctx = ideal.ctx
    box = list(monomials_up_to(len(ctx.variables), bound))
    basis = list(ideal.gb)
    forms = [coefficients(monomial(ctx.ring, m).rem(basis)) if basis else {m: 1} for m in box]
    support = sorted(set().union(*forms), key=ctx.ring.order, reverse=True)
    rows = [[form.get(monom, 0) for form in forms] for monom in support]
    kernel = nullspace_mod_p(rows, len(box), ctx.p)
    members = [ctx.ring.from_dict({m: v for m, v in zip(box, vector) if v}) for vector in kernel]
    return [f for f in members if f]


def lift(f: PolyLike, gens: Sequence[PolyLike], degree: int, ctx: RingCtx) -> Optional[List[Poly]]:
    """Cofactors of bounded degree expressing ``f`` through ``gens`` modulo the quotient.

    Args:
        f: Element to express.
        gens: Generators.
        degree: Total degree bound on the cofactors.
        ctx: Ring of the computation.

    Returns:
        Optional[List[Poly]]:
        One cofactor per generator, or ``None`` when the bound is too small.
    """
    target = ctx.coerce(f)
    polys = [ctx.coerce(g) for g in gens]
    cofactors = solve_cofactors(target, polys + list(ctx.quotient), degree)
    return None if cofactors is None else cofactors[: len(polys)]


def variable_ideal(ctx: RingCtx, indices: Iterable[int]) -> Ideal:
    """Prime ideal generated by the chosen variables."""
    gens = ctx.gens()
    return Ideal(ctx, [gens[i] for i in indices])
