"""Independent cross-checks: ν-invariants, monomial test ideals from Newton polyhedra, and the
closed ideals of a one variable ring found by exhaustion.

Nothing here goes through Gröbner bases or the fixed point engine, only through the polynomial layer.

>>> NewtonPolyhedron

"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from pycartier.exceptions import NotMonomial
from pycartier.polyring import (
    Monomial,
    Poly,
    characteristic,
    check_exponent,
    coefficients,
    format_poly,
    frob_decompose,
    from_terms,
    is_monomial,
    monomial,
    monomials_up_to,
    solve_cofactors,
)

logger = logging.getLogger(__name__)

Facet = Tuple[Tuple[Fraction, ...], Fraction]


def _dominates(u: Monomial, v: Monomial) -> bool:
    return all(a >= b for a, b in zip(u, v))


def minimalize(exponents: Iterable[Monomial]) -> List[Monomial]:
    """Minimal exponent vectors under the componentwise order."""
    kept: List[Monomial] = []
    for m in sorted(set(exponents), key=sum):
        if not any(_dominates(m, g) for g in kept):
            kept.append(m)
    return sorted(kept, reverse=True)


def _normalise(normal: Sequence[Fraction], offset: Fraction) -> Facet:
    """Scales an inequality to coprime integer coefficients."""
    values = list(normal) + [offset]
    scale = math.lcm(*(value.denominator for value in values))
    integers = [int(value * scale) for value in values]
    divisor = math.gcd(*integers) or 1
    return tuple(Fraction(a // divisor) for a in integers[:-1]), Fraction(integers[-1] // divisor)


@dataclass(frozen=True)
class NewtonPolyhedron:
    """Convex hull of the generator exponents plus the positive orthant, as inequalities ``w.v >= c``.

    >>> NewtonPolyhedron

    """

    points: Tuple[Monomial, ...]
    facets: Tuple[Facet, ...]

    @classmethod
    def from_points(cls, points: Iterable[Monomial]) -> "NewtonPolyhedron":
        """Builds the polyhedron and its supporting inequalities.

        Every facet passes through some generator points and is parallel to the remaining coordinate
        directions, so candidate hyperplanes come from such subsets; the ones with a non-negative
        normal that keep every point on their positive side are supporting.

        Args:
            points: Exponent vectors of the generators.

        Returns:
            NewtonPolyhedron:
            The polyhedron with deduplicated inequalities.
        """
        points = tuple(minimalize(points))
        if not points:
            raise ValueError("the Newton polyhedron of the zero ideal is empty")
        n = len(points[0])
        facets = set()
        for k in range(1, n + 1):
            for chosen in itertools.combinations(points, k):
                for directions in itertools.combinations(range(n), n - k):
                    rows = [list(v) + [-1] for v in chosen]
                    rows += [[int(i == d) for i in range(n)] + [0] for d in directions]
                    kernel = sympy.Matrix(rows).nullspace()
                    if len(kernel) != 1:
                        continue
                    vector = [Fraction(int(value.p), int(value.q)) for value in kernel[0]]
                    normal, offset = vector[:n], vector[n]
                    if all(value <= 0 for value in normal):
                        normal, offset = [-value for value in normal], -offset
                    if any(value < 0 for value in normal) or not any(normal):
                        continue
                    if all(sum(w * a for w, a in zip(normal, v)) >= offset for v in points):
                        facets.add(_normalise(normal, offset))
        return cls(points=points, facets=tuple(sorted(facets)))

    def interior_contains(self, v: Sequence[Fraction], t: Fraction) -> bool:
        """``True`` when ``v`` lies in the interior of ``t`` times the polyhedron."""
        return all(v[i] > 0 for i in range(len(v))) and all(
            sum(w * a for w, a in zip(normal, v)) > t * offset for normal, offset in self.facets
        )


def monomial_tau(generators: Sequence[Poly], t: Fraction) -> List[Poly]:
    """Monomial test ideal of ``a^t``: ``x^u`` with ``u + (1, ..., 1)`` inside ``t`` times the Newton polyhedron.

    Args:
        generators: Monomial generators of ``a``.
        t: Non-negative exponent.

    Returns:
        List[Poly]:
        Minimal monomial generators, by decreasing exponent vector.
    """
    t = Fraction(t)
    if t < 0:
        raise ValueError(f"exponent must be non-negative, got {t}")
    offending = [format_poly(g) for g in generators if g and not is_monomial(g)]
    if offending:
        raise NotMonomial(offending)
    gens = [g for g in generators if g]
    if not gens:
        raise ValueError("the zero ideal has no Newton polyhedron")
    ring = gens[0].ring
    polyhedron = NewtonPolyhedron.from_points(g.LM for g in gens)
    top = max(max(v) for v in polyhedron.points)
    bound = math.ceil(t * top) + 1
    inside = [
        u
        for u in monomials_up_to(ring.ngens, bound)
        if polyhedron.interior_contains([Fraction(a + 1) for a in u], t)
    ]
    return [monomial(ring, u) for u in minimalize(inside)]


def _truncate(f: Poly, q: int) -> Poly:
    return from_terms(f.ring, {m: c for m, c in coefficients(f).items() if max(m, default=0) < q})


def nu_value(f: Poly, e: int) -> int:
    """Largest ``r`` with ``f^r`` outside the Frobenius power ``(x_1^q, ..., x_n^q)``, ``q = p^e``.

    Powers are built one multiplication at a time, dropping every term already inside the bracket.

    Args:
        f: Polynomial vanishing at the origin.
        e: Frobenius exponent, at least one.

    Returns:
        int:
        The ν-invariant.
    """
    if e < 1:
        raise ValueError(f"Frobenius exponent must be at least 1, got {e}")
    if coefficients(f).get((0,) * f.ring.ngens):
        raise ValueError(f"{format_poly(f)} does not vanish at the origin")
    q = check_exponent(characteristic(f.ring) ** e)
    power, r = f.ring.one, 0
    while True:
        following = _truncate(power * f, q)
        if not following:
            return r
        power, r = following, r + 1


def nu_interval(f: Poly, e: int) -> Tuple[Fraction, Fraction]:
    """Bounds ``(nu / q, (nu + 1) / q]`` on the F-pure threshold of a principal ideal."""
    q = characteristic(f.ring) ** e
    nu = nu_value(f, e)
    return Fraction(nu, q), Fraction(nu + 1, q)


def _principal_image(generators: Sequence[Tuple[int, Poly]], g: Poly) -> Poly:
    """Monic generator of the ideal the operators send ``(g)`` to in one variable."""
    ring = g.ring
    result = ring.zero
    for e, f in generators:
        product = f * g
        if not product:
            continue
        for component in frob_decompose(product, e).values():
            result = component if not result else result.gcd(component)
    return result.monic() if result else result


def bruteforce_closed_ideals(generators: Sequence[Tuple[int, Poly]], bound: int) -> List[Poly]:
    """Every ideal ``0``, ``(x^k)`` with ``k <= bound``, or the whole ring that the operators map onto itself.

    In one variable every ideal is principal, so the image of ``(x^k)`` is generated by the gcd of the
    Frobenius components of ``f x^k`` over the generators ``(e, f)``. An ideal with image equal to
    itself is both stable and F-pure.

    Args:
        generators: Operators ``(e, f)`` on a one variable ring.
        bound: Largest exponent ``k`` tried.

    Returns:
        List[Poly]:
        Principal generators of the closed ideals, the whole ring as ``1`` first and the zero ideal as ``0`` last.
    """
    if not generators:
        raise ValueError("at least one operator is needed")
    ring = generators[0][1].ring
    if ring.ngens != 1:
        raise ValueError(f"exhaustive enumeration runs in one variable, got {ring.ngens}")
    closed = []
    for k in range(bound + 1):
        g = monomial(ring, (k,))
        if _principal_image(generators, g) == g:
            closed.append(g)
    closed.append(ring.zero)
    logger.debug("closed ideals up to x^%d: %s", bound, [format_poly(g) for g in closed])
    return closed


def membership_by_linear_algebra(f: Poly, gens: Sequence[Poly], degree: int) -> Optional[List[Poly]]:
    """Cofactors of total degree at most ``degree`` exhibiting ``f`` in the ideal of ``gens``, if any."""
    return solve_cofactors(f, list(gens), degree)
