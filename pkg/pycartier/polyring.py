"""Exact sparse polynomials over the prime field, the max-norm gauge and Frobenius decompositions.

Polynomials are ``sympy`` ring elements over ``GF(p)`` ordered by graded reverse lexicographic order.
This module also carries the string grammar used by configs and reports, and the small amount of
exact linear algebra over ``GF(p)`` that both the Gröbner layer and the oracles rely on.

>>> Poly

"""

import functools
import re
import threading
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from arpeggio import EOF, NoMatch, Optional as Maybe, ParserPython, Terminal, ZeroOrMore
from arpeggio import RegExMatch as _
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from pycartier.exceptions import ExponentOverflow, InvalidRing, PolyParseError, UndeclaredVariable

Monomial = Tuple[int, ...]
Poly = PolyElement

MAX_EXPONENT = 2**31 - 1
VARIABLE_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class NegInfinity:
    """Gauge of the zero element, below every integer.

    >>> NegInfinity

    """

    __slots__ = ()

    def __lt__(self, other) -> bool:
        return not isinstance(other, NegInfinity)

    def __le__(self, other) -> bool:
        return True

    def __gt__(self, other) -> bool:
        return False

    def __ge__(self, other) -> bool:
        return isinstance(other, NegInfinity)

    def __eq__(self, other) -> bool:
        return isinstance(other, NegInfinity)

    def __hash__(self) -> int:
        return hash("-inf")

    def __add__(self, other) -> "NegInfinity":
        return self

    __radd__ = __add__

    def __floordiv__(self, other) -> "NegInfinity":
        return self

    def __repr__(self) -> str:
        return "-inf"


NEG_INFINITY = NegInfinity()
GaugeValue = Union[int, NegInfinity]


@functools.lru_cache(maxsize=None)
def polynomial_ring(variables: Tuple[str, ...], p: int) -> PolyRing:
    """Builds (and caches) the polynomial ring over ``GF(p)`` in the given variables.

    Args:
        variables: Ordered variable names.
        p: Characteristic, must be prime.

    Returns:
        PolyRing:
        Ring with graded reverse lexicographic order.
    """
    if not sympy.isprime(p):
        raise InvalidRing(f"characteristic {p} is not prime")
    if not variables:
        raise InvalidRing("at least one variable is required")
    if len(set(variables)) != len(variables):
        raise InvalidRing(f"duplicate variables in {variables}")
    for name in variables:
        if not VARIABLE_NAME.match(name):
            raise InvalidRing(f"invalid variable name {name!r}")
    return PolyRing([sympy.Symbol(name) for name in variables], GF(p, symmetric=False), grevlex)


def characteristic(ring: PolyRing) -> int:
    """Returns the characteristic of the coefficient field."""
    return int(ring.domain.mod)


def variable_names(ring: PolyRing) -> Tuple[str, ...]:
    """Returns the declared variable names in order."""
    return tuple(str(symbol) for symbol in ring.symbols)


def check_exponent(value: int) -> int:
    """Raises ``ExponentOverflow`` for exponents outside the 32-bit range."""
    if value > MAX_EXPONENT:
        raise ExponentOverflow(value, MAX_EXPONENT)
    return value


def coefficients(f: Poly) -> Dict[Monomial, int]:
    """Returns the terms of ``f`` as a plain map with coefficients in ``1..p-1``."""
    p = characteristic(f.ring)
    return {monom: int(coeff) % p for monom, coeff in f.items()}


def from_terms(ring: PolyRing, terms: Mapping[Monomial, int]) -> Poly:
    """Builds a polynomial from a monomial to integer map, reducing coefficients mod p."""
    p = characteristic(ring)
    reduced = {}
    for monom, coeff in terms.items():
        for exponent in monom:
            check_exponent(exponent)
        if coeff % p:
            reduced[tuple(monom)] = coeff % p
    return ring.from_dict(reduced)


def monomial(ring: PolyRing, exponents: Sequence[int]) -> Poly:
    """Returns the monic monomial with the given exponent vector."""
    return from_terms(ring, {tuple(exponents): 1})


def is_monomial(f: Poly) -> bool:
    """Returns ``True`` when ``f`` has exactly one term."""
    return len(f) == 1


def leading_monomial(f: Poly) -> Monomial:
    """Returns the leading exponent vector of ``f`` in the ring order."""
    return f.LM


def max_norm(monom: Monomial) -> int:
    """Returns the largest exponent of a monomial."""
    return max(monom, default=0)


def gauge(f: Poly) -> GaugeValue:
    """Returns the max-norm gauge of ``f``, negative infinity for the zero polynomial.

    Args:
        f: Polynomial to measure.

    Returns:
        GaugeValue:
        Largest exponent appearing in any monomial of ``f``.
    """
    if not f:
        return NEG_INFINITY
    return max(max_norm(monom) for monom in f.itermonoms())


def sort_key(f: Poly) -> tuple:
    """Ordering key that lists polynomials by decreasing leading monomial."""
    ordered = sorted(f.itermonoms(), key=f.ring.order, reverse=True)
    return tuple(f.ring.order(monom) for monom in ordered)


def frobenius_power(f: Poly, e: int) -> Poly:
    """Returns ``f`` raised to ``p**e`` by scaling every exponent, coefficients are fixed by Frobenius.

    Args:
        f: Polynomial to raise.
        e: Frobenius exponent, non-negative.

    Returns:
        Poly:
        The polynomial ``f**(p**e)``.
    """
    if e < 0:
        raise ValueError(f"Frobenius exponent must be non-negative, got {e}")
    if e == 0:
        return f
    q = characteristic(f.ring) ** e
    scaled = {}
    for monom, coeff in f.items():
        scaled[tuple(check_exponent(a * q) for a in monom)] = coeff
    return f.ring.from_dict(scaled)


def poly_power(f: Poly, n: int) -> Poly:
    """Raises ``f`` to ``n`` through its base-p digits, so large powers stay sparse.

    Args:
        f: Polynomial base.
        n: Non-negative exponent.

    Returns:
        Poly:
        The polynomial ``f**n``.
    """
    if n < 0:
        raise ValueError(f"exponent must be non-negative, got {n}")
    p = characteristic(f.ring)
    result = f.ring.one
    e = 0
    while n:
        n, digit = divmod(n, p)
        if digit:
            result = result * frobenius_power(f**digit, e)
        e += 1
    return result


def frob_decompose(f: Poly, e: int) -> Dict[Monomial, Poly]:
    """Writes ``f`` as ``sum(r_j**(p**e) * x**j)`` with every ``j`` below ``p**e`` componentwise.

    Args:
        f: Polynomial to decompose.
        e: Frobenius exponent, at least one.

    Returns:
        Dict[Monomial, Poly]:
        Non-zero components ``r_j`` keyed by the residue exponent ``j``, sorted by ``j``.
    """
    if e < 1:
        raise ValueError(f"decomposition needs e >= 1, got {e}")
    q = characteristic(f.ring) ** e
    buckets: Dict[Monomial, Dict[Monomial, object]] = {}
    for monom, coeff in f.items():
        residue = tuple(a % q for a in monom)
        root = tuple(a // q for a in monom)
        buckets.setdefault(residue, {})[root] = coeff
    return {residue: f.ring.from_dict(terms) for residue, terms in sorted(buckets.items())}


def recompose(components: Mapping[Monomial, Poly], e: int) -> Poly:
    """Inverse of :func:`frob_decompose`."""
    polys = list(components.values())
    if not polys:
        raise ValueError("cannot recompose an empty decomposition without a ring")
    ring = polys[0].ring
    total = ring.zero
    for residue, root in components.items():
        total += frobenius_power(root, e) * monomial(ring, residue)
    return total


# polynomial string grammar


def natural():
    return _(r"\d+")


def variable():
    return _(r"[A-Za-z_][A-Za-z0-9_]*")


def sign():
    return _(r"[+-]")


def factor():
    return variable, Maybe("^", natural)


def factors():
    return factor, ZeroOrMore("*", factor)


def term():
    return [(natural, "*", factors), factors, natural]


def polynomial():
    return Maybe(sign), term, ZeroOrMore(sign, term), EOF


_PARSER = ParserPython(polynomial, skipws=True)
_PARSER_LOCK = threading.Lock()


def _terminals(node) -> Iterator[Terminal]:
    """Yields the leaves of a parse tree from left to right."""
    if isinstance(node, Terminal):
        yield node
        return
    for child in node:
        yield from _terminals(child)


def parse_poly(text: str, ring: PolyRing) -> Poly:
    """Parses the polynomial string grammar into a canonical polynomial.

    Args:
        text: Polynomial string such as ``"x^2*y^3 + 2*x"``.
        ring: Ring whose variables may appear in ``text``.

    Returns:
        Poly:
        Polynomial with coefficients reduced mod p.
    """
    try:
        with _PARSER_LOCK:
            tree = _PARSER.parse(text)
    except NoMatch as error:
        raise PolyParseError(text, error.position, "malformed polynomial") from None

    names = variable_names(ring)
    slots = {name: i for i, name in enumerate(names)}
    terms: Dict[Monomial, int] = {}
    sign_of_term, coeff, exponents = 1, 1, [0] * len(names)
    last_variable: Optional[int] = None
    after_caret = False

    def close_term() -> None:
        monom = tuple(exponents)
        terms[monom] = terms.get(monom, 0) + sign_of_term * coeff

    started = False
    for leaf in _terminals(tree):
        if leaf.rule_name == "EOF":
            break
        if leaf.rule_name == "sign":
            if started:
                close_term()
            sign_of_term, coeff, exponents = (-1 if leaf.value == "-" else 1), 1, [0] * len(names)
            started = False
        elif leaf.rule_name == "natural":
            value = int(leaf.value)
            if after_caret:
                exponents[last_variable] = check_exponent(exponents[last_variable] + value - 1)
                after_caret = False
            else:
                coeff = value
            started = True
        elif leaf.rule_name == "variable":
            if leaf.value not in slots:
                raise UndeclaredVariable(text, leaf.position, leaf.value, names)
            last_variable = slots[leaf.value]
            exponents[last_variable] = check_exponent(exponents[last_variable] + 1)
            started = True
        elif leaf.value == "^":
            after_caret = True
    close_term()
    return from_terms(ring, terms)


def format_poly(f: Poly) -> str:
    """Prints ``f`` in the grammar accepted by :func:`parse_poly`, terms in decreasing order."""
    if not f:
        return "0"
    names = variable_names(f.ring)
    parts = []
    for monom, coeff in sorted(coefficients(f).items(), key=lambda item: f.ring.order(item[0]), reverse=True):
        factors = [name if a == 1 else f"{name}^{a}" for name, a in zip(names, monom) if a]
        if not factors:
            parts.append(str(coeff))
        elif coeff == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{coeff}*" + "*".join(factors))
    return " + ".join(parts)


# exact linear algebra over GF(p)


def nullspace_mod_p(rows: Sequence[Sequence[int]], n_columns: int, p: int) -> List[List[int]]:
    """Returns a basis of the right nullspace of an integer matrix read mod p.

    Args:
        rows: Matrix rows, each of length ``n_columns``.
        n_columns: Number of unknowns.
        p: Prime modulus.

    Returns:
        List[List[int]]:
        Basis vectors with entries in ``0..p-1``.
    """
    if not n_columns:
        return []
    if not rows:
        return [[int(i == j) for j in range(n_columns)] for i in range(n_columns)]
    domain = GF(p, symmetric=False)
    matrix = DomainMatrix([[domain(value % p) for value in row] for row in rows], (len(rows), n_columns), domain)
    basis = matrix.nullspace()
    return [[int(value) % p for value in vector] for vector in basis.to_Matrix().tolist()]


def solve_mod_p(rows: Sequence[Sequence[int]], rhs: Sequence[int], n_columns: int, p: int) -> Optional[List[int]]:
    """Solves ``A x = b`` mod p, returning ``None`` when the system is inconsistent."""
    augmented = [list(row) + [-value % p] for row, value in zip(rows, rhs)]
    for vector in nullspace_mod_p(augmented, n_columns + 1, p):
        if last := vector[-1] % p:
            inverse = pow(last, -1, p)
            return [value * inverse % p for value in vector[:-1]]
    return None


def monomials_up_to(n_vars: int, bound: int) -> Iterator[Monomial]:
    """Yields every exponent vector with all entries at most ``bound``."""
    if bound < 0:
        return
    if n_vars == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in monomials_up_to(n_vars - 1, bound):
            yield (head,) + tail


def monomials_of_degree_at_most(n_vars: int, degree: int) -> Iterator[Monomial]:
    """Yields every exponent vector of total degree at most ``degree``."""
    if degree < 0:
        return
    if n_vars == 0:
        yield ()
        return
    for head in range(degree + 1):
        for tail in monomials_of_degree_at_most(n_vars - 1, degree - head):
            yield (head,) + tail


def solve_cofactors(f: Poly, gens: Sequence[Poly], degree: int) -> Optional[List[Poly]]:
    """Looks for cofactors ``h_i`` of total degree at most ``degree`` with ``sum(h_i * g_i) == f``.

    Args:
        f: Target polynomial.
        gens: Generators to combine.
        degree: Total degree bound on every cofactor.

    Returns:
        Optional[List[Poly]]:
        One cofactor per generator, or ``None`` when no combination within the bound exists.
    """
    ring = f.ring
    p = characteristic(ring)
    shifts = list(monomials_of_degree_at_most(ring.ngens, degree))
    columns = [(index, shift) for index, generator in enumerate(gens) if generator for shift in shifts]
    products = [coefficients(gens[index].mul_monom(shift)) for index, shift in columns]
    target = coefficients(f)
    support = sorted(set(target).union(*products), key=ring.order, reverse=True)
    rows = [[product.get(monom, 0) for product in products] for monom in support]
    rhs = [target.get(monom, 0) for monom in support]
    if not columns:
        return [ring.zero for _ in gens] if not f else None
    solution = solve_mod_p(rows, rhs, len(columns), p)
    if solution is None:
        return None
    cofactors: List[Dict[Monomial, int]] = [{} for _ in gens]
    for (index, shift), value in zip(columns, solution):
        if value:
            cofactors[index][shift] = value
    return [from_terms(ring, terms) for terms in cofactors]
