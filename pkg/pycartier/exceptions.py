"""Module to store all the custom exceptions and formatters.

>>> CartierError

"""

from typing import Iterable, Sequence


class CartierError(Exception):
    """Custom error for base exception to the PyCartier module."""


class InvalidRing(CartierError):
    """Custom error for an unusable characteristic or variable list."""


class ConfigError(CartierError):
    """Custom error for an invalid job configuration."""


class MissingMinimalPrimes(CartierError):
    """Custom error for test ideal computations that need minimal primes nobody supplied."""


class NotFpure(CartierError):
    """Custom error for thresholds requested on a pair that is not F-pure."""


def caret(text: str, position: int) -> str:
    """Draws a caret under the offending position of a polynomial string.

    Args:
        text: Text that failed to parse.
        position: Zero based offset of the failure.

    Returns:
        str:
        Two line excerpt with a caret marker.
    """
    return f"\t{text}\n\t{' ' * position}^"


class PolyParseError(CartierError):
    """Custom exception for malformed polynomial strings."""

    def __init__(self, text: str, position: int, reason: str):
        """Initialize an instance of ``PolyParseError`` object inherited from ``CartierError``

        Args:
            text: Polynomial string that was being parsed.
            position: Zero based offset where parsing stopped.
            reason: Short description of what was expected.
        """
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        return f"\n\n\t{self.reason} at position {self.position}\n{caret(self.text, self.position)}\n"


class UndeclaredVariable(PolyParseError):
    """Custom exception for variables missing from the ring declaration."""

    def __init__(self, text: str, position: int, name: str, declared: Sequence[str]):
        """Initialize an instance of ``UndeclaredVariable`` object inherited from ``PolyParseError``

        Args:
            text: Polynomial string that was being parsed.
            position: Zero based offset of the variable.
            name: Variable name found in the text.
            declared: Variables of the ring.
        """
        self.name = name
        self.declared = tuple(declared)
        super().__init__(text, position, f"undeclared variable {name!r} (declared: {', '.join(self.declared)})")


class ExponentOverflow(CartierError):
    """Custom exception for exponents beyond the 32-bit range."""

    def __init__(self, value: int, limit: int):
        """Initialize an instance of ``ExponentOverflow`` object inherited from ``CartierError``

        Args:
            value: Exponent that was produced.
            limit: Largest exponent allowed.
        """
        self.value = value
        self.limit = limit
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        return f"exponent {self.value} exceeds the supported maximum {self.limit}"


class NotMonomial(CartierError):
    """Custom exception for monomial-only routines fed with binomials or worse."""

    def __init__(self, offending: Iterable[str]):
        """Initialize an instance of ``NotMonomial`` object inherited from ``CartierError``

        Args:
            offending: Canonical strings of the generators with two or more terms.
        """
        self.offending = list(offending)
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        return f"expected a monomial ideal, found generators {', '.join(self.offending)}"


class DescentError(CartierError):
    """Custom exception for operators that do not induce a map on the quotient."""

    def __init__(self, operator: str, quotient: Iterable[str]):
        """Initialize an instance of ``DescentError`` object inherited from ``CartierError``

        Args:
            operator: Description of the offending operator.
            quotient: Generators of the quotient ideal.
        """
        self.operator = operator
        self.quotient = list(quotient)
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        return (
            f"\n\n\toperator {self.operator} does not descend to the quotient by ({', '.join(self.quotient)})"
            "\n\tf * I must lie in the bracket power I^[p^e]\n"
        )


class WordLimitExceeded(CartierError):
    """Custom exception for word enumerations that outgrow the configured limit."""

    def __init__(self, count: int, limit: int, degree: int):
        """Initialize an instance of ``WordLimitExceeded`` object inherited from ``CartierError``

        Args:
            count: Number of words reached.
            limit: Configured word limit.
            degree: Degree being enumerated when the limit was hit.
        """
        self.count = count
        self.limit = limit
        self.degree = degree
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        return f"{self.count} words by degree {self.degree} exceed the word limit {self.limit}"


class IterationCapExceeded(CartierError):
    """Custom exception for fixed point loops that did not settle."""

    def __init__(self, what: str, cap: int):
        """Initialize an instance of ``IterationCapExceeded`` object inherited from ``CartierError``

        Args:
            what: Name of the iteration.
            cap: Iteration cap that was hit.
        """
        self.what = what
        self.cap = cap
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        return f"{self.what} did not stabilize within {self.cap} iterations"


class NoTestElement(CartierError):
    """Custom exception for test ideal runs where every candidate failed verification."""

    def __init__(self, candidates: Iterable[str]):
        """Initialize an instance of ``NoTestElement`` object inherited from ``CartierError``

        Args:
            candidates: Canonical strings of the rejected candidates.
        """
        self.candidates = list(candidates)
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        tried = ", ".join(self.candidates) or "none"
        return f"no test element passed verification (tried: {tried})"


class MonotonicityViolation(CartierError):
    """Custom exception for twisted test ideals that grew with the exponent."""

    def __init__(self, lower: str, upper: str):
        """Initialize an instance of ``MonotonicityViolation`` object inherited from ``CartierError``

        Args:
            lower: Smaller exponent, as ``num/den``.
            upper: Larger exponent, as ``num/den``.
        """
        self.lower = lower
        self.upper = upper
        super().__init__(self.format_error_message())

    def format_error_message(self) -> str:
        """Returns the formatter error message as a string."""
        return (
            f"\n\n\ttau at t={self.upper} is not contained in tau at t={self.lower}"
            "\n\traise the degree cap, the truncated twist was not sound\n"
        )
