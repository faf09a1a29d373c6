"""Job configuration read from a TOML file.

>>> JobConfig

"""

import logging
import tomllib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pycartier.cartier import CartierAlgebra
from pycartier.exceptions import ConfigError
from pycartier.ideals import Ideal, RingCtx
from pycartier.utils import parse_rational

logger = logging.getLogger(__name__)

TASKS = ("underline", "fpure", "tau", "tau-nonreduced", "jumps", "fpt", "skoda", "oracle")
ORACLES = ("nu", "monomial-tau", "closed-ideals")


@dataclass(frozen=True)
class RingConfig:
    """``[ring]`` table.

    >>> RingConfig

    """

    p: int
    variables: Tuple[str, ...]
    quotient: Tuple[str, ...] = ()
    minimal_primes: Tuple[Tuple[str, ...], ...] = ()
    radical: Optional[Tuple[str, ...]] = None
    domain: bool = False


@dataclass(frozen=True)
class PairConfig:
    """``[pair]`` table: the twisting ideal and its exponent.

    >>> PairConfig

    """

    a: Tuple[str, ...] = ()
    t: Optional[Fraction] = None


@dataclass(frozen=True)
class TaskConfig:
    """``[task]`` table.

    >>> TaskConfig

    """

    name: Optional[str] = None
    T: Optional[Fraction] = None
    resolution: int = 1
    e_cap: Optional[int] = None
    word_limit: Optional[int] = None
    c: Optional[str] = None
    e: int = 1
    f: Optional[str] = None
    bound: int = 8


@dataclass(frozen=True)
class JobConfig:
    """Everything one invocation of the command line needs.

    >>> JobConfig

    """

    ring: RingConfig
    generators: Tuple[Tuple[int, str], ...]
    pair: PairConfig = field(default_factory=PairConfig)
    task: TaskConfig = field(default_factory=TaskConfig)

    def context(self) -> RingCtx:
        """The ring ``S`` or ``S/I`` of the job."""
        return RingCtx(self.ring.p, self.ring.variables, self.ring.quotient)

    def algebra(self, ctx: RingCtx = None) -> CartierAlgebra:
        """Untwisted algebra of the configured generators."""
        if not self.generators:
            raise ConfigError("[cartier] needs at least one generator")
        return CartierAlgebra.from_pairs(ctx or self.context(), self.generators)

    def pair_ideal(self, ctx: RingCtx) -> Ideal:
        """The twisting ideal ``a``."""
        if not self.pair.a:
            raise ConfigError("[pair] a is required for this task")
        return Ideal(ctx, self.pair.a)

    def minimal_prime_ideals(self, ctx: RingCtx) -> List[Ideal]:
        """Declared minimal primes, as ideals of the job ring."""
        return [Ideal(ctx, gens) for gens in self.ring.minimal_primes]

    def with_overrides(self, **overrides: Any) -> "JobConfig":
        """Copy with task values replaced, skipping ``None`` values."""
        values = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, task=replace(self.task, **values)) if values else self


def _table(document: Dict[str, Any], name: str, required: bool = False) -> Dict[str, Any]:
    table = document.get(name)
    if table is None:
        if required:
            raise ConfigError(f"missing [{name}] table")
        return {}
    if not isinstance(table, dict):
        raise ConfigError(f"[{name}] must be a table")
    return table


def _integer(
    table: Dict[str, Any], key: str, where: str, default: Optional[int] = None, minimum: int = 0
) -> Optional[int]:
    value = table.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{where}.{key} must be at least {minimum}, got {value}")
    return value


def _strings(value: Any, where: str) -> Tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
        raise ConfigError(f"{where} must be a string or a list of strings, got {value!r}")
    return tuple(value)


def _rational(table: Dict[str, Any], key: str, where: str) -> Optional[Fraction]:
    value = table.get(key)
    if value is None:
        return None
    try:
        rational = parse_rational(value)
    except ValueError as error:
        raise ConfigError(f"{where}.{key}: {error}") from None
    if rational < 0:
        raise ConfigError(f"{where}.{key} must be non-negative, got {rational}")
    return rational


def _ring(document: Dict[str, Any]) -> RingConfig:
    table = _table(document, "ring", required=True)
    p = _integer(table, "p", "ring", minimum=2)
    if p is None:
        raise ConfigError("ring.p is required")
    if "vars" not in table:
        raise ConfigError("ring.vars is required")
    radical = table.get("radical")
    domain = table.get("domain", False)
    if not isinstance(domain, bool):
        raise ConfigError(f"ring.domain must be a boolean, got {domain!r}")
    primes = table.get("minimal_primes", [])
    if not isinstance(primes, list):
        raise ConfigError("ring.minimal_primes must be a list of generator lists")
    return RingConfig(
        p=p,
        variables=_strings(table["vars"], "ring.vars"),
        quotient=_strings(table.get("quotient", []), "ring.quotient"),
        minimal_primes=tuple(_strings(prime, "ring.minimal_primes") for prime in primes),
        radical=None if radical is None else _strings(radical, "ring.radical"),
        domain=domain,
    )


def _generators(document: Dict[str, Any]) -> Tuple[Tuple[int, str], ...]:
    table = _table(document, "cartier")
    entries = table.get("generators", [])
    if not isinstance(entries, list):
        raise ConfigError("cartier.generators must be an array of tables")
    generators = []
    for index, entry in enumerate(entries):
        where = f"cartier.generators[{index}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where} must be a table with keys e and f")
        e = _integer(entry, "e", where, minimum=1)
        f = entry.get("f")
        if e is None or not isinstance(f, str):
            raise ConfigError(f"{where} needs an integer e and a string f")
        generators.append((e, f))
    return tuple(generators)


def _pair(document: Dict[str, Any]) -> PairConfig:
    table = _table(document, "pair")
    a = table.get("a")
    return PairConfig(a=() if a is None else _strings(a, "pair.a"), t=_rational(table, "t", "pair"))


def _task(document: Dict[str, Any]) -> TaskConfig:
    table = _table(document, "task")
    name = table.get("name")
    if name is not None and name not in TASKS:
        raise ConfigError(f"task.name must be one of {', '.join(TASKS)}, got {name!r}")
    c, f = table.get("c"), table.get("f")
    for key, value in (("c", c), ("f", f)):
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"task.{key} must be a polynomial string, got {value!r}")
    return TaskConfig(
        name=name,
        T=_rational(table, "T", "task"),
        resolution=_integer(table, "resolution", "task", default=1, minimum=1),
        e_cap=_integer(table, "e_cap", "task", minimum=1),
        word_limit=_integer(table, "word_limit", "task", minimum=1),
        c=c,
        e=_integer(table, "e", "task", default=1, minimum=1),
        f=f,
        bound=_integer(table, "bound", "task", default=8, minimum=0),
    )


def parse_config(document: Dict[str, Any]) -> JobConfig:
    """Validates a decoded TOML document.

    Args:
        document: Decoded TOML tables.

    Returns:
        JobConfig:
        The validated configuration. Polynomial strings are parsed later, against the declared ring.
    """
    unknown = set(document) - {"ring", "cartier", "pair", "task"}
    if unknown:
        raise ConfigError(f"unknown tables: {', '.join(sorted(unknown))}")
    return JobConfig(ring=_ring(document), generators=_generators(document), pair=_pair(document), task=_task(document))


def load_config(filepath: str) -> JobConfig:
    """Reads and validates a TOML job file.

    Args:
        filepath: Path to the TOML file.

    Returns:
        JobConfig:
        The validated configuration.
    """
    try:
        with open(filepath, "rb") as file:
            document = tomllib.load(file)
    except OSError as error:
        raise ConfigError(f"cannot read {filepath}: {error.strerror}") from None
    except tomllib.TOMLDecodeError as error:
        raise ConfigError(f"{filepath} is not valid TOML: {error}") from None
    logger.debug("loaded job config %s", filepath)
    return parse_config(document)

