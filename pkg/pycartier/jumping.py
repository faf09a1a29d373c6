"""Jumping numbers and F-pure thresholds of twisted test ideals ``tau(R, C, a^t)``.

Exponents are exact rationals. A sweep of ``[0, T]`` runs on the grid of step ``1 / (p^E - 1)`` and
locates every change of ``tau`` by bisection, each jump being reported at the first grid point that
shows the new ideal.

>>> JumpReport

"""

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pycartier.cartier import CartierAlgebra, twist_degree_floor
from pycartier.exceptions import MonotonicityViolation, NotFpure
from pycartier.fpure import is_fpure
from pycartier.ideals import Ideal
from pycartier.polyring import format_poly
from pycartier.settings import DEFAULT_SETTINGS, Settings
from pycartier.testideal import TauResult, tau
from pycartier.utils import format_rational

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[Fraction, Ideal], None]


def minimal_degree(t: Fraction, p: int, resolution: int) -> int:
    """Degree a truncated twist at ``t`` must reach: the resolution, raised for large denominators."""
    return max(resolution, twist_degree_floor(Fraction(t), p))


def grid(T: Fraction, p: int, resolution: int) -> List[Fraction]:
    """Points ``k / (p^E - 1)`` of ``[0, T]``, with ``T`` appended when it is off the grid."""
    step = Fraction(1, p**resolution - 1)
    points = [k * step for k in range(math.floor(Fraction(T) / step) + 1)]
    if points[-1] != T:
        points.append(Fraction(T))
    return points


def tau_t_result(
    algebra: CartierAlgebra,
    module: Ideal,
    ideal: Ideal,
    t: Fraction,
    resolution: int = 1,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
    **options,
) -> TauResult:
    """Test ideal of ``M`` under the algebra twisted by ``a^t``, with its test element and certificate.

    Args:
        algebra: Untwisted algebra.
        module: C-submodule ``M``.
        ideal: The ideal ``a``.
        t: Non-negative exponent.
        resolution: Grid exponent ``E``, the smallest degree the truncated twist must reach.
        e_cap: Degree cap for the twisted computation.
        settings: Engine settings.
        options: Forwarded to ``tau``, e.g. ``minimal_primes`` or ``domain``.

    Returns:
        TauResult:
        The test ideal ``tau(M, C, a^t)`` and how it was obtained.
    """
    t = Fraction(t)
    base = algebra.untwisted()
    if t == 0 or ideal.is_unit():
        return tau(base, module, e_cap=e_cap, settings=settings, **options)
    return tau(
        base.twisted(ideal, t),
        module,
        e_cap=e_cap,
        e_min=minimal_degree(t, algebra.ctx.p, resolution),
        settings=settings,
        **options,
    )


def tau_t(
    algebra: CartierAlgebra,
    module: Ideal,
    ideal: Ideal,
    t: Fraction,
    resolution: int = 1,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
    **options,
) -> Ideal:
    """Test ideal ``tau(M, C, a^t)``, see ``tau_t_result``."""
    return tau_t_result(algebra, module, ideal, t, resolution, e_cap, settings, **options).tau


class TauCurve:
    """Memoised ``t -> tau(M, C, a^t)``, safe to evaluate from several threads.

    >>> TauCurve

    """

    def __init__(
        self,
        algebra: CartierAlgebra,
        module: Ideal,
        ideal: Ideal,
        resolution: int = 1,
        e_cap: int = None,
        settings: Settings = DEFAULT_SETTINGS,
        progress: ProgressCallback = None,
        **options,
    ):
        """Initializes the curve.

        Args:
            algebra: Untwisted algebra.
            module: C-submodule ``M``.
            ideal: The ideal ``a``.
            resolution: Grid exponent ``E``.
            e_cap: Degree cap for the twisted computations.
            settings: Engine settings.
            progress: Callback invoked after every fresh evaluation.
            options: Forwarded to ``tau``.
        """
        self.algebra = algebra
        self.module = module
        self.ideal = ideal
        self.resolution = resolution
        self.e_cap = e_cap
        self.settings = settings
        self.progress = progress
        self.options = options
        self._cache: Dict[Fraction, TauResult] = {}
        self._lock = threading.Lock()

    def __call__(self, t: Fraction) -> Ideal:
        return self.result(t).tau

    def result(self, t: Fraction) -> TauResult:
        """Test ideal at ``t`` with its test element and certificate, computed once."""
        t = Fraction(t)
        with self._lock:
            if t in self._cache:
                return self._cache[t]
        value = tau_t_result(
            self.algebra,
            self.module,
            self.ideal,
            t,
            self.resolution,
            self.e_cap,
            self.settings,
            **self.options,
        )
        logger.debug("tau at t=%s is %s", t, value.tau)
        with self._lock:
            self._cache[t] = value
        if self.progress:
            self.progress(t, value.tau)
        return value

    def evaluate_many(self, points: Sequence[Fraction]) -> List[Ideal]:
        """Evaluates several exponents, concurrently when the settings allow more than one worker."""
        if self.settings.max_workers <= 1 or len(points) <= 1:
            return [self(t) for t in points]
        results: Dict[int, Ideal] = {}
        with ThreadPoolExecutor(max_workers=self.settings.max_workers) as executor:
            futures = {executor.submit(self, t): index for index, t in enumerate(points)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
        return [results[index] for index in range(len(points))]

    @property
    def evaluated(self) -> List[Tuple[Fraction, Ideal]]:
        """Every exponent evaluated so far, in increasing order."""
        return [(t, result.tau) for t, result in self.results]

    @property
    def results(self) -> List[Tuple[Fraction, TauResult]]:
        """Full results of every evaluation so far, in increasing order of the exponent."""
        with self._lock:
            return sorted(self._cache.items(), key=lambda item: item[0])


@dataclass
class JumpReport:
    """Constancy intervals of ``t -> tau`` on ``[0, T]``.

    ``ideals[i]`` holds on ``[jumps[i - 1], jumps[i])``, starting at ``0`` and ending at ``T``.

    >>> JumpReport

    """

    jumps: List[Fraction]
    ideals: List[Ideal]
    T: Fraction
    step: Fraction
    unresolved: List[bool] = field(default_factory=list)
    evaluations: List[Tuple[Fraction, TauResult]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        """``True`` when every evaluation behind the report was certified."""
        return all(result.fpure_certified for _, result in self.evaluations)

    def test_elements(self) -> Tuple[str, str]:
        """Distinct test elements and check summaries behind the report, see ``summarize``."""
        return summarize(self.evaluations)

    @property
    def intervals(self) -> List[Tuple[Fraction, Fraction, Ideal]]:
        """``(start, end, tau)`` for each constancy interval."""
        bounds = [Fraction(0)] + self.jumps + [self.T]
        return [(bounds[i], bounds[i + 1], self.ideals[i]) for i in range(len(self.ideals))]

    def lines(self) -> List[str]:
        """One ``[a, b) -> tau`` line per interval, the last one closed at ``T``."""
        rendered = []
        intervals = self.intervals
        for index, (start, end, ideal) in enumerate(intervals):
            closing = "]" if index == len(intervals) - 1 else ")"
            line = f"[{format_rational(start)}, {format_rational(end)}{closing} -> {ideal}"
            if self.unresolved and self.unresolved[index]:
                line += "  # unresolved"
            rendered.append(line)
        return rendered


def summarize(evaluations: Sequence[Tuple[Fraction, TauResult]]) -> Tuple[str, str]:
    """Distinct test elements of a sweep and the distinct outcomes of their checks.

    Args:
        evaluations: Exponents with their results.

    Returns:
        Tuple[str, str]:
        Test elements joined by ``, `` and check summaries joined by ``; ``, in order of first use.
    """
    elements, checks = [], []
    for _, result in evaluations:
        element = format_poly(result.test_element.c)
        summary = result.test_element.verified.summary()
        if element not in elements:
            elements.append(element)
        if summary not in checks:
            checks.append(summary)
    return ", ".join(elements), "; ".join(checks)


def _check_monotone(points: Sequence[Fraction], values: Dict[int, Ideal], lower: int, upper: int) -> None:
    if not values[upper] <= values[lower]:
        raise MonotonicityViolation(format_rational(points[lower]), format_rational(points[upper]))


def jumps_in_range(
    algebra: CartierAlgebra,
    module: Ideal,
    ideal: Ideal,
    T: Fraction,
    resolution: int = 1,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
    progress: ProgressCallback = None,
    **options,
) -> JumpReport:
    """Locates every jump of ``t -> tau(M, C, a^t)`` on ``[0, T]`` up to the grid resolution.

    Args:
        algebra: Untwisted algebra.
        module: C-submodule ``M``.
        ideal: The ideal ``a``.
        T: Right end of the range.
        resolution: Grid exponent ``E``; the grid step is ``1 / (p^E - 1)``.
        e_cap: Degree cap for the twisted computations.
        settings: Engine settings.
        progress: Callback invoked after every evaluation.
        options: Forwarded to ``tau``.

    Returns:
        JumpReport:
        Jumps and the ideal on each constancy interval.
    """
    T = Fraction(T)
    if T < 0:
        raise ValueError(f"range end must be non-negative, got {T}")
    points = grid(T, algebra.ctx.p, resolution)
    step = Fraction(1, algebra.ctx.p**resolution - 1)
    curve = TauCurve(algebra, module, ideal, resolution, e_cap, settings, progress, **options)
    last = len(points) - 1
    values: Dict[int, Ideal] = dict(zip((0, last), curve.evaluate_many([points[0], points[last]])))
    _check_monotone(points, values, 0, last)
    changes: List[int] = []
    pending = [(0, last)] if values[0] != values[last] else []
    while pending:
        midpoints = [(low + high) // 2 for low, high in pending if high - low > 1]
        values.update(zip(midpoints, curve.evaluate_many([points[mid] for mid in midpoints])))
        following = []
        for low, high in pending:
            if high - low == 1:
                changes.append(high)
                continue
            mid = (low + high) // 2
            _check_monotone(points, values, low, mid)
            _check_monotone(points, values, mid, high)
            if values[low] != values[mid]:
                following.append((low, mid))
            if values[mid] != values[high]:
                following.append((mid, high))
        pending = following
    changes.sort()
    jumps = [points[index] for index in changes]
    ideals = [values[0]] + [values[index] for index in changes]
    bounds = [Fraction(0)] + jumps + [T]
    # only intervals between two detected jumps can hide a jump in a single cell
    unresolved = [0 < i < len(ideals) - 1 and bounds[i + 1] - bounds[i] < 2 * step for i in range(len(ideals))]
    logger.info("%d jumps of tau on [0, %s]", len(jumps), T)
    return JumpReport(
        jumps=jumps, ideals=ideals, T=T, step=step, unresolved=unresolved, evaluations=curve.results
    )


@dataclass
class FptReport:
    """Outcome of an F-pure threshold search with the evaluations behind it.

    >>> FptReport

    """

    value: Optional[Fraction]
    T: Fraction
    step: Fraction
    evaluations: List[Tuple[Fraction, TauResult]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        """``True`` when every evaluation behind the search was certified."""
        return all(result.fpure_certified for _, result in self.evaluations)

    def test_elements(self) -> Tuple[str, str]:
        """Distinct test elements and check summaries behind the search, see ``summarize``."""
        return summarize(self.evaluations)


def fpt_search(
    algebra: CartierAlgebra,
    ideal: Ideal,
    resolution: int = 1,
    T: Fraction = None,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
    progress: ProgressCallback = None,
    **options,
) -> FptReport:
    """F-pure threshold: the first exponent at which ``tau(R, C, a^t)`` leaves ``tau(R, C)``.

    Args:
        algebra: Algebra with ``C+ R == R``.
        ideal: The ideal ``a``.
        resolution: Grid exponent ``E``.
        T: Search bound, the number of generators of ``a`` (at least one) by default.
        e_cap: Degree cap for the twisted computations.
        settings: Engine settings.
        progress: Callback invoked after every evaluation.
        options: Forwarded to ``tau``.

    Returns:
        FptReport:
        First grid point showing the new ideal, ``None`` when nothing changes up to ``T``.
    """
    base = algebra.untwisted()
    ring = algebra.ctx.unit()
    if not is_fpure(base, ring, e_cap, settings):
        raise NotFpure(f"{algebra.ctx} is not F-pure under {base}, the threshold is undefined")
    T = Fraction(max(1, len(ideal.elements()))) if T is None else Fraction(T)
    points = grid(T, algebra.ctx.p, resolution)
    step = Fraction(1, algebra.ctx.p**resolution - 1)
    curve = TauCurve(base, ring, ideal, resolution, e_cap, settings, progress, **options)
    start = curve(points[0])
    end = curve(points[-1])
    if end == start:
        logger.info("tau constant on [0, %s], no threshold in range", T)
        return FptReport(value=None, T=T, step=step, evaluations=curve.results)
    low, high = 0, len(points) - 1
    while high - low > 1:
        mid = (low + high) // 2
        value = curve(points[mid])
        if not value <= start:
            raise MonotonicityViolation("0", format_rational(points[mid]))
        if value == start:
            low = mid
        else:
            high = mid
    return FptReport(value=points[high], T=T, step=step, evaluations=curve.results)


def fpt(
    algebra: CartierAlgebra,
    ideal: Ideal,
    resolution: int = 1,
    T: Fraction = None,
    e_cap: int = None,
    settings: Settings = DEFAULT_SETTINGS,
    progress: ProgressCallback = None,
    **options,
) -> Optional[Fraction]:
    """F-pure threshold on the grid of step ``1 / (p^E - 1)``, ``None`` when nothing changes up to ``T``."""
    return fpt_search(algebra, ideal, resolution, T, e_cap, settings, progress, **options).value
