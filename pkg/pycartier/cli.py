"""Command line entry point: ``cartier <task> --config <file>``.

The report goes to stdout, logs and the optional progress bar go to stderr, so identical configs
always print byte-identical reports.

>>> Runner

"""

import argparse
import logging
import sys
import time
from dataclasses import replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

from alive_progress import alive_bar

from pycartier.cartier import CartierAlgebra
from pycartier.config import ORACLES, TASKS, JobConfig, load_config
from pycartier.exceptions import (
    CartierError,
    ConfigError,
    DescentError,
    ExponentOverflow,
    InvalidRing,
    IterationCapExceeded,
    MissingMinimalPrimes,
    MonotonicityViolation,
    NoTestElement,
    NotFpure,
    NotMonomial,
    PolyParseError,
    WordLimitExceeded,
)
from pycartier.fpure import fpure_witness, is_fpure, underline
from pycartier.ideals import Ideal, RingCtx
from pycartier.jumping import FptReport, JumpReport, fpt_search, grid, jumps_in_range
from pycartier.logger import setup_logger
from pycartier.metadata import ReportHeader
from pycartier.oracles import bruteforce_closed_ideals, monomial_tau, nu_interval, nu_value
from pycartier.polyring import format_poly
from pycartier.progress import SweepProgress
from pycartier.settings import Settings, load_settings
from pycartier.testideal import TauResult, skoda_check, tau, tau_nonreduced
from pycartier.utils import convert_seconds, format_rational
from pycartier.version import version

Sweep = TypeVar("Sweep", JumpReport, FptReport)

EXIT_CODES: Tuple[Tuple[Tuple[type, ...], int], ...] = (
    ((NoTestElement,), 4),
    ((MonotonicityViolation,), 1),
    ((ExponentOverflow, WordLimitExceeded, IterationCapExceeded), 3),
    ((PolyParseError, InvalidRing, NotMonomial, DescentError, ConfigError, MissingMinimalPrimes), 2),
)


def exit_code(error: CartierError) -> int:
    """Exit status for a library error, ``1`` for anything unexpected."""
    for kinds, code in EXIT_CODES:
        if isinstance(error, kinds):
            return code
    return 1


def yes_no(flag: bool) -> str:
    """Renders a flag for the report body."""
    return "yes" if flag else "no"


class Runner:
    """Runs a single job and renders its report.

    >>> Runner

    """

    def __init__(
        self,
        config_path: str,
        task: str,
        oracle: str = None,
        e_cap: int = None,
        resolution: int = None,
        word_limit: int = None,
        progress: bool = False,
        env_file: str = None,
        logger: logging.Logger = None,
    ):
        """Initiates the runner.

        Args:
            config_path: TOML job file.
            task: Task to run, must agree with ``[task].name`` when that is set.
            oracle: Oracle kind for the ``oracle`` task.
            e_cap: Degree cap override.
            resolution: Grid exponent override.
            word_limit: Word limit override.
            progress: Shows a progress bar on stderr during sweeps.
            env_file: Dotenv file with engine defaults.
            logger: Bring your own logger.
        """
        self.config_path = config_path
        self.task = task
        self.oracle = oracle
        self.overrides = dict(e_cap=e_cap, resolution=resolution, word_limit=word_limit)
        self.progress = progress
        self.env_file = env_file
        self.logger = logger or logging.getLogger(__name__)
        self.alive_bar_kwargs = dict(
            title="Sweep", bar="smooth", spinner=None, enrich_print=False, file=sys.stderr, disable=not progress
        )

    def _prepare(self) -> Tuple[JobConfig, Settings]:
        job = load_config(self.config_path).with_overrides(**self.overrides)
        if job.task.name and job.task.name != self.task:
            raise ConfigError(f"config declares task {job.task.name!r} but {self.task!r} was requested")
        settings = load_settings(self.env_file, self.logger)
        settings = replace(
            settings,
            e_cap=job.task.e_cap or settings.e_cap,
            word_limit=job.task.word_limit or settings.word_limit,
        )
        return job, settings

    def _header(self, job: JobConfig, settings: Settings, ctx: RingCtx, **extra) -> ReportHeader:
        return ReportHeader(
            version=version,
            task=self.task if self.task != "oracle" else f"oracle {self.oracle}",
            p=job.ring.p,
            ring=repr(ctx),
            e_cap=settings.e_cap,
            word_limit=settings.word_limit,
            **extra,
        )

    @staticmethod
    def _algebra(job: JobConfig, ctx: RingCtx) -> CartierAlgebra:
        algebra = job.algebra(ctx)
        if job.pair.a and job.pair.t is not None:
            return algebra.twisted(job.pair_ideal(ctx), job.pair.t)
        return algebra

    @staticmethod
    def _tau_header(result: TauResult) -> Dict[str, str]:
        return dict(
            test_element=format_poly(result.test_element.c),
            checks=result.test_element.verified.summary(),
            certified=yes_no(result.fpure_certified),
        )

    @staticmethod
    def _sweep_header(report: Union[JumpReport, FptReport]) -> Dict[str, str]:
        elements, checks = report.test_elements()
        return dict(test_element=elements or None, checks=checks or None, certified=yes_no(report.certified))

    def underline_task(self, job: JobConfig, settings: Settings, ctx: RingCtx) -> Tuple[ReportHeader, List[str]]:
        """Maximal F-pure submodule of the ring and the chain leading to it."""
        report = underline(self._algebra(job, ctx), ctx.unit(), settings.e_cap, settings=settings)
        nilpotent = f"order {report.nilpotency_order}" if report.nilpotency_order is not None else "no"
        body = [
            f"underline = {report.underline}",
            f"stable after: {report.stable_at}",
            f"F-pure: {yes_no(report.is_fpure)}",
            f"nilpotent: {nilpotent}",
            f"certified: {yes_no(report.certified)}",
        ]
        return self._header(job, settings, ctx), body

    def fpure_task(self, job: JobConfig, settings: Settings, ctx: RingCtx) -> Tuple[ReportHeader, List[str]]:
        """F-purity of the ring with a witness operator."""
        algebra = self._algebra(job, ctx)
        if not is_fpure(algebra, ctx.unit(), settings.e_cap, settings):
            return self._header(job, settings, ctx), ["F-pure: no"]
        witness = fpure_witness(algebra, settings.e_cap, settings)
        found = str(witness) if witness else f"none up to e={settings.e_cap}"
        return self._header(job, settings, ctx), [f"F-pure: yes; witness: {found}"]

    def tau_task(self, job: JobConfig, settings: Settings, ctx: RingCtx) -> Tuple[ReportHeader, List[str]]:
        """Test ideal of a reduced ring."""
        result = tau(
            self._algebra(job, ctx),
            c=job.task.c,
            minimal_primes=job.minimal_prime_ideals(ctx),
            domain=job.ring.domain,
            e_cap=settings.e_cap,
            settings=settings,
        )
        return self._tau_report(job, settings, ctx, result)

    def tau_nonreduced_task(
        self, job: JobConfig, settings: Settings, ctx: RingCtx
    ) -> Tuple[ReportHeader, List[str]]:
        """Test ideal of a non-reduced quotient through its reduction."""
        result = tau_nonreduced(
            self._algebra(job, ctx),
            radical=job.ring.radical,
            c=job.task.c,
            minimal_primes=job.minimal_prime_ideals(ctx),
            e_cap=settings.e_cap,
            settings=settings,
        )
        return self._tau_report(job, settings, ctx, result)

    def _tau_report(
        self, job: JobConfig, settings: Settings, ctx: RingCtx, result: TauResult
    ) -> Tuple[ReportHeader, List[str]]:
        body = [f"tau = {result.tau}", f"underline = {result.underline}"]
        return self._header(job, settings, ctx, **self._tau_header(result)), body

    def _sweep(self, run: Callable[[Optional[SweepProgress]], Sweep], size: int) -> Sweep:
        with alive_bar(None, **self.alive_bar_kwargs) as bar:
            callback = SweepProgress(size, bar) if self.progress else None
            return run(callback)

    def jumps_task(self, job: JobConfig, settings: Settings, ctx: RingCtx) -> Tuple[ReportHeader, List[str]]:
        """Constancy intervals of the twisted test ideal on ``[0, T]``."""
        if job.task.T is None:
            raise ConfigError("task.T is required for jumps")
        ideal = job.pair_ideal(ctx)
        options = dict(minimal_primes=job.minimal_prime_ideals(ctx), domain=job.ring.domain)

        def run(callback: Optional[SweepProgress]) -> JumpReport:
            return jumps_in_range(
                job.algebra(ctx),
                ctx.unit(),
                ideal,
                job.task.T,
                job.task.resolution,
                settings.e_cap,
                settings,
                callback,
                **options,
            )

        report = self._sweep(run, len(grid(job.task.T, ctx.p, job.task.resolution)))
        for (start, end, _), flagged in zip(report.intervals, report.unresolved):
            if flagged:
                self.logger.warning("interval [%s, %s] is shorter than two grid cells", start, end)
        header = self._header(job, settings, ctx, resolution=job.task.resolution, **self._sweep_header(report))
        return header, report.lines()

    def fpt_task(self, job: JobConfig, settings: Settings, ctx: RingCtx) -> Tuple[ReportHeader, List[str]]:
        """F-pure threshold of the pair ideal."""
        ideal = job.pair_ideal(ctx)
        T = job.task.T if job.task.T is not None else Fraction(max(1, len(ideal.elements())))
        options = dict(minimal_primes=job.minimal_prime_ideals(ctx), domain=job.ring.domain)

        def run(callback: Optional[SweepProgress]) -> FptReport:
            return fpt_search(
                job.algebra(ctx), ideal, job.task.resolution, T, settings.e_cap, settings, callback, **options
            )

        try:
            report = self._sweep(run, len(grid(T, ctx.p, job.task.resolution)))
        except NotFpure as error:
            return self._header(job, settings, ctx, resolution=job.task.resolution), [f"fpt: undefined; {error}"]
        header = self._header(job, settings, ctx, resolution=job.task.resolution, **self._sweep_header(report))
        if report.value is None:
            return header, [f"fpt > {format_rational(T)}"]
        return header, [f"fpt = {format_rational(report.value)}", f"resolution: {format_rational(report.step)}"]

    def skoda_task(self, job: JobConfig, settings: Settings, ctx: RingCtx) -> Tuple[ReportHeader, List[str]]:
        """Compares ``a * tau(a^(t-1))`` with ``tau(a^t)``."""
        if job.pair.t is None:
            raise ConfigError("pair.t is required for skoda")
        report = skoda_check(job.algebra(ctx), job.pair_ideal(ctx), job.pair.t, settings.e_cap, settings)
        body = [
            f"lhs = {report.lhs}",
            f"rhs = {report.rhs}",
            f"containment: {yes_no(report.containment)}",
            f"equality: {yes_no(report.equality)}",
            f"equality expected: {yes_no(report.equality_expected)}",
        ]
        return self._header(job, settings, ctx), body

    def oracle_task(self, job: JobConfig, settings: Settings, ctx: RingCtx) -> Tuple[ReportHeader, List[str]]:
        """Independent oracles: ν-invariants, monomial test ideals and one variable closed ideals."""
        header = self._header(job, settings, ctx)
        if self.oracle == "nu":
            if job.task.f is None:
                raise ConfigError("task.f is required for the nu oracle")
            f = ctx.coerce(job.task.f)
            low, high = nu_interval(f, job.task.e)
            return header, [
                f"nu = {nu_value(f, job.task.e)}",
                f"fpt in ({format_rational(low)}, {format_rational(high)}]",
            ]
        if self.oracle == "monomial-tau":
            if job.pair.t is None:
                raise ConfigError("pair.t is required for the monomial-tau oracle")
            gens = monomial_tau(job.pair_ideal(ctx).elements(), job.pair.t)
            return header, [f"tau = {Ideal(ctx, gens)}"]
        if self.oracle == "closed-ideals":
            pairs = [(e, ctx.coerce(f)) for e, f in job.generators]
            closed = bruteforce_closed_ideals(pairs, job.task.bound)
            return header, [f"closed: {', '.join(str(Ideal(ctx, [g])) for g in closed)}"]
        raise ConfigError(f"oracle must be one of {', '.join(ORACLES)}, got {self.oracle!r}")

    def run(self) -> Tuple[str, int]:
        """Runs the job.

        Returns:
            Tuple[str, int]:
            Report text and exit status.
        """
        start = time.time()
        try:
            job, settings = self._prepare()
            ctx = job.context()
            dispatch = {
                "underline": self.underline_task,
                "fpure": self.fpure_task,
                "tau": self.tau_task,
                "tau-nonreduced": self.tau_nonreduced_task,
                "jumps": self.jumps_task,
                "fpt": self.fpt_task,
                "skoda": self.skoda_task,
                "oracle": self.oracle_task,
            }
            self.logger.info("running %s on %s", self.task, ctx)
            header, body = dispatch[self.task](job, settings, ctx)
        except CartierError as error:
            self.logger.error("%s failed: %s", self.task, error)
            return f"error: {error}\n", exit_code(error)
        except Exception as error:
            self.logger.exception("internal error")
            return f"internal error: {error}\n", 1
        self.logger.info("%s finished in %s", self.task, convert_seconds(time.time() - start))
        return "\n".join(header.lines() + body) + "\n", 0


def run(config_path: str, task: str, oracle: str = None, **options) -> Tuple[str, int]:
    """Runs one job, returning its report text and exit status."""
    return Runner(config_path, task, oracle, **options).run()


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the ``cartier`` command."""
    parser = argparse.ArgumentParser(prog="cartier", description="Cartier algebras, test ideals and F-thresholds.")
    parser.add_argument("task", choices=TASKS, help="task to run")
    parser.add_argument("oracle", nargs="?", choices=ORACLES, help="oracle kind, only for the oracle task")
    parser.add_argument("--config", required=True, help="TOML job file")
    parser.add_argument("--e-cap", type=int, default=None, help="degree cap for twisted algebras")
    parser.add_argument("--resolution", type=int, default=None, help="grid exponent E, step 1/(p^E - 1)")
    parser.add_argument("--word-limit", type=int, default=None, help="largest number of operator words")
    parser.add_argument("--progress", action="store_true", help="progress bar on stderr during sweeps")
    parser.add_argument("--env-file", default=None, help="dotenv file with engine defaults")
    parser.add_argument("--version", action="version", version=f"%(prog)s {version}")
    return parser


def main(argv: Sequence[str] = None) -> int:
    """Console script entry point."""
    args = build_parser().parse_args(argv)
    if args.task == "oracle" and args.oracle is None:
        print("error: the oracle task needs one of " + ", ".join(ORACLES), file=sys.stderr)
        return 2
    try:
        settings = load_settings(args.env_file)
    except ConfigError as error:
        print(f"error: {error}", file=sys.stderr)
        return exit_code(error)
    setup_logger(settings.log_handler, settings.log_level)
    text, code = run(
        args.config,
        args.task,
        args.oracle,
        e_cap=args.e_cap,
        resolution=args.resolution,
        word_limit=args.word_limit,
        progress=args.progress,
        env_file=args.env_file,
    )
    (sys.stdout if code == 0 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
