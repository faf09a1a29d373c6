import threading
from fractions import Fraction

from alive_progress import alive_bar

from pycartier.ideals import Ideal


class SweepProgress:
    """Tracks test ideal evaluations of a threshold sweep and updates the alive_bar.

    >>> SweepProgress

    """

    def __init__(self, grid_size: int, bar: alive_bar):
        """Initializes the progress tracker.

        Args:
            grid_size: Number of grid points the sweep may evaluate.
            bar: alive_bar instance to update progress.
        """
        self._grid_size = grid_size
        self._seen_so_far = 0
        self._lock = threading.Lock()
        self._bar = bar

    def __call__(self, t: Fraction, tau: Ideal) -> None:
        """Callback method to update progress.

        Args:
            t: Exponent that was just evaluated.
            tau: Test ideal found at ``t``.
        """
        with self._lock:
            self._seen_so_far += 1
            percent = min(100.0, (self._seen_so_far / self._grid_size) * 100)
            bar_len = 20
            filled = int(bar_len * percent / 100)
            bar_str = "█" * filled + "." * (bar_len - filled)
            self._bar.text(f" || t={t} -> {len(tau.elements())} gens [{bar_str}] {percent:.0f}%")
            self._bar()
