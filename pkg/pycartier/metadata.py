from dataclasses import dataclass
from typing import List, Optional


@dataclass
class ReportHeader:
    """Dataclass for the metadata lines printed above every report."""

    version: str
    task: str
    p: int
    ring: str
    e_cap: int
    word_limit: int
    resolution: Optional[int] = None
    test_element: Optional[str] = None
    checks: Optional[str] = None
    certified: Optional[str] = None

    def lines(self) -> List[str]:
        """Header as ``# key: value`` lines, skipping unset values."""
        rendered = [f"# pycartier {self.version}"]
        for key, value in (
            ("task", self.task),
            ("p", self.p),
            ("ring", self.ring),
            ("e_cap", self.e_cap),
            ("word_limit", self.word_limit),
            ("resolution", self.resolution),
            ("test element", self.test_element),
            ("checks", self.checks),
            ("certified", self.certified),
        ):
            if value is not None:
                rendered.append(f"# {key}: {value}")
        return rendered
