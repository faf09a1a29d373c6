import os
import random

import pytest

from pycartier.cartier import CartierAlgebra
from pycartier.ideals import RingCtx

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
ENGINE_VARIABLES = (
    "ENV_FILE",
    "CARTIER_E_CAP",
    "CARTIER_E_CEILING",
    "CARTIER_WORD_LIMIT",
    "CARTIER_MAX_ITERATIONS",
    "CARTIER_MAX_WORKERS",
    "CARTIER_LOG_LEVEL",
    "CARTIER_LOG_HANDLER",
)


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator so randomized checks are reproducible."""
    return random.Random(20240611)


@pytest.fixture
def line3() -> RingCtx:
    """``F_3[x]``."""
    return RingCtx(3, ["x"])


@pytest.fixture
def plane3() -> RingCtx:
    """``F_3[x, y]``."""
    return RingCtx(3, ["x", "y"])


@pytest.fixture
def plane5() -> RingCtx:
    """``F_5[x, y]``."""
    return RingCtx(5, ["x", "y"])


@pytest.fixture
def cross3() -> RingCtx:
    """``F_3[x, y]/(x*y)``, two crossing lines."""
    return RingCtx(3, ["x", "y"], ["x*y"])


@pytest.fixture
def trace_line3(line3) -> CartierAlgebra:
    """The trace operator on ``F_3[x]``."""
    return CartierAlgebra.from_pairs(line3, [(1, 1)])


@pytest.fixture
def trace_plane3(plane3) -> CartierAlgebra:
    """The trace operator on ``F_3[x, y]``."""
    return CartierAlgebra.from_pairs(plane3, [(1, 1)])


@pytest.fixture
def nonreduced5() -> CartierAlgebra:
    """``F_5[x, y]/(x^2*y)`` with the operator ``(1, x^8*y^4)``."""
    ctx = RingCtx(5, ["x", "y"], ["x^2*y"])
    return CartierAlgebra.from_pairs(ctx, [(1, "x^8*y^4")])


@pytest.fixture
def fixture_path():
    """Resolves a TOML fixture by file name."""

    def resolve(name: str) -> str:
        return os.path.join(FIXTURES, name)

    return resolve


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """Runs in an empty directory with no engine variables set."""
    for key in ENGINE_VARIABLES:
        # set first so teardown also removes values a dotenv file loads during the test
        monkeypatch.setenv(key, "")
        monkeypatch.delenv(key)
    monkeypatch.chdir(tmp_path)
    return tmp_path
