import pytest

from pycartier.cli import exit_code, main, run
from pycartier.exceptions import (
    ConfigError,
    IterationCapExceeded,
    MonotonicityViolation,
    NoTestElement,
    NotFpure,
    PolyParseError,
)
from pycartier.version import version

HEADER = [f"# pycartier {version}"]


def body(text: str):
    return [line for line in text.splitlines() if not line.startswith("#")]


def execute(fixture_path, clean_env, name, task, oracle=None, **options):
    return run(fixture_path(name), task, oracle, env_file=str(clean_env / "absent.env"), **options)


def test_fpure_report(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "fpure_line.toml", "fpure")
    assert code == 0
    assert text.splitlines() == HEADER + [
        "# task: fpure",
        "# p: 3",
        "# ring: F_3[x]",
        "# e_cap: 4",
        "# word_limit: 256",
        "F-pure: yes; witness: e=1, g=x^2",
    ]


def test_reports_are_reproducible(fixture_path, clean_env):
    first = execute(fixture_path, clean_env, "tau_nonreduced.toml", "tau-nonreduced")
    second = execute(fixture_path, clean_env, "tau_nonreduced.toml", "tau-nonreduced")
    assert first == second


def test_tau_nonreduced_report(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "tau_nonreduced.toml", "tau-nonreduced")
    assert code == 0
    assert body(text) == ["tau = (x^2, x*y)", "underline = (x)"]
    assert "# test element: x + y" in text.splitlines()
    assert "# checks: R°=pass t-independence=pass F-pure=pass generic=pass" in text.splitlines()
    assert "# certified: yes" in text.splitlines()

def test_tau_report(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "crossing_lines.toml", "tau")
    assert code == 0
    assert body(text) == ["tau = (x, y)", "underline = (1)"]


def test_underline_report(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "not_fpure.toml", "underline")
    assert code == 0
    assert body(text) == [
        "underline = (x)",
        "stable after: 1",
        "F-pure: no",
        "nilpotent: no",
        "certified: yes",
    ]


def test_jumps_report(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "fpure_line.toml", "jumps")
    assert code == 0
    lines = text.splitlines()
    assert "# resolution: 1" in lines
    assert "# test element: 1, x" in lines
    assert "# checks: R°=pass t-independence=pass F-pure=pass generic=pass" in lines
    assert "# certified: yes" in lines
    assert body(text) == ["[0, 1) -> (1)", "[1, 2) -> (x)", "[2, 2] -> (x^2)"]


def test_fpt_report(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "fpure_line.toml", "fpt", progress=True)
    assert code == 0
    assert body(text) == ["fpt = 1", "resolution: 1/2"]
    assert "# test element: 1, x" in text.splitlines()
    assert "# certified: yes" in text.splitlines()


def test_fpt_undefined(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "not_fpure.toml", "fpt")
    assert code == 0
    assert body(text)[0].startswith("fpt: undefined; ")


def test_skoda_report(fixture_path, clean_env):
    text, code = execute(fixture_path, clean_env, "plane.toml", "skoda")
    assert code == 0
    assert body(text) == [
        "lhs = (x, y)",
        "rhs = (x, y)",
        "containment: yes",
        "equality: yes",
        "equality expected: yes",
    ]


@pytest.mark.parametrize(
    "name, oracle, expected",
    [
        ("plane.toml", "nu", ["nu = 8", "fpt in (8/9, 1]"]),
        ("plane.toml", "monomial-tau", ["tau = (x, y)"]),
        ("one_variable.toml", "closed-ideals", ["closed: (1), (x), (0)"]),
    ],
)
def test_oracle_reports(fixture_path, clean_env, name, oracle, expected):
    text, code = execute(fixture_path, clean_env, name, "oracle", oracle)
    assert code == 0
    assert f"# task: oracle {oracle}" in text.splitlines()
    assert body(text) == expected


@pytest.mark.parametrize(
    "name, task, options, code",
    [
        ("bad_polynomial.toml", "fpure", {}, 2),
        ("no_descent.toml", "fpure", {}, 2),
        ("tau_nonreduced.toml", "tau", {}, 2),
        ("missing.toml", "fpure", {}, 2),
        ("fpure_line.toml", "fpt", {"word_limit": 1}, 3),
        ("fpure_line.toml", "skoda", {}, 2),
    ],
)
def test_error_exit_codes(fixture_path, clean_env, name, task, options, code):
    text, status = execute(fixture_path, clean_env, name, task, **options)
    assert status == code
    assert text.startswith("error: ")


@pytest.mark.parametrize(
    "error, code",
    [
        (NoTestElement(["x"]), 4),
        (MonotonicityViolation("1", "2"), 1),
        (IterationCapExceeded("C+ ascent", 64), 3),
        (PolyParseError("x^", 2, "malformed polynomial"), 2),
        (ConfigError("bad"), 2),
        (NotFpure("no"), 1),
    ],
)
def test_exit_code_table(error, code):
    assert exit_code(error) == code


def test_main_writes_report_to_stdout(fixture_path, clean_env, capsys):
    code = main(["fpure", "--config", fixture_path("fpure_line.toml"), "--env-file", str(clean_env / "absent.env")])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.splitlines()[-1] == "F-pure: yes; witness: e=1, g=x^2"


def test_main_requires_oracle_kind(fixture_path, clean_env, capsys):
    assert main(["oracle", "--config", fixture_path("plane.toml")]) == 2
    assert "oracle task needs one of" in capsys.readouterr().err


def test_bad_engine_settings_exit_with_config_status(fixture_path, clean_env, capsys):
    env_file = clean_env / "engine.env"
    env_file.write_text("CARTIER_E_CAP=four\n")
    assert main(["fpure", "--config", fixture_path("fpure_line.toml"), "--env-file", str(env_file)]) == 2
    assert "CARTIER_E_CAP must be a positive integer" in capsys.readouterr().err
    text, code = run(fixture_path("fpure_line.toml"), "fpure", env_file=str(env_file))
    assert code == 2
    assert text.startswith("error: ")
