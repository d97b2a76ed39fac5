import json

import pytest

from tfspectral.cli import main
from tfspectral.numeric import Precision, working_precision

# Reference decimal strings: y'(0) per method, and (y(x), y'(x)) keyed by x.
LAMBDA_PRE_100 = "-1.58807102261137531271868450942395010945274662"
LAMBDA_POST_200 = "-1.588071022611375312718684509423950109452746621674825616765677"

REFERENCE_PRE = {
    "0.5": ("0.6069863833559799094944460701740221017049", "-0.4894116125745380886470058475611743123609"),
    "3": ("0.1566326732164958413398134404775366125433", "-0.0624571308541209762287048999941581989893"),
    "10": ("0.0243142929886808641901103881732913695553", "-0.0046028818712692545025435118554873081322"),
    "50": ("0.0006322547829849047267797787287302055560", "-0.0000324989020482588146242006692476761611"),
    "200": ("0.0000145018034969457646803986629623432665", "-0.0000002057532316475268926057043855114949"),
    "5000": ("0.0000000011309267063430848076021125559361", "-0.0000000000006753397121638834659796119395"),
}
REFERENCE_POST = {
    "0.5": ("0.6069863833559799094944460701740842378463", "-0.4894116125745380886470058475573462887337"),
    "3": ("0.1566326732164958413398134404779118302783", "-0.0624571308541209762287048999995217973789"),
    "10": ("0.0243142929886808641901103881763049683685", "-0.0046028818712692545025435118515886154232"),
    "50": ("0.0006322547829849047267797787427886658114", "-0.0000324989020482588146242006802396097650"),
    "200": ("0.0000145018034969457646803987687276929118", "-0.0000002057532316475268926056858363001742"),
    "5000": ("0.0000000011309267063430848263855178787850", "-0.0000000000006753397121638835144503744957"),
}


@pytest.fixture
def d50():
    prec = Precision(50)
    with working_precision(prec):
        yield prec


def _solve(tmp_path_factory, name, argv):
    out = tmp_path_factory.mktemp(name) / "solution.json"
    code = main(["solve", *argv, "--out", str(out)])
    with open(out, encoding="utf-8") as fh:
        return code, json.load(fh)


@pytest.fixture(scope="session")
def pre100(tmp_path_factory):
    """Pre-Newton at the golden operating point (N=100, 40 iterations, L=3)."""
    return _solve(tmp_path_factory, "pre100", [
        "--method", "pre", "--n", "100", "--max-iter", "40", "--l", "3",
        "--alpha", "1/2", "--a", "1/2", "--precision-digits", "80",
    ])


@pytest.fixture(scope="session")
def post100(tmp_path_factory):
    """Post-Newton at N=100, iterated to its step tolerance."""
    return _solve(tmp_path_factory, "post100", [
        "--method", "post", "--n", "100", "--max-iter", "120", "--precision-digits", "80",
    ])


@pytest.fixture(scope="session")
def post200(tmp_path_factory):
    """Post-Newton at the golden operating point (N=200, 85 iterations, L=2.828)."""
    return _solve(tmp_path_factory, "post200", [
        "--method", "post", "--n", "200", "--max-iter", "85", "--l", "2.828",
        "--precision-digits", "120",
    ])


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
