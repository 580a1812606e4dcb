import pytest

from minlen_hydrogen import ModelParams

ALPHAS = (0.5, 1.0, 2.0)
BETAS = (1e-4, 1e-2, 0.1)


@pytest.fixture(params=[(a, b) for a in ALPHAS for b in BETAS], ids=lambda ab: f"a{ab[0]}-b{ab[1]}")
def params(request):
    a, b = request.param
    return ModelParams(a, b)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def _report(criterion: str, passed: bool, measured: float, threshold: float, detail: str = "") -> bool:
        flag = "PASS" if passed else "FAIL"
        line = f"[{flag}] {criterion}: measured={measured:.3e} threshold={threshold:.1e} {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
