import pytest
from hypothesis import HealthCheck, settings

from hvw22 import make_charges

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def cc():
    return make_charges(1, 1)


@pytest.fixture(params=[("1", "1"), ("1/2", "2/3"), ("-3", "5/7")], ids=["c1", "c2", "c3"])
def charges(request):
    return make_charges(*request.param)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
