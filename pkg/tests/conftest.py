import pytest
from hypothesis import HealthCheck, settings

from normtrace.gf import make_field

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SMALL_Q = (2, 3, 4, 5, 7, 8, 9)


@pytest.fixture(params=SMALL_Q, ids=lambda q: f"q{q}")
def field(request):
    return make_field(request.param)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS, line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(line(n))
