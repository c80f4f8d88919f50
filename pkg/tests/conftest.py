import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "mralab",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "mralab"))

import pytest


@pytest.fixture(scope="session")
def acceptance_log(request):
    """criterion number -> one-line verdict, printed in the terminal summary."""
    if not hasattr(request.config, "_mralab_acceptance"):
        request.config._mralab_acceptance = {}
    return request.config._mralab_acceptance


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_mralab_acceptance", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
