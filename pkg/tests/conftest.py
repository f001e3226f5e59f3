import math
import os

import pytest
from hypothesis import HealthCheck, settings

# Derandomized so that a green run stays green.
settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow], max_examples=100
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

XI_MAX_REGIONS = math.pi / 4
XI_MAX = math.pi / 3


@pytest.fixture(params=["numba", "numpy"])
def backend_name(request):
    from dragoncurve.intersect import _numba_kernels

    if request.param == "numba" and _numba_kernels is None:
        pytest.skip("numba unavailable")
    return request.param


def pytest_configure(config):
    config._criteria = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    failed = call.excinfo is not None
    item.config._criteria[n] = (title, "FAIL" if failed else "PASS", detail)


def pytest_terminal_summary(terminalreporter, config):
    crit = getattr(config, "_criteria", {})
    if not crit:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(crit):
        title, verdict, detail = crit[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title}" + (f"  [{detail}]" if detail else ""))
