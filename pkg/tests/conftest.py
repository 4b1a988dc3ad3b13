import os

import pytest
from hypothesis import HealthCheck, settings

from qweyl.exactfield import make_cyclotomic_field, make_prime_field, smallest_prime_1_mod

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> (passed, seconds, budget, note), filled by test_acceptance
ACCEPTANCE_LINES: dict = {}


def all_fields(ls=(2, 3, 4, 5, 6)):
    out = []
    for l in ls:
        out.append(make_cyclotomic_field(l))
        out.append(make_prime_field(smallest_prime_1_mod(l), l))
    return out


@pytest.fixture(params=all_fields(), ids=str)
def ctx(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        passed, seconds, budget, note = ACCEPTANCE_LINES[k]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {k:>2}: {status}  {seconds:7.2f}s (budget {budget}s)  {note}")
