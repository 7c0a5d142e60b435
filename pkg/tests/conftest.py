import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from polysolve import Polynomial, PolySystem
from polysolve.poly import monomials_up_to

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

# acceptance results, filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        name, ok, secs, detail = ACCEPTANCE[k]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status}  {name}  ({secs:.2f}s)  {detail}")


def random_poly(rng, nvars, degree, lo=-9, hi=9, density=1.0):
    terms = {}
    for m in monomials_up_to(nvars, degree):
        if rng.random() <= density:
            c = int(rng.integers(lo, hi + 1))
            if c:
                terms[m] = Fraction(c)
    top = (degree,) + (0,) * (nvars - 1)
    terms[top] = Fraction(int(rng.integers(1, hi + 1)))
    return Polynomial(nvars, terms)


def random_dense_system(rng, degrees):
    n = len(degrees)
    return PolySystem(tuple(random_poly(rng, n, d) for d in degrees))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
