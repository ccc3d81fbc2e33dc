import random
from fractions import Fraction

import pytest

from hnchambers.zoo import hirzebruch, product_with_line

BUILTINS = [hirzebruch(n) for n in range(0, 6)] + [product_with_line(g) for g in (1, 2, 3)]

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    prev = _acceptance.get(crit, True)
    _acceptance[crit] = prev and report.passed


@pytest.fixture(autouse=True)
def _record_criterion(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        record_property("criterion", marker.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_acceptance, key=lambda c: (int(str(c).rstrip("abc")), str(c))):
        status = "PASS" if _acceptance[crit] else "FAIL"
        terminalreporter.write_line(f"criterion {crit}: {status}")


def rand_rational(rng, max_num=40, max_den=12, positive=True):
    num = rng.randint(1 if positive else -max_num, max_num)
    return Fraction(num, rng.randint(1, max_den))


def ample_hirzebruch(rng, n):
    """Random rational (x, y) with x > 0 and y > n x."""
    x = rand_rational(rng)
    return (x, n * x + rand_rational(rng))


def ample_point(rng, model):
    """Random ample class strictly between the two cone generators."""
    g1, g2 = model.cone.generators
    a, b = rand_rational(rng), rand_rational(rng)
    return tuple(a * u + b * v for u, v in zip(g1, g2))


@pytest.fixture
def rng():
    return random.Random(20081)
