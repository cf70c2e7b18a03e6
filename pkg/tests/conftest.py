import random
import sys
from fractions import Fraction

import numpy as np
import pytest

from waringwidth.exactnum import ExactMatrix


def random_sl2q(rnd: random.Random, h: int = 6) -> ExactMatrix:
    """Random element of SL_2(Q) with small entries (a != 0, d solved from det = 1)."""
    while True:
        a = Fraction(rnd.randint(-h, h), rnd.randint(1, h))
        if a:
            break
    b = Fraction(rnd.randint(-h, h), rnd.randint(1, h))
    c = Fraction(rnd.randint(-h, h), rnd.randint(1, h))
    return ExactMatrix([[a, b], [c, (1 + b * c) / a]])


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def rnd():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
