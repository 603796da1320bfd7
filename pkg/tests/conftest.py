import math

import numpy as np
import pytest

from ssli_lab.config import DEFAULT_TOLERANCES

SQRT3 = math.sqrt(3.0)
LN2 = math.log(2.0)
LN3 = math.log(3.0)


class FakeApp:
    """Collects the functions registered through ``app.tool``."""

    def __init__(self):
        self.tools = {}
        self.descriptions = {}

    def tool(self, description=None, **_):
        def register(fn):
            self.tools[fn.__name__] = fn
            self.descriptions[fn.__name__] = description
            return fn

        return register


@pytest.fixture
def tol():
    return DEFAULT_TOLERANCES


@pytest.fixture
def golden_pair():
    return np.array([1.0, 2.0, 3.0]), np.array([3.0 + SQRT3, 3.0 - SQRT3, 1.0])


@pytest.fixture
def fake_app():
    return FakeApp()


@pytest.fixture(autouse=True)
def _clean_tolerance_env(monkeypatch):
    import os

    for name in list(os.environ):
        if name.startswith("SSLI_LAB_TOL_"):
            monkeypatch.delenv(name, raising=False)


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_spd(rng, n):
    a = rng.normal(size=(n, n))
    return a @ a.T + n * np.eye(n)
