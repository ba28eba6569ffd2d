import io
import json
import os
import sys
from contextlib import redirect_stderr

import numpy as np
import pytest
from pytest import MonkeyPatch

from dotenv import load_dotenv

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "src"))

from rmt_lab.config.settings import set_settings  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo acceptance runs")


@pytest.fixture(autouse=True)
def load_env_vars(monkeypatch: MonkeyPatch):
    load_dotenv()
    monkeypatch.delenv("RMT_LAB_THREADS", raising=False)
    set_settings(None)
    yield
    set_settings(None)


class ForcedRng:
    """
    Random stream stub returning forced draws.

    `normal`/`standard_normal` return the forced values in order as the
    draws themselves (zeros once exhausted); `gamma` returns `gammas`
    reshaped to the request.
    """

    def __init__(self, normals=(), gammas=None):
        self._normals = list(np.ravel(normals))
        self._gammas = gammas

    def _take(self, size):
        count = int(np.prod(size)) if size is not None else 1
        values = [self._normals.pop(0) if self._normals else 0.0 for _ in range(count)]
        out = np.asarray(values, dtype=float)
        return out.reshape(size) if size is not None else float(out[0])

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._take(size)

    def standard_normal(self, size=None):
        return self._take(size)

    def gamma(self, shape, scale=1.0, size=None):
        shape_arr = np.asarray(shape, dtype=float)
        target = size if size is not None else shape_arr.shape
        if self._gammas is None:
            return np.broadcast_to(shape_arr * scale, target).astype(float)
        return np.asarray(self._gammas, dtype=float).reshape(target)

    def uniform(self, low=0.0, high=1.0, size=None):
        return np.full(size if size is not None else (), 0.5 * (low + high))

    def permutation(self, x):
        return np.arange(x) if isinstance(x, (int, np.integer)) else np.asarray(x)


class TestHelpers:
    @staticmethod
    def forced_rng(normals=(), gammas=None) -> ForcedRng:
        return ForcedRng(normals, gammas)

    @staticmethod
    def run_cli(args: list[str]) -> tuple[int, str]:
        """
        Runs the command line to completion.
        Returns the exit code and whatever was written to stderr.
        """
        from rmt_lab.cli.main import main

        captured = io.StringIO()
        with redirect_stderr(captured):
            code = main(args)
        return code, captured.getvalue().strip()

    @staticmethod
    def read_error(stderr: str) -> dict:
        return json.loads(stderr.strip().splitlines()[-1])

    @staticmethod
    def read_csv_header(path) -> list[str]:
        with open(path, "r", encoding="utf-8") as handle:
            return [line.rstrip("\n") for line in handle if line.startswith("#")]


@pytest.fixture()
def test_helpers():
    return TestHelpers
