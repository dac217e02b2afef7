import numpy as np
import pytest

from kernelcover.kernels import FAMILIES, KernelSpec


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=FAMILIES)
def any_kernel(request):
    return KernelSpec(request.param, sigma=1.3)


@pytest.fixture
def gaussian():
    return KernelSpec("gaussian", 1.0)


_ACCEPTANCE = {}


@pytest.fixture
def accept():
    """Record one acceptance line; the terminal summary lists them all."""

    def record(num: int, ok: bool, msg: str):
        line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {msg}"
        _ACCEPTANCE[num] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for num in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[num])
