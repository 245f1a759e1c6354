import pytest

from ifsconj import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # pay JIT compilation up front so timed tests measure steady state
    _kernels.warmup()
