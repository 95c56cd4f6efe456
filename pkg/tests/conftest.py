import os

import pytest
from hypothesis import HealthCheck, settings

from extremal import kernels

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=[b.BACKEND for b in kernels.backends()])
def backend(request):
    return next(b for b in kernels.backends() if b.BACKEND == request.param)
