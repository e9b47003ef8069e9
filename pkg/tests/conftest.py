"""
Shared fixtures: small signatures, seeded generators and twisted modules
"""
import numpy as np
import pytest

from dirac_verify.core.graded_modules import TwistData, build_twisted_module
from dirac_verify.models import RealBranch, Signature

CAPACITY = 6


@pytest.fixture
def sig2():
    return Signature(p=2, q=0, epsilon=1)


@pytest.fixture(params=[1, -1], ids=["eps+", "eps-"])
def sig2_any(request):
    return Signature(p=2, q=0, epsilon=request.param)


@pytest.fixture
def sig4():
    return Signature(p=3, q=1, epsilon=1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def module2(sig2):
    """Grassmann module twisted by C^2 graded by diag(1, -1), gamma^cc = -gamma"""
    return build_twisted_module(sig2, TwistData(w=2, tau=np.diag([1.0, -1.0])), RealBranch.MINUS)


@pytest.fixture
def majorana2(sig2):
    return build_twisted_module(sig2, TwistData(w=1), RealBranch.MINUS)


def scenario_dict(**overrides):
    data = {"name": "unit", "p": 2, "q": 0, "epsilon": 1, "band": 1, "seed": 7, "checks": []}
    data.update(overrides)
    return data
