import pytest
import warnings

import numpy as np

from cosinelaw.models.report import SampleConfig
from cosinelaw.tools.numeric_tools import sample_domain
from cosinelaw.utils.exceptions import DomainWarning


@pytest.fixture(autouse=True)
def setup_test_env():
    """Fail loudly if a map is silently evaluated outside its domain"""
    with warnings.catch_warnings():
        warnings.simplefilter("error", DomainWarning)
        yield


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240601))


@pytest.fixture(scope="session")
def tau_points():
    """Angle cosines of 200 spherical triangles"""
    return sample_domain(SampleConfig(seed=7, count=200, domain="tau3", amplitude=0.5))


@pytest.fixture(scope="session")
def tetra_points():
    """Dihedral cosines of 100 spherical tetrahedra"""
    return sample_domain(
        SampleConfig(seed=11, count=100, domain="tetra_admissible", amplitude=0.3)
    )


@pytest.fixture
def symmetric_triangle():
    return np.full(3, -0.5)


@pytest.fixture
def symmetric_tetra():
    return np.full(6, -0.5)
