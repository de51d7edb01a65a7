import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nuccr.params import default_params
from nuccr.wavepacket import default_wavepacket_config

settings.register_profile(
    "suite", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


@pytest.fixture(scope="session")
def params():
    return default_params()


@pytest.fixture(scope="session")
def wp_config(params):
    return default_wavepacket_config(params)


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)


def random_pure_state(rng, n_qubits, labels):
    """Haar-ish random pure density matrix on n qubits."""
    from nuccr.qinfo import DensityMatrix
    d = 2 ** n_qubits
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v /= np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), labels)
