import numpy as np
import pytest

from readtrack.errormodels import ErrorVectorModel, synth_default_models
from readtrack.geometry import LayoutConfig, layout_document
from readtrack.scenarios import TEXT_A


@pytest.fixture(scope="session")
def models():
    return synth_default_models(7)


@pytest.fixture(scope="session")
def range_model(models):
    return models[0]


@pytest.fixture(scope="session")
def vec_model(models):
    return models[1]


@pytest.fixture(scope="session")
def layout_a():
    return layout_document(TEXT_A, LayoutConfig())


@pytest.fixture
def zero_noise_vec():
    """A vector model whose generating sigmas are zero (noiseless simulator)."""
    return ErrorVectorModel(
        samples=np.zeros((4, 2)), sigma_h_cm=0.0, sigma_v_cm=0.0
    )
