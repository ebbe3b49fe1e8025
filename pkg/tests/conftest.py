import numpy as np
import pytest

from mobcover import EmbeddingSet, available_backends, normalize, use_backend


@pytest.fixture(params=available_backends())
def backend(request):
    """Run the decorated test once per built kernel backend."""
    with use_backend(request.param):
        yield request.param


def random_set(rng, n, d, normalized=False) -> EmbeddingSet:
    s = EmbeddingSet(rng.normal(size=(n, d)))
    return normalize(s) if normalized else s


def random_unit_rows(rng, n, d) -> np.ndarray:
    x = rng.normal(size=(n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)
