import numpy as np
import pytest

from spa.encoding import build_codebook
from spa.harness import generate_corpus
from spa.phonemes import default_inventory


@pytest.fixture(scope="session")
def inv():
    return default_inventory()


@pytest.fixture(scope="session")
def small_corpus(inv):
    return generate_corpus(300, 40, seed=123, inventory=inv)


@pytest.fixture(scope="session")
def codebook_23_10(inv):
    return build_codebook(inv.symbols(), 23, 10, rng=np.random.default_rng(11))


@pytest.fixture(scope="session")
def codebook_46_20(inv):
    return build_codebook(inv.symbols(), 46, 20, rng=np.random.default_rng(12))
