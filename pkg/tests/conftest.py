import os

import numpy as np
import pytest

from hdeform.exact.graded import GradedSpace
from hdeform.exact.scalars import ArtinRingSpec, FieldSpec
from hdeform.io.fixture import builtin_fixture_path, load_fixture

TEST_FILES = os.path.join(
    os.path.dirname(os.path.realpath(__file__)),
    'resources',
)


def resource(name: str) -> str:
    return os.path.join(TEST_FILES, name)


# common fixtures aimed to reduce the boilerplate in tests

@pytest.fixture
def resource_path():
    return resource


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def field():
    return FieldSpec()


@pytest.fixture
def one_dim():
    return load_fixture(builtin_fixture_path('one_dim'))


@pytest.fixture
def dual_numbers():
    return load_fixture(builtin_fixture_path('dual_numbers'))


@pytest.fixture
def matrices():
    return load_fixture(builtin_fixture_path('matrices_2x2'))


@pytest.fixture
def fix_def():
    return load_fixture(builtin_fixture_path('fix_def'))


@pytest.fixture
def exterior():
    """
    k[e]/e^2 with |e| = -1 and the pairing <1, 1> = 1
    """
    return load_fixture(resource('exterior.json'))


@pytest.fixture
def graded_space(field):
    return GradedSpace([('a', 0), ('b', 1), ('c', -1)], field)


@pytest.fixture
def dual_ring(field):
    """
    k[t]/t^2
    """
    return ArtinRingSpec('t_adic', field, order=1)


@pytest.fixture
def quartic_ring(field):
    """
    k[t]/t^4
    """
    return ArtinRingSpec('t_adic', field, order=3)
