import pytest

from cyclicpf.paths import LabeledPath, PathTuple


@pytest.fixture
def fig_tuple() -> PathTuple:
    left = LabeledPath(4, 3, (-3, -1, -1), (3, 2, 4))
    right = LabeledPath(4, 3, (-2, -2, 1), (1, 2, 1))
    return PathTuple((left, right), (1, 0))
