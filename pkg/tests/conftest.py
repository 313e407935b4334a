import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fingertap.geometry import derive_anchors
from fingertap.layout import builtin_layout

REFERENCE_FINGERTIPS = [(0.07, 0.20), (0.07, 0.35), (0.07, 0.50), (0.07, 0.65), (0.93, 0.45)]


@pytest.fixture(scope="session")
def single_layout():
    return builtin_layout("single_digit_fdi")


@pytest.fixture(scope="session")
def double_layout():
    return builtin_layout("double_digit_fdi")


@pytest.fixture(scope="session")
def fti_layout():
    return builtin_layout("fti")


@pytest.fixture(scope="session")
def reference_profile():
    return derive_anchors(REFERENCE_FINGERTIPS, edge_offset=0.05, radius=0.18)
