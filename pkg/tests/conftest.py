"""Shared fixtures: the three worked block examples.

A: p = 3, D = C_3, E = C_4 acting through inversion, Z = C_2.
B: p = 3, D = C_3 x C_3, E = C_4 inverting the first factor, Z = C_2.
C: p = 2, D = C_4 x C_4, E = C_3 acting freely on D - 1, Z = 1.
"""

import pytest

from blockext.groups import BlockContext, validate_block_spec

C4_PERM = (1, 2, 3, 0)
C3_PERM = (1, 2, 0)


@pytest.fixture(scope="session")
def example_a():
    G = validate_block_spec(3, [1], [(C4_PERM, [[-1]])])
    return BlockContext(G, phi_exponent=1)


@pytest.fixture(scope="session")
def example_b():
    G = validate_block_spec(3, [1, 1], [(C4_PERM, [[-1, 0], [0, 1]])])
    return BlockContext(G, phi_exponent=1)


@pytest.fixture(scope="session")
def example_c():
    G = validate_block_spec(2, [2, 2], [(C3_PERM, [[0, -1], [1, -1]])])
    return BlockContext(G, phi_exponent=1)
