import numpy as np
import pytest

from unicomp.linalg import LabeledState, SubsystemLayout


def rand_ket(layout, rng):
    layout = layout if isinstance(layout, SubsystemLayout) else SubsystemLayout.of(*layout)
    z = rng.standard_normal(layout.dim) + 1j * rng.standard_normal(layout.dim)
    return LabeledState(layout, vector=z / np.linalg.norm(z))


def rand_density(layout, rng, rank=None):
    layout = layout if isinstance(layout, SubsystemLayout) else SubsystemLayout.of(*layout)
    rank = layout.dim if rank is None else rank
    g = rng.standard_normal((layout.dim, rank)) + 1j * rng.standard_normal((layout.dim, rank))
    rho = g @ g.conj().T
    return LabeledState(layout, matrix=rho / np.trace(rho).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
