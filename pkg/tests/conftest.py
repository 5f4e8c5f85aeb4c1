import numpy as np
import pytest

from sshjump.model import DissipatorKind, ModelSpec, build_hamiltonian
from sshjump.gaussian import ground_state


def make_spec(n_cells, v, w, gamma=1.0, alpha=1.0, dissipator=DissipatorKind.NONE):
    return ModelSpec(n_cells=n_cells, v=v, w=w, gamma=gamma, alpha=alpha,
                     dissipator=dissipator)


@pytest.fixture(scope="session")
def dimerized_gs_l4():
    """Fully dimerized topological ground state on 4 sites."""
    spec = make_spec(2, v=0.0, w=1.0)
    return ground_state(build_hamiltonian(spec))


@pytest.fixture(scope="session")
def dimerized_gs_l8():
    spec = make_spec(4, v=0.0, w=1.0)
    return ground_state(build_hamiltonian(spec))


def random_slater_g(n_sites, filling, seed):
    """Covariance of a random Slater determinant (complex orbitals)."""
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n_sites, n_sites)) + 1j * rng.normal(size=(n_sites, n_sites))
    q, _ = np.linalg.qr(m)
    occ = q[:, :filling]
    return occ.conj() @ occ.T  # G_ij = sum_k U*_jk ... Hermitian projector-like


def random_valid_g(n_sites, seed):
    """Random Hermitian matrix with spectrum in [0, 1] (mixed state)."""
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n_sites, n_sites)) + 1j * rng.normal(size=(n_sites, n_sites))
    q, _ = np.linalg.qr(m)
    return (q * rng.random(n_sites)) @ q.conj().T
