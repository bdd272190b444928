"""Random state generation for property suites and the validate verb."""

from __future__ import annotations

import numpy as np

from .hilbert import DensityMatrix, HilbertDims, PureState, symmetrize


def random_pure_state(dims: HilbertDims, rng: np.random.Generator) -> PureState:
    v = rng.standard_normal(dims.total) + 1j * rng.standard_normal(dims.total)
    return PureState(dims, v / np.linalg.norm(v))


def random_density_matrix(dims: HilbertDims, rng: np.random.Generator,
                          rank: int | None = None) -> DensityMatrix:
    """Mixes of Ginibre-sampled pure states with Dirichlet-ish weights."""
    N = dims.total
    rank = rank or N
    G = rng.standard_normal((N, rank)) + 1j * rng.standard_normal((N, rank))
    mat = G @ G.conj().T
    mat = symmetrize(mat, warn_above=np.inf)
    return DensityMatrix(dims, mat / np.trace(mat).real)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
